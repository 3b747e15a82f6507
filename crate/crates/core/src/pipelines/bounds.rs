//! Vertex-count bounds, evaluated exactly.

use super::{arg, PipelineError};
use crate::simplicial::{vsphere_upper_from_counts, SimplicialComplex};
use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Largest `r` accepted by [`bound_bipartite`]; `m` has about
/// `2^r · log2(4r)` bits.
pub const MAX_BIPARTITE_R: u64 = 16;

/// Vertices of `K_N` that force a two-component link whose linking number is
/// a nonzero multiple of `q`, for `n`-spheres.
pub fn bound_key_q(q: u64, n: u64) -> Result<BigUint, PipelineError> {
    if q == 0 || n == 0 {
        return arg("q and n must be positive");
    }
    let q2 = BigUint::from(q).pow(2);
    if n == 1 {
        return Ok(q2 * 24u32);
    }
    let n_big = BigUint::from(n);
    let four_q2 = q2 * 4u32;
    let ceil = (&four_q2 - 2u32).div_ceil(&n_big);
    Ok(&four_q2 * (n_big.clone() * 2u32 + 4u32) + &n_big + ceil + 1u32)
}

/// `4r²(2n+4) + vsphere(D, 4r²)` from the disc's vertex count `d`,
/// dimension `n` and boundary ridge count `t`.
pub fn bound_keydisc_from_counts(d: &BigUint, n: usize, t: &BigUint, r: u64) -> Result<BigUint, PipelineError> {
    if r == 0 || n == 0 {
        return arg("r and n must be positive");
    }
    let four_r2 = BigUint::from(r).pow(2) * 4u32;
    let vs = vsphere_upper_from_counts(d, n, t, &four_r2);
    Ok(four_r2 * BigUint::from(2 * n as u64 + 4) + vs)
}

/// Vertices of `K_N` that force a key ring whose ring is `D`-large.
pub fn bound_keydisc(disc: &SimplicialComplex, r: u64) -> Result<BigUint, PipelineError> {
    let (d, t) = disc_counts(disc);
    bound_keydisc_from_counts(&d, disc.n(), &t, r)
}

fn disc_counts(disc: &SimplicialComplex) -> (BigUint, BigUint) {
    (
        BigUint::from(disc.vertex_count()),
        BigUint::from(disc.boundary_ridges().len()),
    )
}

/// `m · keydisc(D, r) + r · vsphere(D, m)` with `m = (4r)^{2^r}/4`.
pub fn bound_bipartite(disc: &SimplicialComplex, r: u64) -> Result<BigUint, PipelineError> {
    if r == 0 {
        return arg("r must be positive");
    }
    if r > MAX_BIPARTITE_R {
        return Err(PipelineError::TooLarge(format!("r = {r} exceeds {MAX_BIPARTITE_R}")));
    }
    let m = super::bipartite::stage_size(r, 0);
    let (d, t) = disc_counts(disc);
    let keydisc = bound_keydisc_from_counts(&d, disc.n(), &t, r)?;
    let vs = vsphere_upper_from_counts(&d, disc.n(), &t, &m);
    Ok(&m * keydisc + BigUint::from(r) * vs)
}

/// Minimum sizes for the stitching construction with `S` and `T` targets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchMinimums {
    /// `2^S q^{S+T}` components `J_i`.
    pub a: BigUint,
    /// `3^S 2^T (S+T) q^{S+T}` components `L_i`.
    pub b: BigUint,
    /// `(2q)^{S+T}` segments per component.
    pub lambda: BigUint,
}

pub fn stitch_minimums(s: u32, t: u32, q: u64) -> Result<StitchMinimums, PipelineError> {
    if q == 0 {
        return arg("q must be positive");
    }
    let d = s + t;
    let qd = BigUint::from(q).pow(d);
    Ok(StitchMinimums {
        a: BigUint::from(2u32).pow(s) * &qd,
        b: BigUint::from(3u32).pow(s) * BigUint::from(2u32).pow(t) * d * &qd,
        lambda: BigUint::from(2 * q).pow(d),
    })
}
