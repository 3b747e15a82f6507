use super::supplier::segment_id;
use super::{arg, PipelineError, SupplierSpec};
use crate::linkalg::Chain;
use crate::selection::zero_sum_window;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyChoice {
    /// The prism sphere `S` alone.
    S,
    /// The connect sum `S + Y`.
    SPlusY,
}

/// Picks `S` when `lk(X, S) ≠ 0`, otherwise `S + Y`, whose linking number
/// `lk(X, S) + lk(X, Y)` is then `lk(X, Y) ≠ 0`.
pub fn enlarge_key(lk_xy: &BigInt, lk_xs: &BigInt) -> Result<(KeyChoice, BigInt), PipelineError> {
    if lk_xy.is_zero() {
        return arg("lk(X, Y) must be nonzero");
    }
    if !lk_xs.is_zero() {
        Ok((KeyChoice::S, lk_xs.clone()))
    } else {
        Ok((KeyChoice::SPlusY, lk_xs + lk_xy))
    }
}

/// [`enlarge_key`] with linking numbers mod 2.
pub fn enlarge_key_mod2(lk_xy: u8, lk_xs: u8) -> Result<(KeyChoice, u8), PipelineError> {
    if lk_xy % 2 == 0 {
        return arg("lk₂(X, Y) must be 1");
    }
    if lk_xs % 2 == 1 {
        Ok((KeyChoice::S, 1))
    } else {
        Ok((KeyChoice::SPlusY, 1))
    }
}

/// Spare vertices `(4q−1)(n+2)` per key against the `2d − (n+1)` needed to
/// enlarge it with a path of length `q` on `d = q + n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetCheck {
    pub spare: BigInt,
    pub needed: BigInt,
    pub margin: BigInt,
    pub holds: bool,
}

pub fn vertex_budget_check(q: u64, n: u64) -> Result<BudgetCheck, PipelineError> {
    if q == 0 || n == 0 {
        return arg("q and n must be positive");
    }
    let (q, n) = (BigInt::from(q), BigInt::from(n));
    let spare = (BigInt::from(4) * &q - 1) * (&n + 2);
    let needed = BigInt::from(2) * (&q + &n) - (&n + 1);
    let margin: BigInt = &spare - &needed;
    Ok(BudgetCheck {
        holds: !margin.is_negative(),
        spare,
        needed,
        margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoComponentKind {
    /// A single key already has linking number divisible by `q`.
    SingleKey,
    /// Some stitching sphere `F_i` links `R` with a nonzero multiple of `q`.
    StitchingSphere,
    /// The connect sum of the window of keys and the stitching spheres.
    ConnectSum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoComponentOutput {
    pub kind: TwoComponentKind,
    /// The sphere paired with `R`, keys as `Z{i}` (one-based) with
    /// coefficient `±1` for their orientation.
    pub chain: Chain,
    #[serde(with = "crate::intser")]
    pub lk: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoComponentTrace {
    /// `-1` if every key was reversed to make the linking numbers positive.
    pub orientation: i8,
    pub window: (usize, usize),
    /// One per consecutive key pair `(Z_i, Z_{i+1})` in the window.
    pub stitches: Vec<SphereRecord>,
}

/// Stitching sphere `F_i`: segments `first..=last` and `lk(R, F_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereRecord {
    pub range: (usize, usize),
    #[serde(with = "crate::intser")]
    pub lk: BigInt,
}

fn key_id(i: usize) -> String {
    format!("Z{i}")
}

/// Turns a key ring with linking numbers `ring_lk` (all nonzero, one sign)
/// into a two-component link whose linking number is a nonzero multiple of `q`.
/// The supplier gives `lk(R, P_ℓ)` for the `q` segments between consecutive keys.
pub fn two_component_pipeline(
    ring_lk: &[BigInt],
    q: u64,
    supplier: &SupplierSpec,
) -> Result<(TwoComponentOutput, TwoComponentTrace), PipelineError> {
    if q == 0 {
        return arg("q must be positive");
    }
    if (ring_lk.len() as u64) < q {
        return arg(format!("need at least q = {q} keys, got {}", ring_lk.len()));
    }
    if ring_lk.iter().any(Zero::is_zero) {
        return arg("every key must link the ring");
    }
    let orientation: i8 = if ring_lk.iter().all(Signed::is_positive) {
        1
    } else if ring_lk.iter().all(Signed::is_negative) {
        -1
    } else {
        return arg("keys must all link the ring with the same sign");
    };
    supplier.validate()?;
    let keys: Vec<BigInt> = ring_lk.iter().map(|v| v * orientation).collect();
    let window = zero_sum_window(&keys, q)?;
    let (a, b) = window;
    let qb = BigInt::from(q);
    let mut trace = TwoComponentTrace {
        orientation,
        window,
        stitches: Vec::new(),
    };
    let mut key_chain = Chain::new();
    for i in a + 1..=b {
        key_chain.add_term(key_id(i), orientation);
    }
    if b == a + 1 {
        let out = TwoComponentOutput {
            kind: TwoComponentKind::SingleKey,
            chain: key_chain,
            lk: keys[a].clone(),
        };
        return Ok((out, trace));
    }
    let lambda = q as usize;
    let mut spheres = Vec::new();
    for i in a + 1..b {
        let (from, to) = (key_id(i), key_id(i + 1));
        let values: Vec<BigInt> = supplier
            .segments(&from, &to, lambda, 1)?
            .into_iter()
            .map(|v| v.0[0].clone())
            .collect();
        let (mu, nu) = zero_sum_window(&values, q)?;
        let lk_f: BigInt = values[mu..nu].iter().sum();
        debug_assert!(lk_f.mod_floor(&qb).is_zero());
        let mut f = Chain::new();
        for l in mu + 1..=nu {
            f.add_term(segment_id(&from, &to, l), 1);
        }
        trace.stitches.push(SphereRecord {
            range: (mu + 1, nu),
            lk: lk_f.clone(),
        });
        spheres.push((f, lk_f));
    }
    if let Some((f, lk)) = spheres.iter().find(|(_, lk)| !lk.is_zero()) {
        let out = TwoComponentOutput {
            kind: TwoComponentKind::StitchingSphere,
            chain: f.clone(),
            lk: lk.clone(),
        };
        return Ok((out, trace));
    }
    let chain = spheres.iter().fold(key_chain, |acc, (f, _)| acc.plus(f));
    let lk: BigInt = keys[a..b].iter().sum();
    Ok((
        TwoComponentOutput {
            kind: TwoComponentKind::ConnectSum,
            chain,
            lk,
        },
        trace,
    ))
}

/// Rebuilds the output from the recorded window and segment ranges,
/// computing the linking number directly from the chain.
pub fn replay_two_component(
    ring_lk: &[BigInt],
    q: u64,
    supplier: &SupplierSpec,
    trace: &TwoComponentTrace,
) -> Result<TwoComponentOutput, PipelineError> {
    let bad = |m: &str| Err(PipelineError::ReplayMismatch(m.into()));
    if q == 0 || ring_lk.iter().any(Zero::is_zero) || (ring_lk.len() as u64) < q {
        return arg("invalid key ring");
    }
    let o = trace.orientation;
    if (o != 1 && o != -1) || ring_lk.iter().any(|v| (v * o).is_negative()) {
        return bad("orientation");
    }
    let (a, b) = trace.window;
    if a >= b || b as u64 > q {
        return bad("window");
    }
    let qb = BigInt::from(q);
    let window_sum: BigInt = ring_lk[a..b].iter().map(|v| v * o).sum();
    if !window_sum.mod_floor(&qb).is_zero() {
        return bad("window sum");
    }
    let mut key_chain = Chain::new();
    for i in a + 1..=b {
        key_chain.add_term(key_id(i), o);
    }
    if b == a + 1 {
        if !trace.stitches.is_empty() {
            return bad("stitches on a single key");
        }
        return Ok(TwoComponentOutput {
            kind: TwoComponentKind::SingleKey,
            chain: key_chain,
            lk: window_sum,
        });
    }
    if trace.stitches.len() != b - a - 1 {
        return bad("stitch count");
    }
    let mut spheres = Vec::new();
    for (i, rec) in (a + 1..b).zip(&trace.stitches) {
        let (from, to) = (key_id(i), key_id(i + 1));
        let (lo, hi) = rec.range;
        if lo == 0 || lo > hi || hi as u64 > q {
            return bad("segment range");
        }
        let mut f = Chain::new();
        let mut lk = BigInt::zero();
        for l in lo..=hi {
            lk += &supplier.segment(&from, &to, l, 1)?.0[0];
            f.add_term(segment_id(&from, &to, l), 1);
        }
        if lk != rec.lk || !lk.mod_floor(&qb).is_zero() {
            return bad("stitching sphere linking number");
        }
        spheres.push((f, lk));
    }
    if let Some((f, lk)) = spheres.iter().find(|(_, lk)| !lk.is_zero()) {
        return Ok(TwoComponentOutput {
            kind: TwoComponentKind::StitchingSphere,
            chain: f.clone(),
            lk: lk.clone(),
        });
    }
    Ok(TwoComponentOutput {
        kind: TwoComponentKind::ConnectSum,
        chain: spheres.iter().fold(key_chain, |acc, (f, _)| acc.plus(f)),
        lk: window_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn enlarge_examples() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(enlarge_key(&b(3), &b(0)).unwrap(), (KeyChoice::SPlusY, b(3)));
        assert_eq!(enlarge_key(&b(3), &b(-3)).unwrap(), (KeyChoice::S, b(-3)));
        assert_eq!(enlarge_key(&b(1), &b(5)).unwrap(), (KeyChoice::S, b(5)));
        assert!(enlarge_key(&b(0), &b(5)).is_err());
        assert_eq!(enlarge_key_mod2(1, 0).unwrap(), (KeyChoice::SPlusY, 1));
        assert_eq!(enlarge_key_mod2(1, 1).unwrap(), (KeyChoice::S, 1));
        assert!(enlarge_key_mod2(0, 1).is_err());
    }

    #[test]
    fn budget_examples() {
        let c = vertex_budget_check(1, 1).unwrap();
        assert_eq!((c.spare, c.needed, c.margin.clone()), (BigInt::from(9), BigInt::from(2), BigInt::from(7)));
        let c = vertex_budget_check(1, 2).unwrap();
        assert_eq!((c.spare, c.needed), (BigInt::from(12), BigInt::from(3)));
        for q in 1..=100 {
            for n in 1..=100 {
                assert!(vertex_budget_check(q, n).unwrap().holds);
            }
        }
        assert!(vertex_budget_check(0, 1).is_err());
    }

    #[test]
    fn two_component_examples() {
        let (out, _) = two_component_pipeline(&ints(&[1, 1, 2]), 2, &SupplierSpec::zero()).unwrap();
        assert_eq!(out.kind, TwoComponentKind::ConnectSum);
        assert_eq!(out.lk, BigInt::from(2));
        assert_eq!(out.chain.coefficient("Z1"), BigInt::from(1));
        assert_eq!(out.chain.coefficient("Z2"), BigInt::from(1));

        let (out, _) = two_component_pipeline(&ints(&[3]), 1, &SupplierSpec::zero()).unwrap();
        assert_eq!((out.kind, out.lk), (TwoComponentKind::SingleKey, BigInt::from(3)));

        let sup = SupplierSpec::constant(&[1]);
        let (out, trace) = two_component_pipeline(&ints(&[1, 1]), 2, &sup).unwrap();
        assert_eq!((out.kind, out.lk.clone()), (TwoComponentKind::StitchingSphere, BigInt::from(2)));
        assert_eq!(trace.stitches[0].range, (1, 2));
        assert_eq!(replay_two_component(&ints(&[1, 1]), 2, &sup, &trace).unwrap(), out);
    }

    #[test]
    fn negative_keys_are_reoriented() {
        let (out, trace) = two_component_pipeline(&ints(&[-1, -2, -3]), 3, &SupplierSpec::zero()).unwrap();
        assert_eq!(trace.orientation, -1);
        assert_eq!(out.lk, BigInt::from(3));
        assert_eq!(out.chain.coefficient("Z1"), BigInt::from(-1));
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(two_component_pipeline(&ints(&[1, -1]), 2, &SupplierSpec::zero()).is_err());
        assert!(two_component_pipeline(&ints(&[1, 0]), 2, &SupplierSpec::zero()).is_err());
        assert!(two_component_pipeline(&ints(&[1]), 2, &SupplierSpec::zero()).is_err());
    }

    proptest! {
        #[test]
        fn output_is_a_nonzero_multiple_of_q(
            q in 1u64..=5,
            keys in proptest::collection::vec(1i64..=20, 5),
            negative in any::<bool>(),
            seed in any::<u64>(),
        ) {
            let ring: Vec<BigInt> = keys.iter().map(|&k| BigInt::from(if negative { -k } else { k })).collect();
            let sup = SupplierSpec::seeded(seed, -6, 6);
            let (out, trace) = two_component_pipeline(&ring, q, &sup).unwrap();
            prop_assert!(!out.lk.is_zero());
            prop_assert!(out.lk.mod_floor(&BigInt::from(q)).is_zero());
            prop_assert_eq!(replay_two_component(&ring, q, &sup, &trace).unwrap(), out);
        }
    }
}
