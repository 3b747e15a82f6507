use super::large::{copy_orientation, DiscCopy, DiscCopyPair};
use super::{
    build_path, check_sphere, OrientedFacet, Simplex, SimplicialComplex, SimplicialError,
    TriangulatedSphere, VertexId,
};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// A sphere produced by [`build_prism_sphere`] together with its two disc
/// copies and the number of facets outside both copies.
#[derive(Debug, Clone, Serialize)]
pub struct PrismSphere {
    pub sphere: TriangulatedSphere,
    pub copies: DiscCopyPair,
    pub extra_facets: usize,
    /// Length of the `(n+1)`-path whose boundary was connect-summed on, if any.
    pub appended_path_length: Option<usize>,
}

/// Accumulates an integer chain of oriented simplices.
fn add_boundary(chain: &mut BTreeMap<Simplex, i64>, simplex: &Simplex, sign: i64) {
    for (face, s) in simplex.boundary() {
        *chain.entry(face).or_insert(0) += sign * s as i64;
    }
}

fn chain_to_facets(chain: BTreeMap<Simplex, i64>) -> Result<Vec<OrientedFacet>, SimplicialError> {
    let mut facets = Vec::new();
    for (s, c) in chain {
        match c {
            0 => {}
            1 | -1 => facets.push(OrientedFacet {
                simplex: s,
                sign: c as i8,
            }),
            _ => {
                return Err(SimplicialError::InvalidArgument(format!(
                    "boundary coefficient {c} on {:?}; disc is not coherently oriented",
                    s.vertices()
                )))
            }
        }
    }
    Ok(facets)
}

/// Boundary of a coherently oriented pure complex, as an oriented complex one
/// dimension lower.
pub(crate) fn boundary_complex(c: &SimplicialComplex) -> Result<SimplicialComplex, SimplicialError> {
    let mut chain = BTreeMap::new();
    for f in c.facets() {
        add_boundary(&mut chain, &f.simplex, f.sign as i64);
    }
    SimplicialComplex::new(c.n() - 1, chain_to_facets(chain)?)
}

/// `∂(D×I)` with the staircase triangulation.
///
/// With `V(D) = {v_0 < … < v_{d-1}}`, `(v_i, 0)` is labelled `i` and
/// `(v_i, 1)` is labelled `d + i`, so every staircase simplex
/// `[(v_{i_0},0), …, (v_{i_j},0), (v_{i_j},1), …, (v_{i_k},1)]` is already in
/// sorted order. The prism simplices get sign `s·(-1)^j`, whose boundary is
/// `D×{1} − D×{0} − ∂D×I`: the top copy preserves orientation and the bottom
/// copy reverses it.
fn prism_boundary(d_complex: &SimplicialComplex) -> Result<(SimplicialComplex, DiscCopyPair), SimplicialError> {
    let verts: Vec<VertexId> = d_complex.vertices().into_iter().collect();
    let d = verts.len() as VertexId;
    let index: BTreeMap<VertexId, VertexId> =
        verts.iter().enumerate().map(|(i, &v)| (v, i as VertexId)).collect();
    let mut chain = BTreeMap::new();
    for f in d_complex.facets() {
        let idx: Vec<VertexId> = f.simplex.vertices().iter().map(|v| index[v]).collect();
        for j in 0..idx.len() {
            let mut staircase: Vec<VertexId> = idx[..=j].to_vec();
            staircase.extend(idx[j..].iter().map(|i| d + i));
            let prism = Simplex::new(staircase)?;
            let sign = f.sign as i64 * if j % 2 == 0 { 1 } else { -1 };
            add_boundary(&mut chain, &prism, sign);
        }
    }
    let complex = SimplicialComplex::new(d_complex.n(), chain_to_facets(chain)?)?;
    let bottom: BTreeMap<VertexId, VertexId> = index.clone();
    let top: BTreeMap<VertexId, VertexId> = index.iter().map(|(&v, &i)| (v, d + i)).collect();
    let bottom_sign = copy_orientation(&complex, d_complex, &bottom)
        .ok_or_else(|| SimplicialError::InvalidArgument("bottom copy missing".into()))?;
    let top_sign = copy_orientation(&complex, d_complex, &top)
        .ok_or_else(|| SimplicialError::InvalidArgument("top copy missing".into()))?;
    let pair = DiscCopyPair::from_copies(
        DiscCopy {
            map: bottom,
            sign: bottom_sign,
        },
        DiscCopy {
            map: top,
            sign: top_sign,
        },
    )?;
    Ok((complex, pair))
}

/// A triangulated sphere containing two disjoint oppositely oriented copies of
/// the disc `d_complex` and at least `m` further facets.
///
/// Starts from `∂(D×I)`, which has `n·t` facets outside the copies (`t` the
/// number of boundary ridges of `D`). When that is fewer than `m`, the
/// boundary of an `(n+1)`-path of length `⌈(m − nt + 1)/n⌉` is connect-summed
/// on along the lexicographically least facet of `∂D×I`.
pub fn build_prism_sphere(d_complex: &SimplicialComplex, m: usize) -> Result<PrismSphere, SimplicialError> {
    if !d_complex.is_disc_like() {
        return Err(SimplicialError::InvalidArgument(
            "prism construction needs a coherently oriented disc".into(),
        ));
    }
    let n = d_complex.n();
    let (complex, copies) = prism_boundary(d_complex)?;
    let in_copies: BTreeSet<Simplex> = copies.image_facets(d_complex);
    let nt = complex.facet_count() - in_copies.len();
    let sphere = TriangulatedSphere::new(complex)?;
    if nt >= m {
        return Ok(PrismSphere {
            sphere,
            copies,
            extra_facets: nt,
            appended_path_length: None,
        });
    }
    let len = (m - nt + 1).div_ceil(n);
    let extra_sphere = TriangulatedSphere::new(boundary_complex(build_path(n + 1, len)?.complex())?)?;
    let cut = sphere
        .complex()
        .facets()
        .iter()
        .map(|f| &f.simplex)
        .filter(|s| !in_copies.contains(*s))
        .min()
        .cloned()
        .expect("∂D×I is non-empty");
    let other = extra_sphere
        .complex()
        .facets()
        .iter()
        .map(|f| &f.simplex)
        .min()
        .cloned()
        .expect("sphere has facets");
    let glued = connect_sum_spheres(&sphere, &cut, &extra_sphere, &other)?;
    let extra_facets = glued.complex().facet_count() - in_copies.len();
    Ok(PrismSphere {
        sphere: glued,
        copies,
        extra_facets,
        appended_path_length: Some(len),
    })
}

/// Connect sum along `δ1 ∈ s1` and `δ2 ∈ s2`.
///
/// `s2` is relabelled by shifting every id by `max(s1) + 1`; the vertices of
/// `δ2` are then identified with those of `δ1` by the order-preserving
/// bijection. If the identification would glue with matching orientations,
/// `s2` is reversed first.
pub fn connect_sum_spheres(
    s1: &TriangulatedSphere,
    delta1: &Simplex,
    s2: &TriangulatedSphere,
    delta2: &Simplex,
) -> Result<TriangulatedSphere, SimplicialError> {
    if s1.n() != s2.n() {
        return Err(SimplicialError::DimensionMismatch {
            left: s1.n(),
            right: s2.n(),
        });
    }
    let i1 = s1
        .complex()
        .position(delta1)
        .ok_or_else(|| SimplicialError::MissingFacet(delta1.vertices().to_vec()))?;
    let i2 = s2
        .complex()
        .position(delta2)
        .ok_or_else(|| SimplicialError::MissingFacet(delta2.vertices().to_vec()))?;
    let shift = s1.complex().max_vertex().map_or(0, |m| m + 1);
    let ident: BTreeMap<VertexId, VertexId> = delta2
        .vertices()
        .iter()
        .copied()
        .zip(delta1.vertices().iter().copied())
        .collect();
    let relabel = |v: VertexId| ident.get(&v).copied().unwrap_or(v + shift);
    let sign1 = s1.complex().facets()[i1].sign;
    let sign2 = s2.complex().facets()[i2].sign;
    let flip: i8 = if sign2 == sign1 { -1 } else { 1 };

    let mut facets: Vec<OrientedFacet> = s1
        .complex()
        .facets()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != i1)
        .map(|(_, f)| f.clone())
        .collect();
    for (i, f) in s2.complex().facets().iter().enumerate() {
        if i == i2 {
            continue;
        }
        let (simplex, parity) =
            Simplex::from_unsorted(f.simplex.vertices().iter().map(|&v| relabel(v)).collect())?;
        facets.push(OrientedFacet {
            simplex,
            sign: f.sign * parity * flip,
        });
    }
    let complex = SimplicialComplex::new(s1.n(), facets)?;
    check_sphere(&complex)?;
    TriangulatedSphere::new(complex)
}

/// Vertex count of the sphere [`build_prism_sphere`] produces, from the disc's
/// vertex count `d`, dimension `n` and boundary ridge count `t`:
/// `2d` when `nt ≥ m`, otherwise `2d + L` with `L = ⌈(m − nt + 1)/n⌉`.
pub fn vsphere_upper_from_counts(d: &BigUint, n: usize, t: &BigUint, m: &BigUint) -> BigUint {
    let nt = t * BigUint::from(n);
    let base = d * 2u32;
    if &nt >= m {
        return base;
    }
    let deficit: BigUint = m - &nt + 1u32;
    let (q, r) = deficit.div_rem(&BigUint::from(n));
    let len = if r.is_zero() { q } else { q + 1u32 };
    base + len
}

/// Constructive upper bound on the vertex count of a sphere holding two
/// oppositely oriented copies of `D` plus `m` further facets: exactly the
/// vertex count of [`build_prism_sphere`]`(D, m)`.
pub fn vsphere_upper(d_complex: &SimplicialComplex, m: u64) -> u64 {
    let d = BigUint::from(d_complex.vertex_count());
    let t = BigUint::from(d_complex.boundary_ridges().len());
    vsphere_upper_from_counts(&d, d_complex.n(), &t, &BigUint::from(m))
        .to_u64()
        .expect("vertex bound fits in u64 for u64 inputs")
}
