//! Arithmetic selection engines.
//!
//! * [`zero_sum_window`]: among `q` integers some contiguous window sums to
//!   zero mod `q`.
//! * [`find_equal_residue_indices`]: pigeonhole on prefix sums of vectors,
//!   returning `k+1` indices whose prefix sums agree mod `q`.
//! * [`find_nonvanishing_shift`]: given `f` with no zero entry and
//!   `v_0..v_N` with `N ≥ 2^d`, indices `j < k` with `f + v_k − v_j`
//!   entrywise nonzero, by peeling one coordinate at a time through a
//!   bipartite forbidden-difference graph.
//!
//! All tie-breaking is by least index so the results are reproducible.

use crate::linkalg::LinkingVector;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no residue class of prefix sums reaches {needed} members")]
    NotFound { needed: usize },
}

/// `(a, b)` with `0 ≤ a < b ≤ q` and `Σ_{i=a+1}^{b} values_i ≡ 0 (mod q)`,
/// using only the first `q` values. Least `b` first, then least `a`.
pub fn zero_sum_window(values: &[BigInt], q: u64) -> Result<(usize, usize), SelectionError> {
    if q == 0 {
        return Err(SelectionError::InvalidArgument("modulus must be positive".into()));
    }
    let qlen = usize::try_from(q).map_err(|_| SelectionError::InvalidArgument("modulus too large".into()))?;
    if values.len() < qlen {
        return Err(SelectionError::InvalidArgument(format!(
            "need at least q = {q} values, got {}",
            values.len()
        )));
    }
    let qb = BigInt::from(q);
    let mut first_seen: HashMap<BigInt, usize> = HashMap::new();
    let mut prefix = BigInt::zero();
    first_seen.insert(BigInt::zero(), 0);
    for (b, v) in values[..qlen].iter().enumerate() {
        prefix += v;
        let r = prefix.mod_floor(&qb);
        if let Some(&a) = first_seen.get(&r) {
            return Ok((a, b + 1));
        }
        first_seen.insert(r, b + 1);
    }
    unreachable!("q + 1 prefix sums take at most q residues")
}

/// Indices `β_0 < β_1 < … < β_k` into the prefix sums `s_0 = 0, s_α = Σ_{i≤α} v_i`
/// sharing one residue class mod `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSelection {
    pub base: usize,
    pub offsets: Vec<usize>,
    /// The common residue vector.
    pub residue: Vec<u64>,
}

impl WindowSelection {
    pub fn indices(&self) -> Vec<usize> {
        std::iter::once(self.base).chain(self.offsets.iter().copied()).collect()
    }
}

/// Prefix sums `s_0..s_M` of `v_1..v_M`; `s_0` is the zero vector of length `dim`.
pub fn prefix_sums(vectors: &[LinkingVector], dim: usize) -> Vec<LinkingVector> {
    let mut out = Vec::with_capacity(vectors.len() + 1);
    let mut acc = LinkingVector::zeros(dim);
    out.push(acc.clone());
    for v in vectors {
        acc.add_assign(v);
        out.push(acc.clone());
    }
    out
}

/// Vectors `v_1..v_M` in `Z^d` with prefix sums `s_0 = 0, s_α = Σ_{i≤α} v_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixFamily {
    dim: usize,
    vectors: Vec<LinkingVector>,
}

impl PrefixFamily {
    pub fn new(dim: usize, vectors: Vec<LinkingVector>) -> Result<Self, SelectionError> {
        if dim == 0 {
            return Err(SelectionError::InvalidArgument("dimension must be positive".into()));
        }
        if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
            return Err(SelectionError::InvalidArgument(format!(
                "vector of length {} in a family of dimension {dim}",
                bad.len()
            )));
        }
        Ok(PrefixFamily { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[LinkingVector] {
        &self.vectors
    }

    /// `M`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `s_0..s_M`.
    pub fn prefix_sums(&self) -> Vec<LinkingVector> {
        prefix_sums(&self.vectors, self.dim)
    }

    /// `s_b − s_a = v_{a+1} + … + v_b`.
    pub fn window_sum(&self, a: usize, b: usize) -> Option<LinkingVector> {
        (a <= b && b <= self.len()).then(|| {
            self.vectors[a..b]
                .iter()
                .fold(LinkingVector::zeros(self.dim), |acc, v| acc.add(v))
        })
    }

    pub fn equal_residue_indices(&self, q: u64, count: usize) -> Result<WindowSelection, SelectionError> {
        find_equal_residue_indices(&self.vectors, self.dim, q, count)
    }
}

/// Scans `s_0, s_1, …` bucketing by residue vector mod `q` and returns the
/// first `count` members of the first class to reach `count` members.
/// Guaranteed to succeed when `M + 1 > (count − 1)·q^d`.
pub fn find_equal_residue_indices(
    vectors: &[LinkingVector],
    dim: usize,
    q: u64,
    count: usize,
) -> Result<WindowSelection, SelectionError> {
    if q == 0 || count == 0 {
        return Err(SelectionError::InvalidArgument(
            "modulus and count must be positive".into(),
        ));
    }
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(SelectionError::InvalidArgument(format!(
            "vector of length {} in a family of dimension {dim}",
            bad.len()
        )));
    }
    let mut buckets: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    let mut acc = LinkingVector::zeros(dim);
    for alpha in 0..=vectors.len() {
        if alpha > 0 {
            acc.add_assign(&vectors[alpha - 1]);
        }
        let residue = acc.residues(q);
        let bucket = buckets.entry(residue.clone()).or_default();
        bucket.push(alpha);
        if bucket.len() == count {
            return Ok(WindowSelection {
                base: bucket[0],
                offsets: bucket[1..].to_vec(),
                residue,
            });
        }
    }
    Err(SelectionError::NotFound { needed: count })
}

/// Edges `(j, k)`, `j < k` positions, where `values[k] − values[j] = forbidden`.
pub fn forbidden_difference_edges(values: &[BigInt], forbidden: &BigInt) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for k in 0..values.len() {
        for j in 0..k {
            if &(&values[k] - &values[j]) == forbidden {
                edges.push((j, k));
            }
        }
    }
    edges
}

/// Breadth-first 2-colouring, each component rooted at its smallest vertex
/// with colour 0. `None` if some edge is monochromatic.
pub fn two_colour(vertex_count: usize, edges: &[(usize, usize)]) -> Option<Vec<u8>> {
    let mut adj = vec![Vec::new(); vertex_count];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut colour: Vec<Option<u8>> = vec![None; vertex_count];
    for root in 0..vertex_count {
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].expect("queued vertices are coloured");
            for &w in &adj[u] {
                match colour[w] {
                    None => {
                        colour[w] = Some(1 - cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return None,
                    _ => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(|c| c.expect("all vertices coloured")).collect())
}

/// Records of the coordinate-peeling recursion, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ShiftCertificate {
    /// For each peeled coordinate (highest first), the surviving indices.
    pub kept: Vec<Vec<usize>>,
}

/// `(j, k)` with `0 ≤ j < k ≤ N` and `f + v_k − v_j` entrywise nonzero.
pub fn find_nonvanishing_shift(
    f: &LinkingVector,
    v: &[LinkingVector],
) -> Result<(usize, usize), SelectionError> {
    find_nonvanishing_shift_certified(f, v).map(|(pair, _)| pair)
}

/// As [`find_nonvanishing_shift`], also returning the index sets kept after
/// each coordinate was peeled.
pub fn find_nonvanishing_shift_certified(
    f: &LinkingVector,
    v: &[LinkingVector],
) -> Result<((usize, usize), ShiftCertificate), SelectionError> {
    let d = f.len();
    if !f.is_nonvanishing() {
        return Err(SelectionError::InvalidArgument("f has a zero entry".into()));
    }
    if let Some(bad) = v.iter().find(|x| x.len() != d) {
        return Err(SelectionError::InvalidArgument(format!(
            "vector of length {} against f of length {d}",
            bad.len()
        )));
    }
    let needed = 1usize
        .checked_shl(d as u32)
        .and_then(|p| p.checked_add(1))
        .ok_or_else(|| SelectionError::InvalidArgument("dimension too large".into()))?;
    if v.len() < needed {
        return Err(SelectionError::InvalidArgument(format!(
            "need N ≥ 2^{d}, i.e. at least {needed} vectors, got {}",
            v.len()
        )));
    }
    let mut cert = ShiftCertificate::default();
    let mut indices: Vec<usize> = (0..v.len()).collect();
    for coord in (1..d).rev() {
        let values: Vec<BigInt> = indices.iter().map(|&i| v[i].0[coord].clone()).collect();
        let forbidden = -&f.0[coord];
        let edges = forbidden_difference_edges(&values, &forbidden);
        let colour = two_colour(values.len(), &edges)
            .expect("forbidden-difference graphs are bipartite because f is nonzero");
        let zeros = colour.iter().filter(|&&c| c == 0).count();
        // Ties go to colour 0, which holds the smallest vertex.
        let keep = if zeros * 2 >= colour.len() { 0 } else { 1 };
        indices = indices
            .iter()
            .zip(&colour)
            .filter(|(_, &c)| c == keep)
            .map(|(&i, _)| i)
            .collect();
        assert!(
            indices.len() > 1usize << coord,
            "larger colour class keeps at least 2^{coord} + 1 indices"
        );
        cert.kept.push(indices.clone());
    }
    let pair = if d == 0 {
        (indices[0], indices[1])
    } else {
        let entry = |j: usize, k: usize| &f.0[0] + &v[k].0[0] - &v[j].0[0];
        let (i0, i1, i2) = (indices[0], indices[1], indices[2]);
        if !entry(i0, i1).is_zero() {
            (i0, i1)
        } else if !entry(i1, i2).is_zero() {
            (i1, i2)
        } else {
            // Both vanish, so f + v_{i2} − v_{i0} = −f ≠ 0.
            (i0, i2)
        }
    };
    let shifted = f.add(&v[pair.1]).sub(&v[pair.0]);
    assert!(shifted.is_nonvanishing(), "selected shift must be nonvanishing");
    Ok((pair, cert))
}

/// Every `(j, k)`, `j < k`, with `f + v_k − v_j` entrywise nonzero.
pub fn brute_force_shift_oracle(f: &LinkingVector, v: &[LinkingVector]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..v.len() {
        for j in 0..k {
            let ok = (0..f.len()).all(|c| !(&f.0[c] + &v[k].0[c] - &v[j].0[c]).is_zero());
            if ok {
                out.push((j, k));
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_family() {
        let f = PrefixFamily::new(1, vec![LinkingVector::from_i64s(&[1]), LinkingVector::from_i64s(&[1])]).unwrap();
        assert_eq!(f.prefix_sums().last().unwrap(), &LinkingVector::from_i64s(&[2]));
        assert_eq!(f.window_sum(0, 2).unwrap(), LinkingVector::from_i64s(&[2]));
        assert_eq!(f.window_sum(2, 1), None);
        let w = f.equal_residue_indices(2, 2).unwrap();
        assert_eq!((w.base, w.offsets), (0, vec![2]));
        assert!(PrefixFamily::new(0, vec![]).is_err());
        assert!(PrefixFamily::new(2, vec![LinkingVector::from_i64s(&[1])]).is_err());
    }
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn vecs(v: &[&[i64]]) -> Vec<LinkingVector> {
        v.iter().map(|x| LinkingVector::from_i64s(x)).collect()
    }

    #[test]
    fn zero_sum_window_examples() {
        assert_eq!(zero_sum_window(&ints(&[1, 1, 1]), 3).unwrap(), (0, 3));
        assert_eq!(zero_sum_window(&ints(&[1, 2, 4]), 3).unwrap(), (0, 2));
        assert_eq!(zero_sum_window(&ints(&[5]), 1).unwrap(), (0, 1));
        assert_eq!(zero_sum_window(&ints(&[2, 3, 3, 9]), 3).unwrap(), (1, 2));
        assert!(zero_sum_window(&ints(&[1, 1]), 3).is_err());
        assert!(zero_sum_window(&ints(&[1]), 0).is_err());
    }

    #[test]
    fn equal_residue_examples() {
        let s = find_equal_residue_indices(&vecs(&[&[1], &[1]]), 1, 2, 2).unwrap();
        assert_eq!(s.indices(), vec![0, 2]);
        let s = find_equal_residue_indices(&vecs(&[&[4, 9], &[-1, 2], &[7, 7]]), 2, 1, 4).unwrap();
        assert_eq!(s.indices(), vec![0, 1, 2, 3]);
        let s = find_equal_residue_indices(&vecs(&[&[3], &[3], &[3], &[1]]), 1, 3, 3).unwrap();
        assert_eq!(s.indices(), vec![0, 1, 2]);
        assert_eq!(s.residue, vec![0]);
    }

    #[test]
    fn equal_residue_not_found() {
        // Prefix residues 0,1 mod 2: no class of size 2.
        assert_eq!(
            find_equal_residue_indices(&vecs(&[&[1]]), 1, 2, 2),
            Err(SelectionError::NotFound { needed: 2 })
        );
        // Precondition violated but a class still fills up: not an error.
        assert!(find_equal_residue_indices(&vecs(&[&[2]]), 1, 2, 2).is_ok());
    }

    #[test]
    fn shift_examples() {
        let f = LinkingVector::from_i64s(&[1]);
        assert_eq!(find_nonvanishing_shift(&f, &vecs(&[&[0], &[0], &[0]])).unwrap(), (0, 1));
        let f = LinkingVector::from_i64s(&[2]);
        assert_eq!(find_nonvanishing_shift(&f, &vecs(&[&[0], &[-2], &[-4]])).unwrap(), (0, 2));
        let f = LinkingVector::from_i64s(&[1, 1]);
        let v: Vec<LinkingVector> = (0..5).map(|i| LinkingVector::from_i64s(&[-i, 0])).collect();
        assert_eq!(find_nonvanishing_shift(&f, &v).unwrap(), (0, 2));
    }

    #[test]
    fn shift_preconditions() {
        let f = LinkingVector::from_i64s(&[0]);
        assert!(find_nonvanishing_shift(&f, &vecs(&[&[0], &[0], &[0]])).is_err());
        let f = LinkingVector::from_i64s(&[1, 1]);
        assert!(find_nonvanishing_shift(&f, &vecs(&[&[0, 0], &[0, 0], &[0, 0], &[0, 0]])).is_err());
        assert!(find_nonvanishing_shift(&f, &vecs(&[&[0], &[0], &[0], &[0], &[0]])).is_err());
    }

    #[test]
    fn oracle_examples() {
        let f = LinkingVector::from_i64s(&[2]);
        assert_eq!(brute_force_shift_oracle(&f, &vecs(&[&[0], &[-2], &[-4]])), vec![(0, 2)]);
        let f = LinkingVector::from_i64s(&[1]);
        assert!(brute_force_shift_oracle(&f, &vecs(&[&[0], &[-1]])).is_empty());
        assert_eq!(brute_force_shift_oracle(&f, &vecs(&[&[0], &[0]])), vec![(0, 1)]);
        let f = LinkingVector::from_i64s(&[1, 1]);
        let v: Vec<LinkingVector> = (0..5).map(|i| LinkingVector::from_i64s(&[-i, 0])).collect();
        let all = brute_force_shift_oracle(&f, &v);
        assert!(all.contains(&(0, 2)));
        assert!(!all.contains(&(0, 1)));
    }

    #[test]
    fn two_colouring_detects_odd_cycles() {
        assert_eq!(two_colour(3, &[(0, 1), (1, 2)]), Some(vec![0, 1, 0]));
        assert_eq!(two_colour(3, &[(0, 1), (1, 2), (0, 2)]), None);
        assert_eq!(two_colour(4, &[(2, 3)]), Some(vec![0, 0, 0, 1]));
    }

    fn arb_shift_instance() -> impl Strategy<Value = (LinkingVector, Vec<LinkingVector>)> {
        (1usize..=4).prop_flat_map(|d| {
            let n = (1usize << d) + 1;
            (
                proptest::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], d),
                proptest::collection::vec(proptest::collection::vec(-5i64..=5, d), n),
            )
                .prop_map(|(f, v)| {
                    (
                        LinkingVector::from_i64s(&f),
                        v.iter().map(|x| LinkingVector::from_i64s(x)).collect(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn shift_is_confirmed_by_oracle((f, v) in arb_shift_instance()) {
            let pair = find_nonvanishing_shift(&f, &v).unwrap();
            prop_assert!(brute_force_shift_oracle(&f, &v).contains(&pair));
        }

        #[test]
        fn forbidden_graphs_are_bipartite(
            f in prop_oneof![-5i64..=-1, 1i64..=5],
            vals in proptest::collection::vec(-5i64..=5, 2..20),
        ) {
            let values = ints(&vals);
            let edges = forbidden_difference_edges(&values, &BigInt::from(-f));
            prop_assert!(two_colour(values.len(), &edges).is_some());
        }

        #[test]
        fn zero_sum_window_always_exists(q in 1u64..8, vals in proptest::collection::vec(-50i64..50, 8)) {
            let (a, b) = zero_sum_window(&ints(&vals), q).unwrap();
            prop_assert!(a < b && b as u64 <= q);
            let s: i64 = vals[a..b].iter().sum();
            prop_assert_eq!(s.rem_euclid(q as i64), 0);
        }

        #[test]
        fn equal_residue_never_fails_above_bound(
            d in 1usize..=3, q in 1u64..=3, k in 1usize..=3, seed in proptest::collection::vec(-9i64..9, 200),
        ) {
            let m = k * (q as usize).pow(d as u32);
            let vectors: Vec<LinkingVector> = (0..m)
                .map(|i| LinkingVector::from_i64s(&(0..d).map(|c| seed[(i * d + c) % seed.len()]).collect::<Vec<_>>()))
                .collect();
            let sel = find_equal_residue_indices(&vectors, d, q, k + 1).unwrap();
            let idx = sel.indices();
            prop_assert_eq!(idx.len(), k + 1);
            prop_assert!(idx.windows(2).all(|w| w[0] < w[1]) && *idx.last().unwrap() <= m);
            let sums = prefix_sums(&vectors, d);
            for &i in &idx {
                prop_assert_eq!(sums[i].residues(q), sel.residue.clone());
            }
        }
    }
}
