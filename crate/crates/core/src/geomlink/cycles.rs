use super::{linking_number, GeomError, PLEmbedding, PolygonalCycle};
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Two vertex-disjoint cycles of `K_N` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclePair {
    pub c1: PolygonalCycle,
    pub c2: PolygonalCycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclePairLink {
    pub c1: PolygonalCycle,
    pub c2: PolygonalCycle,
    pub lk: i64,
}

/// All `k`-cycles on the given vertices in canonical form (least vertex
/// first, its smaller neighbour second), in lexicographic order.
pub fn cycles_on(vertices: &[u32], k: usize) -> Vec<PolygonalCycle> {
    let mut out = Vec::new();
    if k < 3 {
        return out;
    }
    for subset in vertices.iter().copied().sorted().combinations(k) {
        let first = subset[0];
        for rest in subset[1..].iter().copied().permutations(k - 1) {
            if rest[0] < rest[k - 2] {
                let mut v = Vec::with_capacity(k);
                v.push(first);
                v.extend(rest);
                out.push(PolygonalCycle::new(v).expect("distinct vertices form a cycle"));
            }
        }
    }
    out
}

/// Lazy enumeration behind [`enumerate_disjoint_cycle_pairs`]: the outer
/// cycles are listed up front, inner cycles are generated per outer cycle.
pub struct DisjointCyclePairs {
    n: u32,
    k2: usize,
    same_length: bool,
    outer: std::vec::IntoIter<PolygonalCycle>,
    current: Option<(PolygonalCycle, std::vec::IntoIter<PolygonalCycle>)>,
}

impl Iterator for DisjointCyclePairs {
    type Item = CyclePair;

    fn next(&mut self) -> Option<CyclePair> {
        loop {
            if let Some((c1, inner)) = &mut self.current {
                if let Some(c2) = inner.next() {
                    return Some(CyclePair { c1: c1.clone(), c2 });
                }
            }
            let c1 = self.outer.next()?;
            let rest: Vec<u32> = (0..self.n)
                .filter(|v| !c1.vertices().contains(v))
                .filter(|&v| !self.same_length || v > c1.vertices()[0])
                .collect();
            let inner = cycles_on(&rest, self.k2).into_iter();
            self.current = Some((c1, inner));
        }
    }
}

/// Unordered pairs of vertex-disjoint cycles of lengths `k1`, `k2` in `K_N`.
/// For equal lengths each pair appears once, with the cycle holding the
/// smaller least vertex first. Empty when `k1 + k2 > N`.
pub fn enumerate_disjoint_cycle_pairs(n: usize, k1: usize, k2: usize) -> Result<DisjointCyclePairs, GeomError> {
    if k1 < 3 || k2 < 3 {
        return Err(GeomError::InvalidArgument(format!(
            "cycle lengths must be at least 3, got {k1} and {k2}"
        )));
    }
    let n32 = u32::try_from(n).map_err(|_| GeomError::InvalidArgument("N too large".into()))?;
    let outer = if k1 + k2 > n {
        Vec::new()
    } else {
        cycles_on(&(0..n32).collect::<Vec<_>>(), k1)
    };
    Ok(DisjointCyclePairs {
        n: n32,
        k2,
        same_length: k1 == k2,
        outer: outer.into_iter(),
        current: None,
    })
}

/// Sum of linking numbers mod 2 over the ten disjoint triangle pairs of an
/// embedded `K_6`.
pub fn conway_gordon_invariant(e: &PLEmbedding) -> Result<u8, GeomError> {
    if e.N() != 6 {
        return Err(GeomError::InvalidArgument(format!("need N = 6, got {}", e.N())));
    }
    if !e.is_general_position() {
        return Err(GeomError::NotGeneralPosition("embedding is not generic".into()));
    }
    let pairs: Vec<CyclePair> = enumerate_disjoint_cycle_pairs(6, 3, 3)?.collect();
    let lks = pairs
        .par_iter()
        .map(|p| linking_number(e, &p.c1, &p.c2))
        .collect::<Result<Vec<i64>, GeomError>>()?;
    Ok((lks.iter().map(|x| x.rem_euclid(2)).sum::<i64>() % 2) as u8)
}

/// First disjoint cycle pair (lengths ascending, then canonical order) whose
/// linking number is a nonzero multiple of `q`, examining at most `budget`
/// pairs.
pub fn search_mod_q_link(e: &PLEmbedding, q: u64, budget: usize) -> Result<Option<CyclePairLink>, GeomError> {
    if q == 0 {
        return Err(GeomError::InvalidArgument("q must be at least 1".into()));
    }
    let n = e.N();
    let mut examined = 0usize;
    for k1 in 3..=n {
        for k2 in k1..=n.saturating_sub(k1) {
            for pair in enumerate_disjoint_cycle_pairs(n, k1, k2)? {
                if examined >= budget {
                    return Ok(None);
                }
                examined += 1;
                let lk = linking_number(e, &pair.c1, &pair.c2)?;
                if lk != 0 && lk.rem_euclid(q as i64) == 0 {
                    return Ok(Some(CyclePairLink {
                        c1: pair.c1,
                        c2: pair.c2,
                        lk,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomlink::random_general_position_embedding;

    #[test]
    fn pair_counts() {
        assert_eq!(enumerate_disjoint_cycle_pairs(6, 3, 3).unwrap().count(), 10);
        assert_eq!(enumerate_disjoint_cycle_pairs(6, 3, 4).unwrap().count(), 0);
        assert_eq!(enumerate_disjoint_cycle_pairs(7, 3, 3).unwrap().count(), 70);
        // 35 triangles, each against the 3 four-cycles of its complement.
        assert_eq!(enumerate_disjoint_cycle_pairs(7, 3, 4).unwrap().count(), 105);
        assert!(enumerate_disjoint_cycle_pairs(7, 2, 3).is_err());
    }

    #[test]
    fn cycles_are_canonical() {
        let c = cycles_on(&[0, 1, 2, 3], 4);
        let v: Vec<Vec<u32>> = c.iter().map(|c| c.vertices().to_vec()).collect();
        assert_eq!(v, vec![vec![0, 1, 2, 3], vec![0, 1, 3, 2], vec![0, 2, 1, 3]]);
        let first = enumerate_disjoint_cycle_pairs(6, 3, 3).unwrap().next().unwrap();
        assert_eq!(first.c1.vertices(), &[0, 1, 2]);
        assert_eq!(first.c2.vertices(), &[3, 4, 5]);
    }

    #[test]
    fn conway_gordon_on_seed_zero() {
        let e = random_general_position_embedding(6, 0).unwrap();
        assert_eq!(conway_gordon_invariant(&e).unwrap(), 1);
    }

    #[test]
    fn search_respects_budget() {
        let e = random_general_position_embedding(6, 0).unwrap();
        assert_eq!(search_mod_q_link(&e, 1, 0).unwrap(), None);
        let hit = search_mod_q_link(&e, 1, usize::MAX).unwrap().expect("K6 is intrinsically linked");
        assert_ne!(hit.lk, 0);
    }
}
