use super::{OrientedFacet, Simplex, SimplicialComplex, SimplicialError};
use serde::{Deserialize, Serialize};

/// A triangulated disc with an ordering `Δ_1..Δ_ℓ` of its facets.
///
/// Construction only checks that `order` is a permutation of the facets; use
/// [`validate_path`] to check the path conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPath")]
pub struct NPath {
    #[serde(flatten)]
    complex: SimplicialComplex,
    order: Vec<usize>,
}

#[derive(Deserialize)]
struct RawPath {
    #[serde(flatten)]
    complex: SimplicialComplex,
    order: Vec<usize>,
}

impl TryFrom<RawPath> for NPath {
    type Error = SimplicialError;
    fn try_from(raw: RawPath) -> Result<Self, Self::Error> {
        NPath::new(raw.complex, raw.order)
    }
}

impl NPath {
    pub fn new(complex: SimplicialComplex, order: Vec<usize>) -> Result<Self, SimplicialError> {
        let mut seen = vec![false; complex.facet_count()];
        if order.len() != seen.len() {
            return Err(SimplicialError::InvalidArgument(format!(
                "order has {} entries for {} facets",
                order.len(),
                seen.len()
            )));
        }
        for &i in &order {
            match seen.get_mut(i) {
                Some(s) if !*s => *s = true,
                _ => {
                    return Err(SimplicialError::InvalidArgument(format!(
                        "order is not a permutation (entry {i})"
                    )))
                }
            }
        }
        Ok(NPath { complex, order })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn n(&self) -> usize {
        self.complex.n()
    }

    /// `Δ_i`, one-based.
    pub fn step(&self, i: usize) -> Option<&OrientedFacet> {
        i.checked_sub(1)
            .and_then(|k| self.order.get(k))
            .map(|&idx| &self.complex.facets()[idx])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("path serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, SimplicialError> {
        serde_json::from_str(s).map_err(|e| SimplicialError::InvalidArgument(e.to_string()))
    }
}

/// The stacked `n`-path of length `len` on vertices `0..len+n`:
/// `Δ_i = [i-1, …, i-1+n]`, consecutive facets glued along `n` shared
/// vertices, orientations chosen coherently starting from `+1`.
pub fn build_path(n: usize, len: usize) -> Result<NPath, SimplicialError> {
    if n == 0 || len == 0 {
        return Err(SimplicialError::InvalidArgument(format!(
            "build_path needs n ≥ 1 and length ≥ 1, got n={n}, length={len}"
        )));
    }
    // The face shared by Δ_i and Δ_{i+1} sits at position 0 of Δ_i and
    // position n of Δ_{i+1}; opposite induced signs force s_{i+1} = (-1)^{n+1} s_i.
    let step_sign: i8 = if n % 2 == 0 { -1 } else { 1 };
    let mut sign = 1i8;
    let mut facets = Vec::with_capacity(len);
    for i in 0..len {
        let start = i as u32;
        let simplex = Simplex::new((start..=start + n as u32).collect())?;
        facets.push(OrientedFacet { simplex, sign });
        sign *= step_sign;
    }
    NPath::new(SimplicialComplex::new(n, facets)?, (0..len).collect())
}

/// `D_{ab} = Δ_a ∪ … ∪ Δ_b` with inherited orientations, `1 ≤ a ≤ b ≤ ℓ`.
pub fn path_subrange(p: &NPath, a: usize, b: usize) -> Result<SimplicialComplex, SimplicialError> {
    if a == 0 || a > b || b > p.len() {
        return Err(SimplicialError::InvalidArgument(format!(
            "subrange [{a}, {b}] outside 1..={}",
            p.len()
        )));
    }
    p.complex.subcomplex(&p.order[a - 1..b])
}

/// Checks the path conditions: consecutive facets share a codimension-one
/// face and every contiguous union `D_{ab}` passes
/// [`SimplicialComplex::is_disc_like`].
pub fn validate_path(p: &NPath) -> bool {
    let len = p.len();
    if len == 0 {
        return false;
    }
    let n = p.n();
    for w in p.order.windows(2) {
        let x = p.complex.facets()[w[0]].simplex.vertices();
        let y = p.complex.facets()[w[1]].simplex.vertices();
        let shared = x.iter().filter(|v| y.binary_search(v).is_ok()).count();
        if shared != n {
            return false;
        }
    }
    for a in 1..=len {
        for b in a..=len {
            match path_subrange(p, a, b) {
                Ok(c) if c.is_disc_like() => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn facet(v: &[u32], sign: i8) -> OrientedFacet {
        OrientedFacet::new(Simplex::new(v.to_vec()).unwrap(), sign).unwrap()
    }

    #[test]
    fn one_dimensional_path_of_length_three() {
        let p = build_path(1, 3).unwrap();
        assert_eq!(p.complex().vertex_count(), 4);
        assert_eq!(p.complex().facet_count(), 3);
        assert_eq!(p.complex().boundary_ridges().len(), 2);
        assert!(validate_path(&p));
    }

    #[test]
    fn two_triangles_sharing_an_edge() {
        let p = build_path(2, 2).unwrap();
        assert_eq!(p.complex().vertex_count(), 4);
        assert_eq!(p.complex().boundary_ridges().len(), 4);
        let f = p.complex().facets();
        assert_eq!(f[0].simplex.vertices(), &[0, 1, 2]);
        assert_eq!(f[1].simplex.vertices(), &[1, 2, 3]);
        assert_eq!((f[0].sign, f[1].sign), (1, -1));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(build_path(0, 3).is_err());
        assert!(build_path(2, 0).is_err());
    }

    #[test]
    fn subrange_examples() {
        let p = build_path(2, 5).unwrap();
        assert_eq!(path_subrange(&p, 1, 5).unwrap(), *p.complex());
        assert_eq!(path_subrange(&p, 3, 3).unwrap().facet_count(), 1);
        let q = build_path(1, 5).unwrap();
        let sub = path_subrange(&q, 2, 4).unwrap();
        assert_eq!(sub.facet_count(), 3);
        assert_eq!(sub.vertices().into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert!(path_subrange(&q, 0, 2).is_err());
        assert!(path_subrange(&q, 3, 2).is_err());
        assert!(path_subrange(&q, 2, 6).is_err());
    }

    #[test]
    fn triangles_sharing_only_a_vertex_are_not_a_path() {
        let c = SimplicialComplex::new(2, vec![facet(&[0, 1, 2], 1), facet(&[2, 3, 4], 1)]).unwrap();
        let p = NPath::new(c, vec![0, 1]).unwrap();
        assert!(!validate_path(&p));
    }

    #[test]
    fn annulus_ordering_is_not_a_path() {
        // Outer triangle 0,1,2 and inner triangle 3,4,5, six triangles around.
        let tris: [[u32; 3]; 6] = [[0, 1, 3], [1, 3, 4], [1, 2, 4], [2, 4, 5], [0, 2, 5], [0, 3, 5]];
        let signs = [1, -1, 1, -1, -1, 1];
        let facets = tris
            .iter()
            .zip(signs)
            .map(|(t, s)| facet(t, s))
            .collect::<Vec<_>>();
        let c = SimplicialComplex::new(2, facets).unwrap();
        assert!(c.is_coherently_oriented());
        assert_eq!(c.euler_characteristic(), 0);
        let p = NPath::new(c, (0..6).collect()).unwrap();
        assert!(!validate_path(&p));
        assert!(path_subrange(&p, 1, 4).unwrap().is_disc_like());
        // Closing up at vertex 0 already pinches the five-triangle prefix.
        assert!(!path_subrange(&p, 1, 5).unwrap().vertex_links_connected());
    }

    #[test]
    fn path_json_carries_order() {
        let p = build_path(1, 2).unwrap();
        let s = p.to_json();
        assert_eq!(
            s,
            r#"{"n":1,"facets":[{"v":[0,1],"sign":1},{"v":[1,2],"sign":1}],"order":[0,1]}"#
        );
        assert_eq!(NPath::from_json(&s).unwrap(), p);
        assert!(NPath::from_json(r#"{"n":1,"facets":[{"v":[0,1],"sign":1}],"order":[1]}"#).is_err());
    }
}
