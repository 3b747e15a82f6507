//! Facet-based oriented simplicial complexes.
//!
//! A complex is stored as its list of top-dimensional facets, each carrying a
//! `±1` orientation relative to the sorted order of its vertices. Lower faces
//! are implied. Induced orientations on codimension-one faces are computed by
//! position parity: dropping the vertex at position `i` of a facet with sign
//! `s` yields the face with sign `s·(-1)^i`.

mod large;
mod path;
mod prism;

pub use large::{is_d_large, DiscCopy, DiscCopyPair};
pub use path::{build_path, path_subrange, validate_path, NPath};
pub use prism::{
    build_prism_sphere, connect_sum_spheres, vsphere_upper, vsphere_upper_from_counts, PrismSphere,
};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a triangulated sphere: {0}")]
    NotASphere(String),
    #[error("facet {0:?} is not present in the complex")]
    MissingFacet(Vec<VertexId>),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// A simplex given by its strictly increasing vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self, SimplicialError> {
        if vertices.is_empty() {
            return Err(SimplicialError::InvalidArgument("empty simplex".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimplicialError::InvalidArgument(format!(
                "simplex vertices must be strictly increasing, got {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    /// Sorts an arbitrary vertex list, returning the simplex and the parity
    /// (`+1` even, `-1` odd) of the sorting permutation.
    pub fn from_unsorted(mut vertices: Vec<VertexId>) -> Result<(Self, i8), SimplicialError> {
        let parity = sort_with_parity(&mut vertices);
        Simplex::new(vertices).map(|s| (s, parity))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Codimension-one faces with their induced orientation sign.
    pub fn boundary(&self) -> impl Iterator<Item = (Simplex, i8)> + '_ {
        (0..self.0.len()).filter(|_| self.0.len() > 1).map(move |i| {
            let mut face = self.0.clone();
            face.remove(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            (Simplex(face), sign)
        })
    }

    /// All non-empty faces, including the simplex itself.
    pub fn all_faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let k = self.0.len();
        (1u32..(1u32 << k)).map(move |mask| {
            Simplex(
                (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }
}

impl TryFrom<Vec<VertexId>> for Simplex {
    type Error = SimplicialError;
    fn try_from(v: Vec<VertexId>) -> Result<Self, Self::Error> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<VertexId> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

/// Bubble sort counting transpositions; facets have at most a handful of
/// vertices.
pub(crate) fn sort_with_parity(v: &mut [VertexId]) -> i8 {
    let mut parity = 1i8;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                parity = -parity;
            }
        }
    }
    parity
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedFacet {
    #[serde(rename = "v")]
    pub simplex: Simplex,
    pub sign: i8,
}

impl OrientedFacet {
    pub fn new(simplex: Simplex, sign: i8) -> Result<Self, SimplicialError> {
        if sign != 1 && sign != -1 {
            return Err(SimplicialError::InvalidArgument(format!(
                "orientation sign must be ±1, got {sign}"
            )));
        }
        Ok(OrientedFacet { simplex, sign })
    }

    pub fn reversed(&self) -> Self {
        OrientedFacet {
            simplex: self.simplex.clone(),
            sign: -self.sign,
        }
    }
}

#[derive(Deserialize)]
struct RawComplex {
    n: usize,
    facets: Vec<OrientedFacet>,
}

/// A pure `n`-dimensional complex in facet representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct SimplicialComplex {
    n: usize,
    facets: Vec<OrientedFacet>,
}

impl TryFrom<RawComplex> for SimplicialComplex {
    type Error = SimplicialError;
    fn try_from(raw: RawComplex) -> Result<Self, Self::Error> {
        SimplicialComplex::new(raw.n, raw.facets)
    }
}

/// Incidence of a codimension-one face: the facets containing it, with the
/// orientation each induces.
#[derive(Debug, Clone, Default)]
pub struct RidgeIncidence {
    pub facets: Vec<(usize, i8)>,
}

impl SimplicialComplex {
    pub fn new(n: usize, facets: Vec<OrientedFacet>) -> Result<Self, SimplicialError> {
        if n == 0 {
            return Err(SimplicialError::InvalidArgument(
                "dimension must be positive".into(),
            ));
        }
        let mut seen = HashSet::with_capacity(facets.len());
        for f in &facets {
            if f.simplex.dim() != n {
                return Err(SimplicialError::InvalidArgument(format!(
                    "facet {:?} has dimension {}, expected {n}",
                    f.simplex.vertices(),
                    f.simplex.dim()
                )));
            }
            if f.sign != 1 && f.sign != -1 {
                return Err(SimplicialError::InvalidArgument(format!(
                    "facet {:?} has sign {}",
                    f.simplex.vertices(),
                    f.sign
                )));
            }
            if !seen.insert(&f.simplex) {
                return Err(SimplicialError::InvalidArgument(format!(
                    "duplicate facet {:?}",
                    f.simplex.vertices()
                )));
            }
        }
        Ok(SimplicialComplex { n, facets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[OrientedFacet] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.facets
            .iter()
            .flat_map(|f| f.simplex.vertices().iter().copied())
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.vertices().iter().next_back().copied()
    }

    pub fn position(&self, simplex: &Simplex) -> Option<usize> {
        self.facets.iter().position(|f| &f.simplex == simplex)
    }

    pub fn ridges(&self) -> BTreeMap<Simplex, RidgeIncidence> {
        let mut map: BTreeMap<Simplex, RidgeIncidence> = BTreeMap::new();
        for (idx, f) in self.facets.iter().enumerate() {
            for (face, s) in f.simplex.boundary() {
                map.entry(face).or_default().facets.push((idx, s * f.sign));
            }
        }
        map
    }

    /// Codimension-one faces lying in exactly one facet.
    pub fn boundary_ridges(&self) -> Vec<Simplex> {
        self.ridges()
            .into_iter()
            .filter(|(_, inc)| inc.facets.len() == 1)
            .map(|(r, _)| r)
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut faces: HashSet<Simplex> = HashSet::new();
        for f in &self.facets {
            faces.extend(f.simplex.all_faces());
        }
        faces
            .iter()
            .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Connected through shared codimension-one faces.
    pub fn is_strongly_connected(&self) -> bool {
        if self.facets.is_empty() {
            return false;
        }
        let ridges = self.ridges();
        let mut adj = vec![Vec::new(); self.facets.len()];
        for inc in ridges.values() {
            for a in &inc.facets {
                for b in &inc.facets {
                    if a.0 != b.0 {
                        adj[a.0].push(b.0);
                    }
                }
            }
        }
        bfs_reaches_all(&adj)
    }

    /// Every codimension-one face lies in at most two facets.
    pub fn is_pseudomanifold(&self) -> bool {
        self.ridges().values().all(|inc| inc.facets.len() <= 2)
    }

    /// Interior codimension-one faces receive opposite induced orientations.
    pub fn is_coherently_oriented(&self) -> bool {
        self.ridges()
            .values()
            .filter(|inc| inc.facets.len() == 2)
            .all(|inc| inc.facets[0].1 == -inc.facets[1].1)
    }

    /// For `n ≥ 2`, the link of every vertex is strongly connected. Rules out
    /// pinched vertices; vacuous in dimension one.
    pub fn vertex_links_connected(&self) -> bool {
        if self.n < 2 {
            return true;
        }
        for v in self.vertices() {
            let link: Vec<OrientedFacet> = self
                .facets
                .iter()
                .filter(|f| f.simplex.contains(v))
                .map(|f| OrientedFacet {
                    simplex: Simplex(
                        f.simplex
                            .vertices()
                            .iter()
                            .copied()
                            .filter(|&w| w != v)
                            .collect(),
                    ),
                    sign: 1,
                })
                .collect();
            let link = SimplicialComplex {
                n: self.n - 1,
                facets: link,
            };
            if !link.is_strongly_connected() {
                return false;
            }
        }
        true
    }

    /// The checkable necessary conditions for being an oriented disc:
    /// strongly connected, pseudomanifold with non-empty boundary, connected
    /// vertex links, coherent orientation and Euler characteristic one.
    /// These certify disc-ness for `n ≤ 2`.
    pub fn is_disc_like(&self) -> bool {
        self.is_strongly_connected()
            && self.is_pseudomanifold()
            && !self.boundary_ridges().is_empty()
            && self.vertex_links_connected()
            && self.is_coherently_oriented()
            && self.euler_characteristic() == 1
    }

    pub fn subcomplex(&self, indices: &[usize]) -> Result<SimplicialComplex, SimplicialError> {
        let facets = indices
            .iter()
            .map(|&i| {
                self.facets.get(i).cloned().ok_or_else(|| {
                    SimplicialError::InvalidArgument(format!("facet index {i} out of range"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SimplicialComplex::new(self.n, facets)
    }

    pub fn reversed(&self) -> SimplicialComplex {
        SimplicialComplex {
            n: self.n,
            facets: self.facets.iter().map(OrientedFacet::reversed).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("complex serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, SimplicialError> {
        serde_json::from_str(s).map_err(|e| SimplicialError::InvalidArgument(e.to_string()))
    }
}

fn bfs_reaches_all(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == adj.len()
}

/// A closed oriented triangulated `n`-sphere, as far as can be checked
/// combinatorially: every ridge in exactly two facets with opposite induced
/// orientations, strongly connected, and `χ = 1 + (-1)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TriangulatedSphere {
    complex: SimplicialComplex,
}

impl TriangulatedSphere {
    pub fn new(complex: SimplicialComplex) -> Result<Self, SimplicialError> {
        check_sphere(&complex)?;
        Ok(TriangulatedSphere { complex })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn n(&self) -> usize {
        self.complex.n
    }

    pub fn into_complex(self) -> SimplicialComplex {
        self.complex
    }

    /// Boundary of the `(n+1)`-simplex on the given vertices, oriented as the
    /// boundary of the positively oriented simplex.
    pub fn simplex_boundary(vertices: Vec<VertexId>) -> Result<Self, SimplicialError> {
        let big = Simplex::new(vertices)?;
        if big.dim() < 2 {
            return Err(SimplicialError::InvalidArgument(
                "need at least three vertices".into(),
            ));
        }
        let facets = big
            .boundary()
            .map(|(s, sign)| OrientedFacet { simplex: s, sign })
            .collect();
        TriangulatedSphere::new(SimplicialComplex::new(big.dim() - 1, facets)?)
    }
}

pub(crate) fn check_sphere(c: &SimplicialComplex) -> Result<(), SimplicialError> {
    let ridges = c.ridges();
    for (r, inc) in &ridges {
        if inc.facets.len() != 2 {
            return Err(SimplicialError::NotASphere(format!(
                "ridge {:?} lies in {} facets",
                r.vertices(),
                inc.facets.len()
            )));
        }
        if inc.facets[0].1 != -inc.facets[1].1 {
            return Err(SimplicialError::NotASphere(format!(
                "ridge {:?} receives equal induced orientations",
                r.vertices()
            )));
        }
    }
    if !c.is_strongly_connected() {
        return Err(SimplicialError::NotASphere("not connected".into()));
    }
    let expected = if c.n % 2 == 0 { 2 } else { 0 };
    let chi = c.euler_characteristic();
    if chi != expected {
        return Err(SimplicialError::NotASphere(format!(
            "Euler characteristic {chi}, expected {expected}"
        )));
    }
    Ok(())
}
