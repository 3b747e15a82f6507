use super::{Simplex, SimplicialComplex, SimplicialError, TriangulatedSphere, VertexId};
use itertools::Itertools;
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// An injective simplicial map of a disc into a sphere, with `sign = +1` if it
/// preserves orientation and `-1` if it reverses it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscCopy {
    #[serde(serialize_with = "map_as_pairs")]
    pub map: BTreeMap<VertexId, VertexId>,
    pub sign: i8,
}

fn map_as_pairs<S: Serializer>(m: &BTreeMap<VertexId, VertexId>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|(a, b)| [*a, *b]))
}

impl DiscCopy {
    pub fn image(&self) -> BTreeSet<VertexId> {
        self.map.values().copied().collect()
    }

    fn image_vector(&self) -> Vec<VertexId> {
        self.map.values().copied().collect()
    }
}

/// Two vertex-disjoint copies of a disc, one of each orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscCopyPair {
    pub preserving: DiscCopy,
    pub reversing: DiscCopy,
}

impl DiscCopyPair {
    pub fn from_copies(a: DiscCopy, b: DiscCopy) -> Result<Self, SimplicialError> {
        if !a.image().is_disjoint(&b.image()) {
            return Err(SimplicialError::InvalidArgument(
                "disc copies are not vertex-disjoint".into(),
            ));
        }
        match (a.sign, b.sign) {
            (1, -1) => Ok(DiscCopyPair {
                preserving: a,
                reversing: b,
            }),
            (-1, 1) => Ok(DiscCopyPair {
                preserving: b,
                reversing: a,
            }),
            _ => Err(SimplicialError::InvalidArgument(
                "disc copies are not oppositely oriented".into(),
            )),
        }
    }

    /// Facets of the sphere covered by either copy.
    pub fn image_facets(&self, disc: &SimplicialComplex) -> BTreeSet<Simplex> {
        let mut out = BTreeSet::new();
        for copy in [&self.preserving, &self.reversing] {
            for f in disc.facets() {
                let img: Vec<VertexId> = f.simplex.vertices().iter().map(|v| copy.map[v]).collect();
                if let Ok((s, _)) = Simplex::from_unsorted(img) {
                    out.insert(s);
                }
            }
        }
        out
    }
}

/// Orientation of the copy of `disc` under `map`, or `None` if some facet
/// image is missing from `target` or the facets disagree.
pub(crate) fn copy_orientation(
    target: &SimplicialComplex,
    disc: &SimplicialComplex,
    map: &BTreeMap<VertexId, VertexId>,
) -> Option<i8> {
    let signs: HashMap<&Simplex, i8> = target.facets().iter().map(|f| (&f.simplex, f.sign)).collect();
    let mut relation = None;
    for f in disc.facets() {
        let img = f
            .simplex
            .vertices()
            .iter()
            .map(|v| map.get(v).copied())
            .collect::<Option<Vec<_>>>()?;
        let (s, parity) = Simplex::from_unsorted(img).ok()?;
        let r = f.sign * parity * signs.get(&s)?;
        match relation {
            None => relation = Some(r),
            Some(prev) if prev != r => return None,
            _ => {}
        }
    }
    relation
}

/// Order in which disc facets are matched: start from the first facet, then
/// repeatedly take the lowest-index unvisited facet sharing a ridge with a
/// visited one.
fn matching_order(disc: &SimplicialComplex) -> Option<Vec<usize>> {
    let facets = disc.facets();
    let mut visited = vec![false; facets.len()];
    let mut order = vec![0usize];
    visited[0] = true;
    let n = disc.n();
    while order.len() < facets.len() {
        let next = (0..facets.len()).find(|&i| {
            !visited[i]
                && order.iter().any(|&j| {
                    let a = facets[i].simplex.vertices();
                    let b = facets[j].simplex.vertices();
                    a.iter().filter(|v| b.binary_search(v).is_ok()).count() == n
                })
        })?;
        visited[next] = true;
        order.push(next);
    }
    Some(order)
}

struct Search<'a> {
    disc: &'a SimplicialComplex,
    order: Vec<usize>,
    /// Sphere facets containing each ridge.
    ridge_facets: BTreeMap<Simplex, Vec<&'a Simplex>>,
    facet_set: BTreeSet<&'a Simplex>,
    found: Vec<BTreeMap<VertexId, VertexId>>,
}

impl<'a> Search<'a> {
    fn extend(&mut self, step: usize, map: &mut BTreeMap<VertexId, VertexId>, used: &mut BTreeSet<VertexId>) {
        if step == self.order.len() {
            self.found.push(map.clone());
            return;
        }
        let facet = &self.disc.facets()[self.order[step]].simplex;
        let unmapped: Vec<VertexId> = facet
            .vertices()
            .iter()
            .copied()
            .filter(|v| !map.contains_key(v))
            .collect();
        match unmapped.len() {
            0 => {
                let img: Vec<VertexId> = facet.vertices().iter().map(|v| map[v]).collect();
                if let Ok((s, _)) = Simplex::from_unsorted(img) {
                    if self.facet_set.contains(&s) {
                        self.extend(step + 1, map, used);
                    }
                }
            }
            1 => {
                let u = unmapped[0];
                let ridge: Vec<VertexId> = facet
                    .vertices()
                    .iter()
                    .filter(|&&v| v != u)
                    .map(|v| map[v])
                    .collect();
                let Ok((ridge, _)) = Simplex::from_unsorted(ridge) else {
                    return;
                };
                let candidates: Vec<VertexId> = self
                    .ridge_facets
                    .get(&ridge)
                    .map(|fs| {
                        fs.iter()
                            .filter_map(|s| s.vertices().iter().copied().find(|x| !ridge.contains(*x)))
                            .filter(|x| !used.contains(x))
                            .collect()
                    })
                    .unwrap_or_default();
                for x in candidates {
                    map.insert(u, x);
                    used.insert(x);
                    self.extend(step + 1, map, used);
                    map.remove(&u);
                    used.remove(&x);
                }
            }
            // The matching order guarantees a shared ridge with a mapped facet.
            _ => unreachable!("facet shares a ridge with an already matched facet"),
        }
    }
}

/// All simplicial embeddings of `disc` into `sphere`, each with its
/// orientation sign, sorted by image vector.
pub fn disc_copies(sphere: &TriangulatedSphere, disc: &SimplicialComplex) -> Result<Vec<DiscCopy>, SimplicialError> {
    if sphere.n() != disc.n() {
        return Err(SimplicialError::DimensionMismatch {
            left: sphere.n(),
            right: disc.n(),
        });
    }
    let order = matching_order(disc).ok_or_else(|| {
        SimplicialError::InvalidArgument("disc is not connected through ridges".into())
    })?;
    let target = sphere.complex();
    let mut ridge_facets: BTreeMap<Simplex, Vec<&Simplex>> = BTreeMap::new();
    for f in target.facets() {
        for (r, _) in f.simplex.boundary() {
            ridge_facets.entry(r).or_default().push(&f.simplex);
        }
    }
    let mut search = Search {
        disc,
        order,
        ridge_facets,
        facet_set: target.facets().iter().map(|f| &f.simplex).collect(),
        found: Vec::new(),
    };
    let root = disc.facets()[search.order[0]].simplex.clone();
    let mut roots: Vec<&Simplex> = target.facets().iter().map(|f| &f.simplex).collect();
    roots.sort();
    for g in roots {
        for perm in g.vertices().iter().copied().permutations(g.vertices().len()) {
            let mut map: BTreeMap<VertexId, VertexId> =
                root.vertices().iter().copied().zip(perm.iter().copied()).collect();
            let mut used: BTreeSet<VertexId> = perm.into_iter().collect();
            search.extend(1, &mut map, &mut used);
        }
    }
    let mut copies: Vec<DiscCopy> = search
        .found
        .into_iter()
        .filter_map(|map| copy_orientation(target, disc, &map).map(|sign| DiscCopy { map, sign }))
        .collect();
    copies.sort_by_key(|c| c.image_vector());
    Ok(copies)
}

/// A witness that `sphere` is `D`-large: the lexicographically least pair
/// (by image vectors, preserving copy first) of vertex-disjoint copies of
/// opposite orientation.
pub fn is_d_large(sphere: &TriangulatedSphere, disc: &SimplicialComplex) -> Result<Option<DiscCopyPair>, SimplicialError> {
    let copies = disc_copies(sphere, disc)?;
    let (pos, neg): (Vec<_>, Vec<_>) = copies.into_iter().partition(|c| c.sign == 1);
    for p in &pos {
        let img = p.image();
        if let Some(r) = neg.iter().find(|r| r.image().is_disjoint(&img)) {
            return Ok(Some(DiscCopyPair {
                preserving: p.clone(),
                reversing: r.clone(),
            }));
        }
    }
    Ok(None)
}
