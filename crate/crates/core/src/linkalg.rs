//! Abstract oriented link systems.
//!
//! A [`LinkSystem`] is an ordered list of oriented components with a symmetric
//! integer linking matrix. Self-linking is not represented. Chains are finitely
//! supported integer combinations of components, and linking numbers extend
//! bilinearly to them, which is how connect sums are accounted for.

use crate::intser;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("duplicate component `{0}`")]
    DuplicateComponent(String),
    #[error("self-linking of `{0}` is undefined")]
    SelfLinking(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Integer vector of linking numbers against a fixed target family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkingVector(#[serde(with = "intser::vec")] pub Vec<BigInt>);

impl LinkingVector {
    pub fn zeros(len: usize) -> Self {
        LinkingVector(vec![BigInt::zero(); len])
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        LinkingVector(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn add(&self, other: &LinkingVector) -> LinkingVector {
        assert_eq!(self.len(), other.len(), "linking vector length mismatch");
        LinkingVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LinkingVector) -> LinkingVector {
        assert_eq!(self.len(), other.len(), "linking vector length mismatch");
        LinkingVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add_assign(&mut self, other: &LinkingVector) {
        assert_eq!(self.len(), other.len(), "linking vector length mismatch");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    /// Entrywise product with a `±1` sign vector.
    pub fn signed(&self, signs: &[i8]) -> LinkingVector {
        assert_eq!(self.len(), signs.len(), "sign vector length mismatch");
        LinkingVector(
            self.0
                .iter()
                .zip(signs)
                .map(|(a, &s)| if s < 0 { -a } else { a.clone() })
                .collect(),
        )
    }

    pub fn is_nonvanishing(&self) -> bool {
        self.0.iter().all(|e| !e.is_zero())
    }

    pub fn is_zero_mod(&self, q: u64) -> bool {
        let q = BigInt::from(q);
        self.0.iter().all(|e| e.mod_floor(&q).is_zero())
    }

    /// Least non-negative residues modulo `q`.
    pub fn residues(&self, q: u64) -> Vec<u64> {
        let qb = BigInt::from(q);
        self.0
            .iter()
            .map(|e| {
                let r = e.mod_floor(&qb);
                u64::try_from(r).expect("residue below q fits in u64")
            })
            .collect()
    }
}

impl fmt::Display for LinkingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignAlphabet {
    /// `{+, -}`; zero entries are rejected.
    TwoValued,
    /// `{+, -, 0}`.
    ThreeValued,
}

/// Per-entry sign symbols, `'+'`, `'-'` or `'0'`.
pub fn sign_pattern(v: &LinkingVector, alphabet: SignAlphabet) -> Result<String, LinkError> {
    v.0.iter()
        .map(|e| {
            if e.is_positive() {
                Ok('+')
            } else if e.is_negative() {
                Ok('-')
            } else if alphabet == SignAlphabet::ThreeValued {
                Ok('0')
            } else {
                Err(LinkError::InvalidArgument(
                    "zero entry under the two-valued sign alphabet".into(),
                ))
            }
        })
        .collect()
}

/// True iff every entry is a nonzero multiple of `q`.
pub fn verify_conclusion(v: &LinkingVector, q: u64) -> bool {
    assert!(q >= 1, "modulus must be positive");
    v.is_nonvanishing() && v.is_zero_mod(q)
}

/// Finitely supported integer combination of components, keyed by id.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chain(BTreeMap<String, intser::Wire>);

impl Chain {
    pub fn new() -> Self {
        Chain::default()
    }

    pub fn single(id: impl Into<String>) -> Self {
        let mut c = Chain::new();
        c.add_term(id, BigInt::from(1));
        c
    }

    pub fn add_term(&mut self, id: impl Into<String>, coeff: impl Into<BigInt>) {
        let id = id.into();
        let coeff = coeff.into();
        let entry = self.0.entry(id.clone()).or_insert(intser::Wire(BigInt::zero()));
        entry.0 += coeff;
        if entry.0.is_zero() {
            self.0.remove(&id);
        }
    }

    pub fn plus(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (id, c) in other.terms() {
            out.add_term(id, c.clone());
        }
        out
    }

    pub fn scaled(&self, k: &BigInt) -> Chain {
        let mut out = Chain::new();
        for (id, c) in self.terms() {
            out.add_term(id, c * k);
        }
        out
    }

    pub fn coefficient(&self, id: &str) -> BigInt {
        self.0.get(id).map(|w| w.0.clone()).unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.0.iter().map(|(k, v)| (k.as_str(), &v.0))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn one() -> i8 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    #[serde(default = "one")]
    pub orientation: i8,
    /// Largest `ℓ` for which the component is certified large with respect
    /// to a path of length `ℓ`; zero if none.
    #[serde(default)]
    pub path_length: u64,
}

impl Component {
    pub fn new(id: impl Into<String>, path_length: u64) -> Self {
        Component {
            id: id.into(),
            orientation: 1,
            path_length,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LinkSystemFile {
    components: Vec<Component>,
    lk: Vec<(usize, usize, intser::Wire)>,
}

/// Ordered oriented components with a symmetric linking matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LinkSystemFile", into = "LinkSystemFile")]
pub struct LinkSystem {
    components: Vec<Component>,
    index: HashMap<String, usize>,
    /// Keyed by `(i, j)` with `i < j`; absent entries are zero.
    lk: BTreeMap<(usize, usize), BigInt>,
}

impl TryFrom<LinkSystemFile> for LinkSystem {
    type Error = LinkError;
    fn try_from(f: LinkSystemFile) -> Result<Self, Self::Error> {
        let mut sys = LinkSystem::new(f.components)?;
        for (i, j, v) in f.lk {
            if i >= j || j >= sys.len() {
                return Err(LinkError::InvalidArgument(format!(
                    "linking triple ({i}, {j}) must satisfy i < j < {}",
                    sys.len()
                )));
            }
            sys.set_by_index(i, j, v.0);
        }
        Ok(sys)
    }
}

impl From<LinkSystem> for LinkSystemFile {
    fn from(s: LinkSystem) -> Self {
        LinkSystemFile {
            lk: s
                .lk
                .iter()
                .map(|(&(i, j), v)| (i, j, intser::Wire(v.clone())))
                .collect(),
            components: s.components,
        }
    }
}

impl LinkSystem {
    pub fn new(components: Vec<Component>) -> Result<Self, LinkError> {
        let mut index = HashMap::with_capacity(components.len());
        for (i, c) in components.iter().enumerate() {
            if c.orientation != 1 && c.orientation != -1 {
                return Err(LinkError::InvalidArgument(format!(
                    "component `{}` has orientation {}",
                    c.id, c.orientation
                )));
            }
            if index.insert(c.id.clone(), i).is_some() {
                return Err(LinkError::DuplicateComponent(c.id.clone()));
            }
        }
        Ok(LinkSystem {
            components,
            index,
            lk: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, id: &str) -> Result<&Component, LinkError> {
        Ok(&self.components[self.index_of(id)?])
    }

    pub fn index_of(&self, id: &str) -> Result<usize, LinkError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| LinkError::UnknownComponent(id.to_string()))
    }

    fn set_by_index(&mut self, i: usize, j: usize, value: BigInt) {
        let key = (i.min(j), i.max(j));
        if value.is_zero() {
            self.lk.remove(&key);
        } else {
            self.lk.insert(key, value);
        }
    }

    pub fn set_lk(&mut self, a: &str, b: &str, value: impl Into<BigInt>) -> Result<(), LinkError> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        if i == j {
            return Err(LinkError::SelfLinking(a.to_string()));
        }
        self.set_by_index(i, j, value.into());
        Ok(())
    }

    pub fn lk(&self, a: &str, b: &str) -> Result<BigInt, LinkError> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        if i == j {
            return Err(LinkError::SelfLinking(a.to_string()));
        }
        Ok(self.lk_by_index(i, j))
    }

    pub fn lk_by_index(&self, i: usize, j: usize) -> BigInt {
        self.lk
            .get(&(i.min(j), i.max(j)))
            .cloned()
            .unwrap_or_default()
    }

    pub fn set_path_length(&mut self, id: &str, path_length: u64) -> Result<(), LinkError> {
        let i = self.index_of(id)?;
        self.components[i].path_length = path_length;
        Ok(())
    }

    /// Matrix of `lk(row, col)`.
    pub fn submatrix(&self, rows: &[&str], cols: &[&str]) -> Result<Vec<Vec<BigInt>>, LinkError> {
        let ri = distinct_indices(self, rows)?;
        let ci = distinct_indices(self, cols)?;
        ri.iter()
            .map(|&i| {
                ci.iter()
                    .map(|&j| {
                        if i == j {
                            Err(LinkError::SelfLinking(self.components[i].id.clone()))
                        } else {
                            Ok(self.lk_by_index(i, j))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Row of linking numbers of `id` against `targets`.
    pub fn linking_vector(&self, id: &str, targets: &[&str]) -> Result<LinkingVector, LinkError> {
        let m = self.submatrix(&[id], targets)?;
        Ok(LinkingVector(m.into_iter().next().unwrap_or_default()))
    }

    /// Reverses the orientation of `id`: its row and column are negated.
    pub fn reverse_orientation(&self, id: &str) -> Result<LinkSystem, LinkError> {
        let c = self.index_of(id)?;
        let mut out = self.clone();
        out.components[c].orientation = -out.components[c].orientation;
        for (&(i, j), v) in out.lk.iter_mut() {
            if i == c || j == c {
                *v = -v.clone();
            }
        }
        Ok(out)
    }

    /// `Σ_c z_c · lk(c, target)`.
    pub fn chain_lk(&self, z: &Chain, target: &str) -> Result<BigInt, LinkError> {
        let t = self.index_of(target)?;
        let mut total = BigInt::zero();
        for (id, coeff) in z.terms() {
            let c = self.index_of(id)?;
            if c == t {
                return Err(LinkError::SelfLinking(target.to_string()));
            }
            total += coeff * self.lk_by_index(c, t);
        }
        Ok(total)
    }

    pub fn chain_linking_vector(&self, z: &Chain, targets: &[&str]) -> Result<LinkingVector, LinkError> {
        targets
            .iter()
            .map(|t| self.chain_lk(z, t))
            .collect::<Result<Vec<_>, _>>()
            .map(LinkingVector)
    }

    /// Graph on components with an edge wherever `lk ≠ 0`.
    pub fn linking_pattern(&self) -> LinkingPattern {
        LinkingPattern {
            ids: self.components.iter().map(|c| c.id.clone()).collect(),
            edges: self.lk.keys().copied().collect(),
        }
    }

    /// Entrywise residues mod 2, viewed as the mod-2 linking pattern.
    pub fn mod2_reduce(&self) -> LinkingPattern {
        let two = BigInt::from(2);
        LinkingPattern {
            ids: self.components.iter().map(|c| c.id.clone()).collect(),
            edges: self
                .lk
                .iter()
                .filter(|(_, v)| !v.mod_floor(&two).is_zero())
                .map(|(&k, _)| k)
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("link system serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, LinkError> {
        serde_json::from_str(s).map_err(|e| LinkError::InvalidArgument(e.to_string()))
    }
}

fn distinct_indices(sys: &LinkSystem, ids: &[&str]) -> Result<Vec<usize>, LinkError> {
    let mut seen = BTreeSet::new();
    ids.iter()
        .map(|id| {
            let i = sys.index_of(id)?;
            if !seen.insert(i) {
                return Err(LinkError::DuplicateComponent(id.to_string()));
            }
            Ok(i)
        })
        .collect()
}

/// A graph on link components; edges are index pairs `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingPattern {
    ids: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl LinkingPattern {
    fn idx(&self, id: &str) -> Result<usize, LinkError> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| LinkError::UnknownComponent(id.to_string()))
    }

    pub fn has_edge(&self, a: &str, b: &str) -> Result<bool, LinkError> {
        let i = self.idx(a)?;
        let j = self.idx(b)?;
        Ok(self.edges.contains(&(i.min(j), i.max(j))))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The star with the given center and leaves is a subgraph.
    pub fn contains_star(&self, center: &str, leaves: &[&str]) -> Result<bool, LinkError> {
        for l in leaves {
            if !self.has_edge(center, l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every `left`–`right` pair is an edge.
    pub fn contains_complete_bipartite(&self, left: &[&str], right: &[&str]) -> Result<bool, LinkError> {
        for a in left {
            for b in right {
                if !self.has_edge(a, b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
