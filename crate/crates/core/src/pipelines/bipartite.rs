use super::bounds::MAX_BIPARTITE_R;
use super::{arg, PipelineError};
use crate::linkalg::{Component, LinkSystem};
use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Largest `m²` accepted by [`keyring_search`].
pub const MAX_KEYRING_SIZE: usize = 16;

/// Mod-2 data for building a key from a sphere `S` and keys `J_1..J_{m²}`
/// against rings `X_1..X_{m²}`: `s[j] = lk₂(S, X_j)` and
/// `matrix[i][j] = lk₂(J_i, X_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyRingInstance {
    pub m: usize,
    pub s: Vec<u8>,
    pub matrix: Vec<Vec<u8>>,
}

impl KeyRingInstance {
    pub fn size(&self) -> usize {
        self.m * self.m
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let n = self.m.checked_mul(self.m).ok_or_else(|| PipelineError::TooLarge("m² overflows".into()))?;
        if self.m == 0 {
            return arg("m must be positive");
        }
        if self.s.len() != n || self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return arg(format!("instance with m = {} needs s of length {n} and an {n}×{n} matrix", self.m));
        }
        if self.s.iter().chain(self.matrix.iter().flatten()).any(|&b| b > 1) {
            return arg("entries must be 0 or 1");
        }
        if let Some(i) = (0..n).find(|&i| self.matrix[i][i] != 1) {
            return arg(format!("diagonal entry {i} is not 1"));
        }
        Ok(())
    }

    /// `t_j = s_j + Σ_{i ∈ subset} M[i][j] mod 2`.
    pub fn residues(&self, subset: &[usize]) -> Vec<u8> {
        let mut t = self.s.clone();
        for &i in subset {
            for (tj, mij) in t.iter_mut().zip(&self.matrix[i]) {
                *tj ^= mij;
            }
        }
        t
    }
}

/// `Z = S + Σ_{i ∈ subset} J_i`, with `lk₂(Z, X_j) = 1` exactly for `j` in
/// `index_set`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyRingSolution {
    pub subset: Vec<usize>,
    pub index_set: Vec<usize>,
}

/// Exhaustive search over key subsets in size-then-lex order, keeping the
/// first subset with the largest index set. Fails unless `|I| ≥ m/2`.
pub fn keyring_search(inst: &KeyRingInstance) -> Result<KeyRingSolution, PipelineError> {
    inst.validate()?;
    let n = inst.size();
    if n > MAX_KEYRING_SIZE {
        return Err(PipelineError::TooLarge(format!("m² = {n} exceeds {MAX_KEYRING_SIZE}")));
    }
    let row_mask = |row: &[u8]| row.iter().enumerate().fold(0u32, |m, (j, &b)| m | (u32::from(b) << j));
    let rows: Vec<u32> = inst.matrix.iter().map(|r| row_mask(r)).collect();
    let s = row_mask(&inst.s);
    let mut best: Option<(u32, Vec<usize>)> = None;
    'search: for k in 0..=n {
        for subset in (0..n).combinations(k) {
            let t = subset.iter().fold(s, |acc, &i| acc ^ rows[i]);
            let ones = t.count_ones();
            if best.as_ref().is_none_or(|(b, _)| ones > *b) {
                best = Some((ones, subset));
                if ones as usize == n {
                    break 'search;
                }
            }
        }
    }
    let (ones, subset) = best.expect("the empty subset is always searched");
    if 2 * (ones as usize) < inst.m {
        return Err(PipelineError::LemmaModelFailure {
            m: inst.m,
            best: ones as usize,
            instance: serde_json::to_string(inst).expect("instance serializes"),
        });
    }
    let t = inst.residues(&subset);
    Ok(KeyRingSolution {
        index_set: (0..n).filter(|&j| t[j] == 1).collect(),
        subset,
    })
}

/// Ring indices (0-based) surviving a stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSet {
    /// `{0, …, n−1}`, kept symbolic.
    Prefix(BigUint),
    Explicit(Vec<u64>),
}

impl IndexSet {
    pub fn len(&self) -> BigUint {
        match self {
            IndexSet::Prefix(n) => n.clone(),
            IndexSet::Explicit(v) => BigUint::from(v.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len().is_zero()
    }

    /// Materializes the set if it has at most `limit` elements.
    pub fn to_vec(&self, limit: usize) -> Option<Vec<u64>> {
        match self {
            IndexSet::Prefix(n) => n.to_usize().filter(|&n| n <= limit).map(|n| (0..n as u64).collect()),
            IndexSet::Explicit(v) => (v.len() <= limit).then(|| v.clone()),
        }
    }

    /// The first `k` elements in ascending order.
    pub fn first(&self, k: usize) -> Vec<u64> {
        match self {
            IndexSet::Prefix(n) => (0..k as u64).take_while(|i| BigUint::from(*i) < *n).collect(),
            IndexSet::Explicit(v) => v.iter().copied().collect::<BTreeSet<_>>().into_iter().take(k).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        match (self, other) {
            (IndexSet::Prefix(a), IndexSet::Prefix(b)) => a <= b,
            (IndexSet::Explicit(v), IndexSet::Prefix(b)) => v.iter().all(|&i| BigUint::from(i) < *b),
            (IndexSet::Explicit(v), IndexSet::Explicit(w)) => {
                let w: BTreeSet<u64> = w.iter().copied().collect();
                v.iter().all(|i| w.contains(i))
            }
            (IndexSet::Prefix(a), IndexSet::Explicit(w)) => {
                let w: BTreeSet<u64> = w.iter().copied().collect();
                a.to_usize().is_some_and(|a| a <= w.len() && (0..a as u64).all(|i| w.contains(&i)))
            }
        }
    }

    fn is_duplicate_free(&self) -> bool {
        match self {
            IndexSet::Prefix(_) => true,
            IndexSet::Explicit(v) => v.iter().collect::<BTreeSet<_>>().len() == v.len(),
        }
    }
}

/// Supplies the key-ring step of each stage: given the rings `I_{k−1}`,
/// returns `I_k ⊆ I_{k−1}` such that the new sphere `Z_k` links every ring in
/// `I_k` with mod-2 linking number 1.
pub trait KeyRingOracle {
    /// The result and, when known, the keys (ring indices) summed into `Z_k`.
    fn stage(&mut self, k: usize, rings: &IndexSet) -> Result<(IndexSet, Option<Vec<u64>>), PipelineError>;
}

/// Answers every stage with the prefix of the required size `m_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolicPrefixOracle {
    pub r: u64,
}

impl KeyRingOracle for SymbolicPrefixOracle {
    fn stage(&mut self, k: usize, rings: &IndexSet) -> Result<(IndexSet, Option<Vec<u64>>), PipelineError> {
        if k == 0 || k as u64 > self.r || self.r > MAX_BIPARTITE_R {
            return arg(format!("stage {k} outside 1..={}", self.r));
        }
        let needed = stage_size(self.r, k as u64);
        if rings.len() < needed {
            return Err(PipelineError::StageShortfall {
                stage: k,
                got: rings.len().to_string(),
                needed: needed.to_string(),
            });
        }
        match rings {
            IndexSet::Prefix(_) => Ok((IndexSet::Prefix(needed), None)),
            IndexSet::Explicit(_) => {
                let k_needed = needed.to_usize().ok_or_else(|| PipelineError::TooLarge(needed.to_string()))?;
                Ok((IndexSet::Explicit(rings.first(k_needed)), None))
            }
        }
    }
}

/// Draws a seeded random key-ring instance per stage (diagonal ones,
/// everything else uniform) and solves it with [`keyring_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveOracle {
    pub seed: u64,
    /// Instances drawn so far, one per stage.
    pub instances: Vec<KeyRingInstance>,
}

impl ExhaustiveOracle {
    pub fn new(seed: u64) -> Self {
        ExhaustiveOracle {
            seed,
            instances: Vec::new(),
        }
    }
}

impl KeyRingOracle for ExhaustiveOracle {
    fn stage(&mut self, k: usize, rings: &IndexSet) -> Result<(IndexSet, Option<Vec<u64>>), PipelineError> {
        let rings = rings
            .to_vec(MAX_KEYRING_SIZE)
            .ok_or_else(|| PipelineError::TooLarge(format!("{} rings exceed {MAX_KEYRING_SIZE}", rings.len())))?;
        let n = rings.len();
        let m = n.isqrt();
        if m * m != n || m == 0 {
            return arg(format!("{n} rings is not a positive square"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut bit = || u8::from(rng.random::<bool>());
        let s = (0..n).map(|_| bit()).collect();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1 } else { bit() }).collect())
            .collect();
        let inst = KeyRingInstance { m, s, matrix };
        let sol = keyring_search(&inst)?;
        self.instances.push(inst);
        Ok((
            IndexSet::Explicit(sol.index_set.iter().map(|&j| rings[j]).collect()),
            Some(sol.subset.iter().map(|&i| rings[i]).collect()),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub input: BigUint,
    pub needed: BigUint,
    pub output: IndexSet,
    /// Ring indices `i` whose keys `J_{ik}` were summed into `Z_k`.
    pub keys: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteResult {
    pub r: u64,
    pub m: BigUint,
    pub stages: Vec<StageRecord>,
    pub rings: IndexSet,
    /// `Z_1..Z_r` and the first `r` surviving rings, with `lk = 1` between
    /// every `Z_j` and ring.
    pub system: LinkSystem,
}

/// `m_k = (4r)^{2^{r−k}} / 4`.
pub(crate) fn stage_size(r: u64, k: u64) -> BigUint {
    debug_assert!(k <= r && r <= MAX_BIPARTITE_R);
    let exp = 1u32 << (r - k);
    BigUint::from(4 * r).pow(exp) / 4u32
}

/// `m = m_0, m_1, …, m_r`.
pub fn bipartite_stage_sizes(r: u64) -> Result<Vec<BigUint>, PipelineError> {
    if r == 0 {
        return arg("r must be positive");
    }
    if r > MAX_BIPARTITE_R {
        return Err(PipelineError::TooLarge(format!("r = {r} exceeds {MAX_BIPARTITE_R}")));
    }
    Ok((0..=r).map(|k| stage_size(r, k)).collect())
}

fn ring_id(i: u64) -> String {
    format!("R{}", i + 1)
}

/// Runs the induction: stage `k` hands `I_{k−1}` to the oracle and requires
/// `I_k ⊆ I_{k−1}` with `|I_k| ≥ m_k`.
pub fn bipartite_orchestrate(r: u64, oracle: &mut dyn KeyRingOracle) -> Result<BipartiteResult, PipelineError> {
    let sizes = bipartite_stage_sizes(r)?;
    let mut current = IndexSet::Prefix(sizes[0].clone());
    let mut stages = Vec::with_capacity(r as usize);
    for k in 1..=r as usize {
        let (next, keys) = oracle.stage(k, &current)?;
        let needed = &sizes[k];
        if !next.is_duplicate_free() || !next.is_subset_of(&current) {
            return arg(format!("stage {k}: oracle returned indices outside I_{}", k - 1));
        }
        if next.len() < *needed {
            return Err(PipelineError::StageShortfall {
                stage: k,
                got: next.len().to_string(),
                needed: needed.to_string(),
            });
        }
        stages.push(StageRecord {
            stage: k,
            input: current.len(),
            needed: needed.clone(),
            output: next.clone(),
            keys,
        });
        current = next;
    }
    let rings = current.first(r as usize);
    let zs: Vec<String> = (1..=r).map(|j| format!("Z{j}")).collect();
    let rs: Vec<String> = rings.iter().map(|&i| ring_id(i)).collect();
    let comps = zs.iter().chain(&rs).map(|id| Component::new(id.clone(), 0)).collect();
    let mut system = LinkSystem::new(comps)?;
    for z in &zs {
        for ring in &rs {
            system.set_lk(z, ring, 1)?;
        }
    }
    Ok(BipartiteResult {
        r,
        m: sizes[0].clone(),
        stages,
        rings: current,
        system,
    })
}
