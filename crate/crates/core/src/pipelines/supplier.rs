use super::PipelineError;
use crate::linkalg::LinkingVector;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// Linking numbers of the segment spheres `P_ℓ` joining two components,
/// keyed by `(from, to, ℓ)` with `ℓ` one-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupplierSpec {
    /// Every segment has the same vector (truncated or zero-padded to the
    /// requested dimension).
    Constant {
        #[serde(with = "crate::intser::vec")]
        value: Vec<BigInt>,
    },
    /// Entries uniform in `lo..=hi`, seeded per key from a SHA-256 digest.
    Seeded { seed: u64, lo: i64, hi: i64 },
    /// Explicit vectors under `"from>to"`, one per segment.
    Table { entries: BTreeMap<String, Vec<LinkingVector>> },
}

impl SupplierSpec {
    pub fn zero() -> Self {
        SupplierSpec::Constant { value: Vec::new() }
    }

    pub fn constant(values: &[i64]) -> Self {
        SupplierSpec::Constant {
            value: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn seeded(seed: u64, lo: i64, hi: i64) -> Self {
        SupplierSpec::Seeded { seed, lo, hi }
    }

    pub fn table(entries: impl IntoIterator<Item = ((String, String), Vec<Vec<i64>>)>) -> Self {
        SupplierSpec::Table {
            entries: entries
                .into_iter()
                .map(|((a, b), rows)| {
                    let rows = rows.iter().map(|r| LinkingVector::from_i64s(r)).collect();
                    (format!("{a}>{b}"), rows)
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        match self {
            SupplierSpec::Seeded { lo, hi, .. } if lo > hi => Err(PipelineError::InvalidArgument(
                format!("seeded supplier range {lo}..={hi} is empty"),
            )),
            _ => Ok(()),
        }
    }

    pub fn segment(&self, from: &str, to: &str, l: usize, dim: usize) -> Result<LinkingVector, PipelineError> {
        match self {
            SupplierSpec::Constant { value } => Ok(LinkingVector(
                (0..dim)
                    .map(|i| value.get(i).cloned().unwrap_or_default())
                    .collect(),
            )),
            SupplierSpec::Seeded { seed, lo, hi } => {
                self.validate()?;
                let mut h = Sha256::new();
                h.update(seed.to_le_bytes());
                h.update(from.as_bytes());
                h.update(b">");
                h.update(to.as_bytes());
                h.update(b"#");
                h.update((l as u64).to_le_bytes());
                let digest: [u8; 32] = h.finalize().into();
                let mut rng = ChaCha8Rng::from_seed(digest);
                Ok(LinkingVector(
                    (0..dim).map(|_| BigInt::from(rng.random_range(*lo..=*hi))).collect(),
                ))
            }
            SupplierSpec::Table { entries } => {
                let key = format!("{from}>{to}");
                let row = l
                    .checked_sub(1)
                    .and_then(|i| entries.get(&key).and_then(|rows| rows.get(i)))
                    .ok_or_else(|| {
                        PipelineError::InvalidArgument(format!("supplier table has no segment {key}#{l}"))
                    })?;
                if row.len() != dim {
                    return Err(PipelineError::InvalidArgument(format!(
                        "segment {key}#{l} has length {}, expected {dim}",
                        row.len()
                    )));
                }
                Ok(row.clone())
            }
        }
    }

    /// Segments `1..=lambda` between `from` and `to`.
    pub fn segments(&self, from: &str, to: &str, lambda: usize, dim: usize) -> Result<Vec<LinkingVector>, PipelineError> {
        (1..=lambda).map(|l| self.segment(from, to, l, dim)).collect()
    }
}

/// Chain id of segment `ℓ` between two components.
pub(crate) fn segment_id(from: &str, to: &str, l: usize) -> String {
    format!("P:{from}>{to}#{l}")
}
