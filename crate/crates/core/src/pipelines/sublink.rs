use super::{arg, PipelineError};
use crate::linkalg::{sign_pattern, LinkingVector, SignAlphabet};
use crate::selection::{find_equal_residue_indices, find_nonvanishing_shift, prefix_sums};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Rows of a matrix sharing one sign pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSelection {
    /// Every row (0-based, ascending) in the chosen bucket.
    pub rows: Vec<usize>,
    pub pattern: String,
    /// Per column, `-1` where reversing that column makes the pattern
    /// positive. All `+1` for three-valued selections.
    pub column_signs: Vec<i8>,
}

fn pattern_key(p: &str) -> Vec<u8> {
    p.chars()
        .map(|c| match c {
            '+' => 0,
            '-' => 1,
            _ => 2,
        })
        .collect()
}

fn select_bucket(
    m: &[Vec<BigInt>],
    cols: usize,
    quota: usize,
    alphabet: SignAlphabet,
) -> Result<(Vec<usize>, String), PipelineError> {
    let mut buckets: BTreeMap<Vec<u8>, (String, Vec<usize>)> = BTreeMap::new();
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return arg(format!("row {i} has {} entries, expected {cols}", row.len()));
        }
        let p = sign_pattern(&LinkingVector(row.clone()), alphabet)?;
        buckets.entry(pattern_key(&p)).or_insert_with(|| (p, Vec::new())).1.push(i);
    }
    // Largest bucket; ties go to the least pattern with + < - < 0.
    let best = buckets
        .into_values()
        .fold(None::<(String, Vec<usize>)>, |acc, b| match acc {
            Some(a) if a.1.len() >= b.1.len() => Some(a),
            _ => Some(b),
        });
    let (pattern, rows) = best.unwrap_or_else(|| ("+".repeat(cols), Vec::new()));
    if rows.len() < quota {
        return Err(PipelineError::QuotaUnreachable {
            quota,
            largest: rows.len(),
        });
    }
    Ok((rows, pattern))
}

/// Largest bucket of rows by `{+,-}` sign pattern, with the column reversals
/// that make it positive.
pub fn select_sign_uniform_sublink(m: &[Vec<BigInt>], cols: usize, quota: usize) -> Result<PatternSelection, PipelineError> {
    let (rows, pattern) = select_bucket(m, cols, quota, SignAlphabet::TwoValued)?;
    let column_signs = pattern.chars().map(|c| if c == '-' { -1 } else { 1 }).collect();
    Ok(PatternSelection {
        rows,
        pattern,
        column_signs,
    })
}

/// Largest bucket of rows by `{+,-,0}` sign pattern: every column of the
/// selected submatrix is positive, negative or zero.
pub fn select_three_valued_sublink(m: &[Vec<BigInt>], cols: usize, quota: usize) -> Result<PatternSelection, PipelineError> {
    let (rows, pattern) = select_bucket(m, cols, quota, SignAlphabet::ThreeValued)?;
    Ok(PatternSelection {
        rows,
        pattern,
        column_signs: vec![1; cols],
    })
}

/// First `i` in `0..=len` with `j` (for `i = 0`) or `j + ℓ_i` entrywise nonzero.
pub fn choose_nonvanishing_base(j: &LinkingVector, ells: &[LinkingVector]) -> Option<usize> {
    if j.is_nonvanishing() {
        return Some(0);
    }
    ells.iter().position(|l| j.add(l).is_nonvanishing()).map(|i| i + 1)
}

/// One stitching sphere between consecutive components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsecutiveStitch {
    /// `μ_0 < μ_1 < … < μ_{2^d}`: prefix indices sharing a residue class.
    pub mu: Vec<usize>,
    /// `(j, k)` from the nonvanishing-shift lemma applied to `p_0..p_{2^d}`.
    pub shift: (usize, usize),
    /// Segments `first..=last` (one-based) make up the stitching sphere.
    pub range: (usize, usize),
    pub z: LinkingVector,
}

/// Extends `z` (entrywise nonzero, `≡ 0 mod q`) by a contiguous run of
/// segments so that the result is again entrywise nonzero and `≡ 0 mod q`.
pub fn stitch_consecutive(z: &LinkingVector, segments: &[LinkingVector], q: u64) -> Result<ConsecutiveStitch, PipelineError> {
    let d = z.len();
    if q == 0 {
        return arg("q must be positive");
    }
    if !z.is_nonvanishing() || !z.is_zero_mod(q) {
        return arg(format!("z = {z} is not a nonzero multiple of {q} in every entry"));
    }
    let needed = BigInt::from(2 * q).pow(d as u32);
    if BigInt::from(segments.len()) < needed {
        return arg(format!("need at least (2q)^{d} = {needed} segments, got {}", segments.len()));
    }
    let sel = find_equal_residue_indices(segments, d, q, (1usize << d) + 1)?;
    let mu = sel.indices();
    let sums = prefix_sums(&segments[..*mu.last().expect("nonempty")], d);
    let p: Vec<LinkingVector> = mu.iter().map(|&m| sums[m].sub(&sums[mu[0]])).collect();
    let (j, k) = find_nonvanishing_shift(z, &p)?;
    let z_next = z.add(&p[k]).sub(&p[j]);
    debug_assert!(z_next.is_nonvanishing() && z_next.is_zero_mod(q));
    Ok(ConsecutiveStitch {
        range: (mu[j] + 1, mu[k]),
        mu,
        shift: (j, k),
        z: z_next,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn vecs(v: &[&[i64]]) -> Vec<LinkingVector> {
        v.iter().map(|x| LinkingVector::from_i64s(x)).collect()
    }

    #[test]
    fn sign_uniform_examples() {
        let s = select_sign_uniform_sublink(&mat(&[&[3], &[-2], &[5], &[-1]]), 1, 2).unwrap();
        assert_eq!((s.rows.clone(), s.pattern.as_str(), s.column_signs.clone()), (vec![0, 2], "+", vec![1]));
        let s = select_sign_uniform_sublink(&mat(&[&[-3], &[-2], &[-1]]), 1, 3).unwrap();
        assert_eq!((s.rows, s.column_signs), (vec![0, 1, 2], vec![-1]));
        let s = select_sign_uniform_sublink(&mat(&[&[-1, 1], &[1, -1], &[-1, -1], &[1, 1]]), 2, 1).unwrap();
        assert_eq!((s.rows, s.pattern.as_str()), (vec![3], "++"));
        assert!(select_sign_uniform_sublink(&mat(&[&[0]]), 1, 1).is_err());
        assert_eq!(
            select_sign_uniform_sublink(&mat(&[&[1], &[-1]]), 1, 2),
            Err(PipelineError::QuotaUnreachable { quota: 2, largest: 1 })
        );
    }

    #[test]
    fn three_valued_examples() {
        let s = select_three_valued_sublink(&mat(&[&[0], &[0], &[1]]), 1, 1).unwrap();
        assert_eq!((s.rows, s.pattern.as_str()), (vec![0, 1], "0"));
        let s = select_three_valued_sublink(&mat(&[&[0, 0], &[0, 0]]), 2, 2).unwrap();
        assert_eq!(s.rows, vec![0, 1]);
        let s = select_three_valued_sublink(&mat(&[&[1], &[-1], &[0], &[2], &[-2], &[0]]), 1, 2).unwrap();
        assert_eq!((s.rows, s.pattern.as_str()), (vec![0, 3], "+"));
    }

    #[test]
    fn empty_pattern_when_no_columns() {
        let s = select_sign_uniform_sublink(&[vec![], vec![]], 0, 2).unwrap();
        assert_eq!((s.rows, s.pattern.as_str()), (vec![0, 1], ""));
    }

    #[test]
    fn base_examples() {
        let j = LinkingVector::from_i64s(&[2, 1]);
        assert_eq!(choose_nonvanishing_base(&j, &[]), Some(0));
        let j = LinkingVector::from_i64s(&[0]);
        assert_eq!(choose_nonvanishing_base(&j, &vecs(&[&[2]])), Some(1));
        let j = LinkingVector::from_i64s(&[1]);
        assert_eq!(choose_nonvanishing_base(&j, &vecs(&[&[-1], &[-2]])), Some(0));
        let j = LinkingVector::from_i64s(&[0, 3]);
        assert_eq!(choose_nonvanishing_base(&j, &vecs(&[&[1, -3], &[2, 0], &[3, 1]])), Some(2));
        assert_eq!(choose_nonvanishing_base(&j, &vecs(&[&[1, -3], &[2, -3], &[3, 1]])), Some(3));
        assert_eq!(choose_nonvanishing_base(&j, &vecs(&[&[0, 1]])), None);
    }

    #[test]
    fn consecutive_examples() {
        let z = LinkingVector::from_i64s(&[2]);
        let r = stitch_consecutive(&z, &vecs(&[&[1], &[1], &[1], &[1]]), 2).unwrap();
        assert_eq!(r.mu, vec![0, 2, 4]);
        assert_eq!((r.shift, r.range), ((0, 1), (1, 2)));
        assert_eq!(r.z, LinkingVector::from_i64s(&[4]));

        let z = LinkingVector::from_i64s(&[1]);
        let r = stitch_consecutive(&z, &vecs(&[&[0], &[0]]), 1).unwrap();
        assert_eq!(r.z, z);

        let r = stitch_consecutive(&z, &vecs(&[&[-1], &[-1]]), 1).unwrap();
        assert_eq!((r.shift, r.range), ((0, 2), (1, 2)));
        assert_eq!(r.z, LinkingVector::from_i64s(&[-1]));
    }

    #[test]
    fn consecutive_preconditions() {
        let segs = vecs(&[&[1], &[1], &[1], &[1]]);
        assert!(stitch_consecutive(&LinkingVector::from_i64s(&[0]), &segs, 2).is_err());
        assert!(stitch_consecutive(&LinkingVector::from_i64s(&[3]), &segs, 2).is_err());
        assert!(stitch_consecutive(&LinkingVector::from_i64s(&[2]), &segs[..3], 2).is_err());
    }
}
