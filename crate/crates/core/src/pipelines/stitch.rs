use super::supplier::segment_id;
use super::sublink::{
    choose_nonvanishing_base, select_sign_uniform_sublink, select_three_valued_sublink,
    stitch_consecutive, ConsecutiveStitch,
};
use super::{arg, PipelineError, SupplierSpec};
use crate::linkalg::{sign_pattern, verify_conclusion, Chain, LinkingVector, SignAlphabet};
use crate::selection::{find_equal_residue_indices, prefix_sums};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// Component names used in chains and supplier keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchIds {
    pub j: Vec<String>,
    pub l: Vec<String>,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

impl StitchIds {
    pub fn numbered(a: usize, b: usize, s: usize, t: usize) -> Self {
        let names = |p: &str, k: usize| (1..=k).map(|i| format!("{p}{i}")).collect();
        StitchIds {
            j: names("J", a),
            l: names("L", b),
            x: names("X", s),
            y: names("Y", t),
        }
    }
}

/// Linking data for the stitching construction: components `J_1..J_A` and
/// `L_1..L_B` against targets `X_1..X_S`, `Y_1..Y_T`, plus `λ` segments per
/// consecutive pair from `supplier`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchInput {
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub q: u64,
    #[serde(with = "crate::intser::matrix")]
    pub jx: Vec<Vec<BigInt>>,
    #[serde(with = "crate::intser::matrix")]
    pub jy: Vec<Vec<BigInt>>,
    #[serde(with = "crate::intser::matrix")]
    pub lx: Vec<Vec<BigInt>>,
    #[serde(with = "crate::intser::matrix")]
    pub ly: Vec<Vec<BigInt>>,
    pub lambda: usize,
    pub supplier: SupplierSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ids: Option<StitchIds>,
}

/// Smallest sizes accepted for the given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct Quotas {
    pub a_min: usize,
    pub b_min: usize,
    pub lambda_min: usize,
    /// `q^{S+T}`: size of `J'`.
    pub j_prime: usize,
    /// `3^S (S+T) q^{S+T}`: size of `L'`.
    pub l_prime: usize,
    /// `(S+T) q^{S+T}`: size of `L''`.
    pub l_double_prime: usize,
}

pub(crate) fn quotas(s: usize, t: usize, q: u64) -> Result<Quotas, PipelineError> {
    let too_big = || PipelineError::TooLarge(format!("sizes for S={s}, T={t}, q={q} overflow"));
    let pow = |b: u128, e: usize| -> Result<u128, PipelineError> {
        let e = u32::try_from(e).map_err(|_| too_big())?;
        b.checked_pow(e).ok_or_else(too_big)
    };
    let d = s + t;
    let qd = pow(q as u128, d)?;
    let to_usize = |v: Option<u128>| v.and_then(|v| usize::try_from(v).ok()).ok_or_else(too_big);
    let l2 = (d as u128).checked_mul(qd);
    Ok(Quotas {
        a_min: to_usize(pow(2, s)?.checked_mul(qd))?,
        b_min: to_usize(pow(3, s)?.checked_mul(pow(2, t)?).and_then(|x| l2.and_then(|y| x.checked_mul(y))))?,
        lambda_min: to_usize(Some(pow(2 * q as u128, d)?))?,
        j_prime: to_usize(Some(qd))?,
        l_prime: to_usize(pow(3, s)?.checked_mul(l2.ok_or_else(too_big)?))?,
        l_double_prime: to_usize(l2)?,
    })
}

/// The input after validation: rows in the original orientation.
struct Prepared {
    d: usize,
    quotas: Quotas,
    ids: StitchIds,
    j_rows: Vec<LinkingVector>,
    l_rows: Vec<LinkingVector>,
    jx: Vec<Vec<BigInt>>,
    lx: Vec<Vec<BigInt>>,
    ly: Vec<Vec<BigInt>>,
}

fn block(m: &[Vec<BigInt>], rows: usize, cols: usize, name: &str) -> Result<Vec<Vec<BigInt>>, PipelineError> {
    if cols == 0 && m.is_empty() {
        return Ok(vec![Vec::new(); rows]);
    }
    if m.len() != rows {
        return arg(format!("{name} has {} rows, expected {rows}", m.len()));
    }
    if let Some(i) = m.iter().position(|r| r.len() != cols) {
        return arg(format!("{name} row {i} has {} entries, expected {cols}", m[i].len()));
    }
    Ok(m.to_vec())
}

impl StitchInput {
    pub fn a(&self) -> usize {
        self.jx.len().max(self.jy.len())
    }

    pub fn b(&self) -> usize {
        self.lx.len().max(self.ly.len())
    }

    pub fn ids(&self) -> StitchIds {
        self.ids
            .clone()
            .unwrap_or_else(|| StitchIds::numbered(self.a(), self.b(), self.s, self.t))
    }

    /// Checks every hypothesis of the construction.
    pub fn validate(&self) -> Result<(), PipelineError> {
        self.prepare().map(|_| ())
    }

    fn prepare(&self) -> Result<Prepared, PipelineError> {
        let (s, t, q) = (self.s, self.t, self.q);
        if q == 0 {
            return arg("q must be positive");
        }
        if s + t == 0 {
            return arg("need S + T ≥ 1");
        }
        let (a, b) = (self.a(), self.b());
        let jx = block(&self.jx, a, s, "JX")?;
        let jy = block(&self.jy, a, t, "JY")?;
        let lx = block(&self.lx, b, s, "LX")?;
        let ly = block(&self.ly, b, t, "LY")?;
        let quotas = quotas(s, t, q)?;
        if a < quotas.a_min {
            return arg(format!("A = {a} < 2^S q^(S+T) = {}", quotas.a_min));
        }
        if b < quotas.b_min {
            return arg(format!("B = {b} < 3^S 2^T (S+T) q^(S+T) = {}", quotas.b_min));
        }
        if self.lambda < quotas.lambda_min {
            return arg(format!("λ = {} < (2q)^(S+T) = {}", self.lambda, quotas.lambda_min));
        }
        for (name, m) in [("JX", &jx), ("LY", &ly)] {
            if let Some((i, _)) = m.iter().enumerate().find(|(_, r)| r.iter().any(Zero::is_zero)) {
                return arg(format!("{name} row {i} has a zero entry"));
            }
        }
        let ids = self.ids();
        if ids.j.len() != a || ids.l.len() != b || ids.x.len() != s || ids.y.len() != t {
            return arg("component id lists do not match the matrix sizes");
        }
        let all: BTreeSet<&String> = ids.j.iter().chain(&ids.l).chain(&ids.x).chain(&ids.y).collect();
        if all.len() != a + b + s + t {
            return arg("component ids are not distinct");
        }
        self.supplier.validate()?;
        let join = |x: &[Vec<BigInt>], y: &[Vec<BigInt>]| -> Vec<LinkingVector> {
            x.iter()
                .zip(y)
                .map(|(u, v)| LinkingVector(u.iter().chain(v).cloned().collect()))
                .collect()
        };
        Ok(Prepared {
            d: s + t,
            quotas,
            ids,
            j_rows: join(&jx, &jy),
            l_rows: join(&lx, &ly),
            jx,
            lx,
            ly,
        })
    }

    /// A random input of the smallest admissible size with entries in
    /// `-bound..=bound` and a seeded supplier with the same range.
    pub fn random_minimal(s: usize, t: usize, q: u64, bound: i64, seed: u64) -> Result<Self, PipelineError> {
        use rand::{Rng, SeedableRng};
        let quotas = quotas(s, t, q)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |rows: usize, cols: usize, nonzero: bool| -> Vec<Vec<BigInt>> {
            (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| loop {
                            let v = rng.random_range(-bound..=bound);
                            if !nonzero || v != 0 {
                                break BigInt::from(v);
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let (a, b) = (quotas.a_min, quotas.b_min);
        Ok(StitchInput {
            s,
            t,
            q,
            jx: draw(a, s, true),
            jy: draw(a, t, false),
            lx: draw(b, s, false),
            ly: draw(b, t, true),
            lambda: quotas.lambda_min,
            supplier: SupplierSpec::seeded(rng.random(), -bound, bound),
            ids: None,
        })
    }
}

/// One stitching sphere `F_γ` between `Z_γ` and `Z_{γ+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchStep {
    pub from: String,
    pub to: String,
    #[serde(flatten)]
    pub stitch: ConsecutiveStitch,
}

/// Every choice made by [`stitch_links`], in working orientation (columns
/// multiplied by `column_signs`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub column_signs: Vec<i8>,
    pub j_pattern: String,
    pub j_prime: Vec<usize>,
    pub l_pattern_y: String,
    pub l_prime: Vec<usize>,
    pub l_pattern_x: String,
    pub l_double_prime: Vec<usize>,
    pub alpha: (usize, usize),
    pub beta: Vec<usize>,
    pub base: usize,
    pub j: LinkingVector,
    pub ells: Vec<LinkingVector>,
    pub components: Vec<String>,
    pub z0: LinkingVector,
    pub stitches: Vec<StitchStep>,
    pub chain: Chain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchOutput {
    /// `Z = Σ Z_c + Σ F_c`, components with coefficient 1 and segments as
    /// `P:{from}>{to}#{ℓ}`.
    pub chain: Chain,
    /// `lk(Z, X ∪ Y)` in the original orientation of the targets.
    pub z: LinkingVector,
}

fn window_sum(rows: &[LinkingVector], d: usize) -> LinkingVector {
    rows.iter().fold(LinkingVector::zeros(d), |acc, r| acc.add(r))
}

/// Runs the stitching construction and returns `Z`, its linking vector and
/// the full record of choices.
pub fn stitch_links(input: &StitchInput) -> Result<(StitchOutput, PipelineTrace), PipelineError> {
    let p = input.prepare()?;
    let (s, t, q, d) = (input.s, input.t, input.q, p.d);
    let qt = p.quotas;

    let jsel = select_sign_uniform_sublink(&p.jx, s, qt.j_prime)?;
    let j_prime = jsel.rows[..qt.j_prime].to_vec();
    let lsel = select_sign_uniform_sublink(&p.ly, t, qt.l_prime)?;
    let l_prime = lsel.rows[..qt.l_prime].to_vec();
    let signs: Vec<i8> = jsel.column_signs.iter().chain(&lsel.column_signs).copied().collect();

    let lx_prime: Vec<Vec<BigInt>> = l_prime
        .iter()
        .map(|&b| p.lx[b].iter().zip(&signs).map(|(v, &sg)| v * sg).collect())
        .collect();
    let l3 = select_three_valued_sublink(&lx_prime, s, qt.l_double_prime)?;
    let l_double_prime: Vec<usize> = l3.rows[..qt.l_double_prime].iter().map(|&i| l_prime[i]).collect();

    let jv: Vec<LinkingVector> = j_prime.iter().map(|&a| p.j_rows[a].signed(&signs)).collect();
    let alpha_sel = find_equal_residue_indices(&jv, d, q, 2)?;
    let alpha = (alpha_sel.base, alpha_sel.offsets[0]);
    let j = window_sum(&jv[alpha.0..alpha.1], d);

    let lv: Vec<LinkingVector> = l_double_prime.iter().map(|&b| p.l_rows[b].signed(&signs)).collect();
    let beta = find_equal_residue_indices(&lv, d, q, d + 1)?.indices();
    let lsums = prefix_sums(&lv[..*beta.last().expect("d + 1 ≥ 1 indices")], d);
    let ells: Vec<LinkingVector> = beta[1..].iter().map(|&bi| lsums[bi].sub(&lsums[beta[0]])).collect();

    let base = choose_nonvanishing_base(&j, &ells).ok_or_else(|| {
        PipelineError::InvalidArgument("no nonvanishing base vector; the sign selection is inconsistent".into())
    })?;

    let mut components: Vec<String> = j_prime[alpha.0..alpha.1].iter().map(|&a| p.ids.j[a].clone()).collect();
    let mut z = j.clone();
    if base > 0 {
        components.extend(l_double_prime[beta[0]..beta[base]].iter().map(|&b| p.ids.l[b].clone()));
        z = z.add(&ells[base - 1]);
    }
    let z0 = z.clone();

    let mut stitches = Vec::with_capacity(components.len().saturating_sub(1));
    for w in components.windows(2) {
        let segs: Vec<LinkingVector> = input
            .supplier
            .segments(&w[0], &w[1], input.lambda, d)?
            .iter()
            .map(|v| v.signed(&signs))
            .collect();
        let cs = stitch_consecutive(&z, &segs, q)?;
        z = cs.z.clone();
        stitches.push(StitchStep {
            from: w[0].clone(),
            to: w[1].clone(),
            stitch: cs,
        });
    }
    let chain = build_chain(&components, &stitches);
    let output = StitchOutput {
        chain: chain.clone(),
        z: z.signed(&signs),
    };
    debug_assert!(verify_conclusion(&output.z, q));
    let trace = PipelineTrace {
        column_signs: signs,
        j_pattern: jsel.pattern,
        j_prime,
        l_pattern_y: lsel.pattern,
        l_prime,
        l_pattern_x: l3.pattern,
        l_double_prime,
        alpha,
        beta,
        base,
        j,
        ells,
        components,
        z0,
        stitches,
        chain,
    };
    Ok((output, trace))
}

fn build_chain(components: &[String], stitches: &[StitchStep]) -> Chain {
    let mut chain = Chain::new();
    for c in components {
        chain.add_term(c.clone(), 1);
    }
    for st in stitches {
        for l in st.stitch.range.0..=st.stitch.range.1 {
            chain.add_term(segment_id(&st.from, &st.to, l), 1);
        }
    }
    chain
}

fn mismatch<T>(msg: impl Into<String>) -> Result<T, PipelineError> {
    Err(PipelineError::ReplayMismatch(msg.into()))
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Rebuilds the output of [`stitch_links`] from `trace`, checking every
/// recorded choice against `input` without rerunning the selection engines.
pub fn replay(input: &StitchInput, trace: &PipelineTrace) -> Result<StitchOutput, PipelineError> {
    let p = input.prepare()?;
    let (s, q, d) = (input.s, input.q, p.d);
    let qt = p.quotas;
    let signs = &trace.column_signs;
    if signs.len() != d || signs.iter().any(|&x| x != 1 && x != -1) {
        return mismatch("column signs");
    }
    let positive_after = |row: &[BigInt], sg: &[i8]| row.iter().zip(sg).all(|(v, &x)| (v * x).is_positive());

    if trace.j_prime.len() != qt.j_prime || !strictly_increasing(&trace.j_prime) {
        return mismatch("J' size or order");
    }
    for &a in &trace.j_prime {
        let row = p.jx.get(a).ok_or_else(|| PipelineError::ReplayMismatch(format!("J row {a}")))?;
        let pat = sign_pattern(&LinkingVector(row.clone()), SignAlphabet::TwoValued)?;
        if pat != trace.j_pattern || !positive_after(row, &signs[..s]) {
            return mismatch(format!("J row {a} does not match pattern {}", trace.j_pattern));
        }
    }
    if trace.l_prime.len() != qt.l_prime || !strictly_increasing(&trace.l_prime) {
        return mismatch("L' size or order");
    }
    for &b in &trace.l_prime {
        let row = p.ly.get(b).ok_or_else(|| PipelineError::ReplayMismatch(format!("L row {b}")))?;
        let pat = sign_pattern(&LinkingVector(row.clone()), SignAlphabet::TwoValued)?;
        if pat != trace.l_pattern_y || !positive_after(row, &signs[s..]) {
            return mismatch(format!("L row {b} does not match pattern {}", trace.l_pattern_y));
        }
    }
    let lp: BTreeSet<usize> = trace.l_prime.iter().copied().collect();
    if trace.l_double_prime.len() != qt.l_double_prime || !strictly_increasing(&trace.l_double_prime) {
        return mismatch("L'' size or order");
    }
    for &b in &trace.l_double_prime {
        if !lp.contains(&b) {
            return mismatch(format!("L'' row {b} is not in L'"));
        }
        let signed = LinkingVector(p.lx[b].clone()).signed(&signs[..s]);
        if sign_pattern(&signed, SignAlphabet::ThreeValued)? != trace.l_pattern_x {
            return mismatch(format!("L'' row {b} does not match pattern {}", trace.l_pattern_x));
        }
    }

    let jv: Vec<LinkingVector> = trace.j_prime.iter().map(|&a| p.j_rows[a].signed(signs)).collect();
    let (a0, a1) = trace.alpha;
    if a0 >= a1 || a1 > jv.len() {
        return mismatch("alpha window");
    }
    let j = window_sum(&jv[a0..a1], d);
    if j != trace.j || !j.is_zero_mod(q) {
        return mismatch("j vector");
    }
    let lv: Vec<LinkingVector> = trace.l_double_prime.iter().map(|&b| p.l_rows[b].signed(signs)).collect();
    let beta = &trace.beta;
    if beta.len() != d + 1 || !strictly_increasing(beta) || beta[d] > lv.len() {
        return mismatch("beta indices");
    }
    let ells: Vec<LinkingVector> = beta[1..].iter().map(|&bi| window_sum(&lv[beta[0]..bi], d)).collect();
    if ells != trace.ells || ells.iter().any(|l| !l.is_zero_mod(q)) {
        return mismatch("ell vectors");
    }
    if trace.base > d {
        return mismatch("base index");
    }
    let z0 = if trace.base == 0 { j.clone() } else { j.add(&ells[trace.base - 1]) };
    if z0 != trace.z0 || !verify_conclusion(&z0, q) {
        return mismatch("z0");
    }
    let mut components: Vec<String> = trace.j_prime[a0..a1].iter().map(|&a| p.ids.j[a].clone()).collect();
    if trace.base > 0 {
        components.extend(trace.l_double_prime[beta[0]..beta[trace.base]].iter().map(|&b| p.ids.l[b].clone()));
    }
    if components != trace.components || trace.stitches.len() != components.len().saturating_sub(1) {
        return mismatch("component list");
    }
    let mut z = z0;
    for (w, st) in components.windows(2).zip(&trace.stitches) {
        let (lo, hi) = st.stitch.range;
        if st.from != w[0] || st.to != w[1] || lo == 0 || lo > hi || hi > input.lambda {
            return mismatch(format!("stitch {}>{}", st.from, st.to));
        }
        for l in lo..=hi {
            z.add_assign(&input.supplier.segment(&w[0], &w[1], l, d)?.signed(signs));
        }
        if z != st.stitch.z || !verify_conclusion(&z, q) {
            return mismatch(format!("z after stitch {}>{}", st.from, st.to));
        }
    }
    let chain = build_chain(&components, &trace.stitches);
    if chain != trace.chain {
        return mismatch("chain");
    }

    // Linking vector of the chain from the raw input, original orientation.
    let j_index: HashMap<&str, usize> = p.ids.j.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
    let l_index: HashMap<&str, usize> = p.ids.l.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
    let mut direct = LinkingVector::zeros(d);
    for c in &components {
        let row = match (j_index.get(c.as_str()), l_index.get(c.as_str())) {
            (Some(&a), _) => &p.j_rows[a],
            (_, Some(&b)) => &p.l_rows[b],
            _ => return mismatch(format!("unknown component {c}")),
        };
        direct.add_assign(row);
    }
    for st in &trace.stitches {
        for l in st.stitch.range.0..=st.stitch.range.1 {
            direct.add_assign(&input.supplier.segment(&st.from, &st.to, l, d)?);
        }
    }
    if direct != z.signed(signs) {
        return mismatch("chain linking vector");
    }
    Ok(StitchOutput { chain, z: direct })
}
