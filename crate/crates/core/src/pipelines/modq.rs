use super::stitch::{stitch_links, PipelineTrace, StitchIds, StitchInput};
use super::{arg, PipelineError, SupplierSpec};
use crate::linkalg::{Component, LinkSystem, LinkingVector};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Largest link (component count) built or consumed by the mod-q pipeline.
pub const MAX_MODQ_COMPONENTS: usize = 2048;

/// A link together with a partition `P_1, P_2, Q_1..Q_u` of (some of) its
/// components; each `Q_i` is the single component `q_parts[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModqSystem {
    pub system: LinkSystem,
    pub p1: Vec<String>,
    pub p2: Vec<String>,
    pub q_parts: Vec<String>,
}

/// Sizes for one induction step from property `(u, w, λ)` to `(u+1, v, ℓ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModqParameters {
    pub s: BigUint,
    pub t: BigUint,
    /// `A = B = 2^T 3^S (S+T) q^{S+T}`.
    pub a: BigUint,
    pub b: BigUint,
    /// `max(ℓ, (2q)^{S+T})`.
    pub lambda: BigUint,
    /// `S + A`.
    pub w: BigUint,
}

pub fn modq_parameters(u: u64, v: u64, l: u64, q: u64) -> Result<ModqParameters, PipelineError> {
    if v == 0 || l == 0 || q == 0 {
        return arg("v, ℓ and q must be positive");
    }
    let too_big = || PipelineError::TooLarge(format!("u = {u}, v = {v}"));
    let s = u32::try_from(v).map_err(|_| too_big())?;
    let t = u32::try_from(u.checked_add(v).ok_or_else(too_big)?).map_err(|_| too_big())?;
    let d = s.checked_add(t).ok_or_else(too_big)?;
    let a = BigUint::from(2u32).pow(t) * BigUint::from(3u32).pow(s) * d * BigUint::from(q).pow(d);
    let lambda = BigUint::from(l).max(BigUint::from(2 * q as u128).pow(d));
    Ok(ModqParameters {
        s: BigUint::from(s),
        t: BigUint::from(t),
        b: a.clone(),
        w: BigUint::from(s) + &a,
        a,
        lambda,
    })
}

fn violation(condition: &str, detail: impl Into<String>) -> PipelineError {
    PipelineError::PropertyViolation {
        condition: condition.into(),
        detail: detail.into(),
    }
}

/// Checks property `(u, v, ℓ)`:
/// (L1) the parts have sizes `v, v, 1, …, 1` and every pair of components in
/// different parts links nontrivially;
/// (L2) distinct `Q` components link with nonzero multiples of `q`;
/// (L3) every component of `P_1 ∪ P_2` is large for paths of length `ℓ`.
pub fn check_property(m: &ModqSystem, u: usize, v: usize, l: u64, q: u64) -> Result<(), PipelineError> {
    if q == 0 {
        return arg("q must be positive");
    }
    if m.p1.len() != v || m.p2.len() != v || m.q_parts.len() != u {
        return Err(violation(
            "L1",
            format!(
                "part sizes {}, {}, {} Q-parts; expected {v}, {v}, {u}",
                m.p1.len(),
                m.p2.len(),
                m.q_parts.len()
            ),
        ));
    }
    let sys = &m.system;
    let mut seen = HashSet::new();
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(2 + u);
    for part in [m.p1.as_slice(), m.p2.as_slice()].into_iter().chain(m.q_parts.iter().map(std::slice::from_ref)) {
        let mut idx = Vec::with_capacity(part.len());
        for id in part {
            let i = sys.index_of(id).map_err(|_| violation("L1", format!("unknown component {id}")))?;
            if !seen.insert(i) {
                return Err(violation("L1", format!("{id} lies in two parts")));
            }
            idx.push(i);
        }
        parts.push(idx);
    }
    let name = |i: usize| sys.components()[i].id.as_str();
    for (a, pa) in parts.iter().enumerate() {
        for pb in &parts[a + 1..] {
            for &i in pa {
                for &j in pb {
                    if sys.lk_by_index(i, j).is_zero() {
                        return Err(violation("L1", format!("lk({}, {}) = 0", name(i), name(j))));
                    }
                }
            }
        }
    }
    let qb = BigInt::from(q);
    let qs = &parts[2..];
    for (a, pa) in qs.iter().enumerate() {
        for pb in &qs[a + 1..] {
            let (i, j) = (pa[0], pb[0]);
            let lk = sys.lk_by_index(i, j);
            if lk.is_zero() || !lk.mod_floor(&qb).is_zero() {
                return Err(violation(
                    "L2",
                    format!("lk({}, {}) = {lk} is not a nonzero multiple of {q}", name(i), name(j)),
                ));
            }
        }
    }
    for &i in parts[0].iter().chain(&parts[1]) {
        let c = &sys.components()[i];
        if c.path_length < l {
            return Err(violation(
                "L3",
                format!("{} is certified for paths of length {}, need {l}", c.id, c.path_length),
            ));
        }
    }
    Ok(())
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let v = rng.random_range(1..=bound);
    if rng.random::<bool>() {
        v
    } else {
        -v
    }
}

/// A random link with property `(u, v, ℓ)`: parts `P1 = A1..Av`,
/// `P2 = B1..Bv`, `Q_i = Qi`. Linking numbers lie in `[−3, 3]`, nonzero
/// across parts; `Q` pairs link with `q` times a nonzero value.
pub fn seeded_base_system(u: usize, v: usize, l: u64, q: u64, seed: u64) -> Result<ModqSystem, PipelineError> {
    if q == 0 {
        return arg("q must be positive");
    }
    let total = v
        .checked_mul(2)
        .and_then(|x| x.checked_add(u))
        .filter(|&n| n <= MAX_MODQ_COMPONENTS)
        .ok_or_else(|| PipelineError::TooLarge(format!("2·{v} + {u} components exceed {MAX_MODQ_COMPONENTS}")))?;
    let p1: Vec<String> = (1..=v).map(|i| format!("A{i}")).collect();
    let p2: Vec<String> = (1..=v).map(|i| format!("B{i}")).collect();
    let q_parts: Vec<String> = (1..=u).map(|i| format!("Q{i}")).collect();
    let comps = p1
        .iter()
        .chain(&p2)
        .map(|id| Component::new(id.clone(), l))
        .chain(q_parts.iter().map(|id| Component::new(id.clone(), 0)))
        .collect();
    let mut system = LinkSystem::new(comps)?;
    // Part of each component in system order: 0 for P1, 1 for P2, 2.. for Q.
    let part = |i: usize| if i < v { 0 } else if i < 2 * v { 1 } else { 2 + i - 2 * v };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..total {
        for j in i + 1..total {
            let value = match (part(i), part(j)) {
                (a, b) if a == b => rng.random_range(-3..=3),
                (a, b) if a >= 2 && b >= 2 => nonzero(&mut rng, 3) * q as i64,
                _ => nonzero(&mut rng, 3),
            };
            let (a, b) = (system.components()[i].id.clone(), system.components()[j].id.clone());
            system.set_lk(&a, &b, value)?;
        }
    }
    let m = ModqSystem {
        system,
        p1,
        p2,
        q_parts,
    };
    check_property(&m, u, v, l, q)?;
    Ok(m)
}

/// One induction step, with the stitching input and its trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModqStep {
    pub u: usize,
    pub parameters: ModqParameters,
    pub input: StitchInput,
    pub trace: PipelineTrace,
    /// Id of the new component `Z`, placed in `Q_{u+1}`.
    pub z_id: String,
    pub z: LinkingVector,
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn to_usize(x: &BigUint, what: &str) -> Result<usize, PipelineError> {
    x.to_usize()
        .filter(|&n| n <= MAX_MODQ_COMPONENTS)
        .ok_or_else(|| PipelineError::TooLarge(format!("{what} = {x} exceeds {MAX_MODQ_COMPONENTS}")))
}

/// Turns a link with property `(u, w, λ)` into one with property
/// `(u+1, v, ℓ)` by stitching the `J`s and `L`s into a sphere `Z` that links
/// every `X_s` and `Y_t` with a nonzero multiple of `q`.
pub fn theorem_modq_orchestrate(
    base: &ModqSystem,
    u: usize,
    v: usize,
    l: u64,
    q: u64,
    supplier: &SupplierSpec,
) -> Result<(ModqSystem, ModqStep), PipelineError> {
    let params = modq_parameters(u as u64, v as u64, l, q)?;
    let w = to_usize(&params.w, "w")?;
    let lambda = params
        .lambda
        .to_u64()
        .ok_or_else(|| PipelineError::TooLarge(format!("λ = {}", params.lambda)))?;
    check_property(base, u, w, lambda, q)?;
    let a = w - v;
    let sys = &base.system;

    let x: Vec<String> = base.p1[..v].to_vec();
    let l_ids: Vec<String> = base.p1[v..].to_vec();
    let j_ids: Vec<String> = base.p2[v..].to_vec();
    let y: Vec<String> = base.p2[..v].iter().chain(&base.q_parts).cloned().collect();
    let (xr, yr, jr, lr) = (refs(&x), refs(&y), refs(&j_ids), refs(&l_ids));
    let input = StitchInput {
        s: v,
        t: y.len(),
        q,
        jx: sys.submatrix(&jr, &xr)?,
        jy: sys.submatrix(&jr, &yr)?,
        lx: sys.submatrix(&lr, &xr)?,
        ly: sys.submatrix(&lr, &yr)?,
        lambda: lambda as usize,
        supplier: supplier.clone(),
        ids: Some(StitchIds {
            j: j_ids,
            l: l_ids,
            x: x.clone(),
            y: y.clone(),
        }),
    };
    debug_assert_eq!(input.a(), a);
    let (out, trace) = stitch_links(&input)?;

    let mut z_id = format!("Q{}", u + 1);
    while sys.index_of(&z_id).is_ok() {
        z_id.push('\'');
    }
    let kept: Vec<&String> = x.iter().chain(&y).collect();
    let mut comps: Vec<Component> = kept.iter().map(|id| sys.component(id).cloned()).collect::<Result<_, _>>()?;
    comps.push(Component::new(z_id.clone(), 0));
    let mut system = LinkSystem::new(comps)?;
    for (i, a) in kept.iter().enumerate() {
        for b in &kept[i + 1..] {
            system.set_lk(a, b, sys.lk(a, b)?)?;
        }
    }
    for (target, value) in kept.iter().zip(out.z.entries()) {
        system.set_lk(&z_id, target, value.clone())?;
    }
    let mut q_parts: Vec<String> = base.q_parts.clone();
    q_parts.push(z_id.clone());
    let next = ModqSystem {
        system,
        p1: x,
        p2: y[..v].to_vec(),
        q_parts,
    };
    check_property(&next, u + 1, v, l, q)?;
    let step = ModqStep {
        u,
        parameters: params,
        input,
        trace,
        z_id,
        z: out.z,
    };
    Ok((next, step))
}

/// Runs `steps` induction steps ending at property `(u0 + steps, v, ℓ)`,
/// starting from a seeded link with the property the first step needs.
pub fn theorem_modq_run(
    u0: usize,
    steps: usize,
    v: usize,
    l: u64,
    q: u64,
    supplier: &SupplierSpec,
    seed: u64,
) -> Result<(ModqSystem, Vec<ModqStep>), PipelineError> {
    // Parameters needed at each stage, from the target backwards.
    let mut chain = vec![(v, l)];
    for k in (0..steps).rev() {
        let (vk, lk) = *chain.last().expect("nonempty");
        let p = modq_parameters((u0 + k) as u64, vk as u64, lk, q)?;
        let w = to_usize(&p.w, "w")?;
        let lambda = p.lambda.to_u64().ok_or_else(|| PipelineError::TooLarge(p.lambda.to_string()))?;
        chain.push((w, lambda));
    }
    let (v0, l0) = *chain.last().expect("nonempty");
    let mut current = seeded_base_system(u0, v0, l0, q, seed)?;
    let mut trace = Vec::with_capacity(steps);
    for k in 0..steps {
        let (vk, lk) = chain[steps - 1 - k];
        let (next, step) = theorem_modq_orchestrate(&current, u0 + k, vk, lk, q, supplier)?;
        current = next;
        trace.push(step);
    }
    Ok((current, trace))
}
