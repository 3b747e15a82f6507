//! Acceptance run: one PASS/FAIL line per criterion, with its time budget.

use linkforge_core::geomlink::{
    conway_gordon_invariant, gauss_linking_oracle, linking_number, random_general_position_embedding,
};
use linkforge_core::linkalg::verify_conclusion;
use linkforge_core::pipelines::{
    bipartite_stage_sizes, bound_key_q, replay, replay_two_component, stitch_links, theorem_modq_run,
    two_component_pipeline, PipelineTrace, SupplierSpec,
};
use linkforge_core::selection::{brute_force_shift_oracle, find_nonvanishing_shift};
use linkforge_core::simplicial::{build_path, build_prism_sphere, is_d_large, vsphere_upper};
use linkforge_core::{GeomError, Int, LinkingVector, PolygonalCycle, StitchInput};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn conway_gordon() -> Verdict {
    let mut bad = Vec::new();
    for seed in 0..100 {
        match random_general_position_embedding(6, seed).and_then(|e| conway_gordon_invariant(&e)) {
            Ok(1) => {}
            other => bad.push((seed, format!("{other:?}"))),
        }
    }
    verdict(bad.is_empty(), format!("100 K6 embeddings, {} with sum != 1 {:?}", bad.len(), bad))
}

fn random_cycle_pair(rng: &mut ChaCha8Rng, n: usize) -> (PolygonalCycle, PolygonalCycle) {
    let k1 = rng.random_range(3..=n - 3);
    let k2 = rng.random_range(3..=n - k1);
    let mut verts: Vec<u32> = (0..n as u32).collect();
    verts.shuffle(rng);
    let c1 = PolygonalCycle::new(verts[..k1].to_vec()).expect("distinct vertices");
    let c2 = PolygonalCycle::new(verts[k1..k1 + k2].to_vec()).expect("distinct vertices");
    (c1, c2)
}

fn oracle_agreement() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut conclusive, mut mismatches, mut linked) = (0, Vec::new(), 0);
    for i in 0..100u64 {
        let e = random_general_position_embedding(9, 1000 + i).expect("embedding");
        let (c1, c2) = random_cycle_pair(&mut rng, 9);
        let exact = match linking_number(&e, &c1, &c2) {
            Ok(v) => v,
            Err(err) => return verdict(false, format!("pair {i}: exact linking number failed: {err}")),
        };
        match gauss_linking_oracle(&e, &c1, &c2) {
            Ok(o) => {
                conclusive += 1;
                if exact != 0 {
                    linked += 1;
                }
                if o != exact {
                    mismatches.push((i, exact, o));
                }
            }
            Err(GeomError::OracleInconclusive { .. }) => {}
            Err(err) => return verdict(false, format!("pair {i}: oracle failed: {err}")),
        }
    }
    verdict(
        conclusive >= 95 && mismatches.is_empty(),
        format!("{conclusive}/100 conclusive, {linked} linked, mismatches {mismatches:?}"),
    )
}

fn forbidden_values() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    for d in 1..=4usize {
        let n = 1usize << d;
        for _ in 0..1000 {
            let f = LinkingVector(
                (0..d)
                    .map(|_| loop {
                        let x: i64 = rng.random_range(-5..=5);
                        if x != 0 {
                            break Int::from(x);
                        }
                    })
                    .collect(),
            );
            let v: Vec<LinkingVector> = (0..=n)
                .map(|_| LinkingVector((0..d).map(|_| Int::from(rng.random_range(-5i64..=5))).collect()))
                .collect();
            let ok = find_nonvanishing_shift(&f, &v).is_ok_and(|pair| brute_force_shift_oracle(&f, &v).contains(&pair));
            if !ok {
                failures += 1;
            }
        }
    }
    verdict(failures == 0, format!("4000 instances, {failures} failures"))
}

/// Runs every stitching case, returning failures and replay mismatches.
fn stitching(replays: &mut Vec<String>) -> Verdict {
    let mut failures = Vec::new();
    for (s, t, q) in [(1, 0, 2), (0, 1, 2), (1, 1, 2), (1, 1, 3)] {
        for seed in 0..1000u64 {
            let input = StitchInput::random_minimal(s, t, q, 5, seed).expect("valid parameters");
            match stitch_links(&input) {
                Ok((out, trace)) => {
                    if !verify_conclusion(&out.z, q) {
                        failures.push(format!("({s},{t},{q}) seed {seed}: z = {:?}", out.z));
                    }
                    let wire = serde_json::to_string(&trace).expect("trace serializes");
                    let back: PipelineTrace = serde_json::from_str(&wire).expect("trace parses");
                    if replay(&input, &back).as_ref() != Ok(&out) {
                        replays.push(format!("stitch ({s},{t},{q}) seed {seed}"));
                    }
                }
                Err(e) => failures.push(format!("({s},{t},{q}) seed {seed}: {e}")),
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!("4000 minimal inputs, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    )
}

fn two_component(replays: &mut Vec<String>) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for i in 0..1000u64 {
        let q: u64 = rng.random_range(1..=5);
        let keys: Vec<Int> = (0..q).map(|_| Int::from(rng.random_range(1i64..=30))).collect();
        let supplier = match i % 3 {
            0 => SupplierSpec::seeded(rng.random(), -20, 20),
            1 => SupplierSpec::constant(&[rng.random_range(-7..=7)]),
            _ => SupplierSpec::table((1..q as usize).map(|k| {
                let seg = (0..q).map(|_| vec![rng.random_range(-9i64..=9)]).collect();
                ((format!("Z{k}"), format!("Z{}", k + 1)), seg)
            })),
        };
        match two_component_pipeline(&keys, q, &supplier) {
            Ok((out, trace)) => {
                if out.lk.is_zero() || !out.lk.mod_floor(&Int::from(q)).is_zero() {
                    failures.push(format!("instance {i}: lk = {}", out.lk));
                }
                if replay_two_component(&keys, q, &supplier, &trace).as_ref() != Ok(&out) {
                    replays.push(format!("two-component instance {i}"));
                }
            }
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    verdict(failures.is_empty(), format!("1000 instances, {} failures {:?}", failures.len(), failures.first()))
}

fn simplicial_counts() -> Verdict {
    let mut problems = Vec::new();
    for n in 1..=3usize {
        for l in 1..=12usize {
            let p = build_path(n, l).expect("path");
            let c = p.complex();
            if c.vertex_count() != l + n || c.boundary_ridges().len() != l * (n - 1) + 2 {
                problems.push(format!("path n={n} l={l}: {} vertices, {} ridges", c.vertex_count(), c.boundary_ridges().len()));
            }
            if l > 8 {
                continue;
            }
            let nt = n * c.boundary_ridges().len();
            for m in 0..=20usize {
                let prism = match build_prism_sphere(c, m) {
                    Ok(prism) => prism,
                    Err(e) => {
                        problems.push(format!("prism n={n} l={l} m={m}: {e}"));
                        continue;
                    }
                };
                let sc = prism.sphere.complex();
                let expected_extra = if nt >= m { nt } else { prism.extra_facets.max(m) };
                let euler = 1 + if n % 2 == 0 { 1 } else { -1 };
                if prism.extra_facets < m
                    || (nt >= m && prism.extra_facets != expected_extra)
                    || sc.vertex_count() as u64 != vsphere_upper(c, m as u64)
                    || sc.euler_characteristic() != euler
                    || !sc.is_pseudomanifold()
                    || !sc.is_coherently_oriented()
                {
                    problems.push(format!("prism n={n} l={l} m={m}"));
                }
                if m == 0 && l <= 3 && !matches!(is_d_large(&prism.sphere, c), Ok(Some(_))) {
                    problems.push(format!("prism n={n} l={l} is not D-large"));
                }
            }
        }
    }
    verdict(problems.is_empty(), format!("36 paths, 24 discs x 21 values of m, problems {problems:?}"))
}

fn bounds_table() -> Verdict {
    let b = |x: u64| BigUint::from(x);
    let key = [(1, 1, 24), (2, 1, 96), (1, 2, 36)]
        .iter()
        .map(|&(q, n, want)| (bound_key_q(q, n).ok(), want))
        .collect::<Vec<_>>();
    let stages = bipartite_stage_sizes(2).ok();
    let ok = key.iter().all(|(got, want)| got.as_ref() == Some(&b(*want))) && stages == Some(vec![b(1024), b(16), b(2)]);
    verdict(ok, format!("key(q,n) {key:?}, r=2 stages {stages:?}"))
}

fn modq_replays(replays: &mut Vec<String>) -> usize {
    let mut runs = 0;
    for (q, seed) in [(1u64, 0u64), (2, 1), (2, 2)] {
        let sup = SupplierSpec::seeded(seed, -5, 5);
        if let Ok((_, steps)) = theorem_modq_run(1, 1, 1, 1, q, &sup, seed) {
            for s in steps {
                runs += 1;
                let out = replay(&s.input, &s.trace);
                if out.map(|o| o.z) != Ok(s.z) {
                    replays.push(format!("modq q={q} seed={seed}"));
                }
            }
        } else {
            replays.push(format!("modq q={q} seed={seed} did not run"));
        }
    }
    runs
}

fn main() -> ExitCode {
    let suite = Instant::now();
    let mut replays = Vec::new();
    let mut all_ok = true;
    let mut report = |id: u32, name: &str, limit: Duration, run: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let ok = v.ok && elapsed <= limit;
        all_ok &= ok;
        println!(
            "criterion {id} {}: {name} ({:.2}s, limit {}s) {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            v.detail
        );
    };
    let s = Duration::from_secs;
    report(1, "Conway-Gordon on K6", s(10), &mut conway_gordon);
    report(2, "exact linking number vs Gauss integral on K9", s(30), &mut oracle_agreement);
    report(3, "nonvanishing shift vs brute force", s(10), &mut forbidden_values);
    report(4, "stitching conclusion at minimal sizes", s(60), &mut || stitching(&mut replays));
    report(5, "two-component pipeline", s(10), &mut || two_component(&mut replays));
    report(6, "path and prism counts", s(10), &mut simplicial_counts);
    report(7, "bounds table", s(1), &mut bounds_table);
    report(8, "trace replay determinism", s(300), &mut || {
        let modq = modq_replays(&mut replays);
        verdict(
            replays.is_empty(),
            format!(
                "5000 stitch/two-component replays + {modq} mod-q steps, mismatches {:?}; acceptance total {:.1}s",
                replays,
                suite.elapsed().as_secs_f64()
            ),
        )
    });
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
