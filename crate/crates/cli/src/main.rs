//! `linkforge`: batch front end emitting one JSON report per run.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.

mod report;

use clap::{Args, Parser, Subcommand};
use linkforge_core::geomlink::{
    conway_gordon_invariant, gauss_linking_oracle, linking_number, random_general_position_embedding,
    search_mod_q_link,
};
use linkforge_core::linkalg::verify_conclusion;
use linkforge_core::pipelines::{
    bipartite_orchestrate, bipartite_stage_sizes, bound_bipartite, bound_key_q, bound_keydisc,
    keyring_search, replay, replay_two_component, stitch_links, theorem_modq_run,
    two_component_pipeline, ExhaustiveOracle, KeyRingInstance, PipelineTrace, SupplierSpec,
    SymbolicPrefixOracle,
};
use linkforge_core::simplicial::{build_path, build_prism_sphere, vsphere_upper, NPath};
use linkforge_core::{
    GeomError, Int, PLEmbedding, PipelineError, PolygonalCycle, SimplicialComplex, SimplicialError,
    StitchInput,
};
use report::{digest, Report};
use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "linkforge", version, about = "Linking-number constructions and checks")]
struct Cli {
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "LINKFORGE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conway–Gordon sum over seeded random embeddings of K6.
    VerifyCg(VerifyCgArgs),
    /// Linking number of two cycles in an embedding file.
    Lk(LkArgs),
    /// Search a seeded K_N embedding for a link with lk a nonzero multiple of q.
    SearchModq(SearchModqArgs),
    /// Emit a stacked n-path.
    GenPath(GenPathArgs),
    /// Emit the prism sphere of a disc with m extra facets.
    GenPrism(GenPrismArgs),
    /// Emit a random minimal stitching input.
    GenStitch(GenStitchArgs),
    /// Run the stitching construction, or replay a trace.
    Stitch(StitchArgs),
    /// Two-component construction from key linking numbers.
    TwoComponent(TwoComponentArgs),
    /// Vertex-count bounds and bipartite stage sizes.
    Bounds(BoundsArgs),
    /// Exhaustive key-ring search.
    Keyring(KeyringArgs),
    /// Bipartite orchestration.
    Bipartite(BipartiteArgs),
    /// Mod-q induction steps from a seeded base link.
    Modq(ModqArgs),
}

#[derive(Args, Debug, Serialize)]
struct VerifyCgArgs {
    #[arg(long)]
    seeds: u64,
    /// First seed; runs `first..first+seeds`.
    #[arg(long, default_value_t = 0)]
    first: u64,
}

#[derive(Args, Debug, Serialize)]
struct LkArgs {
    #[arg(long)]
    embedding: PathBuf,
    /// Comma-separated vertex list.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    c1: Vec<u32>,
    #[arg(long, value_delimiter = ',', num_args = 1)]
    c2: Vec<u32>,
    /// Also evaluate the floating-point Gauss integral.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug, Serialize)]
struct SearchModqArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
}

#[derive(Args, Debug, Serialize)]
struct GenPathArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    len: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct GenPrismArgs {
    /// A path or complex JSON file.
    #[arg(long)]
    disc: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct GenStitchArgs {
    #[arg(long = "S")]
    s: usize,
    #[arg(long = "T")]
    t: usize,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    seed: u64,
    /// Entries are drawn from `-bound..=bound`.
    #[arg(long, default_value_t = 5)]
    bound: i64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct StitchArgs {
    #[arg(long)]
    input: PathBuf,
    /// Replay this trace instead of only running the pipeline.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Where to write the trace; defaults to `<input>.trace.json`.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct TwoComponentArgs {
    /// Comma-separated linking numbers of the keys with the ring.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    keys: Vec<i64>,
    #[arg(long)]
    q: u64,
    /// Supplier JSON file; zero segments if absent.
    #[arg(long, conflicts_with = "seed")]
    supplier: Option<PathBuf>,
    /// Seeded segments in `-bound..=bound`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 5)]
    bound: i64,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    r: u64,
    /// Disc for the keydisc and bipartite bounds; the n-simplex if absent.
    #[arg(long)]
    disc: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct KeyringArgs {
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct BipartiteArgs {
    #[arg(long)]
    r: u64,
    /// Seeded exhaustive oracle (small r only); symbolic prefixes otherwise.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct ModqArgs {
    /// Number of Q-parts of the seeded base link.
    #[arg(long, default_value_t = 0)]
    u0: usize,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    #[arg(long)]
    v: usize,
    #[arg(long, default_value_t = 1)]
    l: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    bound: i64,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::InvalidArgument(_)
            | PipelineError::TooLarge(_)
            | PipelineError::Selection(_)
            | PipelineError::Link(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::InvalidArgument(_) | GeomError::SharedVertex(_) | GeomError::NotGeneralPosition(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Verification(e.to_string()),
        }
    }
}

impl From<SimplicialError> for Failure {
    fn from(e: SimplicialError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Result of one subcommand: the inputs that determine it, its results, the
/// seed, and whether every check passed.
struct Outcome {
    inputs: Value,
    results: Value,
    seed: Option<u64>,
    ok: bool,
}

type Run = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

/// Numbers that fit in a `u64` as JSON numbers, larger ones as strings.
fn big(x: &impl ToString) -> Value {
    let s = x.to_string();
    s.parse::<u64>().map(Value::from).unwrap_or(Value::String(s))
}

fn args_with_files<T: Serialize>(args: &T, files: &[(&str, &str)]) -> Value {
    let mut v = json!({ "args": to_value(args) });
    for (k, text) in files {
        v[*k] = Value::String(text.to_string());
    }
    v
}

fn verify_cg(a: &VerifyCgArgs) -> Run {
    use rayon::prelude::*;
    let seeds: Vec<u64> = (a.first..a.first.saturating_add(a.seeds)).collect();
    let values = seeds
        .par_iter()
        .map(|&s| {
            let e = random_general_position_embedding(6, s)?;
            conway_gordon_invariant(&e)
        })
        .collect::<Result<Vec<u8>, GeomError>>()?;
    let all_one = values.iter().all(|&v| v == 1);
    Ok(Outcome {
        inputs: args_with_files(a, &[]),
        results: json!({ "values": values, "all_one": all_one }),
        seed: Some(a.first),
        ok: all_one,
    })
}

fn lk(a: &LkArgs) -> Run {
    let text = read(&a.embedding)?;
    let e = PLEmbedding::from_json(&text)?;
    let c1 = PolygonalCycle::new(a.c1.clone())?;
    let c2 = PolygonalCycle::new(a.c2.clone())?;
    let value = linking_number(&e, &c1, &c2)?;
    let mut results = json!({ "lk": value });
    let mut ok = true;
    if a.oracle {
        match gauss_linking_oracle(&e, &c1, &c2) {
            Ok(o) => {
                ok = o == value;
                results["oracle"] = json!(o);
            }
            Err(err) => results["oracle"] = json!({ "inconclusive": err.to_string() }),
        }
    }
    Ok(Outcome {
        inputs: args_with_files(a, &[("embedding", &text)]),
        results,
        seed: None,
        ok,
    })
}

fn search_modq(a: &SearchModqArgs) -> Run {
    let e = random_general_position_embedding(a.n, a.seed)?;
    let found = search_mod_q_link(&e, a.q, a.budget)?;
    Ok(Outcome {
        inputs: args_with_files(a, &[]),
        results: json!({ "embedding": serde_json::from_str::<Value>(&e.to_json()).expect("valid JSON"), "found": found }),
        seed: Some(a.seed),
        ok: true,
    })
}

fn gen_path(a: &GenPathArgs) -> Run {
    let p = build_path(a.n, a.len)?;
    let text = p.to_json();
    if let Some(out) = &a.out {
        write(out, &text)?;
    }
    let c = p.complex();
    Ok(Outcome {
        inputs: args_with_files(a, &[]),
        results: json!({
            "vertices": c.vertex_count(),
            "facets": c.facet_count(),
            "boundary_ridges": c.boundary_ridges().len(),
            "path": serde_json::from_str::<Value>(&text).expect("valid JSON"),
        }),
        seed: None,
        ok: true,
    })
}

fn load_disc(path: &Path, text: &str) -> Result<SimplicialComplex, Failure> {
    if let Ok(p) = NPath::from_json(text) {
        return Ok(p.complex().clone());
    }
    SimplicialComplex::from_json(text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn gen_prism(a: &GenPrismArgs) -> Run {
    let text = read(&a.disc)?;
    let disc = load_disc(&a.disc, &text)?;
    let p = build_prism_sphere(&disc, a.m)?;
    let sphere = p.sphere.complex().to_json();
    if let Some(out) = &a.out {
        write(out, &sphere)?;
    }
    let vertices = p.sphere.complex().vertex_count();
    let bound = vsphere_upper(&disc, a.m as u64);
    Ok(Outcome {
        inputs: args_with_files(a, &[("disc", &text)]),
        results: json!({
            "vertices": vertices,
            "vsphere_upper": bound,
            "extra_facets": p.extra_facets,
            "appended_path_length": p.appended_path_length,
            "copies": to_value(&p.copies),
            "sphere": serde_json::from_str::<Value>(&sphere).expect("valid JSON"),
        }),
        seed: None,
        ok: vertices as u64 == bound && p.extra_facets >= a.m,
    })
}

fn gen_stitch(a: &GenStitchArgs) -> Run {
    let input = StitchInput::random_minimal(a.s, a.t, a.q, a.bound, a.seed)?;
    write(&a.out, &serde_json::to_string(&input).expect("input serializes"))?;
    Ok(Outcome {
        inputs: args_with_files(a, &[]),
        results: json!({ "A": input.a(), "B": input.b(), "lambda": input.lambda }),
        seed: Some(a.seed),
        ok: true,
    })
}

fn stitch(a: &StitchArgs) -> Run {
    let text = read(&a.input)?;
    let input: StitchInput = parse(&a.input, &text)?;
    let (out, trace) = stitch_links(&input)?;
    let mut files = vec![("input", text.as_str())];
    let trace_text;
    let mut results = json!({
        "z": to_value(&out.z),
        "chain": to_value(&out.chain),
        "verified": verify_conclusion(&out.z, input.q),
    });
    let mut ok = verify_conclusion(&out.z, input.q);
    if let Some(path) = &a.replay {
        trace_text = read(path)?;
        files.push(("trace", trace_text.as_str()));
        let recorded: PipelineTrace = parse(path, &trace_text)?;
        let replayed = replay(&input, &recorded)?;
        let identical = replayed == out;
        results["replay_identical"] = json!(identical);
        ok &= identical;
    } else {
        let path = a.trace_out.clone().unwrap_or_else(|| {
            let mut p = a.input.clone().into_os_string();
            p.push(".trace.json");
            PathBuf::from(p)
        });
        write(&path, &serde_json::to_string(&trace).expect("trace serializes"))?;
        results["trace"] = json!(path.display().to_string());
    }
    Ok(Outcome {
        inputs: args_with_files(&json!({ "replay": a.replay.is_some() }), &files),
        results,
        seed: None,
        ok,
    })
}

fn two_component(a: &TwoComponentArgs) -> Run {
    let mut files = Vec::new();
    let text;
    let supplier = match (&a.supplier, a.seed) {
        (Some(path), _) => {
            text = read(path)?;
            files.push(("supplier", text.as_str()));
            parse::<SupplierSpec>(path, &text)?
        }
        (None, Some(seed)) => SupplierSpec::seeded(seed, -a.bound, a.bound),
        (None, None) => SupplierSpec::zero(),
    };
    let keys: Vec<Int> = a.keys.iter().map(|&k| Int::from(k)).collect();
    let (out, trace) = two_component_pipeline(&keys, a.q, &supplier)?;
    let replayed = replay_two_component(&keys, a.q, &supplier, &trace)?;
    let q = Int::from(a.q);
    let verified = out.lk != Int::from(0) && (&out.lk % &q) == Int::from(0);
    Ok(Outcome {
        inputs: args_with_files(a, &files),
        results: json!({
            "output": to_value(&out),
            "trace": to_value(&trace),
            "verified": verified,
            "replay_identical": replayed == out,
        }),
        seed: a.seed,
        ok: verified && replayed == out,
    })
}

fn bounds(a: &BoundsArgs) -> Run {
    let n = usize::try_from(a.n).map_err(|_| Failure::Usage("n too large".into()))?;
    let mut files = Vec::new();
    let text;
    let disc = match &a.disc {
        Some(path) => {
            text = read(path)?;
            files.push(("disc", text.as_str()));
            load_disc(path, &text)?
        }
        None => build_path(n, 1)?.complex().clone(),
    };
    if disc.n() != n {
        return Err(Failure::Usage(format!("disc has dimension {}, expected n = {n}", disc.n())));
    }
    let key = bound_key_q(a.q, a.n)?;
    let keydisc = bound_keydisc(&disc, a.r)?;
    let stages = bipartite_stage_sizes(a.r)?;
    let bipartite = bound_bipartite(&disc, a.r)?;
    Ok(Outcome {
        inputs: args_with_files(a, &files),
        results: json!({
            "key": big(&key),
            "keydisc": big(&keydisc),
            "stage_sizes": stages.iter().map(big).collect::<Vec<_>>(),
            "bipartite": big(&bipartite),
        }),
        seed: None,
        ok: true,
    })
}

fn keyring(a: &KeyringArgs) -> Run {
    let text = read(&a.instance)?;
    let inst: KeyRingInstance = parse(&a.instance, &text)?;
    let inputs = args_with_files(a, &[("instance", &text)]);
    match keyring_search(&inst) {
        Ok(sol) => Ok(Outcome {
            inputs,
            results: json!({ "subset": sol.subset, "index_set": sol.index_set }),
            seed: None,
            ok: true,
        }),
        Err(PipelineError::LemmaModelFailure { m, best, .. }) => Ok(Outcome {
            inputs,
            results: json!({ "lemma_model_failure": { "m": m, "best": best } }),
            seed: None,
            ok: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn bipartite(a: &BipartiteArgs) -> Run {
    let res = match a.seed {
        Some(seed) => bipartite_orchestrate(a.r, &mut ExhaustiveOracle::new(seed))?,
        None => bipartite_orchestrate(a.r, &mut SymbolicPrefixOracle { r: a.r })?,
    };
    let zs: Vec<String> = (1..=a.r).map(|j| format!("Z{j}")).collect();
    let rings: Vec<String> = res.system.components()[zs.len()..].iter().map(|c| c.id.clone()).collect();
    let pattern = res
        .system
        .mod2_reduce()
        .contains_complete_bipartite(&refs(&zs), &refs(&rings))
        .map_err(|e| Failure::Verification(e.to_string()))?;
    let ok = pattern && rings.len() as u64 == a.r;
    Ok(Outcome {
        inputs: args_with_files(a, &[]),
        results: json!({
            "m": big(&res.m),
            "stages": res.stages.iter().map(|s| json!({
                "stage": s.stage,
                "input": big(&s.input),
                "needed": big(&s.needed),
                "keys": s.keys,
            })).collect::<Vec<_>>(),
            "rings": rings,
            "complete_bipartite": pattern,
        }),
        seed: a.seed,
        ok,
    })
}

fn modq(a: &ModqArgs) -> Run {
    let supplier = SupplierSpec::seeded(a.seed, -a.bound, a.bound);
    let (out, steps) = theorem_modq_run(a.u0, a.steps, a.v, a.l, a.q, &supplier, a.seed)?;
    let q = Int::from(a.q);
    let mut pairs = Vec::new();
    let mut ok = true;
    for (i, x) in out.q_parts.iter().enumerate() {
        for y in &out.q_parts[i + 1..] {
            let v = out.system.lk(x, y).map_err(|e| Failure::Verification(e.to_string()))?;
            let good = v != Int::from(0) && (&v % &q) == Int::from(0);
            ok &= good;
            pairs.push(json!({ "a": x, "b": y, "lk": big(&v), "ok": good }));
        }
    }
    Ok(Outcome {
        inputs: args_with_files(a, &[]),
        results: json!({
            "components": out.system.len(),
            "q_parts": out.q_parts,
            "q_pairs": pairs,
            "steps": steps.iter().map(|s| json!({
                "u": s.u,
                "A": big(&s.parameters.a),
                "lambda": big(&s.parameters.lambda),
                "w": big(&s.parameters.w),
                "z": to_value(&s.z),
            })).collect::<Vec<_>>(),
        }),
        seed: Some(a.seed),
        ok,
    })
}

fn dispatch(cmd: &Command) -> (&'static str, Run) {
    match cmd {
        Command::VerifyCg(a) => ("verify-cg", verify_cg(a)),
        Command::Lk(a) => ("lk", lk(a)),
        Command::SearchModq(a) => ("search-modq", search_modq(a)),
        Command::GenPath(a) => ("gen-path", gen_path(a)),
        Command::GenPrism(a) => ("gen-prism", gen_prism(a)),
        Command::GenStitch(a) => ("gen-stitch", gen_stitch(a)),
        Command::Stitch(a) => ("stitch", stitch(a)),
        Command::TwoComponent(a) => ("two-component", two_component(a)),
        Command::Bounds(a) => ("bounds", bounds(a)),
        Command::Keyring(a) => ("keyring", keyring(a)),
        Command::Bipartite(a) => ("bipartite", bipartite(a)),
        Command::Modq(a) => ("modq", modq(a)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let (name, run) = dispatch(&cli.command);
    match run {
        Ok(o) => {
            let report = Report {
                command: name.to_string(),
                inputs_digest: digest(&o.inputs),
                results: o.results,
                timing_ms: start.elapsed().as_secs_f64() * 1e3,
                seed: o.seed,
                version: env!("CARGO_PKG_VERSION"),
            };
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{}", report.render(cli.pretty));
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
