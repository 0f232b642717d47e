use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};

use mvmatch::augment::{run_phase_observed, solve, PhaseMode, PhaseObserver, PhaseOptions, SolveOptions};
use mvmatch::gen::{case_rng, random_graph, random_matching, random_maximal_matching};
use mvmatch::graph::{format_matching, parse_graph_str, parse_matching, Graph, InputFormat, Matching};
use mvmatch::level::LevelState;
use mvmatch::oracle::paths::Guard;
use mvmatch::oracle::verify::{verify_instance, VerifyOptions};
use mvmatch::petal::PetalForest;

/// Default seed for `verify` and `bench`.
const DEFAULT_SEED: u64 = 20_260_101;

#[derive(Parser)]
#[command(name = "mvmatch", version, about = "Maximum-cardinality matching in general graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Seed for the random generators of `verify` and `bench`.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write DDFS trace lines to standard error.
    #[arg(long, global = true)]
    trace: bool,
    /// Start from a greedy maximal matching.
    #[arg(long, global = true)]
    warm_start: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a maximum matching.
    Match(InputArgs),
    /// Dump levels, petals and bridge buckets of one phase.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Starting matching in the output format of `match`. Defaults to
        /// the final matching of a full run.
        #[arg(long)]
        matching: Option<PathBuf>,
    },
    /// Compare the engine against the brute-force oracle on random graphs.
    Verify {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Time maximum matching on random graphs; one JSON object per trial.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Graph file, or `-` for standard input.
    #[arg(default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// DIMACS if the first line starts with `c` or `p`, else edge list.
    Auto,
    Dimacs,
    Edgelist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

/// Exit status paired with a message for standard error.
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Fail { code: 2, msg: msg.to_string() }
    }
}

type Run = Result<String, Fail>;

fn read_source(path: &str) -> Result<String, Fail> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text).map_err(|e| Fail::usage(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Fail::usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn load_graph(args: &InputArgs) -> Result<Graph, Fail> {
    let text = read_source(&args.input)?;
    let format = match args.format {
        Format::Dimacs => InputFormat::Dimacs,
        Format::Edgelist => InputFormat::EdgeList,
        Format::Auto => {
            let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
            if first.starts_with('c') || first.starts_with('p') {
                InputFormat::Dimacs
            } else {
                InputFormat::EdgeList
            }
        }
    };
    parse_graph_str(&text, format).map_err(|e| Fail::usage(format!("{}: {e}", args.input)))
}

fn pairs_json(m: &Matching) -> Value {
    Value::from(m.pairs().into_iter().map(|(u, v)| json!([u, v])).collect::<Vec<_>>())
}

fn cmd_match(cli: &Cli, args: &InputArgs) -> Run {
    let g = load_graph(args)?;
    let opts = SolveOptions { phase: PhaseOptions { trace: cli.trace, ..Default::default() }, warm_start: cli.warm_start };
    let sol = solve(&g, opts).map_err(|e| Fail { code: 1, msg: format!("engine error: {e}") })?;
    emit_trace(&sol.trace);
    Ok(match cli.output {
        Output::Text => format_matching(&sol.matching),
        Output::Json => {
            let v = json!({
                "matching": pairs_json(&sol.matching),
                "phases": sol.phases.len(),
                "size": sol.matching.len(),
            });
            format!("{v}\n")
        }
    })
}

fn emit_trace(lines: &[String]) {
    let mut err = io::stderr().lock();
    for l in lines {
        let _ = writeln!(err, "{l}");
    }
}

/// Captures the state at the end of the analyzed phase.
#[derive(Default)]
struct Snapshot {
    levels: String,
    petals: String,
    buckets: String,
    json: Value,
}

fn lv(l: mvmatch::level::Level) -> Value {
    l.value().map_or(Value::Null, Value::from)
}

impl PhaseObserver for Snapshot {
    fn after_phase(&mut self, s: &LevelState<'_>, pf: &PetalForest) {
        self.levels = s.dump_levels();
        self.petals = pf.dump();
        self.buckets = s.dump_buckets();
        let g = s.graph();
        let levels: Vec<Value> = (0..s.vertex_count())
            .map(|v| json!({"vertex": v, "even": lv(s.evenlevel(v)), "odd": lv(s.oddlevel(v)), "tenacity": lv(s.tenacity(v))}))
            .collect();
        let petals: Vec<Value> = pf
            .petals()
            .iter()
            .map(|p| json!({"id": p.id, "bud": p.bud, "bridge": [p.bridge.0, p.bridge.1], "members": p.members}))
            .collect();
        let buckets: Vec<Value> = s
            .bridge_buckets()
            .map(|(t, es)| {
                let edges: Vec<Value> = es.iter().map(|&e| json!([g.endpoints(e).0, g.endpoints(e).1])).collect();
                json!({"tenacity": t, "edges": edges})
            })
            .collect();
        self.json = json!({"levels": levels, "petals": petals, "buckets": buckets});
    }
}

fn cmd_analyze(cli: &Cli, args: &InputArgs, matching: Option<&PathBuf>) -> Run {
    let g = load_graph(args)?;
    let m0 = match matching {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
            parse_matching(&text, &g).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?
        }
        None => {
            let opts = SolveOptions { warm_start: cli.warm_start, ..Default::default() };
            solve(&g, opts).map_err(|e| Fail { code: 1, msg: format!("engine error: {e}") })?.matching
        }
    };
    let mut snap = Snapshot::default();
    let opts = PhaseOptions { mode: PhaseMode::Analyze, trace: cli.trace, ..Default::default() };
    let res = run_phase_observed(&g, &m0, opts, &mut snap).map_err(|e| Fail { code: 1, msg: format!("engine error: {e}") })?;
    emit_trace(&res.trace);
    let lm = res.stats.lm;
    Ok(match cli.output {
        Output::Text => {
            let mut out = String::new();
            let _ = write!(out, "levels\n{}petals\n{}buckets\n{}", snap.levels, snap.petals, snap.buckets);
            let _ = writeln!(out, "lm {}", lm.map_or("inf".to_string(), |l| l.to_string()));
            out
        }
        Output::Json => {
            let mut v = snap.json;
            v["lm"] = lm.map_or(Value::Null, Value::from);
            v["matching"] = pairs_json(&m0);
            format!("{v}\n")
        }
    })
}

fn cmd_verify(cli: &Cli, count: u64, max_n: usize, inject_fault: bool) -> Run {
    let guard = Guard::default();
    if max_n == 0 || max_n > guard.max_vertices {
        return Err(Fail::usage(format!("--max-n must be in 1..={} (the oracle bound), got {max_n}", guard.max_vertices)));
    }
    let opts = VerifyOptions { guard, inject_fault };
    for k in 0..count {
        let (g, m0) = verify_case(cli.seed, k, max_n);
        if let Err(e) = verify_instance(&g, &m0, opts) {
            let mut msg = format!("mismatch at seed {} index {k}: {e}\n", cli.seed);
            let _ = write!(msg, "graph\n{}matching\n{}", mvmatch::graph::write_edge_list(&g), format_matching(&m0));
            return Err(Fail { code: 1, msg });
        }
    }
    Ok(match cli.output {
        Output::Text => format!("verified {count} graphs with n <= {max_n} (seed {})\n", cli.seed),
        Output::Json => format!("{}\n", json!({"count": count, "max_n": max_n, "seed": cli.seed, "verified": true})),
    })
}

/// Case `k` of a verify run: reproducible from the seed and index alone.
fn verify_case(seed: u64, k: u64, max_n: usize) -> (Graph, Matching) {
    let mut r = case_rng(seed, k);
    let n = r.gen_range(1..=max_n);
    let pairs = n * (n - 1) / 2;
    let m = (pairs as f64 * r.gen_range(0.1..0.7)) as usize;
    let g = random_graph(n, m, &mut r);
    let m0 = if r.gen_bool(0.5) { random_maximal_matching(&g, &mut r) } else { random_matching(&g, &mut r) };
    (g, m0)
}

fn cmd_bench(cli: &Cli, n: usize, m: usize, trials: u64) -> Run {
    let mut out = String::new();
    for t in 0..trials {
        let g = random_graph(n, m, &mut case_rng(cli.seed, t));
        let start = Instant::now();
        let sol = solve(&g, SolveOptions { warm_start: cli.warm_start, ..Default::default() })
            .map_err(|e| Fail { code: 1, msg: format!("engine error: {e}") })?;
        let seconds = start.elapsed().as_secs_f64();
        let v = json!({
            "trial": t,
            "seed": cli.seed,
            "n": n,
            "m": g.edge_count(),
            "size": sol.matching.len(),
            "phases": sol.phases.len(),
            "phase_bound": 2 * (n as f64).sqrt().ceil() as usize + 2,
            "seconds": seconds,
            "min_scans": sol.phases.iter().map(|p| p.min_scans).collect::<Vec<_>>(),
            "ddfs_steps": sol.phases.iter().map(|p| p.ddfs_steps).collect::<Vec<_>>(),
            "lm": sol.phases.iter().map(|p| p.lm).collect::<Vec<_>>(),
        });
        let _ = writeln!(out, "{v}");
    }
    Ok(out)
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Match(args) => cmd_match(cli, args),
        Command::Analyze { input, matching } => cmd_analyze(cli, input, matching.as_ref()),
        Command::Verify { count, max_n, inject_fault } => cmd_verify(cli, *count, *max_n, *inject_fault),
        Command::Bench { n, m, trials } => cmd_bench(cli, *n, *m, *trials),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    // Path extraction recurses once per nesting level of petals.
    let worker = std::thread::Builder::new().stack_size(256 << 20).spawn(move || run(&cli));
    let result = match worker.map(|h| h.join()) {
        Ok(Ok(r)) => r,
        _ => Err(Fail { code: 1, msg: "internal error".into() }),
    };
    match result {
        Ok(text) => {
            let mut out = io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if f.code == 1 {
                print!("{}", f.msg);
            } else {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}
