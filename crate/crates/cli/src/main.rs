//! `ecsynth`: synthesize, verify and analyze graph-state preparation circuits.

mod report;

use std::fmt;
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ecsynth::codes::{code_from_graph, min_weight_codeword, mind_bound};
use ecsynth::graph::{parse_graph, parse_trace, serialize_graph, serialize_trace, GraphFormat};
use ecsynth::rankwidth::{exact_rankwidth, greedy_decomposition, width, EXACT_GUARD};
use ecsynth::synthesis::{certify, synth, Certificate, Strategy, SynthOptions, SynthResult};
use ecsynth::tableau::{
    check_graph_state, decompose_two_qubit, enumerate_two_qubit_classes, simulate, trace_to_circuit, Circuit, Gate,
    MeasurePolicy, Symplectic2Q,
};
use ecsynth::words::{
    circle_cost_bound, circle_graph, containment_graph, interval_graph, synth_circle_detailed, synth_containment,
    synth_interval, DOWord,
};
use ecsynth::{bounds, gen, oracle, replay, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use report::{OutputFormat, Report};

const EXIT_PARSE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "ecsynth", version, about = "Graph-state synthesis with few two-qubit gates")]
struct Cli {
    /// Seed for every random choice (measurement outcomes, generated instances).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Largest graph whose rank-width is computed exactly.
    #[arg(long, global = true, default_value_t = EXACT_GUARD, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    max_n_exact: usize,
    /// Report wall-clock time (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    Rankwidth,
    Code,
    Trivial,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Rankwidth => Strategy::RankwidthGuided,
            StrategyArg::Code => Strategy::CodeGuided,
            StrategyArg::Trivial => Strategy::TrivialHalf,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormatArg {
    /// Edge list when the first line is a number, graph6 otherwise.
    Auto,
    EdgeList,
    Graph6,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WordClass {
    Interval,
    Containment,
    Circle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Trees,
    Cycles,
    Words,
    Graphs,
}

#[derive(clap::Args)]
struct GraphInput {
    /// Graph file, or `-` for standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = GraphFormatArg::Auto)]
    graph_format: GraphFormatArg,
}

#[derive(clap::Args)]
struct Outputs {
    /// Where to write the operation trace (default: input path with `.trace`).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Where to write the compiled circuit (default: input path with `.circuit`).
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Print statistics only.
    #[arg(long)]
    no_write: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a construction trace for a graph and certify it.
    Synth {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        #[command(flatten)]
        out: Outputs,
    },
    /// Replay a trace and simulate its circuit against a target graph.
    Verify {
        /// Trace file.
        trace: PathBuf,
        #[command(flatten)]
        graph: GraphInput,
    },
    /// Exact EC-complexity by exhaustive search.
    Oracle {
        /// Tabulate every graph on this many vertices.
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        n: Option<usize>,
        /// Look up a single graph.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Also tabulate the variant with one deletable extra vertex.
        #[arg(long)]
        ancilla: bool,
    },
    /// Rank-width and a rank-decomposition.
    Rankwidth {
        #[command(flatten)]
        graph: GraphInput,
    },
    /// Graphs defined by double occurrence words.
    Words {
        #[command(subcommand)]
        command: WordsCommand,
    },
    /// Two-qubit Clifford normal forms.
    Clifford {
        #[command(subcommand)]
        command: CliffordCommand,
    },
    /// The additive code of a graph.
    Code {
        #[command(subcommand)]
        command: CodeCommand,
    },
    /// Cost and timing tables over generated families.
    Bench {
        suite: Suite,
        /// Instances per size.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum WordsCommand {
    /// Print the graph a word defines.
    Build {
        /// Word file, or `-` for standard input.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = WordClass::Circle)]
        class: WordClass,
        #[arg(long, value_enum, default_value_t = GraphFormatArg::EdgeList)]
        graph_format: GraphFormatArg,
    },
    SynthInterval {
        input: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
    SynthCircle {
        input: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
    SynthContainment {
        input: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
}

#[derive(Subcommand)]
enum CliffordCommand {
    /// Classify all 720 two-qubit symplectic matrices.
    Classify,
    /// Decompose one matrix, given as 16 bits row by row.
    Decompose { matrix: String },
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Minimum distance and a minimum-weight codeword.
    Mindist {
        #[command(flatten)]
        graph: GraphInput,
    },
}

/// Unreadable or malformed input; maps to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_error(path: &Path, e: impl fmt::Display) -> anyhow::Error {
    InputError(format!("{}: {e}", path.display())).into()
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| input_error(path, e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| input_error(path, e))
    }
}

fn resolve_format(text: &str, arg: GraphFormatArg) -> GraphFormat {
    match arg {
        GraphFormatArg::EdgeList => GraphFormat::EdgeList,
        GraphFormatArg::Graph6 => GraphFormat::Graph6,
        GraphFormatArg::Auto => {
            let first =
                text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty()).unwrap_or("");
            if first.starts_with(|c: char| c.is_ascii_digit()) {
                GraphFormat::EdgeList
            } else {
                GraphFormat::Graph6
            }
        }
    }
}

fn load_graph(src: &GraphInput) -> Result<Graph> {
    let text = read_input(&src.input)?;
    parse_graph(&text, resolve_format(&text, src.graph_format)).map_err(|e| input_error(&src.input, e))
}

fn load_word(path: &Path) -> Result<DOWord> {
    DOWord::parse(&read_input(path)?).map_err(|e| input_error(path, e))
}

struct Timer(Option<Instant>);

impl Timer {
    fn start(enabled: bool) -> Timer {
        Timer(enabled.then(Instant::now))
    }

    fn ms(&self) -> Option<String> {
        self.0.map(|t| format!("{:.3}", t.elapsed().as_secs_f64() * 1e3))
    }

    fn report(&self, r: &mut Report) {
        if let Some(ms) = self.ms() {
            r.field("wall_ms", ms);
        }
    }
}

fn emit(r: &Report, cli: &Cli) {
    print!("{}", r.render(cli.format));
}

fn opt<T: fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "none".to_string(), |v| v.to_string())
}

fn write_artifacts(input: &Path, out: &Outputs, res: &SynthResult, r: &mut Report) -> Result<()> {
    let circuit = trace_to_circuit(&res.trace)?;
    r.field("cz_count", circuit.cz_count());
    if out.no_write {
        return Ok(());
    }
    let from_stdin = input.as_os_str() == "-";
    let pick = |explicit: &Option<PathBuf>, ext: &str| {
        explicit.clone().or_else(|| (!from_stdin).then(|| input.with_extension(ext)))
    };
    if let Some(p) = pick(&out.trace, "trace") {
        fs::write(&p, serialize_trace(&res.trace)).with_context(|| format!("writing {}", p.display()))?;
        r.field("trace_file", p.display());
    }
    if let Some(p) = pick(&out.circuit, "circuit") {
        fs::write(&p, circuit.serialize()).with_context(|| format!("writing {}", p.display()))?;
        r.field("circuit_file", p.display());
    }
    Ok(())
}

fn certificate_fields(r: &mut Report, cert: &Certificate) {
    r.field("lower_bound", opt(cert.lower));
    r.field("upper_generic", cert.upper_generic);
    r.field("within_generic", cert.within_generic);
    r.field("upper_rankwidth", opt(cert.upper_rankwidth));
    r.field("within_rankwidth", opt(cert.within_rankwidth));
}

/// Certifies `res` against `g`; prints the failure and returns exit code 3 on error.
fn certify_or_fail(g: &Graph, res: &SynthResult, r: &mut Report) -> bool {
    match certify(g, res) {
        Ok(cert) => {
            certificate_fields(r, &cert);
            r.field("certificate", "ok");
            true
        }
        Err(e) => {
            r.field("certificate", format!("failed ({e})"));
            false
        }
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    }
}

fn cmd_synth(cli: &Cli, src: &GraphInput, strategy: StrategyArg, out: &Outputs) -> Result<ExitCode> {
    let g = load_graph(src)?;
    let timer = Timer::start(cli.timing);
    let opts = SynthOptions { strategy: strategy.into(), max_exact: cli.max_n_exact };
    let res = synth(&g, opts)?;
    let mut r = Report::new();
    r.field("n", g.n())
        .field("edges", g.edge_count())
        .field("strategy", res.strategy)
        .field("cost", res.cost)
        .field("rankwidth", opt(res.bounds.rankwidth))
        .field("rankwidth_exact", res.bounds.rankwidth_exact);
    let ok = certify_or_fail(&g, &res, &mut r);
    write_artifacts(&src.input, out, &res, &mut r)?;
    timer.report(&mut r);
    emit(&r, cli);
    Ok(status(ok))
}

fn cmd_verify(cli: &Cli, trace_path: &Path, src: &GraphInput) -> Result<ExitCode> {
    let trace = parse_trace(&read_input(trace_path)?).map_err(|e| input_error(trace_path, e))?;
    let g = load_graph(src)?;
    let mut r = Report::new();
    r.field("n", g.n()).field("cost", trace.cost());
    let replay_ok = match replay(&trace) {
        Ok(h) if h == g => {
            r.field("replay", "match");
            true
        }
        Ok(_) => {
            r.field("replay", "mismatch");
            false
        }
        Err(e) => {
            r.field("replay", format!("error ({e})"));
            emit(&r, cli);
            return Ok(ExitCode::from(EXIT_VERIFY));
        }
    };
    let circuit = trace_to_circuit(&trace)?;
    let sim = simulate(&circuit, &mut MeasurePolicy::seeded(cli.seed))?;
    let check = check_graph_state(&sim.tableau, &g);
    r.field("cz_count", circuit.cz_count()).field("state", &check);
    emit(&r, cli);
    Ok(status(replay_ok && check.is_match()))
}

fn cmd_oracle(cli: &Cli, n: Option<usize>, graph: Option<&Path>, ancilla: bool) -> Result<ExitCode> {
    let timer = Timer::start(cli.timing);
    let mut r = Report::new();
    if let Some(path) = graph {
        let g = load_graph(&GraphInput { input: path.to_path_buf(), graph_format: GraphFormatArg::Auto })?;
        r.field("n", g.n()).field("distance", oracle::exact_ec(&g)?);
    } else {
        let n = n.expect("clap requires --n or --graph");
        let table = oracle::exact_ec_all(n)?;
        let hist: Vec<String> = table.histogram().iter().enumerate().map(|(d, c)| format!("{d}:{c}")).collect();
        r.field("n", n).field("graphs", table.len()).field("max", table.max()).field("histogram", hist.join(","));
        if ancilla {
            let with = oracle::exact_ec_with_ancilla(n)?;
            let differing = with.dist.iter().zip(table.distances()).filter(|(a, b)| a != b).count();
            r.field("max_with_ancilla", with.max()).field("ancilla_differs", differing);
        }
    }
    timer.report(&mut r);
    emit(&r, cli);
    Ok(ExitCode::SUCCESS)
}

fn cmd_rankwidth(cli: &Cli, src: &GraphInput) -> Result<ExitCode> {
    let g = load_graph(src)?;
    let timer = Timer::start(cli.timing);
    let mut r = Report::new();
    r.field("n", g.n());
    if g.n() <= cli.max_n_exact.min(EXACT_GUARD) {
        let (rw, d) = exact_rankwidth(&g)?;
        r.field("rankwidth", rw).field("exact", true);
        if let Some(d) = d {
            r.field("decomposition", d.to_newick());
        }
    } else {
        let d = greedy_decomposition(&g)?;
        r.field("rankwidth_upper", width(&g, &d)?).field("exact", false).field("decomposition", d.to_newick());
    }
    timer.report(&mut r);
    emit(&r, cli);
    Ok(ExitCode::SUCCESS)
}

fn cmd_words(cli: &Cli, cmd: &WordsCommand) -> Result<ExitCode> {
    let timer = Timer::start(cli.timing);
    let (input, out) = match cmd {
        WordsCommand::Build { input, class, graph_format } => {
            let m = load_word(input)?;
            let g = match class {
                WordClass::Interval => interval_graph(&m),
                WordClass::Containment => containment_graph(&m),
                WordClass::Circle => circle_graph(&m),
            };
            let format = match graph_format {
                GraphFormatArg::Graph6 => GraphFormat::Graph6,
                _ => GraphFormat::EdgeList,
            };
            print!("{}", serialize_graph(&g, format)?);
            return Ok(ExitCode::SUCCESS);
        }
        WordsCommand::SynthInterval { input, out }
        | WordsCommand::SynthCircle { input, out }
        | WordsCommand::SynthContainment { input, out } => (input, out),
    };
    let m = load_word(input)?;
    let n = m.n();
    let mut r = Report::new();
    r.field("n", n);
    let (target, res, ok) = match cmd {
        WordsCommand::SynthInterval { .. } => {
            let res = synth_interval(&m)?;
            let expected = (2 * n).saturating_sub(2);
            r.field("cost", res.cost).field("expected", expected);
            let ok = res.cost == expected;
            (interval_graph(&m), res, ok)
        }
        WordsCommand::SynthCircle { .. } => {
            let detail = synth_circle_detailed(&m)?;
            let worst = detail
                .reroute_degrees
                .iter()
                .zip(&detail.step_sizes)
                .all(|(&d, &k)| d <= bounds::reroute_degree_bound(k));
            let max_deg = detail.reroute_degrees.iter().copied().max().unwrap_or(0);
            let bound = circle_cost_bound(n);
            let res = detail.result;
            r.field("cost", res.cost)
                .field("cost_bound", bound)
                .field("max_reroute_degree", max_deg)
                .field("degree_bound", bounds::reroute_degree_bound(n));
            let ok = res.cost <= bound && worst;
            (circle_graph(&m), res, ok)
        }
        _ => {
            let res = synth_containment(&m)?;
            let parts = synth_interval(&m)?.cost + synth_circle_detailed(&m)?.result.cost + n;
            r.field("cost", res.cost).field("interval_plus_circle_plus_n", parts);
            let ok = res.cost == parts;
            (containment_graph(&m), res, ok)
        }
    };
    let certified = certify_or_fail(&target, &res, &mut r);
    write_artifacts(input, out, &res, &mut r)?;
    timer.report(&mut r);
    emit(&r, cli);
    Ok(status(ok && certified))
}

fn gate_counts(c: &Circuit) -> (usize, usize) {
    let cz = c.gates.iter().filter(|g| matches!(g, Gate::Cz(..))).count();
    let swap = c.gates.iter().filter(|g| matches!(g, Gate::Swap(..))).count();
    (cz, swap)
}

fn cmd_clifford(cli: &Cli, cmd: &CliffordCommand) -> Result<ExitCode> {
    let mut r = Report::new();
    match cmd {
        CliffordCommand::Classify => {
            let counts = enumerate_two_qubit_classes();
            let mut round_trips = 0;
            for bits in 0..=u16::MAX {
                let m = Symplectic2Q::from_u16(bits);
                if !m.is_symplectic() {
                    continue;
                }
                let c = decompose_two_qubit(&m)?;
                let (cz, swap) = gate_counts(&c);
                if Symplectic2Q::of_gates(&c.gates)? == m && cz <= 1 && swap <= 1 {
                    round_trips += 1;
                }
            }
            for (label, count) in ["a", "b", "c", "d"].iter().zip(counts.per_class) {
                r.field(&format!("class_{label}"), count);
            }
            r.field("total", counts.total).field("unclassified", counts.unclassified).field("round_trips", round_trips);
            emit(&r, cli);
            Ok(status(counts.unclassified == 0 && round_trips == counts.total))
        }
        CliffordCommand::Decompose { matrix } => {
            let m: Symplectic2Q = matrix.parse().map_err(|e| InputError(format!("matrix `{matrix}`: {e}")))?;
            let form = ecsynth::tableau::classify(&m)?;
            let c = decompose_two_qubit(&m)?;
            let (cz, swap) = gate_counts(&c);
            let gates: Vec<String> = c.gates.iter().map(|g| g.to_string()).collect();
            r.field("class", form.class.label()).field("cz", cz).field("swap", swap).field("gates", gates.join("; "));
            emit(&r, cli);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_code(cli: &Cli, cmd: &CodeCommand) -> Result<ExitCode> {
    let CodeCommand::Mindist { graph } = cmd;
    let g = load_graph(graph)?;
    let timer = Timer::start(cli.timing);
    let word = min_weight_codeword(&code_from_graph(&g))?;
    let n = g.n();
    let support: Vec<String> = word.support().iter().map(|v| v.to_string()).collect();
    let mut r = Report::new();
    r.field("n", n)
        .field("min_distance", word.weight())
        .field("support", support.join(","))
        .field("bound", mind_bound(n));
    if n % 6 == 1 {
        r.field("conjectured_bound", 2 * (n / 6) + 1);
    }
    timer.report(&mut r);
    emit(&r, cli);
    Ok(status(word.weight() <= mind_bound(n)))
}

fn cmd_bench(cli: &Cli, suite: Suite, count: usize) -> Result<ExitCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut r = Report::new();
    let mut all_ok = true;
    let mut push = |r: &mut Report, mut cells: Vec<(&'static str, String)>, ok: bool, timer: &Timer| {
        cells.push(("ok", ok.to_string()));
        if let Some(ms) = timer.ms() {
            cells.push(("wall_ms", ms));
        }
        all_ok &= ok;
        r.row(cells);
    };
    let opts = SynthOptions { max_exact: cli.max_n_exact, ..SynthOptions::default() };
    r.field("suite", format!("{suite:?}").to_lowercase()).field("seed", cli.seed);
    match suite {
        Suite::Trees => {
            for n in (5..=50).step_by(5) {
                for _ in 0..count {
                    let g = gen::random_tree(n, &mut rng);
                    let timer = Timer::start(cli.timing);
                    let res = synth(&g, opts)?;
                    let ok = res.cost == n - 1 && certify(&g, &res).is_ok();
                    push(
                        &mut r,
                        vec![("n", n.to_string()), ("cost", res.cost.to_string()), ("expected", (n - 1).to_string())],
                        ok,
                        &timer,
                    );
                }
            }
        }
        Suite::Cycles => {
            for n in 5..=20 {
                let g = Graph::cycle(n);
                let timer = Timer::start(cli.timing);
                let res = synth(&g, opts)?;
                let cert = certify(&g, &res);
                let lower = cert.as_ref().ok().and_then(|c| c.lower);
                let ok = cert.is_ok() && res.cost >= n;
                push(
                    &mut r,
                    vec![("n", n.to_string()), ("cost", res.cost.to_string()), ("lower", opt(lower))],
                    ok,
                    &timer,
                );
            }
        }
        Suite::Words => {
            for n in (10..=100).step_by(10) {
                for _ in 0..count {
                    let m = gen::random_word(n, &mut rng);
                    let timer = Timer::start(cli.timing);
                    let interval = synth_interval(&m)?;
                    let circle = synth_circle_detailed(&m)?.result;
                    let containment = synth_containment(&m)?;
                    let ok = interval.cost == 2 * n - 2
                        && circle.cost <= circle_cost_bound(n)
                        && containment.cost == interval.cost + circle.cost + n
                        && replay(&interval.trace)? == interval_graph(&m)
                        && replay(&circle.trace)? == circle_graph(&m)
                        && replay(&containment.trace)? == containment_graph(&m);
                    push(
                        &mut r,
                        vec![
                            ("n", n.to_string()),
                            ("interval", interval.cost.to_string()),
                            ("circle", circle.cost.to_string()),
                            ("circle_bound", circle_cost_bound(n).to_string()),
                            ("containment", containment.cost.to_string()),
                        ],
                        ok,
                        &timer,
                    );
                }
            }
        }
        Suite::Graphs => {
            for n in 4..=14 {
                for _ in 0..count {
                    let g = gen::random_graph(n, 0.5, &mut rng);
                    let timer = Timer::start(cli.timing);
                    let res = synth(&g, SynthOptions { strategy: Strategy::CodeGuided, ..opts })?;
                    let cert = certify(&g, &res);
                    let ok = cert.as_ref().is_ok_and(|c| c.within_generic);
                    let bound = bounds::generic_upper::<ecsynth::Ratio>(n);
                    push(
                        &mut r,
                        vec![
                            ("n", n.to_string()),
                            ("edges", g.edge_count().to_string()),
                            ("cost", res.cost.to_string()),
                            ("generic_bound", bound.to_string()),
                        ],
                        ok,
                        &timer,
                    );
                }
            }
        }
    }
    emit(&r, cli);
    Ok(status(all_ok))
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Synth { graph, strategy, out } => cmd_synth(cli, graph, *strategy, out),
        Command::Verify { trace, graph } => cmd_verify(cli, trace, graph),
        Command::Oracle { n, graph, ancilla } => cmd_oracle(cli, *n, graph.as_deref(), *ancilla),
        Command::Rankwidth { graph } => cmd_rankwidth(cli, graph),
        Command::Words { command } => cmd_words(cli, command),
        Command::Clifford { command } => cmd_clifford(cli, command),
        Command::Code { command } => cmd_code(cli, command),
        Command::Bench { suite, count } => cmd_bench(cli, *suite, *count),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(EXIT_PARSE)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
