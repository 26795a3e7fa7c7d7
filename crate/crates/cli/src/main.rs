//! Command-line front end for the `johnson-turan` library.
//!
//! Exit codes: 0 on success, 1 when an operation fails, 2 on usage errors
//! (unknown flags, invalid graph parameters, inconsistent options).

mod config;
mod output;

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use johnson_turan::{
    alpha_exact, bound_row, census, enumerate_checkmarks, exchange_audit,
    greedy_maximal_independent_set, induced_edge_count, max_independent_set, merge_reports,
    peel_certify, r_of_l_exact, r_of_l_local_search, read_reports, sweep_missing, total_counts,
    write_reports, AlphaSource, BoundReport, ExtremalMethod, GraphParams, LocalSearchConfig,
    PeelAccounting, PeelMode, PeelOptions, ResultsFormat, SearchLimits, SweepMethod,
    SweepOptions, VertexSet, DEFAULT_EXACT_CAP,
};

use config::SweepConfig;
use output::{big, render, sink, Format};

#[derive(Parser, Debug)]
#[command(name = "johnson-turan", version, about = "Independence numbers, minimum-edge subgraphs and Turan bounds on Johnson graphs G(n,r,s)")]
struct Cli {
    /// Output format (default: table; csv for sweep).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for parallel searches (default: available parallelism).
    #[arg(long, global = true, env = "JOHNSON_TURAN_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vertex, degree and edge counts with regime flags.
    Info(ParamArgs),
    /// Independence number with a lexicographically least witness.
    Alpha(AlphaArgs),
    /// Minimum number of edges induced by l vertices.
    Rl(RlArgs),
    /// Certified edge count by repeated removal of independent sets.
    Peel(PeelArgs),
    /// Neighbour census of W against a maximum independent set.
    Census(CensusArgs),
    /// Every bound over a range of l, written to a resumable results file.
    Sweep(SweepArgs),
    /// One row of closed-form bounds, optionally with r(l).
    Bounds(BoundsArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
}

#[derive(Args, Debug)]
struct AlphaArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Vertex cap for the exact solver.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
    /// Report a greedy maximal independent set instead.
    #[arg(long)]
    greedy: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Exhaustive,
    BranchBound,
    LocalSearch,
}

impl MethodArg {
    fn sweep_method(self) -> SweepMethod {
        match self {
            MethodArg::Auto => SweepMethod::Auto,
            MethodArg::Exhaustive => SweepMethod::Exhaustive,
            MethodArg::BranchBound => SweepMethod::BranchBound,
            MethodArg::LocalSearch => SweepMethod::LocalSearch,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct SearchArgs {
    /// Largest C(C(n,r), l) accepted by exhaustive search.
    #[arg(long)]
    budget: Option<u64>,
    /// Largest vertex count accepted by branch and bound.
    #[arg(long)]
    bb_cap: Option<usize>,
    /// Local-search restarts.
    #[arg(long)]
    restarts: Option<usize>,
    /// Local-search iterations per restart.
    #[arg(long)]
    iterations: Option<u64>,
    /// Local-search iterations without improvement before a restart ends.
    #[arg(long)]
    patience: Option<u64>,
}

#[derive(Args, Debug)]
struct RlArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    l: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false, args = ["input", "random"])]
struct InputArgs {
    /// JSON file holding W as an array of 1-based element lists.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Draw W uniformly with this many vertices (seeded by --seed).
    #[arg(long)]
    random: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AccountingArg {
    Coarse,
    Tight,
}

#[derive(Args, Debug)]
struct PeelArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    input: InputArgs,
    /// Remove greedy maximal instead of maximum independent sets.
    #[arg(long)]
    greedy: bool,
    #[arg(long, value_enum, default_value_t = AccountingArg::Coarse)]
    accounting: AccountingArg,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    input: InputArgs,
    /// List every checkmark.
    #[arg(long)]
    checkmarks: bool,
    /// Run the exchange audit.
    #[arg(long)]
    audit: bool,
    /// Use a greedy maximal independent set when W exceeds the exact cap
    /// (diagnostic census).
    #[arg(long)]
    greedy: bool,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlphaSourceArg {
    Exact,
    RangeMidpoint,
    Frankl,
}

impl From<AlphaSourceArg> for AlphaSource {
    fn from(a: AlphaSourceArg) -> Self {
        match a {
            AlphaSourceArg::Exact => AlphaSource::Exact,
            AlphaSourceArg::RangeMidpoint => AlphaSource::RangeMidpoint,
            AlphaSourceArg::Frankl => AlphaSource::Frankl,
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    l_from: Option<u64>,
    #[arg(long)]
    l_to: Option<u64>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, value_enum)]
    alpha_source: Option<AlphaSourceArg>,
    /// Keep rows already in --out and compute only the missing ones.
    #[arg(long)]
    resume: bool,
    /// TOML experiment file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    l: u64,
    #[arg(long, value_enum, default_value_t = AlphaSourceArg::Exact)]
    alpha_source: AlphaSourceArg,
    /// Also compute r(l) and the peeling count of its witness.
    #[arg(long)]
    rl: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// An error that maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn params_from(n: u32, r: u32, s: u32) -> Result<GraphParams> {
    GraphParams::new(n, r, s).map_err(|e| usage(e.to_string()))
}

impl ParamArgs {
    fn build(self) -> Result<GraphParams> {
        params_from(self.n, self.r, self.s)
    }
}

impl SearchArgs {
    fn limits(&self, cfg: &SweepConfig) -> SearchLimits {
        let d = SearchLimits::default();
        SearchLimits {
            exhaustive_budget: self
                .budget
                .or(cfg.budget)
                .map_or(d.exhaustive_budget, u128::from),
            branch_bound_cap: self.bb_cap.or(cfg.bb_cap).unwrap_or(d.branch_bound_cap),
            ..d
        }
    }

    fn local(&self, seed: u64, cfg: &SweepConfig) -> LocalSearchConfig {
        let d = LocalSearchConfig::default();
        LocalSearchConfig {
            seed,
            restarts: self.restarts.or(cfg.restarts).unwrap_or(d.restarts),
            iterations: self.iterations.or(cfg.iterations).unwrap_or(d.iterations),
            patience: self.patience.or(cfg.patience).unwrap_or(d.patience),
        }
    }
}

fn load_w(p: GraphParams, input: &InputArgs, seed: u64) -> Result<VertexSet> {
    if let Some(path) = &input.input {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Ok(VertexSet::from_json(p, &text)?)
    } else {
        let size = input.random.expect("clap enforces one input source");
        Ok(VertexSet::random(p, size, seed)?)
    }
}

fn header(p: &GraphParams) -> Map<String, Value> {
    Map::from_iter([
        ("n".to_string(), json!(p.n())),
        ("r".to_string(), json!(p.r())),
        ("s".to_string(), json!(p.s())),
    ])
}

/// `header(p)` followed by the fields of `body` (an object).
fn with_header(p: &GraphParams, body: Value) -> Value {
    let mut map = header(p);
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

fn emit(cli: &Cli, value: &Value, default: Format) -> Result<()> {
    let mut out = sink(cli.out.as_deref())?;
    render(value, cli.format.unwrap_or(default), &mut *out)
}

fn cmd_info(cli: &Cli, args: ParamArgs) -> Result<()> {
    let p = args.build()?;
    let counts = total_counts(&p)?;
    let mut map = header(&p);
    map.insert("vertices".into(), big(counts.vertices));
    map.insert("degree".into(), big(counts.degree));
    map.insert("edges".into(), big(counts.edges));
    map.insert("prime_power_regime".into(), json!(p.prime_power_regime()));
    map.insert("degenerate".into(), json!(p.is_degenerate()));
    emit(cli, &Value::Object(map), Format::Table)
}

fn cmd_alpha(cli: &Cli, args: &AlphaArgs) -> Result<()> {
    let p = args.params.build()?;
    let res = if args.greedy {
        greedy_maximal_independent_set(&VertexSet::all(p), args.seed)
    } else {
        alpha_exact(&p, args.cap)?
    };
    let value = with_header(
        &p,
        json!({
            "alpha": res.cardinality,
            "exact": res.exact,
            "witness": res.witness,
        }),
    );
    emit(cli, &value, Format::Table)
}

fn cmd_rl(cli: &Cli, args: &RlArgs) -> Result<()> {
    let p = args.params.build()?;
    let cfg = SweepConfig::default();
    let limits = args.search.limits(&cfg);
    let local = args.search.local(args.seed, &cfg);
    let method = args
        .method
        .sweep_method()
        .resolve(&p, args.l, &limits)
        .expect("a concrete method is always chosen");
    let res = match method {
        ExtremalMethod::LocalSearch => r_of_l_local_search(&p, args.l, &local, &limits)?,
        exact => r_of_l_exact(&p, args.l, exact, &limits)?,
    };
    emit(cli, &with_header(&p, serde_json::to_value(&res)?), Format::Table)
}

fn cmd_peel(cli: &Cli, args: &PeelArgs) -> Result<()> {
    let p = args.params.build()?;
    let w = load_w(p, &args.input, args.seed)?;
    let opts = PeelOptions {
        mode: if args.greedy { PeelMode::Greedy } else { PeelMode::Exact },
        accounting: match args.accounting {
            AccountingArg::Coarse => PeelAccounting::Coarse,
            AccountingArg::Tight => PeelAccounting::Tight,
        },
        exact_cap: args.cap,
        greedy_seed: args.seed,
    };
    let trace = peel_certify(&w, &opts)?;
    let mut map = header(&p);
    map.insert("w_size".into(), json!(w.len()));
    map.insert("induced_edges".into(), json!(induced_edge_count(&w).0));
    if let Value::Object(fields) = serde_json::to_value(&trace)? {
        map.extend(fields);
    }
    emit(cli, &Value::Object(map), Format::Table)
}

fn cmd_census(cli: &Cli, args: &CensusArgs) -> Result<()> {
    let p = args.params.build()?;
    let w = load_w(p, &args.input, args.seed)?;
    let gamma = if w.len() > args.cap && args.greedy {
        greedy_maximal_independent_set(&w, args.seed)
    } else {
        max_independent_set(&w, args.cap)?
    };
    let report = census(&w, &gamma)?;
    let mut map = header(&p);
    map.insert("gamma".into(), serde_json::to_value(&gamma.witness)?);
    if let Value::Object(fields) = serde_json::to_value(&report)? {
        map.extend(fields);
    }
    if args.checkmarks {
        map.insert("checkmarks".into(), serde_json::to_value(enumerate_checkmarks(&w, &gamma)?)?);
    }
    if args.audit {
        map.insert("audit".into(), serde_json::to_value(exchange_audit(&w, &gamma)?)?);
    }
    emit(cli, &Value::Object(map), Format::Table)
}

fn results_format(format: Format) -> Result<ResultsFormat> {
    match format {
        Format::Csv => Ok(ResultsFormat::Csv),
        Format::Json => Ok(ResultsFormat::Json),
        Format::Table => Err(usage("results files are csv or json")),
    }
}

fn write_rows(out: Option<&Path>, format: Format, rows: &[BoundReport]) -> Result<()> {
    let mut w = sink(out)?;
    match format {
        Format::Table => render(&serde_json::to_value(rows)?, Format::Table, &mut *w),
        other => Ok(write_reports(&mut *w, results_format(other)?, rows)?),
    }
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<()> {
    let cfg = match &args.config {
        Some(path) => SweepConfig::load(path).map_err(|e| usage(format!("{e:#}")))?,
        None => SweepConfig::default(),
    };
    let need = |flag: Option<u32>, key: Option<u32>, name: &str| {
        flag.or(key).ok_or_else(|| usage(format!("--{name} is required (flag or config)")))
    };
    let p = params_from(need(args.n, cfg.n, "n")?, need(args.r, cfg.r, "r")?, need(args.s, cfg.s, "s")?)?;
    let l_from = args.l_from.or(cfg.l_from).unwrap_or(0);
    let l_to = match args.l_to.or(cfg.l_to) {
        Some(l) => l,
        None => u64::try_from(p.vertex_count())
            .map_err(|_| usage("--l-to is required for this graph"))?,
    };
    let method = match (args.method, &cfg.method) {
        (Some(m), _) => m.sweep_method(),
        (None, Some(text)) => SweepMethod::parse(text)
            .ok_or_else(|| usage(format!("unknown method {text:?} in config")))?,
        (None, None) => SweepMethod::Auto,
    };
    let alpha_source = match (args.alpha_source, &cfg.alpha_source) {
        (Some(a), _) => a.into(),
        (None, Some(text)) => AlphaSource::parse(text)
            .ok_or_else(|| usage(format!("unknown alpha source {text:?} in config")))?,
        (None, None) => AlphaSource::Exact,
    };
    let format = match (cli.format, &cfg.format) {
        (Some(f), _) => f,
        (None, Some(text)) => Format::from_str(text, true)
            .map_err(|_| usage(format!("unknown format {text:?} in config")))?,
        (None, None) => Format::Csv,
    };
    let out = cli.out.clone().or(cfg.out.clone());
    let resume = args.resume || cfg.resume.unwrap_or(false);
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let opts = SweepOptions {
        alpha_source,
        method,
        limits: args.search.limits(&cfg),
        local: args.search.local(seed, &cfg),
        exact_cap: args.cap.or(cfg.cap).unwrap_or(DEFAULT_EXACT_CAP),
    };

    let existing = match &out {
        Some(path) if path.exists() => {
            let fmt = results_format(format)?;
            let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            read_reports(file, fmt).with_context(|| format!("cannot parse {}", path.display()))?
        }
        _ => Vec::new(),
    };
    if resume && out.is_none() {
        return Err(usage("--resume needs --out"));
    }
    let rows = if resume {
        let fresh = sweep_missing(&p, l_from..=l_to, &opts, &existing)?;
        merge_reports(existing, fresh)
    } else {
        // Recompute every requested row; other rows already in the file stay.
        let fresh = sweep_missing(&p, l_from..=l_to, &opts, &[])?;
        merge_reports(fresh, existing)
    };
    write_rows(out.as_deref(), format, &rows)
}

fn cmd_bounds(cli: &Cli, args: &BoundsArgs) -> Result<()> {
    let p = args.params.build()?;
    let source: AlphaSource = args.alpha_source.into();
    let alpha = source.resolve(&p, args.cap)?;
    let cfg = SweepConfig::default();
    let opts = SweepOptions {
        alpha_source: source,
        method: if args.rl { args.method.sweep_method() } else { SweepMethod::None },
        limits: args.search.limits(&cfg),
        local: args.search.local(args.seed, &cfg),
        exact_cap: args.cap,
    };
    let report = bound_row(&p, args.l, alpha, &opts)?;
    let format = cli.format.unwrap_or(Format::Table);
    match format {
        Format::Csv => write_rows(cli.out.as_deref(), format, std::slice::from_ref(&report)),
        other => emit(cli, &serde_json::to_value(&report)?, other),
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("cannot start the worker pool")?;
    }
    match &cli.command {
        Command::Info(args) => cmd_info(cli, *args),
        Command::Alpha(args) => cmd_alpha(cli, args),
        Command::Rl(args) => cmd_rl(cli, args),
        Command::Peel(args) => cmd_peel(cli, args),
        Command::Census(args) => cmd_census(cli, args),
        Command::Sweep(args) => cmd_sweep(cli, args),
        Command::Bounds(args) => cmd_bounds(cli, args),
    }
}

/// Short machine-readable name for the failure class.
fn error_kind(err: &anyhow::Error) -> &'static str {
    if err.is::<UsageError>() {
        return "usage";
    }
    match err.downcast_ref::<johnson_turan::Error>() {
        Some(johnson_turan::Error::Domain(_)) => "domain",
        Some(johnson_turan::Error::Sizing { .. }) => "sizing",
        Some(johnson_turan::Error::Overflow(_)) => "overflow",
        Some(johnson_turan::Error::Io(_)) => "io",
        Some(johnson_turan::Error::Format(_)) => "format",
        Some(johnson_turan::Error::Internal(_)) => "internal",
        None => "io",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let kind = error_kind(&err);
            let message = json!({ "error": kind, "message": format!("{err:#}") });
            let _ = writeln!(std::io::stderr(), "{message}");
            if kind == "usage" {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
