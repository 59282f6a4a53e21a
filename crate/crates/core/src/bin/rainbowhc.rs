use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};

use rainbow_hc::chg;
use rainbow_hc::cycle::{
    validate_cycle, ColoredHypergraph, CycleFailure, CycleSpec, Hamperm, RainbowCertificate,
};
use rainbow_hc::error::Error;
use rainbow_hc::exact::{parse_rational, to_f64, Rational};
use rainbow_hc::lab::{self, ColorRule, PGrid, SweepConfig};
use rainbow_hc::models::{build_gamma, q_from_p, sample_colored, sample_directed, SampleMode};
use rainbow_hc::moments::{self, MomentParams};
use rainbow_hc::solver::{
    count_hamperms, find_rainbow_cycle, overlap_profile, SearchMode, SearchOutcome,
};

#[derive(Parser)]
#[command(
    name = "rainbowhc",
    version,
    about = "Rainbow Hamilton cycles in randomly colored random hypergraphs"
)]
struct Cli {
    /// Output format for tabular and record output.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a colored random hypergraph and write it as .chg.
    Gen(GenArgs),
    /// Check whether a permutation induces a rainbow cycle of a .chg instance.
    Check(CheckArgs),
    /// Search one instance for a rainbow cycle.
    Solve(SolveArgs),
    /// Count Hamilton and rainbow Hamilton permutations by enumeration.
    Count(CountArgs),
    /// Overlap table N(b, a).
    Overlap(ShapeArgs),
    /// First-moment and threshold formulas.
    Moments(MomentsArgs),
    /// Monte Carlo sweep with independent instances per grid point.
    Sweep(SweepArgs),
    /// Monte Carlo sweep with instances coupled across grid points.
    Csweep(SweepArgs),
    /// Build the (k+1)-uniform auxiliary hypergraph of a loose instance.
    Reduce(ReduceArgs),
    /// Compare undirected and directed models for loose rainbow cycles.
    Couple(CoupleArgs),
}

#[derive(Args, Clone)]
struct ShapeArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    ell: u32,
}

#[derive(Args, Clone)]
struct ColorArgs {
    /// Number of colors.
    #[arg(long, conflicts_with = "c")]
    r: Option<u32>,
    /// Color density; r = floor(c n). Accepts a/b or a decimal.
    #[arg(long)]
    c: Option<String>,
}

impl ColorArgs {
    fn rule(&self) -> Result<ColorRule, Error> {
        match (&self.r, &self.c) {
            (Some(r), _) => Ok(ColorRule::Explicit(*r)),
            (None, Some(c)) => Ok(ColorRule::Density(parse_density(c)?)),
            (None, None) => Err(Error::InvalidInput("one of --r or --c is required".into())),
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    p: String,
    #[command(flatten)]
    colors: ColorArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SampleMode::Enumerate)]
    sample_mode: SampleMode,
    /// Sample the directed model at q = q_from_p(p) instead.
    #[arg(long)]
    directed: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Instance in .chg format.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    ell: u32,
    /// Comma-separated vertex order.
    #[arg(long)]
    perm: String,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance in .chg format; without it one is sampled from --n --k --p --r/--c --seed.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    ell: u32,
    #[arg(long)]
    p: Option<String>,
    #[command(flatten)]
    colors: ColorArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SearchMode::Exhaustive)]
    mode: SearchMode,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    ell: u32,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Edge probability; exact when given as a/b or a decimal.
    #[arg(long)]
    p: String,
    #[command(flatten)]
    colors: ColorArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[command(flatten)]
    colors: ColorArgs,
    /// start:stop:points:spacing with spacing linear or geometric.
    #[arg(long)]
    p_grid: String,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SearchMode::Exhaustive)]
    mode: SearchMode,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = SampleMode::Enumerate)]
    sample_mode: SampleMode,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct CoupleArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 1000)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_prob(text: &str) -> CliResult<f64> {
    let p = parse_rational(text)
        .map(|q| to_f64(&q))
        .ok_or_else(|| Failure::Input(format!("cannot parse probability `{text}`")))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Failure::Input(format!("probability {text} outside [0, 1]")));
    }
    Ok(p)
}

fn parse_density(text: &str) -> Result<Ratio<u64>, Error> {
    let bad = || Error::InvalidInput(format!("cannot parse color density `{text}`"));
    let q = parse_rational(text).ok_or_else(bad)?;
    if q.is_negative() {
        return Err(bad());
    }
    let num = q.numer().to_u64().ok_or_else(bad)?;
    let den = q.denom().to_u64().ok_or_else(bad)?;
    Ok(Ratio::new(num, den))
}

fn read_instance(path: &PathBuf) -> CliResult<ColoredHypergraph> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(chg::parse(&text)?)
}

fn spec_for(h: &ColoredHypergraph, ell: u32) -> CliResult<CycleSpec> {
    Ok(CycleSpec::new(h.n(), h.k(), ell)?)
}

fn certificate_json(cert: &RainbowCertificate) -> Value {
    json!({
        "permutation": cert.hamperm.as_slice(),
        "edges": cert.edges,
        "colors": cert.colors,
    })
}

fn outcome_json(
    outcome: &SearchOutcome,
    mode: SearchMode,
    budget: u64,
    provenance: Value,
) -> Value {
    json!({
        "status": outcome.status,
        "reason": outcome.reason,
        "certificate": outcome.certificate.as_ref().map(certificate_json),
        "nodes_expanded": outcome.nodes_expanded,
        "mode": mode,
        "budget": match mode { SearchMode::Exhaustive => Value::Null, SearchMode::Budgeted => json!(budget) },
        "budget_hit": outcome.budget_hit,
        "provenance": provenance,
    })
}

fn rows_to_csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))
}

fn pretty(value: &impl Serialize) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn sweep_config(args: &SweepArgs) -> CliResult<SweepConfig> {
    let mut cfg = SweepConfig::new(
        args.shape.n,
        args.shape.k,
        args.shape.ell,
        args.colors.rule()?,
        PGrid::parse(&args.p_grid)?,
        args.trials,
        args.seed,
    );
    cfg.mode = args.mode;
    cfg.budget = args.budget;
    cfg.workers = args.workers;
    cfg.sample_mode = args.sample_mode;
    Ok(cfg)
}

#[derive(Serialize)]
struct MomentRow {
    n: u32,
    k: u32,
    ell: u32,
    m: u32,
    r: u64,
    c: f64,
    p: f64,
    expected_y: Option<String>,
    log_expected_y: f64,
    asymptotic_log_expected_y: Option<f64>,
    threshold_general: Option<f64>,
    threshold_tight: Option<f64>,
}

fn run(cli: Cli) -> CliResult<String> {
    let format = cli.format;
    match cli.command {
        Command::Gen(a) => {
            let p = parse_prob(&a.p)?;
            let r = a.colors.rule()?.resolve(a.n);
            let (h, note) = if a.directed {
                let q = q_from_p(p)?;
                (
                    sample_directed(a.n, a.k, q, r, a.seed)?,
                    format!("directed model q={q} seed={}", a.seed),
                )
            } else {
                let mode = format!("{:?}", a.sample_mode).to_lowercase();
                (
                    sample_colored(a.n, a.k, p, r, a.seed, a.sample_mode)?,
                    format!("colored model p={p} seed={} mode={mode}", a.seed),
                )
            };
            Ok(chg::write(&h, &[note]))
        }
        Command::Check(a) => {
            let h = read_instance(&a.input)?;
            let spec = spec_for(&h, a.ell)?;
            let pi: Vec<u32> = a
                .perm
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Failure::Input(format!("bad vertex `{t}` in --perm")))
                })
                .collect::<CliResult<_>>()?;
            let hp = Hamperm::new(pi, spec)?;
            let record = match validate_cycle(&h, &hp)? {
                Ok(cert) => json!({"rainbow": true, "certificate": certificate_json(&cert)}),
                Err(CycleFailure::MissingEdge(i)) => {
                    json!({"rainbow": false, "failure": "missing_edge", "edge_index": i, "edge": hp.edges()[i as usize - 1]})
                }
                Err(CycleFailure::NotRainbow) => {
                    json!({"rainbow": false, "failure": "not_rainbow"})
                }
            };
            pretty(&record)
        }
        Command::Solve(a) => {
            let (h, provenance) = match &a.input {
                Some(path) => (
                    read_instance(path)?,
                    json!({"source": "file", "path": path.display().to_string()}),
                ),
                None => {
                    let (Some(n), Some(k), Some(p)) = (a.n, a.k, a.p.as_deref()) else {
                        return Err(Failure::Input(
                            "solve needs --input or all of --n --k --p".into(),
                        ));
                    };
                    let p = parse_prob(p)?;
                    let r = a.colors.rule()?.resolve(n);
                    let h = sample_colored(n, k, p, r, a.seed, SampleMode::Enumerate)?;
                    (
                        h,
                        json!({"source": "sampled", "n": n, "k": k, "p": p, "r": r, "seed": a.seed, "sample_mode": "enumerate"}),
                    )
                }
            };
            let spec = spec_for(&h, a.ell)?;
            let outcome = find_rainbow_cycle(&h, spec, a.mode, a.budget)?;
            pretty(&outcome_json(&outcome, a.mode, a.budget, provenance))
        }
        Command::Count(a) => {
            let h = read_instance(&a.input)?;
            let spec = spec_for(&h, a.ell)?;
            let (x, y) = count_hamperms(&h, spec)?;
            match format {
                Format::Json => pretty(
                    &json!({"n": h.n(), "k": h.k(), "ell": a.ell, "r": h.r(), "x": x, "y": y}),
                ),
                Format::Csv => Ok(format!(
                    "n,k,ell,r,x,y\n{},{},{},{},{x},{y}\n",
                    h.n(),
                    h.k(),
                    a.ell,
                    h.r()
                )),
            }
        }
        Command::Overlap(a) => {
            let profile = overlap_profile(CycleSpec::new(a.n, a.k, a.ell)?)?;
            #[derive(Serialize)]
            struct Row {
                b: u32,
                a: u32,
                count: u64,
            }
            let rows: Vec<Row> = profile
                .table
                .iter()
                .map(|(&(b, a), &count)| Row { b, a, count })
                .collect();
            match format {
                Format::Csv => rows_to_csv(&rows),
                Format::Json => pretty(
                    &json!({"n": a.n, "k": a.k, "ell": a.ell, "total": profile.total(), "rows": rows}),
                ),
            }
        }
        Command::Moments(a) => {
            let spec = CycleSpec::new(a.shape.n, a.shape.k, a.shape.ell)?;
            let exact_p: Rational = parse_rational(&a.p)
                .ok_or_else(|| Failure::Input(format!("cannot parse probability `{}`", a.p)))?;
            let p = parse_prob(&a.p)?;
            let r = a.colors.rule()?.resolve(spec.n()) as u64;
            let params = MomentParams::new(spec, p, r)?;
            let c = params.c();
            let small = spec.n() <= 40;
            let row = MomentRow {
                n: spec.n(),
                k: spec.k(),
                ell: spec.ell(),
                m: spec.m(),
                r,
                c,
                p,
                expected_y: small.then(|| moments::exact_expected_y(spec, &exact_p, r).to_string()),
                log_expected_y: moments::log_expected_y(&params),
                asymptotic_log_expected_y: moments::asymptotic_log_expected_y(&params).ok(),
                threshold_general: moments::threshold_general(spec.k(), spec.ell(), c, spec.n())
                    .ok(),
                threshold_tight: (spec.ell() + 1 == spec.k())
                    .then(|| moments::threshold_tight(spec.k(), c, spec.n()).ok())
                    .flatten(),
            };
            match format {
                Format::Csv => rows_to_csv(&[row]),
                Format::Json => pretty(&row),
            }
        }
        Command::Sweep(a) => sweep_output(&lab::run_sweep(&sweep_config(&a)?)?, format),
        Command::Csweep(a) => sweep_output(&lab::run_coupled_sweep(&sweep_config(&a)?)?, format),
        Command::Reduce(a) => {
            let h = read_instance(&a.input)?;
            let g = build_gamma(&h)?;
            let (m, n) = (g.m(), h.n());
            let note = format!(
                "auxiliary hypergraph of {} (X = [1,{m}], Y = [{},{n}], Z = [{},{}])",
                a.input.display(),
                m + 1,
                n + 1,
                n + m
            );
            Ok(chg::write(&g.to_hypergraph(), &[note]))
        }
        Command::Couple(a) => {
            let p = parse_prob(&a.p)?;
            pretty(&lab::couple_experiment(
                a.n, a.k, p, a.trials, a.seed, a.workers,
            )?)
        }
    }
}

fn sweep_output(rows: &[lab::SweepResult], format: Format) -> CliResult<String> {
    match format {
        Format::Csv => Ok(lab::to_csv_string(rows)?),
        Format::Json => pretty(&rows),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.out.clone();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        run(cli).and_then(|text| emit(&text, out.as_ref()))
    }));
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
