//! `fqmatroid`: predictors, preset simulations, figure tables and self-checks.
//!
//! Exit codes: 0 ok, 1 self-check failure, 2 usage, 3 budget, 4 I/O.

mod predict;
mod table;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fqmatroid::montecarlo::{
    emit, parse_csv, run_experiment, ExperimentConfig, OutputFormat, Preset, Verdict,
};
use fqmatroid::selfcheck::{self, SelfcheckOptions};
use fqmatroid::Error;

/// Environment variable that overrides the default enumeration budget.
pub const BUDGET_ENV: &str = "FQMATROID_BUDGET";

#[derive(Parser)]
#[command(name = "fqmatroid", version, about = "Random matroids over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a predictor and print name=value lines.
    Predict(predict::PredictArgs),
    /// Run an experiment preset and write its aggregate and comparison report.
    Simulate(SimulateArgs),
    /// Print the comparison table of a file written by `simulate`.
    Compare(CompareArgs),
    /// Write figure data as CSV.
    Table(table::TableArgs),
    /// Run the brute-force oracle suites.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    preset: Preset,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed; a random one is drawn and echoed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Enumeration budget (kernel sweeps and subspace searches).
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; defaults to `fqmatroid-<preset>-<seed>.<format>`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: OutputFormat,
}

#[derive(Args)]
struct CompareArgs {
    /// CSV or JSON file written by `simulate`.
    file: PathBuf,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Largest n for the subspace-count suites.
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, hide = true)]
    corrupt_field_table: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
    Io(String),
    /// Stdout closed by the reader; not an error.
    Pipe,
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Pipe => 0,
            Failure::Internal(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(s) | Failure::Budget(s) | Failure::Io(s) | Failure::Internal(s) => s,
            Failure::Pipe => "",
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let s = e.to_string();
        if e.is_budget() {
            return Failure::Budget(s);
        }
        match e {
            Error::Io(_) => Failure::Io(s),
            Error::Consistency(_) => Failure::Internal(s),
            _ => Failure::Usage(s),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::Pipe;
        }
        Failure::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Predict(a) => predict::run(&a),
        Cmd::Simulate(a) => simulate(a),
        Cmd::Compare(a) => compare(&a),
        Cmd::Table(a) => table::run(&a),
        Cmd::Selfcheck(a) => return selfcheck_cmd(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Pipe) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn env_budget() -> CliResult<Option<u128>> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{BUDGET_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn simulate(a: SimulateArgs) -> CliResult<()> {
    let mut c = ExperimentConfig::for_preset(a.preset);
    // presets whose m defaults to n keep doing so when only --n is given
    if let (Some(n), None) = (a.n, a.m) {
        if c.m == Some(c.n) {
            c.m = Some(n);
        }
    }
    c.n = a.n.unwrap_or(c.n);
    c.q = a.q.unwrap_or(c.q);
    c.trials = a.trials.unwrap_or(c.trials);
    c.seed = a.seed.unwrap_or_else(rand::random);
    c.m = a.m.or(c.m);
    c.k = a.k.or(c.k);
    c.c = a.c.or(c.c);
    c.r = a.r.or(c.r);
    c.threads = a.threads;
    if let Some(b) = a.budget.or(env_budget()?) {
        if b == 0 {
            return Err(Failure::Usage("budget must be positive".into()));
        }
        c.budget.kernel_sweep = b;
        c.budget.subspaces = b;
    }
    println!("seed={}", c.seed);
    let res = run_experiment(&c)?;
    let out = a.out.unwrap_or_else(|| {
        PathBuf::from(format!("fqmatroid-{}-{}.{}", c.preset, c.seed, a.format))
    });
    emit(&res, a.format, &out)?;
    let r = &res.report;
    let failed = r.checks.iter().filter(|x| x.verdict == Verdict::Fail).count();
    println!("preset={}", c.preset);
    println!("trials={}", res.aggregate.trials);
    println!("checks={}", r.checks.len());
    println!("failed={failed}");
    println!("insufficient={}", r.insufficient);
    println!("wall_ms={}", res.runtime.wall_ms);
    println!("out={}", out.display());
    Ok(())
}

/// One check row as read back from an output file.
struct Row {
    name: String,
    predicted: String,
    empirical: String,
    metric: String,
    statistic: String,
    verdict: String,
}

fn read_rows(path: &Path) -> CliResult<(String, Vec<Row>)> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let s = |x: &serde_json::Value| match x {
            serde_json::Value::Null => String::new(),
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let seed = s(&v["config"]["seed"]);
        let rows = v["comparison"]["checks"]
            .as_array()
            .ok_or_else(|| Failure::Usage(format!("{}: no comparison.checks", path.display())))?
            .iter()
            .map(|c| Row {
                name: s(&c["name"]),
                predicted: s(&c["predicted"]),
                empirical: s(&c["empirical"]),
                metric: s(&c["metric"]),
                statistic: s(&c["statistic"]),
                verdict: s(&c["verdict"]),
            })
            .collect();
        return Ok((seed, rows));
    }
    let csv = parse_csv(text.as_bytes())?;
    let seed = csv.first().map(|r| r.seed.to_string()).unwrap_or_default();
    let mut rows: Vec<Row> = Vec::new();
    for r in csv.iter().filter(|r| r.section == "check") {
        if rows.last().is_none_or(|x| x.name != r.name) {
            rows.push(Row {
                name: r.name.clone(),
                predicted: String::new(),
                empirical: String::new(),
                metric: String::new(),
                statistic: String::new(),
                verdict: String::new(),
            });
        }
        let row = rows.last_mut().unwrap();
        let v = r.value.clone();
        match r.key.as_str() {
            "predicted" => row.predicted = v,
            "empirical" => row.empirical = v,
            "metric" => row.metric = v,
            "statistic" => row.statistic = v,
            "verdict" => row.verdict = v,
            _ => {}
        }
    }
    Ok((seed, rows))
}

fn short(s: &str) -> String {
    match s.parse::<f64>() {
        Ok(x) if s.contains('.') || s.contains('e') => format!("{x:.6}"),
        _ => s.to_string(),
    }
}

fn compare(a: &CompareArgs) -> CliResult<()> {
    let (seed, rows) = read_rows(&a.file)?;
    let mut out = io::stdout().lock();
    writeln!(out, "seed={seed}")?;
    writeln!(
        out,
        "{:<36} {:>14} {:>14} {:>12} {:>14}  verdict",
        "check", "predicted", "empirical", "metric", "statistic"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:<36} {:>14} {:>14} {:>12} {:>14}  {}",
            r.name,
            short(&r.predicted),
            short(&r.empirical),
            r.metric,
            short(&r.statistic),
            r.verdict
        )?;
    }
    Ok(())
}

fn selfcheck_cmd(a: &SelfcheckArgs) -> ExitCode {
    let opts = SelfcheckOptions {
        max_n: a.max_n,
        seed: a.seed,
        corrupt_field_table: a.corrupt_field_table,
    };
    let suites = selfcheck::run_all(&opts);
    println!("{:<26} {:>8} {:>7}  status", "suite", "cases", "failed");
    for s in &suites {
        let status = if s.passed() { "pass" } else { "FAIL" };
        println!("{:<26} {:>8} {:>7}  {status}", s.name, s.cases, s.failed);
        for m in &s.messages {
            println!("    {m}");
        }
    }
    if suites.iter().all(|s| s.passed()) {
        println!("all suites passed");
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Opens `path` for writing, or stdout when absent.
pub fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}
