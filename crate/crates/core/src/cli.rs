//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure or failing table diff, 2 bad
//! arguments, 3 invalid data files.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cubic::{scan_cubic, CubicFieldRecord, CubicMode};
use crate::data::{load_cubic_fields, load_quadratic_fields, DataSource, TableId};
use crate::error::DataError;
use crate::heuristics::{
    expected_exceptional_count, injective_probability, level_raising_densities,
    mertens_count, monte_carlo_injective_with_workers, multiplicity_distribution,
    wieferich_scan_with, ExceptionModel, HeuristicValue,
};
use crate::primes::{PrimeRange, SieveConfig};
use crate::quadratic::{scan_quadratic, QuadFieldRecord, MIN_SCAN_PRIME};
use crate::report::ScanReport;
use crate::scan::{default_workers, ScanOptions};
use crate::verify::{verify_tables, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "leopoldt",
    version,
    about = "Unit-theoretic vanishing tests, Wieferich scans and heuristic calculators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Primes p with eps^(p^2-1) = 1 mod p^2 for real quadratic fields.
    ScanQuad(ScanQuadArgs),
    /// z-invariant scans for complex cubic fields.
    ScanCubic(ScanCubicArgs),
    /// The exceptional set H5 of a cubic field, with and without {2, 3}.
    H5(H5Args),
    /// Wieferich primes to a given base.
    Wieferich(WieferichArgs),
    /// Closed-form heuristic predictions and Monte-Carlo checks.
    #[command(subcommand)]
    Heuristics(HeuristicsCommand),
    /// Recompute the reference tables and print the differences.
    VerifyTables(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FieldSel {
    All,
    One(i64),
}

fn parse_field_sel(s: &str) -> Result<FieldSel, String> {
    if s == "all" {
        return Ok(FieldSel::All);
    }
    s.parse::<i64>()
        .map(FieldSel::One)
        .map_err(|_| format!("expected an integer or \"all\", got {s:?}"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Parallel {
    /// Worker threads; defaults to the number of logical CPUs.
    #[arg(long)]
    workers: Option<usize>,
}

impl Parallel {
    fn workers(&self) -> usize {
        self.workers.unwrap_or_else(default_workers).max(1)
    }
}

#[derive(Args, Debug)]
struct ScanQuadArgs {
    /// Squarefree D in [2, 30], or "all" for every shipped field.
    #[arg(long, value_parser = parse_field_sel)]
    d: FieldSel,
    /// Largest prime examined.
    #[arg(long)]
    pmax: u64,
    /// Report excluded and clear primes as well.
    #[arg(long)]
    full_verdicts: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[command(flatten)]
    par: Parallel,
}

#[derive(Args, Debug)]
struct ScanCubicArgs {
    /// Field discriminant (negative), or "all".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_field_sel)]
    delta: FieldSel,
    #[arg(long)]
    pmax: u64,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    full_verdicts: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[command(flatten)]
    par: Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    H2,
    Ordinary,
}

impl From<ModeArg> for CubicMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::H2 => CubicMode::H2,
            ModeArg::Ordinary => CubicMode::Ordinary,
        }
    }
}

#[derive(Args, Debug)]
struct H5Args {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_field_sel)]
    delta: FieldSel,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
}

#[derive(Args, Debug)]
struct WieferichArgs {
    #[arg(long)]
    base: u64,
    #[arg(long)]
    pmax: u64,
    /// Smallest prime examined.
    #[arg(long, default_value_t = 2)]
    pmin: u64,
    /// Odd numbers per sieve segment.
    #[arg(long)]
    segment_odds: Option<usize>,
    #[command(flatten)]
    par: Parallel,
}

#[derive(Subcommand, Debug)]
enum HeuristicsCommand {
    /// Probability that a random linear map F_p^n -> F_p^m is injective.
    InjectiveProb {
        #[arg(short = 'p')]
        p: u64,
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'm')]
        m: u32,
    },
    /// Seeded Monte-Carlo estimate of the same probability.
    MonteCarlo {
        #[arg(short = 'p')]
        p: u64,
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        par: Parallel,
    },
    /// Densities of the four level-raising cases at p.
    Densities {
        #[arg(short = 'p')]
        p: u64,
    },
    /// Multiplicity distribution (k0 - 1)/k0^i for i = 1..imax.
    MultDist {
        #[arg(long)]
        k0: u64,
        #[arg(long)]
        imax: u32,
    },
    /// Sum of 1/p over primes p <= x next to log log x.
    Mertens {
        #[arg(long)]
        x: u64,
    },
    /// Expected number of exceptional primes up to x.
    ExpectedCount {
        #[arg(long)]
        x: u64,
        /// Exponent d of the 1/p^d model.
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// quad_table, h5_table, cubic_ordinary_table or all.
    #[arg(long, default_value = "all")]
    table: String,
    /// Override the prime bound of the recomputation.
    #[arg(long)]
    pmax: Option<u64>,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
    #[command(flatten)]
    par: Parallel,
}

enum Failure {
    Usage(String),
    Data(DataError),
    Runtime(String),
    Io(std::io::Error),
}

impl From<DataError> for Failure {
    fn from(e: DataError) -> Self {
        Self::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Data(d) => Self::Data(d),
            VerifyError::Scan(s) => Self::Runtime(s.to_string()),
        }
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code. Reports go to `out`, progress and
/// diagnostics to `err`.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let src = DataSource::from_env();
    match dispatch(cli.command, &src, out, err) {
        Ok(code) => code,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, format!("error: {m}")),
                Failure::Data(e) => (EXIT_DATA, format!("data error: {e}")),
                Failure::Runtime(m) => (EXIT_FAILURE, format!("error: {m}")),
                Failure::Io(e) => (EXIT_FAILURE, format!("i/o error: {e}")),
            };
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}

fn dispatch(
    cmd: Command,
    src: &DataSource,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    match cmd {
        Command::ScanQuad(a) => scan_quad_cmd(a, src, out, err),
        Command::ScanCubic(a) => scan_cubic_cmd(a, src, out, err),
        Command::H5(a) => h5_cmd(a, src, out),
        Command::Wieferich(a) => wieferich_cmd(a, out, err),
        Command::Heuristics(h) => heuristics_cmd(h, out),
        Command::VerifyTables(a) => verify_cmd(a, src, out, err),
    }
}

fn write_reports(
    reports: &[ScanReport],
    format: ReportFormat,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match format {
        ReportFormat::Csv => {
            writeln!(out, "{}", ScanReport::CSV_HEADER)?;
            for r in reports {
                out.write_all(r.csv_rows().as_bytes())?;
            }
        }
        ReportFormat::Json => {
            let text = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                serde_json::to_string_pretty(reports).map_err(runtime)?
            };
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}

fn select<T>(
    all: Vec<T>,
    sel: FieldSel,
    key: impl Fn(&T) -> i64,
    what: &str,
) -> Result<Vec<T>, Failure> {
    match sel {
        FieldSel::All => Ok(all),
        FieldSel::One(k) => {
            let chosen: Vec<T> = all.into_iter().filter(|r| key(r) == k).collect();
            if chosen.is_empty() {
                Err(Failure::Usage(format!("no shipped field record for {what} = {k}")))
            } else {
                Ok(chosen)
            }
        }
    }
}

fn progress(err: &mut dyn Write, r: &ScanReport) {
    let _ = writeln!(
        err,
        "{} [{}, {}] {}: {} hits in {} ms",
        r.metadata.field_id,
        r.metadata.range.lo(),
        r.metadata.range.hi(),
        r.metadata.mode,
        r.hits.len(),
        r.metadata.wall_time_ms
    );
    for w in &r.metadata.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn scan_range(lo: u64, pmax: u64) -> Result<PrimeRange, Failure> {
    PrimeRange::new(lo, pmax).map_err(usage)
}

fn scan_options(par: &Parallel, full: bool) -> ScanOptions {
    let opts = ScanOptions::with_workers(par.workers());
    if full {
        opts.full()
    } else {
        opts
    }
}

fn scan_quad_cmd(
    a: ScanQuadArgs,
    src: &DataSource,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let fields = select(load_quadratic_fields(src)?, a.d, QuadFieldRecord::d, "D")?;
    // p = 2 is outside the quadratic test; start at 2 only for full verdicts
    let lo = if a.full_verdicts { 2 } else { MIN_SCAN_PRIME };
    let range = scan_range(lo, a.pmax)?;
    let opts = scan_options(&a.par, a.full_verdicts);
    let mut reports = Vec::with_capacity(fields.len());
    for rec in &fields {
        let r = scan_quadratic(rec, range, &opts).map_err(runtime)?;
        progress(err, &r);
        reports.push(r);
    }
    write_reports(&reports, a.format, out)?;
    Ok(EXIT_OK)
}

fn scan_cubic_cmd(
    a: ScanCubicArgs,
    src: &DataSource,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let fields = select(load_cubic_fields(src)?, a.delta, CubicFieldRecord::delta, "delta")?;
    let range = scan_range(2, a.pmax)?;
    let opts = scan_options(&a.par, a.full_verdicts);
    let mut reports = Vec::with_capacity(fields.len());
    for rec in &fields {
        let r = scan_cubic(rec, range, a.mode.into(), &opts).map_err(runtime)?;
        progress(err, &r);
        reports.push(r);
    }
    write_reports(&reports, a.format, out)?;
    Ok(EXIT_OK)
}

fn fmt_set<'a>(xs: impl IntoIterator<Item = &'a u64>) -> String {
    let items: Vec<String> = xs.into_iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn h5_cmd(a: H5Args, src: &DataSource, out: &mut dyn Write) -> Result<i32, Failure> {
    let fields = select(load_cubic_fields(src)?, a.delta, CubicFieldRecord::delta, "delta")?;
    match a.format {
        TextFormat::Text => {
            for rec in &fields {
                writeln!(
                    out,
                    "{}: H5 \\ {{2, 3}} = {}  (H5 = {})",
                    rec.delta(),
                    fmt_set(&rec.h5().reduced),
                    fmt_set(&rec.h5().raw)
                )?;
            }
        }
        TextFormat::Json => {
            let rows: Vec<_> = fields
                .iter()
                .map(|rec| {
                    json!({
                        "delta": rec.delta(),
                        "ramified": rec.ramified(),
                        "h5": rec.h5().raw,
                        "h5_reduced": rec.h5().reduced,
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&rows).map_err(runtime)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn wieferich_cmd(a: WieferichArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    if a.base < 2 {
        return Err(Failure::Usage("base must be at least 2".into()));
    }
    let range = scan_range(a.pmin, a.pmax)?;
    let sieve = match a.segment_odds {
        Some(0) => return Err(Failure::Usage("segment size must be positive".into())),
        Some(s) => SieveConfig::with_segment_odds(s),
        None => SieveConfig::default(),
    };
    let start = Instant::now();
    let hits = wieferich_scan_with(a.base, range, a.par.workers(), sieve).map_err(runtime)?;
    let _ = writeln!(
        err,
        "base {} over [{}, {}]: {} primes in {} ms",
        a.base,
        range.lo(),
        range.hi(),
        hits.len(),
        start.elapsed().as_millis()
    );
    writeln!(
        out,
        "{}",
        json!({ "base": a.base, "range": range, "primes": hits })
    )?;
    Ok(EXIT_OK)
}

fn value_json(v: &HeuristicValue) -> serde_json::Value {
    json!({ "exact": format!("{}/{}", v.numer, v.denom), "approx": v.approx() })
}

fn heuristics_cmd(h: HeuristicsCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    let doc = match h {
        HeuristicsCommand::InjectiveProb { p, n, m } => {
            let v = injective_probability(p, n, m).map_err(usage)?;
            json!({ "p": p, "n": n, "m": m, "probability": value_json(&v) })
        }
        HeuristicsCommand::MonteCarlo {
            p,
            n,
            m,
            trials,
            seed,
            par,
        } => {
            let exact = injective_probability(p, n, m).map_err(usage)?;
            let r = monte_carlo_injective_with_workers(p, n, m, trials, seed, par.workers())
                .map_err(usage)?;
            let z = (r.frequency - exact.approx()) / r.std_error;
            json!({
                "p": p, "n": n, "m": m,
                "result": r,
                "exact": value_json(&exact),
                "deviation_in_std_errors": if z.is_finite() { json!(z) } else { json!(null) },
            })
        }
        HeuristicsCommand::Densities { p } => {
            let d = level_raising_densities(p).map_err(usage)?;
            json!({
                "p": p,
                "delta_i": value_json(&d[0]),
                "delta_ii": value_json(&d[1]),
                "delta_iii": value_json(&d[2]),
                "delta_iv": value_json(&d[3]),
            })
        }
        HeuristicsCommand::MultDist { k0, imax } => {
            let rows = (1..=imax)
                .map(|i| {
                    multiplicity_distribution(k0, i)
                        .map(|v| json!({ "i": i, "density": value_json(&v) }))
                        .map_err(usage)
                })
                .collect::<Result<Vec<_>, _>>()?;
            json!({ "k0": k0, "rows": rows })
        }
        HeuristicsCommand::Mertens { x } => {
            let m = mertens_count(x).map_err(usage)?;
            json!({ "x": x, "sum_inverse_primes": m.sum, "loglog_x": m.loglog })
        }
        HeuristicsCommand::ExpectedCount { x, d } => {
            let model = if d == 1 {
                ExceptionModel::OneOverP
            } else {
                ExceptionModel::OneOverPPower(d)
            };
            let e = expected_exceptional_count(x, model).map_err(usage)?;
            json!({ "x": x, "d": d, "expected": e })
        }
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).map_err(runtime)?)?;
    Ok(EXIT_OK)
}

fn verify_cmd(
    a: VerifyArgs,
    src: &DataSource,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let tables: Vec<TableId> = if a.table == "all" {
        TableId::ALL.to_vec()
    } else {
        vec![a.table.parse().map_err(Failure::Usage)?]
    };
    let opts = ScanOptions::with_workers(a.par.workers());
    let mut diffs = Vec::new();
    for t in tables {
        let start = Instant::now();
        let d = verify_tables(t, a.pmax, &opts, src)?;
        let _ = writeln!(err, "{t}: recomputed in {} ms", start.elapsed().as_millis());
        diffs.push(d);
    }
    match a.format {
        TextFormat::Text => {
            for d in &diffs {
                write!(out, "{d}")?;
            }
        }
        TextFormat::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&diffs).map_err(runtime)?)?;
        }
    }
    Ok(if diffs.iter().all(|d| d.is_pass()) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}
