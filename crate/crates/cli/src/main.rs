use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::sync::mpsc;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qcong::engine::{Status, Strategy, StrategyKind};
use qcong::numbers::Valuation;
use qcong::powerseries::{
    default_jackson_points, default_rahman_points, default_rahman_q2_points, verify_jackson, verify_rahman,
    verify_rahman_q2, SeriesVerdict,
};
use qcong::registry::{any_parity, default_strategy, target_info, verify_target, Check, Family, Kind, Range, TargetId, REGISTRY};
use qcong::supercong::{check_supercongruence, ClassicalKind, ClassicalTarget};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "qcong", version, about = "Verify q-congruences, supercongruences and q-series identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify targets over a parameter grid and emit JSON lines.
    Verify(VerifyArgs),
    /// List the registered targets.
    ListTargets {
        /// Emit one JSON object per target.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Symbolic,
    Specialize,
}

#[derive(Clone, Copy, ValueEnum)]
enum RangeArg {
    Half,
    Full,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Comma-separated target names, or `all`.
    #[arg(long, value_delimiter = ',', required = true)]
    target: Vec<String>,
    /// `start:end:step`, `start:end` (step 2) or a single value. Also the `N` of jackson.
    #[arg(long, value_parser = parse_range)]
    n: Option<NValues>,
    /// Values of `d` for targets that take it (default 1,2).
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<u64>>,
    /// Summation ranges for targets that take one (default half,full).
    #[arg(long, value_delimiter = ',')]
    range: Option<Vec<RangeArg>>,
    /// Primes for classical targets.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Exponents `r` for classical targets.
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<u32>>,
    /// Override the per-target default strategy.
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Extra specialization points beyond the degree bound.
    #[arg(long, default_value_t = 2)]
    grid_margin: u32,
    /// Order of the power-series comparison for rahman.
    #[arg(long, default_value_t = 40)]
    truncation: usize,
    /// Write records to this file instead of stdout.
    #[arg(long)]
    report: Option<String>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Debug)]
struct NValues(Vec<u64>);

fn parse_range(s: &str) -> Result<NValues, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("bad number `{x}`: {e}"));
    let (start, end, step) = match parts.as_slice() {
        [a] => (num(a)?, num(a)?, 1),
        [a, b] => (num(a)?, num(b)?, 2),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => return Err(format!("expected start:end:step, got `{s}`")),
    };
    if step == 0 {
        return Err("step must be positive".into());
    }
    if start > end {
        return Err(format!("empty range {start}..{end}"));
    }
    Ok(NValues((start..=end).step_by(step as usize).collect()))
}

#[derive(Clone, Debug)]
enum Cell {
    Q { id: TargetId, strategy: Strategy },
    Classical(ClassicalTarget),
    Jackson(u64),
    Rahman(usize),
}

#[derive(Serialize)]
struct SeriesCheck {
    label: &'static str,
    #[serde(flatten)]
    verdict: SeriesVerdict,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Checks {
    Q(Vec<Check>),
    Series(Vec<SeriesCheck>),
}

#[derive(Serialize)]
struct Record {
    schema: u32,
    target: String,
    kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    range: Option<Range>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation: Option<usize>,
    modulus: Vec<String>,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    strategy: Option<StrategyKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    valuation: Option<Valuation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    required: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    margin: Option<Valuation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residue: Option<String>,
    points_used: u64,
    points_skipped: u64,
    elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<Checks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Record {
    fn bare(target: &str, kind: Kind, modulus: Vec<String>) -> Self {
        Record {
            schema: SCHEMA,
            target: target.to_string(),
            kind,
            n: None,
            d: None,
            range: None,
            p: None,
            r: None,
            truncation: None,
            modulus,
            status: Status::Verified,
            strategy: None,
            valuation: None,
            required: None,
            margin: None,
            residue: None,
            points_used: 0,
            points_skipped: 0,
            elapsed_ms: 0,
            witness: None,
            checks: None,
            error: None,
        }
    }
}

fn cell_record(cell: &Cell) -> Record {
    match cell {
        Cell::Q { id, strategy } => {
            let info = target_info(&id.name).expect("validated target");
            let mut rec = Record::bare(&id.name, info.kind, vec![info.modulus.to_string()]);
            rec.n = Some(id.n);
            rec.d = id.d;
            rec.range = id.range;
            rec.strategy = Some(strategy.kind);
            match verify_target(id, strategy) {
                Ok(report) => {
                    rec.modulus = report.modulus();
                    rec.status = report.status;
                    for c in &report.checks {
                        rec.points_used += c.verdict.points_used;
                        rec.points_skipped += c.verdict.points_skipped;
                        rec.elapsed_ms += c.verdict.elapsed_ms;
                    }
                    rec.witness = report
                        .checks
                        .iter()
                        .find_map(|c| c.verdict.witness.as_ref())
                        .map(|w| serde_json::to_value(w).expect("witness serializes"));
                    rec.checks = Some(Checks::Q(report.checks));
                }
                Err(e) => {
                    rec.status = Status::Inapplicable;
                    rec.error = Some(e.to_string());
                }
            }
            rec
        }
        Cell::Classical(t) => {
            let info = target_info(t.kind.name()).expect("registered");
            let mut rec = Record::bare(info.name, info.kind, vec![format!("{}^{}", t.p, t.r)]);
            rec.p = Some(t.p);
            rec.r = Some(t.r);
            match check_supercongruence(t) {
                Ok(v) => {
                    rec.modulus = vec![format!("{}^{}", v.p, v.required)];
                    rec.status = v.status;
                    rec.valuation = Some(v.valuation);
                    rec.required = Some(v.required);
                    rec.margin = Some(match v.valuation {
                        Valuation::Finite(x) => Valuation::Finite(x - v.required),
                        Valuation::Infinite => Valuation::Infinite,
                    });
                    rec.residue = Some(v.residue);
                    rec.elapsed_ms = v.elapsed_ms;
                }
                Err(e) => {
                    rec.status = Status::Inapplicable;
                    rec.error = Some(e.to_string());
                }
            }
            rec
        }
        Cell::Jackson(n) => {
            let mut rec = Record::bare("jackson", Kind::Identity, vec!["none".into()]);
            rec.n = Some(*n);
            series_outcome(&mut rec, vec![("terminating", verify_jackson(*n, &default_jackson_points()))]);
            rec
        }
        Cell::Rahman(order) => {
            let mut rec = Record::bare("rahman", Kind::Identity, vec![format!("q^{}", order + 1)]);
            rec.truncation = Some(*order);
            series_outcome(
                &mut rec,
                vec![
                    ("general", verify_rahman(*order, &default_rahman_points())),
                    ("q2", verify_rahman_q2(*order, &default_rahman_q2_points())),
                ],
            );
            rec
        }
    }
}

fn series_outcome(rec: &mut Record, results: Vec<(&'static str, qcong::Result<SeriesVerdict>)>) {
    let mut checks = Vec::new();
    for (label, res) in results {
        match res {
            Ok(v) => {
                rec.status = rec.status.max(v.status);
                rec.points_used += v.points_used;
                rec.points_skipped += v.points_skipped;
                rec.elapsed_ms += v.elapsed_ms;
                if rec.witness.is_none() {
                    rec.witness = v.witness.clone().map(serde_json::Value::String);
                }
                checks.push(SeriesCheck { label, verdict: v });
            }
            Err(e) => {
                rec.status = rec.status.max(Status::Inapplicable);
                rec.error.get_or_insert_with(|| format!("{label}: {e}"));
            }
        }
    }
    rec.checks = Some(Checks::Series(checks));
}

struct UsageError(String);

fn build_cells(args: &VerifyArgs) -> Result<Vec<Cell>, UsageError> {
    let all = args.target.iter().any(|t| t == "all");
    let names: Vec<&str> = if all {
        REGISTRY.iter().map(|t| t.name).filter(|n| !n.ends_with("-literal")).collect()
    } else {
        args.target.iter().map(String::as_str).collect()
    };
    let explicit = !all;
    let strategy_for = |name: &str| -> Result<Strategy, UsageError> {
        let kind = match args.strategy {
            Some(StrategyArg::Symbolic) => StrategyKind::Symbolic,
            Some(StrategyArg::Specialize) => StrategyKind::Specialize,
            None => default_strategy(name).kind,
        };
        Strategy::new(kind, args.grid_margin).map_err(|e| UsageError(e.to_string()))
    };

    let mut cells = Vec::new();
    for name in names {
        let info = target_info(name).map_err(|e| UsageError(e.to_string()))?;
        match info.family {
            Family::Q => {
                let ns = args.n.clone().map_or_else(|| (1..=15).step_by(2).collect(), |v| v.0);
                let strategy = strategy_for(name)?;
                if explicit && args.d.is_some() && !info.takes_d {
                    return Err(UsageError(format!("{name} does not take --d")));
                }
                if explicit && args.range.is_some() && !info.takes_range {
                    return Err(UsageError(format!("{name} does not take --range")));
                }
                let ds: Vec<Option<u64>> =
                    if info.takes_d { args.d.clone().unwrap_or(vec![1, 2]).into_iter().map(Some).collect() } else { vec![None] };
                let ranges: Vec<Option<Range>> = if info.takes_range {
                    args.range
                        .clone()
                        .unwrap_or(vec![RangeArg::Half, RangeArg::Full])
                        .into_iter()
                        .map(|r| Some(match r {
                            RangeArg::Half => Range::Half,
                            RangeArg::Full => Range::Full,
                        }))
                        .collect()
                } else {
                    vec![None]
                };
                for &n in &ns {
                    if n == 0 || (n % 2 == 0 && !any_parity(name)) {
                        return Err(UsageError(format!("{name}: n must be odd and positive, got {n}")));
                    }
                    for &d in &ds {
                        if let Some(d) = d {
                            if !matches!(d, 1 | 2) {
                                return Err(UsageError(format!("d must be 1 or 2, got {d}")));
                            }
                        }
                        for range in &ranges {
                            let mut id = TargetId::new(name, n);
                            id.d = d;
                            id.range = *range;
                            cells.push(Cell::Q { id, strategy });
                        }
                    }
                }
            }
            Family::Classical => {
                let kind = ClassicalKind::from_name(name).map_err(|e| UsageError(e.to_string()))?;
                let primes = args.primes.clone().unwrap_or(vec![3, 5, 7, 11, 13]);
                let rs = args.r.clone().unwrap_or(vec![1, 2]);
                for &p in &primes {
                    for &r in &rs {
                        match ClassicalTarget::new(kind, p, r) {
                            Ok(t) => cells.push(Cell::Classical(t)),
                            // Only combinations the user asked for by name count as errors.
                            Err(e) if explicit && (args.primes.is_some() || args.r.is_some()) => {
                                return Err(UsageError(format!("{name}: {e}")));
                            }
                            Err(_) => {}
                        }
                    }
                }
            }
            Family::Series => match name {
                "jackson" => {
                    for n in args.n.clone().map_or_else(|| (0..=6).collect(), |v| v.0) {
                        cells.push(Cell::Jackson(n));
                    }
                }
                _ => {
                    if args.truncation == 0 {
                        return Err(UsageError("truncation must be positive".into()));
                    }
                    cells.push(Cell::Rahman(args.truncation));
                }
            },
        }
    }
    if cells.is_empty() {
        return Err(UsageError("no cells to run".into()));
    }
    Ok(cells)
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    let cells = match build_cells(&args) {
        Ok(c) => c,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut out: Box<dyn Write> = match &args.report {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot open {path}: {e}");
                return ExitCode::from(2);
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let total = cells.len();
    let (tx, rx) = mpsc::channel::<(usize, Record)>();
    let worker = std::thread::spawn(move || {
        pool.install(|| {
            cells.par_iter().enumerate().for_each_with(tx, |tx, (i, cell)| {
                let _ = tx.send((i, cell_record(cell)));
            })
        })
    });

    // Records arrive in completion order; hold them until every earlier cell is written.
    let mut pending = BTreeMap::new();
    let mut next = 0;
    let mut counts = [0usize; 3];
    for (i, rec) in rx {
        pending.insert(i, rec);
        while let Some(rec) = pending.remove(&next) {
            counts[rec.status as usize] += 1;
            let line = serde_json::to_string(&rec).expect("record serializes");
            if writeln!(out, "{line}").and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            next += 1;
        }
    }
    worker.join().expect("worker thread panicked");
    let [verified, inapplicable, refuted] = counts;
    eprintln!("{total} cells: {verified} verified, {refuted} refuted, {inapplicable} inapplicable");
    if verified == total {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn list_targets(json: bool) -> ExitCode {
    let mut out = io::stdout().lock();
    for t in REGISTRY {
        let line = if json {
            serde_json::to_string(t).expect("target serializes")
        } else {
            let family = serde_json::to_value(t.family).expect("family serializes");
            let kind = serde_json::to_value(t.kind).expect("kind serializes");
            let mut params = vec![match t.family {
                Family::Q => "n",
                Family::Classical => "p,r",
                Family::Series => if t.name == "jackson" { "n" } else { "truncation" },
            }];
            if t.takes_d {
                params.push("d");
            }
            if t.takes_range {
                params.push("range");
            }
            format!(
                "{:<17} {:<9} {:<10} {:<12} {:<10} {}",
                t.name,
                family.as_str().unwrap_or_default(),
                kind.as_str().unwrap_or_default(),
                params.join(","),
                t.modulus,
                t.statement
            )
        };
        if writeln!(out, "{line}").is_err() {
            return ExitCode::from(2);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => run_verify(args),
        Command::ListTargets { json } => list_targets(json),
    }
}
