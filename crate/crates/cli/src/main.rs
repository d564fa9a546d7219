//! `bturan`: evaluate Bessel Turánians, inspect the bound catalog, run the
//! verification suites and write figure data.
//!
//! Exit codes: 0 success, 1 failed check or evaluation, 2 usage error.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use bessel_turan::catalog::{BoundEvaluation, Catalog, Side, Status};
use bessel_turan::figure::{figure_data, FigureId};
use bessel_turan::selftest::{selftest, selftest_perturbed};
use bessel_turan::verify::{self, GridSpec, Scale, Suite, VerifyConfig, DEFAULT_RANDOM_PAIRS, DEFAULT_SEED};
use bessel_turan::{EvalContext, PointEval, QuantityKind, DEFAULT_TARGET};
use clap::{Args, Parser, Subcommand};

const OUT_DIR_ENV: &str = "BESSEL_TURAN_OUT_DIR";
const DEFAULT_CORRUPTION: f64 = 0.5;

#[derive(Parser)]
#[command(name = "bturan", version, about = "Turán-type inequalities for modified Bessel functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity at (nu, x)
    Eval(EvalArgs),
    /// Inspect the bound catalog
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Run verification suites and write a JSON report
    Verify(VerifyArgs),
    /// Write the data behind one comparison plot as CSV
    Figure(FigureArgs),
    /// Quick closed-form checks of the evaluator
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Quantity tag, e.g. phiI, phiK, y, z, P
    #[arg(long = "fn", value_name = "TAG")]
    func: QuantityKind,
    #[arg(long, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long)]
    x: f64,
    #[arg(long, default_value_t = DEFAULT_TARGET)]
    target_rel_err: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Applicable bounds at one point, best per side marked
    At(BoundsAtArgs),
    /// Catalog metadata
    List(BoundsListArgs),
}

#[derive(Args)]
struct BoundsAtArgs {
    #[arg(long, required_unless_present = "id")]
    quantity: Option<QuantityKind>,
    /// A single bound instead of a whole quantity
    #[arg(long, conflicts_with = "quantity")]
    id: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundsListArgs {
    #[arg(long)]
    status: Option<Status>,
    #[arg(long)]
    quantity: Option<QuantityKind>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Report path; defaults to verify-<suite>.json in $BESSEL_TURAN_OUT_DIR or the working directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random pairs per order for the concavity checks
    #[arg(long, default_value_t = DEFAULT_RANDOM_PAIRS)]
    pairs: usize,
    /// Comma-separated orders replacing the default grid orders
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nu: Option<Vec<f64>>,
    /// Argument grid as start:end:count[:log|lin]; start itself is excluded
    #[arg(long)]
    x_grid: Option<GridArg>,
    /// Zero timings and pin the timestamp
    #[arg(long)]
    reproducible: bool,
    /// Fault injection: ID or ID:OFFSET
    #[arg(long, hide = true)]
    corrupt: Vec<String>,
}

#[derive(Args)]
struct FigureArgs {
    figure: FigureId,
    /// CSV path; defaults to <figure>.csv in $BESSEL_TURAN_OUT_DIR or the working directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, hide = true)]
    perturb: Option<f64>,
}

#[derive(Debug, Clone)]
struct GridArg {
    start: f64,
    end: f64,
    count: usize,
    scale: Scale,
}

impl std::str::FromStr for GridArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err("expected start:end:count[:log|lin]".into());
        }
        let num = |p: &str| p.parse::<f64>().map_err(|e| format!("'{p}': {e}"));
        let (start, end) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2].parse().map_err(|e| format!("'{}': {e}", parts[2]))?;
        let scale = match parts.get(3).copied().unwrap_or("log") {
            "log" => Scale::Logarithmic,
            "lin" | "linear" => Scale::Linear,
            other => return Err(format!("unknown scale '{other}'")),
        };
        if count < 2 {
            return Err("count must be at least 2".into());
        }
        if !(start >= 0.0 && end > start) || (scale == Scale::Logarithmic && start <= 0.0) {
            return Err("need 0 <= start < end (start > 0 for log)".into());
        }
        Ok(GridArg { start, end, count, scale })
    }
}

/// Bad input discovered after parsing; maps to exit code 2.
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

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Bounds(BoundsCommand::At(a)) => cmd_bounds_at(a),
        Command::Bounds(BoundsCommand::List(a)) => cmd_bounds_list(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Selftest(a) => cmd_selftest(a),
    }
}

fn context(nu: f64, x: f64) -> Result<EvalContext> {
    EvalContext::new(nu, x).map_err(|e| usage(e.to_string()))
}

fn default_path(name: &str) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => Path::new(&dir).join(name),
        _ => PathBuf::from(name),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn cmd_eval(a: EvalArgs) -> Result<ExitCode> {
    let ctx = context(a.nu, a.x)?;
    let point = PointEval::new(ctx);
    let v = match point.get(a.func, a.target_rel_err) {
        Ok(v) => v,
        Err(e @ bessel_turan::BesselError::TargetTooSmall { .. }) => return Err(usage(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let (ip, kp) = point.paths();
    let name = |p: Option<bessel_turan::bessel::EvalPath>| p.map(|p| p.name()).unwrap_or("-");
    if a.json {
        let doc = serde_json::json!({
            "quantity": a.func,
            "nu": a.nu,
            "x": a.x,
            "value": v.value,
            "rel_error_bound": v.rel_error_bound,
            "paths": { "I": name(ip), "K": name(kp) },
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("{}(nu={}, x={}) = {:.16e}", a.func, a.nu, a.x, v.value);
        println!("rel_error_bound = {:.3e}", v.rel_error_bound);
        println!("path: I {}, K {}", name(ip), name(kp));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds_at(a: BoundsAtArgs) -> Result<ExitCode> {
    let catalog = Catalog::standard();
    let ctx = context(a.nu, a.x)?;
    let (kind, rows): (QuantityKind, Vec<BoundEvaluation>) = match &a.id {
        Some(id) => {
            let e = catalog.evaluate_bound(id, a.nu, a.x).map_err(|e| usage(e.to_string()))?;
            (e.quantity, vec![e])
        }
        None => {
            let kind = a.quantity.expect("clap requires quantity or id");
            (kind, catalog.applicable(kind, a.nu, a.x, &Status::ALL))
        }
    };
    let best = catalog.best_bounds(kind, a.nu, a.x);
    let is_best = |e: &BoundEvaluation| {
        [&best.lower, &best.upper].iter().any(|b| b.as_ref().is_some_and(|b| b.id == e.id))
    };
    let value = PointEval::new(ctx).value(kind);
    let holds = |e: &BoundEvaluation| -> Option<bool> {
        let (b, v) = (e.value?, value.as_ref().ok()?);
        let tol = verify::tolerance(v.value, v.rel_error_bound);
        Some(match e.side {
            Side::Lower => b <= v.value + tol,
            Side::Upper => b >= v.value - tol,
        })
    };
    if a.json {
        let bounds: Vec<_> = rows
            .iter()
            .map(|e| {
                serde_json::json!({
                    "id": e.id, "side": e.side, "status": e.status, "applicable": e.applicable,
                    "value": e.value, "best": is_best(e), "holds": holds(e),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "quantity": kind,
            "nu": a.nu,
            "x": a.x,
            "value": value.as_ref().ok().map(|v| v.value),
            "bounds": bounds,
            "best_lower": best.lower.as_ref().map(|b| b.id),
            "best_upper": best.upper.as_ref().map(|b| b.id),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(ExitCode::SUCCESS);
    }
    match &value {
        Ok(v) => println!("{kind}(nu={}, x={}) = {:.16e}", a.nu, a.x, v.value),
        Err(e) => println!("{kind}(nu={}, x={}) unavailable: {e}", a.nu, a.x),
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "{:<6} {:<20} {:<11} {:>24}  {:<5} holds", "side", "id", "status", "value", "best")?;
    for e in &rows {
        let v = e.value.map(|v| format!("{v:.16e}")).unwrap_or_else(|| "not applicable".into());
        let side = match e.side {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        let h = match holds(e) {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "-",
        };
        let star = if is_best(e) { "*" } else { "" };
        writeln!(out, "{side:<6} {:<20} {:<11} {v:>24}  {star:<5} {h}", e.id, e.status.name())?;
    }
    for (label, b) in [("lower", &best.lower), ("upper", &best.upper)] {
        if let Some(b) = b {
            writeln!(out, "best {label}: {} {:.6}", b.id, b.value.unwrap_or(f64::NAN))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds_list(a: BoundsListArgs) -> Result<ExitCode> {
    let list = Catalog::standard().list(a.status, a.quantity);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&list)?);
        return Ok(ExitCode::SUCCESS);
    }
    let mut out = std::io::stdout().lock();
    for b in &list {
        let side = match b.side {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        let guard = if b.guard_added { " [guard added]" } else { "" };
        writeln!(
            out,
            "{:<20} {:<10} {side:<6} {:<11} {}  |  {}  |  {}{guard}",
            b.id,
            b.quantity,
            b.status.name(),
            b.domain,
            b.formula,
            b.anchor
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_corruption(spec: &str) -> Result<(String, f64)> {
    match spec.split_once(':') {
        Some((id, off)) => {
            let off: f64 = off.parse().map_err(|_| usage(format!("bad corruption offset '{off}'")))?;
            Ok((id.to_string(), off))
        }
        None => Ok((spec.to_string(), DEFAULT_CORRUPTION)),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let mut catalog = Catalog::standard();
    for c in &a.corrupt {
        let (id, off) = parse_corruption(c)?;
        catalog = catalog.with_corruption(&id, off).map_err(|e| usage(e.to_string()))?;
    }
    let default = GridSpec::default();
    let nus = a.nu.clone().unwrap_or_else(|| default.nu_values().to_vec());
    let (xs, scale) = match &a.x_grid {
        Some(g) => {
            let xs = match g.scale {
                Scale::Logarithmic => GridSpec::log_points(g.start, g.end, g.count),
                Scale::Linear => GridSpec::linear_points(g.start, g.end, g.count),
            };
            (xs, g.scale)
        }
        None => (default.x_values().to_vec(), default.scale()),
    };
    let grid = GridSpec::new(nus, xs, scale).map_err(|e| usage(e.to_string()))?;
    if let Some(&(nu, x)) = grid.points().iter().find(|&&(nu, x)| EvalContext::new(nu, x).is_err()) {
        return Err(usage(format!("grid point nu={nu}, x={x} is outside the supported range")));
    }
    let config = VerifyConfig {
        suite: a.suite,
        seed: a.seed,
        grid,
        catalog,
        random_pairs: a.pairs,
        reproducible: a.reproducible,
    };
    let report = verify::run(&config);
    let path = a.out.unwrap_or_else(|| default_path(&format!("verify-{}.json", a.suite)));
    let mut json = report.to_json();
    json.push('\n');
    write_file(&path, &json)?;
    for c in report.checks.iter().filter(|c| !c.passed()) {
        println!("FAIL {}: max violation {:.3e}", c.check_id, c.max_violation);
        if let Some(w) = c.witnesses.first() {
            println!(
                "     e.g. {} at nu={}, x={}: bound {:.10e}, value {:.10e}",
                w.bound_id, w.nu, w.x, w.bound_value, w.true_value
            );
        }
        if let Some(n) = &c.notes {
            println!("     {n}");
        }
    }
    let s = report.summary;
    println!("suite {}: {} pass, {} fail, {} info -> {}", report.suite, s.pass, s.fail, s.info, path.display());
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_figure(a: FigureArgs) -> Result<ExitCode> {
    let catalog = Catalog::standard();
    let data = figure_data(&catalog, a.figure)?;
    let path = a.out.unwrap_or_else(|| default_path(&format!("{}.csv", a.figure)));
    write_file(&path, &data.to_csv())?;
    let bad = data.ordering_violations(&catalog);
    for v in bad.iter().take(10) {
        println!("ordering violated: {} at x={}: bound {:.10e}, value {:.10e}", v.bound_id, v.x, v.bound_value, v.value);
    }
    println!("{}: {} rows -> {}", a.figure, data.rows.len(), path.display());
    Ok(if bad.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_selftest(a: SelftestArgs) -> Result<ExitCode> {
    let report = match a.perturb {
        Some(p) => selftest_perturbed(p),
        None => selftest(),
    };
    for i in &report.items {
        let tag = if i.passed { "ok  " } else { "FAIL" };
        println!("{tag} {:<36} rel err {:.2e} (tol {:.0e})", i.name, i.rel_error, i.tolerance);
    }
    let versions: Vec<String> = report.path_versions.iter().map(|(p, v)| format!("{p} {v}")).collect();
    println!("paths: {}", versions.join(", "));
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
