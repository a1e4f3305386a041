//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage error, 3 invalid
//! geometry, 4 search guard exceeded, 5 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::bounds::{self, catalog, BoundsError, Estimator, Rational};
use crate::code::{BlrcCode, CodeError};
use crate::geometry::{self, validate_pg, GeometryError, GeometryKind, IncidenceStructure, PgParams};
use crate::repair::{
    simulate_availability, AvailabilityModel, Mode, RepairError, RepairProfile, RepairSets, SearchGuard,
    SimulationConfig,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    /// Argument parsing failed, or help/version was requested.
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("invalid geometry: {0}")]
    Validation(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Clap(e) if !e.use_stderr() => 0,
            Self::Other(_) => 1,
            Self::Clap(_) => 2,
            Self::Usage(_) => 2,
            Self::Validation(_) => 3,
            Self::Guard(_) => 4,
            Self::Io(_) => 5,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Io(_) => Self::Io(e.to_string()),
            GeometryError::InvalidParameters { .. }
            | GeometryError::UnsupportedOrder { .. }
            | GeometryError::Field(_) => Self::Other(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::Geometry(g) => g.into(),
            CodeError::GuardExceeded { .. } => Self::Guard(e.to_string()),
            other => Self::Other(other.to_string()),
        }
    }
}

impl From<RepairError> for CliError {
    fn from(e: RepairError) -> Self {
        match e {
            RepairError::GuardExceeded { .. } => Self::Guard(e.to_string()),
            other => Self::Other(other.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Parser, Debug)]
#[command(name = "pgblrc", version, about = "Binary locally repairable codes from partial geometries")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a geometry and write its incidence file.
    Construct(ConstructArgs),
    /// Check the partial-geometry axioms and report (s, t, alpha).
    Validate(ValidateArgs),
    /// Build the code and report rate and repair metrics.
    Analyze(AnalyzeArgs),
    /// Estimate local repairability under node unavailability.
    Simulate(SimulateArgs),
    /// Tabulate the rate bounds over ranges of (r, a).
    Bounds(BoundsArgs),
    /// List practical (r, a) parameters from known generalized quadrangles.
    Catalog(CatalogArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Constructor {
    Grid,
    Symplectic,
    EllipticQuadric,
    Hyperoval,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    kind: Constructor,
    /// Grid order (line size s + 1).
    #[arg(long)]
    s: Option<usize>,
    /// Field order for the classical quadrangles.
    #[arg(long)]
    q: Option<usize>,
    /// Take the dual structure.
    #[arg(long)]
    dual: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct GeometryArgs {
    /// Incidence file to load.
    #[arg(long, short, conflicts_with = "geometry")]
    input: Option<PathBuf>,
    /// Built-in constructor.
    #[arg(long, short)]
    geometry: Option<Constructor>,
    /// Grid order (with `--geometry grid`).
    #[arg(long)]
    s: Option<usize>,
    /// Field order (with the other constructors).
    #[arg(long)]
    q: Option<usize>,
    /// Take the dual structure.
    #[arg(long)]
    dual: bool,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct MetricArgs {
    /// Enumerate all low-weight dual codewords instead of using lines only.
    #[arg(long)]
    exhaustive: bool,
    /// Largest number of candidate supports per coordinate in exhaustive mode.
    #[arg(long, default_value_t = SearchGuard::default().max_candidates, value_parser = clap::value_parser!(u64).range(1..))]
    guard: u64,
    /// Radius r in the repair sets (vectors of weight at most r + 1).
    /// Defaults to s.
    #[arg(long)]
    radius: Option<usize>,
}

impl MetricArgs {
    fn mode(&self) -> Mode {
        if self.exhaustive {
            Mode::Exhaustive
        } else {
            Mode::Geometric
        }
    }

    fn guard(&self) -> SearchGuard {
        SearchGuard { max_candidates: self.guard }
    }
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    metrics: MetricArgs,
    /// Also write H, G and the information set as JSON to this file.
    #[arg(long)]
    export_code: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModelName {
    Iid,
    Adversarial,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    metrics: MetricArgs,
    #[arg(long, value_enum, default_value = "iid")]
    model: ModelName,
    /// Unavailability probability per node (iid model).
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Number of unavailable nodes (adversarial model).
    #[arg(long, default_value_t = 1)]
    u: usize,
    /// Trials (iid) or samples per symbol when adversarial falls back to
    /// sampling.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// PRNG seed; required for the iid model.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest number of (symbol, set) pairs the adversarial model enumerates.
    #[arg(long, default_value_t = 10_000_000)]
    exhaustive_limit: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Range of r, as `lo..hi` (inclusive) or a single value.
    #[arg(long, default_value = "2..10", value_parser = parse_range)]
    r: (usize, usize),
    /// Range of a, as `lo..hi` (inclusive) or a single value.
    #[arg(long, default_value = "2..10", value_parser = parse_range)]
    a: (usize, usize),
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long, default_value_t = 100)]
    max_n: usize,
    /// Entries need a rate strictly above this (fraction like `1/3`).
    #[arg(long, default_value = "1/3", value_parser = parse_rational)]
    min_rate: Rational,
    #[arg(long, default_value = "theorem-upper-bound", value_parser = parse_estimator)]
    estimator: Estimator,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("not a number: {x:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|_| format!("not a fraction: {s:?}"))
}

fn parse_estimator(s: &str) -> std::result::Result<Estimator, String> {
    s.parse().map_err(|e: BoundsError| e.to_string())
}

fn kind_for(c: Constructor, s: Option<usize>, q: Option<usize>) -> Result<GeometryKind> {
    let need =
        |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("{c:?} needs --{flag}").to_lowercase()));
    Ok(match c {
        Constructor::Grid => GeometryKind::Grid { s: need(s, "s")? },
        Constructor::Symplectic => GeometryKind::Symplectic { q: need(q, "q")? },
        Constructor::EllipticQuadric => GeometryKind::EllipticQuadric { q: need(q, "q")? },
        Constructor::Hyperoval => GeometryKind::Hyperoval { q: need(q, "q")? },
    })
}

impl GeometryArgs {
    fn load(&self) -> Result<IncidenceStructure> {
        let inc = match (&self.input, self.geometry) {
            (Some(path), _) => geometry::load(path).map_err(|e| match e {
                GeometryError::Io(io) => CliError::Io(format!("{}: {io}", path.display())),
                other => other.into(),
            })?,
            (None, Some(c)) => kind_for(c, self.s, self.q)?.build()?,
            (None, None) => return Err(CliError::Usage("give --input FILE or --geometry KIND".into())),
        };
        Ok(if self.dual { geometry::dual(&inc) } else { inc })
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn to_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn summary(inc: &IncidenceStructure, p: &PgParams) -> String {
    let mut line = format!(
        "pg({},{},{}): {} points, {} lines, class {}",
        p.s,
        p.t,
        p.alpha,
        p.num_points,
        p.num_lines,
        p.class.as_str()
    );
    if p.grid_degenerate() {
        line.push_str(" (grid-degenerate)");
    }
    if let Some(label) = inc.label() {
        line = format!("{label}: {line}");
    }
    line
}

fn params_json(p: &PgParams) -> serde_json::Value {
    json!({
        "s": p.s,
        "t": p.t,
        "alpha": p.alpha,
        "num_points": p.num_points,
        "num_lines": p.num_lines,
        "class": p.class.as_str(),
        "grid_degenerate": p.grid_degenerate(),
    })
}

fn cmd_construct(args: &ConstructArgs) -> Result<()> {
    let inc = kind_for(args.kind, args.s, args.q)?.build_with_dual(args.dual)?;
    let params = validate_pg(&inc)?;
    emit(&args.out, &geometry::to_text(&inc))?;
    let line = summary(&inc, &params);
    if args.out.output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<()> {
    let inc = args.geometry.load()?;
    let params = validate_pg(&inc)?;
    let text = match args.format {
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "label": inc.label(),
            "valid": true,
            "params": params_json(&params),
        })),
        _ => format!("{}\n", summary(&inc, &params)),
    };
    emit(&args.out, &text)
}

fn ratio_str(r: Rational) -> String {
    r.to_string()
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<()> {
    let inc = args.geometry.load()?;
    let code = BlrcCode::build(&inc)?;
    let p = *code.params();
    let profile = RepairProfile::compute(&code, args.metrics.mode(), args.metrics.radius, args.metrics.guard())?;
    if let Some(path) = &args.export_code {
        let export = serde_json::to_value(code.export()).expect("export serializes");
        write_file(path, &to_json(&json!({ "schema_version": SCHEMA_VERSION, "code": export })))?;
    }

    let rate = code.rate();
    let rank = code.n() - code.k();
    let theta = bounds::vartheta(p.s, p.t, p.alpha)?;
    let rank_q = Rational::from_integer(rank as i64);
    // `ϑ ≤ rank` is only guaranteed when `s + t + 1 − α` is odd.
    let lower_applies = !p.rank_parity_even();
    let sandwich_holds = rank_q <= theta + 1 && (!lower_applies || theta <= rank_q);
    let rate_bounds = (p.alpha == 1 && p.s >= 2).then(|| {
        let lower = bounds::rate_lower(p.s, p.t + 1).expect("s >= 2, t >= 1");
        let upper = bounds::rate_upper(p.s, p.t + 1).expect("s >= 2, t >= 1");
        let within = rate.rate >= lower && upper.is_none_or(|u| rate.rate <= u);
        json!({
            "lower": ratio_str(lower),
            "upper": upper.map(ratio_str),
            "holds": within,
        })
    });
    let quadrangle_checks = p.s >= 2;
    let o = profile.overall;
    let conformance = json!({
        "rank_sandwich": {
            "vartheta": ratio_str(theta),
            "rank": rank,
            "lower_applies": lower_applies,
            "holds": sandwich_holds,
        },
        "rate_bounds": rate_bounds,
        "r_le_s": quadrangle_checks.then_some(o.r <= p.s),
        "a_gt_t": quadrangle_checks.then_some(o.a > p.t),
        "delta_gt_t": quadrangle_checks.then_some(profile.tolerance.iter().all(|&d| d > p.t)),
    });

    let text = match args.format {
        Format::Csv | Format::Text => {
            let mut s = String::from("symbol,r,a,delta,blocking_set\n");
            for i in 0..code.n() {
                let block: Vec<String> = profile.blocking_sets[i].iter().map(usize::to_string).collect();
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i,
                    profile.repair_degree[i],
                    profile.alternativity[i],
                    profile.tolerance[i],
                    block.join(" ")
                ));
            }
            s
        }
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "geometry": inc.label(),
            "params": params_json(&p),
            "code": {
                "n": code.n(),
                "k": code.k(),
                "rank": rank,
                "rate": ratio_str(rate.rate),
                "rate_decimal": format!("{:.6}", bounds::to_f64(rate.rate)),
                "footprint": ratio_str(rate.footprint),
            },
            "mode": profile.mode.as_str(),
            "profile": serde_json::to_value(&profile).expect("profile serializes"),
            "conformance": conformance,
        })),
    };
    emit(&args.out, &text)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let model = match args.model {
        ModelName::Iid => {
            if !(0.0..=1.0).contains(&args.p) {
                return Err(CliError::Usage(format!("--p must lie in [0, 1], got {}", args.p)));
            }
            AvailabilityModel::Iid { p: args.p }
        }
        ModelName::Adversarial => AvailabilityModel::Adversarial { u: args.u },
    };
    let seed = match (args.model, args.seed) {
        (_, Some(seed)) => seed,
        (ModelName::Iid, None) => return Err(CliError::Usage("the iid model needs --seed".into())),
        (ModelName::Adversarial, None) => 0,
    };
    let inc = args.geometry.load()?;
    let code = BlrcCode::build(&inc)?;
    let radius = args.metrics.radius.unwrap_or(code.params().s);
    let sets = RepairSets::build(&code, args.metrics.mode(), radius, args.metrics.guard())?;
    let config = SimulationConfig { model, trials: args.trials, seed, exhaustive_limit: args.exhaustive_limit };
    let report = simulate_availability(&sets, config);
    let text = match args.format {
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "geometry": inc.label(),
            "mode": sets.mode().as_str(),
            "radius": sets.radius(),
            "report": serde_json::to_value(&report).expect("report serializes"),
        })),
        _ => report.to_csv(),
    };
    emit(&args.out, &text)
}

fn cmd_bounds(args: &BoundsArgs) -> Result<()> {
    let rows = bounds::bounds_table(args.r.0..=args.r.1, args.a.0..=args.a.1)?;
    let text = match args.format {
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "rows": serde_json::to_value(&rows).expect("rows serialize"),
        })),
        _ => bounds::bounds_csv(&rows),
    };
    emit(&args.out, &text)
}

fn cmd_catalog(args: &CatalogArgs) -> Result<()> {
    let cat = catalog(args.max_n, args.min_rate, args.estimator);
    let text = match args.format {
        Format::Csv => cat.to_csv(),
        _ => {
            let mut value = serde_json::to_value(&cat).expect("catalog serializes");
            value["schema_version"] = json!(SCHEMA_VERSION);
            to_json(&value)
        }
    };
    emit(&args.out, &text)
}

/// Parses `args` and runs the chosen command.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Catalog(a) => cmd_catalog(a),
    }
}

pub fn main() -> ExitCode {
    match run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Clap(c) => {
                    let _ = c.print();
                }
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..10"), Ok((2, 10)));
        assert_eq!(parse_range("2..=4"), Ok((2, 4)));
        assert_eq!(parse_range("3"), Ok((3, 3)));
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("x..2").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/3"), Ok(Rational::new(1, 3)));
        assert!(parse_rational("one third").is_err());
    }

    #[test]
    fn constructor_flags() {
        assert!(matches!(kind_for(Constructor::Grid, None, Some(2)), Err(CliError::Usage(_))));
        assert_eq!(kind_for(Constructor::Symplectic, None, Some(3)).unwrap(), GeometryKind::Symplectic { q: 3 });
    }

    #[test]
    fn error_codes() {
        let io: CliError = GeometryError::Io(std::io::Error::other("x")).into();
        assert_eq!(io.exit_code(), 5);
        let bad: CliError = GeometryError::NoLines.into();
        assert_eq!(bad.exit_code(), 3);
        let guard: CliError = RepairError::GuardExceeded { required: 2, limit: 1 }.into();
        assert_eq!(guard.exit_code(), 4);
    }
}
