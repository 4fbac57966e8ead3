use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bracketlab::bracket::{parse_binding, parse_form, realize, Binding, BracketPolynomial};
use bracketlab::gowers::{gowers_norm_interval, GowersOptions, Method};
use bracketlab::interval::Interval;
use bracketlab::nil::{
    equidistribution_discrepancy, heisenberg_orbit_check, orbit, orbit_csv, MalcevBasis, PolynomialMapping,
    Unitriangular,
};
use bracketlab::numeric::e;
use bracketlab::recurrence::{check_locally_poly, density_csv, weak_recurrence_check, CheckMode, CheckerBudget, RecurrenceSet};
use bracketlab::repro::{self, ReproOptions, SCHEMA_VERSION};
use bracketlab::{frac, Rational, Scalar};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bracketlab", version, about = "Bracket polynomials, Gowers norms, recurrence sets and nilmanifold orbits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate n, φ(n) and {φ(n)} for n in [N].
    Eval(EvalArgs),
    /// U^k[N] norm of e(φ).
    Gowers(GowersArgs),
    /// Recurrence sets and local polynomiality scans.
    #[command(subcommand)]
    Recur(RecurCommand),
    /// Unitriangular orbits, Mal'cev coordinates and polynomial mappings.
    #[command(subcommand)]
    Nil(NilCommand),
    /// Run a registered reproduction experiment.
    Repro(ReproArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Float,
    Exact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Direct,
    Recursive,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct PhiArgs {
    /// Bracket form, e.g. `a2*n*{a1*n}`.
    #[arg(long)]
    phi: String,
    /// File with one `a<k> = <value>` per line.
    #[arg(long)]
    bind: Option<PathBuf>,
    /// Inline binding `a<k>=<value>`; may repeat.
    #[arg(long = "set")]
    sets: Vec<String>,
    #[arg(long, value_enum, default_value = "float")]
    mode: Mode,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    phi: PhiArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GowersArgs {
    #[command(flatten)]
    phi: PhiArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    /// Cyclic group size; defaults to the next power of two ≥ 2^k·N.
    #[arg(long)]
    ntilde: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RecurCommand {
    /// Density of B_N(ν_1, …; I_w, …) for each N in the list.
    Density(DensityArgs),
    /// Local polynomiality of φ on a recurrence set; exits 1 on a violation.
    Check(CheckArgs),
    /// Weak recurrence: density of B_N(ν; I_{1/2−ε}) against λ.
    Weak(WeakArgs),
}

#[derive(Args)]
struct SetArgs {
    /// Components ν_i; may repeat.
    #[arg(long = "nu", required = true)]
    nus: Vec<String>,
    #[arg(long)]
    bind: Option<PathBuf>,
    #[arg(long = "set")]
    sets: Vec<String>,
    #[arg(long, value_enum, default_value = "float")]
    mode: Mode,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Half-width w of the target interval I_w.
    #[arg(long)]
    width: String,
    /// Comma-separated N values.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long)]
    phi: String,
    #[arg(long)]
    width: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    /// Drop the ω = 0 corner requirement.
    #[arg(long)]
    strong: bool,
    /// Accept derivatives within this distance of an integer.
    #[arg(long)]
    approx_delta: Option<String>,
    #[arg(long, default_value_t = 2_000_000_000)]
    budget: u64,
    /// Sample this many tuples instead of scanning exhaustively.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WeakArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum NilCommand {
    /// Reduced Heisenberg orbit of g(n) = [[1, −αn, 0], [0, 1, βn], [0, 0, 1]].
    Orbit(OrbitArgs),
    /// Compare the reduced orbit with ({βn}, {−αn}, {αn[βn]}); exits 1 on mismatch.
    Heisenberg(HeisenbergArgs),
    /// Symbolic inverse of a polynomial mapping given as JSON.
    Inverse(MappingArgs),
    /// Triviality depth of a polynomial mapping given as JSON.
    Depth(MappingArgs),
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long)]
    n: usize,
    /// Boxes per axis for the discrepancy in JSON output.
    #[arg(long, default_value_t = 8)]
    boxes: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeisenbergArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "float")]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MappingArgs {
    /// JSON file `{"p", "r", "entries": [{"l", "i", "j", "coeffs"}]}`.
    #[arg(long)]
    mapping: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproArgs {
    /// One of uk-floor, recurrence-scan, heisenberg, appendixC.
    id: String,
    /// Derive new floors from this run.
    #[arg(long)]
    recalibrate: bool,
    /// Where to write recalibrated floors.
    #[arg(long)]
    floors_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit status 1: the computation ran and a check failed.
struct Failure;

enum CliError {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<Result<(), Failure>, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("BRACKETLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Gowers(a) => cmd_gowers(a),
        Command::Recur(c) => match c {
            RecurCommand::Density(a) => cmd_density(a),
            RecurCommand::Check(a) => cmd_check(a),
            RecurCommand::Weak(a) => cmd_weak(a),
        },
        Command::Nil(c) => match c {
            NilCommand::Orbit(a) => cmd_orbit(a),
            NilCommand::Heisenberg(a) => cmd_heisenberg(a),
            NilCommand::Inverse(a) => cmd_inverse(a),
            NilCommand::Depth(a) => cmd_depth(a),
        },
        Command::Repro(a) => cmd_repro(a),
    };
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure)) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> Result<(), CliError> {
    emit(out, &(serde_json::to_string_pretty(v)? + "\n"))
}

fn binding<S: Scalar>(file: &Option<PathBuf>, sets: &[String]) -> Result<Binding<S>, CliError> {
    let mut text = match file {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    for s in sets {
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(s);
    }
    Ok(parse_binding(&text)?)
}

fn realize_text<S: Scalar>(text: &str, b: &Binding<S>) -> Result<BracketPolynomial<S>, CliError> {
    let form = parse_form(text)?;
    Ok(realize(&form, b)?)
}

fn scalar<S: Scalar>(text: &str) -> Result<S, CliError> {
    let b: Binding<S> = parse_binding(&format!("a1 = {text}"))?;
    Ok(b.get(1).cloned().expect("bound above"))
}

fn cmd_eval(a: EvalArgs) -> CliResult {
    fn run<S: Scalar>(a: &EvalArgs) -> Result<String, CliError> {
        let b = binding::<S>(&a.phi.bind, &a.phi.sets)?;
        let phi = realize_text(&a.phi.phi, &b)?;
        let mut csv = String::from("n,phi,frac\n");
        for n in 1..=a.n as i64 {
            let v = phi.eval(n);
            csv.push_str(&format!("{n},{v},{}\n", frac(&v)));
        }
        Ok(csv)
    }
    let csv = match a.phi.mode {
        Mode::Float => run::<f64>(&a)?,
        Mode::Exact => run::<Rational>(&a)?,
    };
    emit(&a.out, &csv)?;
    Ok(Ok(()))
}

fn cmd_gowers(a: GowersArgs) -> CliResult {
    let values: Vec<f64> = match a.phi.mode {
        Mode::Float => realize_text(&a.phi.phi, &binding::<f64>(&a.phi.bind, &a.phi.sets)?)?.values(a.n),
        Mode::Exact => realize_text(&a.phi.phi, &binding::<Rational>(&a.phi.bind, &a.phi.sets)?)?
            .values(a.n)
            .iter()
            .map(|v| frac(v).to_f64())
            .collect(),
    };
    let f: Vec<_> = values.into_iter().map(e).collect();
    let method = match a.method {
        MethodArg::Auto => Method::Auto,
        MethodArg::Direct => Method::Direct,
        MethodArg::Recursive => Method::Recursive,
        MethodArg::Mc => Method::MonteCarlo { samples: a.samples, seed: a.seed },
    };
    let report = gowers_norm_interval(&f, a.k, a.ntilde, &GowersOptions { method, budget: a.budget })?;
    let mut v = serde_json::to_value(&report)?;
    v["schema_version"] = json!(SCHEMA_VERSION);
    v["phi"] = json!(a.phi.phi);
    v["seed"] = json!(a.seed);
    v["mode"] = json!(if a.phi.mode == Mode::Exact { "exact" } else { "float" });
    emit_json(&a.out, &v)?;
    Ok(Ok(()))
}

fn build_set<S: Scalar>(s: &SetArgs, width: &str, n: usize) -> Result<(RecurrenceSet<S>, Binding<S>), CliError> {
    let b = binding::<S>(&s.bind, &s.sets)?;
    let target = Interval::centered(scalar::<S>(width)?)?;
    let mut set = RecurrenceSet::new(n);
    for nu in &s.nus {
        set = set.with(realize_text(nu, &b)?, target.clone());
    }
    Ok((set, b))
}

fn cmd_density(a: DensityArgs) -> CliResult {
    fn run<S: Scalar>(a: &DensityArgs) -> Result<String, CliError> {
        let (set, _) = build_set::<S>(&a.set, &a.width, 1)?;
        Ok(density_csv(&set, &a.n))
    }
    let csv = match a.set.mode {
        Mode::Float => run::<f64>(&a)?,
        Mode::Exact => run::<Rational>(&a)?,
    };
    emit(&a.out, &csv)?;
    Ok(Ok(()))
}

fn cmd_check(a: CheckArgs) -> CliResult {
    fn run<S: Scalar>(a: &CheckArgs) -> Result<(Value, bool), CliError> {
        let (set, b) = build_set::<S>(&a.set, &a.width, a.n)?;
        let phi = realize_text(&a.phi, &b)?;
        let mode = match &a.approx_delta {
            Some(d) => CheckMode::Approx { delta: scalar::<S>(d)?, strong: a.strong },
            None if a.strong => CheckMode::Strong,
            None => CheckMode::Plain,
        };
        let budget = match a.samples {
            Some(s) => CheckerBudget::randomized(s, a.seed),
            None => CheckerBudget::exhaustive(a.budget),
        };
        let outcome = check_locally_poly(&phi, &set.mask(), a.k, &mode, &budget)?;
        let mut v = outcome.to_json();
        v["schema_version"] = json!(SCHEMA_VERSION);
        v["seed"] = json!(a.seed);
        Ok((v, outcome.is_violation()))
    }
    let (v, violated) = match a.set.mode {
        Mode::Float => run::<f64>(&a)?,
        Mode::Exact => run::<Rational>(&a)?,
    };
    emit_json(&a.out, &v)?;
    Ok(if violated { Err(Failure) } else { Ok(()) })
}

fn cmd_weak(a: WeakArgs) -> CliResult {
    fn run<S: Scalar>(a: &WeakArgs) -> Result<(f64, bool), CliError> {
        let b = binding::<S>(&a.set.bind, &a.set.sets)?;
        let nus = a.set.nus.iter().map(|t| realize_text(t, &b)).collect::<Result<Vec<_>, _>>()?;
        let r = weak_recurrence_check(&nus, &scalar::<S>(&a.eps)?, a.lambda, a.n)?;
        Ok((r.density, r.holds))
    }
    let (density, holds) = match a.set.mode {
        Mode::Float => run::<f64>(&a)?,
        Mode::Exact => run::<Rational>(&a)?,
    };
    let v = json!({"schema_version": SCHEMA_VERSION, "N": a.n, "eps": a.eps, "lambda": a.lambda, "density": density, "holds": holds});
    emit_json(&a.out, &v)?;
    Ok(if holds { Ok(()) } else { Err(Failure) })
}

fn cmd_orbit(a: OrbitArgs) -> CliResult {
    let (alpha, beta) = (scalar::<f64>(&a.alpha)?, scalar::<f64>(&a.beta)?);
    let g = |n: i64| Unitriangular::from_entries(2, 1, &[(0, 0, 1, -alpha * n as f64), (0, 1, 2, beta * n as f64)]);
    let chis = orbit(&MalcevBasis::heisenberg_x(), 1..a.n as i64 + 1, g)?;
    match a.format {
        Format::Csv => emit(&a.out, &orbit_csv(1, &chis))?,
        Format::Json => {
            let d = equidistribution_discrepancy(&chis, a.boxes);
            emit_json(&a.out, &json!({"schema_version": SCHEMA_VERSION, "N": a.n, "boxes": a.boxes, "discrepancy": d}))?;
        }
    }
    Ok(Ok(()))
}

fn cmd_heisenberg(a: HeisenbergArgs) -> CliResult {
    let report = match a.mode {
        Mode::Float => heisenberg_orbit_check(&scalar::<f64>(&a.alpha)?, &scalar::<f64>(&a.beta)?, a.n),
        Mode::Exact => heisenberg_orbit_check(&scalar::<Rational>(&a.alpha)?, &scalar::<Rational>(&a.beta)?, a.n),
    };
    let (v, ok) = match report {
        Ok(r) => (json!({"schema_version": SCHEMA_VERSION, "checked": r.checked, "max_error": r.max_error, "pass": true}), true),
        Err(e @ bracketlab::nil::NilError::Heisenberg { .. }) => {
            (json!({"schema_version": SCHEMA_VERSION, "pass": false, "error": e.to_string()}), false)
        }
        Err(e) => return Err(e.into()),
    };
    emit_json(&a.out, &v)?;
    Ok(if ok { Ok(()) } else { Err(Failure) })
}

fn read_mapping(path: &PathBuf) -> Result<PolynomialMapping<Rational>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)?;
    Ok(PolynomialMapping::from_json(&v)?)
}

fn cmd_inverse(a: MappingArgs) -> CliResult {
    let rho = read_mapping(&a.mapping)?;
    emit_json(&a.out, &rho.inverse().to_json())?;
    Ok(Ok(()))
}

fn cmd_depth(a: MappingArgs) -> CliResult {
    let rho = read_mapping(&a.mapping)?;
    let depth = rho.triviality_depth()?;
    emit_json(&a.out, &json!({"schema_version": SCHEMA_VERSION, "depth": depth}))?;
    Ok(Ok(()))
}

fn cmd_repro(a: ReproArgs) -> CliResult {
    let (report, floors) = repro::run(&a.id, ReproOptions { seed: a.seed, recalibrate: a.recalibrate })?;
    if let (Some(f), Some(path)) = (&floors, &a.floors_out) {
        emit(&Some(path.clone()), &(serde_json::to_string_pretty(f)? + "\n"))?;
    }
    emit_json(&a.out, &serde_json::to_value(&report)?)?;
    Ok(if report.pass { Ok(()) } else { Err(Failure) })
}
