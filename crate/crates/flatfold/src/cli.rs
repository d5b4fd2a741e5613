//! Command-line surface. Parsing lives here so tests can drive it without a
//! subprocess; `main` only maps outcomes to exit codes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatfold_core::dimer::thermo_free_energy;
use flatfold_core::enumerate::{check_budget, odd_tables};
use flatfold_core::freeenergy::{
    barreto_free_energy, kite_free_energy, miura_symmetric_integrand, trapezoid_symmetric_integrand,
};
use flatfold_core::latticegas::{eos_point, transition_fugacity, Family, GasModel};
use flatfold_core::model::{defect_family, CpKind};
use flatfold_core::quadrature::{QuadOptions, QuadResult};
use flatfold_core::sixteen::{equal_omega_transitions, SixteenVertexWeights};
use flatfold_core::transitions::{locate_critical, transition_residuals, LocateOptions};
use flatfold_core::{Error, Shape};
use serde_json::json;

use crate::enumeration::{default_threads, exact_Z, par_enumerate_Z, par_total_sum};
use crate::output::{Cell, Report, Table, SCHEMA_VERSION};
use crate::sweep::{bracketing_rows, par_map, Grid, Scale};
use crate::verify::{verify, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "flatfold", version, about = "Vertex models of flat-foldable crease patterns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-site free energy of a defect family.
    Fe(FeArgs),
    /// Density, its derivative, compressibility and pressure of a defect gas.
    Density(GasArgs),
    /// Equation of state: density against pressure.
    Eos(GasArgs),
    /// Compare enumeration, Pfaffians and closed forms on small tori.
    Verify(VerifyArgs),
    /// Roots of the transition conditions along a one-parameter family.
    Transitions(TransitionArgs),
    /// Exhaustive enumeration of a defect-family torus.
    Enumerate(EnumerateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cp {
    Miura,
    Trapezoid,
    Barreto,
    Kite,
    Square,
    /// Layer-ordering defects of the 3-coloring (density and eos only).
    Coloring,
    /// Equal-ω 16-vertex family (transitions only).
    SixteenEqual,
}

impl Cp {
    fn kind(self) -> Option<CpKind> {
        match self {
            Cp::Miura => Some(CpKind::Miura),
            Cp::Trapezoid => Some(CpKind::Trapezoid),
            Cp::Barreto => Some(CpKind::BarretoMars),
            Cp::Kite => Some(CpKind::Kite),
            Cp::Square => Some(CpKind::SimpleSquare),
            Cp::Coloring | Cp::SixteenEqual => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Cp::Miura => "miura",
            Cp::Trapezoid => "trapezoid",
            Cp::Barreto => "barreto",
            Cp::Kite => "kite",
            Cp::Square => "square",
            Cp::Coloring => "coloring",
            Cp::SixteenEqual => "sixteen-equal",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    Y,
    Z,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleArg {
    Lin,
    Log,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Single crease fugacity y.
    #[arg(long, conflicts_with_all = ["z", "start"])]
    pub y: Option<f64>,
    /// Single face fugacity z.
    #[arg(long, conflicts_with = "start")]
    pub z: Option<f64>,
    /// Sweep family when --start/--stop are used.
    #[arg(long, value_enum, default_value_t = FamilyArg::Y)]
    pub family: FamilyArg,
    #[arg(long, requires = "stop")]
    pub start: Option<f64>,
    #[arg(long, requires = "start")]
    pub stop: Option<f64>,
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = ScaleArg::Log)]
    pub scale: ScaleArg,
}

#[derive(Args, Debug, Clone)]
pub struct FeArgs {
    #[arg(long, value_enum)]
    pub cp: Cp,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Starting quadrature grid (points per axis); doubled until converged.
    #[arg(long, default_value_t = 16)]
    pub order: usize,
    /// Largest quadrature grid.
    #[arg(long, default_value_t = 512)]
    pub max_order: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GasArgs {
    #[arg(long, value_enum)]
    pub cp: Cp,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 16)]
    pub order: usize,
    #[arg(long, default_value_t = 512)]
    pub max_order: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Restrict to one crease pattern (square covers all four staggerings).
    #[arg(long, value_enum)]
    pub cp: Option<Cp>,
    /// Check the colouring count identity instead.
    #[arg(long)]
    pub coloring: bool,
    /// Include the 16-vertex suite when --cp is given.
    #[arg(long)]
    pub sixteen: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub draws: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Enumerate in exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
    /// Report file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TransitionArgs {
    #[arg(long, value_enum)]
    pub cp: Cp,
    /// Scan interval; defaults to (0.01, 100) for y and (0.1, 10) for v1 = v3.
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 4000)]
    pub samples: usize,
    /// ω of the equal-ω 16-vertex family.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// v5 = v7 of the equal-ω 16-vertex family.
    #[arg(long, default_value_t = 1.0)]
    pub v5: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct EnumerateArgs {
    #[arg(long, value_enum)]
    pub cp: Cp,
    #[arg(long)]
    pub y: f64,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Also sum in exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

/// What a command produced and how the process should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad run specification: exit 3.
    Invalid(String),
    /// Computation failed: exit 1.
    Failed(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Failed(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(s) => write!(f, "invalid run specification: {s}"),
            CliError::Failed(s) => write!(f, "computation failed: {s}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidWeight
            | Error::MaskViolation { .. }
            | Error::IncompatibleShape
            | Error::BudgetExceeded { .. }
            | Error::SymmetryViolation
            | Error::Unsupported => CliError::Invalid(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}

fn threads(o: Option<usize>) -> usize {
    o.unwrap_or_else(default_threads).max(1)
}

impl GridArgs {
    fn resolve(&self) -> CliResult<(Grid, FamilyArg)> {
        let (grid, family) = match (self.y, self.z, self.start, self.stop) {
            (Some(y), None, None, None) => (Grid::single(y), FamilyArg::Y),
            (None, Some(z), None, None) => (Grid::single(z), FamilyArg::Z),
            (None, None, Some(a), Some(b)) => {
                if self.points < 2 {
                    return invalid("a sweep needs --points >= 2");
                }
                let scale = match self.scale {
                    ScaleArg::Lin => Scale::Linear,
                    ScaleArg::Log => Scale::Log,
                };
                (Grid { start: a, stop: b, points: self.points, scale }, self.family)
            }
            _ => return invalid("give one of --y, --z or --start/--stop"),
        };
        grid.validate().map_err(|e| CliError::Invalid(e.0))?;
        Ok((grid, family))
    }
}

fn grid_json(g: &Grid) -> serde_json::Value {
    json!({
        "start": g.start,
        "stop": g.stop,
        "points": g.points,
        "scale": match g.scale { Scale::Linear => "lin", Scale::Log => "log" },
    })
}

fn emit(table: &Table, out: &OutArgs, model: &str, family: &str, grid: serde_json::Value) -> CliResult<String> {
    let text = match out.format {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf).map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => Report {
            schema_version: SCHEMA_VERSION,
            model: model.to_string(),
            family: family.to_string(),
            grid,
            rows: table.json_rows(),
            max_rel_err: None,
            tolerances: BTreeMap::new(),
        }
        .to_json(),
    };
    write_out(&out.output, &text)?;
    Ok(text)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn family_name(f: FamilyArg) -> &'static str {
    match f {
        FamilyArg::Y => "y",
        FamilyArg::Z => "z",
    }
}

/// Crease fugacity of a grid value.
fn as_y(f: f64, family: FamilyArg) -> f64 {
    match family {
        FamilyArg::Y => f,
        FamilyArg::Z => f.sqrt().sqrt(),
    }
}

fn closed(value: f64) -> QuadResult {
    QuadResult { value, previous: value, order: 0, converged: true, sign_change: false }
}

/// Per-site free energy of the defect family of `cp` at crease fugacity `y`.
/// Closed forms report quadrature order 0.
pub fn free_energy(cp: CpKind, y: f64, opts: &QuadOptions) -> flatfold_core::Result<QuadResult> {
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::InvalidWeight);
    }
    let m = defect_family(cp, y);
    match cp {
        CpKind::Miura => Ok(miura_symmetric_integrand(y).free_energy(opts)),
        CpKind::Trapezoid => Ok(trapezoid_symmetric_integrand(y).free_energy(opts)),
        CpKind::BarretoMars => Ok(closed(barreto_free_energy(&m.t, &m.u, &m.v, &m.w)?)),
        CpKind::Kite => Ok(closed(kite_free_energy(&m.v, &m.w)?)),
        CpKind::SimpleSquare => thermo_free_energy(&m, opts),
    }
}

fn quad_options(order: usize, max_order: usize) -> CliResult<QuadOptions> {
    if order < 2 || max_order < order {
        return invalid("need 2 <= --order <= --max-order");
    }
    Ok(QuadOptions { start: order, max: max_order, ..QuadOptions::default() })
}

pub fn cmd_fe(a: &FeArgs) -> CliResult<Outcome> {
    let Some(cp) = a.cp.kind() else { return invalid("fe takes a crease pattern") };
    let (grid, family) = a.grid.resolve()?;
    let opts = quad_options(a.order, a.max_order)?;
    let xs = grid.values();
    let res = par_map(&xs, threads(a.out.threads), |f| free_energy(cp, as_y(f, family), &opts));
    let mut t = Table::new(vec!["fugacity", "free_energy", "grid_order", "converged"]);
    let mut all = true;
    for (x, r) in xs.iter().zip(res) {
        let r = r?;
        all &= r.converged;
        t.rows.push(vec![Cell::Real(*x), Cell::Real(r.value), Cell::Int(r.order as u64), Cell::Bool(r.converged)]);
    }
    let text = emit(&t, &a.out, a.cp.name(), family_name(family), grid_json(&grid))?;
    Ok(Outcome { text, code: if all { EXIT_OK } else { EXIT_TOLERANCE } })
}

fn gas_model(cp: Cp) -> CliResult<GasModel> {
    match cp {
        Cp::Miura => Ok(GasModel::Miura),
        Cp::Trapezoid => Ok(GasModel::Trapezoid),
        Cp::Barreto => Ok(GasModel::BarretoMars),
        Cp::Coloring => Ok(GasModel::Coloring),
        _ => invalid(format!("no lattice-gas curve for {}", cp.name())),
    }
}

fn gas_table(a: &GasArgs, eos: bool) -> CliResult<Outcome> {
    let model = gas_model(a.cp)?;
    let (grid, family) = a.grid.resolve()?;
    if grid.points == 1 && grid.start == 0.0 {
        return invalid("the fugacity must be positive");
    }
    if model == GasModel::Coloring && family == FamilyArg::Y {
        return invalid("the coloring family is parametrised by z");
    }
    let fam = match family {
        FamilyArg::Y => Family::Y,
        FamilyArg::Z => Family::Z,
    };
    let opts = quad_options(a.order, a.max_order)?;
    let xs = grid.values();
    let pts = par_map(&xs, threads(a.out.threads), |f| eos_point(model, fam, f, &opts));
    let flags = bracketing_rows(&xs, transition_fugacity(model, fam));
    let mut t = if eos {
        Table::new(vec!["rho", "betaP", "critical"])
    } else {
        Table::new(vec!["fugacity", "rho", "drho", "kT", "betaP", "critical"])
    };
    for (p, flag) in pts.into_iter().zip(flags) {
        let p = p?;
        t.rows.push(if eos {
            vec![Cell::Real(p.density), Cell::Real(p.pressure), Cell::Bool(flag)]
        } else {
            vec![
                Cell::Real(p.fugacity),
                Cell::Real(p.density),
                Cell::Real(p.ddensity),
                Cell::Real(p.compressibility),
                Cell::Real(p.pressure),
                Cell::Bool(flag),
            ]
        });
    }
    let text = emit(&t, &a.out, a.cp.name(), family_name(family), grid_json(&grid))?;
    Ok(Outcome { text, code: EXIT_OK })
}

pub fn cmd_density(a: &GasArgs) -> CliResult<Outcome> {
    gas_table(a, false)
}

pub fn cmd_eos(a: &GasArgs) -> CliResult<Outcome> {
    gas_table(a, true)
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<Outcome> {
    if !(a.tol >= 0.0) || a.draws == 0 {
        return invalid("need --tol >= 0 and --draws >= 1");
    }
    let mut suites = match (a.coloring, a.cp) {
        (true, None | Some(Cp::Miura | Cp::Trapezoid)) => vec![Suite::Coloring],
        (true, Some(cp)) => return invalid(format!("no colouring identity for {}", cp.name())),
        (false, None) => Suite::DEFAULT.to_vec(),
        (false, Some(cp)) => vec![match cp {
            Cp::Miura => Suite::Miura,
            Cp::Trapezoid => Suite::Trapezoid,
            Cp::Barreto => Suite::Barreto,
            Cp::Kite => Suite::Kite,
            Cp::Square => Suite::Square,
            Cp::SixteenEqual => Suite::Sixteen,
            Cp::Coloring => Suite::Coloring,
        }],
    };
    if a.sixteen && !suites.contains(&Suite::Sixteen) {
        suites.push(Suite::Sixteen);
    }
    let o = VerifyOptions { seed: a.seed, draws: a.draws, tol: a.tol, exact: a.exact, threads: threads(a.threads) };
    let report = verify(&suites, &o)?;
    let text = report.to_json();
    write_out(&a.output, &text)?;
    Ok(Outcome { text, code: if report.breached() { EXIT_TOLERANCE } else { EXIT_OK } })
}

pub fn cmd_transitions(a: &TransitionArgs) -> CliResult<Outcome> {
    let sixteen = a.cp == Cp::SixteenEqual;
    let (lo, hi) = if sixteen {
        (a.lo.unwrap_or(0.1), a.hi.unwrap_or(10.0))
    } else {
        (a.lo.unwrap_or(0.01), a.hi.unwrap_or(100.0))
    };
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || a.samples < 3 {
        return invalid("need 0 < --lo < --hi and --samples >= 3");
    }
    let opts = LocateOptions { samples: a.samples, ..LocateOptions::default() };
    let pts = if sixteen {
        if !(a.omega > 0.0 && a.v5 >= 0.0) {
            return invalid("need --omega > 0 and --v5 >= 0");
        }
        let (omega, v5) = (a.omega, a.v5);
        locate_critical(
            move |x| Ok(equal_omega_transitions(&SixteenVertexWeights::equal_omega(omega, [x, x, v5, v5])?)?.residuals),
            lo,
            hi,
            &opts,
        )
    } else {
        let Some(cp) = a.cp.kind() else { return invalid("transitions takes a crease pattern or sixteen-equal") };
        locate_critical(move |y| Ok(transition_residuals(&defect_family(cp, y))?.residuals), lo, hi, &opts)
    };
    let mut t = Table::new(vec!["condition_index", "parameter_root", "residual"]);
    for p in &pts {
        for &k in &p.conditions {
            t.rows.push(vec![Cell::Int(k as u64), Cell::Real(p.parameter), Cell::Real(p.residual)]);
        }
    }
    let family = if sixteen { "v1=v3" } else { "y" };
    let grid = json!({ "lo": lo, "hi": hi, "samples": a.samples });
    let text = emit(&t, &a.out, a.cp.name(), family, grid)?;
    Ok(Outcome { text, code: EXIT_OK })
}

pub fn cmd_enumerate(a: &EnumerateArgs) -> CliResult<Outcome> {
    let Some(cp) = a.cp.kind() else { return invalid("enumerate takes a crease pattern") };
    if !(a.y.is_finite() && a.y >= 0.0) || a.m == 0 || a.n == 0 {
        return invalid("need --y >= 0 and positive --m, --n");
    }
    let s = Shape::new(a.m, a.n);
    check_budget(s)?;
    if !cp.natural_staggering().fits(s) {
        return Err(Error::IncompatibleShape.into());
    }
    let model = defect_family(cp, a.y);
    let th = threads(a.out.threads);
    let z = par_enumerate_Z(&model, s, th)?;
    // reversed creases per site relative to the ground state
    let tables = odd_tables(&model, s)?;
    let reference = cp.ground_state(s)?.bits();
    let b = par_total_sum(s, &tables, Some(&reference), th);
    let rho = b.n1.value() / b.z.value() / s.sites() as f64;
    let mut header = vec!["m", "n", "configurations", "Z", "lnZ_per_site", "rho"];
    let mut row = vec![
        Cell::Int(s.m as u64),
        Cell::Int(s.n as u64),
        Cell::Int(z.config_count),
        Cell::Real(z.value),
        Cell::Real(z.value.ln() / s.sites() as f64),
        Cell::Real(rho),
    ];
    if a.exact {
        header.push("Z_exact");
        row.push(Cell::Text(exact_Z(&model, s, th)?.0.to_string()));
    }
    let mut t = Table::new(header);
    t.rows.push(row);
    let grid = json!({ "y": a.y, "m": a.m, "n": a.n });
    let text = emit(&t, &a.out, a.cp.name(), "y", grid)?;
    Ok(Outcome { text, code: EXIT_OK })
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Fe(a) => cmd_fe(a),
        Command::Density(a) => cmd_density(a),
        Command::Eos(a) => cmd_eos(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Transitions(a) => cmd_transitions(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    }
}
