//! Command-line front end.
//!
//! Every command builds a [`Report`]: ordered summary key/values plus named
//! tables. The report is rendered as an aligned text table, CSV or JSON.
//! Output is a pure function of the configuration and seed, so repeated runs
//! produce byte-identical files.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 negative
//! mathematical verdict, 3 solver did not converge.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fourier::{Lattice, SpectralField, VectorSpectralField};
use crate::mild_solver::{
    default_seminorm_grid, picard_solve, residual_report, FnNonlinearity, ModalState, Nonlinearity, PicardOptions,
    ResidualNorm, SolveStatus, TimeGrid, Trajectory,
};
use crate::parabolicity::{
    early_time_decay_fit_with, optimize_mu, parabolicity_report, DecayFit, DEFAULT_EPS, DEFAULT_MU,
};
use crate::problems::navier_stokes::energy_budget;
use crate::problems::nonlocal::{compare_with_closed_form, default_kappa};
use crate::problems::{
    divergence_demo, feasibility_search, ns_certificate, subcritical_check, taylor_green, GradientProblem, NonlocalBlock,
    NonlocalProblem, NsProblem, ProblemFile, ProblemKind,
};
use crate::semigroup::{borderline_field, smoothing_sweep, sobolev_decay_fit, SmoothingSweep};
use crate::stats::geomspace;

#[derive(Debug, Parser)]
#[command(name = "parascale", version, about = "Parabolic existence machinery on analytic scales, made computable")]
pub struct Cli {
    /// Problem file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file; CSV side tables go next to it as `<stem>.<table>.csv`.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Picard tolerance override.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Picard iteration cap override.
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// χ, the constants J and I, the horizon T* and the verdict.
    CheckParabolicity,
    /// Gaussian smoothing sweep and Sobolev decay fits.
    VerifySemigroup,
    /// Solve the problem named in the config file.
    Solve,
    /// Run a worked example; the config file may override its parameters.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
    },
    /// Parameter inequalities of the Navier–Stokes toy.
    Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Nonlocal,
    Divergence,
    Gradient,
    Ns3d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Usage = 1,
    Negative = 2,
    NotConverged = 3,
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Num(v) if *v == 0.0 || !v.is_finite() => v.to_string(),
            Cell::Num(v) if (1e-3..1e5).contains(&v.abs()) => format!("{v:.6}"),
            Cell::Num(v) => format!("{v:.4e}"),
            Cell::Empty => "-".into(),
            other => other.csv(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(v.to_string()),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Too large for the text rendering; only its size is shown there.
    pub bulk: bool,
}

impl Table {
    fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            bulk: false,
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, rec: Vec<String>| {
            w.write_record(rec).map_err(|e| Error::Config(e.to_string()))
        };
        write(&mut w, self.columns.clone())?;
        for row in &self.rows {
            write(&mut w, row.iter().map(Cell::csv).collect())?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::human).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([self.columns[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: &[String]| {
            let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.columns);
        out += &(line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
        for r in &cells {
            out += &line(r);
        }
        out
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        json!({ "columns": self.columns, "rows": rows })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub summary: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
    pub exit: Exit,
}

impl Report {
    fn new(command: &str) -> Self {
        Self { command: command.to_string(), summary: Vec::new(), tables: Vec::new(), exit: Exit::Ok }
    }

    fn put(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Lowers the exit status to `exit` unless a worse one is already set.
    fn flag(&mut self, exit: Exit) {
        if exit as i32 > self.exit as i32 {
            self.exit = exit;
        }
    }

    fn summary_table(&self) -> Table {
        let mut t = Table::new("summary", &["key", "value"]);
        for (k, v) in &self.summary {
            t.push(vec![k.as_str().into(), v.clone()]);
        }
        t
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("parascale {}\n\n", self.command);
        let width = self.summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.summary {
            let _ = writeln!(out, "  {k:<width$}  {}", v.human());
        }
        for t in &self.tables {
            out.push('\n');
            if t.bulk {
                let _ = writeln!(out, "[{}] {} rows (use --format csv or json)", t.name, t.rows.len());
            } else {
                let _ = writeln!(out, "[{}]", t.name);
                out += &t.to_text();
            }
        }
        out
    }

    /// Summary followed by every table, each introduced by a `# name` line.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for t in std::iter::once(self.summary_table()).chain(self.tables.iter().cloned()) {
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "# {}", t.name);
            out += &t.to_csv()?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let tables: Map<String, Value> = self.tables.iter().map(|t| (t.name.clone(), t.to_json())).collect();
        let doc = json!({ "command": self.command, "summary": summary, "tables": tables });
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    }
}

/// Runtime settings resolved from the flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub problem: ProblemFile,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let problem = match &cli.config {
            Some(path) => ProblemFile::load(path)?,
            None => ProblemFile::parse("")?,
        };
        if cli.tol.is_some_and(|t| !(t > 0.0)) {
            return Err(Error::Config("--tol must be positive".into()));
        }
        if cli.max_iter == Some(0) {
            return Err(Error::Config("--max-iter must be at least 1".into()));
        }
        Ok(Self {
            command: cli.command,
            problem,
            format: cli.format,
            out: cli.out.clone(),
            seed: cli.seed,
            tol: cli.tol,
            max_iter: cli.max_iter,
        })
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// to `stdout`/`stderr`. Returns the process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage as i32 } else { Exit::Ok as i32 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match RunConfig::from_cli(&cli).and_then(|cfg| execute(&cfg).and_then(|r| emit(&cfg, &r, stdout).map(|_| r))) {
        Ok(report) => report.exit as i32,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Exit::Usage as i32
        }
    }
}

/// Builds the report for one command without writing anything.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::CheckParabolicity => cmd_check_parabolicity(cfg),
        Command::VerifySemigroup => cmd_verify_semigroup(cfg),
        Command::Solve => cmd_solve(cfg, cfg.problem.kind()?),
        Command::Example { name } => cmd_example(cfg, name),
        Command::Certificate => cmd_certificate(cfg),
    }
}

fn emit(cfg: &RunConfig, report: &Report, stdout: &mut dyn Write) -> Result<()> {
    let Some(path) = &cfg.out else {
        let text = match cfg.format {
            Format::Table => report.to_text(),
            Format::Csv => report.to_csv()?,
            Format::Json => report.to_json(),
        };
        stdout.write_all(text.as_bytes())?;
        return Ok(());
    };
    match cfg.format {
        Format::Table => std::fs::write(path, report.to_text())?,
        Format::Json => std::fs::write(path, report.to_json())?,
        Format::Csv => {
            let (primary, rest) = match report.tables.split_first() {
                Some((first, rest)) => (first.clone(), rest.to_vec()),
                None => (report.summary_table(), Vec::new()),
            };
            std::fs::write(path, primary.to_csv()?)?;
            if !report.tables.is_empty() {
                std::fs::write(side_path(path, "summary"), report.summary_table().to_csv()?)?;
            }
            for t in rest {
                std::fs::write(side_path(path, &t.name), t.to_csv()?)?;
            }
        }
    }
    stdout.write_all(report.to_text().as_bytes())?;
    Ok(())
}

/// `dir/run.csv` + `residuals` → `dir/run.residuals.csv`.
pub fn side_path(path: &Path, name: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{name}.csv"))
}

fn cmd_check_parabolicity(cfg: &RunConfig) -> Result<Report> {
    let file = &cfg.problem;
    let mut report = Report::new("check-parabolicity");
    let (e, mu, eps, optimize) = match (&file.exponents, file.problem) {
        (Some(block), _) => (block.data()?, block.mu, block.eps, block.optimize_mu),
        (None, Some(ProblemKind::Nonlocal)) => {
            let p = file.nonlocal_block().params()?;
            report.put("problem", format!("nonlocal n={} lambda={}", p.n, p.lambda));
            (p.exponents()?, DEFAULT_MU, DEFAULT_EPS, false)
        }
        (None, Some(ProblemKind::Gradient)) => {
            report.put("problem", "gradient");
            (file.gradient_block().params()?.exponents()?, DEFAULT_MU, DEFAULT_EPS, false)
        }
        _ => return Err(Error::Config("check-parabolicity needs an [exponents] block".into())),
    };
    let mut r = parabolicity_report(&e, mu, eps)?;
    if optimize && r.parabolic {
        let (best_mu, t_star) = optimize_mu(&e, eps)?;
        r.mu = best_mu;
        r.t_star = Some(t_star);
    }
    for (k, v) in [("phi", e.phi), ("alpha", e.alpha), ("beta", e.beta), ("gamma", e.gamma), ("C", e.c), ("R", e.r)] {
        report.put(k, v);
    }
    report.put("chi", r.chi);
    report.put("J", r.j);
    report.put("I", r.i);
    report.put("T_star", r.t_star);
    report.put("mu", r.mu);
    report.put("eps", r.eps);
    report.put("parabolic", r.parabolic);
    report.put("verdict", if r.parabolic { "parabolic" } else { "not parabolic" });
    if !r.parabolic {
        if file.problem == Some(ProblemKind::Nonlocal) {
            report.put("see_also", "parascale example divergence");
        }
        report.flag(Exit::Negative);
    }
    Ok(report)
}

fn cmd_verify_semigroup(cfg: &RunConfig) -> Result<Report> {
    let b = cfg.problem.semigroup_block();
    let sweep = SmoothingSweep {
        dim: b.dim,
        modes: b.n,
        fields: b.fields,
        s: b.s,
        t_grid: geomspace(b.t_range[0], b.t_range[1], b.t_count),
        delta_grid: geomspace(b.delta_range[0], b.delta_range[1], b.delta_count),
        seed: cfg.seed,
        strip: b.strip,
    };
    let summary = smoothing_sweep(&sweep)?;
    let mut report = Report::new("verify-semigroup");
    report.put("dim", b.dim);
    report.put("N", b.n);
    report.put("fields", b.fields);
    report.put("seed", cfg.seed as i64);
    report.put("samples", summary.samples.len());
    report.put("max_l1_ratio", summary.max_l1_ratio);
    report.put("max_strip_ratio", summary.max_strip_ratio);
    let bound_holds = summary.max_l1_ratio <= 1.0 + 1e-9;
    report.put("l1_bound_holds", bound_holds);
    if !bound_holds {
        report.flag(Exit::Negative);
    }

    let mut table = Table::new("sweep", &["field", "t", "delta", "s", "ratio_l1", "ratio_strip"]);
    for s in &summary.samples {
        table.push(vec![s.field.into(), s.t.into(), s.delta.into(), s.s.into(), s.ratio_l1.into(), s.ratio_strip.into()]);
    }
    table.bulk = true;

    let times = geomspace(1e-4, 1e-2, 9);
    let u = borderline_field(Lattice::new(1, b.decay_n)?, b.decay_r);
    let mut decay = Table::new("decay", &["a", "r", "gap", "slope", "expected", "r_squared"]);
    for &gap in &b.decay_gaps {
        let fit = sobolev_decay_fit(&u, b.decay_r + gap, b.decay_r, &times)?;
        report.put(&format!("decay_slope_gap_{gap}"), fit.slope);
        decay.push(vec![
            (b.decay_r + gap).into(),
            b.decay_r.into(),
            gap.into(),
            fit.slope.into(),
            (-gap / 2.0).into(),
            fit.r_squared.into(),
        ]);
    }
    report.tables = vec![table, decay];
    Ok(report)
}

fn picard_options(cfg: &RunConfig, norm: ResidualNorm) -> PicardOptions {
    let s = cfg.problem.solver_block();
    let base = PicardOptions::default();
    PicardOptions {
        r_ball: s.r_ball.unwrap_or(base.r_ball),
        max_iter: cfg.max_iter.or(s.max_iter).unwrap_or(base.max_iter),
        tol: cfg.tol.or(s.tol).unwrap_or(base.tol),
        residual_norm: norm,
        ..base
    }
}

fn time_grid(cfg: &RunConfig, t_end: f64, steps: usize, kappa: f64) -> Result<TimeGrid> {
    let s = cfg.problem.solver_block();
    TimeGrid::graded(s.t_end.unwrap_or(t_end), s.steps.unwrap_or(steps), s.kappa.unwrap_or(kappa))
}

fn lattice_from_file(cfg: &RunConfig, dim: usize, n: usize, fixed_dim: bool) -> Result<Lattice> {
    let d = cfg.problem.dim.unwrap_or(dim);
    if fixed_dim && d != dim {
        return Err(Error::Config(format!("this problem needs dim = {dim}, got {d}")));
    }
    Lattice::new(d, cfg.problem.n.unwrap_or(n))
}

/// Runs Picard and records the residual history, seminorm table and decay
/// fit.
fn solve_into<S: ModalState, N: Nonlinearity<S>>(
    report: &mut Report,
    f: &N,
    template: &S,
    grid: TimeGrid,
    options: &PicardOptions,
) -> Result<Trajectory<S>> {
    let traj = picard_solve(f, template, grid, options)?;
    let grid = traj.grid();
    let meta = traj.meta();
    report.put("problem", f.description());
    report.put("T_end", grid.t_end());
    report.put("steps", grid.steps());
    report.put("kappa", grid.kappa());
    report.put("tol", options.tol);
    report.put("max_iter", options.max_iter);
    report.put("iterations", meta.iterations);
    report.put("status", format!("{:?}", meta.status));
    report.put("final_residual", meta.residual_history.last().copied());
    report.put("ball_exits", meta.ball_exits.len());
    report.put("norm", format!("{:?}", options.residual_norm));
    if meta.status != SolveStatus::Converged {
        report.flag(Exit::NotConverged);
    }

    let mut residuals = Table::new("residuals", &["iteration", "residual"]);
    for (i, r) in meta.residual_history.iter().enumerate() {
        residuals.push(vec![(i + 1).into(), (*r).into()]);
    }
    report.tables.push(residuals);

    if meta.status != SolveStatus::Diverged {
        let (taus, mus) = default_seminorm_grid(grid);
        let mut seminorms = Table::new("seminorms", &["tau", "mu", "value"]);
        for e in residual_report(&traj, f, &taus, &mus, options.gamma, options.residual_norm)? {
            seminorms.push(vec![e.tau.into(), e.mu.into(), e.value.into()]);
        }
        report.tables.push(seminorms);
        match early_time_decay_fit_with(&traj, options.residual_c, options.gamma, options.residual_norm)? {
            DecayFit::Slope(fit) => {
                report.put("decay_slope", fit.slope);
                report.put("decay_r_squared", fit.r_squared);
            }
            DecayFit::Vanishing => report.put("decay_slope", "vanishing"),
        }
    }
    Ok(traj)
}

fn push_field(table: &mut Table, t: f64, component: usize, u: &SpectralField) {
    for (k, c) in u.modes() {
        if c.re != 0.0 || c.im != 0.0 {
            table.push(vec![
                t.into(),
                component.into(),
                k[0].into(),
                k[1].into(),
                k[2].into(),
                c.re.into(),
                c.im.into(),
            ]);
        }
    }
}

const TRAJECTORY_COLUMNS: [&str; 7] = ["t", "component", "k1", "k2", "k3", "re", "im"];

fn scalar_dump(traj: &Trajectory<SpectralField>) -> Table {
    let mut table = Table::new("trajectory", &TRAJECTORY_COLUMNS);
    for (&t, u) in traj.grid().nodes().iter().zip(traj.fields()) {
        push_field(&mut table, t, 0, u);
    }
    table.bulk = true;
    table
}

fn vector_dump(traj: &Trajectory<VectorSpectralField>) -> Table {
    let mut table = Table::new("trajectory", &TRAJECTORY_COLUMNS);
    for (&t, u) in traj.grid().nodes().iter().zip(traj.fields()) {
        for (j, c) in u.components().iter().enumerate() {
            push_field(&mut table, t, j + 1, c);
        }
    }
    table.bulk = true;
    table
}

fn cmd_solve(cfg: &RunConfig, kind: ProblemKind) -> Result<Report> {
    let mut report = Report::new("solve");
    match kind {
        ProblemKind::Nonlocal => return run_nonlocal(cfg, report),
        ProblemKind::Gradient => return run_gradient(cfg, report),
        ProblemKind::Ns3d => return run_ns(cfg, report),
        ProblemKind::Zero | ProblemKind::Constant => {}
    }
    let lattice = lattice_from_file(cfg, 1, 16, false)?;
    let value = match kind {
        ProblemKind::Constant => cfg.problem.constant.map_or(1.0, |c| c.value),
        _ => 0.0,
    };
    let g = SpectralField::constant(lattice, value);
    let name = if kind == ProblemKind::Zero { "zero".to_string() } else { format!("constant {value}") };
    let f = FnNonlinearity::new(move |_: f64, _: &SpectralField| Ok(g.clone()), 0.0, 0.0, name);
    let grid = time_grid(cfg, 1.0, 16, 1.0)?;
    let template = SpectralField::zeros(lattice, true);
    let traj = solve_into(&mut report, &f, &template, grid, &picard_options(cfg, ResidualNorm::Strip))?;
    report.tables.push(scalar_dump(&traj));
    Ok(report)
}

fn cmd_example(cfg: &RunConfig, name: ExampleName) -> Result<Report> {
    let kind = cfg.problem.problem;
    let expect = |k: ProblemKind| match kind {
        Some(found) if found != k => Err(Error::Config(format!("config describes {found:?}, example needs {k:?}"))),
        _ => Ok(()),
    };
    let mut report = Report::new(&format!("example {}", format!("{name:?}").to_lowercase()));
    match name {
        ExampleName::Nonlocal => {
            expect(ProblemKind::Nonlocal)?;
            run_nonlocal(cfg, report)
        }
        ExampleName::Divergence => {
            expect(ProblemKind::Nonlocal)?;
            let k = cfg.problem.nonlocal.map_or(4096, |b| b.k);
            divergence_into(&mut report, k)?;
            Ok(report)
        }
        ExampleName::Gradient => {
            expect(ProblemKind::Gradient)?;
            run_gradient(cfg, report)
        }
        ExampleName::Ns3d => {
            expect(ProblemKind::Ns3d)?;
            run_ns(cfg, report)
        }
    }
}

/// `ε` grid of the divergence demo.
pub fn divergence_eps_grid() -> Vec<f64> {
    geomspace(1e-3, 1e-12, 28)
}

fn divergence_into(report: &mut Report, k: usize) -> Result<()> {
    let demo = divergence_demo(&divergence_eps_grid(), k)?;
    report.put("K", demo.k);
    report.put("slope", demo.fit.slope);
    report.put("r_squared", demo.fit.r_squared);
    report.put("rows_used", demo.fit.points);
    let diverges = demo.fit.slope > 0.0 && demo.fit.r_squared >= 0.99;
    report.put("verdict", if diverges { "integral diverges like log|log eps|" } else { "inconclusive" });
    let mut table = Table::new("divergence", &["eps", "integral", "minorant", "truncation_limited"]);
    for r in &demo.rows {
        table.push(vec![r.eps.into(), r.integral.into(), r.minorant.into(), r.truncation_limited.into()]);
    }
    report.tables.push(table);
    Ok(())
}

fn run_nonlocal(cfg: &RunConfig, mut report: Report) -> Result<Report> {
    let block: NonlocalBlock = cfg.problem.nonlocal_block();
    let params = block.params()?;
    if cfg.problem.dim.is_some_and(|d| d != 1) {
        return Err(Error::Config("the nonlocal problem is one-dimensional".into()));
    }
    let chi = params.chi();
    report.put("n", params.n as i64);
    report.put("lambda", params.lambda);
    report.put("chi", chi);
    if chi >= 1.0 {
        report.put("closed_form", "none: n*lambda >= 1, the zero mode integral diverges");
        divergence_into(&mut report, 4096)?;
        report.flag(Exit::Negative);
        return Ok(report);
    }
    let problem = NonlocalProblem::new(params)?;
    let grid = time_grid(cfg, 0.5, 256, default_kappa(chi))?;
    let template = SpectralField::zeros(*problem.u_hat.lattice(), true);
    let traj = solve_into(&mut report, &problem, &template, grid, &picard_options(cfg, ResidualNorm::Strip))?;
    let cmp = compare_with_closed_form(&problem, &traj, block.quad_tol)?;
    report.put("max_rel_nonzero", cmp.max_rel_nonzero);
    report.put("max_rel_mode0", cmp.max_rel_mode0);
    report.put("max_abs_mode0", cmp.max_abs_mode0);
    let mut table = Table::new("closed_form", &["t", "mode0_solver", "mode0_exact", "abs_diff"]);
    for &(t, got, want) in &cmp.mode0 {
        table.push(vec![t.into(), got.into(), want.into(), (got - want).abs().into()]);
    }
    report.tables.insert(0, table);
    report.tables.push(scalar_dump(&traj));
    Ok(report)
}

fn run_gradient(cfg: &RunConfig, mut report: Report) -> Result<Report> {
    let block = cfg.problem.gradient_block();
    let params = block.params()?;
    let lattice = lattice_from_file(cfg, 1, 32, false)?;
    let check = subcritical_check(lattice.dim(), params.p, params.q);
    report.put("p", params.p);
    report.put("q", params.q);
    report.put("subcritical", check.subcritical);
    report.put("subcritical_margin", check.margin);
    let half = num_complex::Complex64::new(0.5 * block.amplitude, 0.0);
    let u_hat = SpectralField::real_from_modes(lattice, &[([1, 0, 0], half), ([-1, 0, 0], half)])?;
    let problem = GradientProblem::new(params, u_hat)?;
    let grid = time_grid(cfg, 0.1, 64, 2.0)?;
    let template = SpectralField::zeros(lattice, true);
    let traj = solve_into(&mut report, &problem, &template, grid, &picard_options(cfg, ResidualNorm::Strip))?;
    report.tables.push(scalar_dump(&traj));
    Ok(report)
}

fn certificate_into(report: &mut Report, cfg: &RunConfig) -> Result<bool> {
    let block = cfg.problem.ns_block();
    let params = block.params()?;
    let cert = ns_certificate(&params);
    let mut table = Table::new("certificate", &["inequality", "lhs", "bound", "pass"]);
    for i in 0..3 {
        table.push(vec![(i + 1).into(), cert.lhs[i].into(), cert.bounds[i].into(), cert.pass[i].into()]);
    }
    report.put("rho", params.rho);
    report.put("r", params.r);
    report.put("a", params.a);
    report.put("eps", params.eps);
    report.put("certificate", cert.all_pass());
    report.put("certificate_margin", cert.margin());
    let search = feasibility_search(params.r, block.search_points)?;
    report.put("feasible_for_r", search.best.is_some());
    if let Some(best) = search.best {
        report.put("feasible_rho", best.params.rho);
        report.put("feasible_a", best.params.a);
        report.put("feasible_eps", best.params.eps);
        report.put("feasible_margin", best.margin());
    }
    report.tables.push(table);
    Ok(cert.all_pass())
}

fn cmd_certificate(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("certificate");
    if !certificate_into(&mut report, cfg)? {
        report.flag(Exit::Negative);
    }
    Ok(report)
}

fn run_ns(cfg: &RunConfig, mut report: Report) -> Result<Report> {
    let params = cfg.problem.ns_block().params()?;
    let lattice = lattice_from_file(cfg, 3, 16, true)?;
    certificate_into(&mut report, cfg)?;
    let problem = NsProblem::new(params, taylor_green(lattice)?)?;
    let grid = time_grid(cfg, 0.05, 16, 1.0)?;
    let template = VectorSpectralField::zeros(lattice, true);
    let traj = solve_into(&mut report, &problem, &template, grid, &picard_options(cfg, ResidualNorm::L1Exp))?;
    let budget = energy_budget(&problem, &traj)?;
    report.put("max_energy_budget_residual", budget.iter().copied().fold(0.0, f64::max));
    let end = traj.fields().last().expect("non-empty trajectory");
    let u_end = problem.velocity(traj.grid().t_end(), end)?;
    report.put("final_energy", u_end.energy());
    report.put("final_divergence_defect", u_end.divergence_defect());
    report.tables.push(vector_dump(&traj));
    Ok(report)
}
