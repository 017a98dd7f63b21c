//! Mild solutions of `u(t) = ∫₀ᵗ e^{(t-ξ)Δ} f(ξ, u(ξ)) dξ` on a graded time
//! grid: exponential (ETD) quadrature of the Duhamel integral and Picard
//! iteration of the map `F(u)(t) = ∫₀ᵗ e^{(t-ξ)Δ} f(ξ, u(ξ)) dξ`.
//!
//! Forcing is sampled once per cell `[t_i, t_{i+1}]` at the midpoint time
//! with the averaged state `(u_i + u_{i+1})/2`, so `f` is never evaluated at
//! `t = 0` and singular forcings `~ t^{-β}` stay integrable. For forcing that
//! is constant on each cell the quadrature is exact mode by mode.

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{norm_sq, Lattice, SpectralField, VectorSpectralField, Wavevector};
use crate::scales::{analytic_norm, l1_exp_bound, trajectory_seminorm, StripNormParams, TrajectorySeminormParams};
use crate::semigroup::{heat_apply, phi1};

/// Minimal vector-space interface shared by scalar and vector fields.
pub trait ModalState: Clone + Debug {
    fn lattice(&self) -> &Lattice;
    fn zeros_like(&self) -> Self;
    fn apply_real_multiplier(&self, symbol: impl Fn(&Wavevector) -> f64) -> Self;
    /// `self + scale * other`.
    fn axpy(&self, scale: f64, other: &Self) -> Result<Self>;
    /// Sampled strip norm of width `s`; for vector fields the max over
    /// components.
    fn strip_norm(&self, s: f64) -> f64;
    /// `Σ|c_k| e^{s‖k‖₁}` (summed over components); `+∞` on overflow.
    fn l1_exp(&self, s: f64) -> f64;
    fn is_zero(&self) -> bool;
    fn max_coeff_diff(&self, other: &Self) -> Result<f64>;

    fn scaled(&self, factor: f64) -> Self {
        self.apply_real_multiplier(|_| factor)
    }
}

impl ModalState for SpectralField {
    fn lattice(&self) -> &Lattice {
        SpectralField::lattice(self)
    }

    fn zeros_like(&self) -> Self {
        SpectralField::zeros(*SpectralField::lattice(self), self.is_real())
    }

    fn apply_real_multiplier(&self, symbol: impl Fn(&Wavevector) -> f64) -> Self {
        SpectralField::apply_real_multiplier(self, symbol)
    }

    fn axpy(&self, scale: f64, other: &Self) -> Result<Self> {
        SpectralField::axpy(self, scale, other)
    }

    fn strip_norm(&self, s: f64) -> f64 {
        analytic_norm(self, &StripNormParams::for_lattice(s, SpectralField::lattice(self)))
    }

    fn l1_exp(&self, s: f64) -> f64 {
        l1_exp_bound(self, s).unwrap_or(f64::INFINITY)
    }

    fn is_zero(&self) -> bool {
        SpectralField::is_zero(self)
    }

    fn max_coeff_diff(&self, other: &Self) -> Result<f64> {
        SpectralField::max_coeff_diff(self, other)
    }
}

impl ModalState for VectorSpectralField {
    fn lattice(&self) -> &Lattice {
        VectorSpectralField::lattice(self)
    }

    fn zeros_like(&self) -> Self {
        VectorSpectralField::zeros(*VectorSpectralField::lattice(self), self.is_real())
    }

    fn apply_real_multiplier(&self, symbol: impl Fn(&Wavevector) -> f64) -> Self {
        VectorSpectralField::apply_real_multiplier(self, symbol)
    }

    fn axpy(&self, scale: f64, other: &Self) -> Result<Self> {
        VectorSpectralField::axpy(self, scale, other)
    }

    fn strip_norm(&self, s: f64) -> f64 {
        self.components().iter().map(|c| c.strip_norm(s)).fold(0.0, f64::max)
    }

    fn l1_exp(&self, s: f64) -> f64 {
        self.components().iter().map(|c| c.l1_exp(s)).sum()
    }

    fn is_zero(&self) -> bool {
        self.components().iter().all(SpectralField::is_zero)
    }

    fn max_coeff_diff(&self, other: &Self) -> Result<f64> {
        VectorSpectralField::max_coeff_diff(self, other)
    }
}

/// Strictly increasing time nodes starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    nodes: Vec<f64>,
    kappa: Option<f64>,
}

impl TimeGrid {
    /// Graded nodes `t_i = T (i/N_t)^κ`, `i = 0..=N_t`.
    pub fn graded(t_end: f64, steps: usize, kappa: f64) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("T_end must be > 0, got {t_end}")));
        }
        if steps < 8 {
            return Err(Error::InvalidParameter(format!("need at least 8 steps, got {steps}")));
        }
        if !(kappa >= 1.0) {
            return Err(Error::InvalidParameter(format!("grading exponent must be >= 1, got {kappa}")));
        }
        let nodes = (0..=steps)
            .map(|i| if i == steps { t_end } else { t_end * (i as f64 / steps as f64).powf(kappa) })
            .collect();
        Ok(Self { nodes, kappa: Some(kappa) })
    }

    /// Arbitrary node set; must start at 0 and increase strictly.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes[0] != 0.0 {
            return Err(Error::InvalidParameter("time grid must start at 0 and have a second node".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) || !nodes.iter().all(|t| t.is_finite()) {
            return Err(Error::InvalidParameter("time nodes must be finite and strictly increasing".into()));
        }
        Ok(Self { nodes, kappa: None })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn t_end(&self) -> f64 {
        *self.nodes.last().expect("non-empty grid")
    }

    pub fn kappa(&self) -> Option<f64> {
        self.kappa
    }

    pub fn step(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    /// Index of the node equal to `t` (up to a relative `1e-14`).
    pub fn node_index(&self, t: f64) -> Result<usize> {
        let tol = 1e-14 * self.t_end();
        self.nodes
            .iter()
            .position(|&n| (n - t).abs() <= tol)
            .ok_or(Error::NotANode(t))
    }
}

/// Outcome of a Picard run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Converged,
    NotConverged,
    /// The iteration produced non-finite values; no conclusion about existence.
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub problem: String,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub status: SolveStatus,
    /// Iterations whose iterate left the ball of radius `R`.
    pub ball_exits: Vec<usize>,
}

impl TrajectoryMeta {
    fn fresh(problem: impl Into<String>) -> Self {
        Self {
            problem: problem.into(),
            iterations: 0,
            residual_history: Vec::new(),
            status: SolveStatus::NotConverged,
            ball_exits: Vec::new(),
        }
    }
}

/// One field per grid node, all on one lattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<S> {
    grid: TimeGrid,
    fields: Vec<S>,
    meta: TrajectoryMeta,
}

impl<S: ModalState> Trajectory<S> {
    pub fn new(grid: TimeGrid, fields: Vec<S>) -> Result<Self> {
        if fields.len() != grid.nodes().len() {
            return Err(Error::InvalidParameter(format!(
                "{} fields for {} nodes",
                fields.len(),
                grid.nodes().len()
            )));
        }
        let lattice = *fields[0].lattice();
        if fields.iter().any(|f| *f.lattice() != lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { grid, fields, meta: TrajectoryMeta::fresh("custom") })
    }

    /// The zero trajectory with the shape of `template`.
    pub fn zeros(grid: TimeGrid, template: &S) -> Self {
        let zero = template.zeros_like();
        let fields = vec![zero; grid.nodes().len()];
        Self { grid, fields, meta: TrajectoryMeta::fresh("zero") }
    }

    /// Samples `u(t)` at every node.
    pub fn from_fn(grid: TimeGrid, u: impl Fn(f64) -> S) -> Result<Self> {
        let fields = grid.nodes().iter().map(|&t| u(t)).collect();
        Self::new(grid, fields)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn fields(&self) -> &[S] {
        &self.fields
    }

    pub fn field_at(&self, t: f64) -> Result<&S> {
        Ok(&self.fields[self.grid.node_index(t)?])
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub fn with_problem(mut self, problem: impl Into<String>) -> Self {
        self.meta.problem = problem.into();
        self
    }

    pub fn lattice(&self) -> &Lattice {
        self.fields[0].lattice()
    }

    /// Node-wise difference `self - other` on a shared grid.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.grid.nodes() != other.grid.nodes() {
            return Err(Error::InvalidParameter("trajectories live on different grids".into()));
        }
        let fields = self
            .fields
            .iter()
            .zip(&other.fields)
            .map(|(a, b)| a.axpy(-1.0, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.grid.clone(), fields)
    }

    /// `max_i ‖u_i‖_{c t_i^{1/γ}}`, the pointwise residual norm.
    pub fn parabolic_sup(&self, c: f64, gamma: f64, norm: ResidualNorm) -> f64 {
        self.fields
            .iter()
            .zip(self.grid.nodes())
            .map(|(u, &t)| {
                norm.eval(u, c * t.powf(1.0 / gamma))
            })
            .fold(0.0, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
    }
}

/// Right-hand side `f(t, u)` with the blow-up exponents it declares in
/// `‖f(t,u)‖_s <= C t^{-β} (s'-s)^{-α}`.
pub trait Nonlinearity<S> {
    fn eval(&self, t: f64, u: &S) -> Result<S>;
    fn alpha(&self) -> f64;
    fn beta(&self) -> f64;
    fn description(&self) -> String;
}

/// Closure-backed [`Nonlinearity`].
pub struct FnNonlinearity<F> {
    f: F,
    alpha: f64,
    beta: f64,
    description: String,
}

impl<F> FnNonlinearity<F> {
    pub fn new(f: F, alpha: f64, beta: f64, description: impl Into<String>) -> Self {
        Self { f, alpha, beta, description: description.into() }
    }
}

impl<S, F: Fn(f64, &S) -> Result<S>> Nonlinearity<S> for FnNonlinearity<F> {
    fn eval(&self, t: f64, u: &S) -> Result<S> {
        (self.f)(t, u)
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn beta(&self) -> f64 {
        self.beta
    }

    fn description(&self) -> String {
        self.description.clone()
    }
}

/// One exponential-Euler step: `e^{hΔ}u + h φ₁(hΔ) f`.
pub fn etd_step<S: ModalState>(u: &S, f_val: &S, h: f64) -> Result<S> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be > 0, got {h}")));
    }
    if u.lattice() != f_val.lattice() {
        return Err(Error::LatticeMismatch);
    }
    let forced = f_val.apply_real_multiplier(|k| h * phi1(h * norm_sq(k)));
    heat_apply(u, h)?.axpy(1.0, &forced)
}

/// Per-cell forcing `f(ξ_i, (u_i + u_{i+1})/2)` at `ξ_i = (t_i + t_{i+1})/2`.
pub fn cell_forcing<S: ModalState, N: Nonlinearity<S> + ?Sized>(traj: &Trajectory<S>, f: &N, cells: usize) -> Result<Vec<S>> {
    let nodes = traj.grid.nodes();
    (0..cells)
        .map(|i| {
            let xi = 0.5 * (nodes[i] + nodes[i + 1]);
            let state = traj.fields[i].axpy(1.0, &traj.fields[i + 1])?.scaled(0.5);
            let value = f.eval(xi, &state)?;
            if value.lattice() != traj.lattice() {
                return Err(Error::LatticeMismatch);
            }
            Ok(value)
        })
        .collect()
}

/// Direct-sum quadrature of the Duhamel integral at node `t`:
/// `Σ_i h_i φ₁(h_iΔ) e^{(t - t_{i+1})Δ} g_i` over the cells below `t`.
pub fn duhamel_eval<S: ModalState, N: Nonlinearity<S> + ?Sized>(traj: &Trajectory<S>, f: &N, t: f64) -> Result<S> {
    let target = traj.grid.node_index(t)?;
    let nodes = traj.grid.nodes();
    let t = nodes[target];
    let forcing = cell_forcing(traj, f, target)?;
    let mut acc = traj.fields[0].zeros_like();
    for (i, g) in forcing.iter().enumerate() {
        let h = nodes[i + 1] - nodes[i];
        let lag = t - nodes[i + 1];
        let term = g.apply_real_multiplier(|k| {
            let k2 = norm_sq(k);
            h * phi1(h * k2) * (-lag * k2).exp()
        });
        acc = acc.axpy(1.0, &term)?;
    }
    Ok(acc)
}

/// `F(u)` at every node via the recursion `D_{i+1} = etd_step(D_i, g_i, h_i)`,
/// which matches [`duhamel_eval`] node by node.
pub fn duhamel_trajectory<S: ModalState, N: Nonlinearity<S> + ?Sized>(traj: &Trajectory<S>, f: &N) -> Result<Trajectory<S>> {
    let steps = traj.grid.steps();
    let forcing = cell_forcing(traj, f, steps)?;
    let mut fields = Vec::with_capacity(steps + 1);
    fields.push(traj.fields[0].zeros_like());
    for (i, g) in forcing.iter().enumerate() {
        let next = etd_step(&fields[i], g, traj.grid.step(i))?;
        fields.push(next);
    }
    let mut out = Trajectory::new(traj.grid.clone(), fields)?;
    out.meta.problem = traj.meta.problem.clone();
    Ok(out)
}

/// Norm used for Picard residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidualNorm {
    /// The sampled strip norm.
    Strip,
    /// The majorant `Σ|c_k| e^{s‖k‖₁}`; cheaper in three dimensions and an
    /// upper bound of the strip norm.
    L1Exp,
}

impl ResidualNorm {
    pub fn eval<S: ModalState>(self, u: &S, s: f64) -> f64 {
        match self {
            ResidualNorm::Strip => u.strip_norm(s),
            ResidualNorm::L1Exp => u.l1_exp(s),
        }
    }
}

/// Controls for [`picard_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PicardOptions {
    /// Radius `R` of the ball the iterates should stay in.
    pub r_ball: f64,
    pub max_iter: usize,
    pub tol: f64,
    /// Parabolic exponent for the residual strip widths `c t_i^{1/γ}`.
    pub gamma: f64,
    /// The constant `c` in those widths.
    pub residual_c: f64,
    pub residual_norm: ResidualNorm,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            r_ball: f64::INFINITY,
            max_iter: 50,
            tol: 1e-10,
            gamma: 2.0,
            residual_c: 0.5,
            residual_norm: ResidualNorm::Strip,
        }
    }
}

/// Picard iteration `u^{m+1} = F(u^m)` from `u^0 ≡ 0`.
///
/// The residual after each sweep is `max_i ‖u^{m+1}_i - u^m_i‖_{c t_i^{1/γ}}`.
/// Non-convergence and divergence are reported in the trajectory metadata
/// and are not errors; errors raised by `f` other than overflow propagate.
pub fn picard_solve<S: ModalState, N: Nonlinearity<S> + ?Sized>(
    f: &N,
    template: &S,
    grid: TimeGrid,
    options: &PicardOptions,
) -> Result<Trajectory<S>> {
    if options.max_iter == 0 || !(options.tol > 0.0) {
        return Err(Error::InvalidParameter("need max_iter >= 1 and tol > 0".into()));
    }
    if !(options.gamma > 1.0 && options.residual_c > 0.0) {
        return Err(Error::InvalidParameter("need gamma > 1 and residual constant > 0".into()));
    }
    let mut current = Trajectory::zeros(grid, template).with_problem(f.description());
    let mut meta = TrajectoryMeta::fresh(f.description());
    for iteration in 1..=options.max_iter {
        let next = match duhamel_trajectory(&current, f) {
            Ok(next) => next,
            Err(Error::Overflow(_)) => {
                meta.status = SolveStatus::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        let residual = next.sub(&current)?.parabolic_sup(options.residual_c, options.gamma, options.residual_norm);
        meta.iterations = iteration;
        meta.residual_history.push(residual);
        if !residual.is_finite() {
            meta.status = SolveStatus::Diverged;
            break;
        }
        if next.parabolic_sup(options.residual_c, options.gamma, options.residual_norm) > options.r_ball {
            meta.ball_exits.push(iteration);
        }
        current = next;
        if residual < options.tol {
            meta.status = SolveStatus::Converged;
            break;
        }
    }
    current.meta = meta;
    Ok(current)
}

/// One entry `‖F(u) - u‖_{τ,μ}` of a residual table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeminormEntry {
    pub tau: f64,
    pub mu: f64,
    pub value: f64,
}

/// `‖F(u) - u‖_{τ,μ}` for every `(τ, μ)` pair. With [`ResidualNorm::L1Exp`]
/// the strip norm inside the seminorm is replaced by its majorant.
pub fn residual_report<S: ModalState, N: Nonlinearity<S> + ?Sized>(
    traj: &Trajectory<S>,
    f: &N,
    taus: &[f64],
    mus: &[f64],
    gamma: f64,
    norm: ResidualNorm,
) -> Result<Vec<SeminormEntry>> {
    let defect = duhamel_trajectory(traj, f)?.sub(traj)?;
    let mut out = Vec::with_capacity(taus.len() * mus.len());
    for &tau in taus {
        for &mu in mus {
            let params = TrajectorySeminormParams::new(tau, mu, gamma)?;
            let value = match norm {
                ResidualNorm::Strip => trajectory_seminorm(&defect, &params)?,
                ResidualNorm::L1Exp => defect
                    .fields()
                    .iter()
                    .zip(defect.grid().nodes())
                    .filter(|(_, &t)| t >= tau)
                    .map(|(u, _)| u.l1_exp(params.strip_width()))
                    .fold(0.0, f64::max),
            };
            out.push(SeminormEntry { tau, mu, value });
        }
    }
    Ok(out)
}

/// Default `(τ, μ)` table: `τ` at the nodes closest to `T/100`, `T/10`,
/// `T/2`, and `μ ∈ {0.1, 0.25, 0.5}`.
pub fn default_seminorm_grid(grid: &TimeGrid) -> (Vec<f64>, Vec<f64>) {
    let nodes = grid.nodes();
    let mut taus: Vec<f64> = [0.01, 0.1, 0.5]
        .iter()
        .map(|frac| {
            let target = frac * grid.t_end();
            *nodes[1..]
                .iter()
                .min_by(|a, b| (*a - target).abs().total_cmp(&(*b - target).abs()))
                .expect("grid has interior nodes")
        })
        .collect();
    taus.dedup();
    (taus, vec![0.1, 0.25, 0.5])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn lat() -> Lattice {
        Lattice::new(1, 16).unwrap()
    }

    fn e1() -> SpectralField {
        SpectralField::from_modes(lat(), &[([1, 0, 0], Complex64::new(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn graded_grid_shape() {
        let g = TimeGrid::graded(0.5, 8, 2.0).unwrap();
        assert_eq!(g.nodes().len(), 9);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.t_end(), 0.5);
        assert!((g.nodes()[4] - 0.125).abs() < 1e-16);
        assert!(TimeGrid::graded(1.0, 7, 2.0).is_err());
        assert!(TimeGrid::graded(1.0, 8, 0.5).is_err());
        assert!(TimeGrid::from_nodes(vec![0.0, 0.2, 0.2]).is_err());
        assert!(matches!(g.node_index(0.3), Err(Error::NotANode(_))));
    }

    #[test]
    fn etd_examples() {
        let zero = SpectralField::zeros(lat(), true);
        let h = 0.1;
        let step = etd_step(&e1(), &zero, h).unwrap();
        assert_eq!(step, heat_apply(&e1(), h).unwrap());

        let c0 = SpectralField::constant(lat(), 3.0);
        let step = etd_step(&zero, &c0, 0.37).unwrap();
        assert!((step.coeff(&[0]).re - 0.37 * 3.0).abs() < 1e-16);

        let step = etd_step(&zero, &e1(), h).unwrap();
        assert!((step.coeff(&[1]).re - (1.0 - (-h).exp())).abs() < 1e-16);
        assert!(etd_step(&zero, &SpectralField::zeros(Lattice::new(1, 8).unwrap(), true), h).is_err());
    }

    #[test]
    fn direct_sum_matches_recursion() {
        let grid = TimeGrid::graded(1.0, 16, 2.0).unwrap();
        let traj = Trajectory::from_fn(grid, |t| e1().scaled(t.sin())).unwrap();
        let f = FnNonlinearity::new(
            |t: f64, u: &SpectralField| Ok(u.apply_real_multiplier(|k| (1.0 + t) / (1.0 + norm_sq(k)))),
            0.0,
            0.0,
            "linear",
        );
        let rec = duhamel_trajectory(&traj, &f).unwrap();
        for (i, &t) in traj.grid().nodes().iter().enumerate() {
            let direct = duhamel_eval(&traj, &f, t).unwrap();
            assert!(direct.max_coeff_diff(&rec.fields()[i]).unwrap() < 1e-14);
        }
    }

    #[test]
    fn picard_trivial_cases() {
        let grid = TimeGrid::graded(1.0, 8, 1.0).unwrap();
        let zero = SpectralField::zeros(lat(), true);
        let f0 = FnNonlinearity::new(|_: f64, u: &SpectralField| Ok(u.zeros_like()), 0.0, 0.0, "zero");
        let traj = picard_solve(&f0, &zero, grid.clone(), &PicardOptions::default()).unwrap();
        assert_eq!(traj.meta().iterations, 1);
        assert_eq!(traj.meta().status, SolveStatus::Converged);
        assert!(traj.fields().iter().all(|u| u.is_zero()));

        let c0 = SpectralField::constant(lat(), 2.0);
        let fc = FnNonlinearity::new(move |_: f64, _: &SpectralField| Ok(c0.clone()), 0.0, 0.0, "constant");
        let traj = picard_solve(&fc, &zero, grid, &PicardOptions::default()).unwrap();
        assert_eq!(traj.meta().iterations, 2);
        for (u, &t) in traj.fields().iter().zip(traj.grid().nodes()) {
            assert!((u.coeff(&[0]).re - 2.0 * t).abs() <= 1e-15 * (1.0 + t));
        }
        let (taus, mus) = default_seminorm_grid(traj.grid());
        let report = residual_report(&traj, &fc, &taus, &mus, 2.0, ResidualNorm::Strip).unwrap();
        assert!(report.iter().all(|e| e.value == 0.0));
    }

    #[test]
    fn picard_reports_non_convergence_and_ball_exit() {
        let grid = TimeGrid::graded(1.0, 8, 1.0).unwrap();
        let zero = SpectralField::zeros(lat(), true);
        let one = SpectralField::constant(lat(), 1.0);
        let f = FnNonlinearity::new(move |_: f64, u: &SpectralField| u.scaled(5.0).axpy(1.0, &one), 0.0, 0.0, "growth");
        let opts = PicardOptions { r_ball: 1.0, max_iter: 3, ..PicardOptions::default() };
        let traj = picard_solve(&f, &zero, grid, &opts).unwrap();
        assert_eq!(traj.meta().status, SolveStatus::NotConverged);
        assert_eq!(traj.meta().residual_history.len(), 3);
        assert!(!traj.meta().ball_exits.is_empty());
    }

    #[test]
    fn invalid_options() {
        let grid = TimeGrid::graded(1.0, 8, 1.0).unwrap();
        let zero = SpectralField::zeros(lat(), true);
        let f0 = FnNonlinearity::new(|_: f64, u: &SpectralField| Ok(u.zeros_like()), 0.0, 0.0, "zero");
        let opts = PicardOptions { max_iter: 0, ..PicardOptions::default() };
        assert!(picard_solve(&f0, &zero, grid, &opts).is_err());
    }
}
