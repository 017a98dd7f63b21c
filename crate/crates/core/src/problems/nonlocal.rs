//! The nonlocal equation
//!
//! ```text
//! u_t = Δu + ‖(-Δ)^n u‖^λ_{L²},   u(0) = û = Σ_{|k|>=2} e^{ikx} / (|k|^{1/2} log|k|)
//! ```
//!
//! on the circle. Writing `u = e^{tΔ}û + v` gives `v(0) = 0` and the forcing
//! `f(t, v) = ‖(-Δ)^n (e^{tΔ}û + v)‖^λ`, a constant in space. Only the zero
//! mode of `v` is ever driven, and `(-Δ)^n` annihilates it, so the solution
//! separates: nonzero modes follow the heat flow and the zero mode is
//!
//! ```text
//! u_0(t) = ∫₀ᵗ ( Σ_{2<=|k|<=K} |k|^{4n-1} e^{-2ξk²} / log²|k| )^{λ/2} dξ.
//! ```
//!
//! Near `ξ = 0` the integrand behaves like `ξ^{-nλ}` (up to logs) as
//! `K → ∞`, so the problem is well posed for `nλ < 1`. At `n = λ = 1` the
//! integral diverges like `log|log ε|` and no solution exists.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{Lattice, SpectralField};
use crate::mild_solver::{Nonlinearity, Trajectory};
use crate::parabolicity::ExponentData;
use crate::quadrature::{integrate, integrate_singular};
use crate::semigroup::heat_apply;
use crate::stats::{linear_fit, LinearFit};

/// Upper limit of the divergence demo integrals.
pub const DEMO_UPPER: f64 = 0.3;

/// Heat factors `e^{-2ξk²}` below `e^{-40}` are treated as negligible.
const SUPPORT_CUTOFF: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonlocalParams {
    pub n: u32,
    pub lambda: f64,
    /// Spectral truncation of the initial data.
    pub k: usize,
}

impl NonlocalParams {
    pub fn new(n: u32, lambda: f64, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be a positive integer".into()));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
        }
        if k < 2 {
            return Err(Error::InvalidParameter(format!("truncation K must be >= 2, got {k}")));
        }
        Ok(Self { n, lambda, k })
    }

    /// `χ = nλ`.
    pub fn chi(&self) -> f64 {
        self.n as f64 * self.lambda
    }

    /// Exponents `φ = 0`, `α = 2nλ`, `β = 0`, `γ = 2`: the forcing is a
    /// `λ`-th power of `2n` derivatives, each costing `(s'-s)^{-1}`.
    pub fn exponents(&self) -> Result<ExponentData> {
        ExponentData::exponents(0.0, 2.0 * self.chi(), 0.0, 2.0)
    }

    /// Smallest power-of-two lattice holding modes `|k| <= K` (`N >= 2K+2`).
    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(1, (2 * self.k + 2).next_power_of_two())
    }

    fn weight(&self, k: f64) -> f64 {
        k.powi(4 * self.n as i32 - 1) / k.ln().powi(2)
    }
}

/// Coefficient `1/(|k|^{1/2} log|k|)` of the initial data.
pub fn initial_coefficient(k: i64) -> f64 {
    let k = k.unsigned_abs() as f64;
    1.0 / (k.sqrt() * k.ln())
}

/// The initial data truncated to `2 <= |k| <= K` on `lattice`.
pub fn nonlocal_initial(lattice: Lattice, k_max: usize) -> Result<SpectralField> {
    if lattice.dim() != 1 {
        return Err(Error::InvalidParameter("the nonlocal problem is one-dimensional".into()));
    }
    if k_max < 2 || 2 * k_max + 2 > lattice.modes_per_dim() {
        return Err(Error::InvalidParameter(format!(
            "truncation K = {k_max} needs N >= 2K+2, lattice has N = {}",
            lattice.modes_per_dim()
        )));
    }
    let k_max = k_max as i64;
    Ok(SpectralField::from_fn(lattice, true, |k| {
        let a = k[0].abs();
        if (2..=k_max).contains(&a) {
            Complex64::new(initial_coefficient(a), 0.0)
        } else {
            Complex64::default()
        }
    }))
}

/// `f(t, v) = ‖(-Δ)^n (e^{tΔ}û + v)‖^λ` as a constant field, with
/// `‖w‖² = Σ|c_k|²`.
pub fn nonlocal_rhs(t: f64, v: &SpectralField, params: &NonlocalParams, u_hat: &SpectralField) -> Result<SpectralField> {
    let w = heat_apply(u_hat, t)?.add(v)?;
    let power = 4 * params.n as i32;
    let norm_sq: f64 = w.modes().map(|(k, c)| (k[0] as f64).powi(power) * c.norm_sqr()).sum();
    Ok(SpectralField::constant(*v.lattice(), norm_sq.powf(0.5 * params.lambda)))
}

/// The forcing bound to its initial data, as a solver nonlinearity.
#[derive(Debug, Clone)]
pub struct NonlocalProblem {
    pub params: NonlocalParams,
    pub u_hat: SpectralField,
}

impl NonlocalProblem {
    pub fn new(params: NonlocalParams) -> Result<Self> {
        let u_hat = nonlocal_initial(params.lattice()?, params.k)?;
        Ok(Self { params, u_hat })
    }

    /// Full solution `e^{tΔ}û + v`.
    pub fn full_solution(&self, t: f64, v: &SpectralField) -> Result<SpectralField> {
        heat_apply(&self.u_hat, t)?.add(v)
    }
}

impl Nonlinearity<SpectralField> for NonlocalProblem {
    fn eval(&self, t: f64, u: &SpectralField) -> Result<SpectralField> {
        nonlocal_rhs(t, u, &self.params, &self.u_hat)
    }

    fn alpha(&self) -> f64 {
        2.0 * self.params.chi()
    }

    fn beta(&self) -> f64 {
        0.0
    }

    fn description(&self) -> String {
        format!("nonlocal n={} lambda={} K={}", self.params.n, self.params.lambda, self.params.k)
    }
}

/// `(Σ_{2<=|k|<=K} |k|^{4n-1} e^{-2ξk²}/log²|k|)^{λ/2}`, both signs of `k`.
pub fn mode_zero_integrand(xi: f64, params: &NonlocalParams) -> f64 {
    let support = if xi > 0.0 { (SUPPORT_CUTOFF / (2.0 * xi)).sqrt().ceil() as usize + 1 } else { params.k };
    let upper = params.k.min(support);
    let sum: f64 = (2..=upper)
        .map(|k| {
            let kf = k as f64;
            2.0 * params.weight(kf) * (-2.0 * xi * kf * kf).exp()
        })
        .sum();
    sum.powf(0.5 * params.lambda)
}

fn require_finite(params: &NonlocalParams) -> Result<()> {
    if params.chi() >= 1.0 {
        return Err(Error::Divergent(format!("n*lambda = {} >= 1: the zero-mode integral diverges", params.chi())));
    }
    Ok(())
}

/// Zero mode of the solution at each of the increasing `times`, integrated
/// cell by cell; the first cell uses the graded substitution at `ξ = 0`.
pub fn nonlocal_mode_zero(times: &[f64], params: &NonlocalParams, quad_tol: f64) -> Result<Vec<f64>> {
    require_finite(params)?;
    if !(quad_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("quadrature tolerance must be > 0, got {quad_tol}")));
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("times must be >= 0 and nondecreasing".into()));
    }
    let f = |xi: f64, _: f64, _: f64| mode_zero_integrand(xi, params);
    let mut out = Vec::with_capacity(times.len());
    let (mut acc, mut last) = (0.0, 0.0);
    for &t in times {
        if t > last {
            let piece = if last == 0.0 {
                integrate_singular(|_, d, _| mode_zero_integrand(d, params), 0.0, t, params.chi(), 0.0, quad_tol)?
            } else {
                integrate(f, last, t, quad_tol, 0.0)?
            };
            acc += piece.value;
            last = t;
        }
        out.push(acc);
    }
    Ok(out)
}

/// The separated solution at time `t`: heat flow of `û` on `k ≠ 0` plus the
/// zero mode.
pub fn nonlocal_closed_form(t: f64, params: &NonlocalParams, quad_tol: f64) -> Result<SpectralField> {
    let lattice = params.lattice()?;
    let mode0 = nonlocal_mode_zero(&[t], params, quad_tol)?[0];
    let mut u = heat_apply(&nonlocal_initial(lattice, params.k)?, t)?;
    u.set_coeff(&[0], Complex64::new(mode0, 0.0))?;
    Ok(u)
}

/// Default mesh grading `κ = max(2, 1.5/(1-χ))`.
pub fn default_kappa(chi: f64) -> f64 {
    if chi < 1.0 {
        (1.5 / (1.0 - chi)).max(2.0)
    } else {
        2.0
    }
}

/// Solver output against the separated solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormComparison {
    /// Largest relative error over modes `k ≠ 0` and positive nodes.
    pub max_rel_nonzero: f64,
    /// Largest relative error of the zero mode over positive nodes.
    pub max_rel_mode0: f64,
    pub max_abs_mode0: f64,
    /// Largest `|v_k|`, `k ≠ 0`, over all nodes; zero when the structure
    /// is preserved.
    pub max_v_nonzero: f64,
    /// `(t, solver mode 0, closed-form mode 0)` per node.
    pub mode0: Vec<(f64, f64, f64)>,
}

/// Compares `u = e^{tΔ}û + v` with the closed form at every node.
pub fn compare_with_closed_form(
    problem: &NonlocalProblem,
    traj: &Trajectory<SpectralField>,
    quad_tol: f64,
) -> Result<ClosedFormComparison> {
    let times = traj.grid().nodes();
    let exact0 = nonlocal_mode_zero(times, &problem.params, quad_tol)?;
    let mut out = ClosedFormComparison {
        max_rel_nonzero: 0.0,
        max_rel_mode0: 0.0,
        max_abs_mode0: 0.0,
        max_v_nonzero: 0.0,
        mode0: Vec::with_capacity(times.len()),
    };
    for ((&t, v), &m0) in times.iter().zip(traj.fields()).zip(&exact0) {
        let flow = heat_apply(&problem.u_hat, t)?;
        let u = flow.add(v)?;
        for ((k, got), want) in u.modes().zip(flow.coeffs()) {
            if k[0] == 0 {
                continue;
            }
            out.max_v_nonzero = out.max_v_nonzero.max(v.coeff(&k).norm());
            if want.norm() > 0.0 {
                out.max_rel_nonzero = out.max_rel_nonzero.max((got - want).norm() / want.norm());
            }
        }
        let got0 = u.coeff(&[0]).re;
        let err = (got0 - m0).abs();
        out.max_abs_mode0 = out.max_abs_mode0.max(err);
        if t > 0.0 {
            out.max_rel_mode0 = out.max_rel_mode0.max(err / m0.abs());
        }
        out.mode0.push((t, got0, m0));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceRow {
    pub eps: f64,
    /// `∫_ε^{0.3}` of the zero-mode integrand at `n = λ = 1`.
    pub integral: f64,
    /// `log|log ε| - log|log 0.3|`.
    pub minorant: f64,
    /// Heat factors at `ξ = ε` still matter beyond `|k| = K`.
    pub truncation_limited: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceDemo {
    pub k: usize,
    pub rows: Vec<DivergenceRow>,
    /// Regression of the integrals on `log(-log ε)` over rows that are not
    /// truncation-limited.
    pub fit: LinearFit,
}

/// Partial integrals `∫_ε^{0.3}` of the `n = λ = 1` zero-mode integrand for
/// each `ε`, and their regression against `log(-log ε)`.
///
/// Rows with `ε < 20/K²` are flagged: there the modes with `2εk² <= 40` reach
/// past the truncation and the finite sum saturates.
pub fn divergence_demo(eps_grid: &[f64], k: usize) -> Result<DivergenceDemo> {
    if eps_grid.iter().any(|e| !(*e > 0.0 && *e < DEMO_UPPER)) {
        return Err(Error::InvalidParameter(format!("eps values must lie in (0, {DEMO_UPPER})")));
    }
    let params = NonlocalParams::new(1, 1.0, k)?;
    let mut order: Vec<usize> = (0..eps_grid.len()).collect();
    order.sort_by(|&a, &b| eps_grid[b].total_cmp(&eps_grid[a]));
    // integrate in log ξ: dξ = ξ d(log ξ)
    let g = |s: f64, _: f64, _: f64| {
        let xi = s.exp();
        xi * mode_zero_integrand(xi, &params)
    };
    let mut values = vec![0.0; eps_grid.len()];
    let (mut acc, mut upper) = (0.0, DEMO_UPPER.ln());
    for idx in order {
        let lower = eps_grid[idx].ln();
        if lower < upper {
            acc += integrate(g, lower, upper, 1e-12, 0.0)?.value;
            upper = lower;
        }
        values[idx] = acc;
    }
    let threshold = 0.5 * SUPPORT_CUTOFF / (k * k) as f64;
    let rows: Vec<DivergenceRow> = eps_grid
        .iter()
        .zip(&values)
        .map(|(&eps, &integral)| DivergenceRow {
            eps,
            integral,
            minorant: (-eps.ln()).ln() - (-DEMO_UPPER.ln()).ln(),
            truncation_limited: eps < threshold,
        })
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| !r.truncation_limited)
        .map(|r| ((-r.eps.ln()).ln(), r.integral))
        .unzip();
    let fit = linear_fit(&x, &y)?;
    Ok(DivergenceDemo { k, rows, fit })
}
