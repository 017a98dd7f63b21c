//! Exponent bookkeeping for parabolic problems: the index
//! `χ = φ + β + α/γ`, the constants
//!
//! ```text
//! J = ∫₀¹ (1-y)^{-φ} y^{-α/γ} dy,   I = ∫₀¹ (1-y)^{-φ} ψ(y)^{-α} dy,
//! ψ(y) = y^{1/γ} + (1-y)^{1/γ} - 1,
//! ```
//!
//! and the existence horizon
//! `T* = [R / (C²J/(μ-ε)^α + C²I/μ^α)]^{1/(1-χ)}`, the largest time for
//! which the a-priori bound on the fixed-point map stays inside the ball of
//! radius `R`.
//!
//! A time singularity `t^{-β}` enters through `α_eff = α + βγ`, which
//! reproduces `χ` and reduces to the plain formulas when `β = 0`.

use num_rational::Ratio;
use serde::Serialize;
use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{Error, Result};
use crate::mild_solver::{ModalState, ResidualNorm, Trajectory};
use crate::quadrature::integrate_singular;
use crate::stats::{linear_fit, LinearFit};

/// Relative tolerance of the `J` and `I` quadratures.
pub const QUAD_TOL: f64 = 1e-13;

pub const DEFAULT_MU: f64 = 0.9;
pub const DEFAULT_EPS: f64 = 0.1;

/// Constants of the abstract problem: `‖S^t u‖_{s+δ} <= C t^{-φ}‖u‖_s` for
/// `δ^γ < t`, and `‖f(t,u)‖_s <= C t^{-β} (s'-s)^{-α}` on the ball of
/// radius `R` up to time `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentData {
    pub c: f64,
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ExponentData {
    pub fn new(c: f64, t: f64, r: f64, phi: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(c > 0.0 && t > 0.0 && r > 0.0) {
            return Err(Error::InvalidParameter("C, T and R must be > 0".into()));
        }
        if !(phi >= 0.0 && alpha >= 0.0 && beta >= 0.0) {
            return Err(Error::InvalidParameter("phi, alpha and beta must be >= 0".into()));
        }
        if !(gamma > 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must be > 1, got {gamma}")));
        }
        Ok(Self { c, t, r, phi, alpha, beta, gamma })
    }

    /// Exponents only, with `C = T = R = 1`.
    pub fn exponents(phi: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, phi, alpha, beta, gamma)
    }

    pub fn alpha_eff(&self) -> f64 {
        self.alpha + self.beta * self.gamma
    }
}

/// `χ = φ + β + α/γ`.
pub fn chi(e: &ExponentData) -> f64 {
    e.phi + e.beta + e.alpha / e.gamma
}

/// `χ` in exact rational arithmetic.
pub fn chi_exact(phi: Ratio<i64>, alpha: Ratio<i64>, beta: Ratio<i64>, gamma: Ratio<i64>) -> Result<Ratio<i64>> {
    if gamma <= Ratio::from_integer(1) {
        return Err(Error::InvalidParameter(format!("gamma must be > 1, got {gamma}")));
    }
    Ok(phi + beta + alpha / gamma)
}

/// `J(φ, a) = ∫₀¹ (1-y)^{-φ} y^{-a} dy` by quadrature.
pub fn j_integral(phi: f64, a: f64) -> Result<f64> {
    check_exponent("phi", phi)?;
    check_exponent("a", a)?;
    Ok(integrate_singular(|_, y, ny| ny.powf(-phi) * y.powf(-a), 0.0, 1.0, a, phi, QUAD_TOL)?.value)
}

/// `Γ(1-φ)Γ(1-a)/Γ(2-φ-a)`, the Beta-function value of [`j_integral`].
pub fn j_beta_identity(phi: f64, a: f64) -> Result<f64> {
    check_exponent("phi", phi)?;
    check_exponent("a", a)?;
    Ok(gamma_fn(1.0 - phi) * gamma_fn(1.0 - a) / gamma_fn(2.0 - phi - a))
}

fn check_exponent(name: &str, p: f64) -> Result<()> {
    if !(p >= 0.0) {
        return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {p}")));
    }
    if p >= 1.0 {
        return Err(Error::Divergent(format!("{name} = {p} >= 1")));
    }
    Ok(())
}

/// `ψ(y) = y^{1/γ} + (1-y)^{1/γ} - 1`.
pub fn psi(y: f64, gamma: f64) -> f64 {
    psi_split(y, 1.0 - y, gamma)
}

/// `ψ` from both distances `y` and `1-y`, accurate at either endpoint.
fn psi_split(y: f64, ny: f64, gamma: f64) -> f64 {
    let near = y.min(ny);
    near.powf(1.0 / gamma) + ((-near).ln_1p() / gamma).exp_m1()
}

/// `I = ∫₀¹ (1-y)^{-φ} ψ(y)^{-α} dy` at the default tolerance.
pub fn i_integral(phi: f64, alpha: f64, gamma: f64) -> Result<f64> {
    i_integral_with_tol(phi, alpha, gamma, QUAD_TOL)
}

/// [`i_integral`] with an explicit relative quadrature tolerance. Finite iff
/// `α/γ < 1` (at `y = 0`) and `φ + α/γ < 1` (at `y = 1`).
pub fn i_integral_with_tol(phi: f64, alpha: f64, gamma: f64, rel_tol: f64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(Error::InvalidParameter(format!("gamma must be > 1, got {gamma}")));
    }
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    check_exponent("phi", phi)?;
    let a = alpha / gamma;
    if a >= 1.0 || phi + a >= 1.0 {
        return Err(Error::Divergent(format!("need alpha/gamma < 1 and phi + alpha/gamma < 1, got {a} and {}", phi + a)));
    }
    let r = integrate_singular(
        |_, y, ny| ny.powf(-phi) * psi_split(y, ny, gamma).powf(-alpha),
        0.0,
        1.0,
        a,
        phi + a,
        rel_tol,
    )?;
    Ok(r.value)
}

/// Quantitative summary of the parabolicity test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParabolicityReport {
    pub chi: f64,
    pub j: Option<f64>,
    pub i: Option<f64>,
    pub t_star: Option<f64>,
    pub mu: f64,
    pub eps: f64,
    pub parabolic: bool,
}

/// `T*` for the given `μ`, `ε`, capped at `e.t`.
pub fn time_horizon(e: &ExponentData, mu: f64, eps: f64) -> Result<f64> {
    let x = chi(e);
    if x >= 1.0 {
        return Err(Error::NotParabolic { chi: x });
    }
    if !(eps > 0.0 && eps < mu && mu < 1.0) {
        return Err(Error::Ordering(format!("need 0 < eps < mu < 1, got eps={eps}, mu={mu}")));
    }
    let alpha = e.alpha_eff();
    let j = j_integral(e.phi, alpha / e.gamma)?;
    let i = i_integral(e.phi, alpha, e.gamma)?;
    Ok(horizon_from_constants(e, j, i, mu, eps))
}

fn horizon_from_constants(e: &ExponentData, j: f64, i: f64, mu: f64, eps: f64) -> f64 {
    let alpha = e.alpha_eff();
    let c2 = e.c * e.c;
    let denom = c2 * j / (mu - eps).powf(alpha) + c2 * i / mu.powf(alpha);
    (e.r / denom).powf(1.0 / (1.0 - chi(e))).min(e.t)
}

/// Full report; `T*` and the constants are absent when `χ >= 1` or an
/// integral diverges.
pub fn parabolicity_report(e: &ExponentData, mu: f64, eps: f64) -> Result<ParabolicityReport> {
    if !(eps > 0.0 && eps < mu && mu < 1.0) {
        return Err(Error::Ordering(format!("need 0 < eps < mu < 1, got eps={eps}, mu={mu}")));
    }
    let x = chi(e);
    let alpha = e.alpha_eff();
    let j = j_integral(e.phi, alpha / e.gamma).ok();
    let i = i_integral(e.phi, alpha, e.gamma).ok();
    let parabolic = x < 1.0;
    let t_star = match (parabolic, j, i) {
        (true, Some(j), Some(i)) => Some(horizon_from_constants(e, j, i, mu, eps)),
        _ => None,
    };
    Ok(ParabolicityReport { chi: x, j, i, t_star, mu, eps, parabolic })
}

/// Golden-section search over `μ ∈ (ε, 1)` for the largest `T*`.
pub fn optimize_mu(e: &ExponentData, eps: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Ordering(format!("need 0 < eps < 1, got {eps}")));
    }
    let x = chi(e);
    if x >= 1.0 {
        return Err(Error::NotParabolic { chi: x });
    }
    let alpha = e.alpha_eff();
    let j = j_integral(e.phi, alpha / e.gamma)?;
    let i = i_integral(e.phi, alpha, e.gamma)?;
    let objective = |mu: f64| horizon_from_constants(e, j, i, mu, eps);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (eps + 1e-9, 1.0 - 1e-9);
    let mut m1 = hi - ratio * (hi - lo);
    let mut m2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (objective(m1), objective(m2));
    for _ in 0..200 {
        if hi - lo < 1e-10 {
            break;
        }
        if f1 < f2 {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + ratio * (hi - lo);
            f2 = objective(m2);
        } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - ratio * (hi - lo);
            f1 = objective(m1);
        }
    }
    let mu = 0.5 * (lo + hi);
    Ok((mu, objective(mu)))
}

/// Result of [`early_time_decay_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DecayFit {
    Slope(LinearFit),
    /// The norm vanishes on the whole window: decay faster than any power.
    Vanishing,
}

impl DecayFit {
    pub fn slope(&self) -> f64 {
        match self {
            DecayFit::Slope(fit) => fit.slope,
            DecayFit::Vanishing => f64::INFINITY,
        }
    }
}

/// Slope of `log ‖u(t)‖_{c t^{1/γ}}` against `log t` over the earliest
/// decade of positive nodes (at least the first four).
pub fn early_time_decay_fit<S: ModalState>(traj: &Trajectory<S>, c: f64, gamma: f64) -> Result<DecayFit> {
    early_time_decay_fit_with(traj, c, gamma, ResidualNorm::Strip)
}

/// [`early_time_decay_fit`] measured in the given norm.
pub fn early_time_decay_fit_with<S: ModalState>(
    traj: &Trajectory<S>,
    c: f64,
    gamma: f64,
    norm: ResidualNorm,
) -> Result<DecayFit> {
    if !(c > 0.0 && c < 1.0 && gamma > 1.0) {
        return Err(Error::InvalidParameter(format!("need c in (0,1) and gamma > 1, got c={c}, gamma={gamma}")));
    }
    let positive: Vec<(f64, &S)> = traj
        .grid()
        .nodes()
        .iter()
        .zip(traj.fields())
        .filter(|(&t, _)| t > 0.0)
        .map(|(&t, u)| (t, u))
        .collect();
    let Some(&(t_first, _)) = positive.first() else {
        return Err(Error::TooFewPoints { needed: 4, got: 0 });
    };
    let in_decade = positive.iter().take_while(|(t, _)| *t <= 10.0 * t_first).count();
    let window = in_decade.max(4);
    if positive.len() < window {
        return Err(Error::TooFewPoints { needed: 4, got: positive.len() });
    }
    let samples: Vec<(f64, f64)> = positive[..window]
        .iter()
        .map(|(t, u)| (*t, norm.eval(*u, c * t.powf(1.0 / gamma))))
        .collect();
    if samples.iter().all(|(_, n)| *n == 0.0) {
        return Ok(DecayFit::Vanishing);
    }
    if samples.iter().any(|(_, n)| !(*n > 0.0)) {
        return Err(Error::Degenerate("norm vanishes on part of the decay window".into()));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = samples.iter().map(|(t, n)| (t.ln(), n.ln())).unzip();
    Ok(DecayFit::Slope(linear_fit(&x, &y)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{Lattice, SpectralField};
    use crate::mild_solver::TimeGrid;
    use std::f64::consts::PI;

    #[test]
    fn chi_examples() {
        let e = ExponentData::exponents(0.5, 0.4, 0.0, 2.0).unwrap();
        assert!((chi(&e) - 0.7).abs() < 1e-15);
        assert_eq!(chi(&ExponentData::exponents(0.0, 0.0, 0.0, 2.0).unwrap()), 0.0);
        let exact = chi_exact(Ratio::new(1, 2), Ratio::new(2, 5), Ratio::from_integer(0), Ratio::from_integer(2)).unwrap();
        assert_eq!(exact, Ratio::new(7, 10));
        assert!(ExponentData::exponents(0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn j_examples() {
        assert!((j_integral(0.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((j_integral(0.5, 0.5).unwrap() - PI).abs() < 1e-11);
        assert!((j_integral(0.3, 0.4).unwrap() - j_beta_identity(0.3, 0.4).unwrap()).abs() < 1e-10);
        assert!(matches!(j_integral(1.0, 0.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(0.0, 2.0), 0.0);
        assert_eq!(psi(1.0, 2.0), 0.0);
        assert!((psi(0.5, 2.0) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((psi(0.5, 4.0) - (2f64.powf(0.75) - 1.0)).abs() < 1e-15);
        // near the endpoint ψ(y) ≈ y^{1/γ} - y/γ
        let y = 1e-12;
        assert!((psi(y, 2.0) - (1e-6 - 0.5e-12)).abs() < 1e-20);
    }

    #[test]
    fn i_examples() {
        assert!((i_integral(0.5, 0.0, 2.0).unwrap() - 2.0).abs() < 1e-11);
        assert!((i_integral(0.0, 0.0, 2.0).unwrap() - 1.0).abs() < 1e-14);
        let coarse = i_integral_with_tol(0.25, 0.5, 2.0, 1e-9).unwrap();
        let fine = i_integral_with_tol(0.25, 0.5, 2.0, 5e-10).unwrap();
        assert!((coarse - fine).abs() < 1e-8);
        assert!(i_integral(0.6, 1.0, 2.0).is_err());
    }

    #[test]
    fn horizon_examples() {
        let (mu, eps) = (DEFAULT_MU, DEFAULT_EPS);
        let e = ExponentData::new(1.0, 5.0, 1.0, 0.0, 0.0, 0.0, 2.0).unwrap();
        let unit = j_integral(0.0, 0.0).unwrap() + i_integral(0.0, 0.0, 2.0).unwrap();
        let e = ExponentData { r: unit, ..e };
        assert!((time_horizon(&e, mu, eps).unwrap() - 1.0).abs() < 1e-12);

        let e = ExponentData::new(1.0, 1e6, 1.0, 0.25, 0.5, 0.0, 2.0).unwrap();
        let t1 = time_horizon(&e, mu, eps).unwrap();
        let t2 = time_horizon(&ExponentData { r: 2.0, ..e }, mu, eps).unwrap();
        assert!(t1 > 0.0);
        assert!((t2 / t1 - 2f64.powf(1.0 / (1.0 - chi(&e)))).abs() < 1e-12);

        assert!(matches!(
            time_horizon(&ExponentData::exponents(1.0, 0.5, 0.0, 2.0).unwrap(), mu, eps),
            Err(Error::NotParabolic { .. })
        ));
        assert!(matches!(time_horizon(&e, 0.5, 0.6), Err(Error::Ordering(_))));
    }

    #[test]
    fn golden_section_prefers_large_mu() {
        let e = ExponentData::new(1.0, 1e6, 1.0, 0.25, 0.5, 0.0, 2.0).unwrap();
        let (mu, t) = optimize_mu(&e, 0.1).unwrap();
        assert!(mu > 0.99);
        assert!(t >= time_horizon(&e, 0.9, 0.1).unwrap());
    }

    #[test]
    fn decay_fit_examples() {
        let lat = Lattice::new(1, 8).unwrap();
        let grid = TimeGrid::graded(1.0, 16, 2.0).unwrap();
        let zero = Trajectory::zeros(grid.clone(), &SpectralField::zeros(lat, true));
        assert_eq!(early_time_decay_fit(&zero, 0.5, 2.0).unwrap(), DecayFit::Vanishing);
        let one = SpectralField::constant(lat, 1.0);
        let linear = Trajectory::from_fn(grid, |t| one.scale(t)).unwrap();
        let slope = early_time_decay_fit(&linear, 0.5, 2.0).unwrap().slope();
        assert!((slope - 1.0).abs() < 1e-12);
    }
}
