//! Incompressible Navier–Stokes on `T³` in the smoothed unknown
//! `u = e^{tΔ}û + (-Δ)^ρ v`:
//!
//! ```text
//! f^k(t, v) = A^k_l ∂_j (-Δ)^{-ρ} [ w^j w^l ],   w = e^{tΔ}û + (-Δ)^ρ v,
//! A^k_l = k_k k_l/|k|² - δ_kl,
//! ```
//!
//! together with the three exponent inequalities that make the problem
//! parabolic for initial data in `H^r`, `r > 1/2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{
    frac_symbol, leray_divergence_form, norm_sq, product_table, Lattice, PowerSign, SpectralField, VectorSpectralField,
};
use crate::mild_solver::{picard_solve, Nonlinearity, PicardOptions, TimeGrid, Trajectory};
use crate::semigroup::heat_apply;
use crate::stats::geomspace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NSParams {
    pub rho: f64,
    pub r: f64,
    pub a: f64,
    pub eps: f64,
}

impl NSParams {
    /// Accepts `ρ ∈ [0, 1/2)`; `ρ = 0` is the unsmoothed limit.
    pub fn new(rho: f64, r: f64, a: f64, eps: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&rho) {
            return Err(Error::InvalidParameter(format!("rho must lie in [0, 1/2), got {rho}")));
        }
        if !(eps > 0.0 && r.is_finite() && a.is_finite()) {
            return Err(Error::InvalidParameter("eps must be > 0 and r, a finite".into()));
        }
        Ok(Self { rho, r, a, eps })
    }
}

/// `f(t, v)` with dealiased products.
pub fn ns_rhs(t: f64, v: &VectorSpectralField, params: &NSParams, u_hat: &VectorSpectralField) -> Result<VectorSpectralField> {
    if !v.is_real() || !u_hat.is_real() {
        return Err(Error::NotReal);
    }
    if v.lattice() != u_hat.lattice() {
        return Err(Error::LatticeMismatch);
    }
    let rho = params.rho;
    let flow = u_hat.apply_real_multiplier(|k| (-t * norm_sq(k)).exp());
    let lifted = v.apply_real_multiplier(|k| frac_symbol(k, rho, PowerSign::Positive));
    let w = flow.add(&lifted)?;
    let table = product_table(w.components())?;
    Ok(leray_divergence_form(&table, |k| frac_symbol(k, rho, PowerSign::Negative)))
}

/// Taylor–Green vortex `(sin x cos y cos z, -cos x sin y cos z, 0)`.
pub fn taylor_green(lattice: Lattice) -> Result<VectorSpectralField> {
    if lattice.dim() != 3 {
        return Err(Error::InvalidParameter("Taylor-Green data is three-dimensional".into()));
    }
    let corner = |k: &[i64; 3]| k.iter().all(|c| c.abs() == 1);
    let sign = |c: i64| c.signum() as f64;
    let u1 = SpectralField::from_fn(lattice, true, |k| {
        if corner(k) {
            Complex64::new(0.0, -sign(k[0]) / 8.0)
        } else {
            Complex64::default()
        }
    });
    let u2 = SpectralField::from_fn(lattice, true, |k| {
        if corner(k) {
            Complex64::new(0.0, sign(k[1]) / 8.0)
        } else {
            Complex64::default()
        }
    });
    let u3 = SpectralField::zeros(lattice, true);
    VectorSpectralField::new(vec![u1, u2, u3])?.mark_divergence_free()
}

#[derive(Debug, Clone)]
pub struct NsProblem {
    pub params: NSParams,
    pub u_hat: VectorSpectralField,
    /// Whether `û` passed the divergence check; the problem still runs
    /// otherwise.
    pub u_hat_divergence_free: bool,
}

impl NsProblem {
    pub fn new(params: NSParams, u_hat: VectorSpectralField) -> Result<Self> {
        if !u_hat.is_real() {
            return Err(Error::NotReal);
        }
        let u_hat_divergence_free = u_hat.clone().mark_divergence_free().is_ok();
        Ok(Self { params, u_hat, u_hat_divergence_free })
    }

    /// Velocity `e^{tΔ}û + (-Δ)^ρ v`.
    pub fn velocity(&self, t: f64, v: &VectorSpectralField) -> Result<VectorSpectralField> {
        let rho = self.params.rho;
        heat_apply(&self.u_hat, t)?.add(&v.apply_real_multiplier(|k| frac_symbol(k, rho, PowerSign::Positive)))
    }
}

impl NsProblem {
    /// `∂_t u = Δu + (-Δ)^ρ f(t, v)` for the velocity of [`NsProblem::velocity`].
    pub fn velocity_rate(&self, t: f64, v: &VectorSpectralField) -> Result<VectorSpectralField> {
        let rho = self.params.rho;
        let u = self.velocity(t, v)?;
        let forcing = ns_rhs(t, v, &self.params, &self.u_hat)?;
        u.apply_real_multiplier(|k| -norm_sq(k))
            .add(&forcing.apply_real_multiplier(|k| frac_symbol(k, rho, PowerSign::Positive)))
    }
}

impl Nonlinearity<VectorSpectralField> for NsProblem {
    fn eval(&self, t: f64, u: &VectorSpectralField) -> Result<VectorSpectralField> {
        ns_rhs(t, u, &self.params, &self.u_hat)
    }

    fn alpha(&self) -> f64 {
        1.0 - 2.0 * self.params.rho
    }

    fn beta(&self) -> f64 {
        0.0
    }

    fn description(&self) -> String {
        format!("ns3d rho={}", self.params.rho)
    }
}

/// `Re ⟨u, f⟩` with `⟨u, w⟩ = Σ_k Σ_j conj(u^j_k) w^j_k`.
pub fn energy_transfer(u: &VectorSpectralField, f: &VectorSpectralField) -> f64 {
    u.components()
        .iter()
        .zip(f.components())
        .map(|(a, b)| a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x.conj() * y).re).sum::<f64>())
        .sum()
}

/// `‖∇u‖² = Σ_k |k|² |u_k|²`.
pub fn dissipation(u: &VectorSpectralField) -> f64 {
    u.components()
        .iter()
        .map(|c| c.modes().map(|(k, z)| norm_sq(&k) * z.norm_sqr()).sum::<f64>())
        .sum()
}

/// Copies the modes shared by both lattices into a field on `target`.
pub fn resample(u: &VectorSpectralField, target: Lattice) -> Result<VectorSpectralField> {
    if u.lattice().dim() != target.dim() {
        return Err(Error::LatticeMismatch);
    }
    let components = u
        .components()
        .iter()
        .map(|c| {
            let mut out = SpectralField::from_fn(target, c.is_real(), |k| {
                if c.lattice().index_of(k).is_some() && !c.lattice().is_unpaired(k) {
                    c.coeff(k)
                } else {
                    Complex64::default()
                }
            });
            out.enforce_hermitian();
            out
        })
        .collect();
    VectorSpectralField::new(components)
}

/// `‖a - b‖/‖b‖` in `L²` after resampling `a` onto the lattice of `b`.
pub fn relative_l2_difference(a: &VectorSpectralField, b: &VectorSpectralField) -> Result<f64> {
    let a = resample(a, *b.lattice())?;
    Ok((a.sub(b)?.energy() / b.energy()).sqrt())
}

/// Picard solve of the smoothed problem; `template` fixes the lattice.
pub fn solve_ns(problem: &NsProblem, grid: TimeGrid, options: &PicardOptions) -> Result<Trajectory<VectorSpectralField>> {
    let template = VectorSpectralField::zeros(*problem.u_hat.lattice(), true);
    picard_solve(problem, &template, grid, options)
}

/// Per-step energy balance with the endpoint-corrected trapezoid rule,
/// `(E_{i+1}-E_i)/h + (D_i+D_{i+1})/2 - h(D'_{i+1}-D'_i)/12`, where
/// `E = ½‖u‖²` and `D = ‖∇u‖²`, relative to `‖u_i‖²`. The correction makes
/// the rule exact to `O(h⁴)`, so what remains is the solver error.
pub fn energy_budget(problem: &NsProblem, traj: &Trajectory<VectorSpectralField>) -> Result<Vec<f64>> {
    let nodes = traj.grid().nodes();
    let states = nodes
        .iter()
        .zip(traj.fields())
        .map(|(&t, v)| {
            let u = problem.velocity(t, v)?;
            let rate = problem.velocity_rate(t, v)?;
            let d = dissipation(&u);
            let d_rate = 2.0 * energy_transfer(&u.apply_real_multiplier(|k| norm_sq(k)), &rate);
            Ok((u.energy(), d, d_rate))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(states
        .windows(2)
        .zip(nodes.windows(2))
        .map(|(s, t)| {
            let h = t[1] - t[0];
            let de = 0.5 * (s[1].0 - s[0].0) / h;
            let d = 0.5 * (s[0].1 + s[1].1) - h * (s[1].2 - s[0].2) / 12.0;
            (de + d).abs() / s[0].0
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NsCertificate {
    pub params: NSParams,
    /// `(ε+1+2ρ)/2`, `(1+ε-2ρ)/2 + a - r`, `ε + 1 + a - r`.
    pub lhs: [f64; 3],
    pub bounds: [f64; 3],
    pub pass: [bool; 3],
}

impl NsCertificate {
    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|&p| p)
    }

    /// Smallest slack `bound - lhs`.
    pub fn margin(&self) -> f64 {
        (0..3).map(|i| self.bounds[i] - self.lhs[i]).fold(f64::INFINITY, f64::min)
    }
}

/// The three parameter inequalities.
pub fn ns_certificate(p: &NSParams) -> NsCertificate {
    let lhs = [
        (p.eps + 1.0 + 2.0 * p.rho) / 2.0,
        (1.0 + p.eps - 2.0 * p.rho) / 2.0 + p.a - p.r,
        p.eps + 1.0 + p.a - p.r,
    ];
    let bounds = [1.0, 1.0, 2.0];
    let pass = [lhs[0] < bounds[0], lhs[1] < bounds[1], lhs[2] < bounds[2]];
    NsCertificate { params: *p, lhs, bounds, pass }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilitySearch {
    pub r: f64,
    pub candidates: usize,
    /// Passing parameters with the largest margin, if any.
    pub best: Option<NsCertificate>,
}

/// Searches `ε`, `1/2 - ρ` and `a - 3/2` over geometric grids on
/// `[1e-6, 1/2]` for parameters passing all three inequalities.
pub fn feasibility_search(r: f64, points_per_axis: usize) -> Result<FeasibilitySearch> {
    if points_per_axis < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: points_per_axis });
    }
    let grid = geomspace(1e-6, 0.5, points_per_axis);
    let mut best: Option<NsCertificate> = None;
    let mut candidates = 0;
    for &eps in &grid {
        for &gap_rho in &grid {
            for &gap_a in &grid {
                let rho = 0.5 - gap_rho;
                if rho <= 0.0 {
                    continue;
                }
                candidates += 1;
                let cert = ns_certificate(&NSParams { rho, r, a: 1.5 + gap_a, eps });
                if cert.all_pass() && best.is_none_or(|b| cert.margin() > b.margin()) {
                    best = Some(cert);
                }
            }
        }
    }
    Ok(FeasibilitySearch { r, candidates, best })
}
