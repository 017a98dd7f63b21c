//! Gradient nonlinearity `u_t = Δu + f(∇u)` on the torus.
//!
//! This is the periodic, `q = 2` analogue of the bounded-domain problem with
//! growth `|f(z)| <= c(|z|^p + 1)`: the Dirichlet setting and general `q` are
//! replaced by the torus and `L²`. With `u = e^{tΔ}û + v` the forcing is
//! `g(t, v) = f(∇(e^{tΔ}û + v))`, evaluated by collocation on the padded
//! grid of side `2N`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{partial_derivative, SpectralField};
use crate::mild_solver::Nonlinearity;
use crate::parabolicity::ExponentData;
use crate::semigroup::heat_apply;

/// Scalar map applied to the gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "p")]
pub enum GradientMap {
    /// `|∇w|^{1/2}`: continuous, growth `p = 1`, not Lipschitz at 0.
    SqrtModulus,
    /// `∂_1 w`: the linear control case.
    Identity,
    /// `|∇w|^p`.
    PowerModulus(f64),
}

impl GradientMap {
    /// Smallest `p` with `|f(z)| <= c(|z|^p + 1)`.
    pub fn growth(&self) -> f64 {
        match self {
            GradientMap::SqrtModulus | GradientMap::Identity => 1.0,
            GradientMap::PowerModulus(p) => p.max(1.0),
        }
    }

    fn apply(&self, grad: &[f64]) -> f64 {
        let modulus = || grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        match self {
            GradientMap::SqrtModulus => modulus().sqrt(),
            GradientMap::Identity => grad[0],
            GradientMap::PowerModulus(p) => modulus().powf(*p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientParams {
    pub p: f64,
    /// Integrability; fixed to 2 here.
    pub q: f64,
    pub map: GradientMap,
}

impl GradientParams {
    pub fn new(map: GradientMap) -> Self {
        Self { p: map.growth(), q: 2.0, map }
    }

    /// `φ = 0`, `α = 1` (one derivative), `β = 0`, `γ = 2`.
    pub fn exponents(&self) -> Result<ExponentData> {
        ExponentData::exponents(0.0, 1.0, 0.0, 2.0)
    }
}

impl Default for GradientParams {
    fn default() -> Self {
        Self::new(GradientMap::SqrtModulus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubcriticalCheck {
    pub subcritical: bool,
    /// `q - m(p-1)`.
    pub margin: f64,
}

/// Fujita-type condition `m(p-1) < q`.
pub fn subcritical_check(m: usize, p: f64, q: f64) -> SubcriticalCheck {
    let margin = q - m as f64 * (p - 1.0);
    SubcriticalCheck { subcritical: margin > 0.0, margin }
}

/// `f(∇(e^{tΔ}û + v))` by collocation on the grid of side `2N`.
pub fn gradient_rhs(t: f64, v: &SpectralField, params: &GradientParams, u_hat: &SpectralField) -> Result<SpectralField> {
    if !v.is_real() || !u_hat.is_real() {
        return Err(Error::NotReal);
    }
    let w = heat_apply(u_hat, t)?.add(v)?;
    let lattice = *w.lattice();
    let side = 2 * lattice.modes_per_dim();
    let grads: Vec<Vec<f64>> = (1..=lattice.dim())
        .map(|axis| Ok(partial_derivative(&w, axis)?.to_real_grid(side)))
        .collect::<Result<_>>()?;
    let mut point = vec![0.0; lattice.dim()];
    let values: Vec<Complex64> = (0..grads[0].len())
        .map(|i| {
            for (slot, g) in point.iter_mut().zip(&grads) {
                *slot = g[i];
            }
            Complex64::new(params.map.apply(&point), 0.0)
        })
        .collect();
    Ok(SpectralField::from_padded_grid(lattice, values, side, true))
}

#[derive(Debug, Clone)]
pub struct GradientProblem {
    pub params: GradientParams,
    pub u_hat: SpectralField,
}

impl GradientProblem {
    pub fn new(params: GradientParams, u_hat: SpectralField) -> Result<Self> {
        if !u_hat.is_real() {
            return Err(Error::NotReal);
        }
        Ok(Self { params, u_hat })
    }

    pub fn full_solution(&self, t: f64, v: &SpectralField) -> Result<SpectralField> {
        heat_apply(&self.u_hat, t)?.add(v)
    }
}

impl Nonlinearity<SpectralField> for GradientProblem {
    fn eval(&self, t: f64, u: &SpectralField) -> Result<SpectralField> {
        gradient_rhs(t, u, &self.params, &self.u_hat)
    }

    fn alpha(&self) -> f64 {
        1.0
    }

    fn beta(&self) -> f64 {
        0.0
    }

    fn description(&self) -> String {
        format!("gradient {:?}", self.params.map)
    }
}

/// Collocation points `2πj/M` of the padded grid in one dimension.
pub fn grid_points(side: usize) -> Vec<f64> {
    (0..side).map(|j| TAU * j as f64 / side as f64).collect()
}
