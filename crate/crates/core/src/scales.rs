//! Norms of the two scales: the analytic strip norms `‖u‖_s` (sup of `|u|`
//! over the closed complex strip `|Im z_j| <= s`), Sobolev and Lebesgue norms,
//! and the trajectory seminorms `‖u‖_{τ,μ}`.
//!
//! L2 convention: `‖u‖² = Σ_k |c_k|²`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{norm_l1, norm_sq, Lattice, SpectralField, Wavevector};
use crate::mild_solver::{ModalState, Trajectory};

/// Local maxima of the sampled modulus that get polished by Newton ascent.
const REFINED_CANDIDATES: usize = 8;

/// Sampling controls for [`analytic_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripNormParams {
    /// Strip half-width.
    pub s: f64,
    /// Samples per real axis on the distinguished boundary; raised to `4N`
    /// when smaller.
    pub x_samples: usize,
    /// Samples of each free imaginary coordinate on the faces `|y_j| = s`.
    pub edge_samples: usize,
}

impl StripNormParams {
    pub fn new(s: f64, x_samples: usize, edge_samples: usize) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidParameter(format!("strip width must be finite and >= 0, got {s}")));
        }
        if x_samples < 4 || edge_samples < 9 {
            return Err(Error::InvalidParameter("need x_samples >= 4 and edge_samples >= 9".into()));
        }
        Ok(Self { s, x_samples, edge_samples })
    }

    /// Default sampling for fields on `lattice`: `4N` points per axis, 9 face
    /// samples.
    pub fn for_lattice(s: f64, lattice: &Lattice) -> Self {
        Self {
            s,
            x_samples: 4 * lattice.modes_per_dim(),
            edge_samples: 9,
        }
    }
}

/// `(τ, μ, γ)` selecting the seminorm `max_{τ<=ξ<=T} ‖u(ξ)‖_{μ τ^{1/γ}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySeminormParams {
    pub tau: f64,
    pub mu: f64,
    pub gamma: f64,
}

impl TrajectorySeminormParams {
    pub fn new(tau: f64, mu: f64, gamma: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!("tau must be > 0, got {tau}")));
        }
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::InvalidParameter(format!("mu must lie in (0,1), got {mu}")));
        }
        if !(gamma > 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must be > 1, got {gamma}")));
        }
        Ok(Self { tau, mu, gamma })
    }

    pub fn strip_width(&self) -> f64 {
        self.mu * self.tau.powf(1.0 / self.gamma)
    }
}

/// Sampled strip norm `max_{|Im z_j| <= s} |u(z)|`.
///
/// By the maximum-modulus principle applied in each variable the supremum is
/// attained where every `|y_j| = s`; those `2^m` slabs are scanned on an
/// `x_samples^m` grid and the best local maxima are refined by Newton ascent.
/// For `m >= 2` the face interiors are scanned additionally on the native
/// collocation grid. With `s = 0` this is the sup norm over the real torus.
/// The value is always a lower bound of the true supremum.
pub fn analytic_norm(u: &SpectralField, params: &StripNormParams) -> f64 {
    let lattice = *u.lattice();
    let dim = lattice.dim();
    let n = lattice.modes_per_dim();
    let terms: Vec<(Wavevector, Complex64)> = u.modes().filter(|(_, c)| c.norm() > 0.0).collect();
    if terms.is_empty() {
        return 0.0;
    }
    let s = params.s;
    let m = params.x_samples.max(4 * n);

    let corners: Vec<[f64; 3]> = if s == 0.0 {
        vec![[0.0; 3]]
    } else {
        (0..1usize << dim)
            .map(|mask| {
                let mut y = [0.0; 3];
                for (j, yj) in y.iter_mut().enumerate().take(dim) {
                    *yj = if mask >> j & 1 == 1 { s } else { -s };
                }
                y
            })
            .collect()
    };

    let mut best = 0.0f64;
    for y in &corners {
        let shifted = u.map_modes(false, |k, c| c * (-dot(k, y)).exp());
        let grid = shifted.to_grid(m);
        let sampled_max = grid.iter().map(|z| z.norm()).fold(0.0, f64::max);
        best = best.max(sampled_max);

        let local: Vec<(Wavevector, Complex64)> = terms.iter().map(|&(k, c)| (k, c * (-dot(&k, y)).exp())).collect();
        for idx in top_local_maxima(&grid, m, dim, REFINED_CANDIDATES) {
            let x0 = grid_point(idx, m, dim);
            best = best.max(newton_polish(&local, dim, x0, TAU / m as f64));
        }
    }

    if s > 0.0 && dim >= 2 {
        let ys: Vec<f64> = (0..params.edge_samples)
            .map(|i| -s + 2.0 * s * i as f64 / (params.edge_samples - 1) as f64)
            .collect();
        for axis in 0..dim {
            for face in [-s, s] {
                let free = dim - 1;
                for combo in 0..params.edge_samples.pow(free as u32) {
                    let mut y = [0.0; 3];
                    let mut rest = combo;
                    for (j, yj) in y.iter_mut().enumerate().take(dim) {
                        if j == axis {
                            *yj = face;
                        } else {
                            *yj = ys[rest % params.edge_samples];
                            rest /= params.edge_samples;
                        }
                    }
                    let shifted = u.map_modes(false, |k, c| c * (-dot(k, &y)).exp());
                    let face_max = shifted.to_grid(n).iter().map(|z| z.norm()).fold(0.0, f64::max);
                    best = best.max(face_max);
                }
            }
        }
    }
    best
}

fn dot(k: &Wavevector, y: &[f64; 3]) -> f64 {
    k[0] as f64 * y[0] + k[1] as f64 * y[1] + k[2] as f64 * y[2]
}

fn grid_point(idx: usize, m: usize, dim: usize) -> [f64; 3] {
    let h = TAU / m as f64;
    let mut x = [0.0; 3];
    let mut rest = idx;
    for axis in (0..dim).rev() {
        x[axis] = h * (rest % m) as f64;
        rest /= m;
    }
    x
}

/// Indices of the largest periodic local maxima of `|grid|`.
fn top_local_maxima(grid: &[Complex64], m: usize, dim: usize, count: usize) -> Vec<usize> {
    let abs: Vec<f64> = grid.iter().map(|z| z.norm()).collect();
    let strides: Vec<usize> = (0..dim).map(|axis| m.pow((dim - 1 - axis) as u32)).collect();
    let mut peaks: Vec<(f64, usize)> = Vec::new();
    for (idx, &v) in abs.iter().enumerate() {
        let is_peak = strides.iter().all(|&stride| {
            let coord = (idx / stride) % m;
            let base = idx - coord * stride;
            let up = base + ((coord + 1) % m) * stride;
            let down = base + ((coord + m - 1) % m) * stride;
            v >= abs[up] && v >= abs[down]
        });
        if is_peak {
            peaks.push((v, idx));
        }
    }
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    peaks.into_iter().take(count).map(|(_, i)| i).collect()
}

/// `u`, `∂_j u` and `∂_j² u` at a real point `x` for the shifted terms.
fn value_and_derivs(terms: &[(Wavevector, Complex64)], dim: usize, x: &[f64; 3], axis: usize) -> (Complex64, Complex64, Complex64) {
    let mut u = Complex64::default();
    let mut du = Complex64::default();
    let mut d2u = Complex64::default();
    for (k, c) in terms {
        let phase: f64 = (0..dim).map(|j| k[j] as f64 * x[j]).sum();
        let term = c * Complex64::from_polar(1.0, phase);
        let kj = k[axis] as f64;
        u += term;
        du += term * Complex64::new(0.0, kj);
        d2u -= term * (kj * kj);
    }
    (u, du, d2u)
}

fn modulus_sq(terms: &[(Wavevector, Complex64)], dim: usize, x: &[f64; 3]) -> f64 {
    value_and_derivs(terms, dim, x, 0).0.norm_sqr()
}

/// Coordinate-wise Newton ascent on `|u(x)|²` with backtracking; never
/// returns less than the starting value.
fn newton_polish(terms: &[(Wavevector, Complex64)], dim: usize, mut x: [f64; 3], h: f64) -> f64 {
    let mut g = modulus_sq(terms, dim, &x);
    for _ in 0..40 {
        let mut moved = 0.0f64;
        for axis in 0..dim {
            let (u, du, d2u) = value_and_derivs(terms, dim, &x, axis);
            let g1 = 2.0 * (u.conj() * du).re;
            let g2 = 2.0 * (du.norm_sqr() + (u.conj() * d2u).re);
            let mut step = if g2 < 0.0 { -g1 / g2 } else { 0.25 * h * g1.signum() };
            step = step.clamp(-h, h);
            for _ in 0..12 {
                let mut trial = x;
                trial[axis] += step;
                let gt = modulus_sq(terms, dim, &trial);
                if gt >= g {
                    x = trial;
                    g = gt;
                    moved = moved.max(step.abs());
                    break;
                }
                step *= 0.5;
            }
        }
        if moved < 1e-14 {
            break;
        }
    }
    g.sqrt()
}

/// Certified majorant `Σ_k |c_k| e^{s‖k‖₁} >= ‖u‖_s`.
pub fn l1_exp_bound(u: &SpectralField, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter(format!("strip width must be >= 0, got {s}")));
    }
    let mut total = 0.0;
    for (k, c) in u.modes() {
        let modulus = c.norm();
        if modulus == 0.0 {
            continue;
        }
        let exponent = s * norm_l1(&k);
        let term = modulus * exponent.exp();
        if !term.is_finite() {
            return Err(Error::Overflow(exponent));
        }
        total += term;
    }
    if !total.is_finite() {
        return Err(Error::Overflow(f64::INFINITY));
    }
    Ok(total)
}

/// `(Σ_k (1+|k|²)^a |c_k|²)^{1/2}`.
pub fn sobolev_norm(u: &SpectralField, a: f64) -> f64 {
    u.modes()
        .map(|(k, c)| (1.0 + norm_sq(&k)).powf(a) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Collocation approximation of the Lebesgue norm on `[0, 2π)^m`, using a
/// grid twice as fine as the lattice.
pub fn lq_norm(u: &SpectralField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!("q must be >= 1, got {q}")));
    }
    let dim = u.lattice().dim() as f64;
    let grid = u.to_grid(2 * u.lattice().modes_per_dim());
    let mean = grid.iter().map(|z| z.norm().powf(q)).sum::<f64>() / grid.len() as f64;
    Ok(TAU.powf(dim / q) * mean.powf(1.0 / q))
}

/// `‖u‖_{τ,μ} = max_{τ<=ξ<=T} ‖u(ξ)‖_{μ τ^{1/γ}}` over the stored nodes.
pub fn trajectory_seminorm<S: ModalState>(traj: &Trajectory<S>, params: &TrajectorySeminormParams) -> Result<f64> {
    let times = traj.grid().nodes();
    let (start, end) = (times[0], *times.last().expect("non-empty grid"));
    if params.tau < start || params.tau > end {
        return Err(Error::OutsideSpan { tau: params.tau, start, end });
    }
    let s = params.strip_width();
    Ok(traj
        .fields()
        .iter()
        .zip(times)
        .filter(|(_, &t)| t >= params.tau)
        .map(|(u, _)| u.strip_norm(s))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lat1(n: usize) -> Lattice {
        Lattice::new(1, n).unwrap()
    }

    fn sin_x(lat: Lattice) -> SpectralField {
        SpectralField::real_from_modes(lat, &[([1, 0, 0], c(0.0, -0.5)), ([-1, 0, 0], c(0.0, 0.5))]).unwrap()
    }

    #[test]
    fn analytic_norm_examples() {
        let lat = lat1(16);
        let e1 = SpectralField::from_modes(lat, &[([1, 0, 0], c(1.0, 0.0))]).unwrap();
        let v = analytic_norm(&e1, &StripNormParams::for_lattice(0.7, &lat));
        assert!((v - 0.7f64.exp()).abs() < 1e-10);

        let two = SpectralField::constant(lat, 2.0);
        assert!((analytic_norm(&two, &StripNormParams::for_lattice(0.3, &lat)) - 2.0).abs() < 1e-14);

        let cos2 = SpectralField::real_from_modes(lat, &[([1, 0, 0], c(1.0, 0.0)), ([-1, 0, 0], c(1.0, 0.0))]).unwrap();
        let v = analytic_norm(&cos2, &StripNormParams::for_lattice(0.5, &lat));
        assert!((v - 2.0 * 0.5f64.cosh()).abs() < 1e-10);
    }

    #[test]
    fn zero_width_is_the_sup_norm() {
        let lat = lat1(32);
        // off-grid maximum: sin(x) + 0.3 sin(3x + 0.1)
        let f = SpectralField::from_fn(lat, true, |k| match k[0] {
            1 => c(0.0, -0.5),
            -1 => c(0.0, 0.5),
            3 => Complex64::from_polar(0.15, 0.1 - PI / 2.0),
            -3 => Complex64::from_polar(0.15, -0.1 + PI / 2.0),
            _ => c(0.0, 0.0),
        });
        let dense = (0..200_000)
            .map(|j| {
                let x = TAU * j as f64 / 200_000.0;
                (x.sin() + 0.3 * (3.0 * x + 0.1).sin()).abs()
            })
            .fold(0.0, f64::max);
        let v = analytic_norm(&f, &StripNormParams::for_lattice(0.0, &lat));
        assert!(v >= dense - 1e-12 && v - dense < 1e-9, "{v} vs {dense}");
    }

    #[test]
    fn two_dimensional_product_mode() {
        let lat = Lattice::new(2, 8).unwrap();
        let f = SpectralField::from_modes(lat, &[([1, -2, 0], c(1.0, 0.0))]).unwrap();
        let v = analytic_norm(&f, &StripNormParams::for_lattice(0.25, &lat));
        assert!((v - (0.75f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn l1_bound_examples() {
        let lat = lat1(16);
        let e1 = SpectralField::from_modes(lat, &[([1, 0, 0], c(1.0, 0.0))]).unwrap();
        assert!((l1_exp_bound(&e1, 0.7).unwrap() - 0.7f64.exp()).abs() < 1e-14);
        assert_eq!(l1_exp_bound(&SpectralField::zeros(lat, true), 0.7).unwrap(), 0.0);
        let cos2 = SpectralField::real_from_modes(lat, &[([1, 0, 0], c(1.0, 0.0)), ([-1, 0, 0], c(1.0, 0.0))]).unwrap();
        let b = l1_exp_bound(&cos2, 0.5).unwrap();
        assert!((b - 2.0 * 0.5f64.exp()).abs() < 1e-14);
        assert!(b >= 2.0 * 0.5f64.cosh());
        assert!(matches!(l1_exp_bound(&e1, 1e3), Err(Error::Overflow(_))));
    }

    #[test]
    fn sobolev_examples() {
        let lat = lat1(16);
        let e3 = SpectralField::from_modes(lat, &[([3, 0, 0], c(1.0, 0.0))]).unwrap();
        assert!((sobolev_norm(&e3, 1.0) - 10f64.sqrt()).abs() < 1e-14);
        assert!((sobolev_norm(&e3, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lq_examples() {
        let lat = lat1(16);
        let two = SpectralField::constant(lat, 2.0);
        assert!((lq_norm(&two, 4.0).unwrap() - 2.0 * TAU.powf(0.25)).abs() < 1e-13);
        assert!((lq_norm(&sin_x(lat), 2.0).unwrap() - PI.sqrt()).abs() < 1e-13);
        // ∫ sin⁴ = 3π/4, cross-checked with a midpoint sum on a fine grid
        let quad: f64 = (0..100_000)
            .map(|j| ((j as f64 + 0.5) * TAU / 100_000.0).sin().powi(4))
            .sum::<f64>()
            * TAU
            / 100_000.0;
        assert!((quad - 3.0 * PI / 4.0).abs() < 1e-12);
        assert!((lq_norm(&sin_x(lat), 4.0).unwrap() - (3.0 * PI / 4.0).powf(0.25)).abs() < 1e-13);
        assert!(lq_norm(&sin_x(lat), 0.5).is_err());
    }

    #[test]
    fn parseval_on_real_fields() {
        let lat = Lattice::new(2, 8).unwrap();
        let f = SpectralField::from_fn(lat, true, |k| c((k[0] as f64 * 0.7).cos() / (1 + k[1].abs()) as f64, 0.1 * k[1] as f64));
        let grid_mean = f.to_real_grid(8).iter().map(|v| v * v).sum::<f64>() / 64.0;
        assert!((grid_mean - sobolev_norm(&f, 0.0).powi(2)).abs() <= 1e-12 * grid_mean);
    }
}
