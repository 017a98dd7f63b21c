//! The heat semigroup `e^{tΔ}` in Fourier space, the exponential-integrator
//! weights built from it, and numerical verifiers for its smoothing
//! estimates on the analytic and Sobolev scales.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{norm_sq, Lattice, SpectralField};
use crate::mild_solver::ModalState;
use crate::scales::{analytic_norm, l1_exp_bound, sobolev_norm, StripNormParams};
use crate::stats::{linear_fit, LinearFit};

/// Below this argument `φ₁` switches to its Taylor series.
const PHI1_SERIES_CUTOFF: f64 = 1e-5;

/// `e^{tΔ}u`: multiplies `c_k` by `e^{-t|k|²}`.
pub fn heat_apply<S: ModalState>(u: &S, t: f64) -> Result<S> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(u.clone());
    }
    Ok(u.apply_real_multiplier(|k| (-t * norm_sq(k)).exp()))
}

/// `φ₁(z) = (1 - e^{-z})/z` for `z >= 0`, with `φ₁(0) = 1`.
pub fn phi1(z: f64) -> f64 {
    if z < PHI1_SERIES_CUTOFF {
        1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0
    } else {
        -(-z).exp_m1() / z
    }
}

/// Per-mode exponential-integrator weights `φ₁(h|k|²)` in lattice order.
pub fn phi1_weights(lattice: &Lattice, h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be > 0, got {h}")));
    }
    Ok(lattice.wavevectors().map(|k| phi1(h * norm_sq(&k))).collect())
}

/// Scale norm used on both sides of the Gaussian smoothing ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SmoothingNorm {
    /// `Σ|c_k| e^{s‖k‖₁}`.
    L1Exp,
    /// The sampled strip supremum of [`analytic_norm`].
    Strip,
}

/// `‖e^{tΔ}u‖_{s+δ} / (e^{δ²/(4t)} ‖u‖_s)`.
pub fn gaussian_smoothing_ratio(u: &SpectralField, s: f64, delta: f64, t: f64, norm: SmoothingNorm) -> Result<f64> {
    if !(delta > 0.0 && t > 0.0) {
        return Err(Error::InvalidParameter(format!("need delta > 0 and t > 0, got delta={delta}, t={t}")));
    }
    if u.is_zero() {
        return Err(Error::ZeroField);
    }
    let smoothed = heat_apply(u, t)?;
    let (num, den) = match norm {
        SmoothingNorm::L1Exp => (l1_exp_bound(&smoothed, s + delta)?, l1_exp_bound(u, s)?),
        SmoothingNorm::Strip => (
            analytic_norm(&smoothed, &StripNormParams::for_lattice(s + delta, u.lattice())),
            analytic_norm(u, &StripNormParams::for_lattice(s, u.lattice())),
        ),
    };
    Ok(num / den * (-delta * delta / (4.0 * t)).exp())
}

/// Least-squares slope of `log ‖e^{tΔ}u‖_{H^a}` against `log t`. The
/// smoothing estimate `‖e^{tΔ}u‖_{H^a} <= c t^{-(a-r)/2} ‖u‖_{H^r}` bounds
/// the slope below by `-(a-r)/2`.
pub fn sobolev_decay_fit(u: &SpectralField, a: f64, r: f64, t_grid: &[f64]) -> Result<LinearFit> {
    if !(a >= r && r >= 0.0) {
        return Err(Error::Ordering(format!("need a >= r >= 0, got a={a}, r={r}")));
    }
    if t_grid.len() < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: t_grid.len() });
    }
    let mut x = Vec::with_capacity(t_grid.len());
    let mut y = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("grid times must be > 0, got {t}")));
        }
        x.push(t.ln());
        y.push(sobolev_norm(&heat_apply(u, t)?, a).ln());
    }
    linear_fit(&x, &y)
}

/// Real field with `c_k = |k|^{-r-m/2}` for `|k| >= 2`: the borderline
/// spectrum just outside `H^r`, for which the Sobolev smoothing bound is
/// saturated.
pub fn borderline_field(lattice: Lattice, r: f64) -> SpectralField {
    let m = lattice.dim() as f64;
    SpectralField::from_fn(lattice, true, |k| {
        let k2 = norm_sq(k);
        if k2 < 4.0 {
            0.0.into()
        } else {
            k2.powf(-(r + m / 2.0) / 2.0).into()
        }
    })
}

/// Random real field with exponentially decaying coefficients, as used by
/// the smoothing sweeps.
pub fn random_real_field(lattice: Lattice, rng: &mut ChaCha8Rng) -> SpectralField {
    let decay: f64 = rng.random_range(0.05..0.5);
    let coeffs: Vec<(f64, f64)> = (0..lattice.mode_count())
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    SpectralField::from_fn(lattice, true, |k| {
        let idx = lattice.index_of(k).expect("lattice mode");
        let (re, im) = coeffs[idx];
        num_complex::Complex64::new(re, im) * (-decay * norm_sq(k).sqrt()).exp()
    })
}

/// Grid and sample sizes for the Gaussian smoothing sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingSweep {
    pub dim: usize,
    pub modes: usize,
    pub fields: usize,
    pub s: f64,
    pub t_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    pub seed: u64,
    /// Also evaluate the sampled strip norm (slower).
    pub strip: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothingSample {
    pub field: usize,
    pub t: f64,
    pub delta: f64,
    pub s: f64,
    pub ratio_l1: f64,
    pub ratio_strip: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingSummary {
    pub samples: Vec<SmoothingSample>,
    pub max_l1_ratio: f64,
    pub max_strip_ratio: Option<f64>,
}

/// Runs the smoothing ratio over `fields` random fields and the full
/// `(t, δ)` grid. Deterministic for a given seed.
pub fn smoothing_sweep(cfg: &SmoothingSweep) -> Result<SmoothingSummary> {
    if cfg.fields == 0 || cfg.t_grid.is_empty() || cfg.delta_grid.is_empty() {
        return Err(Error::Degenerate("empty smoothing sweep grid".into()));
    }
    let lattice = Lattice::new(cfg.dim, cfg.modes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = Vec::with_capacity(cfg.fields * cfg.t_grid.len() * cfg.delta_grid.len());
    for field in 0..cfg.fields {
        let u = random_real_field(lattice, &mut rng);
        let l1_base = l1_exp_bound(&u, cfg.s)?;
        let strip_base = cfg
            .strip
            .then(|| analytic_norm(&u, &StripNormParams::for_lattice(cfg.s, &lattice)));
        for &t in &cfg.t_grid {
            let smoothed = heat_apply(&u, t)?;
            for &delta in &cfg.delta_grid {
                let gauss = (-delta * delta / (4.0 * t)).exp();
                let ratio_l1 = l1_exp_bound(&smoothed, cfg.s + delta)? / l1_base * gauss;
                let ratio_strip = strip_base.map(|base| {
                    analytic_norm(&smoothed, &StripNormParams::for_lattice(cfg.s + delta, &lattice)) / base * gauss
                });
                samples.push(SmoothingSample { field, t, delta, s: cfg.s, ratio_l1, ratio_strip });
            }
        }
    }
    let max_l1_ratio = samples.iter().map(|s| s.ratio_l1).fold(0.0, f64::max);
    let max_strip_ratio = cfg
        .strip
        .then(|| samples.iter().filter_map(|s| s.ratio_strip).fold(0.0, f64::max));
    Ok(SmoothingSummary { samples, max_l1_ratio, max_strip_ratio })
}

/// Semigroup acting on the single-mode probes of [`parabolic_samples`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ProbeSemigroup {
    Heat,
    Identity,
}

/// Norm of the source space `G_s` for single-mode probes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ProbeSourceNorm {
    /// `G = E`: the strip norm, `‖e^{ikx}‖_s = e^{s|k|}`.
    Strip,
    /// `(1+k²)^{-a/2}`, an `H^{-a}`-type norm independent of `s`.
    NegativeSobolev(f64),
}

/// One `(γ_trial, t, δ, s, ratio)` observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParabolicSample {
    pub gamma_trial: f64,
    pub t: f64,
    pub delta: f64,
    pub s: f64,
    pub ratio: f64,
}

/// Ratios `max_k ‖S^t e^{ikx}‖_{s+δ} / ‖e^{ikx}‖^G_s` over the probes
/// `e^{ikx}`, `1 <= k <= k_max`, along the curves `δ = (t/2)^{1/γ}`.
///
/// Single modes have closed-form strip norms (`e^{s|k|}`, attained on the
/// line `y = -s sign k`), so the probe family reaches far beyond any lattice
/// one would store.
pub fn parabolic_samples(
    semigroup: ProbeSemigroup,
    source: ProbeSourceNorm,
    gamma_trials: &[f64],
    t_grid: &[f64],
    s: f64,
    k_max: u32,
) -> Vec<ParabolicSample> {
    let mut out = Vec::with_capacity(gamma_trials.len() * t_grid.len());
    for &gamma in gamma_trials {
        for &t in t_grid {
            let delta = (t / 2.0).powf(1.0 / gamma);
            let log_ratio = (1..=k_max)
                .map(|k| {
                    let k = k as f64;
                    let decay = match semigroup {
                        ProbeSemigroup::Heat => -t * k * k,
                        ProbeSemigroup::Identity => 0.0,
                    };
                    let log_source = match source {
                        ProbeSourceNorm::Strip => s * k,
                        ProbeSourceNorm::NegativeSobolev(a) => -0.5 * a * (1.0 + k * k).ln(),
                    };
                    decay + (s + delta) * k - log_source
                })
                .fold(f64::NEG_INFINITY, f64::max);
            out.push(ParabolicSample { gamma_trial: gamma, t, delta, s, ratio: log_ratio.exp() });
        }
    }
    out
}

/// Power-law fit `ratio ≈ C t^{-φ}` along one `γ_trial` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialFit {
    pub gamma_trial: f64,
    /// Regressed exponent, clamped at zero (a ratio that decreases as
    /// `t → 0` is bounded with `φ = 0`).
    pub phi: f64,
    pub raw_slope: f64,
    pub log_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParabolicFit {
    pub gamma_hat: f64,
    pub phi_hat: f64,
    pub trials: Vec<TrialFit>,
}

/// Estimates `(γ, φ)` in `‖S^t u‖_{s+δ} <= C t^{-φ} ‖u‖^G_s`, `δ^γ < t`.
///
/// Each `γ_trial` curve is regressed on `log ratio = log C - φ log t`. A trial
/// is admissible when its exponent stays within `phi_tol` of the smallest
/// exponent seen; `γ_hat` is the largest admissible trial (the strongest
/// gain of scale that costs no extra power of `t`). Past the true `γ` the
/// ratio grows like `exp(c t^{-ε})`, which shows up as a growing `φ`.
pub fn fit_parabolic_exponents(samples: &[ParabolicSample], phi_tol: f64) -> Result<ParabolicFit> {
    let mut gammas: Vec<f64> = samples.iter().map(|s| s.gamma_trial).collect();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    if gammas.is_empty() {
        return Err(Error::Degenerate("no parabolicity samples".into()));
    }
    let mut trials = Vec::with_capacity(gammas.len());
    for &gamma in &gammas {
        let (x, y): (Vec<f64>, Vec<f64>) = samples
            .iter()
            .filter(|s| s.gamma_trial == gamma && s.ratio > 0.0 && s.t > 0.0)
            .map(|s| (s.t.ln(), s.ratio.ln()))
            .unzip();
        if x.len() < 3 {
            return Err(Error::Degenerate(format!("gamma_trial {gamma} has fewer than 3 usable samples")));
        }
        let fit = linear_fit(&x, &y)?;
        trials.push(TrialFit {
            gamma_trial: gamma,
            phi: (-fit.slope).max(0.0),
            raw_slope: fit.slope,
            log_c: fit.intercept,
        });
    }
    let floor = trials.iter().map(|t| t.phi).fold(f64::INFINITY, f64::min);
    let chosen = trials
        .iter()
        .filter(|t| t.phi <= floor + phi_tol)
        .max_by(|a, b| a.gamma_trial.total_cmp(&b.gamma_trial))
        .expect("the floor trial is admissible");
    Ok(ParabolicFit { gamma_hat: chosen.gamma_trial, phi_hat: chosen.phi, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::geomspace;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn heat_examples() {
        let lat = Lattice::new(1, 16).unwrap();
        let e1 = SpectralField::from_modes(lat, &[([1, 0, 0], c(1.0, 0.0))]).unwrap();
        let h = heat_apply(&e1, 1.0).unwrap();
        assert!((h.coeff(&[1]) - c((-1.0f64).exp(), 0.0)).norm() < 1e-16);
        assert_eq!(heat_apply(&e1, 0.0).unwrap(), e1);
        assert!(matches!(heat_apply(&e1, -1.0), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn semigroup_law() {
        let lat = Lattice::new(2, 16).unwrap();
        let u = SpectralField::from_fn(lat, true, |k| c(1.0 / (1.0 + norm_sq(k)), 0.1 * k[0] as f64));
        let two_steps = heat_apply(&heat_apply(&u, 0.013).unwrap(), 0.029).unwrap();
        let one_step = heat_apply(&u, 0.042).unwrap();
        for (a, b) in two_steps.coeffs().iter().zip(one_step.coeffs()) {
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn phi1_examples() {
        let lat = Lattice::new(1, 8).unwrap();
        let w = phi1_weights(&lat, 1.0).unwrap();
        assert_eq!(w[0], 1.0);
        assert!((w[1] - (1.0 - (-1.0f64).exp())).abs() < 1e-16);
        assert!(w.iter().all(|&v| v > 0.0 && v <= 1.0));
        // Taylor cross-check: 1 - z/2 + z²/6 at z = 1e-8
        let z = 1e-8;
        assert!((phi1(z) - (1.0 - 5e-9)).abs() < 1e-12);
        assert!((phi1(z) - (1.0 - z / 2.0 + z * z / 6.0)).abs() < 1e-17);
        // branches agree at the cutoff
        assert!((phi1(PHI1_SERIES_CUTOFF * (1.0 - 1e-12)) - phi1(PHI1_SERIES_CUTOFF * (1.0 + 1e-12))).abs() < 1e-15);
        assert!(phi1_weights(&lat, 0.0).is_err());
    }

    #[test]
    fn smoothing_ratio_examples() {
        let lat = Lattice::new(1, 32).unwrap();
        for k in [1i64, 3, 7] {
            let e = SpectralField::from_modes(lat, &[([k, 0, 0], c(1.0, 0.0))]).unwrap();
            for (t, d) in [(0.01, 0.1), (0.1, 0.5), (1.0, 0.05)] {
                let r = gaussian_smoothing_ratio(&e, 0.2, d, t, SmoothingNorm::L1Exp).unwrap();
                let kf = k as f64;
                let want = (-t * kf * kf + d * kf - d * d / (4.0 * t)).exp();
                assert!((r - want).abs() < 1e-14 * want.max(1.0));
                assert!(r <= 1.0);
            }
        }
        let constant = SpectralField::constant(lat, 3.0);
        let r = gaussian_smoothing_ratio(&constant, 0.1, 0.2, 0.05, SmoothingNorm::Strip).unwrap();
        assert!((r - (-0.04f64 / 0.2).exp()).abs() < 1e-14);
        assert!(matches!(
            gaussian_smoothing_ratio(&SpectralField::zeros(lat, true), 0.1, 0.2, 0.05, SmoothingNorm::L1Exp),
            Err(Error::ZeroField)
        ));
    }

    #[test]
    fn strong_continuity_at_zero() {
        let lat = Lattice::new(1, 32).unwrap();
        let u = SpectralField::from_fn(lat, true, |k| c((-0.2 * k[0].abs() as f64).exp(), 0.0));
        let sup = StripNormParams::for_lattice(0.0, &lat);
        let scale = 1e-8 / 16f64.powi(2);
        let ts = [1e-2, 1e-4, 1e-6, scale];
        let diffs: Vec<f64> = ts
            .iter()
            .map(|&t| analytic_norm(&heat_apply(&u, t).unwrap().sub(&u).unwrap(), &sup))
            .collect();
        assert!(diffs.windows(2).all(|w| w[1] <= w[0]));
        assert!(*diffs.last().unwrap() <= 1e-6);
    }

    #[test]
    fn decay_fit_on_single_mode_and_equal_indices() {
        let lat = Lattice::new(1, 16).unwrap();
        let e1 = SpectralField::from_modes(lat, &[([1, 0, 0], c(1.0, 0.0))]).unwrap();
        let grid = geomspace(1e-6, 1e-4, 8);
        let fit = sobolev_decay_fit(&e1, 2.0, 0.0, &grid).unwrap();
        assert!(fit.slope.abs() < 1e-3);
        // an H^{1/2} field: the borderline spectrum one step smoother
        let u = borderline_field(Lattice::new(1, 256).unwrap(), 1.0);
        let fit = sobolev_decay_fit(&u, 0.5, 0.5, &geomspace(1e-6, 1e-4, 8)).unwrap();
        assert!(fit.slope.abs() <= 0.02 && fit.slope <= 0.0);
        assert!(sobolev_decay_fit(&u, 1.0, 0.5, &grid[..3]).is_err());
        assert!(sobolev_decay_fit(&u, 0.2, 0.5, &grid).is_err());
    }

    #[test]
    fn heat_probes_fit_gamma_two() {
        let gammas: Vec<f64> = (0..11).map(|i| 1.5 + 0.1 * i as f64).collect();
        let ts = geomspace(1e-8, 1e-2, 25);
        let samples = parabolic_samples(ProbeSemigroup::Heat, ProbeSourceNorm::Strip, &gammas, &ts, 0.1, 8192);
        let fit = fit_parabolic_exponents(&samples, 5e-3).unwrap();
        assert!((1.9..=2.1).contains(&fit.gamma_hat), "{fit:?}");
        assert!(fit.phi_hat < 5e-3);
    }

    #[test]
    fn identity_probes_have_zero_phi() {
        let gammas = [1.5, 2.0, 2.5];
        let ts = geomspace(1e-6, 1e-2, 10);
        let samples = parabolic_samples(ProbeSemigroup::Identity, ProbeSourceNorm::Strip, &gammas, &ts, 0.1, 64);
        let fit = fit_parabolic_exponents(&samples, 5e-3).unwrap();
        assert!(fit.trials.iter().all(|t| t.phi == 0.0));
    }

    #[test]
    fn negative_sobolev_source_costs_a_power_of_t() {
        let ts = geomspace(1e-8, 1e-2, 25);
        let samples = parabolic_samples(ProbeSemigroup::Heat, ProbeSourceNorm::NegativeSobolev(1.0), &[2.0], &ts, 0.0, 8192);
        let fit = fit_parabolic_exponents(&samples, 5e-3).unwrap();
        assert!(fit.phi_hat > 0.4);
    }

    #[test]
    fn empty_fit_is_degenerate() {
        assert!(fit_parabolic_exponents(&[], 1e-3).is_err());
    }
}
