//! Adaptive Gauss–Legendre quadrature with graded substitutions for
//! integrable endpoint singularities `(x-a)^{-p}` and `(b-x)^{-p}`, `p < 1`.
//!
//! Integrands receive `(x, x - a, b - x)` so that distances to the endpoints
//! stay accurate where the singularities live.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Points of the panel rule.
pub const PANEL_POINTS: usize = 61;

const MAX_DEPTH: u32 = 48;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on `P_n` from Chebyshev-like initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_POINTS))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the bisection error estimates of the accepted panels.
    pub error: f64,
    pub evaluations: usize,
}

/// One panel on `[a, b]`; `da`, `db` are the distances of `a` and `b` to the
/// integration limits.
fn panel<F: Fn(f64, f64, f64) -> f64>(f: &F, a: f64, b: f64, da: f64, db: f64) -> f64 {
    let (nodes, weights) = panel_rule();
    let half = 0.5 * (b - a);
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| {
            let off = half * (1.0 + x);
            let back = half * (1.0 - x);
            w * f(a + off, da + off, db + back)
        })
        .sum::<f64>()
        * half
}

/// Adaptive bisection of the panel rule on `[a, b]` until the estimated
/// error is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
    }
    let whole = panel(&f, a, b, 0.0, 0.0);
    let mut evaluations = PANEL_POINTS;
    let target = abs_tol.max(rel_tol * whole.abs());
    let mut stack = vec![(a, b, 0.0, 0.0, whole, target, 0u32)];
    let mut value = 0.0;
    let mut error = 0.0;
    while let Some((lo, hi, dlo, dhi, est, tol, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let left = panel(&f, lo, mid, dlo, dhi + half);
        let right = panel(&f, mid, hi, dlo + half, dhi);
        evaluations += 2 * PANEL_POINTS;
        let refined = left + right;
        let err = (refined - est).abs();
        if !refined.is_finite() {
            return Err(Error::Divergent(format!("non-finite integrand near [{lo}, {hi}]")));
        }
        if err <= tol || depth >= MAX_DEPTH {
            value += refined;
            error += err;
        } else {
            stack.push((lo, mid, dlo, dhi + half, left, 0.5 * tol, depth + 1));
            stack.push((mid, hi, dlo + half, dhi, right, 0.5 * tol, depth + 1));
        }
    }
    Ok(QuadResult { value, error, evaluations })
}

/// `∫_a^b f` for `f ~ (x-a)^{-p_a}` near `a` and `~ (b-x)^{-p_b}` near `b`.
///
/// Each half of the interval is mapped by `x - a = (m-a) w^q`,
/// `q = 1/(1-p)`, which turns the singular factor into a bounded one.
pub fn integrate_singular<F: Fn(f64, f64, f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    p_a: f64,
    p_b: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    if !(p_a < 1.0 && p_b < 1.0) {
        return Err(Error::Divergent(format!("endpoint exponents {p_a}, {p_b} must be < 1")));
    }
    if !(b > a) {
        return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
    }
    let half = 0.5 * (b - a);
    let q_a = 1.0 / (1.0 - p_a.max(0.0));
    let q_b = 1.0 / (1.0 - p_b.max(0.0));
    let left = integrate(
        |w: f64, _, _| {
            if w <= 0.0 {
                return 0.0;
            }
            let wq = w.powf(q_a);
            let near = half * wq;
            let far = half * (2.0 - wq);
            f(a + near, near, far) * half * q_a * w.powf(q_a - 1.0)
        },
        0.0,
        1.0,
        rel_tol,
        0.0,
    )?;
    let right = integrate(
        |w: f64, _, _| {
            if w <= 0.0 {
                return 0.0;
            }
            let wq = w.powf(q_b);
            let near = half * wq;
            let far = half * (2.0 - wq);
            f(b - near, far, near) * half * q_b * w.powf(q_b - 1.0)
        },
        0.0,
        1.0,
        rel_tol,
        0.0,
    )?;
    Ok(QuadResult {
        value: left.value + right.value,
        error: left.error + right.error,
        evaluations: left.evaluations + right.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(PANEL_POINTS);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in [2, 10, 60, 120] {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = 2.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-14, "degree {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn smooth_and_oscillatory() {
        let r = integrate(|x, _, _| x.exp(), 0.0, 1.0, 1e-14, 0.0).unwrap();
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-14);
        let r = integrate(|x, _, _| (50.0 * x).sin().powi(2), 0.0, PI, 1e-13, 0.0).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularities() {
        // ∫₀¹ y^{-1/2}(1-y)^{-1/2} = π
        let r = integrate_singular(|_, y, ny| y.powf(-0.5) * ny.powf(-0.5), 0.0, 1.0, 0.5, 0.5, 1e-12).unwrap();
        assert!((r.value - PI).abs() < 1e-11);
        // ∫₀¹ y^{-0.9} = 10
        let r = integrate_singular(|_, y, _| y.powf(-0.9), 0.0, 1.0, 0.9, 0.0, 1e-12).unwrap();
        assert!((r.value - 10.0).abs() < 1e-9);
        assert!(integrate_singular(|_, y, _| 1.0 / y, 0.0, 1.0, 1.0, 0.0, 1e-8).is_err());
    }
}
