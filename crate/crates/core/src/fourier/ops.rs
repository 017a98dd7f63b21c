//! Fourier multipliers, dealiased products and the Leray-projected
//! advection term.

use num_complex::Complex64;

use super::field::SpectralField;
use super::lattice::{norm_sq, Wavevector};
use super::vector::VectorSpectralField;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Sign of the exponent in `(-Δ)^{±ρ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSign {
    Positive,
    Negative,
}

/// `Δu`: multiplies `c_k` by `-|k|^2`.
pub fn laplacian(u: &SpectralField) -> SpectralField {
    u.apply_real_multiplier(|k| -norm_sq(k))
}

/// `∂_j u` for a 1-based axis `j`.
pub fn partial_derivative(u: &SpectralField, axis: usize) -> Result<SpectralField> {
    let dim = u.lattice().dim();
    if axis == 0 || axis > dim {
        return Err(Error::AxisOutOfRange { axis, dim });
    }
    Ok(u.map_modes(true, |k, c| I * k[axis - 1] as f64 * c))
}

/// Symbol of `(-Δ)^{±ρ}` with the zero-mode convention: `|0|^{2ρ}` is `0`
/// for `ρ > 0` and `1` for `ρ = 0`; the negative power always sends the zero
/// mode to `0`.
pub fn frac_symbol(k: &Wavevector, rho: f64, sign: PowerSign) -> f64 {
    let k2 = norm_sq(k);
    match sign {
        PowerSign::Positive if k2 == 0.0 => {
            if rho == 0.0 {
                1.0
            } else {
                0.0
            }
        }
        PowerSign::Negative if k2 == 0.0 => 0.0,
        PowerSign::Positive => k2.powf(rho),
        PowerSign::Negative => k2.powf(-rho),
    }
}

/// `(-Δ)^{±ρ} u`.
pub fn frac_laplacian(u: &SpectralField, rho: f64, sign: PowerSign) -> Result<SpectralField> {
    if !(rho >= 0.0) {
        return Err(Error::InvalidParameter(format!("fractional exponent must be >= 0, got {rho}")));
    }
    Ok(u.apply_real_multiplier(|k| frac_symbol(k, rho, sign)))
}

/// Side of the padded grid used for products: twice the lattice side, which
/// makes the truncated convolution alias-free.
pub(crate) fn product_grid_side(u: &SpectralField) -> usize {
    2 * u.lattice().modes_per_dim()
}

/// Coefficients of `u·v`, computed on a zero-padded grid and truncated back to
/// the lattice. The result is the exact lattice-truncated convolution
/// `sum_{p+q=k} u_p v_q`.
pub fn pointwise_product(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    u.check_same_lattice(v)?;
    let m = product_grid_side(u);
    let a = u.to_grid(m);
    let b = v.to_grid(m);
    let prod = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    Ok(SpectralField::from_padded_grid(*u.lattice(), prod, m, u.is_real() && v.is_real()))
}

/// Symmetric table of the products `u^j u^l`, `j <= l`.
pub(crate) fn product_table(components: &[SpectralField]) -> Result<Vec<Vec<SpectralField>>> {
    let m = product_grid_side(&components[0]);
    let lattice = *components[0].lattice();
    let grids: Vec<Vec<Complex64>> = components.iter().map(|c| c.to_grid(m)).collect();
    let real = components.iter().all(SpectralField::is_real);
    let dim = components.len();
    let mut table = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut row = Vec::with_capacity(dim - j);
        for l in j..dim {
            let prod = grids[j].iter().zip(&grids[l]).map(|(x, y)| x * y).collect();
            row.push(SpectralField::from_padded_grid(lattice, prod, m, real));
        }
        table.push(row);
    }
    Ok(table)
}

/// Applies `w^k = A^k_l ∂_j (σ · P^{jl})` with `A^k_l = k_k k_l/|k|^2 - δ_{kl}`
/// and an extra real even symbol `σ(k)`; the zero mode is set to zero.
pub(crate) fn leray_divergence_form(
    products: &[Vec<SpectralField>],
    extra_symbol: impl Fn(&Wavevector) -> f64,
) -> VectorSpectralField {
    let dim = products.len();
    let lattice = *products[0][0].lattice();
    let real = products.iter().flatten().all(SpectralField::is_real);
    let pair = |j: usize, l: usize| if j <= l { &products[j][l - j] } else { &products[l][j - l] };

    let mut out: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); lattice.mode_count()]; dim];
    for idx in 0..lattice.mode_count() {
        let k = lattice.wavevector(idx);
        let k2 = norm_sq(&k);
        if k2 == 0.0 {
            continue;
        }
        let sigma = extra_symbol(&k);
        // d_l = sum_j i k_j P^{jl}
        let mut d = [Complex64::default(); 3];
        for (l, dl) in d.iter_mut().enumerate().take(dim) {
            for j in 0..dim {
                *dl += I * k[j] as f64 * pair(j, l).coeffs()[idx];
            }
            *dl *= sigma;
        }
        let kd: Complex64 = (0..dim).map(|l| d[l] * k[l] as f64).sum();
        for (comp, w) in out.iter_mut().enumerate() {
            w[idx] = kd * (k[comp] as f64 / k2) - d[comp];
        }
    }

    let components = out
        .into_iter()
        .map(|coeffs| SpectralField::from_coeffs(lattice, coeffs, real).expect("lattice-sized"))
        .collect();
    VectorSpectralField::new(components)
        .expect("components share lattice")
        .assume_divergence_free()
}

/// Leray-projected advection term `A^k_l ∂_j (u^j u^l)` of the
/// incompressible Navier–Stokes equations, with dealiased products.
pub fn leray_advection(u: &VectorSpectralField) -> Result<VectorSpectralField> {
    if !u.is_real() {
        return Err(Error::NotReal);
    }
    let table = product_table(u.components())?;
    Ok(leray_divergence_form(&table, |_| 1.0))
}

/// Leray projector with symbol `δ_{kl} - k_k k_l/|k|^2`; the mean flow is
/// left untouched.
pub fn leray_project(u: &VectorSpectralField) -> VectorSpectralField {
    let lattice = *u.lattice();
    let dim = lattice.dim();
    let mut out: Vec<Vec<Complex64>> = u.components().iter().map(|c| c.coeffs().to_vec()).collect();
    for idx in 0..lattice.mode_count() {
        let k = lattice.wavevector(idx);
        let k2 = norm_sq(&k);
        if k2 == 0.0 {
            continue;
        }
        let kc: Complex64 = (0..dim).map(|l| u.component(l).coeffs()[idx] * k[l] as f64).sum();
        for (comp, w) in out.iter_mut().enumerate() {
            w[idx] -= kc * (k[comp] as f64 / k2);
        }
    }
    let components = out
        .into_iter()
        .zip(u.components())
        .map(|(coeffs, c)| SpectralField::from_coeffs(lattice, coeffs, c.is_real()).expect("lattice-sized"))
        .collect();
    VectorSpectralField::new(components)
        .expect("components share lattice")
        .assume_divergence_free()
}

/// `u(x + iy) = sum_k c_k e^{i k.(x+iy)}`, summed over the whole lattice.
pub fn evaluate_on_strip(u: &SpectralField, x: &[f64], y: &[f64]) -> Complex64 {
    let dim = u.lattice().dim();
    u.modes()
        .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
        .map(|(k, c)| {
            let (mut phase, mut growth) = (0.0, 0.0);
            for j in 0..dim {
                phase += k[j] as f64 * x.get(j).copied().unwrap_or(0.0);
                growth -= k[j] as f64 * y.get(j).copied().unwrap_or(0.0);
            }
            c * Complex64::from_polar(growth.exp(), phase)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::Lattice;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sin_x(lat: Lattice) -> SpectralField {
        SpectralField::real_from_modes(lat, &[([1, 0, 0], c(0.0, -0.5)), ([-1, 0, 0], c(0.0, 0.5))]).unwrap()
    }

    fn cos_x(lat: Lattice) -> SpectralField {
        SpectralField::real_from_modes(lat, &[([1, 0, 0], c(0.5, 0.0)), ([-1, 0, 0], c(0.5, 0.0))]).unwrap()
    }

    /// Brute-force truncated convolution over every pair of lattice modes.
    fn dense_convolution(u: &SpectralField, v: &SpectralField) -> Vec<Complex64> {
        let lat = *u.lattice();
        let mut out = vec![Complex64::default(); lat.mode_count()];
        for (p, up) in u.modes() {
            for (q, vq) in v.modes() {
                let k = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
                if let Some(i) = lat.index_of(&k) {
                    out[i] += up * vq;
                }
            }
        }
        out
    }

    #[test]
    fn laplacian_examples() {
        let lat = Lattice::new(1, 8).unwrap();
        let e1 = SpectralField::from_modes(lat, &[([1, 0, 0], c(1.0, 0.0))]).unwrap();
        assert_eq!(laplacian(&e1).coeff(&[1]), c(-1.0, 0.0));
        assert!(laplacian(&SpectralField::constant(lat, 5.0)).is_zero());
        let e2 = SpectralField::from_modes(lat, &[([2, 0, 0], c(1.0, 1.0))]).unwrap();
        assert_eq!(laplacian(&e2).coeff(&[2]), c(-4.0, -4.0));
    }

    #[test]
    fn derivative_examples() {
        let lat = Lattice::new(1, 8).unwrap();
        let e1 = SpectralField::from_modes(lat, &[([1, 0, 0], c(1.0, 0.0))]).unwrap();
        assert_eq!(partial_derivative(&e1, 1).unwrap().coeff(&[1]), c(0.0, 1.0));
        let d = partial_derivative(&sin_x(lat), 1).unwrap();
        assert!(d.max_coeff_diff(&cos_x(lat)).unwrap() < 1e-16);
        assert_eq!(d.hermitian_defect(), 0.0);
        assert!(partial_derivative(&SpectralField::constant(lat, 3.0), 1).unwrap().is_zero());
        assert!(matches!(partial_derivative(&e1, 2), Err(Error::AxisOutOfRange { .. })));
        assert!(matches!(partial_derivative(&e1, 0), Err(Error::AxisOutOfRange { .. })));
    }

    #[test]
    fn fractional_examples() {
        let lat = Lattice::new(1, 8).unwrap();
        let e2 = SpectralField::from_modes(lat, &[([2, 0, 0], c(1.0, 0.0))]).unwrap();
        let pos = frac_laplacian(&e2, 0.5, PowerSign::Positive).unwrap();
        assert!((pos.coeff(&[2]) - c(2.0, 0.0)).norm() < 1e-15);
        let neg = frac_laplacian(&e2, 0.5, PowerSign::Negative).unwrap();
        assert!((neg.coeff(&[2]) - c(0.5, 0.0)).norm() < 1e-15);
        let constant = SpectralField::constant(lat, 2.0);
        assert!(frac_laplacian(&constant, 0.3, PowerSign::Positive).unwrap().is_zero());
        assert!(frac_laplacian(&constant, 0.3, PowerSign::Negative).unwrap().is_zero());
        assert!(frac_laplacian(&constant, -0.1, PowerSign::Positive).is_err());
    }

    #[test]
    fn product_examples() {
        let lat = Lattice::new(1, 16).unwrap();
        let e1 = SpectralField::from_modes(lat, &[([1, 0, 0], c(1.0, 0.0))]).unwrap();
        let sq = pointwise_product(&e1, &e1).unwrap();
        let e2 = SpectralField::from_modes(lat, &[([2, 0, 0], c(1.0, 0.0))]).unwrap();
        assert!(sq.max_coeff_diff(&e2).unwrap() < 1e-15);

        let v = SpectralField::from_fn(lat, true, |k| c(1.0 / (1.0 + k[0].abs() as f64), 0.2 * k[0] as f64));
        let one = SpectralField::constant(lat, 1.0);
        assert!(pointwise_product(&one, &v).unwrap().max_coeff_diff(&v).unwrap() < 1e-15);

        let s2 = pointwise_product(&sin_x(lat), &sin_x(lat)).unwrap();
        let expected =
            SpectralField::real_from_modes(lat, &[([0, 0, 0], c(0.5, 0.0)), ([2, 0, 0], c(-0.25, 0.0)), ([-2, 0, 0], c(-0.25, 0.0))])
                .unwrap();
        assert!(s2.max_coeff_diff(&expected).unwrap() < 1e-15);
        assert!(s2.is_real());
        assert_eq!(s2.hermitian_defect(), 0.0);
    }

    #[test]
    fn product_matches_dense_convolution() {
        for (dim, n) in [(1, 16), (2, 8), (2, 16), (3, 8)] {
            let lat = Lattice::new(dim, n).unwrap();
            let u = SpectralField::from_fn(lat, true, |k| {
                let s = (k[0] * 3 + k[1] * 5 + k[2] * 7) as f64;
                c(s.sin(), (1.3 * s).cos())
            });
            let v = SpectralField::from_fn(lat, false, |k| c((k[0] - k[1]) as f64 * 0.1, (k[2] + 1) as f64 * 0.05));
            let got = pointwise_product(&u, &v).unwrap();
            let want = dense_convolution(&u, &v);
            let scale = want.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in got.coeffs().iter().zip(&want) {
                assert!((a - b).norm() <= 1e-12 * scale, "dim {dim} n {n}");
            }
        }
    }

    #[test]
    fn strip_evaluation_examples() {
        let lat = Lattice::new(1, 8).unwrap();
        let e1 = SpectralField::from_modes(lat, &[([1, 0, 0], c(1.0, 0.0))]).unwrap();
        let s = 0.7;
        assert!((evaluate_on_strip(&e1, &[0.0], &[-s]) - c(s.exp(), 0.0)).norm() < 1e-14);
        let three = SpectralField::constant(lat, 3.0);
        assert!((evaluate_on_strip(&three, &[1.234], &[0.4]) - c(3.0, 0.0)).norm() < 1e-15);
        let e2 = SpectralField::from_modes(lat, &[([2, 0, 0], c(1.0, 0.0))]).unwrap();
        assert!((evaluate_on_strip(&e2, &[FRAC_PI_2], &[0.0]) - c(-1.0, 0.0)).norm() < 1e-14);
        let _ = PI;
    }

    #[test]
    fn leray_projection_is_idempotent_and_solenoidal() {
        let lat = Lattice::new(3, 8).unwrap();
        let comps = (0..3)
            .map(|j| SpectralField::from_fn(lat, true, move |k| c(((k[0] + 2 * k[1] - k[2] + j as i64) as f64).sin(), 0.3)))
            .collect();
        let u = VectorSpectralField::new(comps).unwrap();
        let p = leray_project(&u);
        assert!(p.divergence_defect() < 1e-12);
        let pp = leray_project(&p);
        assert!(pp.max_coeff_diff(&p).unwrap() < 1e-12);
    }

    #[test]
    fn leray_advection_of_zero_is_zero() {
        let lat = Lattice::new(3, 8).unwrap();
        let zero = VectorSpectralField::zeros(lat, true);
        let w = leray_advection(&zero).unwrap();
        assert!(w.components().iter().all(SpectralField::is_zero));
    }

    #[test]
    fn leray_advection_rejects_complex_input() {
        let lat = Lattice::new(2, 8).unwrap();
        let u = VectorSpectralField::zeros(lat, false);
        assert!(matches!(leray_advection(&u), Err(Error::NotReal)));
    }
}
