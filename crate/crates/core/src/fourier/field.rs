use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::{negate, Lattice, Wavevector};
use super::transform::{coeffs_to_grid, grid_to_coeffs};
use crate::error::{Error, Result};

/// Fourier coefficients `c_k` of `u(x) = sum_k c_k e^{i k.x}` on a lattice.
///
/// Real-valued fields keep exact Hermitian symmetry `c_{-k} = conj(c_k)` and a
/// zero coefficient on every unpaired (`-n/2`) mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    lattice: Lattice,
    coeffs: Vec<Complex64>,
    real_valued: bool,
}

impl SpectralField {
    pub fn zeros(lattice: Lattice, real_valued: bool) -> Self {
        Self {
            lattice,
            coeffs: vec![Complex64::default(); lattice.mode_count()],
            real_valued,
        }
    }

    /// Spatially constant real field.
    pub fn constant(lattice: Lattice, value: f64) -> Self {
        let mut field = Self::zeros(lattice, true);
        field.coeffs[0] = Complex64::new(value, 0.0);
        field
    }

    /// Builds a field from raw coefficients. For `real_valued` fields the
    /// coefficients are symmetrized.
    pub fn from_coeffs(lattice: Lattice, coeffs: Vec<Complex64>, real_valued: bool) -> Result<Self> {
        if coeffs.len() != lattice.mode_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                lattice.mode_count(),
                coeffs.len()
            )));
        }
        let mut field = Self { lattice, coeffs, real_valued };
        if real_valued {
            field.enforce_hermitian();
        }
        Ok(field)
    }

    /// Field with the given coefficients at the listed wavevectors and zero
    /// elsewhere. Complex-valued; use [`SpectralField::real_from_modes`] for
    /// real data.
    pub fn from_modes(lattice: Lattice, modes: &[(Wavevector, Complex64)]) -> Result<Self> {
        let mut field = Self::zeros(lattice, false);
        for (k, c) in modes {
            let idx = lattice
                .index_of(k)
                .ok_or_else(|| Error::InvalidParameter(format!("wavevector {k:?} outside lattice")))?;
            field.coeffs[idx] += c;
        }
        Ok(field)
    }

    /// Real field from listed modes; the conjugate partner of each mode must
    /// be listed too (it is then averaged in exactly).
    pub fn real_from_modes(lattice: Lattice, modes: &[(Wavevector, Complex64)]) -> Result<Self> {
        let mut field = Self::from_modes(lattice, modes)?;
        field.real_valued = true;
        field.enforce_hermitian();
        Ok(field)
    }

    /// Coefficients computed mode by mode from the wavevector.
    pub fn from_fn(lattice: Lattice, real_valued: bool, f: impl Fn(&Wavevector) -> Complex64) -> Self {
        let coeffs = lattice.wavevectors().map(|k| f(&k)).collect();
        let mut field = Self { lattice, coeffs, real_valued };
        if real_valued {
            field.enforce_hermitian();
        }
        field
    }

    /// Interpolates real samples taken on the native `n^dim` collocation grid.
    pub fn from_grid_values(lattice: Lattice, values: &[f64]) -> Result<Self> {
        if values.len() != lattice.mode_count() {
            return Err(Error::InvalidParameter("grid size does not match lattice".into()));
        }
        let grid = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let coeffs = grid_to_coeffs(&lattice, grid, lattice.modes_per_dim());
        Self::from_coeffs(lattice, coeffs, true)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.real_valued
    }

    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        let mut kv = [0i64; 3];
        kv[..k.len()].copy_from_slice(k);
        self.lattice.index_of(&kv).map(|i| self.coeffs[i]).unwrap_or_default()
    }

    pub fn set_coeff(&mut self, k: &[i64], value: Complex64) -> Result<()> {
        let mut kv = [0i64; 3];
        kv[..k.len()].copy_from_slice(k);
        let idx = self
            .lattice
            .index_of(&kv)
            .ok_or_else(|| Error::InvalidParameter(format!("wavevector {k:?} outside lattice")))?;
        self.coeffs[idx] = value;
        Ok(())
    }

    /// Iterator over `(wavevector, coefficient)` pairs.
    pub fn modes(&self) -> impl Iterator<Item = (Wavevector, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, &c)| (self.lattice.wavevector(i), c))
    }

    /// Applies a mode-wise map. The result stays real only if `keeps_real`
    /// and the input was real.
    pub fn map_modes(&self, keeps_real: bool, f: impl Fn(&Wavevector, Complex64) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f(&self.lattice.wavevector(i), c))
            .collect();
        let mut out = Self {
            lattice: self.lattice,
            coeffs,
            real_valued: self.real_valued && keeps_real,
        };
        if out.real_valued {
            out.enforce_hermitian();
        }
        out
    }

    /// Multiplies every mode by a real even symbol `m(k) = m(-k)`.
    pub fn apply_real_multiplier(&self, symbol: impl Fn(&Wavevector) -> f64) -> Self {
        self.map_modes(true, |k, c| c * symbol(k))
    }

    pub(crate) fn check_same_lattice(&self, other: &Self) -> Result<()> {
        if self.lattice != other.lattice {
            Err(Error::LatticeMismatch)
        } else {
            Ok(())
        }
    }

    /// `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &Self) -> Result<Self> {
        self.check_same_lattice(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b * scale).collect();
        let mut out = Self {
            lattice: self.lattice,
            coeffs,
            real_valued: self.real_valued && other.real_valued,
        };
        if out.real_valued {
            out.enforce_hermitian();
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map_modes(true, |_, c| c * factor)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Largest coefficient-wise modulus difference.
    pub fn max_coeff_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_lattice(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|c_{-k} - conj(c_k)|` over paired modes, plus the modulus of
    /// any unpaired mode.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.lattice.wavevector(i);
            if self.lattice.is_unpaired(&k) {
                worst = worst.max(c.norm());
                continue;
            }
            let j = self.lattice.index_of(&negate(&k)).expect("paired mode");
            worst = worst.max((self.coeffs[j] - c.conj()).norm());
        }
        worst
    }

    /// Projects onto exactly Hermitian coefficients and clears unpaired modes.
    pub(crate) fn enforce_hermitian(&mut self) {
        for i in 0..self.coeffs.len() {
            let k = self.lattice.wavevector(i);
            if self.lattice.is_unpaired(&k) {
                self.coeffs[i] = Complex64::default();
                continue;
            }
            let j = self.lattice.index_of(&negate(&k)).expect("paired mode");
            if j < i {
                continue;
            }
            if j == i {
                self.coeffs[i].im = 0.0;
            } else {
                let avg = (self.coeffs[i] + self.coeffs[j].conj()) * 0.5;
                self.coeffs[i] = avg;
                self.coeffs[j] = avg.conj();
            }
        }
    }

    /// Point values on the uniform grid with `m >= n` points per axis.
    pub fn to_grid(&self, m: usize) -> Vec<Complex64> {
        coeffs_to_grid(&self.lattice, &self.coeffs, m)
    }

    /// Real part of the point values on the uniform `m`-grid.
    pub fn to_real_grid(&self, m: usize) -> Vec<f64> {
        self.to_grid(m).into_iter().map(|z| z.re).collect()
    }

    /// Projects point values from an `m`-grid back onto this lattice.
    pub(crate) fn from_padded_grid(lattice: Lattice, grid: Vec<Complex64>, m: usize, real_valued: bool) -> Self {
        let coeffs = grid_to_coeffs(&lattice, grid, m);
        let mut out = Self { lattice, coeffs, real_valued };
        if real_valued {
            out.enforce_hermitian();
        }
        out
    }

    /// Sum of `|c_k|^2`, the squared L2 norm under the coefficient convention.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_values_of_sine() {
        let lat = Lattice::new(1, 8).unwrap();
        let sin = SpectralField::real_from_modes(lat, &[([1, 0, 0], c(0.0, -0.5)), ([-1, 0, 0], c(0.0, 0.5))]).unwrap();
        let grid = sin.to_real_grid(16);
        for (j, v) in grid.iter().enumerate() {
            let x = std::f64::consts::TAU * j as f64 / 16.0;
            assert!((v - x.sin()).abs() < 1e-14);
        }
        let back = SpectralField::from_grid_values(lat, &sin.to_real_grid(8)).unwrap();
        assert!(back.max_coeff_diff(&sin).unwrap() < 1e-15);
    }

    #[test]
    fn real_fields_drop_unpaired_modes() {
        let lat = Lattice::new(2, 4).unwrap();
        let f = SpectralField::from_fn(lat, true, |_| c(1.0, 1.0));
        assert_eq!(f.coeff(&[-2, 0]), Complex64::default());
        assert_eq!(f.hermitian_defect(), 0.0);
        assert_eq!(f.coeff(&[0, 0]).im, 0.0);
    }

    #[test]
    fn mismatched_lattices_are_rejected() {
        let a = SpectralField::zeros(Lattice::new(1, 8).unwrap(), true);
        let b = SpectralField::zeros(Lattice::new(1, 16).unwrap(), true);
        assert!(matches!(a.add(&b), Err(Error::LatticeMismatch)));
    }
}
