use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::lattice::Lattice;
use crate::error::{Error, Result};

/// Absolute tolerance for the divergence-free flag.
pub const DIVERGENCE_TOL: f64 = 1e-12;

/// `dim` scalar components over one shared lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorSpectralField {
    components: Vec<SpectralField>,
    divergence_free: bool,
}

impl VectorSpectralField {
    pub fn new(components: Vec<SpectralField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("vector field needs components".into()))?;
        let lattice = *first.lattice();
        if components.len() != lattice.dim() {
            return Err(Error::InvalidParameter(format!(
                "expected {} components, got {}",
                lattice.dim(),
                components.len()
            )));
        }
        if components.iter().any(|c| *c.lattice() != lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { components, divergence_free: false })
    }

    pub fn zeros(lattice: Lattice, real_valued: bool) -> Self {
        Self {
            components: (0..lattice.dim()).map(|_| SpectralField::zeros(lattice, real_valued)).collect(),
            divergence_free: true,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        self.components[0].lattice()
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &SpectralField {
        &self.components[j]
    }

    pub fn into_components(self) -> Vec<SpectralField> {
        self.components
    }

    pub fn is_real(&self) -> bool {
        self.components.iter().all(SpectralField::is_real)
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    /// `max_k |sum_j k_j c^j_k|`.
    pub fn divergence_defect(&self) -> f64 {
        let lattice = *self.lattice();
        (0..lattice.mode_count())
            .map(|i| {
                let k = lattice.wavevector(i);
                self.components
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c.coeffs()[i] * k[j] as f64)
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    /// Sets the divergence-free flag after checking it holds to
    /// [`DIVERGENCE_TOL`].
    pub fn mark_divergence_free(mut self) -> Result<Self> {
        let defect = self.divergence_defect();
        if defect > DIVERGENCE_TOL {
            return Err(Error::InvalidParameter(format!("divergence defect {defect:e} exceeds tolerance")));
        }
        self.divergence_free = true;
        Ok(self)
    }

    pub(crate) fn assume_divergence_free(mut self) -> Self {
        self.divergence_free = true;
        self
    }

    pub fn map_components(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        Self {
            components: self.components.iter().map(f).collect(),
            divergence_free: false,
        }
    }

    /// Applies an isotropic real multiplier to every component; this keeps
    /// the divergence-free flag.
    pub fn apply_real_multiplier(&self, symbol: impl Fn(&[i64; 3]) -> f64) -> Self {
        Self {
            components: self.components.iter().map(|c| c.apply_real_multiplier(&symbol)).collect(),
            divergence_free: self.divergence_free,
        }
    }

    pub fn axpy(&self, scale: f64, other: &Self) -> Result<Self> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.axpy(scale, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            components,
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn energy(&self) -> f64 {
        self.components.iter().map(SpectralField::energy).sum()
    }

    pub fn max_coeff_diff(&self, other: &Self) -> Result<f64> {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_coeff_diff(b))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }
}
