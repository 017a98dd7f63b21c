use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer wavevector; unused trailing axes are zero.
pub type Wavevector = [i64; 3];

/// Square Fourier lattice on the `dim`-torus with `n` modes per axis.
///
/// Coefficients are stored in FFT order along every axis (index `i < n/2`
/// holds `k = i`, the rest hold `k = i - n`), flattened row-major with the
/// first axis slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    n: usize,
}

impl Lattice {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidLattice(format!("dim must be 1, 2 or 3, got {dim}")));
        }
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidLattice(format!(
                "modes per dimension must be even and >= 4, got {n}"
            )));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes_per_dim(&self) -> usize {
        self.n
    }

    pub fn mode_count(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Largest admissible positive wavenumber, `n/2 - 1`.
    pub fn k_max(&self) -> i64 {
        (self.n / 2) as i64 - 1
    }

    /// Shape of the coefficient array, one entry per axis.
    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.dim]
    }

    pub fn wavevector(&self, index: usize) -> Wavevector {
        let mut k = [0i64; 3];
        let mut rest = index;
        for axis in (0..self.dim).rev() {
            k[axis] = fft_wavenumber(rest % self.n, self.n);
            rest /= self.n;
        }
        k
    }

    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() < self.dim || k[self.dim..].iter().any(|&c| c != 0) {
            return None;
        }
        let half = (self.n / 2) as i64;
        let mut index = 0usize;
        for &kj in &k[..self.dim] {
            if kj < -half || kj >= half {
                return None;
            }
            index = index * self.n + kj.rem_euclid(self.n as i64) as usize;
        }
        Some(index)
    }

    /// True when some component equals `-n/2`; such modes have no partner `-k`.
    pub fn is_unpaired(&self, k: &Wavevector) -> bool {
        let half = (self.n / 2) as i64;
        k[..self.dim].iter().any(|&c| c == -half)
    }

    pub fn wavevectors(&self) -> impl Iterator<Item = Wavevector> + '_ {
        (0..self.mode_count()).map(move |i| self.wavevector(i))
    }
}

/// Wavenumber held at FFT index `i` of a length-`n` transform.
pub fn fft_wavenumber(i: usize, n: usize) -> i64 {
    if i < n.div_ceil(2) {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

pub fn norm_sq(k: &Wavevector) -> f64 {
    k.iter().map(|&c| (c * c) as f64).sum()
}

pub fn norm_l1(k: &Wavevector) -> f64 {
    k.iter().map(|&c| c.unsigned_abs() as f64).sum()
}

pub fn negate(k: &Wavevector) -> Wavevector {
    [-k[0], -k[1], -k[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(Lattice::new(0, 8).is_err());
        assert!(Lattice::new(4, 8).is_err());
        assert!(Lattice::new(1, 6).is_ok());
        assert!(Lattice::new(1, 7).is_err());
        assert!(Lattice::new(2, 2).is_err());
    }

    #[test]
    fn index_roundtrip_covers_every_mode() {
        let lat = Lattice::new(3, 6).unwrap();
        assert_eq!(lat.mode_count(), 216);
        for i in 0..lat.mode_count() {
            let k = lat.wavevector(i);
            assert_eq!(lat.index_of(&k), Some(i));
            assert!(k.iter().all(|&c| (-3..=2).contains(&c)));
        }
        assert_eq!(lat.index_of(&[3, 0, 0]), None);
    }

    #[test]
    fn unpaired_modes_sit_on_the_negative_edge() {
        let lat = Lattice::new(2, 8).unwrap();
        assert!(lat.is_unpaired(&[-4, 1, 0]));
        assert!(!lat.is_unpaired(&[3, -3, 0]));
    }
}
