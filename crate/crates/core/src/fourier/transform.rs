//! Multidimensional FFT plumbing between lattice coefficients and
//! collocation grids of arbitrary (padded) size.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::lattice::Lattice;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unnormalized FFT over every axis of a `side^dim` cube stored
/// row-major.
pub(crate) fn fft_cube(data: &mut [Complex64], side: usize, dim: usize, direction: FftDirection) {
    debug_assert_eq!(data.len(), side.pow(dim as u32));
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(side, direction));
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // last axis is contiguous
    fft.process_with_scratch(data, &mut scratch);
    if dim == 1 {
        return;
    }

    let mut line = vec![Complex64::default(); side];
    for axis in 0..dim - 1 {
        let stride = side.pow((dim - 1 - axis) as u32);
        let block = stride * side;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, value) in line.iter().enumerate() {
                    data[base + j * stride] = *value;
                }
            }
        }
    }
}

/// Index of wavevector `k` (first `dim` entries) on a grid of side `m`.
fn grid_index(k: &[i64], dim: usize, m: usize) -> usize {
    k[..dim]
        .iter()
        .fold(0usize, |acc, &kj| acc * m + kj.rem_euclid(m as i64) as usize)
}

/// Point values `sum_k c_k e^{i k.x}` on the uniform grid with `m` points per
/// axis. Requires `m >= n`.
pub(crate) fn coeffs_to_grid(lattice: &Lattice, coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    assert!(m >= lattice.modes_per_dim(), "grid coarser than lattice");
    let dim = lattice.dim();
    let mut grid = vec![Complex64::default(); m.pow(dim as u32)];
    for (i, &c) in coeffs.iter().enumerate() {
        if c != Complex64::default() {
            let k = lattice.wavevector(i);
            grid[grid_index(&k, dim, m)] = c;
        }
    }
    fft_cube(&mut grid, m, dim, FftDirection::Inverse);
    grid
}

/// Lattice coefficients of grid values on an `m^dim` grid; modes outside the
/// lattice are discarded.
pub(crate) fn grid_to_coeffs(lattice: &Lattice, mut grid: Vec<Complex64>, m: usize) -> Vec<Complex64> {
    assert!(m >= lattice.modes_per_dim(), "grid coarser than lattice");
    let dim = lattice.dim();
    fft_cube(&mut grid, m, dim, FftDirection::Forward);
    let scale = 1.0 / grid.len() as f64;
    (0..lattice.mode_count())
        .map(|i| {
            let k = lattice.wavevector(i);
            grid[grid_index(&k, dim, m)] * scale
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_roundtrip_2d() {
        let lat = Lattice::new(2, 8).unwrap();
        let coeffs: Vec<Complex64> = (0..lat.mode_count())
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        for m in [8, 12, 16] {
            let grid = coeffs_to_grid(&lat, &coeffs, m);
            let back = grid_to_coeffs(&lat, grid, m);
            for (a, b) in coeffs.iter().zip(&back) {
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn single_mode_grid_values() {
        let lat = Lattice::new(3, 4).unwrap();
        let mut coeffs = vec![Complex64::default(); lat.mode_count()];
        coeffs[lat.index_of(&[1, -1, 0]).unwrap()] = Complex64::new(1.0, 0.0);
        let m = 8;
        let grid = coeffs_to_grid(&lat, &coeffs, m);
        let h = std::f64::consts::TAU / m as f64;
        for (idx, v) in grid.iter().enumerate() {
            let (i, j) = (idx / (m * m), (idx / m) % m);
            let phase = h * (i as f64 - j as f64);
            assert!((v - Complex64::from_polar(1.0, phase)).norm() < 1e-13);
        }
    }
}
