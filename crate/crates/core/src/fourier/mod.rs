//! Lattice Fourier representation of functions on the torus `T^m` and the
//! multiplier operators built on it.

mod field;
mod lattice;
mod ops;
pub(crate) mod transform;
mod vector;

pub use field::SpectralField;
pub use lattice::{fft_wavenumber, negate, norm_l1, norm_sq, Lattice, Wavevector};
pub use ops::{
    evaluate_on_strip, frac_laplacian, frac_symbol, laplacian, leray_advection, leray_project, partial_derivative,
    pointwise_product, PowerSign,
};
pub(crate) use ops::{leray_divergence_form, product_table};
pub use vector::{VectorSpectralField, DIVERGENCE_TOL};
