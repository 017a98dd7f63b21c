//! Spectral toolkit for semilinear parabolic equations posed on scales of
//! Banach spaces.
//!
//! Fields live on the periodic torus as truncated Fourier series. On top of
//! that the crate provides the analytic-strip norms of the scale, the heat
//! semigroup and its smoothing estimates, the exponent bookkeeping that
//! decides parabolicity and an explicit existence horizon, a Picard solver
//! for the mild (Duhamel) formulation, and three worked problems: a
//! nonlocal equation with a closed-form solution, a gradient nonlinearity,
//! and a Navier–Stokes toy.

pub mod cli;
pub mod error;
pub mod fourier;
pub mod mild_solver;
pub mod parabolicity;
pub mod problems;
pub mod quadrature;
pub mod scales;
pub mod semigroup;
pub mod stats;

pub use error::{Error, Result};
pub use fourier::{Lattice, SpectralField, VectorSpectralField};
