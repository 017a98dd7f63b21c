//! Worked problems and the TOML problem-file format.
//!
//! ```toml
//! problem = "nonlocal"      # nonlocal | gradient | ns3d | zero | constant
//! dim = 1
//! N = 256
//!
//! [nonlocal]
//! n = 1
//! lambda = 0.5
//! K = 64
//!
//! [solver]
//! T_end = 0.5
//! steps = 256
//! ```
//!
//! Every block is optional and falls back to the defaults below.

pub mod gradient;
pub mod navier_stokes;
pub mod nonlocal;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parabolicity::{ExponentData, DEFAULT_EPS, DEFAULT_MU};

pub use gradient::{gradient_rhs, subcritical_check, GradientMap, GradientParams, GradientProblem, SubcriticalCheck};
pub use navier_stokes::{
    feasibility_search, ns_certificate, ns_rhs, taylor_green, FeasibilitySearch, NSParams, NsCertificate, NsProblem,
};
pub use nonlocal::{
    divergence_demo, nonlocal_closed_form, nonlocal_initial, nonlocal_mode_zero, nonlocal_rhs, DivergenceDemo, NonlocalParams,
    NonlocalProblem,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Nonlocal,
    Gradient,
    Ns3d,
    /// `f ≡ 0`.
    Zero,
    /// `f ≡ value` in the zero mode.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub problem: Option<ProblemKind>,
    pub dim: Option<usize>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub exponents: Option<ExponentBlock>,
    pub nonlocal: Option<NonlocalBlock>,
    pub gradient: Option<GradientBlock>,
    pub ns3d: Option<NsBlock>,
    pub constant: Option<ConstantBlock>,
    pub solver: Option<SolverBlock>,
    pub semigroup: Option<SemigroupBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentBlock {
    #[serde(rename = "C", default = "one")]
    pub c: f64,
    #[serde(rename = "T", default = "one")]
    pub t: f64,
    #[serde(rename = "R", default = "one")]
    pub r: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default = "two")]
    pub gamma: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Search `μ` for the largest horizon.
    #[serde(default)]
    pub optimize_mu: bool,
}

impl ExponentBlock {
    pub fn data(&self) -> Result<ExponentData> {
        ExponentData::new(self.c, self.t, self.r, self.phi, self.alpha, self.beta, self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlocalBlock {
    #[serde(default = "one_u32")]
    pub n: u32,
    #[serde(default = "half")]
    pub lambda: f64,
    #[serde(rename = "K", default = "default_k")]
    pub k: usize,
    /// Relative tolerance of the closed-form quadrature.
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
}

impl Default for NonlocalBlock {
    fn default() -> Self {
        Self { n: 1, lambda: 0.5, k: default_k(), quad_tol: default_quad_tol() }
    }
}

impl NonlocalBlock {
    pub fn params(&self) -> Result<NonlocalParams> {
        NonlocalParams::new(self.n, self.lambda, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMapName {
    SqrtModulus,
    Identity,
    PowerModulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradientBlock {
    #[serde(default = "default_map")]
    pub f: GradientMapName,
    /// Exponent for `power_modulus`.
    #[serde(default = "one")]
    pub p: f64,
    #[serde(default = "two")]
    pub q: f64,
    /// Amplitude of the initial data `amplitude * cos x_1`.
    #[serde(default = "one")]
    pub amplitude: f64,
}

impl Default for GradientBlock {
    fn default() -> Self {
        Self { f: default_map(), p: 1.0, q: 2.0, amplitude: 1.0 }
    }
}

impl GradientBlock {
    pub fn params(&self) -> Result<GradientParams> {
        if self.q != 2.0 {
            return Err(Error::Config(format!("only q = 2 is supported, got {}", self.q)));
        }
        let map = match self.f {
            GradientMapName::SqrtModulus => GradientMap::SqrtModulus,
            GradientMapName::Identity => GradientMap::Identity,
            GradientMapName::PowerModulus => {
                if !(self.p >= 1.0) {
                    return Err(Error::Config(format!("power_modulus needs p >= 1, got {}", self.p)));
                }
                GradientMap::PowerModulus(self.p)
            }
        };
        Ok(GradientParams::new(map))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NsBlock {
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_ns_eps")]
    pub eps: f64,
    /// Points per axis of the feasibility search.
    #[serde(default = "default_search_points")]
    pub search_points: usize,
}

impl Default for NsBlock {
    fn default() -> Self {
        Self {
            rho: default_rho(),
            r: default_r(),
            a: default_a(),
            eps: default_ns_eps(),
            search_points: default_search_points(),
        }
    }
}

impl NsBlock {
    pub fn params(&self) -> Result<NSParams> {
        NSParams::new(self.rho, self.r, self.a, self.eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantBlock {
    #[serde(default = "one")]
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(rename = "T_end")]
    pub t_end: Option<f64>,
    pub steps: Option<usize>,
    pub kappa: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    #[serde(rename = "R_ball")]
    pub r_ball: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupBlock {
    #[serde(default = "one_usize")]
    pub dim: usize,
    #[serde(rename = "N", default = "default_sweep_n")]
    pub n: usize,
    #[serde(default = "default_fields")]
    pub fields: usize,
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(default = "default_t_range")]
    pub t_range: [f64; 2],
    #[serde(default = "default_grid_count")]
    pub t_count: usize,
    #[serde(default = "default_delta_range")]
    pub delta_range: [f64; 2],
    #[serde(default = "default_grid_count")]
    pub delta_count: usize,
    /// Also sample the strip norm (slower).
    #[serde(default)]
    pub strip: bool,
    /// `a - r` values of the Sobolev decay fits.
    #[serde(default = "default_gaps")]
    pub decay_gaps: Vec<f64>,
    #[serde(default = "half")]
    pub decay_r: f64,
    #[serde(default = "default_decay_n")]
    pub decay_n: usize,
}

impl Default for SemigroupBlock {
    fn default() -> Self {
        toml::from_str("").expect("all semigroup fields have defaults")
    }
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn half() -> f64 {
    0.5
}
fn one_u32() -> u32 {
    1
}
fn one_usize() -> usize {
    1
}
fn default_mu() -> f64 {
    DEFAULT_MU
}
fn default_eps() -> f64 {
    DEFAULT_EPS
}
fn default_k() -> usize {
    64
}
fn default_quad_tol() -> f64 {
    1e-10
}
fn default_map() -> GradientMapName {
    GradientMapName::SqrtModulus
}
fn default_rho() -> f64 {
    0.45
}
fn default_r() -> f64 {
    1.3
}
fn default_a() -> f64 {
    1.6
}
fn default_ns_eps() -> f64 {
    0.05
}
fn default_search_points() -> usize {
    40
}
fn default_sweep_n() -> usize {
    64
}
fn default_fields() -> usize {
    100
}
fn default_s() -> f64 {
    0.1
}
fn default_t_range() -> [f64; 2] {
    [1e-3, 1.0]
}
fn default_delta_range() -> [f64; 2] {
    [1e-2, 1.0]
}
fn default_grid_count() -> usize {
    20
}
fn default_gaps() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}
fn default_decay_n() -> usize {
    2048
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn kind(&self) -> Result<ProblemKind> {
        self.problem.ok_or_else(|| Error::Config("missing key `problem`".into()))
    }

    pub fn nonlocal_block(&self) -> NonlocalBlock {
        self.nonlocal.unwrap_or_default()
    }

    pub fn gradient_block(&self) -> GradientBlock {
        self.gradient.unwrap_or_default()
    }

    pub fn ns_block(&self) -> NsBlock {
        self.ns3d.unwrap_or_default()
    }

    pub fn semigroup_block(&self) -> SemigroupBlock {
        self.semigroup.clone().unwrap_or_default()
    }

    pub fn solver_block(&self) -> SolverBlock {
        self.solver.unwrap_or(SolverBlock {
            t_end: None,
            steps: None,
            kappa: None,
            tol: None,
            max_iter: None,
            r_ball: None,
        })
    }
}
