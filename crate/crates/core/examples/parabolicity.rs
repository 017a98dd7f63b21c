//! Exponent bookkeeping: the index χ, the constants J and I, the existence
//! horizon T*, and recovering γ from probes of the heat semigroup.

use num_rational::Ratio;
use parascale::parabolicity::{
    chi, chi_exact, i_integral, j_beta_identity, j_integral, optimize_mu, parabolicity_report, time_horizon, ExponentData,
};
use parascale::semigroup::{fit_parabolic_exponents, parabolic_samples, ProbeSemigroup, ProbeSourceNorm};
use parascale::stats::geomspace;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e = ExponentData::new(1.0, 1.0, 1.0, 0.5, 0.4, 0.0, 2.0)?;
    println!("chi = {}", chi(&e));
    let exact = chi_exact(Ratio::new(1, 2), Ratio::new(2, 5), Ratio::from_integer(0), Ratio::from_integer(2))?;
    println!("chi (rational) = {exact}");

    let a = e.alpha / e.gamma;
    println!("J = {:.12} (Beta function {:.12})", j_integral(e.phi, a)?, j_beta_identity(e.phi, a)?);
    println!("I = {:.12}", i_integral(e.phi, e.alpha, e.gamma)?);

    let report = parabolicity_report(&e, 0.9, 0.1)?;
    println!("report: {report:?}");
    for r in [0.5, 1.0, 2.0] {
        println!("R = {r}: T* = {:.6e}", time_horizon(&ExponentData { r, ..e }, 0.9, 0.1)?);
    }
    let (mu, t_star) = optimize_mu(&e, 0.1)?;
    println!("best mu {mu:.6} gives T* = {t_star:.6e}");

    let critical = ExponentData::exponents(0.0, 2.0, 0.0, 2.0)?;
    println!("nonlocal n*lambda = 1: {:?}", time_horizon(&critical, 0.9, 0.1).unwrap_err());

    let samples = parabolic_samples(
        ProbeSemigroup::Heat,
        ProbeSourceNorm::Strip,
        &[1.5, 2.0, 2.5, 3.0],
        &geomspace(1e-6, 1e-2, 12),
        0.1,
        4000,
    );
    let fit = fit_parabolic_exponents(&samples, 0.05)?;
    println!("heat semigroup probes: gamma = {}, phi = {:.3}", fit.gamma_hat, fit.phi_hat);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
