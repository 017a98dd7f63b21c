//! Fields on the torus: derivatives, products, fractional powers, the Leray
//! projector, and the analytic strip norm next to its ℓ¹ majorant.

use num_complex::Complex64;
use parascale::fourier::{
    frac_laplacian, leray_project, partial_derivative, pointwise_product, Lattice, PowerSign, SpectralField,
};
use parascale::problems::taylor_green;
use parascale::scales::{analytic_norm, l1_exp_bound, StripNormParams};
use parascale::VectorSpectralField;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lattice = Lattice::new(1, 32)?;
    let half = Complex64::new(0.5, 0.0);
    // cos x
    let cos = SpectralField::real_from_modes(lattice, &[([1, 0, 0], half), ([-1, 0, 0], half)])?;

    let dx = partial_derivative(&cos, 1)?;
    println!("d/dx cos x at k=1: {}", dx.coeff(&[1]));

    // cos² x = 1/2 + cos(2x)/2
    let sq = pointwise_product(&cos, &cos)?;
    println!("cos^2: c_0 = {}, c_2 = {}", sq.coeff(&[0]).re, sq.coeff(&[2]).re);

    let smooth = frac_laplacian(&sq, 0.5, PowerSign::Positive)?;
    println!("(-Δ)^½ cos^2 at k=2: {}", smooth.coeff(&[2]).re);

    for s in [0.0, 0.5, 1.0] {
        let strip = analytic_norm(&cos, &StripNormParams::for_lattice(s, &lattice));
        println!("s = {s}: strip norm {strip:.6} (cosh s = {:.6}), l1 majorant {:.6}", s.cosh(), l1_exp_bound(&cos, s)?);
    }

    let lattice3 = Lattice::new(3, 8)?;
    let tg = taylor_green(lattice3)?;
    let grad_like = VectorSpectralField::new(
        (1..=3).map(|axis| partial_derivative(tg.component(0), axis)).collect::<Result<_, _>>()?,
    )?;
    let projected = leray_project(&grad_like);
    println!(
        "Taylor-Green divergence defect {:.1e}; projected gradient field defect {:.1e}",
        tg.divergence_defect(),
        projected.divergence_defect()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
