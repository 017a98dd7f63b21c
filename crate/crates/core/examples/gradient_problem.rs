//! A gradient nonlinearity `u_t = Δu + f(∇u)` solved around the heat flow of
//! `cos x`, for each of the built-in maps `f`.

use num_complex::Complex64;
use parascale::fourier::{Lattice, SpectralField};
use parascale::mild_solver::{picard_solve, PicardOptions, TimeGrid};
use parascale::problems::{subcritical_check, GradientMap, GradientParams, GradientProblem};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lattice = Lattice::new(1, 32)?;
    let half = Complex64::new(0.5, 0.0);
    let u_hat = SpectralField::real_from_modes(lattice, &[([1, 0, 0], half), ([-1, 0, 0], half)])?;

    for map in [GradientMap::SqrtModulus, GradientMap::Identity, GradientMap::PowerModulus(1.5)] {
        let params = GradientParams::new(map);
        let check = subcritical_check(1, params.p, params.q);
        let problem = GradientProblem::new(params, u_hat.clone())?;
        let traj = picard_solve(&problem, &SpectralField::zeros(lattice, true), TimeGrid::graded(0.1, 64, 2.0)?, &PicardOptions::default())?;
        let end = traj.fields().last().expect("non-empty");
        let u = problem.full_solution(0.1, end)?;
        println!(
            "{map:?}: subcritical {} (margin {}), {:?} after {} iterations, u(0.1) mean {:.6}",
            check.subcritical,
            check.margin,
            traj.meta().status,
            traj.meta().iterations,
            u.coeff(&[0]).re
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
