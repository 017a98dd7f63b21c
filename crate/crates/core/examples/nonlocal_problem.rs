//! The nonlocal problem: with nλ < 1 the solver reproduces the separated
//! closed-form solution; at nλ = 1 the zero-mode integral diverges like
//! `log|log ε|` and no solution exists.

use parascale::fourier::SpectralField;
use parascale::mild_solver::{picard_solve, PicardOptions, TimeGrid};
use parascale::problems::nonlocal::{compare_with_closed_form, default_kappa};
use parascale::problems::{divergence_demo, NonlocalParams, NonlocalProblem};
use parascale::stats::geomspace;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NonlocalParams::new(1, 0.5, 64)?;
    let problem = NonlocalProblem::new(params)?;
    let grid = TimeGrid::graded(0.5, 256, default_kappa(params.chi()))?;
    let template = SpectralField::zeros(*problem.u_hat.lattice(), true);
    let traj = picard_solve(&problem, &template, grid, &PicardOptions::default())?;
    println!("chi = {}, {:?} in {} iterations", params.chi(), traj.meta().status, traj.meta().iterations);

    let cmp = compare_with_closed_form(&problem, &traj, 1e-11)?;
    println!("relative error, modes k != 0: {:.2e}", cmp.max_rel_nonzero);
    println!("relative error, mode 0:       {:.2e}", cmp.max_rel_mode0);
    for &(t, got, want) in cmp.mode0.iter().step_by(64) {
        println!("  t = {t:.3e}: solver {got:.8e}, closed form {want:.8e}");
    }

    let demo = divergence_demo(&geomspace(1e-3, 1e-12, 28), 4096)?;
    println!("n = lambda = 1: slope against log(-log eps) {:.4}, R^2 {:.5}", demo.fit.slope, demo.fit.r_squared);
    for row in demo.rows.iter().step_by(3) {
        let flag = if row.truncation_limited { " (truncation-limited)" } else { "" };
        println!("  eps = {:.1e}: integral {:.5}{flag}", row.eps, row.integral);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
