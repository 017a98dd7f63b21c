//! The smoothed Navier–Stokes toy: parameter certificate, feasibility in r,
//! and a Taylor–Green solve with its energy budget.

use parascale::fourier::Lattice;
use parascale::mild_solver::{PicardOptions, ResidualNorm, TimeGrid};
use parascale::problems::navier_stokes::{energy_budget, relative_l2_difference, solve_ns};
use parascale::problems::{feasibility_search, ns_certificate, taylor_green, NSParams, NsProblem};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NSParams::new(0.45, 1.3, 1.6, 0.05)?;
    let cert = ns_certificate(&params);
    println!("certificate lhs {:?} < {:?}: {}", cert.lhs, cert.bounds, cert.all_pass());
    for r in [0.5, 0.51, 0.6] {
        let search = feasibility_search(r, 40)?;
        match search.best {
            Some(best) => println!("r = {r}: feasible, e.g. rho {:.4}, a {:.4}, eps {:.1e}", best.params.rho, best.params.a, best.params.eps),
            None => println!("r = {r}: no admissible parameters among {} candidates", search.candidates),
        }
    }

    let options = PicardOptions { residual_norm: ResidualNorm::L1Exp, ..PicardOptions::default() };
    let mut finals = Vec::new();
    for n in [8, 16] {
        let problem = NsProblem::new(params, taylor_green(Lattice::new(3, n)?)?)?;
        let traj = solve_ns(&problem, TimeGrid::graded(0.05, 16, 1.0)?, &options)?;
        let budget = energy_budget(&problem, &traj)?;
        let u = problem.velocity(0.05, traj.fields().last().expect("non-empty"))?;
        println!(
            "N = {n}: {:?} in {} iterations, energy {:.8}, worst energy budget {:.2e}",
            traj.meta().status,
            traj.meta().iterations,
            u.energy(),
            budget.iter().copied().fold(0.0, f64::max)
        );
        finals.push(u);
    }
    println!("N = 8 vs N = 16 relative L2 difference {:.2e}", relative_l2_difference(&finals[0], &finals[1])?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
