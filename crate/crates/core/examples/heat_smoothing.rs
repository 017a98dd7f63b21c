//! The heat semigroup gains analyticity: the strip width grows by δ at the
//! price of a Gaussian factor, and Sobolev norms decay like `t^{-(a-r)/2}`.

use parascale::fourier::Lattice;
use parascale::semigroup::{
    borderline_field, gaussian_smoothing_ratio, heat_apply, random_real_field, sobolev_decay_fit, SmoothingNorm,
};
use parascale::stats::geomspace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lattice = Lattice::new(1, 64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_real_field(lattice, &mut rng);

    let v = heat_apply(&u, 0.1)?;
    println!("energy before {:.6}, after t=0.1 {:.6}", u.energy(), v.energy());

    println!("{:>8} {:>8} {:>12} {:>12}", "t", "delta", "l1 ratio", "strip ratio");
    for t in [0.01, 0.1, 1.0] {
        for delta in [0.05, 0.5] {
            let l1 = gaussian_smoothing_ratio(&u, 0.1, delta, t, SmoothingNorm::L1Exp)?;
            let strip = gaussian_smoothing_ratio(&u, 0.1, delta, t, SmoothingNorm::Strip)?;
            println!("{t:>8} {delta:>8} {l1:>12.6} {strip:>12.6}");
        }
    }

    let r = 0.5;
    let rough = borderline_field(Lattice::new(1, 2048)?, r);
    let times = geomspace(1e-4, 1e-2, 9);
    for gap in [0.5, 1.0, 2.0] {
        let fit = sobolev_decay_fit(&rough, r + gap, r, &times)?;
        println!("a - r = {gap}: slope {:.4}, expected {:.4}", fit.slope, -gap / 2.0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
