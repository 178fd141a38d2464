//! Hitting measure of shadows S_1(x, r) decays exponentially in r.

use hypwalk::stats::{shadow_center, shadow_measure_sweep};
use hypwalk::walk::StepDistribution;
use hypwalk::{FreeGroup, Model};

fn main() {
    let dist = StepDistribution::uniform(FreeGroup.generators()).expect("distribution");
    let center = shadow_center(&FreeGroup, &dist, 20.0).expect("center");
    let r_grid: Vec<f64> = (2..=14).map(f64::from).collect();
    let sweep = shadow_measure_sweep(&FreeGroup, &dist, &[50, 100], &center, &r_grid, 50_000, 7)
        .expect("sweep");
    for rep in &sweep.reports {
        let fit = rep.fit.as_ref().expect("fit");
        println!("n={}: center {}, c = {:.4}, R2 {:.4}", rep.n, rep.center, fit.c, fit.r_squared);
    }
    println!("change between successive n: {:?}", sweep.convergence);
}
