//! Exponential decay of P(d(1, w_n) <= L n) below the drift.

use hypwalk::stats::linear_progress_decay;
use hypwalk::walk::StepDistribution;
use hypwalk::{FreeGroup, Model};

fn main() {
    let dist = StepDistribution::uniform(FreeGroup.generators()).expect("distribution");
    let grid: Vec<usize> = (1..=8).map(|i| 50 * i).collect();
    let rep = linear_progress_decay(&FreeGroup, &dist, 0.25, &grid, 50_000, 5).expect("decay");
    for (n, p) in rep.series.x.iter().zip(&rep.series.points) {
        println!("n={n:4}: p = {:.5}", p.p);
    }
    if let Some(fit) = rep.fit {
        println!("p ~ {:.3} * {:.4}^n, R2 {:.3}", fit.k, fit.c, fit.r_squared);
    }
}
