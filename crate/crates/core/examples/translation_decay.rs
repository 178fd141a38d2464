//! The walk on SL(2,Z) leaves the non-Anosov set exponentially fast.

use hypwalk::stats::translation_decay;
use hypwalk::walk::StepDistribution;
use hypwalk::{FareyGroup, Model};

fn main() {
    let dist = StepDistribution::uniform(FareyGroup.generators()).expect("distribution");
    let grid: Vec<usize> = (1..=8).map(|i| 10 * i).collect();
    let rep = translation_decay(&FareyGroup, &dist, 0.0, &grid, 10_000, 6, 64).expect("decay");
    for (n, p) in rep.series.x.iter().zip(&rep.series.points) {
        println!("n={n:3}: P(not pseudo-Anosov) = {:.4}", p.p);
    }
    if let Some(fit) = rep.fit {
        println!("rate c = {:.4}, R2 {:.4}", fit.c, fit.r_squared);
    }
}
