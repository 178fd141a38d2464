//! Drift of the simple random walk on F2 (exactly 1/2).

use hypwalk::stats::drift;
use hypwalk::walk::StepDistribution;
use hypwalk::{FareyGroup, FreeGroup, Model};

fn main() {
    let free = StepDistribution::uniform(FreeGroup.generators()).expect("distribution");
    for n in [100, 500, 2000] {
        let d = drift(&FreeGroup, &free, n, 2000, 1).expect("drift");
        println!("F2    n={n:5}: {:.4} [{:.4}, {:.4}]", d.rate, d.ci_low, d.ci_high);
    }
    let farey = StepDistribution::uniform(FareyGroup.generators()).expect("distribution");
    let d = drift(&FareyGroup, &farey, 400, 2000, 2).expect("drift");
    println!("Farey n=  400: {:.4} [{:.4}, {:.4}]", d.rate, d.ci_low, d.ci_high);
}
