//! Backtracking Z of block increments, its tail, and large deviations of
//! its partial sums.

use hypwalk::stats::{backtrack_tail, bernstein_check, z_sum_deviation};
use hypwalk::walk::StepDistribution;
use hypwalk::{FreeGroup, Model};

fn main() {
    let dist = StepDistribution::uniform(FreeGroup.generators()).expect("distribution");
    let r_grid: Vec<f64> = (1..=7).map(|i| 2.0 * f64::from(i)).collect();
    for k in [5, 10, 20] {
        let rep = backtrack_tail(&FreeGroup, &dist, k, 100, &r_grid, 300, 8).expect("tail");
        let c = rep.fit.as_ref().map_or(f64::NAN, |f| f.c);
        println!("k={k:2}: E[Z] = {:.3}, E[Y] = {:.3}, tail rate c = {c:.3}", rep.mean_z, rep.mean_y);
    }
    let z = z_sum_deviation(&FreeGroup, &dist, 5, &[4, 8, 12, 16, 20], 1.5, 20_000, 9).expect("z-sum");
    println!("P(sum Z >= 1.5 n): {:?}", z.series.probabilities());
    let b = bernstein_check(&FreeGroup, &dist, 5, 0.5, &[5, 10, 20, 40], 5000, 10).expect("bernstein");
    println!("P(|sum Y - n E[Y]| >= 0.5 n): {:?}", b.series.probabilities());
}
