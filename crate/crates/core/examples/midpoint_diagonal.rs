//! Midpoint shadow failures and the diagonal Gromov product of two
//! independent walks.

use hypwalk::stats::{diagonal_decay, midpoint_decay};
use hypwalk::walk::StepDistribution;
use hypwalk::{FreeGroup, FreeWord, Model};

fn main() {
    let m = FreeGroup;
    let gens = m.generators();
    // a slow walk: mostly a and A, so the midpoint event is not negligible
    let weights: Vec<f64> = gens
        .iter()
        .map(|g| if g.to_string().eq_ignore_ascii_case("a") { 0.49 } else { 0.01 })
        .collect();
    let slow = StepDistribution::new(gens.clone(), weights).expect("distribution");
    let mid = midpoint_decay(&m, &slow, &[100, 200, 400], 50_000, 12).expect("midpoint");
    println!("P(w_2n outside the midpoint shadow): {:?}", mid.series.probabilities());

    let uniform = StepDistribution::<FreeWord>::uniform(gens).expect("distribution");
    let r_grid: Vec<f64> = (1..=10).map(f64::from).collect();
    let diag = diagonal_decay(&m, &uniform, 200, &r_grid, 50_000, 14).expect("diagonal");
    let fit = diag.fit.expect("fit");
    println!("P((v_n . w_n)_1 >= r): {:?}", diag.tail.probabilities);
    println!("rate c = {:.4}, R2 {:.4}", fit.c, fit.r_squared);
}
