//! Empirical exponential tails against the Chernoff bound
//! exp(-n(t - ln(1 + t))).

use hypwalk::stats::chernoff_empirical;

fn main() {
    for t in [0.5, 1.0, 2.0] {
        for n in [5, 10, 20] {
            let cell = chernoff_empirical(1.0, t, n, 100_000, 11).expect("cell");
            println!(
                "t={t:3} n={n:2}: empirical {:.5} <= bound {:.5}: {}",
                cell.empirical.p,
                cell.bound,
                cell.empirical.p <= cell.bound
            );
        }
    }
}
