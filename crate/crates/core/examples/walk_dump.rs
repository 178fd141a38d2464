//! Sample a few walks and print them as CSV rows.

use hypwalk::walk::{sample_walk_stream, write_walk_csv, StepDistribution};
use hypwalk::{FareyGroup, Model};

fn main() -> std::io::Result<()> {
    let dist = StepDistribution::uniform(FareyGroup.generators()).expect("distribution");
    let walks: Vec<_> = (0..3).map(|i| sample_walk_stream(&FareyGroup, &dist, 8, 42, i)).collect();
    write_walk_csv::<FareyGroup, _>(&walks, &mut std::io::stdout().lock())
}
