//! Calibrate the shadow-lemma constants, then rerun every invariant suite
//! at them on fresh instances.

use hypwalk::suite::{calibrate, run_props, SuiteParams};
use hypwalk::{FareyGroup, FreeGroup};

fn main() {
    let params = SuiteParams { instances: 3000, radius: 20, seed: 1 };
    let cal = calibrate(&FreeGroup, params, 6.0);
    println!("F2 calibrated constants: {:?}", cal.constants);
    let rep = run_props(&FreeGroup, &cal.constants, SuiteParams { seed: 2, ..params });
    for s in &rep.suites {
        println!("  {:40} {:5} checked, {} failures", s.name, s.checked, s.failures);
    }

    let farey = run_props(&FareyGroup, &hypwalk::suite::SuiteModel::default_constants(&FareyGroup), params);
    let failing: Vec<_> = farey.suites.iter().filter(|s| !s.passed()).map(|s| &s.name).collect();
    println!("Farey suites at delta {}: failing {:?}", farey.delta, failing);
}
