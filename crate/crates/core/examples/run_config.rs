//! Run a TOML experiment config in-process, as the CLI does.
//!
//! `cargo run --example run_config -- configs/drift_free.toml drift`

use hypwalk::cli::{run_experiment, validate_config, Experiment};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "configs/drift_free.toml".into());
    let name = args.next().unwrap_or_else(|| "drift".into());
    let text = std::fs::read_to_string(&path).expect("readable config");
    let cfg = match validate_config(&text) {
        Ok(cfg) => cfg,
        Err(reasons) => {
            eprintln!("invalid config: {}", reasons.join("; "));
            std::process::exit(2);
        }
    };
    let exp = Experiment::from_name(&name).expect("known subcommand");
    let outcome = run_experiment(exp, &cfg).unwrap_or_else(|e| {
        eprintln!("{}", e.one_line());
        std::process::exit(e.exit_code());
    });
    println!("config digest {}", cfg.digest());
    print!("{}", outcome.csv);
    for c in &outcome.checks {
        println!("{}: {} ({})", c.name, if c.passed { "ok" } else { "failed" }, c.detail);
    }
}
