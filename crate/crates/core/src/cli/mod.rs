//! Config-driven experiment runner behind the `hypwalk` binary.
//!
//! Every subcommand reads one TOML config and writes
//! `<output_path>/{series.csv, summary.json, manifest.json}`. The CSV and
//! summary depend only on the config text and the crate version.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

pub use config::{validate_config, ExperimentConfig, ModelKind, WeightedElement, MODEL_NAMES};

use crate::models::{FareyGroup, FreeGroup, Model};
use crate::rng::derive_seed;
use crate::stats::{self, fmt_f64, DecayFit, StatsError};
use crate::suite::{self, SuiteModel, SuiteParams};
use crate::walk::{StepDistribution, WalkError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", .0.join("; "))]
    Config(Vec<String>),
    #[error("{0}")]
    Precondition(String),
    #[error("{}", .0.join("; "))]
    Assert(Vec<String>),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Assert(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Config(_) => "config",
            CliError::Precondition(_) => "precondition",
            CliError::Assert(_) => "assert",
        }
    }

    /// One line: `error=<kind> reason=<text>`.
    pub fn one_line(&self) -> String {
        format!("error={} reason={}", self.kind(), self.to_string().replace('\n', " "))
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::Parameter(m) => CliError::Config(vec![m]),
            StatsError::Walk(WalkError::InvalidDistribution(m)) => CliError::Config(vec![m]),
            StatsError::Walk(WalkError::ZeroK) | StatsError::Walk(WalkError::OddLength(_)) => {
                CliError::Config(vec![e.to_string()])
            }
            other => CliError::Precondition(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Drift,
    LinearProgress,
    TranslationDecay,
    ShadowDecay,
    Backtrack,
    ZSum,
    Bernstein,
    Chernoff,
    Midpoint,
    Diagonal,
    Props,
    Calibrate,
}

impl Experiment {
    pub const ALL: [Experiment; 12] = [
        Experiment::Drift,
        Experiment::LinearProgress,
        Experiment::TranslationDecay,
        Experiment::ShadowDecay,
        Experiment::Backtrack,
        Experiment::ZSum,
        Experiment::Bernstein,
        Experiment::Chernoff,
        Experiment::Midpoint,
        Experiment::Diagonal,
        Experiment::Props,
        Experiment::Calibrate,
    ];

    /// The experiment with the given subcommand name.
    pub fn from_name(name: &str) -> Option<Experiment> {
        Experiment::ALL.into_iter().find(|e| e.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Drift => "drift",
            Experiment::LinearProgress => "linear-progress",
            Experiment::TranslationDecay => "translation-decay",
            Experiment::ShadowDecay => "shadow-decay",
            Experiment::Backtrack => "backtrack",
            Experiment::ZSum => "z-sum",
            Experiment::Bernstein => "bernstein",
            Experiment::Chernoff => "chernoff",
            Experiment::Midpoint => "midpoint",
            Experiment::Diagonal => "diagonal",
            Experiment::Props => "props",
            Experiment::Calibrate => "calibrate",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hypwalk", version, about = "Random walks on F2 and SL(2,Z): decay experiments and invariant suites")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// TOML experiment config.
    #[arg(short, long)]
    pub config: PathBuf,
    /// Exit with status 4 when an acceptance threshold is missed.
    #[arg(long)]
    pub assert: bool,
    /// Worker threads; outputs do not depend on this.
    #[arg(long, env = "HYPWALK_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate of escape d(1, w_n)/n. Needs: distribution, n_grid.
    #[command(after_help = "series.csv: n,rate,ci_low,ci_high,std_dev")]
    Drift(RunArgs),
    /// P(d(1, w_n) <= L n) over n_grid. Needs: distribution, n_grid, L.
    #[command(after_help = "series.csv: n,p,ci_low,ci_high")]
    LinearProgress(RunArgs),
    /// P(tau(w_n) <= B) over n_grid. Needs: distribution, n_grid, B; optional horizon (64).
    #[command(after_help = "series.csv: n,p,ci_low,ci_high,non_stabilized")]
    TranslationDecay(RunArgs),
    /// P(w_n in S_1(x, r)) over r_grid for each n. Needs: distribution, n_grid, r_grid; optional center.
    #[command(after_help = "series.csv: n,r,p,ci_low,ci_high")]
    ShadowDecay(RunArgs),
    /// Pooled tail of backtracking Z over r_grid for each k. Needs: distribution, k or k_grid, n_grid (last = blocks per walk), r_grid.
    #[command(after_help = "series.csv: k,r,p,ci_low,ci_high")]
    Backtrack(RunArgs),
    /// P(Z_1 + ... + Z_n >= L n) over n_grid. Needs: distribution, k, n_grid, L.
    #[command(after_help = "series.csv: n,p,ci_low,ci_high")]
    ZSum(RunArgs),
    /// P(|Y_1 + ... + Y_n - n mean(Y)| >= epsilon n) over n_grid. Needs: distribution, k, epsilon, n_grid.
    #[command(after_help = "series.csv: n,p,ci_low,ci_high")]
    Bernstein(RunArgs),
    /// Exponential sums against ((1+t)/e^t)^n. Needs: t_grid, n_grid; optional rate_mean (1).
    #[command(after_help = "series.csv: t,n,p,ci_low,ci_high,bound")]
    Chernoff(RunArgs),
    /// Failure frequency of w_2n in S_1(w_n, d(1,w_n)/2) over n_grid (values are 2n). Needs: distribution, n_grid.
    #[command(after_help = "series.csv: two_n,p,ci_low,ci_high")]
    Midpoint(RunArgs),
    /// P((v_n . w_n)_1 >= r - 2 delta) for mu- and reflected walks. Needs: distribution, n_grid, r_grid.
    #[command(after_help = "series.csv: n,r,p,ci_low,ci_high")]
    Diagonal(RunArgs),
    /// Randomized invariant suites; samples = instances. Optional radius (20), [constants].
    #[command(after_help = "series.csv: suite,checked,failures,skipped")]
    Props(RunArgs),
    /// Smallest admissible shadow-lemma constants. Optional radius (20), max_constant (6).
    #[command(after_help = "series.csv: constant,value")]
    Calibrate(RunArgs),
}

impl Command {
    pub fn split(&self) -> (Experiment, &RunArgs) {
        match self {
            Command::Drift(a) => (Experiment::Drift, a),
            Command::LinearProgress(a) => (Experiment::LinearProgress, a),
            Command::TranslationDecay(a) => (Experiment::TranslationDecay, a),
            Command::ShadowDecay(a) => (Experiment::ShadowDecay, a),
            Command::Backtrack(a) => (Experiment::Backtrack, a),
            Command::ZSum(a) => (Experiment::ZSum, a),
            Command::Bernstein(a) => (Experiment::Bernstein, a),
            Command::Chernoff(a) => (Experiment::Chernoff, a),
            Command::Midpoint(a) => (Experiment::Midpoint, a),
            Command::Diagonal(a) => (Experiment::Diagonal, a),
            Command::Props(a) => (Experiment::Props, a),
            Command::Calibrate(a) => (Experiment::Calibrate, a),
        }
    }
}

/// One acceptance threshold and whether it was met.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Everything an experiment produces, before it is written out.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub csv: String,
    pub result: Value,
    pub checks: Vec<Check>,
    /// Checks that fail the run even without `--assert`.
    pub hard_failure: bool,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub config_digest: String,
    pub version: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

fn require<T: Clone>(value: &Option<T>, name: &str, exp: Experiment) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| CliError::Config(vec![format!("{} needs field {name}", exp.name())]))
}

fn distribution<M: Model>(model: &M, cfg: &ExperimentConfig) -> Result<StepDistribution<M::Element>, CliError> {
    if cfg.distribution.is_empty() {
        return Err(CliError::Config(vec!["distribution is empty".into()]));
    }
    let support = cfg
        .distribution
        .iter()
        .map(|w| model.parse_element(&w.element))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(vec![e.to_string()]))?;
    let weights = cfg.distribution.iter().map(|w| w.weight).collect();
    StepDistribution::new(support, weights).map_err(|e| CliError::Config(vec![e.to_string()]))
}

fn fit_checks(label: &str, fit: &Option<DecayFit>, r2_min: f64) -> Vec<Check> {
    match fit {
        None => vec![Check::new(format!("{label}fit"), false, "fewer than 3 positive points")],
        Some(f) => vec![
            Check::new(format!("{label}slope_negative"), f.slope < 0.0, format!("slope {}", f.slope)),
            Check::new(format!("{label}r_squared"), f.r_squared >= r2_min, format!("R2 {} (need >= {r2_min})", f.r_squared)),
            Check::new(format!("{label}c_below_one"), f.c < 1.0, format!("c {}", f.c)),
        ],
    }
}

fn within_factor_two(label: &str, cs: &[f64]) -> Check {
    let lo = cs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // decay rates are compared as -ln c, the exponent per unit
    let (rlo, rhi) = (-hi.ln(), -lo.ln());
    let ok = cs.len() >= 2 && rlo > 0.0 && rhi <= 2.0 * rlo && hi <= 2.0 * lo;
    Check::new(label, ok, format!("c in [{lo}, {hi}]"))
}

fn rows_csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = String::new();
    s.push_str(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn series_rows(prefix: &[String], series: &stats::FrequencySeries) -> Vec<Vec<String>> {
    series
        .x
        .iter()
        .zip(&series.points)
        .map(|(&x, p)| {
            let mut r = prefix.to_vec();
            r.push((x as u64).to_string());
            r.extend([fmt_f64(p.p), fmt_f64(p.ci_low), fmt_f64(p.ci_high)]);
            r
        })
        .collect()
}

fn tail_rows(prefix: &[String], tail: &stats::TailEstimate) -> Vec<Vec<String>> {
    tail.rows()
        .into_iter()
        .map(|row| {
            let mut r = prefix.to_vec();
            r.extend(row.iter().map(|&v| fmt_f64(v)));
            r
        })
        .collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn decay_outcome(header: &str, report: &stats::DecayReport, r2_min: f64, extra: Vec<Check>) -> Outcome {
    let mut checks = fit_checks("", &report.fit, r2_min);
    checks.extend(extra);
    Outcome {
        csv: rows_csv(header, series_rows(&[], &report.series)),
        result: to_value(report),
        checks,
        hard_failure: false,
    }
}

/// Runs one experiment in memory.
pub fn run_experiment(exp: Experiment, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.model {
        ModelKind::Free => dispatch(&FreeGroup, exp, cfg),
        ModelKind::Farey => dispatch(&FareyGroup, exp, cfg),
    }
}

fn dispatch<M: SuiteModel>(model: &M, exp: Experiment, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (seed, samples, grid) = (cfg.seed, cfg.samples, &cfg.n_grid);
    match exp {
        Experiment::Drift => {
            let dist = distribution(model, cfg)?;
            let max_step = dist.support().iter().map(|g| model.norm(g)).fold(0.0, f64::max);
            let estimates = grid
                .iter()
                .map(|&n| stats::drift(model, &dist, n, samples, seed))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = estimates.iter().map(|e| {
                vec![e.n.to_string(), fmt_f64(e.rate), fmt_f64(e.ci_low), fmt_f64(e.ci_high), fmt_f64(e.std_dev)]
            });
            let bounded = estimates.iter().all(|e| e.rate <= max_step);
            Ok(Outcome {
                csv: rows_csv("n,rate,ci_low,ci_high,std_dev", rows),
                result: json!({ "estimates": estimates, "max_step": max_step }),
                checks: vec![Check::new("drift_at_most_max_step", bounded, format!("max step {max_step}"))],
                hard_failure: false,
            })
        }
        Experiment::LinearProgress => {
            let dist = distribution(model, cfg)?;
            let l = require(&cfg.l, "L", exp)?;
            let rep = stats::linear_progress_decay(model, &dist, l, grid, samples, seed)?;
            Ok(decay_outcome("n,p,ci_low,ci_high", &rep, 0.9, vec![]))
        }
        Experiment::TranslationDecay => {
            let dist = distribution(model, cfg)?;
            let b = require(&cfg.b, "B", exp)?;
            let horizon = cfg.horizon.unwrap_or(64);
            let rep = stats::translation_decay(model, &dist, b, grid, samples, seed, horizon)?;
            let rows = series_rows(&[], &rep.series)
                .into_iter()
                .zip(&rep.non_stabilized)
                .map(|(mut r, ns)| {
                    r.push(ns.to_string());
                    r
                });
            let mut checks = fit_checks("", &rep.fit, 0.9);
            checks.push(Check::new(
                "strictly_decreasing",
                rep.series.strictly_decreasing(),
                format!("{:?}", rep.series.probabilities()),
            ));
            Ok(Outcome {
                csv: rows_csv("n,p,ci_low,ci_high,non_stabilized", rows),
                result: to_value(&rep),
                checks,
                hard_failure: false,
            })
        }
        Experiment::ShadowDecay => {
            let dist = distribution(model, cfg)?;
            let r_grid = require(&cfg.r_grid, "r_grid", exp)?;
            let center = match &cfg.center {
                Some(c) => model.parse_element(c).map_err(|e| CliError::Config(vec![e.to_string()]))?,
                None => stats::shadow_center(model, &dist, r_grid.last().copied().unwrap_or(0.0) + 6.0)?,
            };
            let sweep = stats::shadow_measure_sweep(model, &dist, grid, &center, &r_grid, samples, seed)?;
            let mut rows = Vec::new();
            let mut checks = Vec::new();
            let mut cs = Vec::new();
            for rep in &sweep.reports {
                rows.extend(tail_rows(&[rep.n.to_string()], &rep.tail));
                checks.extend(fit_checks(&format!("n{}_", rep.n), &rep.fit, 0.9));
                if let Some(f) = &rep.fit {
                    cs.push(f.c);
                }
            }
            if sweep.reports.len() >= 2 {
                checks.push(within_factor_two("c_uniform_in_n", &cs));
            }
            Ok(Outcome {
                csv: rows_csv("n,r,p,ci_low,ci_high", rows),
                result: to_value(&sweep),
                checks,
                hard_failure: false,
            })
        }
        Experiment::Backtrack => {
            let dist = distribution(model, cfg)?;
            let r_grid = require(&cfg.r_grid, "r_grid", exp)?;
            let ks = match (&cfg.k_grid, cfg.k) {
                (Some(g), _) => g.clone(),
                (None, Some(k)) => vec![k],
                (None, None) => return Err(CliError::Config(vec!["backtrack needs field k or k_grid".into()])),
            };
            let blocks = *grid.last().expect("validated non-empty");
            let reports = ks
                .iter()
                .map(|&k| stats::backtrack_tail(model, &dist, k, blocks, &r_grid, samples, seed))
                .collect::<Result<Vec<_>, _>>()?;
            let mut rows = Vec::new();
            let mut checks = Vec::new();
            let mut cs = Vec::new();
            for rep in &reports {
                rows.extend(tail_rows(&[rep.k.to_string()], &rep.tail));
                checks.extend(fit_checks(&format!("k{}_", rep.k), &rep.fit, 0.0));
                if let Some(f) = &rep.fit {
                    cs.push(f.c);
                }
            }
            if reports.len() >= 2 {
                checks.push(within_factor_two("c_uniform_in_k", &cs));
            }
            let smallest_k = reports.iter().find(|r| r.mean_y > r.mean_z).map(|r| r.k);
            Ok(Outcome {
                csv: rows_csv("k,r,p,ci_low,ci_high", rows),
                result: json!({ "reports": reports, "smallest_k_with_y_above_z": smallest_k }),
                checks,
                hard_failure: false,
            })
        }
        Experiment::ZSum => {
            let dist = distribution(model, cfg)?;
            let k = require(&cfg.k, "k", exp)?;
            let l = require(&cfg.l, "L", exp)?;
            let rep = stats::z_sum_deviation(model, &dist, k, grid, l, samples, seed)?;
            Ok(decay_outcome("n,p,ci_low,ci_high", &rep, 0.85, vec![]))
        }
        Experiment::Bernstein => {
            let dist = distribution(model, cfg)?;
            let k = require(&cfg.k, "k", exp)?;
            let eps = require(&cfg.epsilon, "epsilon", exp)?;
            let rep = stats::bernstein_check(model, &dist, k, eps, grid, samples, seed)?;
            let mut checks = fit_checks("", &rep.fit, 0.85);
            checks.retain(|c| c.name != "r_squared");
            Ok(Outcome {
                csv: rows_csv("n,p,ci_low,ci_high", series_rows(&[], &rep.series)),
                result: to_value(&rep),
                checks,
                hard_failure: false,
            })
        }
        Experiment::Chernoff => {
            let t_grid = require(&cfg.t_grid, "t_grid", exp)?;
            let rate_mean = cfg.rate_mean.unwrap_or(1.0);
            let mut cells = Vec::new();
            for (i, &t) in t_grid.iter().enumerate() {
                for (j, &n) in grid.iter().enumerate() {
                    let n = u32::try_from(n).map_err(|_| CliError::Config(vec![format!("n = {n} is too large")]))?;
                    let cell_seed = derive_seed(seed, (i * grid.len() + j) as u64);
                    cells.push(stats::chernoff_empirical(rate_mean, t, n, samples, cell_seed)?);
                }
            }
            let rows = cells.iter().map(|c| {
                vec![
                    fmt_f64(c.t),
                    c.n.to_string(),
                    fmt_f64(c.empirical.p),
                    fmt_f64(c.empirical.ci_low),
                    fmt_f64(c.empirical.ci_high),
                    fmt_f64(c.bound),
                ]
            });
            let checks = cells
                .iter()
                .map(|c| {
                    Check::new(
                        format!("t{}_n{}", c.t, c.n),
                        c.empirical.p <= c.bound,
                        format!("empirical {} bound {}", c.empirical.p, c.bound),
                    )
                })
                .collect();
            Ok(Outcome {
                csv: rows_csv("t,n,p,ci_low,ci_high,bound", rows),
                result: json!({ "cells": cells, "rate_mean": rate_mean }),
                checks,
                hard_failure: false,
            })
        }
        Experiment::Midpoint => {
            let dist = distribution(model, cfg)?;
            let rep = stats::midpoint_decay(model, &dist, grid, samples, seed)?;
            let mut checks = fit_checks("", &rep.fit, 0.0);
            checks.retain(|c| c.name == "slope_negative" || c.name == "fit");
            checks.push(Check::new(
                "strictly_decreasing",
                rep.series.strictly_decreasing(),
                format!("{:?}", rep.series.probabilities()),
            ));
            Ok(Outcome {
                csv: rows_csv("two_n,p,ci_low,ci_high", series_rows(&[], &rep.series)),
                result: to_value(&rep),
                checks,
                hard_failure: false,
            })
        }
        Experiment::Diagonal => {
            let dist = distribution(model, cfg)?;
            let r_grid = require(&cfg.r_grid, "r_grid", exp)?;
            crate::walk::check_non_elementary(model, &dist).map_err(StatsError::from)?;
            let mut rows = Vec::new();
            let mut checks = Vec::new();
            let mut reports = Vec::new();
            for &n in grid {
                let rep = stats::diagonal_decay(model, &dist, n, &r_grid, samples, seed)?;
                rows.extend(tail_rows(&[n.to_string()], &rep.tail));
                checks.extend(fit_checks(&format!("n{n}_"), &rep.fit, 0.9));
                reports.push(json!({ "n": n, "report": rep }));
            }
            Ok(Outcome {
                csv: rows_csv("n,r,p,ci_low,ci_high", rows),
                result: json!({ "reports": reports }),
                checks,
                hard_failure: false,
            })
        }
        Experiment::Props => {
            let params = SuiteParams {
                instances: samples,
                radius: cfg.radius.unwrap_or(20),
                seed,
            };
            let constants = cfg.constants.unwrap_or_else(|| model.default_constants());
            let rep = suite::run_props(model, &constants, params);
            let rows = rep.suites.iter().map(|s| {
                vec![s.name.clone(), s.checked.to_string(), s.failures.to_string(), s.skipped.to_string()]
            });
            let checks = rep
                .suites
                .iter()
                .map(|s| {
                    Check::new(
                        s.name.clone(),
                        s.passed(),
                        s.counterexample.clone().unwrap_or_else(|| format!("{} checked", s.checked)),
                    )
                })
                .collect();
            Ok(Outcome {
                csv: rows_csv("suite,checked,failures,skipped", rows),
                result: to_value(&rep),
                checks,
                hard_failure: true,
            })
        }
        Experiment::Calibrate => {
            let params = SuiteParams {
                instances: samples,
                radius: cfg.radius.unwrap_or(20),
                seed,
            };
            let cal = suite::calibrate(model, params, cfg.max_constant.unwrap_or(6.0));
            let c = cal.constants;
            let rows = [
                ("k2", c.k2),
                ("k3", c.k3),
                ("k4", c.k4),
                ("k5", c.k5),
                ("k9", c.k9),
                ("delta_configured", cal.configured_delta),
                ("delta_estimated", cal.estimated_delta),
            ]
            .map(|(name, v)| vec![name.to_string(), fmt_f64(v)]);
            let checks = vec![Check::new("complete", cal.complete(), "every constant found on the grid")];
            Ok(Outcome {
                csv: rows_csv("constant,value", rows),
                result: to_value(&cal),
                checks,
                hard_failure: false,
            })
        }
    }
}

/// The JSON summary: result, checks, seed and digest. No wall time, so it
/// is reproducible byte for byte.
pub fn summary_json(exp: Experiment, cfg: &ExperimentConfig, outcome: &Outcome) -> String {
    let v = json!({
        "subcommand": exp.name(),
        "model": cfg.model,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "config_digest": cfg.digest(),
        "version": VERSION,
        "passed": outcome.passed(),
        "checks": outcome.checks,
        "result": outcome.result,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Runs the experiment and writes its outputs; the error carries the exit
/// status.
pub fn execute(exp: Experiment, cfg: &ExperimentConfig, assert: bool, threads: Option<usize>) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let outcome = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| CliError::Config(vec![e.to_string()]))?
            .install(|| run_experiment(exp, cfg))?,
        None => run_experiment(exp, cfg)?,
    };
    let dir = &cfg.output_path;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("series.csv"), &outcome.csv)?;
    fs::write(dir.join("summary.json"), summary_json(exp, cfg, &outcome))?;
    let manifest = RunManifest {
        config_digest: cfg.digest(),
        version: VERSION.to_string(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        outputs: vec!["series.csv".into(), "summary.json".into()],
    };
    let mut m = serde_json::to_string_pretty(&manifest).expect("serializable");
    m.push('\n');
    fs::write(dir.join("manifest.json"), m)?;
    if (assert || outcome.hard_failure) && !outcome.passed() {
        return Err(CliError::Assert(outcome.failed_checks()));
    }
    Ok(outcome)
}

/// Entry point used by the binary; returns the process exit status.
pub fn main_with(cli: Cli) -> i32 {
    let (exp, args) = cli.command.split();
    let result = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(vec![format!("cannot read {}: {e}", args.config.display())]))
        .and_then(|text| validate_config(&text).map_err(CliError::Config))
        .and_then(|cfg| execute(exp, &cfg, args.assert, args.threads).map(|o| (cfg, o)));
    match result {
        Ok((cfg, outcome)) => {
            let mut line = String::new();
            let _ = write!(
                line,
                "ok subcommand={} output={} passed={}",
                exp.name(),
                cfg.output_path.display(),
                outcome.passed()
            );
            println!("{line}");
            0
        }
        Err(e) => {
            eprintln!("{}", e.one_line());
            e.exit_code()
        }
    }
}
