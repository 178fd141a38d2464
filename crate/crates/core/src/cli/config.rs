//! Experiment configuration: parsing, validation and canonical digests.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::models::{FareyGroup, FreeGroup, Model};
use crate::suite::LemmaConstants;
use crate::walk::WEIGHT_SUM_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Free,
    Farey,
}

pub const MODEL_NAMES: [&str; 2] = ["free", "farey"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedElement {
    pub element: String,
    pub weight: f64,
}

/// A validated experiment configuration. Element texts are canonical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub seed: u64,
    pub samples: usize,
    pub n_grid: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_constant: Option<f64>,
    pub output_path: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<LemmaConstants>,
    pub distribution: Vec<WeightedElement>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: Option<String>,
    seed: Option<u64>,
    samples: Option<usize>,
    n_grid: Option<Vec<usize>>,
    k: Option<usize>,
    #[serde(rename = "B")]
    b: Option<f64>,
    #[serde(rename = "L")]
    l: Option<f64>,
    r_grid: Option<Vec<f64>>,
    k_grid: Option<Vec<usize>>,
    t_grid: Option<Vec<f64>>,
    epsilon: Option<f64>,
    horizon: Option<usize>,
    center: Option<String>,
    rate_mean: Option<f64>,
    radius: Option<usize>,
    max_constant: Option<f64>,
    output_path: Option<PathBuf>,
    constants: Option<LemmaConstants>,
    #[serde(default)]
    distribution: Vec<WeightedElement>,
}

fn canonical_element(model: ModelKind, text: &str) -> Result<String, String> {
    let parsed = match model {
        ModelKind::Free => FreeGroup.parse_element(text).map(|g| g.to_string()),
        ModelKind::Farey => FareyGroup.parse_element(text).map(|g| g.to_string()),
    };
    parsed.map_err(|e| e.to_string())
}

fn strictly_ascending<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn check_grid<T: PartialOrd>(name: &str, grid: &Option<Vec<T>>, errors: &mut Vec<String>) {
    if let Some(g) = grid {
        if g.is_empty() {
            errors.push(format!("{name} is empty"));
        } else if !strictly_ascending(g) {
            errors.push(format!("{name} must be strictly ascending"));
        }
    }
}

/// Parses and validates a TOML config, reporting every violation found.
pub fn validate_config(text: &str) -> Result<ExperimentConfig, Vec<String>> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| vec![e.message().to_string()])?;
    let mut errors = Vec::new();

    let model = match raw.model.as_deref() {
        Some("free") => Some(ModelKind::Free),
        Some("farey") => Some(ModelKind::Farey),
        Some(other) => {
            errors.push(format!(
                "unknown model \"{other}\"; allowed: {}",
                MODEL_NAMES.join(", ")
            ));
            None
        }
        None => {
            errors.push("missing field model".into());
            None
        }
    };
    if raw.seed.is_none() {
        errors.push("missing field seed".into());
    }
    match raw.samples {
        None => errors.push("missing field samples".into()),
        Some(0) => errors.push("samples must be positive".into()),
        _ => {}
    }
    if raw.output_path.is_none() {
        errors.push("missing field output_path".into());
    }
    let n_grid = raw.n_grid.clone().unwrap_or_default();
    if raw.n_grid.is_none() {
        errors.push("missing field n_grid".into());
    }
    check_grid("n_grid", &raw.n_grid, &mut errors);
    check_grid("r_grid", &raw.r_grid, &mut errors);
    check_grid("k_grid", &raw.k_grid, &mut errors);
    check_grid("t_grid", &raw.t_grid, &mut errors);
    if raw.k == Some(0) || raw.k_grid.as_ref().is_some_and(|g| g.contains(&0)) {
        errors.push("k must be positive".into());
    }
    if raw.horizon == Some(0) {
        errors.push("horizon must be positive".into());
    }

    let mut distribution = Vec::with_capacity(raw.distribution.len());
    let mut total = 0.0;
    for (i, entry) in raw.distribution.iter().enumerate() {
        if !(entry.weight > 0.0) {
            errors.push(format!("distribution[{i}]: weight must be positive, got {}", entry.weight));
        }
        total += entry.weight;
        if let Some(m) = model {
            match canonical_element(m, &entry.element) {
                Ok(element) => distribution.push(WeightedElement {
                    element,
                    weight: entry.weight,
                }),
                Err(e) => errors.push(format!("distribution[{i}]: {e}")),
            }
        }
    }
    if !raw.distribution.is_empty() && (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        errors.push(format!("weights must sum to 1, got {total}"));
    }
    let center = match (model, &raw.center) {
        (Some(m), Some(c)) => match canonical_element(m, c) {
            Ok(c) => Some(c),
            Err(e) => {
                errors.push(format!("center: {e}"));
                None
            }
        },
        _ => None,
    };

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(ExperimentConfig {
        model: model.expect("checked"),
        seed: raw.seed.expect("checked"),
        samples: raw.samples.expect("checked"),
        n_grid,
        k: raw.k,
        b: raw.b,
        l: raw.l,
        r_grid: raw.r_grid,
        k_grid: raw.k_grid,
        t_grid: raw.t_grid,
        epsilon: raw.epsilon,
        horizon: raw.horizon,
        center,
        rate_mean: raw.rate_mean,
        radius: raw.radius,
        max_constant: raw.max_constant,
        output_path: raw.output_path.expect("checked"),
        constants: raw.constants,
        distribution,
    })
}

impl ExperimentConfig {
    /// Canonical TOML text: fixed key order, canonical element text.
    pub fn canonical_text(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}
