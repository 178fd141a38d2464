//! Monte Carlo experiments over walk samples.
//!
//! Sample `i` always uses stream `i` of the experiment seed. Event counts are
//! integers merged with an associative sum, and real-valued pools are
//! collected in sample order, so results are identical for any thread count.

use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_ascending, empirical_tail, fit_exponential_decay, DecayFit,
    DriftEstimate, FrequencySeries, Proportion, StatsError, TailEstimate,
};
use crate::hypgeom::gromov_product;
use crate::models::Model;
use crate::rng::{derive_seed, stream_rng};
use crate::walk::{
    check_non_elementary, midpoint_holds, par_samples, reflected, sample_iterated,
    StepDistribution, Walker,
};

/// An event frequency series and its log-linear fit, when one exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub series: FrequencySeries,
    pub fit: Option<DecayFit>,
}

impl DecayReport {
    fn new(series: FrequencySeries) -> Self {
        let fit = fit_exponential_decay(&series.points()).ok();
        DecayReport { series, fit }
    }
}

/// A tail over thresholds and its log-linear fit, when one exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub tail: TailEstimate,
    pub fit: Option<DecayFit>,
}

impl TailReport {
    fn new(tail: TailEstimate) -> Self {
        let fit = fit_exponential_decay(&tail.points()).ok();
        TailReport { tail, fit }
    }
}

fn check_grid(name: &str, grid: &[usize]) -> Result<(), StatsError> {
    if grid.is_empty() {
        return Err(StatsError::Parameter(format!("{name} is empty")));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(StatsError::Parameter(format!("{name} must be strictly ascending")));
    }
    Ok(())
}

fn check_samples(samples: usize, min: usize) -> Result<(), StatsError> {
    if samples < min {
        return Err(StatsError::Parameter(format!("samples must be at least {min}")));
    }
    Ok(())
}

/// Counts, for each slot, the samples whose indicator vector is set there.
fn count_events<F>(samples: usize, slots: usize, f: F) -> Vec<u64>
where
    F: Fn(u64) -> Vec<bool> + Sync + Send,
{
    (0..samples as u64)
        .into_par_iter()
        .map(|i| f(i).into_iter().map(u64::from).collect::<Vec<u64>>())
        .reduce(
            || vec![0; slots],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn series_from_counts(x: &[usize], counts: &[u64], trials: usize) -> FrequencySeries {
    FrequencySeries {
        x: x.iter().map(|&n| n as f64).collect(),
        points: counts
            .iter()
            .map(|&c| Proportion::new(c, trials as u64, super::DEFAULT_CONFIDENCE))
            .collect(),
    }
}

/// Mean of `d(1, w_n)/n` over independent walks.
pub fn drift<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<DriftEstimate, StatsError> {
    if n == 0 {
        return Err(StatsError::Parameter("n must be at least 1".into()));
    }
    check_samples(samples, 2)?;
    let rates = par_samples(samples, |i| {
        let mut w = Walker::new(model, dist, seed, i);
        w.advance(n);
        model.norm(w.location()) / n as f64
    });
    Ok(DriftEstimate::from_rates(&rates, n))
}

/// `P̂(d(1, w_n) ≤ L n)` for each `n` in the grid.
pub fn linear_progress_decay<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    l: f64,
    n_grid: &[usize],
    samples: usize,
    seed: u64,
) -> Result<DecayReport, StatsError> {
    check_grid("n_grid", n_grid)?;
    check_samples(samples, 1)?;
    let counts = count_events(samples, n_grid.len(), |i| {
        let mut w = Walker::new(model, dist, seed, i);
        n_grid
            .iter()
            .map(|&n| {
                w.advance_to(n);
                model.norm(w.location()) <= l * n as f64
            })
            .collect()
    });
    Ok(DecayReport::new(series_from_counts(n_grid, &counts, samples)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationDecayReport {
    pub series: FrequencySeries,
    pub fit: Option<DecayFit>,
    /// Per `n`, how many samples had a non-stabilized translation length
    /// (already counted as `τ ≤ B`).
    pub non_stabilized: Vec<u64>,
    /// `true` when `B = 0` and the exact loxodromic classifier was used.
    pub classifier: bool,
}

/// `P̂(τ(w_n) ≤ B)` for each `n` in the grid.
///
/// With `B = 0` the event is "`w_n` is not loxodromic", decided exactly by
/// the model (trace for the Farey model). Otherwise the translation length
/// is computed with the given horizon and non-stabilized values count as
/// `≤ B`.
#[allow(clippy::too_many_arguments)]
pub fn translation_decay<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    b: f64,
    n_grid: &[usize],
    samples: usize,
    seed: u64,
    horizon: usize,
) -> Result<TranslationDecayReport, StatsError> {
    if !(b >= 0.0) {
        return Err(StatsError::Parameter(format!("B must be non-negative, got {b}")));
    }
    check_grid("n_grid", n_grid)?;
    check_samples(samples, 1)?;
    check_non_elementary(model, dist)?;
    let slots = n_grid.len();
    let classifier = b == 0.0;
    if !classifier && horizon == 0 {
        return Err(StatsError::Parameter("horizon must be at least 1".into()));
    }
    let counts = count_events(samples, 2 * slots, |i| {
        let mut w = Walker::new(model, dist, seed, i);
        let mut out = vec![false; 2 * slots];
        for (j, &n) in n_grid.iter().enumerate() {
            w.advance_to(n);
            if classifier {
                out[j] = !model.is_loxodromic(w.location());
            } else {
                let t = model
                    .translation_length(w.location(), horizon)
                    .expect("horizon checked non-zero");
                out[j] = !t.stabilized || t.value <= b;
                out[slots + j] = !t.stabilized;
            }
        }
        out
    });
    let series = series_from_counts(n_grid, &counts[..slots], samples);
    let fit = fit_exponential_decay(&series.points()).ok();
    Ok(TranslationDecayReport {
        series,
        fit,
        non_stabilized: counts[slots..].to_vec(),
        classifier,
    })
}

/// A loxodromic element of the walk's semigroup raised to a power with
/// `d(1, x) ≥ distance`.
pub fn shadow_center<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    distance: f64,
) -> Result<M::Element, StatsError> {
    let (g, _) = check_non_elementary(model, dist)?;
    let mut x = g.clone();
    for _ in 0..100_000 {
        if model.norm(&x) >= distance {
            return Ok(x);
        }
        model.multiply_assign(&mut x, &g);
    }
    Err(StatsError::Parameter(format!(
        "no power of {g} reaches distance {distance}"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowReport {
    pub n: usize,
    pub center: String,
    pub center_distance: f64,
    pub tail: TailEstimate,
    pub fit: Option<DecayFit>,
    /// Radii `r > d(1, x) + 2δ`, whose shadows are empty.
    pub empty_radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowSweep {
    pub reports: Vec<ShadowReport>,
    /// `max_r |p_{n_j}(r) − p_{n_{j−1}}(r)|` between successive walk lengths.
    pub convergence: Vec<f64>,
}

impl ShadowSweep {
    /// The largest-`n` report, which stands in for the harmonic measure.
    pub fn harmonic(&self) -> &ShadowReport {
        self.reports.last().expect("non-empty sweep")
    }
}

/// `P̂(w_n ∈ S_1(x, r))` for each `r`.
#[allow(clippy::too_many_arguments)]
pub fn shadow_measure_decay<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    n: usize,
    center: &M::Element,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ShadowReport, StatsError> {
    let sweep = shadow_measure_sweep(model, dist, &[n], center, r_grid, samples, seed)?;
    Ok(sweep.reports.into_iter().next().expect("one report"))
}

/// Shadow measures for several walk lengths from the same walks.
#[allow(clippy::too_many_arguments)]
pub fn shadow_measure_sweep<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    n_grid: &[usize],
    center: &M::Element,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ShadowSweep, StatsError> {
    check_grid("n_grid", n_grid)?;
    check_ascending(r_grid)?;
    check_samples(samples, 1)?;
    let one = model.identity();
    let products: Vec<Vec<f64>> = par_samples(samples, |i| {
        let mut w = Walker::new(model, dist, seed, i);
        n_grid
            .iter()
            .map(|&n| {
                w.advance_to(n);
                gromov_product(model, &one, center, w.location())
            })
            .collect()
    });
    let center_distance = model.norm(center);
    let limit = center_distance + 2.0 * model.descriptor().delta;
    let empty_radii: Vec<f64> = r_grid.iter().copied().filter(|&r| r > limit).collect();
    let mut reports = Vec::with_capacity(n_grid.len());
    for (j, &n) in n_grid.iter().enumerate() {
        let values: Vec<f64> = products.iter().map(|p| p[j]).collect();
        let tail = empirical_tail(&values, r_grid, super::DEFAULT_CONFIDENCE)?;
        let fit = fit_exponential_decay(&tail.points()).ok();
        reports.push(ShadowReport {
            n,
            center: center.to_string(),
            center_distance,
            tail,
            fit,
            empty_radii: empty_radii.clone(),
        });
    }
    let convergence = reports
        .windows(2)
        .map(|w| {
            w[0].tail
                .probabilities
                .iter()
                .zip(&w[1].tail.probabilities)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(ShadowSweep {
        reports,
        convergence,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktrackReport {
    pub k: usize,
    pub increments: usize,
    pub mean_z: f64,
    pub mean_y: f64,
    pub tail: TailEstimate,
    pub fit: Option<DecayFit>,
}

/// Pooled tail of the backtracking `Z^k_i` over `samples` walks of `n`
/// blocks each.
#[allow(clippy::too_many_arguments)]
pub fn backtrack_tail<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    k: usize,
    n: usize,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<BacktrackReport, StatsError> {
    check_ascending(r_grid)?;
    check_samples(samples, 1)?;
    if n == 0 {
        return Err(StatsError::Parameter("n must be at least 1".into()));
    }
    let blocks = par_samples(samples, |i| sample_iterated(model, dist, k, n, seed, i));
    let mut z = Vec::with_capacity(samples * n);
    let mut y_sum = 0.0;
    for b in blocks {
        let b = b?;
        y_sum += b.y.iter().sum::<f64>();
        z.extend(b.z);
    }
    let mean_z = z.iter().sum::<f64>() / z.len() as f64;
    let tail = empirical_tail(&z, r_grid, super::DEFAULT_CONFIDENCE)?;
    let fit = fit_exponential_decay(&tail.points()).ok();
    Ok(BacktrackReport {
        k,
        increments: z.len(),
        mean_z,
        mean_y: y_sum / z.len() as f64,
        tail,
        fit,
    })
}

/// `P̂(Z^k_1 + … + Z^k_n ≥ L n)` for each `n` in the grid.
#[allow(clippy::too_many_arguments)]
pub fn z_sum_deviation<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    k: usize,
    n_grid: &[usize],
    l: f64,
    samples: usize,
    seed: u64,
) -> Result<DecayReport, StatsError> {
    check_grid("n_grid", n_grid)?;
    check_samples(samples, 1)?;
    if k == 0 {
        return Err(crate::walk::WalkError::ZeroK.into());
    }
    let n_max = *n_grid.last().expect("non-empty grid");
    let counts = count_events(samples, n_grid.len(), |i| {
        let dec = sample_iterated(model, dist, k, n_max, seed, i).expect("k checked");
        let mut partial = Vec::with_capacity(n_max + 1);
        partial.push(0.0);
        for z in &dec.z {
            partial.push(partial.last().unwrap() + z);
        }
        n_grid.iter().map(|&n| partial[n] >= l * n as f64).collect()
    });
    Ok(DecayReport::new(series_from_counts(n_grid, &counts, samples)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinReport {
    pub series: FrequencySeries,
    pub fit: Option<DecayFit>,
    /// Pooled mean of `Y^k_i`, standing in for its expectation.
    pub mean_y: f64,
    pub epsilon: f64,
}

/// `P̂(|Y^k_1 + … + Y^k_n − n Ȳ| ≥ ε n)` for each `n` in the grid.
#[allow(clippy::too_many_arguments)]
pub fn bernstein_check<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    k: usize,
    epsilon: f64,
    n_grid: &[usize],
    samples: usize,
    seed: u64,
) -> Result<BernsteinReport, StatsError> {
    if !(epsilon > 0.0) {
        return Err(StatsError::Parameter(format!("epsilon must be positive, got {epsilon}")));
    }
    check_grid("n_grid", n_grid)?;
    check_samples(samples, 1)?;
    let n_max = *n_grid.last().expect("non-empty grid");
    let partials: Vec<Vec<f64>> = par_samples(samples, |i| {
        let dec = sample_iterated(model, dist, k, n_max, seed, i)?;
        let mut partial = Vec::with_capacity(n_max + 1);
        partial.push(0.0);
        for y in &dec.y {
            partial.push(partial.last().unwrap() + y);
        }
        Ok::<_, StatsError>(partial)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let mean_y = partials.iter().map(|p| p[n_max]).sum::<f64>() / (samples * n_max) as f64;
    let counts: Vec<u64> = n_grid
        .iter()
        .map(|&n| {
            partials
                .iter()
                .filter(|p| (p[n] - n as f64 * mean_y).abs() >= epsilon * n as f64)
                .count() as u64
        })
        .collect();
    let series = series_from_counts(n_grid, &counts, samples);
    let fit = fit_exponential_decay(&series.points()).ok();
    Ok(BernsteinReport {
        series,
        fit,
        mean_y,
        epsilon,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChernoffCell {
    pub t: f64,
    pub n: u32,
    pub empirical: Proportion,
    pub bound: f64,
}

impl ChernoffCell {
    /// The bound is respected when it is not below the lower confidence
    /// limit of the empirical exceedance.
    pub fn respected(&self) -> bool {
        self.empirical.ci_low <= self.bound
    }
}

/// Empirical `P(Z₁ + … + Zₙ ≥ (1 + t) n E[Z])` for i.i.d. exponentials of
/// mean `rate_mean`, next to the closed-form bound.
pub fn chernoff_empirical(
    rate_mean: f64,
    t: f64,
    n: u32,
    samples: usize,
    seed: u64,
) -> Result<ChernoffCell, StatsError> {
    if !(rate_mean > 0.0) {
        return Err(StatsError::Parameter(format!("rate_mean must be positive, got {rate_mean}")));
    }
    check_samples(samples, 1)?;
    let bound = super::chernoff_bound(t, n)?;
    let exp = Exp::new(1.0 / rate_mean).map_err(|e| StatsError::Parameter(e.to_string()))?;
    let threshold = (1.0 + t) * n as f64 * rate_mean;
    let counts = count_events(samples, 1, |i| {
        let mut rng = stream_rng(seed, i);
        let total: f64 = (0..n).map(|_| exp.sample(&mut rng)).sum();
        vec![total >= threshold]
    });
    Ok(ChernoffCell {
        t,
        n,
        empirical: Proportion::new(counts[0], samples as u64, super::DEFAULT_CONFIDENCE),
        bound,
    })
}

/// Frequency of `w_{2n} ∉ S_1(w_n, ½ d(1, w_n))` for each even `2n` in the
/// grid.
pub fn midpoint_decay<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    two_n_grid: &[usize],
    samples: usize,
    seed: u64,
) -> Result<DecayReport, StatsError> {
    check_grid("n_grid", two_n_grid)?;
    check_samples(samples, 1)?;
    if let Some(odd) = two_n_grid.iter().find(|&&m| m % 2 != 0) {
        return Err(crate::walk::WalkError::OddLength(*odd).into());
    }
    let mut checkpoints: Vec<usize> = two_n_grid
        .iter()
        .flat_map(|&m| [m / 2, m])
        .collect();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let counts = count_events(samples, two_n_grid.len(), |i| {
        let mut w = Walker::new(model, dist, seed, i);
        let locations: Vec<M::Element> = checkpoints
            .iter()
            .map(|&t| {
                w.advance_to(t);
                w.location().clone()
            })
            .collect();
        let at = |t: usize| &locations[checkpoints.binary_search(&t).expect("checkpoint")];
        two_n_grid
            .iter()
            .map(|&m| !midpoint_holds(model, at(m / 2), at(m)))
            .collect()
    });
    Ok(DecayReport::new(series_from_counts(two_n_grid, &counts, samples)))
}

/// Tail in `r` of `P̂((v_n · w_n)_1 ≥ r − 2δ)` for independent μ- and
/// μ̃-walks `v` and `w`.
pub fn diagonal_decay<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    n: usize,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<TailReport, StatsError> {
    check_ascending(r_grid)?;
    check_samples(samples, 1)?;
    let mirror = reflected(model, dist);
    let delta = model.descriptor().delta;
    let one = model.identity();
    let (v_seed, w_seed) = (derive_seed(seed, 1), derive_seed(seed, 2));
    let values = par_samples(samples, |i| {
        let mut v = Walker::new(model, dist, v_seed, i);
        let mut w = Walker::new(model, &mirror, w_seed, i);
        v.advance(n);
        w.advance(n);
        gromov_product(model, &one, v.location(), w.location()) + 2.0 * delta
    });
    Ok(TailReport::new(empirical_tail(
        &values,
        r_grid,
        super::DEFAULT_CONFIDENCE,
    )?))
}
