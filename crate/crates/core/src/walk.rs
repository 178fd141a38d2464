//! Seeded μ-random walks.
//!
//! A walk starts at the identity and multiplies on the right by i.i.d. steps
//! drawn from a finitely supported [`StepDistribution`]. Sample `i` of an
//! experiment always draws from stream `i` of the master seed, so results do
//! not depend on scheduling.

use std::collections::HashSet;
use std::io::Write;

use rand::distr::Distribution;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rayon::prelude::*;
use thiserror::Error;

use crate::hypgeom::gromov_product;
use crate::models::Model;
use crate::rng::{stream_rng, StreamRng};
use crate::stats::fmt_f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("invalid step distribution: {0}")]
    InvalidDistribution(String),
    #[error("iteration length k must be at least 1")]
    ZeroK,
    #[error("walk length must be even, got {0}")]
    OddLength(usize),
    #[error("walks have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("step distribution generates an elementary subgroup: {0}")]
    Elementary(String),
}

/// Tolerance on the total mass of a step distribution.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// A finitely supported probability measure μ on the group.
#[derive(Debug, Clone)]
pub struct StepDistribution<E> {
    support: Vec<E>,
    weights: Vec<f64>,
    alias: WeightedAliasIndex<f64>,
}

impl<E: Clone> StepDistribution<E> {
    pub fn new(support: Vec<E>, weights: Vec<f64>) -> Result<Self, WalkError> {
        if support.is_empty() {
            return Err(WalkError::InvalidDistribution("support is empty".into()));
        }
        if support.len() != weights.len() {
            return Err(WalkError::InvalidDistribution(format!(
                "{} support elements but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(WalkError::InvalidDistribution(format!(
                "weights must be positive, got {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(WalkError::InvalidDistribution(format!(
                "weights must sum to 1, got {total}"
            )));
        }
        let alias = WeightedAliasIndex::new(weights.clone())
            .map_err(|e| WalkError::InvalidDistribution(e.to_string()))?;
        Ok(StepDistribution {
            support,
            weights,
            alias,
        })
    }

    pub fn uniform(support: Vec<E>) -> Result<Self, WalkError> {
        let n = support.len();
        if n == 0 {
            return Err(WalkError::InvalidDistribution("support is empty".into()));
        }
        // exact halves and quarters where possible, remainder on the last atom
        let mut weights = vec![1.0 / n as f64; n];
        let head: f64 = weights[..n - 1].iter().sum();
        weights[n - 1] = 1.0 - head;
        Self::new(support, weights)
    }

    /// The point mass at `g`.
    pub fn dirac(g: E) -> Self {
        Self::new(vec![g], vec![1.0]).expect("point mass is valid")
    }

    pub fn support(&self) -> &[E] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.support.len() == 1 {
            return 0;
        }
        self.alias.sample(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &E {
        &self.support[self.sample_index(rng)]
    }
}

/// `μ̃(g) = μ(g⁻¹)`.
pub fn reflected<M: Model>(model: &M, dist: &StepDistribution<M::Element>) -> StepDistribution<M::Element> {
    StepDistribution {
        support: dist.support.iter().map(|g| model.invert(g)).collect(),
        weights: dist.weights.clone(),
        alias: dist.alias.clone(),
    }
}

/// A realized walk with every location and `d(1, w_i)` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSample<E> {
    pub seed: u64,
    pub stream: u64,
    pub steps: Vec<E>,
    /// `locations[0]` is the identity; `locations[i] = locations[i-1]·steps[i-1]`.
    pub locations: Vec<E>,
    pub distances: Vec<f64>,
}

impl<E> WalkSample<E> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn endpoint(&self) -> &E {
        self.locations.last().expect("locations contain the identity")
    }
}

pub fn sample_walk<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    n: usize,
    seed: u64,
) -> WalkSample<M::Element> {
    sample_walk_stream(model, dist, n, seed, 0)
}

pub fn sample_walk_stream<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    n: usize,
    seed: u64,
    stream: u64,
) -> WalkSample<M::Element> {
    let mut rng = stream_rng(seed, stream);
    let mut steps = Vec::with_capacity(n);
    let mut locations = Vec::with_capacity(n + 1);
    let mut distances = Vec::with_capacity(n + 1);
    let mut here = model.identity();
    locations.push(here.clone());
    distances.push(0.0);
    for _ in 0..n {
        let s = dist.sample(&mut rng).clone();
        model.multiply_assign(&mut here, &s);
        distances.push(model.norm(&here));
        locations.push(here.clone());
        steps.push(s);
    }
    WalkSample {
        seed,
        stream,
        steps,
        locations,
        distances,
    }
}

/// A walk that keeps only its current location.
pub struct Walker<'a, M: Model> {
    model: &'a M,
    dist: &'a StepDistribution<M::Element>,
    rng: StreamRng,
    location: M::Element,
    time: usize,
}

impl<'a, M: Model> Walker<'a, M> {
    pub fn new(model: &'a M, dist: &'a StepDistribution<M::Element>, seed: u64, stream: u64) -> Self {
        Walker {
            model,
            dist,
            rng: stream_rng(seed, stream),
            location: model.identity(),
            time: 0,
        }
    }

    pub fn location(&self) -> &M::Element {
        &self.location
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn advance(&mut self, steps: usize) {
        for _ in 0..steps {
            let s = self.dist.sample(&mut self.rng);
            self.model.multiply_assign(&mut self.location, s);
        }
        self.time += steps;
    }

    pub fn advance_to(&mut self, time: usize) {
        assert!(time >= self.time, "walks only move forward");
        self.advance(time - self.time);
    }

    /// Advances `k` steps and returns the product of those steps.
    pub fn segment(&mut self, k: usize) -> M::Element {
        let mut seg = self.model.identity();
        for _ in 0..k {
            let s = self.dist.sample(&mut self.rng);
            self.model.multiply_assign(&mut self.location, s);
            self.model.multiply_assign(&mut seg, s);
        }
        self.time += k;
        seg
    }
}

/// `X_i = Y_i − Z_i` for the `k`-iterated walk `w^k_i = w_{ik}`:
/// `X_i` is the progress `d(1, w^k_i) − d(1, w^k_{i−1})`, `Y_i` the length
/// `d(w^k_{i−1}, w^k_i)` of the `i`-th block, and `Z_i` the backtracking
/// `2 (1·w^k_i)_{w^k_{i−1}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IteratedDecomposition {
    pub k: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl IteratedDecomposition {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Decomposes a cached walk; a trailing partial block is dropped.
pub fn iterated_decomposition<M: Model>(
    model: &M,
    w: &WalkSample<M::Element>,
    k: usize,
) -> Result<IteratedDecomposition, WalkError> {
    if k == 0 {
        return Err(WalkError::ZeroK);
    }
    let one = model.identity();
    let blocks = w.len() / k;
    let mut out = IteratedDecomposition {
        k,
        x: Vec::with_capacity(blocks),
        y: Vec::with_capacity(blocks),
        z: Vec::with_capacity(blocks),
    };
    for i in 1..=blocks {
        let prev = &w.locations[(i - 1) * k];
        let next = &w.locations[i * k];
        let y = model.distance(prev, next);
        let z = 2.0 * gromov_product(model, prev, &one, next);
        out.x.push(y - z);
        out.y.push(y);
        out.z.push(z);
    }
    Ok(out)
}

/// Streams `n` blocks of a `k`-iterated walk without storing locations.
pub fn sample_iterated<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
    k: usize,
    n: usize,
    seed: u64,
    stream: u64,
) -> Result<IteratedDecomposition, WalkError> {
    if k == 0 {
        return Err(WalkError::ZeroK);
    }
    let mut walker = Walker::new(model, dist, seed, stream);
    let mut out = IteratedDecomposition {
        k,
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
    };
    let mut before = 0.0;
    for _ in 0..n {
        let seg = walker.segment(k);
        let after = model.norm(walker.location());
        let y = model.norm(&seg);
        let x = after - before;
        out.x.push(x);
        out.y.push(y);
        out.z.push(y - x);
        before = after;
    }
    Ok(out)
}

/// `(w_n · w_{2n})_1 ≥ ½ d(1, w_n)`.
pub fn midpoint_holds<M: Model>(model: &M, w_n: &M::Element, w_2n: &M::Element) -> bool {
    let one = model.identity();
    gromov_product(model, &one, w_n, w_2n) >= 0.5 * model.norm(w_n)
}

/// Whether `w_{2n}` lies in the shadow `S_1(w_n, ½ d(1, w_n))`.
pub fn midpoint_shadow_event<M: Model>(model: &M, w: &WalkSample<M::Element>) -> Result<bool, WalkError> {
    let len = w.len();
    if len % 2 != 0 {
        return Err(WalkError::OddLength(len));
    }
    Ok(midpoint_holds(model, &w.locations[len / 2], &w.locations[len]))
}

/// Whether `(v_n · w_n)_1 ≥ r − 2δ`, the consequence of `(v_n, w_n)` lying
/// in the shadow of the diagonal `S_1(Δ, r)`. `v` is a μ-walk and `w` an
/// independent μ̃-walk.
pub fn diagonal_shadow_event<M: Model>(
    model: &M,
    v_walk: &WalkSample<M::Element>,
    w_walk: &WalkSample<M::Element>,
    r: f64,
) -> Result<bool, WalkError> {
    if v_walk.len() != w_walk.len() {
        return Err(WalkError::LengthMismatch(v_walk.len(), w_walk.len()));
    }
    let delta = model.descriptor().delta;
    let one = model.identity();
    Ok(gromov_product(model, &one, v_walk.endpoint(), w_walk.endpoint()) >= r - 2.0 * delta)
}

/// Looks among products of at most six support elements for two loxodromic
/// elements that do not commute, i.e. have distinct fixed-point pairs.
pub fn check_non_elementary<M: Model>(
    model: &M,
    dist: &StepDistribution<M::Element>,
) -> Result<(M::Element, M::Element), WalkError> {
    const MAX_LEN: usize = 6;
    let mut seen: HashSet<M::Element> = HashSet::new();
    let mut frontier = vec![model.identity()];
    seen.insert(model.identity());
    let mut first: Option<M::Element> = None;
    for _ in 0..MAX_LEN {
        let mut next = Vec::new();
        for g in &frontier {
            for s in dist.support() {
                let h = model.multiply(g, s);
                if !seen.insert(h.clone()) {
                    continue;
                }
                if model.is_loxodromic(&h) {
                    match &first {
                        None => first = Some(h.clone()),
                        Some(f) => {
                            if model.multiply(f, &h) != model.multiply(&h, f) {
                                return Ok((f.clone(), h));
                            }
                        }
                    }
                }
                next.push(h);
            }
        }
        frontier = next;
    }
    let reason = match first {
        None => format!("no loxodromic element among products of length ≤ {MAX_LEN}"),
        Some(f) => format!("every loxodromic product of length ≤ {MAX_LEN} commutes with {f}"),
    };
    Err(WalkError::Elementary(reason))
}

/// Maps `f` over sample indices `0..count` in parallel; output is in index
/// order whatever the thread count.
pub fn par_samples<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count as u64).into_par_iter().map(f).collect()
}

/// Writes walks as CSV rows `sample_id,i,step,distance`; row `i = 0` is the
/// identity with step `1`.
pub fn write_walk_csv<M: Model, W: Write>(
    samples: &[WalkSample<M::Element>],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "sample_id,i,step,distance")?;
    for (id, w) in samples.iter().enumerate() {
        writeln!(out, "{id},0,1,{}", fmt_f64(0.0))?;
        for (i, s) in w.steps.iter().enumerate() {
            writeln!(out, "{id},{},\"{s}\",{}", i + 1, fmt_f64(w.distances[i + 1]))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FareyElement, FareyGroup, FreeGroup, FreeWord};

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    fn free_uniform() -> StepDistribution<FreeWord> {
        StepDistribution::uniform(FreeGroup.generators()).unwrap()
    }

    #[test]
    fn distribution_validation() {
        assert!(StepDistribution::new(Vec::<FreeWord>::new(), vec![]).is_err());
        let err = StepDistribution::new(vec![w("a"), w("b")], vec![0.5, 0.499]).unwrap_err();
        assert!(err.to_string().contains("weights must sum to 1"));
        assert!(StepDistribution::new(vec![w("a"), w("b")], vec![1.0, 0.0]).is_err());
        assert!(StepDistribution::new(vec![w("a")], vec![0.5, 0.5]).is_err());
        assert!(StepDistribution::new(vec![w("a"), w("b")], vec![0.7, 0.3]).is_ok());
    }

    #[test]
    fn deterministic_walk() {
        let d = StepDistribution::dirac(w("a"));
        let s = sample_walk(&FreeGroup, &d, 5, 11);
        let expect: Vec<FreeWord> = (0..=5).map(|i| w("a").pow(i)).collect();
        assert_eq!(s.locations, expect);
        assert_eq!(s.distances, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let empty = sample_walk(&FreeGroup, &d, 0, 11);
        assert_eq!(empty.locations, vec![FreeWord::identity()]);
    }

    #[test]
    fn walks_are_reproducible() {
        let d = free_uniform();
        assert_eq!(sample_walk(&FreeGroup, &d, 200, 5), sample_walk(&FreeGroup, &d, 200, 5));
        assert_ne!(
            sample_walk_stream(&FreeGroup, &d, 200, 5, 0),
            sample_walk_stream(&FreeGroup, &d, 200, 5, 1)
        );
    }

    #[test]
    fn walker_matches_cached_walk() {
        let d = free_uniform();
        let cached = sample_walk_stream(&FreeGroup, &d, 60, 9, 4);
        let mut walker = Walker::new(&FreeGroup, &d, 9, 4);
        walker.advance_to(37);
        assert_eq!(walker.location(), &cached.locations[37]);
        walker.advance_to(60);
        assert_eq!(walker.location(), cached.endpoint());
    }

    #[test]
    fn reflection() {
        let d = StepDistribution::new(vec![w("a"), w("b")], vec![0.7, 0.3]).unwrap();
        let r = reflected(&FreeGroup, &d);
        assert_eq!(r.support(), &[w("A"), w("B")]);
        assert_eq!(r.weights(), &[0.7, 0.3]);
        let rr = reflected(&FreeGroup, &r);
        assert_eq!(rr.support(), d.support());
        let u = free_uniform();
        let ur = reflected(&FreeGroup, &u);
        let mut a: Vec<_> = u.support().to_vec();
        let mut b: Vec<_> = ur.support().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn decomposition_examples() {
        let d = StepDistribution::new(vec![w("a"), w("A")], vec![0.5, 0.5]).unwrap();
        // find a seed whose first two steps are a, A
        let sample = (0..1000)
            .map(|seed| sample_walk(&FreeGroup, &d, 2, seed))
            .find(|s| s.steps == vec![w("a"), w("A")])
            .unwrap();
        let dec = iterated_decomposition(&FreeGroup, &sample, 1).unwrap();
        assert_eq!(dec.y, vec![1.0, 1.0]);
        assert_eq!(dec.x, vec![1.0, -1.0]);
        assert_eq!(dec.z, vec![0.0, 2.0]);

        let ray = sample_walk(&FreeGroup, &StepDistribution::dirac(w("a")), 23, 0);
        let dec = iterated_decomposition(&FreeGroup, &ray, 5).unwrap();
        assert_eq!(dec.len(), 4);
        assert!(dec.z.iter().all(|&z| z == 0.0));
        assert!(dec.x.iter().zip(&dec.y).all(|(&x, &y)| x == 5.0 && y == 5.0));
        assert_eq!(iterated_decomposition(&FreeGroup, &ray, 0), Err(WalkError::ZeroK));
    }

    #[test]
    fn streamed_decomposition_matches_cached() {
        let d = free_uniform();
        let cached = sample_walk_stream(&FreeGroup, &d, 120, 3, 8);
        let a = iterated_decomposition(&FreeGroup, &cached, 10).unwrap();
        let b = sample_iterated(&FreeGroup, &d, 10, 12, 3, 8).unwrap();
        assert_eq!(a, b);
        let total: f64 = a.x.iter().sum();
        assert_eq!(total, cached.distances[120]);
    }

    #[test]
    fn midpoint_examples() {
        let ray = sample_walk(&FreeGroup, &StepDistribution::dirac(w("a")), 10, 0);
        assert_eq!(midpoint_shadow_event(&FreeGroup, &ray), Ok(true));
        let odd = sample_walk(&FreeGroup, &StepDistribution::dirac(w("a")), 9, 0);
        assert_eq!(midpoint_shadow_event(&FreeGroup, &odd), Err(WalkError::OddLength(9)));
        assert!(!midpoint_holds(&FreeGroup, &w("a"), &FreeWord::identity()));
    }

    #[test]
    fn diagonal_examples() {
        let ray = sample_walk(&FreeGroup, &StepDistribution::dirac(w("a")), 12, 0);
        assert_eq!(diagonal_shadow_event(&FreeGroup, &ray, &ray, 12.0), Ok(true));
        assert_eq!(diagonal_shadow_event(&FreeGroup, &ray, &ray, 13.0), Ok(false));
        let other = sample_walk(&FreeGroup, &free_uniform(), 12, 1);
        assert_eq!(diagonal_shadow_event(&FreeGroup, &ray, &other, 0.0), Ok(true));
        let short = sample_walk(&FreeGroup, &free_uniform(), 11, 1);
        assert!(diagonal_shadow_event(&FreeGroup, &ray, &short, 0.0).is_err());
    }

    #[test]
    fn non_elementarity() {
        assert!(check_non_elementary(&FreeGroup, &free_uniform()).is_ok());
        assert!(check_non_elementary(&FreeGroup, &StepDistribution::dirac(w("a"))).is_err());
        let farey = StepDistribution::uniform(FareyGroup.generators()).unwrap();
        assert!(check_non_elementary(&FareyGroup, &farey).is_ok());
        let parabolic = StepDistribution::dirac(FareyElement::r());
        assert!(matches!(
            check_non_elementary(&FareyGroup, &parabolic),
            Err(WalkError::Elementary(_))
        ));
    }

    #[test]
    fn csv_dump() {
        let s = sample_walk(&FreeGroup, &StepDistribution::dirac(w("b")), 2, 0);
        let mut buf = Vec::new();
        write_walk_csv::<FreeGroup, _>(&[s], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "sample_id,i,step,distance");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("0,2,\"b\","));
    }
}
