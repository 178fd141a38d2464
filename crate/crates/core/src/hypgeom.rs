//! Coarse geometry over any [`Model`]: Gromov products, shadows, and
//! executable forms of the standard shadow lemmas.
//!
//! Everything here is computed from the orbit metric alone, so the same
//! predicates run unchanged on the tree and on the Farey graph. Shadows are
//! closed: `S_z(x, r) = { y : (x·y)_z ≥ r }`.
//!
//! The lemma predicates take their constants as arguments. Callers that do
//! not know the constants calibrate them with [`crate::suite`].

use rand::Rng;
use thiserror::Error;

use crate::models::Model;
use crate::rng::stream_rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("unsatisfiable configuration: {0}")]
    Unsatisfiable(&'static str),
    #[error("invalid quasi-geodesic parameters: K = {k}, c = {c}")]
    InvalidParams { k: f64, c: f64 },
    #[error("{0} must be positive")]
    Zero(&'static str),
}

/// Hyperbolicity constant and basepoint of a model's space.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpaceDescriptor {
    pub delta: f64,
    pub basepoint_label: String,
}

/// The shadow `S_viewpoint(center, radius)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Shadow<E> {
    pub viewpoint: E,
    pub center: E,
    pub radius: f64,
}

impl<E> Shadow<E> {
    pub fn new(viewpoint: E, center: E, radius: f64) -> Self {
        Shadow {
            viewpoint,
            center,
            radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiGeodesicParams {
    pub k: f64,
    pub c: f64,
}

impl QuasiGeodesicParams {
    pub fn new(k: f64, c: f64) -> Result<Self, GeomError> {
        if !(k >= 1.0 && c >= 0.0) {
            return Err(GeomError::InvalidParams { k, c });
        }
        Ok(QuasiGeodesicParams { k, c })
    }
}

/// `(x·y)_z = ½(d(z,x) + d(z,y) − d(x,y))`.
pub fn gromov_product<M: Model>(model: &M, z: &M::Element, x: &M::Element, y: &M::Element) -> f64 {
    0.5 * (model.distance(z, x) + model.distance(z, y) - model.distance(x, y))
}

pub fn in_shadow<M: Model>(model: &M, s: &Shadow<M::Element>, y: &M::Element) -> bool {
    gromov_product(model, &s.viewpoint, &s.center, y) >= s.radius
}

/// Membership in `S_1(T, r)`, the union of the shadows of the points of `T`.
pub fn in_set_shadow<M: Model>(model: &M, t: &[M::Element], r: f64, y: &M::Element) -> bool {
    let one = model.identity();
    t.iter().any(|x| gromov_product(model, &one, x, y) >= r)
}

/// Two points of one shadow have Gromov product at least `r − 2δ`.
pub fn shadow_product_bound_check<M: Model>(
    model: &M,
    s: &Shadow<M::Element>,
    y: &M::Element,
    z2: &M::Element,
) -> Result<bool, GeomError> {
    if !in_shadow(model, s, y) || !in_shadow(model, s, z2) {
        return Err(GeomError::Precondition("both points must lie in the shadow"));
    }
    let delta = model.descriptor().delta;
    Ok(gromov_product(model, &s.viewpoint, y, z2) >= s.radius - 2.0 * delta)
}

/// A `D`-neighbour of `S_1(T, r)` lies in `S_1(T, r − D)`.
///
/// `witness` is the point of `S_1(T, r)` within `D` of `probe`.
pub fn verify_metric_nest<M: Model>(
    model: &M,
    t: &[M::Element],
    r: f64,
    d: f64,
    probe: &M::Element,
    witness: &M::Element,
) -> Result<bool, GeomError> {
    if !in_set_shadow(model, t, r, witness) {
        return Err(GeomError::Precondition("witness must lie in S_1(T, r)"));
    }
    if model.distance(probe, witness) > d {
        return Err(GeomError::Precondition("probe must be within D of the witness"));
    }
    Ok(in_set_shadow(model, t, r - d, probe))
}

/// Nested shadows are metrically nested: with `d(x,z) ≥ A + r + 2K₂`,
/// `a ∈ S_z(x, r)` and `b ∉ S_z(x, r − A − K₂)`, the points are at least
/// `A` apart.
#[allow(clippy::too_many_arguments)]
pub fn verify_nested_shadow_separation<M: Model>(
    model: &M,
    z: &M::Element,
    x: &M::Element,
    r: f64,
    a: f64,
    a_pt: &M::Element,
    b_pt: &M::Element,
    k2: f64,
) -> Result<bool, GeomError> {
    if model.distance(x, z) < a + r + 2.0 * k2 {
        return Err(GeomError::Unsatisfiable("d(x, z) < A + r + 2K2"));
    }
    if gromov_product(model, z, x, a_pt) < r {
        return Err(GeomError::Unsatisfiable("a is not in S_z(x, r)"));
    }
    if gromov_product(model, z, x, b_pt) >= r - a - k2 {
        return Err(GeomError::Unsatisfiable("b lies in S_z(x, r - A - K2)"));
    }
    Ok(model.distance(a_pt, b_pt) >= a)
}

/// Change of basepoint: if `(x·y)_z ≤ r − K₃` then
/// `S_z(x, r) ⊂ S_y(x, d(x,y) − d(x,z) + r − K₄)`, checked on `probe`.
#[allow(clippy::too_many_arguments)]
pub fn verify_basepoint_change<M: Model>(
    model: &M,
    x: &M::Element,
    y: &M::Element,
    z: &M::Element,
    r: f64,
    probe: &M::Element,
    k3: f64,
    k4: f64,
) -> Result<bool, GeomError> {
    if gromov_product(model, z, x, y) > r - k3 {
        return Err(GeomError::Unsatisfiable("(x·y)_z > r - K3"));
    }
    if gromov_product(model, z, x, probe) < r {
        return Err(GeomError::Unsatisfiable("probe is not in S_z(x, r)"));
    }
    let s = model.distance(x, y) - model.distance(x, z) + r - k4;
    Ok(gromov_product(model, y, x, probe) >= s)
}

/// The complement of `S_z(x, r)` is squeezed between
/// `S_x(z, d − r + K₅)` and `S_x(z, d − r − K₅)`, `d = d(x, z)`.
/// Returns whether `probe` respects both inclusions.
pub fn verify_shadow_complement<M: Model>(
    model: &M,
    x: &M::Element,
    z: &M::Element,
    r: f64,
    probe: &M::Element,
    k5: f64,
) -> Result<bool, GeomError> {
    let d = model.distance(x, z);
    if r < k5 || d < r + 2.0 * k5 {
        return Err(GeomError::Unsatisfiable("need r ≥ K5 and d(x, z) ≥ r + 2K5"));
    }
    let in_main = gromov_product(model, z, x, probe) >= r;
    let back = gromov_product(model, x, z, probe);
    let inner = back >= d - r + k5;
    let outer = back >= d - r - k5;
    Ok(!(inner && in_main) && (in_main || outer))
}

/// `S_1(S_1(T, s), r) ⊂ S_1(T, min(r, s) − 2δ)`, checked on `probe` with
/// `witness ∈ S_1(T, s)` and `probe ∈ S_1(witness, r)`.
pub fn shadow_composition_check<M: Model>(
    model: &M,
    t: &[M::Element],
    s: f64,
    r: f64,
    probe: &M::Element,
    witness: &M::Element,
) -> Result<bool, GeomError> {
    let one = model.identity();
    if !in_set_shadow(model, t, s, witness) {
        return Err(GeomError::Precondition("witness must lie in S_1(T, s)"));
    }
    if gromov_product(model, &one, witness, probe) < r {
        return Err(GeomError::Precondition("probe must lie in S_1(witness, r)"));
    }
    let delta = model.descriptor().delta;
    Ok(in_set_shadow(model, t, r.min(s) - 2.0 * delta, probe))
}

fn cumulative_parameters<M: Model>(model: &M, path: &[M::Element]) -> Vec<f64> {
    let mut t = Vec::with_capacity(path.len());
    let mut acc = 0.0;
    t.push(0.0);
    for w in path.windows(2) {
        acc += model.distance(&w[0], &w[1]);
        t.push(acc);
    }
    t
}

/// Whether the path, parameterized by cumulative length, satisfies
/// `|s−t|/K − c ≤ d(γ(s), γ(t)) ≤ K|s−t| + c` for every pair of points.
pub fn quasigeodesic_check<M: Model>(
    model: &M,
    path: &[M::Element],
    params: QuasiGeodesicParams,
) -> bool {
    let t = cumulative_parameters(model, path);
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            let dt = t[j] - t[i];
            let d = model.distance(&path[i], &path[j]);
            if d < dt / params.k - params.c || d > params.k * dt + params.c {
                return false;
            }
        }
    }
    true
}

/// Smallest additive constant `c` for which the path is a `(K, c)`
/// quasi-geodesic.
pub fn fit_quasigeodesic_additive<M: Model>(model: &M, path: &[M::Element], k: f64) -> f64 {
    let t = cumulative_parameters(model, path);
    let mut c: f64 = 0.0;
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            let dt = t[j] - t[i];
            let d = model.distance(&path[i], &path[j]);
            c = c.max(dt / k - d).max(d - k * dt);
        }
    }
    c
}

/// Largest violation of `(x·y)_w ≥ min((x·z)_w, (y·z)_w) − δ` over every
/// role assignment of the four points.
pub fn four_point_defect<M: Model>(model: &M, pts: [&M::Element; 4]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for wi in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&i| i != wi).collect();
        let w = pts[wi];
        let (p, q, r) = (pts[others[0]], pts[others[1]], pts[others[2]]);
        let pq = gromov_product(model, w, p, q);
        let pr = gromov_product(model, w, p, r);
        let qr = gromov_product(model, w, q, r);
        worst = worst
            .max(pr.min(qr) - pq)
            .max(pq.min(qr) - pr)
            .max(pq.min(pr) - qr);
    }
    worst
}

/// Empirical four-point hyperbolicity constant over random quadruples of
/// elements of word length at most `radius`. Deterministic in `seed`.
pub fn estimate_delta<M: Model>(
    model: &M,
    sample_count: usize,
    radius: usize,
    seed: u64,
) -> Result<f64, GeomError> {
    if sample_count == 0 {
        return Err(GeomError::Zero("sample_count"));
    }
    if radius == 0 {
        return Err(GeomError::Zero("radius"));
    }
    let mut rng = stream_rng(seed, 0);
    let mut delta: f64 = 0.0;
    for _ in 0..sample_count {
        let pts: Vec<M::Element> = (0..4)
            .map(|_| model.random_element(rng.random_range(0..=radius), &mut rng))
            .collect();
        delta = delta.max(four_point_defect(model, [&pts[0], &pts[1], &pts[2], &pts[3]]));
    }
    Ok(delta)
}
