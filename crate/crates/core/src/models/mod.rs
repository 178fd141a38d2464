//! Concrete group actions on hyperbolic spaces.
//!
//! Every model fixes a basepoint `x0` in its space and measures group
//! elements through the orbit map: `d(g, h) = d_space(g·x0, h·x0)`. For the
//! free group acting on its Cayley tree this is the word metric. For
//! `SL(2,Z)` acting on the Farey graph it is an improper metric: the
//! stabilizer of `x0` is infinite, so distinct elements can sit at distance
//! zero.

pub mod farey;
pub mod free;

use std::fmt;
use std::hash::Hash;

use rand::Rng;
use thiserror::Error;

use crate::hypgeom::SpaceDescriptor;

pub use farey::{farey_slope_distance, FareyElement, FareyGroup, Slope, FAREY_DELTA};
pub use free::{FreeGroup, FreeWord, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("cannot parse {kind} from {text:?}: {reason}")]
    Parse {
        kind: &'static str,
        text: String,
        reason: String,
    },
    #[error("element is not conjugate to the given core by the given conjugator")]
    NotConjugate,
}

impl ModelError {
    pub(crate) fn parse(kind: &'static str, text: &str, reason: impl Into<String>) -> Self {
        ModelError::Parse {
            kind,
            text: text.to_string(),
            reason: reason.into(),
        }
    }
}

/// Result of a translation length computation.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationLength {
    pub value: f64,
    /// `true` when the value is exact: either computed in closed form, or the
    /// increments `d(1, g^(m+1)) - d(1, g^m)` were periodic over the trailing
    /// window.
    pub stabilized: bool,
    /// Period of the trailing increments, when stabilized by observation.
    pub period: Option<usize>,
}

/// A factorization `g = v·s·v⁻¹` with `s` of small length.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyMin<E> {
    /// `d(1, s)`.
    pub length: f64,
    pub conjugator: E,
    pub core: E,
    /// Exact infimum over the conjugacy class, or only an upper bound.
    pub exact: bool,
}

/// A group acting by isometries on a hyperbolic space with a chosen basepoint.
pub trait Model: Send + Sync {
    type Element: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync;

    fn name(&self) -> &'static str;

    fn descriptor(&self) -> SpaceDescriptor;

    fn identity(&self) -> Self::Element;

    fn multiply(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;

    fn invert(&self, g: &Self::Element) -> Self::Element;

    /// `g ← g·h`. Models with cheap in-place updates override this.
    fn multiply_assign(&self, g: &mut Self::Element, h: &Self::Element) {
        *g = self.multiply(g, h);
    }

    /// The orbit metric `d(g·x0, h·x0)`.
    fn distance(&self, g: &Self::Element, h: &Self::Element) -> f64;

    /// `d(1, g)`.
    fn norm(&self, g: &Self::Element) -> f64 {
        self.distance(&self.identity(), g)
    }

    /// Symmetric generating set, used to build random test elements.
    fn generators(&self) -> Vec<Self::Element>;

    /// Uniform-length random word in the generators, multiplied out.
    fn random_element<R: Rng + ?Sized>(&self, max_len: usize, rng: &mut R) -> Self::Element {
        let gens = self.generators();
        let len = rng.random_range(0..=max_len);
        let mut g = self.identity();
        for _ in 0..len {
            let s = &gens[rng.random_range(0..gens.len())];
            self.multiply_assign(&mut g, s);
        }
        g
    }

    /// Whether `g` acts loxodromically (positive translation length).
    fn is_loxodromic(&self, g: &Self::Element) -> bool;

    fn translation_length(
        &self,
        g: &Self::Element,
        horizon: usize,
    ) -> Result<TranslationLength, ModelError>;

    fn conjugacy_min_length(&self, g: &Self::Element) -> ConjugacyMin<Self::Element>;

    fn parse_element(&self, text: &str) -> Result<Self::Element, ModelError>;
}

/// Checks the three shadow conditions satisfied by a conjugate `g = v s v⁻¹`
/// with `s` short and `v` a shortest conjugator:
///
/// 1. `d(1, v) ≥ d(1, g)/2 − K`
/// 2. `g ∈ S_1(v, d(1, v) − K)`
/// 3. `1 ∈ S_g(g v, d(1, v) − K)`
pub fn check_conjugacy_shadow_conditions<M: Model>(
    model: &M,
    g: &M::Element,
    v: &M::Element,
    s: &M::Element,
    k9: f64,
) -> Result<[bool; 3], ModelError> {
    let conj = model.multiply(&model.multiply(v, s), &model.invert(v));
    if &conj != g {
        return Err(ModelError::NotConjugate);
    }
    let slack = conjugacy_condition_slack(model, g, v);
    Ok(slack.map(|needed| needed <= k9))
}

/// The smallest `K` making each of the three conjugacy shadow conditions hold.
pub fn conjugacy_condition_slack<M: Model>(model: &M, g: &M::Element, v: &M::Element) -> [f64; 3] {
    use crate::hypgeom::gromov_product;
    let one = model.identity();
    let dv = model.norm(v);
    let dg = model.norm(g);
    let gv = model.multiply(g, v);
    [
        0.5 * dg - dv,
        dv - gromov_product(model, &one, v, g),
        dv - gromov_product(model, g, &gv, &one),
    ]
}

/// Trace-based Nielsen–Thurston type of a mapping class of the punctured torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    PseudoAnosov,
    ReducibleParabolic,
    PeriodicElliptic,
    Identity,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::PseudoAnosov => "pseudo_anosov",
            Classification::ReducibleParabolic => "reducible_parabolic",
            Classification::PeriodicElliptic => "periodic_elliptic",
            Classification::Identity => "identity",
        })
    }
}

/// Stabilized slope of `m ↦ d(1, g^m)` from a list of `d(1, g^m)` for
/// `m = 0..=horizon`. Looks for the shortest period of the increments over
/// the trailing `max(8, horizon/4)` steps.
pub(crate) fn stabilized_slope(norms: &[f64]) -> TranslationLength {
    let horizon = norms.len() - 1;
    let fallback = TranslationLength {
        value: norms[horizon] / horizon as f64,
        stabilized: false,
        period: None,
    };
    let window = usize::max(8, horizon / 4);
    if horizon < window {
        return fallback;
    }
    let inc: Vec<f64> = norms.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &inc[inc.len() - window..];
    for period in 1..=window / 2 {
        if (period..tail.len()).all(|i| tail[i] == tail[i - period]) {
            let sum: f64 = tail[tail.len() - period..].iter().sum();
            return TranslationLength {
                value: sum / period as f64,
                stabilized: true,
                period: Some(period),
            };
        }
    }
    fallback
}
