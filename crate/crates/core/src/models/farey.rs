//! `SL(2,Z)` acting on the Farey graph.
//!
//! The Farey graph is the curve complex of the once-punctured torus: its
//! vertices are slopes `p/q ∈ Q ∪ {∞}` and `p/q`, `r/s` span an edge when
//! `|ps − qr| = 1`. The basepoint is `∞ = 1/0`, fixed by the parabolic
//! subgroup generated by `R = [[1,1],[0,1]]`.
//!
//! Distances from `∞` come from the regular continued fraction
//! `x = [a0; a1, ..., am]` with convergents `c_k`. The edge `(c_{k-1}, c_k)`
//! separates `∞` from `x` in the planar Farey tessellation, and every vertex
//! of the fan between `c_{k-1}` and `c_{k+1}` is adjacent to `c_k`, so
//!
//! ```text
//! D(c_{-1}) = 0,  D(c_0) = 1,  D(c_{k+1}) = min(D(c_k) + 1, D(c_{k-1}) + a_{k+1}).
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, ExtendedGcd};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{stabilized_slope, Classification, ConjugacyMin, Model, ModelError, TranslationLength};
use crate::hypgeom::SpaceDescriptor;

/// Four-point hyperbolicity constant used by shadow predicates in this model.
/// Trees of triangles have thin quadrilaterals; the sampled defect never
/// exceeds one.
pub const FAREY_DELTA: f64 = 1.0;

/// A 2×2 integer matrix with determinant one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FareyElement {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl FareyElement {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, ModelError> {
        let m = FareyElement {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        if !m.determinant().is_one() {
            return Err(ModelError::parse(
                "farey element",
                &m.to_string(),
                "determinant must be 1",
            ));
        }
        Ok(m)
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        FareyElement { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    /// `R^e = [[1,e],[0,1]]`.
    pub fn r_pow(e: impl Into<BigInt>) -> Self {
        Self::raw(BigInt::one(), e.into(), BigInt::zero(), BigInt::one())
    }

    /// `L^e = [[1,0],[e,1]]`.
    pub fn l_pow(e: impl Into<BigInt>) -> Self {
        Self::raw(BigInt::one(), BigInt::zero(), e.into(), BigInt::one())
    }

    pub fn r() -> Self {
        Self::r_pow(1)
    }

    pub fn l() -> Self {
        Self::l_pow(1)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, h: &FareyElement) -> FareyElement {
        Self::raw(
            &self.a * &h.a + &self.b * &h.c,
            &self.a * &h.b + &self.b * &h.d,
            &self.c * &h.a + &self.d * &h.c,
            &self.c * &h.b + &self.d * &h.d,
        )
    }

    /// The adjugate `[[d,−b],[−c,a]]`.
    pub fn inverse(&self) -> FareyElement {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn pow(&self, n: usize) -> FareyElement {
        let mut out = FareyElement::identity();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Image of the basepoint, `g·∞ = a/c`.
    pub fn basepoint_image(&self) -> Slope {
        Slope::from_primitive(self.a.clone(), self.c.clone())
    }

    pub fn classify(&self) -> Classification {
        let t = self.trace().abs();
        let two = BigInt::from(2);
        match t.cmp(&two) {
            Ordering::Greater => Classification::PseudoAnosov,
            Ordering::Less => Classification::PeriodicElliptic,
            Ordering::Equal => {
                if self.b.is_zero() && self.c.is_zero() {
                    Classification::Identity
                } else {
                    Classification::ReducibleParabolic
                }
            }
        }
    }

    /// Factorization into syllables `R^e` and `L^e`, up to a central sign:
    /// `self = sign · Π syllables`.
    pub fn syllables(&self) -> (Vec<Syllable>, bool) {
        let mut m = self.clone();
        let mut out: Vec<Syllable> = Vec::new();
        let push = |out: &mut Vec<Syllable>, s: Syllable| {
            if s.exponent.is_zero() {
                return;
            }
            if let Some(last) = out.last_mut() {
                if last.generator == s.generator {
                    last.exponent += s.exponent;
                    if last.exponent.is_zero() {
                        out.pop();
                    }
                    return;
                }
            }
            out.push(s);
        };
        let negative;
        loop {
            if m.c.is_zero() {
                // m = ±R^(b/a), a = ±1
                push(&mut out, Syllable::r(&m.b * &m.a));
                negative = m.a.is_negative();
                break;
            }
            if m.a.is_zero() {
                // [[0,−1],[1,d]] = S R^d and [[0,1],[−1,d]] = −S R^(−d),
                // with S = R⁻¹ L R⁻¹.
                push(&mut out, Syllable::r(-1));
                push(&mut out, Syllable::l(1));
                push(&mut out, Syllable::r(-1));
                push(&mut out, Syllable::r(&m.d * &m.c));
                negative = m.c.is_negative();
                break;
            }
            if m.a.abs() >= m.c.abs() {
                let q = &m.a / &m.c;
                m.a -= &q * &m.c;
                m.b -= &q * &m.d;
                push(&mut out, Syllable::r(q));
            } else {
                let q = &m.c / &m.a;
                m.c -= &q * &m.a;
                m.d -= &q * &m.b;
                push(&mut out, Syllable::l(q));
            }
        }
        (out, negative)
    }
}

impl fmt::Display for FareyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for FareyElement {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix("[[")
            .and_then(|x| x.strip_suffix("]]"))
            .ok_or_else(|| ModelError::parse("farey element", s, "expected [[a,b],[c,d]]"))?;
        let rows: Vec<&str> = inner.split("],[").collect();
        if rows.len() != 2 {
            return Err(ModelError::parse("farey element", s, "expected two rows"));
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(ModelError::parse("farey element", s, "expected two columns per row"));
            }
            for c in cols {
                let v: BigInt = c
                    .parse()
                    .map_err(|_| ModelError::parse("farey element", s, format!("bad integer {c:?}")))?;
                entries.push(v);
            }
        }
        let [a, b, c, d]: [BigInt; 4] = entries.try_into().expect("four entries");
        FareyElement::new(a, b, c, d).map_err(|_| ModelError::parse("farey element", s, "determinant must be 1"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FareyGenerator {
    R,
    L,
}

/// `generator^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllable {
    pub generator: FareyGenerator,
    pub exponent: BigInt,
}

impl Syllable {
    fn r(e: impl Into<BigInt>) -> Self {
        Syllable {
            generator: FareyGenerator::R,
            exponent: e.into(),
        }
    }

    fn l(e: impl Into<BigInt>) -> Self {
        Syllable {
            generator: FareyGenerator::L,
            exponent: e.into(),
        }
    }

    pub fn matrix(&self) -> FareyElement {
        match self.generator {
            FareyGenerator::R => FareyElement::r_pow(self.exponent.clone()),
            FareyGenerator::L => FareyElement::l_pow(self.exponent.clone()),
        }
    }
}

/// A vertex of the Farey graph: a reduced fraction `p/q` with `q ≥ 0`, and
/// `1/0` for `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ModelError> {
        let (p, q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(ModelError::parse("slope", "0/0", "numerator and denominator both zero"));
        }
        let g = p.gcd(&q);
        Ok(Self::from_primitive(p / &g, q / g))
    }

    /// Normalizes sign for a pair already known to be coprime.
    fn from_primitive(p: BigInt, q: BigInt) -> Self {
        if q.is_zero() {
            Slope {
                p: BigInt::one(),
                q,
            }
        } else if q.is_negative() {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    pub fn infinity() -> Self {
        Slope {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Slope {
            p: n.into(),
            q: BigInt::one(),
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.p
    }

    pub fn denominator(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    /// Whether the two slopes span a Farey edge.
    pub fn is_adjacent(&self, other: &Slope) -> bool {
        (&self.p * &other.q - &self.q * &other.p).abs().is_one()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: BigInt = p
            .parse()
            .map_err(|_| ModelError::parse("slope", s, "bad numerator"))?;
        let q: BigInt = q
            .parse()
            .map_err(|_| ModelError::parse("slope", s, "bad denominator"))?;
        Slope::new(p, q)
    }
}

/// Distance from `∞` to `p/q`, for coprime `p, q` with `q > 0` or `(±1, 0)`.
fn distance_from_infinity(p: &BigInt, q: &BigInt) -> u64 {
    if q.is_zero() {
        return 0;
    }
    let (mut num, mut den) = if q.is_negative() {
        (-p, -q)
    } else {
        (p.clone(), q.clone())
    };
    if den.is_one() {
        return 1;
    }
    // a0 = floor(num/den); the remaining quotients are positive.
    let r = num.mod_floor(&den);
    num = den;
    den = r;
    let (mut prev, mut cur) = (0u64, 1u64);
    while !den.is_zero() {
        let (a, r) = num.div_rem(&den);
        let a = a.to_u64().unwrap_or(u64::MAX);
        let next = u64::min(cur + 1, prev.saturating_add(a));
        prev = cur;
        cur = next;
        num = den;
        den = r;
    }
    cur
}

/// Graph distance between two slopes in the Farey graph.
pub fn farey_slope_distance(u: &Slope, v: &Slope) -> u64 {
    if u == v {
        return 0;
    }
    if u.is_infinity() {
        return distance_from_infinity(&v.p, &v.q);
    }
    // M = [[p, r],[q, s]] sends ∞ to u; apply M⁻¹ = [[s, −r],[−q, p]] to v.
    let ExtendedGcd { x, y, .. } = u.p.extended_gcd(&u.q);
    let (s, r) = (x, -y);
    let num = &s * &v.p - &r * &v.q;
    let den = &u.p * &v.q - &u.q * &v.p;
    distance_from_infinity(&num, &den)
}

/// `SL(2,Z)` acting on the Farey graph with basepoint `∞`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FareyGroup;

impl Model for FareyGroup {
    type Element = FareyElement;

    fn name(&self) -> &'static str {
        "farey"
    }

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor {
            delta: FAREY_DELTA,
            basepoint_label: "1/0".to_string(),
        }
    }

    fn identity(&self) -> FareyElement {
        FareyElement::identity()
    }

    fn multiply(&self, g: &FareyElement, h: &FareyElement) -> FareyElement {
        g.mul(h)
    }

    fn invert(&self, g: &FareyElement) -> FareyElement {
        g.inverse()
    }

    fn distance(&self, g: &FareyElement, h: &FareyElement) -> f64 {
        // first column of g⁻¹h
        let p = &g.d * &h.a - &g.b * &h.c;
        let q = &g.a * &h.c - &g.c * &h.a;
        distance_from_infinity(&p, &q) as f64
    }

    fn norm(&self, g: &FareyElement) -> f64 {
        distance_from_infinity(&g.a, &g.c) as f64
    }

    fn generators(&self) -> Vec<FareyElement> {
        vec![
            FareyElement::r(),
            FareyElement::l(),
            FareyElement::r_pow(-1),
            FareyElement::l_pow(-1),
        ]
    }

    fn is_loxodromic(&self, g: &FareyElement) -> bool {
        g.classify() == Classification::PseudoAnosov
    }

    fn translation_length(
        &self,
        g: &FareyElement,
        horizon: usize,
    ) -> Result<TranslationLength, ModelError> {
        if horizon == 0 {
            return Err(ModelError::ZeroHorizon);
        }
        let mut power = FareyElement::identity();
        let mut norms = Vec::with_capacity(horizon + 1);
        norms.push(0.0);
        for _ in 0..horizon {
            power = power.mul(g);
            norms.push(self.norm(&power));
        }
        Ok(stabilized_slope(&norms))
    }

    /// Upper bound: the shortest conjugate `P⁻¹ g P` over prefixes `P` of the
    /// syllable factorization of `g`.
    fn conjugacy_min_length(&self, g: &FareyElement) -> ConjugacyMin<FareyElement> {
        let (syllables, _) = g.syllables();
        let mut prefix = FareyElement::identity();
        let mut core = g.clone();
        let mut best = ConjugacyMin {
            length: self.norm(g),
            conjugator: prefix.clone(),
            core: core.clone(),
            exact: false,
        };
        for s in syllables.iter().take(syllables.len().saturating_sub(1)) {
            let x = s.matrix();
            core = x.inverse().mul(&core).mul(&x);
            prefix = prefix.mul(&x);
            let len = self.norm(&core);
            if len < best.length {
                best = ConjugacyMin {
                    length: len,
                    conjugator: prefix.clone(),
                    core: core.clone(),
                    exact: false,
                };
            }
        }
        best
    }

    fn parse_element(&self, text: &str) -> Result<FareyElement, ModelError> {
        text.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> FareyElement {
        FareyElement::new(a, b, c, d).unwrap()
    }

    fn sl(s: &str) -> Slope {
        s.parse().unwrap()
    }

    #[test]
    fn products_and_inverses() {
        let rl = FareyElement::r().mul(&FareyElement::l());
        assert_eq!(rl, m(2, 1, 1, 1));
        assert_eq!(rl.inverse(), m(1, -1, -1, 2));
        assert_eq!(rl.mul(&rl.inverse()), FareyElement::identity());
        assert_eq!(FareyElement::identity().inverse(), FareyElement::identity());
    }

    #[test]
    fn rejects_wrong_determinant() {
        assert!(FareyElement::new(2, 0, 0, 1).is_err());
        assert!("[[2,0],[0,1]]".parse::<FareyElement>().is_err());
        assert!("[[1,1],[0]]".parse::<FareyElement>().is_err());
    }

    #[test]
    fn parse_and_print() {
        let r: FareyElement = " [[1, 1], [0, 1]] ".parse().unwrap();
        assert_eq!(r, FareyElement::r());
        assert_eq!(r.to_string(), "[[1,1],[0,1]]");
        assert_eq!(sl("1/0"), Slope::infinity());
        assert_eq!(sl("-1/0"), Slope::infinity());
        assert_eq!(sl("4/-6").to_string(), "-2/3");
        assert_eq!(sl("3"), Slope::integer(3));
        assert!("0/0".parse::<Slope>().is_err());
    }

    #[test]
    fn slope_distances() {
        let inf = Slope::infinity();
        assert_eq!(farey_slope_distance(&inf, &sl("0/1")), 1);
        assert_eq!(farey_slope_distance(&inf, &sl("1/1")), 1);
        assert_eq!(farey_slope_distance(&inf, &sl("2/5")), 3);
        assert_eq!(farey_slope_distance(&inf, &sl("3/5")), 3);
        assert_eq!(farey_slope_distance(&inf, &sl("1/1000")), 2);
        assert_eq!(farey_slope_distance(&sl("1/3"), &sl("2/3")), 2);
        assert_eq!(farey_slope_distance(&sl("2/5"), &inf), 3);
        assert_eq!(farey_slope_distance(&sl("-7/3"), &sl("-7/3")), 0);
    }

    #[test]
    fn improper_metric() {
        let one = FareyElement::identity();
        assert_eq!(FareyGroup.distance(&one, &FareyElement::l()), 1.0);
        assert_eq!(FareyGroup.distance(&one, &FareyElement::r()), 0.0);
        assert_eq!(FareyGroup.distance(&one, &FareyElement::r_pow(1000)), 0.0);
    }

    #[test]
    fn classification() {
        assert_eq!(m(2, 1, 1, 1).classify(), Classification::PseudoAnosov);
        assert_eq!(m(1, 1, 0, 1).classify(), Classification::ReducibleParabolic);
        assert_eq!(m(0, -1, 1, 0).classify(), Classification::PeriodicElliptic);
        assert_eq!(m(-1, 0, 0, -1).classify(), Classification::Identity);
        assert_eq!(m(-1, 3, 0, -1).classify(), Classification::ReducibleParabolic);
    }

    #[test]
    fn syllables_multiply_back() {
        let cases = [
            m(2, 1, 1, 1),
            m(0, -1, 1, 0),
            m(0, 1, -1, 5),
            m(-1, 0, 0, -1),
            m(-3, 7, 2, -5),
            m(13, 8, 8, 5),
            FareyElement::identity(),
        ];
        for g in cases {
            let (syl, negative) = g.syllables();
            let mut prod = FareyElement::identity();
            for s in &syl {
                prod = prod.mul(&s.matrix());
            }
            if negative {
                prod = prod.mul(&m(-1, 0, 0, -1));
            }
            assert_eq!(prod, g, "{g}");
        }
    }

    #[test]
    fn translation_length_examples() {
        let t = FareyGroup.translation_length(&FareyElement::r(), 16).unwrap();
        assert_eq!(t.value, 0.0);
        assert!(t.stabilized);
        assert!(FareyGroup.translation_length(&FareyElement::r(), 0).is_err());
    }

    #[test]
    fn conjugacy_bound_is_attained_by_a_conjugate() {
        let g = m(2, 1, 1, 1);
        let h = FareyElement::l_pow(5);
        let conj = h.mul(&g).mul(&h.inverse());
        let c = FareyGroup.conjugacy_min_length(&conj);
        assert!(!c.exact);
        assert!(c.length <= FareyGroup.norm(&conj));
        let back = c.conjugator.mul(&c.core).mul(&c.conjugator.inverse());
        assert_eq!(back, conj);
    }
}
