//! The free group of rank two acting on its Cayley tree.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{ConjugacyMin, Model, ModelError, TranslationLength};
use crate::hypgeom::SpaceDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    AInv,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AInv, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::AInv => 'A',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'A' => Some(Letter::AInv),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

/// A freely reduced word over `{a, b, A, B}` (capitals are inverses).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        FreeWord(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Right-multiplies by a single letter, cancelling if needed.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn pow(&self, n: usize) -> FreeWord {
        let mut out = FreeWord::identity();
        for _ in 0..n {
            out.mul_assign_word(self);
        }
        out
    }

    pub fn mul_assign_word(&mut self, other: &FreeWord) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn prefix(&self, len: usize) -> FreeWord {
        FreeWord(self.0[..len].to_vec())
    }

    /// Length of the longest common prefix, which is the Gromov product
    /// `(g·h)_1` in the tree.
    pub fn common_prefix_len(&self, other: &FreeWord) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .take_while(|(x, y)| x == y)
            .count()
    }

    /// Splits `self = v·s·v⁻¹` with `s` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (FreeWord, FreeWord) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (
            FreeWord(self.0[..k].to_vec()),
            FreeWord(self.0[k..n - k].to_vec()),
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// A uniformly random reduced word of exactly `len` letters.
    pub fn random_reduced<R: Rng + ?Sized>(len: usize, rng: &mut R) -> FreeWord {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        for _ in 0..len {
            let l = loop {
                let c = Letter::ALL[rng.random_range(0..4)];
                if letters.last() != Some(&c.inverse()) {
                    break c;
                }
            };
            letters.push(l);
        }
        FreeWord(letters)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = ModelError;

    /// Accepts `1` or the empty string for the identity; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() || t == "1" {
            return Ok(FreeWord::identity());
        }
        let mut letters = Vec::with_capacity(t.len());
        for c in t.chars() {
            match Letter::from_char(c) {
                Some(l) => letters.push(l),
                None => {
                    return Err(ModelError::parse(
                        "free word",
                        s,
                        format!("unexpected character {c:?}, expected one of a, b, A, B"),
                    ))
                }
            }
        }
        Ok(FreeWord::from_letters(letters))
    }
}

/// `F₂ = ⟨a, b⟩` acting on its 4-valent Cayley tree, basepoint the identity
/// vertex.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeGroup;

impl Model for FreeGroup {
    type Element = FreeWord;

    fn name(&self) -> &'static str {
        "free"
    }

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor {
            delta: 0.0,
            basepoint_label: "1".to_string(),
        }
    }

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn multiply(&self, g: &FreeWord, h: &FreeWord) -> FreeWord {
        let mut out = g.clone();
        out.mul_assign_word(h);
        out
    }

    fn invert(&self, g: &FreeWord) -> FreeWord {
        g.inverse()
    }

    fn multiply_assign(&self, g: &mut FreeWord, h: &FreeWord) {
        g.mul_assign_word(h);
    }

    fn distance(&self, g: &FreeWord, h: &FreeWord) -> f64 {
        let p = g.common_prefix_len(h);
        (g.len() + h.len() - 2 * p) as f64
    }

    fn norm(&self, g: &FreeWord) -> f64 {
        g.len() as f64
    }

    fn generators(&self) -> Vec<FreeWord> {
        Letter::ALL.iter().map(|&l| FreeWord::letter(l)).collect()
    }

    fn random_element<R: Rng + ?Sized>(&self, max_len: usize, rng: &mut R) -> FreeWord {
        let len = rng.random_range(0..=max_len);
        FreeWord::random_reduced(len, rng)
    }

    fn is_loxodromic(&self, g: &FreeWord) -> bool {
        !g.is_empty()
    }

    /// Exact in the tree: the length of the cyclic reduction. `horizon` only
    /// has to be non-zero.
    fn translation_length(
        &self,
        g: &FreeWord,
        horizon: usize,
    ) -> Result<TranslationLength, ModelError> {
        if horizon == 0 {
            return Err(ModelError::ZeroHorizon);
        }
        let (_, core) = g.cyclic_decomposition();
        Ok(TranslationLength {
            value: core.len() as f64,
            stabilized: true,
            period: None,
        })
    }

    fn conjugacy_min_length(&self, g: &FreeWord) -> ConjugacyMin<FreeWord> {
        let (v, s) = g.cyclic_decomposition();
        ConjugacyMin {
            length: s.len() as f64,
            conjugator: v,
            core: s,
            exact: true,
        }
    }

    fn parse_element(&self, text: &str) -> Result<FreeWord, ModelError> {
        text.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::check_conjugacy_shadow_conditions;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_reduces() {
        assert_eq!(FreeGroup.multiply(&w("ab"), &w("Ba")), w("aa"));
        let g = w("abAbb");
        assert_eq!(FreeGroup.multiply(&g, &g.inverse()), FreeWord::identity());
    }

    #[test]
    fn parse_reduces_and_prints_canonically() {
        assert_eq!(w("aAb").to_string(), "b");
        assert_eq!(w("").to_string(), "1");
        assert_eq!(w("1"), FreeWord::identity());
        assert!("abc".parse::<FreeWord>().is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(FreeGroup.invert(&w("abA")), w("aBA"));
        assert_eq!(FreeGroup.invert(&FreeWord::identity()), FreeWord::identity());
    }

    #[test]
    fn distance_is_word_length_of_quotient() {
        assert_eq!(FreeGroup.distance(&FreeWord::identity(), &w("aaB")), 3.0);
        assert_eq!(FreeGroup.distance(&w("aab"), &w("aaba")), 1.0);
        assert_eq!(FreeGroup.distance(&w("ab"), &w("aB")), 2.0);
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(
            FreeGroup.translation_length(&w("abA"), 1).unwrap().value,
            1.0
        );
        let c = FreeGroup.conjugacy_min_length(&w("aaabAAA"));
        assert_eq!(c.length, 1.0);
        assert_eq!(c.conjugator, w("aaa"));
        assert_eq!(c.core, w("b"));
        let c = FreeGroup.conjugacy_min_length(&w("ab"));
        assert_eq!((c.length, c.conjugator), (2.0, FreeWord::identity()));
        // odd-length palindromic cancellation keeps the middle letter
        let c = FreeGroup.conjugacy_min_length(&w("abA"));
        assert_eq!(c.core, w("b"));
    }

    #[test]
    fn zero_horizon_is_an_error() {
        assert_eq!(
            FreeGroup.translation_length(&w("a"), 0),
            Err(ModelError::ZeroHorizon)
        );
    }

    #[test]
    fn conjugacy_conditions_worked_example() {
        let v = w("aaaaaaaa");
        let s = w("b");
        let g = FreeGroup.multiply(&FreeGroup.multiply(&v, &s), &v.inverse());
        assert_eq!(
            check_conjugacy_shadow_conditions(&FreeGroup, &g, &v, &s, 0.5).unwrap(),
            [true, true, true]
        );
        // cyclically reduced g, trivial conjugator, K ≥ |g|/2
        let g = w("abab");
        let one = FreeWord::identity();
        assert_eq!(
            check_conjugacy_shadow_conditions(&FreeGroup, &g, &one, &g, 2.0).unwrap(),
            [true, true, true]
        );
        assert!(check_conjugacy_shadow_conditions(&FreeGroup, &g, &v, &s, 1.0).is_err());
    }
}
