//! Degree-truncated free associative algebras k⟨x₁,…,x_g⟩ / (words longer
//! than D): word arithmetic, free products, evaluation morphisms, linear
//! endomorphisms, Hasse–Schmidt sequences and multimorphisms.
//!
//! The truncation ideal is two-sided, so the quotient product (concatenate,
//! then drop words longer than the bound) is well defined and associative.

mod endo;
mod morphism;
mod multimorphism;
mod parse;

pub use endo::{HasseSchmidt, HsViolation, LinearEndo};
pub use morphism::{
    codiagonal, codiagonal_kernel_check, free_product, CodiagonalCheck, FreeProduct, Morphism,
    TargetAlgebra,
};
pub use multimorphism::{check_multimorphism, example11_map, MultimorphismWitness};

use crate::algebra::{Algebra, AlgebraError, ScalarMode};
use crate::scalar::Rat;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Word bases above this size are outside desk scale for the exact engines.
const MAX_WORD_COUNT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeError {
    InvalidGeneratorName { name: String },
    NameCollision { name: String },
    AlgebraMismatch,
    LengthMismatch { expected: usize, found: usize },
    TooLarge { word_count: usize },
    NotADerivation { left: String, right: String },
    UnknownGenerator { name: String },
    Parse { position: usize, message: String },
}

impl fmt::Display for FreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeError::InvalidGeneratorName { name } => {
                write!(f, "invalid generator name '{name}'")
            }
            FreeError::NameCollision { name } => write!(f, "generator name collision: '{name}'"),
            FreeError::AlgebraMismatch => {
                write!(f, "elements belong to different truncated free algebras")
            }
            FreeError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} items, found {found}")
            }
            FreeError::TooLarge { word_count } => {
                write!(
                    f,
                    "word basis of size {word_count} exceeds the desk-scale cap {MAX_WORD_COUNT}"
                )
            }
            FreeError::NotADerivation { left, right } => {
                write!(f, "Leibniz rule fails on the pair ({left}, {right})")
            }
            FreeError::UnknownGenerator { name } => write!(f, "unknown generator '{name}'"),
            FreeError::Parse { position, message } => {
                write!(f, "parse error at byte {position}: {message}")
            }
        }
    }
}

impl std::error::Error for FreeError {}

/// A word in the generators, ordered degree-first then lexicographically,
/// which is the basis order used everywhere (matrices, labels, reports).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Descriptor of a truncated free algebra: generator names plus the degree
/// bound. Cheap to clone; carried by every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAlgebra {
    generators: Vec<String>,
    max_degree: usize,
}

impl FreeAlgebra {
    pub fn new(generators: Vec<String>, max_degree: usize) -> Result<FreeAlgebra, FreeError> {
        for name in &generators {
            let mut chars = name.chars();
            let valid = match chars.next() {
                None => false,
                Some(c) => {
                    c.is_ascii_alphabetic()
                        && chars.all(|c| c.is_ascii_alphanumeric() || c == '\'' || c == '_')
                }
            };
            if !valid {
                return Err(FreeError::InvalidGeneratorName { name: name.clone() });
            }
        }
        for (i, name) in generators.iter().enumerate() {
            if generators[..i].contains(name) {
                return Err(FreeError::NameCollision { name: name.clone() });
            }
        }
        let alg = FreeAlgebra {
            generators,
            max_degree,
        };
        let count = alg.checked_word_count().ok_or(FreeError::TooLarge {
            word_count: usize::MAX,
        })?;
        if count > MAX_WORD_COUNT {
            return Err(FreeError::TooLarge { word_count: count });
        }
        Ok(alg)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn checked_word_count(&self) -> Option<usize> {
        let g = self.generators.len();
        let mut total: usize = 0;
        let mut layer: usize = 1;
        for _ in 0..=self.max_degree {
            total = total.checked_add(layer)?;
            if total > MAX_WORD_COUNT {
                return Some(total);
            }
            layer = layer.checked_mul(g)?;
        }
        Some(total)
    }

    /// Number of basis words: 1 + g + g² + … + g^D.
    pub fn word_count(&self) -> usize {
        self.checked_word_count().expect("word count fits in usize")
    }

    /// All basis words in (length, lex) order.
    pub fn words(&self) -> Vec<Word> {
        let g = self.generators.len();
        let mut out = vec![Word::empty()];
        for len in 1..=self.max_degree {
            if g == 0 {
                break;
            }
            let mut digits = vec![0usize; len];
            loop {
                out.push(Word(digits.clone()));
                // next word of the same length
                let mut pos = len;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < g {
                        break;
                    }
                    digits[pos] = 0;
                }
                if digits.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }
        out
    }

    /// Position of a word in the (length, lex) basis order.
    pub fn word_index(&self, w: &Word) -> Option<usize> {
        if w.len() > self.max_degree {
            return None;
        }
        let g = self.generators.len();
        if w.0.iter().any(|&l| l >= g) {
            return None;
        }
        let mut offset = 0usize;
        let mut layer = 1usize;
        for _ in 0..w.len() {
            offset += layer;
            layer *= g;
        }
        let mut rank = 0usize;
        for &l in &w.0 {
            rank = rank * g + l;
        }
        Some(offset + rank)
    }

    pub fn word_label(&self, w: &Word) -> String {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.0.iter()
                .map(|&l| self.generators[l].as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn zero(&self) -> FreeElement {
        FreeElement {
            algebra: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> FreeElement {
        self.monomial(Word::empty(), Rat::one())
    }

    pub fn generator(&self, i: usize) -> FreeElement {
        assert!(i < self.generators.len(), "generator index out of range");
        self.monomial(Word(vec![i]), Rat::one())
    }

    pub fn monomial(&self, w: Word, coeff: Rat) -> FreeElement {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() && w.len() <= self.max_degree {
            terms.insert(w, coeff);
        }
        FreeElement {
            algebra: self.clone(),
            terms,
        }
    }

    /// A primed copy (x ↦ x') for building A∗A.
    pub fn primed(&self) -> FreeAlgebra {
        FreeAlgebra {
            generators: self.generators.iter().map(|g| format!("{g}'")).collect(),
            max_degree: self.max_degree,
        }
    }

    /// Word-syntax parser, e.g. `x*y*x + 2*y - 1/2*x'`.
    pub fn parse_element(&self, text: &str) -> Result<FreeElement, FreeError> {
        parse::parse_element(self, text)
    }

    /// The same algebra as a structure-constant [`Algebra`], basis in
    /// (length, lex) word order so matrices line up with [`LinearEndo`].
    pub fn to_structure_algebra(&self, mode: ScalarMode) -> Result<Algebra, AlgebraError> {
        let words = self.words();
        let dim = words.len();
        let labels: Vec<String> = words.iter().map(|w| self.word_label(w)).collect();
        let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                let w = u.concat(v);
                if let Some(k) = self.word_index(&w) {
                    table[i][j][k] = Rat::one();
                }
            }
        }
        let mut unit = vec![Rat::zero(); dim];
        unit[0] = Rat::one();
        Algebra::new(labels, table, unit, mode)
    }
}

/// A sparse element of a truncated free algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    algebra: FreeAlgebra,
    terms: BTreeMap<Word, Rat>,
}

impl FreeElement {
    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    /// Maximal word length with nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        assert_eq!(
            self.algebra, other.algebra,
            "free elements from different algebras"
        );
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let entry = terms.entry(w.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(w);
            }
        }
        FreeElement {
            algebra: self.algebra.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> FreeElement {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), -c.clone()))
            .collect();
        FreeElement {
            algebra: self.algebra.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> FreeElement {
        if c.is_zero() {
            return self.algebra.zero();
        }
        let terms = self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect();
        FreeElement {
            algebra: self.algebra.clone(),
            terms,
        }
    }

    /// Concatenation product, truncated past the degree bound.
    pub fn multiply(&self, other: &FreeElement) -> Result<FreeElement, FreeError> {
        if self.algebra != other.algebra {
            return Err(FreeError::AlgebraMismatch);
        }
        let bound = self.algebra.max_degree;
        let mut terms: BTreeMap<Word, Rat> = BTreeMap::new();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                if u.len() + v.len() > bound {
                    continue;
                }
                let w = u.concat(v);
                let entry = terms.entry(w).or_insert_with(Rat::zero);
                *entry += cu * cv;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(FreeElement {
            algebra: self.algebra.clone(),
            terms,
        })
    }

    pub fn pow(&self, k: usize) -> Result<FreeElement, FreeError> {
        let mut acc = self.algebra.one();
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Coordinates in the (length, lex) word basis.
    pub fn to_coordinates(&self) -> Vec<Rat> {
        let mut coords = vec![Rat::zero(); self.algebra.word_count()];
        for (w, c) in &self.terms {
            let idx = self
                .algebra
                .word_index(w)
                .expect("stored words fit the truncation");
            coords[idx] = c.clone();
        }
        coords
    }

    pub fn from_coordinates(
        algebra: &FreeAlgebra,
        coords: &[Rat],
    ) -> Result<FreeElement, FreeError> {
        let words = algebra.words();
        if coords.len() != words.len() {
            return Err(FreeError::LengthMismatch {
                expected: words.len(),
                found: coords.len(),
            });
        }
        let mut terms = BTreeMap::new();
        for (w, c) in words.into_iter().zip(coords.iter()) {
            if !c.is_zero() {
                terms.insert(w, c.clone());
            }
        }
        Ok(FreeElement {
            algebra: algebra.clone(),
            terms,
        })
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let negative = c < &Rat::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !abs.is_one() || w.is_empty();
            if show_coeff {
                write!(f, "{}", crate::scalar::format_rat(&abs))?;
            }
            if !w.is_empty() {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.algebra.word_label(w))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn two_gen(degree: usize) -> FreeAlgebra {
        FreeAlgebra::new(vec!["x".into(), "y".into()], degree).unwrap()
    }

    #[test]
    fn word_order_and_count() {
        let alg = two_gen(2);
        assert_eq!(alg.word_count(), 7);
        let words = alg.words();
        let labels: Vec<String> = words.iter().map(|w| alg.word_label(w)).collect();
        assert_eq!(labels, vec!["1", "x", "y", "x*x", "x*y", "y*x", "y*y"]);
        for (i, w) in words.iter().enumerate() {
            assert_eq!(alg.word_index(w), Some(i));
        }
    }

    #[test]
    fn multiplication_is_noncommutative_and_truncates() {
        let alg = two_gen(2);
        let x = alg.generator(0);
        let y = alg.generator(1);
        let xy = x.multiply(&y).unwrap();
        let yx = y.multiply(&x).unwrap();
        assert_ne!(xy, yx);
        assert_eq!(alg.word_label(xy.terms().next().unwrap().0), "x*y");

        // (x+y)·1 = x+y
        let s = x.add(&y);
        assert_eq!(s.multiply(&alg.one()).unwrap(), s);

        // (xy)·x truncates to zero at degree 2.
        assert!(xy.multiply(&x).unwrap().is_zero());
    }

    #[test]
    fn multiply_rejects_mismatched_algebras() {
        let a = two_gen(2);
        let b = two_gen(3);
        assert_eq!(
            a.one().multiply(&b.one()).unwrap_err(),
            FreeError::AlgebraMismatch
        );
    }

    #[test]
    fn associativity_on_random_triples() {
        let alg = two_gen(3);
        let mut rng = crate::rng::SplitMix64::new(99);
        let words = alg.words();
        for _ in 0..40 {
            let pick = |rng: &mut crate::rng::SplitMix64| {
                let mut e = alg.zero();
                for _ in 0..2 {
                    let w = words[rng.below(words.len() as u64) as usize].clone();
                    let c = rat_int(rng.int_in(-3, 3));
                    e = e.add(&alg.monomial(w, c));
                }
                e
            };
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert_eq!(left, right);
            assert_eq!(a.multiply(&alg.one()).unwrap(), a);
            assert_eq!(alg.one().multiply(&a).unwrap(), a);
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let alg = two_gen(2);
        let e = alg
            .generator(0)
            .multiply(&alg.generator(1))
            .unwrap()
            .add(&alg.one().scale(&rat(3, 2)));
        let coords = e.to_coordinates();
        let back = FreeElement::from_coordinates(&alg, &coords).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn structure_algebra_matches_word_products() {
        let alg = two_gen(2);
        let a = alg.to_structure_algebra(ScalarMode::Rational).unwrap();
        assert_eq!(a.dim(), 7);
        assert!(a.validate().is_empty());
        assert!(!a.is_commutative());
        // e_x · e_y = e_{x*y}
        let prod = a.mul_vec(&a.basis_vector(1), &a.basis_vector(2)).unwrap();
        assert_eq!(prod, a.basis_vector(4));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let alg = two_gen(3);
        let e = alg.parse_element("x*y*x + 2*y - 1/2*x").unwrap();
        let text = e.to_string();
        let back = alg.parse_element(&text).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn generator_name_validation() {
        assert!(FreeAlgebra::new(vec!["x".into(), "x".into()], 2).is_err());
        assert!(FreeAlgebra::new(vec!["2x".into()], 2).is_err());
        assert!(FreeAlgebra::new(vec!["x'".into()], 2).is_ok());
    }
}
