//! Multimorphisms over a designated sub-alphabet: the substitution map that
//! keeps words with exactly r Y-letters and replaces each Y by a chosen
//! element, and a seeded sampler for the interleaved product law
//! φ(a₁b₁a₂⋯b_n a_{n+1}) = a₁φ(b₁)a₂⋯φ(b_n)a_{n+1}.

use super::{FreeAlgebra, FreeElement, FreeError, LinearEndo, Word};
use crate::rng::SplitMix64;
use crate::scalar::rat_int;

fn y_letter_count(w: &Word, x_count: usize) -> usize {
    w.0.iter().filter(|&&l| l >= x_count).count()
}

/// The substitution multimorphism on k⟨X;Y⟩: a word with exactly `r`
/// Y-letters M₁Y_{i₁}M₂⋯Y_{i_r}M_{r+1} maps to M₁z_{i₁}M₂⋯z_{i_r}M_{r+1};
/// words with a different Y-count map to zero. `substitutions[i]` is z for
/// the i-th Y-generator (generator index `x_count + i`).
///
/// Substitutions with a constant term can break the interleaved law through
/// truncation alone (the image drops below words the source already cut off);
/// the genuinely multimorphic cases keep every z free of constants.
pub fn example11_map(
    algebra: &FreeAlgebra,
    x_count: usize,
    r: usize,
    substitutions: &[FreeElement],
) -> Result<LinearEndo, FreeError> {
    let y_count = algebra.generator_count().saturating_sub(x_count);
    if substitutions.len() != y_count {
        return Err(FreeError::LengthMismatch {
            expected: y_count,
            found: substitutions.len(),
        });
    }
    for z in substitutions {
        if z.algebra() != algebra {
            return Err(FreeError::AlgebraMismatch);
        }
    }
    let mut images = Vec::with_capacity(algebra.word_count());
    for w in algebra.words() {
        if y_letter_count(&w, x_count) != r {
            images.push(algebra.zero());
            continue;
        }
        let mut acc = algebra.one();
        for &letter in &w.0 {
            let factor = if letter < x_count {
                algebra.generator(letter)
            } else {
                substitutions[letter - x_count].clone()
            };
            acc = acc.multiply(&factor)?;
        }
        images.push(acc);
    }
    LinearEndo::from_word_images(algebra.clone(), images)
}

#[derive(Clone, Debug)]
pub struct MultimorphismWitness {
    pub shape: usize,
    pub outer: Vec<FreeElement>,
    pub inner: Vec<FreeElement>,
    pub lhs: FreeElement,
    pub rhs: FreeElement,
}

/// Samples the law for n ∈ {1, 2} on seeded pseudo-random tuples: the outer
/// elements range over the span of X-only words, the inner ones over the whole
/// algebra. Returns the first violating tuple, or `None` if all samples pass.
pub fn check_multimorphism(
    phi: &LinearEndo,
    x_count: usize,
    samples: usize,
    seed: u64,
) -> Result<Option<MultimorphismWitness>, FreeError> {
    let algebra = phi.algebra().clone();
    let words = algebra.words();
    let x_words: Vec<&Word> = words
        .iter()
        .filter(|w| y_letter_count(w, x_count) == 0)
        .collect();

    for index in 0..samples {
        let mut rng = SplitMix64::stream(seed, index as u64);
        let shape = 1 + (index % 2); // alternate n = 1 and n = 2
        let sample_from = |pool: &[&Word], rng: &mut SplitMix64| -> FreeElement {
            let mut e = algebra.zero();
            for _ in 0..2 {
                let w = pool[rng.below(pool.len() as u64) as usize];
                let c = rat_int(rng.int_in(-2, 2));
                e = e.add(&algebra.monomial(w.clone(), c));
            }
            e
        };
        let all_refs: Vec<&Word> = words.iter().collect();
        let outer: Vec<FreeElement> = (0..=shape)
            .map(|_| sample_from(&x_words, &mut rng))
            .collect();
        let inner: Vec<FreeElement> = (0..shape)
            .map(|_| sample_from(&all_refs, &mut rng))
            .collect();

        // a₁ b₁ a₂ ⋯ b_n a_{n+1}, interleaved.
        let mut product = outer[0].clone();
        for k in 0..shape {
            product = product.multiply(&inner[k])?.multiply(&outer[k + 1])?;
        }
        let lhs = phi.apply(&product);

        let mut rhs = outer[0].clone();
        for k in 0..shape {
            rhs = rhs
                .multiply(&phi.apply(&inner[k]))?
                .multiply(&outer[k + 1])?;
        }

        if lhs != rhs {
            return Ok(Some(MultimorphismWitness {
                shape,
                outer,
                inner,
                lhs,
                rhs,
            }));
        }
    }
    Ok(None)
}
