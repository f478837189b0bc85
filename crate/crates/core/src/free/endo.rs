//! Linear endomorphisms of a truncated free algebra, given by their images on
//! the word basis; derivations and Hasse–Schmidt sequences built from them.

use super::{FreeAlgebra, FreeElement, FreeError, Word};
use crate::linalg::RatMatrix;
use crate::scalar::{rat_int, Rat};
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct LinearEndo {
    algebra: FreeAlgebra,
    /// Image of each basis word, indexed in (length, lex) order.
    images: Vec<FreeElement>,
}

impl LinearEndo {
    pub fn from_word_images(
        algebra: FreeAlgebra,
        images: Vec<FreeElement>,
    ) -> Result<LinearEndo, FreeError> {
        if images.len() != algebra.word_count() {
            return Err(FreeError::LengthMismatch {
                expected: algebra.word_count(),
                found: images.len(),
            });
        }
        for img in &images {
            if img.algebra() != &algebra {
                return Err(FreeError::AlgebraMismatch);
            }
        }
        Ok(LinearEndo { algebra, images })
    }

    pub fn identity(algebra: &FreeAlgebra) -> LinearEndo {
        let images = algebra
            .words()
            .into_iter()
            .map(|w| algebra.monomial(w, Rat::from_integer(1.into())))
            .collect();
        LinearEndo {
            algebra: algebra.clone(),
            images,
        }
    }

    pub fn zero(algebra: &FreeAlgebra) -> LinearEndo {
        let images = vec![algebra.zero(); algebra.word_count()];
        LinearEndo {
            algebra: algebra.clone(),
            images,
        }
    }

    /// The Leibniz extension of generator images:
    /// d(w₁…w_n) = Σ_k w₁…w_{k−1} · d(w_k) · w_{k+1}…w_n, with truncated
    /// products. This is a derivation of the quotient whenever the images do
    /// not lower degree.
    pub fn derivation_from_generator_images(
        algebra: &FreeAlgebra,
        generator_images: Vec<FreeElement>,
    ) -> Result<LinearEndo, FreeError> {
        if generator_images.len() != algebra.generator_count() {
            return Err(FreeError::LengthMismatch {
                expected: algebra.generator_count(),
                found: generator_images.len(),
            });
        }
        for img in &generator_images {
            if img.algebra() != algebra {
                return Err(FreeError::AlgebraMismatch);
            }
        }
        let mut images = Vec::with_capacity(algebra.word_count());
        for w in algebra.words() {
            let mut total = algebra.zero();
            for k in 0..w.len() {
                let prefix = algebra.monomial(Word(w.0[..k].to_vec()), Rat::from_integer(1.into()));
                let suffix =
                    algebra.monomial(Word(w.0[k + 1..].to_vec()), Rat::from_integer(1.into()));
                let term = prefix
                    .multiply(&generator_images[w.0[k]])?
                    .multiply(&suffix)?;
                total = total.add(&term);
            }
            images.push(total);
        }
        Ok(LinearEndo {
            algebra: algebra.clone(),
            images,
        })
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn image_of_word(&self, w: &Word) -> &FreeElement {
        let idx = self
            .algebra
            .word_index(w)
            .expect("word fits the truncation");
        &self.images[idx]
    }

    /// Linear extension to arbitrary elements.
    pub fn apply(&self, x: &FreeElement) -> FreeElement {
        assert_eq!(
            x.algebra(),
            &self.algebra,
            "element from a different algebra"
        );
        let mut acc = self.algebra.zero();
        for (w, c) in x.terms() {
            let idx = self
                .algebra
                .word_index(w)
                .expect("stored words fit the truncation");
            acc = acc.add(&self.images[idx].scale(c));
        }
        acc
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearEndo) -> LinearEndo {
        assert_eq!(
            self.algebra, other.algebra,
            "endomorphisms of different algebras"
        );
        let images = other.images.iter().map(|img| self.apply(img)).collect();
        LinearEndo {
            algebra: self.algebra.clone(),
            images,
        }
    }

    pub fn scale(&self, c: &Rat) -> LinearEndo {
        let images = self.images.iter().map(|img| img.scale(c)).collect();
        LinearEndo {
            algebra: self.algebra.clone(),
            images,
        }
    }

    pub fn add(&self, other: &LinearEndo) -> LinearEndo {
        assert_eq!(
            self.algebra, other.algebra,
            "endomorphisms of different algebras"
        );
        let images = self
            .images
            .iter()
            .zip(other.images.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        LinearEndo {
            algebra: self.algebra.clone(),
            images,
        }
    }

    /// First basis pair violating d(uv) = d(u)v + u d(v) (products truncated),
    /// or `None` when the map is a derivation of the quotient.
    pub fn derivation_violation(&self) -> Result<Option<(Word, Word)>, FreeError> {
        let words = self.algebra.words();
        for u in &words {
            for v in &words {
                let uv = self
                    .algebra
                    .monomial(u.clone(), Rat::from_integer(1.into()))
                    .multiply(
                        &self
                            .algebra
                            .monomial(v.clone(), Rat::from_integer(1.into())),
                    )?;
                let lhs = self.apply(&uv);
                let du_v = self.image_of_word(u).multiply(
                    &self
                        .algebra
                        .monomial(v.clone(), Rat::from_integer(1.into())),
                )?;
                let u_dv = self
                    .algebra
                    .monomial(u.clone(), Rat::from_integer(1.into()))
                    .multiply(self.image_of_word(v))?;
                if lhs != du_v.add(&u_dv) {
                    return Ok(Some((u.clone(), v.clone())));
                }
            }
        }
        Ok(None)
    }

    /// Matrix on word-basis coordinates (column j = image of word j).
    pub fn to_matrix(&self) -> RatMatrix {
        let n = self.algebra.word_count();
        let mut m = RatMatrix::zeros(n, n);
        for (j, img) in self.images.iter().enumerate() {
            for (k, c) in img.to_coordinates().into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(k, j, c);
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HsViolation {
    pub level: usize,
    pub left: Word,
    pub right: Word,
}

/// A Hasse–Schmidt sequence (∂₀ = id, ∂₁, …, ∂_N), stored with its defining
/// convolution Leibniz law checkable exactly on the word basis.
#[derive(Clone, Debug)]
pub struct HasseSchmidt {
    algebra: FreeAlgebra,
    maps: Vec<LinearEndo>,
}

impl HasseSchmidt {
    /// Builds ∂_n = dⁿ/n! from a derivation d. Fails if `d` is not a
    /// derivation of the truncated algebra.
    pub fn from_derivation(d: &LinearEndo, length: usize) -> Result<HasseSchmidt, FreeError> {
        if let Some((u, v)) = d.derivation_violation()? {
            let alg = d.algebra();
            return Err(FreeError::NotADerivation {
                left: alg.word_label(&u),
                right: alg.word_label(&v),
            });
        }
        let algebra = d.algebra().clone();
        let mut maps = vec![LinearEndo::identity(&algebra)];
        for n in 1..=length {
            let next = d
                .compose(&maps[n - 1])
                .scale(&(Rat::from_integer(1.into()) / rat_int(n as i64)));
            maps.push(next);
        }
        Ok(HasseSchmidt { algebra, maps })
    }

    pub fn from_maps(maps: Vec<LinearEndo>) -> Result<HasseSchmidt, FreeError> {
        let algebra = match maps.first() {
            None => {
                return Err(FreeError::LengthMismatch {
                    expected: 1,
                    found: 0,
                })
            }
            Some(first) => first.algebra().clone(),
        };
        for m in &maps {
            if m.algebra() != &algebra {
                return Err(FreeError::AlgebraMismatch);
            }
        }
        Ok(HasseSchmidt { algebra, maps })
    }

    pub fn len(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.maps.len() <= 1
    }

    pub fn map(&self, n: usize) -> &LinearEndo {
        &self.maps[n]
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    /// First violation of ∂_n(t·x) = Σᵢ ∂ᵢ(t)·∂_{n−i}(x) over all basis pairs
    /// and 0 ≤ n ≤ N, or `None` when the sequence is Hasse–Schmidt.
    pub fn violation(&self) -> Result<Option<HsViolation>, FreeError> {
        let words = self.algebra.words();
        let one = Rat::from_integer(1.into());
        for n in 0..self.maps.len() {
            for t in &words {
                let t_elem = self.algebra.monomial(t.clone(), one.clone());
                for x in &words {
                    let x_elem = self.algebra.monomial(x.clone(), one.clone());
                    let tx = t_elem.multiply(&x_elem)?;
                    let lhs = self.maps[n].apply(&tx);
                    let mut rhs = self.algebra.zero();
                    for i in 0..=n {
                        let left = self.maps[i].apply(&t_elem);
                        let right = self.maps[n - i].apply(&x_elem);
                        rhs = rhs.add(&left.multiply(&right)?);
                    }
                    if lhs != rhs {
                        return Ok(Some(HsViolation {
                            level: n,
                            left: t.clone(),
                            right: x.clone(),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn holds(&self) -> bool {
        matches!(self.violation(), Ok(None))
    }
}
