//! Free products, evaluation morphisms out of truncated free algebras
//! (the universal property made computational), and the codiagonal with its
//! kernel description.

use super::{FreeAlgebra, FreeElement, FreeError, Word};
use crate::algebra::Algebra;
use crate::linalg::{RatMatrix, Subspace};
use crate::scalar::Rat;
use num_traits::Zero;

/// Anything a truncated free algebra can be evaluated into: it needs a unit,
/// linear structure and a product. Implemented by structure-constant algebras
/// (elements are coordinate vectors) and by truncated free algebras.
pub trait TargetAlgebra {
    type Elem: Clone + PartialEq;

    fn unit_elem(&self) -> Self::Elem;
    fn zero_elem(&self) -> Self::Elem;
    fn add_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale_elem(&self, c: &Rat, a: &Self::Elem) -> Self::Elem;
    fn mul_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

impl TargetAlgebra for Algebra {
    type Elem = Vec<Rat>;

    fn unit_elem(&self) -> Vec<Rat> {
        self.unit().to_vec()
    }

    fn zero_elem(&self) -> Vec<Rat> {
        vec![Rat::zero(); self.dim()]
    }

    fn add_elem(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
    }

    fn scale_elem(&self, c: &Rat, a: &Vec<Rat>) -> Vec<Rat> {
        a.iter().map(|x| x * c).collect()
    }

    fn mul_elem(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        self.mul_vec(a, b)
            .expect("target elements have the algebra's dimension")
    }
}

impl TargetAlgebra for FreeAlgebra {
    type Elem = FreeElement;

    fn unit_elem(&self) -> FreeElement {
        self.one()
    }

    fn zero_elem(&self) -> FreeElement {
        self.zero()
    }

    fn add_elem(&self, a: &FreeElement, b: &FreeElement) -> FreeElement {
        a.add(b)
    }

    fn scale_elem(&self, c: &Rat, a: &FreeElement) -> FreeElement {
        a.scale(c)
    }

    fn mul_elem(&self, a: &FreeElement, b: &FreeElement) -> FreeElement {
        a.multiply(b).expect("target elements share the algebra")
    }
}

/// The algebra morphism out of a truncated free algebra determined by
/// generator images: words evaluate to products of images.
#[derive(Clone, Debug)]
pub struct Morphism<E> {
    source: FreeAlgebra,
    images: Vec<E>,
}

impl<E: Clone + PartialEq> Morphism<E> {
    pub fn new(source: FreeAlgebra, images: Vec<E>) -> Result<Morphism<E>, FreeError> {
        if images.len() != source.generator_count() {
            return Err(FreeError::LengthMismatch {
                expected: source.generator_count(),
                found: images.len(),
            });
        }
        Ok(Morphism { source, images })
    }

    pub fn source(&self) -> &FreeAlgebra {
        &self.source
    }

    pub fn generator_image(&self, i: usize) -> &E {
        &self.images[i]
    }

    pub fn apply_word<T: TargetAlgebra<Elem = E>>(&self, target: &T, w: &Word) -> E {
        let mut acc = target.unit_elem();
        for &letter in &w.0 {
            acc = target.mul_elem(&acc, &self.images[letter]);
        }
        acc
    }

    pub fn apply<T: TargetAlgebra<Elem = E>>(&self, target: &T, x: &FreeElement) -> E {
        assert_eq!(
            x.algebra(),
            &self.source,
            "element from a different source algebra"
        );
        let mut acc = target.zero_elem();
        for (w, c) in x.terms() {
            let img = self.apply_word(target, w);
            acc = target.add_elem(&acc, &target.scale_elem(c, &img));
        }
        acc
    }
}

/// A free product of truncated free algebras: the free algebra on the
/// disjoint union of the generators, with the two canonical embeddings.
#[derive(Clone, Debug)]
pub struct FreeProduct {
    pub algebra: FreeAlgebra,
    pub left: Morphism<FreeElement>,
    pub right: Morphism<FreeElement>,
}

/// k⟨X⟩ ∗ k⟨Y⟩ = k⟨X, Y⟩ at the given truncation degree. Fails on a
/// generator-name collision (rename, e.g. prime, before combining).
pub fn free_product(
    a: &FreeAlgebra,
    b: &FreeAlgebra,
    max_degree: usize,
) -> Result<FreeProduct, FreeError> {
    let mut names: Vec<String> = a.generators().to_vec();
    names.extend(b.generators().iter().cloned());
    let algebra = FreeAlgebra::new(names, max_degree)?;
    let left_images: Vec<FreeElement> = (0..a.generator_count())
        .map(|i| algebra.generator(i))
        .collect();
    let right_images: Vec<FreeElement> = (0..b.generator_count())
        .map(|i| algebra.generator(a.generator_count() + i))
        .collect();
    let left = Morphism::new(a.clone(), left_images)?;
    let right = Morphism::new(b.clone(), right_images)?;
    Ok(FreeProduct {
        algebra,
        left,
        right,
    })
}

impl FreeProduct {
    /// The universal map ψ: A∗B → C with ψ∘j_A and ψ∘j_B given on generators.
    pub fn universal_map<E: Clone + PartialEq>(
        &self,
        images_a: Vec<E>,
        images_b: Vec<E>,
    ) -> Result<Morphism<E>, FreeError> {
        let left_count = self.left.source().generator_count();
        let right_count = self.right.source().generator_count();
        if images_a.len() != left_count {
            return Err(FreeError::LengthMismatch {
                expected: left_count,
                found: images_a.len(),
            });
        }
        if images_b.len() != right_count {
            return Err(FreeError::LengthMismatch {
                expected: right_count,
                found: images_b.len(),
            });
        }
        let mut images = images_a;
        images.extend(images_b);
        Morphism::new(self.algebra.clone(), images)
    }
}

/// A∗A on a primed copy together with the codiagonal δ(x) = δ(x') = x.
pub fn codiagonal(factor: &FreeAlgebra) -> Result<(FreeProduct, Morphism<FreeElement>), FreeError> {
    let product = free_product(factor, &factor.primed(), factor.max_degree())?;
    let images: Vec<FreeElement> = (0..factor.generator_count())
        .map(|i| factor.generator(i))
        .collect();
    let delta = product.universal_map(images.clone(), images)?;
    Ok((product, delta))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodiagonalCheck {
    pub kernel_dim: usize,
    pub ideal_dim: usize,
    /// Whether ker(δ) equals the truncated two-sided ideal (x'ᵢ − xᵢ).
    pub matches: bool,
}

/// Computes ker(δ_codiag) on the word basis of A∗A and compares it with the
/// truncated two-sided ideal generated by the differences x'ᵢ − xᵢ.
pub fn codiagonal_kernel_check(factor: &FreeAlgebra) -> Result<CodiagonalCheck, FreeError> {
    let (product, delta) = codiagonal(factor)?;
    let source_words = product.algebra.words();
    let n_source = source_words.len();
    let n_target = factor.word_count();

    let mut delta_matrix = RatMatrix::zeros(n_target, n_source);
    for (j, w) in source_words.iter().enumerate() {
        let image = delta.apply_word(factor, w);
        for (k, c) in image.to_coordinates().into_iter().enumerate() {
            if !c.is_zero() {
                delta_matrix.set(k, j, c);
            }
        }
    }
    let kernel = Subspace::kernel(&delta_matrix);

    let g = factor.generator_count();
    let degree = factor.max_degree();
    let mut ideal_vectors: Vec<Vec<Rat>> = Vec::new();
    for i in 0..g {
        let diff = product
            .algebra
            .generator(g + i)
            .sub(&product.algebra.generator(i));
        for u in &source_words {
            if u.len() + 1 > degree {
                continue;
            }
            for v in &source_words {
                if u.len() + 1 + v.len() > degree {
                    continue;
                }
                let left = product
                    .algebra
                    .monomial(u.clone(), Rat::from_integer(1.into()));
                let right = product
                    .algebra
                    .monomial(v.clone(), Rat::from_integer(1.into()));
                let elem = left.multiply(&diff)?.multiply(&right)?;
                ideal_vectors.push(elem.to_coordinates());
            }
        }
    }
    let ideal = Subspace::canonicalize(&ideal_vectors, n_source)
        .expect("ideal vectors live in the source coordinate space");

    Ok(CodiagonalCheck {
        kernel_dim: kernel.dim(),
        ideal_dim: ideal.dim(),
        matches: kernel == ideal,
    })
}
