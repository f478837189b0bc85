//! Principal parts Pⁿ = (A⊗A)/J^{n+1} for a commutative algebra A, where J is
//! the kernel of the multiplication map m : A⊗A → A, with the left A-module
//! structure through a⊗1 and the map jₙ(a) = class of 1⊗a.
//!
//! Operators of order ≤ n arise as composites φ∘jₙ with φ a left-module
//! morphism Pⁿ → A; this is an independent construction of the filtration
//! levels, used as an oracle against the commutator recursion.

use crate::algebra::{Algebra, AlgebraError};
use crate::linalg::{LinalgError, RatMatrix, Subspace};
use crate::scalar::Rat;
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalPartsError {
    /// For a non-commutative algebra the multiplication map is not an algebra
    /// morphism, so J is not an ideal and the construction does not apply.
    NotCommutative,
    Linalg(LinalgError),
    Algebra(AlgebraError),
}

impl fmt::Display for PrincipalPartsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrincipalPartsError::NotCommutative => {
                write!(f, "principal parts require a commutative algebra")
            }
            PrincipalPartsError::Linalg(e) => write!(f, "{e}"),
            PrincipalPartsError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PrincipalPartsError {}

impl From<LinalgError> for PrincipalPartsError {
    fn from(e: LinalgError) -> Self {
        PrincipalPartsError::Linalg(e)
    }
}

impl From<AlgebraError> for PrincipalPartsError {
    fn from(e: AlgebraError) -> Self {
        PrincipalPartsError::Algebra(e)
    }
}

/// J = ker(m : A⊗A → A); its dimension is d² − d since m is onto.
pub fn mult_kernel(a: &Algebra) -> Result<Subspace, PrincipalPartsError> {
    if !a.is_commutative() {
        return Err(PrincipalPartsError::NotCommutative);
    }
    let (_, mult_map) = a.tensor_square();
    Ok(Subspace::kernel(&mult_map))
}

/// J^k inside an ambient algebra, by iterated two-factor product spans
/// (ideal powers associate). J⁰ is the full space by the unit-ideal
/// convention.
pub fn ideal_power(
    ambient: &Algebra,
    ideal: &Subspace,
    k: usize,
) -> Result<Subspace, PrincipalPartsError> {
    if k == 0 {
        return Ok(Subspace::full(ambient.dim()));
    }
    let mut acc = ideal.clone();
    for _ in 1..k {
        acc = ambient.subspace_product(&acc, ideal)?;
    }
    Ok(acc)
}

/// Least k ≤ cap with J^k = 0, or `None` if no power up to the cap vanishes
/// (powers that stabilize nonzero never vanish).
pub fn ideal_nilpotency_index(
    ambient: &Algebra,
    ideal: &Subspace,
    cap: usize,
) -> Result<Option<usize>, PrincipalPartsError> {
    let mut current = ideal.clone();
    for k in 1..=cap {
        if current.is_zero() {
            return Ok(Some(k));
        }
        let next = ambient.subspace_product(&current, ideal)?;
        if next == current {
            return Ok(None);
        }
        current = next;
    }
    Ok(None)
}

/// The assembled quotient Pⁿ with its coordinate maps. Quotient coordinates
/// are the non-pivot coordinates of the RREF of J^{n+1}, so the presentation
/// is deterministic.
#[derive(Clone, Debug)]
pub struct PrincipalParts {
    algebra: Algebra,
    order: usize,
    quotient_dim: usize,
    /// q × d²; kernel is exactly J^{n+1}.
    projection: RatMatrix,
    /// q × d: a ↦ 1⊗a mod J^{n+1}.
    j_map: RatMatrix,
    /// Left multiplication by e_i⊗1 on the quotient, one q × q matrix per i.
    left_action: Vec<RatMatrix>,
}

impl PrincipalParts {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient_dim
    }

    pub fn projection(&self) -> &RatMatrix {
        &self.projection
    }

    pub fn j_map(&self) -> &RatMatrix {
        &self.j_map
    }

    pub fn left_action(&self) -> &[RatMatrix] {
        &self.left_action
    }

    /// Quotient class of a tensor-square coordinate vector.
    pub fn class_of(&self, tensor_coords: &[Rat]) -> Result<Vec<Rat>, PrincipalPartsError> {
        Ok(self.projection.mul_vec(tensor_coords)?)
    }
}

/// Builds Pⁿ = (A⊗A)/J^{n+1} together with jₙ and the left action.
pub fn build(a: &Algebra, n: usize) -> Result<PrincipalParts, PrincipalPartsError> {
    if !a.is_commutative() {
        return Err(PrincipalPartsError::NotCommutative);
    }
    let d = a.dim();
    let dd = d * d;
    let (tensor, mult_map) = a.tensor_square();
    let j = Subspace::kernel(&mult_map);
    let j_power = ideal_power(&tensor, &j, n + 1)?;

    // The annihilator functionals of J^{n+1} are precisely the non-pivot
    // coordinates of the reduction mod J^{n+1}: the projection matrix.
    let projection = RatMatrix::from_rows(j_power.annihilator_rows(), dd)?;
    let quotient_dim = projection.rows();

    let pivots = j_power.pivots();
    let mut is_pivot = vec![false; dd];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut section = RatMatrix::zeros(dd, quotient_dim);
    let mut t = 0;
    for c in 0..dd {
        if !is_pivot[c] {
            section.set(c, t, Rat::from_integer(1.into()));
            t += 1;
        }
    }

    // a ↦ 1⊗a: coordinate (i·d + j) of 1⊗e_j is unit_i.
    let mut one_tensor = RatMatrix::zeros(dd, d);
    for (i, u) in a.unit().iter().enumerate() {
        if !u.is_zero() {
            for jj in 0..d {
                one_tensor.set(i * d + jj, jj, u.clone());
            }
        }
    }
    let j_map = projection.mul(&one_tensor)?;

    let mut left_action = Vec::with_capacity(d);
    for i in 0..d {
        // e_i⊗1 has coordinate (i·d + k) = unit_k.
        let mut coords = vec![Rat::zero(); dd];
        for (k, u) in a.unit().iter().enumerate() {
            coords[i * d + k] = u.clone();
        }
        let l = tensor.left_mult(&coords)?.matrix;
        left_action.push(projection.mul(&l)?.mul(&section)?);
    }

    Ok(PrincipalParts {
        algebra: a.clone(),
        order: n,
        quotient_dim,
        projection,
        j_map,
        left_action,
    })
}

/// The operators induced by Pⁿ, together with the dimension of the hom space
/// Hom_A(Pⁿ, A) they came from. The two dimensions are reported separately:
/// φ ↦ φ∘jₙ is injective on every corpus algebra, but that is recorded as an
/// observation (`is_injective`), not assumed.
#[derive(Clone, Debug)]
pub struct InducedOperators {
    pub operators: Subspace,
    pub hom_dim: usize,
}

impl InducedOperators {
    pub fn is_injective(&self) -> bool {
        self.operators.dim() == self.hom_dim
    }
}

/// Computes the space of left-A-module morphisms φ : Pⁿ → A and returns the
/// canonical span of {φ∘jₙ} inside End_k(A).
pub fn induced_operators(a: &Algebra, n: usize) -> Result<InducedOperators, PrincipalPartsError> {
    let pp = build(a, n)?;
    let d = a.dim();
    let q = pp.quotient_dim;
    let unknowns = d * q;

    // F·Mᵢ = Lᵢ·F for all i, F a d×q matrix (row-major unknowns F_{rc} at r·q+c).
    let mut constraints: Vec<Vec<Rat>> = Vec::new();
    for i in 0..d {
        let m_i = &pp.left_action[i];
        let l_i = a.left_mult_basis(i);
        for p in 0..d {
            for t in 0..q {
                let mut row = vec![Rat::zero(); unknowns];
                for s in 0..q {
                    let mv = m_i.get(s, t);
                    if !mv.is_zero() {
                        row[p * q + s] += mv;
                    }
                }
                for r in 0..d {
                    let lv = l_i.get(p, r);
                    if !lv.is_zero() {
                        row[r * q + t] -= lv;
                    }
                }
                if row.iter().any(|v| !v.is_zero()) {
                    constraints.push(row);
                }
            }
        }
    }
    let hom_space = Subspace::common_kernel(constraints, unknowns);
    let hom_dim = hom_space.dim();

    let mut operator_vectors = Vec::with_capacity(hom_dim);
    for f_flat in hom_space.basis() {
        let f = RatMatrix::new(d, q, f_flat.clone())?;
        operator_vectors.push(f.mul(&pp.j_map)?.flatten());
    }
    let operators = Subspace::canonicalize(&operator_vectors, d * d)?;
    Ok(InducedOperators { operators, hom_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Preset, ScalarMode};
    use crate::filtration::commutative_filtration;
    use crate::scalar::rat_int;

    fn build_preset(p: Preset) -> Algebra {
        p.build(ScalarMode::Rational).unwrap()
    }

    #[test]
    fn mult_kernel_dims() {
        let base = build_preset(Preset::TruncatedPoly {
            vars: 1,
            max_degree: 0,
        });
        assert_eq!(mult_kernel(&base).unwrap().dim(), 0);

        let dual = build_preset(Preset::DualNumbers);
        let j = mult_kernel(&dual).unwrap();
        assert_eq!(j.dim(), 2);

        // e_i⊗1 − 1⊗e_i lies in J for every i.
        let d = dual.dim();
        for i in 0..d {
            let mut v = vec![Rat::zero(); d * d];
            for (k, u) in dual.unit().iter().enumerate() {
                v[i * d + k] += u;
                v[k * d + i] -= u;
            }
            assert!(j.contains(&v).unwrap());
        }
    }

    #[test]
    fn mult_kernel_rejects_noncommutative() {
        let m2 = build_preset(Preset::MatrixAlgebra { n: 2 });
        assert!(matches!(
            mult_kernel(&m2),
            Err(PrincipalPartsError::NotCommutative)
        ));
    }

    #[test]
    fn ideal_powers_of_dual_numbers() {
        let dual = build_preset(Preset::DualNumbers);
        let (tensor, _) = dual.tensor_square();
        let j = mult_kernel(&dual).unwrap();
        let j0 = ideal_power(&tensor, &j, 0).unwrap();
        assert!(j0.is_full());
        let j2 = ideal_power(&tensor, &j, 2).unwrap();
        // J = span{1⊗X − X⊗1, X⊗X}, and squaring leaves span{X⊗X}.
        assert_eq!(j2.dim(), 1);
        let mut xx = vec![Rat::zero(); 4];
        xx[3] = rat_int(1);
        assert!(j2.contains(&xx).unwrap());
        // Antitone and eventually zero.
        assert!(j2.is_subspace_of(&j).unwrap());
        assert_eq!(ideal_nilpotency_index(&tensor, &j, 8).unwrap(), Some(3));
    }

    #[test]
    fn order_zero_is_the_algebra_itself() {
        let dual = build_preset(Preset::DualNumbers);
        let pp = build(&dual, 0).unwrap();
        assert_eq!(pp.quotient_dim(), dual.dim());
        let induced = induced_operators(&dual, 0).unwrap();
        let (l, _) = dual.mult_op_spans();
        assert_eq!(induced.operators, l);
        assert_eq!(induced.hom_dim, dual.dim());
        assert!(induced.is_injective());
    }

    #[test]
    fn dual_numbers_quotient_dims() {
        let dual = build_preset(Preset::DualNumbers);
        // dim J² = 1, so P¹ has dimension 4 − 1 = 3.
        assert_eq!(build(&dual, 1).unwrap().quotient_dim(), 3);
        // J³ = 0, so P² is all of A⊗A.
        assert_eq!(build(&dual, 2).unwrap().quotient_dim(), 4);
    }

    #[test]
    fn j_map_sends_unit_to_class_of_one_tensor_one() {
        for preset in [
            Preset::DualNumbers,
            Preset::TruncatedPoly {
                vars: 2,
                max_degree: 2,
            },
        ] {
            let a = build_preset(preset);
            for n in 0..=2 {
                let pp = build(&a, n).unwrap();
                let j_of_one = pp.j_map().mul_vec(a.unit()).unwrap();
                let d = a.dim();
                let mut one_tensor_one = vec![Rat::zero(); d * d];
                for (i, ui) in a.unit().iter().enumerate() {
                    for (k, uk) in a.unit().iter().enumerate() {
                        one_tensor_one[i * d + k] = ui * uk;
                    }
                }
                assert_eq!(j_of_one, pp.class_of(&one_tensor_one).unwrap());
            }
        }
    }

    #[test]
    fn left_action_satisfies_module_law() {
        let a = build_preset(Preset::TruncatedPoly {
            vars: 1,
            max_degree: 2,
        });
        let d = a.dim();
        for n in 0..=2 {
            let pp = build(&a, n).unwrap();
            for i in 0..d {
                for jj in 0..d {
                    let lhs = pp.left_action[i].mul(&pp.left_action[jj]).unwrap();
                    let mut rhs = RatMatrix::zeros(pp.quotient_dim(), pp.quotient_dim());
                    for k in 0..d {
                        let c = a.structure_constant(i, jj, k).clone();
                        if !c.is_zero() {
                            rhs = rhs.add(&pp.left_action[k].scaled(&c)).unwrap();
                        }
                    }
                    assert_eq!(lhs, rhs, "module law at ({i},{jj}), n = {n}");
                }
            }
        }
    }

    #[test]
    fn projection_kernel_is_ideal_power() {
        let a = build_preset(Preset::DualNumbers);
        let (tensor, _) = a.tensor_square();
        let j = mult_kernel(&a).unwrap();
        for n in 0..=2 {
            let pp = build(&a, n).unwrap();
            let kernel = Subspace::kernel(pp.projection());
            assert_eq!(kernel, ideal_power(&tensor, &j, n + 1).unwrap());
        }
    }

    #[test]
    fn induced_operators_match_filtration_on_dual_numbers() {
        let a = build_preset(Preset::DualNumbers);
        let f = commutative_filtration(&a, 2).unwrap();
        for n in 0..=2 {
            let induced = induced_operators(&a, n).unwrap();
            assert_eq!(&induced.operators, f.level(n).unwrap(), "level {n}");
        }
        assert_eq!(induced_operators(&a, 1).unwrap().operators.dim(), 3);
        assert_eq!(induced_operators(&a, 2).unwrap().operators.dim(), 4);
    }
}
