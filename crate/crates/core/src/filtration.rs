//! The operator filtrations D₀ ⊆ D₁ ⊆ … inside End_k(A).
//!
//! Commutative recursion: D_{n+1} = {d : d·l_t − l_t·d ∈ D_n for all t},
//! starting from D₋₁ = 0. Non-commutative version: the same commutator
//! condition defines the primed spaces D′_n, and each level is the sandwich
//! D_n = L_A·D′_n·L_A by product spans.
//!
//! "For all t" is reduced to basis elements throughout: t ↦ ad(t) is linear
//! and every level is a subspace, hence closed under the induced linear
//! conditions.

use crate::algebra::{Algebra, AlgebraError, ScalarMode};
use crate::linalg::{integer_kernel, IntegerLattice, LinalgError, RatMatrix, Subspace};
use crate::scalar::{clear_denominators, is_integer, Int, Rat};
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiltrationMode {
    Commutative,
    Noncommutative,
}

impl fmt::Display for FiltrationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationMode::Commutative => write!(f, "comm"),
            FiltrationMode::Noncommutative => write!(f, "nc"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationError {
    /// The commutative recursion and the iterated-commutator test are only
    /// stated for commutative algebras.
    NotCommutative,
    /// Lattice-level filtrations need an algebra in ℤ-mode.
    NotIntegerMode,
    LevelOutOfRange {
        level: usize,
        n_max: usize,
    },
    NonIntegerOperator,
    Linalg(LinalgError),
    Algebra(AlgebraError),
}

impl fmt::Display for FiltrationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationError::NotCommutative => write!(f, "the algebra is not commutative"),
            FiltrationError::NotIntegerMode => {
                write!(f, "Z-mode filtrations need a Z-mode algebra")
            }
            FiltrationError::LevelOutOfRange { level, n_max } => {
                write!(f, "level {level} out of range (n_max = {n_max})")
            }
            FiltrationError::NonIntegerOperator => {
                write!(f, "operator has non-integer entries in Z-mode")
            }
            FiltrationError::Linalg(e) => write!(f, "{e}"),
            FiltrationError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FiltrationError {}

impl From<LinalgError> for FiltrationError {
    fn from(e: LinalgError) -> Self {
        FiltrationError::Linalg(e)
    }
}

impl From<AlgebraError> for FiltrationError {
    fn from(e: AlgebraError) -> Self {
        FiltrationError::Algebra(e)
    }
}

/// A computed filtration over ℚ. Levels are canonical subspaces of the
/// d²-coordinate endomorphism space, so level equality is data equality.
#[derive(Clone, Debug)]
pub struct Filtration {
    algebra: Algebra,
    mode: FiltrationMode,
    n_max: usize,
    levels: Vec<Subspace>,
    primed_levels: Option<Vec<Subspace>>,
    stabilized_at: Option<usize>,
}

impl Filtration {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn mode(&self) -> FiltrationMode {
        self.mode
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn levels(&self) -> &[Subspace] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Result<&Subspace, FiltrationError> {
        self.levels.get(n).ok_or(FiltrationError::LevelOutOfRange {
            level: n,
            n_max: self.n_max,
        })
    }

    /// D′_n; only stored in non-commutative mode.
    pub fn primed_levels(&self) -> Option<&[Subspace]> {
        self.primed_levels.as_deref()
    }

    /// Least n with D_n = D_{n+1} = … = D_{n_max} and n < n_max; `None` when
    /// the chain is still growing at the top.
    pub fn stabilized_at(&self) -> Option<usize> {
        self.stabilized_at
    }

    /// Least n with D ∈ D_n, or `None` when D lies outside every computed
    /// level.
    pub fn operator_order(&self, operator: &RatMatrix) -> Result<Option<usize>, FiltrationError> {
        let d = self.algebra.dim();
        if operator.rows() != d || operator.cols() != d {
            return Err(FiltrationError::Linalg(LinalgError::ShapeMismatch {
                detail: format!("operator must be {d}x{d}"),
            }));
        }
        let v = operator.flatten();
        for (n, level) in self.levels.iter().enumerate() {
            if level.contains(&v)? {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

/// Default chain length: chains at desk scale stabilize quickly, and dim+1
/// keeps every run finite.
pub fn default_n_max(a: &Algebra) -> usize {
    a.dim() + 1
}

/// Constraint rows expressing "w(φ·l_i − l_i·φ) = 0 for every annihilator
/// functional w of the previous level and every basis index i"; the kernel of
/// these rows is exactly {φ : ad(e_i)(φ) ∈ prev ∀i}.
fn commutator_condition_rows(a: &Algebra, prev: &Subspace) -> Vec<Vec<Rat>> {
    let d = a.dim();
    let dd = a.endo_ambient();
    let annihilator = prev.annihilator_rows();
    let mults: Vec<RatMatrix> = (0..d).map(|i| a.left_mult_basis(i)).collect();
    let mut rows = Vec::with_capacity(annihilator.len() * d);
    for l in &mults {
        for w in &annihilator {
            let mut row = vec![Rat::zero(); dd];
            for (idx, wv) in w.iter().enumerate() {
                if wv.is_zero() {
                    continue;
                }
                let p = idx / d;
                let q = idx % d;
                // w_{pq} · (φ l)_{pq} contributes w_{pq}·l_{bq} at column (p,b);
                // w_{pq} · (l φ)_{pq} contributes w_{pq}·l_{pa} at column (a,q).
                for b in 0..d {
                    let lv = l.get(b, q);
                    if !lv.is_zero() {
                        row[p * d + b] += wv * lv;
                    }
                }
                for col in 0..d {
                    let lv = l.get(p, col);
                    if !lv.is_zero() {
                        row[col * d + q] -= wv * lv;
                    }
                }
            }
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

/// {φ ∈ End : ad(e_i)(φ) ∈ prev for all i}.
fn commutator_condition_space(a: &Algebra, prev: &Subspace) -> Subspace {
    Subspace::common_kernel(commutator_condition_rows(a, prev), a.endo_ambient())
}

fn stabilization_point(levels: &[Subspace]) -> Option<usize> {
    let last = levels.last()?;
    let mut point = levels.len() - 1;
    while point > 0 && &levels[point - 1] == last {
        point -= 1;
    }
    if point < levels.len() - 1 {
        Some(point)
    } else {
        None
    }
}

/// The recursion D₋₁ = 0, D_{n+1} = {d : d·l_t − l_t·d ∈ D_n ∀t} for a
/// commutative algebra.
pub fn commutative_filtration(a: &Algebra, n_max: usize) -> Result<Filtration, FiltrationError> {
    if !a.is_commutative() {
        return Err(FiltrationError::NotCommutative);
    }
    let mut levels = Vec::with_capacity(n_max + 1);
    let mut prev = Subspace::zero(a.endo_ambient());
    for _ in 0..=n_max {
        let next = commutator_condition_space(a, &prev);
        levels.push(next.clone());
        prev = next;
    }
    let stabilized_at = stabilization_point(&levels);
    Ok(Filtration {
        algebra: a.clone(),
        mode: FiltrationMode::Commutative,
        n_max,
        levels,
        primed_levels: None,
        stabilized_at,
    })
}

/// The inductive definition for arbitrary associative algebras:
/// D′_n = {φ : l_t·φ − φ·l_t ∈ D_{n−1} ∀t} and D_n = L_A·D′_n·L_A.
/// The sandwich is a single pair of product spans; left-stability is a
/// theorem about the result, not an extra fixpoint step (see
/// [`left_stability_holds`]).
pub fn noncommutative_filtration(a: &Algebra, n_max: usize) -> Result<Filtration, FiltrationError> {
    let (l_span, _) = a.mult_op_spans();
    let mut levels = Vec::with_capacity(n_max + 1);
    let mut primed = Vec::with_capacity(n_max + 1);
    let mut prev = Subspace::zero(a.endo_ambient());
    for _ in 0..=n_max {
        let primed_n = commutator_condition_space(a, &prev);
        let level_n =
            Subspace::product_span(&l_span, &Subspace::product_span(&primed_n, &l_span)?)?;
        primed.push(primed_n);
        levels.push(level_n.clone());
        prev = level_n;
    }
    let stabilized_at = stabilization_point(&levels);
    Ok(Filtration {
        algebra: a.clone(),
        mode: FiltrationMode::Noncommutative,
        n_max,
        levels,
        primed_levels: Some(primed),
        stabilized_at,
    })
}

/// ad(e_i) applied to an endomorphism matrix: D·l_i − l_i·D.
fn ad_apply(l: &RatMatrix, d: &RatMatrix) -> RatMatrix {
    d.mul(l)
        .expect("square shapes")
        .sub(&l.mul(d).expect("square shapes"))
        .expect("square shapes")
}

/// Iterated-commutator order test on a commutative algebra: true iff every
/// (n+1)-fold ad(e_{i₀})⋯ad(e_{i_n}) kills D. Multilinearity reduces "all
/// elements" to basis tuples, and commutativity of the ad's reduces tuples to
/// multisets (enumerated nondecreasing with shared prefixes).
pub fn iterated_ad_test(
    a: &Algebra,
    operator: &RatMatrix,
    n: usize,
) -> Result<bool, FiltrationError> {
    if !a.is_commutative() {
        return Err(FiltrationError::NotCommutative);
    }
    let d = a.dim();
    if operator.rows() != d || operator.cols() != d {
        return Err(FiltrationError::Linalg(LinalgError::ShapeMismatch {
            detail: format!("operator must be {d}x{d}"),
        }));
    }
    let mults: Vec<RatMatrix> = (0..d).map(|i| a.left_mult_basis(i)).collect();
    fn rec(mults: &[RatMatrix], current: &RatMatrix, start: usize, remaining: usize) -> bool {
        if current.is_zero() {
            return true;
        }
        if remaining == 0 {
            return false;
        }
        for i in start..mults.len() {
            let next = ad_apply(&mults[i], current);
            if !rec(mults, &next, i, remaining - 1) {
                return false;
            }
        }
        true
    }
    Ok(rec(&mults, operator, 0, n + 1))
}

/// The subspace {D : every (n+1)-fold iterated ad kills D} of End, computed
/// by stacking the matrices of the iterated-ad maps over all basis multisets.
pub fn ad_criterion_subspace(a: &Algebra, n: usize) -> Result<Subspace, FiltrationError> {
    if !a.is_commutative() {
        return Err(FiltrationError::NotCommutative);
    }
    let d = a.dim();
    let dd = a.endo_ambient();
    let mults: Vec<RatMatrix> = (0..d).map(|i| a.left_mult_basis(i)).collect();
    // Images of every basis endomorphism under the growing ad-prefix; at
    // depth n+1 the flattened images are the columns of the tuple's map.
    let mut basis_endos = Vec::with_capacity(dd);
    for p in 0..d {
        for q in 0..d {
            let mut m = RatMatrix::zeros(d, d);
            m.set(p, q, Rat::from_integer(1.into()));
            basis_endos.push(m);
        }
    }
    let mut constraints: Vec<Vec<Rat>> = Vec::new();
    fn rec(
        mults: &[RatMatrix],
        images: &[RatMatrix],
        start: usize,
        remaining: usize,
        dd: usize,
        constraints: &mut Vec<Vec<Rat>>,
    ) {
        if remaining == 0 {
            // Rows of the map whose columns are the flattened images.
            let columns: Vec<Vec<Rat>> = images.iter().map(RatMatrix::flatten).collect();
            for r in 0..dd {
                let row: Vec<Rat> = columns.iter().map(|c| c[r].clone()).collect();
                if row.iter().any(|v| !v.is_zero()) {
                    constraints.push(row);
                }
            }
            return;
        }
        for i in start..mults.len() {
            let next: Vec<RatMatrix> = images.iter().map(|m| ad_apply(&mults[i], m)).collect();
            if next.iter().all(RatMatrix::is_zero) {
                continue;
            }
            rec(mults, &next, i, remaining - 1, dd, constraints);
        }
    }
    rec(&mults, &basis_endos, 0, n + 1, dd, &mut constraints);
    Ok(Subspace::common_kernel(constraints, dd))
}

#[derive(Clone, Debug)]
pub struct MultiplicativeCheck {
    pub holds: bool,
    /// A product D₁·D₂ of level-r and level-s basis operators that escapes
    /// level r+s, when the check fails.
    pub witness: Option<RatMatrix>,
}

/// Machine check of multiplicativity D_r·D_s ⊆ D_{r+s} on a computed
/// filtration.
pub fn check_multiplicative(
    f: &Filtration,
    r: usize,
    s: usize,
) -> Result<MultiplicativeCheck, FiltrationError> {
    let target = f.level(r + s)?.clone();
    let d = f.algebra.dim();
    let lhs = f.level(r)?;
    let rhs = f.level(s)?;
    for b1 in lhs.basis() {
        let m1 = RatMatrix::unflatten(d, b1)?;
        for b2 in rhs.basis() {
            let m2 = RatMatrix::unflatten(d, b2)?;
            let prod = m1.mul(&m2)?;
            if !target.contains(&prod.flatten())? {
                return Ok(MultiplicativeCheck {
                    holds: false,
                    witness: Some(prod),
                });
            }
        }
    }
    Ok(MultiplicativeCheck {
        holds: true,
        witness: None,
    })
}

/// Post-hoc diagnostic: L_A·D_n = D_n = D_n·L_A.
pub fn left_stability_holds(f: &Filtration, n: usize) -> Result<bool, FiltrationError> {
    let (l_span, _) = f.algebra.mult_op_spans();
    let level = f.level(n)?;
    let left = Subspace::product_span(&l_span, level)?;
    let right = Subspace::product_span(level, &l_span)?;
    Ok(&left == level && &right == level)
}

/// The space of derivations {δ : δ(xy) = δ(x)y + xδ(y)}, solved directly by
/// linear algebra (independent of any filtration).
pub fn derivation_space(a: &Algebra) -> Subspace {
    let d = a.dim();
    let dd = a.endo_ambient();
    let mut constraints = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let product = a.basis_product(i, j).to_vec();
            for k in 0..d {
                let mut row = vec![Rat::zero(); dd];
                // δ(e_i e_j)_k = Σ_m δ_{km} (e_i e_j)_m
                for (m, c) in product.iter().enumerate() {
                    if !c.is_zero() {
                        row[k * d + m] += c;
                    }
                }
                // −(δ(e_i)·e_j)_k = −Σ_p δ_{pi} (e_p e_j)_k
                for p in 0..d {
                    let c = a.structure_constant(p, j, k);
                    if !c.is_zero() {
                        row[p * d + i] -= c;
                    }
                }
                // −(e_i·δ(e_j))_k = −Σ_q δ_{qj} (e_i e_q)_k
                for q in 0..d {
                    let c = a.structure_constant(i, q, k);
                    if !c.is_zero() {
                        row[q * d + j] -= c;
                    }
                }
                if row.iter().any(|v| !v.is_zero()) {
                    constraints.push(row);
                }
            }
        }
    }
    Subspace::common_kernel(constraints, dd)
}

/// A filtration with ℤ-lattice levels for a ℤ-mode algebra. The commutator
/// conditions are solved over ℚ and intersected with the lattice of
/// integer-entry matrices; sandwich products are ℤ-spans, so levels can be
/// genuinely non-saturated.
#[derive(Clone, Debug)]
pub struct LatticeFiltration {
    algebra: Algebra,
    mode: FiltrationMode,
    n_max: usize,
    levels: Vec<IntegerLattice>,
    primed_levels: Option<Vec<IntegerLattice>>,
    stabilized_at: Option<usize>,
}

impl LatticeFiltration {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn mode(&self) -> FiltrationMode {
        self.mode
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn levels(&self) -> &[IntegerLattice] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Result<&IntegerLattice, FiltrationError> {
        self.levels.get(n).ok_or(FiltrationError::LevelOutOfRange {
            level: n,
            n_max: self.n_max,
        })
    }

    pub fn primed_levels(&self) -> Option<&[IntegerLattice]> {
        self.primed_levels.as_deref()
    }

    pub fn stabilized_at(&self) -> Option<usize> {
        self.stabilized_at
    }

    pub fn operator_order(&self, operator: &RatMatrix) -> Result<Option<usize>, FiltrationError> {
        let d = self.algebra.dim();
        if operator.rows() != d || operator.cols() != d {
            return Err(FiltrationError::Linalg(LinalgError::ShapeMismatch {
                detail: format!("operator must be {d}x{d}"),
            }));
        }
        let flat = operator.flatten();
        if !flat.iter().all(is_integer) {
            return Err(FiltrationError::NonIntegerOperator);
        }
        let v: Vec<Int> = flat.iter().map(|r| r.numer().clone()).collect();
        for (n, level) in self.levels.iter().enumerate() {
            if level.contains(&v)? {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

/// {φ ∈ ℤ^{d²} : ad(e_i)(φ) ∈ ℚ-span(prev) for all i}, as a saturated lattice.
fn commutator_condition_lattice(a: &Algebra, prev: &IntegerLattice) -> IntegerLattice {
    let qspan = prev.to_subspace();
    let rows = commutator_condition_rows(a, &qspan);
    let int_rows: Vec<Vec<Int>> = rows.iter().map(|r| clear_denominators(r)).collect();
    integer_kernel(&int_rows, a.endo_ambient())
}

fn lattice_stabilization_point(levels: &[IntegerLattice]) -> Option<usize> {
    let last = levels.last()?;
    let mut point = levels.len() - 1;
    while point > 0 && &levels[point - 1] == last {
        point -= 1;
    }
    if point < levels.len() - 1 {
        Some(point)
    } else {
        None
    }
}

fn require_integer_mode(a: &Algebra) -> Result<(), FiltrationError> {
    if a.scalar_mode() != ScalarMode::Integer {
        return Err(FiltrationError::NotIntegerMode);
    }
    Ok(())
}

/// ℤ-span of the left multiplication operators.
fn left_mult_lattice(a: &Algebra) -> IntegerLattice {
    let dd = a.endo_ambient();
    let rows: Vec<Vec<Int>> = (0..a.dim())
        .map(|i| {
            a.left_mult_basis(i)
                .flatten()
                .iter()
                .map(|r| r.numer().clone())
                .collect()
        })
        .collect();
    IntegerLattice::hnf_span(&rows, dd).expect("operator rows have ambient length")
}

pub fn commutative_filtration_z(
    a: &Algebra,
    n_max: usize,
) -> Result<LatticeFiltration, FiltrationError> {
    require_integer_mode(a)?;
    if !a.is_commutative() {
        return Err(FiltrationError::NotCommutative);
    }
    let mut levels = Vec::with_capacity(n_max + 1);
    let mut prev = IntegerLattice::zero(a.endo_ambient());
    for _ in 0..=n_max {
        let next = commutator_condition_lattice(a, &prev);
        levels.push(next.clone());
        prev = next;
    }
    let stabilized_at = lattice_stabilization_point(&levels);
    Ok(LatticeFiltration {
        algebra: a.clone(),
        mode: FiltrationMode::Commutative,
        n_max,
        levels,
        primed_levels: None,
        stabilized_at,
    })
}

pub fn noncommutative_filtration_z(
    a: &Algebra,
    n_max: usize,
) -> Result<LatticeFiltration, FiltrationError> {
    require_integer_mode(a)?;
    let l_lattice = left_mult_lattice(a);
    let mut levels = Vec::with_capacity(n_max + 1);
    let mut primed = Vec::with_capacity(n_max + 1);
    let mut prev = IntegerLattice::zero(a.endo_ambient());
    for _ in 0..=n_max {
        let primed_n = commutator_condition_lattice(a, &prev);
        let level_n = IntegerLattice::product_span(
            &l_lattice,
            &IntegerLattice::product_span(&primed_n, &l_lattice)?,
        )?;
        primed.push(primed_n);
        levels.push(level_n.clone());
        prev = level_n;
    }
    let stabilized_at = lattice_stabilization_point(&levels);
    Ok(LatticeFiltration {
        algebra: a.clone(),
        mode: FiltrationMode::Noncommutative,
        n_max,
        levels,
        primed_levels: Some(primed),
        stabilized_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Preset;
    use crate::scalar::rat_int;

    fn build(preset: Preset) -> Algebra {
        preset.build(ScalarMode::Rational).unwrap()
    }

    #[test]
    fn base_field_is_all_of_end() {
        let a = build(Preset::TruncatedPoly {
            vars: 1,
            max_degree: 0,
        });
        let f = commutative_filtration(&a, 3).unwrap();
        for level in f.levels() {
            assert!(level.is_full());
            assert_eq!(level.dim(), 1);
        }
        assert_eq!(f.stabilized_at(), Some(0));
    }

    #[test]
    fn dual_numbers_fingerprint() {
        // Frozen by the brute-force oracle in tests/filtration_oracle.rs.
        let a = build(Preset::DualNumbers);
        let f = commutative_filtration(&a, 3).unwrap();
        let dims: Vec<usize> = f.levels().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![2, 3, 4, 4]);
        assert_eq!(f.stabilized_at(), Some(2));
    }

    #[test]
    fn truncated_poly_dims_match_oracle() {
        let a = build(Preset::TruncatedPoly {
            vars: 1,
            max_degree: 2,
        });
        let f = commutative_filtration(&a, 4).unwrap();
        let dims: Vec<usize> = f.levels().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 5, 7, 8, 9]);
    }

    #[test]
    fn commutative_rejects_noncommutative_algebras() {
        let a = build(Preset::MatrixAlgebra { n: 2 });
        assert!(matches!(
            commutative_filtration(&a, 2),
            Err(FiltrationError::NotCommutative)
        ));
    }

    #[test]
    fn level_zero_is_multiplications_commutatively() {
        for preset in [
            Preset::DualNumbers,
            Preset::TruncatedPoly {
                vars: 1,
                max_degree: 3,
            },
            Preset::TruncatedPoly {
                vars: 2,
                max_degree: 2,
            },
        ] {
            let a = build(preset);
            let f = commutative_filtration(&a, 0).unwrap();
            let (l, r) = a.mult_op_spans();
            assert_eq!(f.level(0).unwrap(), &l);
            assert_eq!(l, r);
        }
    }

    #[test]
    fn primed_zero_is_right_multiplications() {
        for preset in [
            Preset::DualNumbers,
            Preset::MatrixAlgebra { n: 2 },
            Preset::UpperTriangular { n: 2 },
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 2,
            },
        ] {
            let a = build(preset);
            let f = noncommutative_filtration(&a, 1).unwrap();
            let (_, r) = a.mult_op_spans();
            assert_eq!(&f.primed_levels().unwrap()[0], &r, "{preset:?}");
        }
    }

    #[test]
    fn matrix_algebra_filtration_is_constant_full() {
        let a = build(Preset::MatrixAlgebra { n: 2 });
        let f = noncommutative_filtration(&a, 3).unwrap();
        for level in f.levels() {
            assert!(level.is_full());
        }
        assert_eq!(f.stabilized_at(), Some(0));
    }

    #[test]
    fn noncommutative_reduces_to_commutative() {
        for preset in [
            Preset::DualNumbers,
            Preset::TruncatedPoly {
                vars: 1,
                max_degree: 2,
            },
            Preset::TruncatedPoly {
                vars: 2,
                max_degree: 2,
            },
        ] {
            let a = build(preset);
            let n_max = default_n_max(&a).min(4);
            let comm = commutative_filtration(&a, n_max).unwrap();
            let nc = noncommutative_filtration(&a, n_max).unwrap();
            assert_eq!(comm.levels(), nc.levels(), "{preset:?}");
        }
    }

    #[test]
    fn chains_are_nondecreasing() {
        for preset in [
            Preset::DualNumbers,
            Preset::UpperTriangular { n: 2 },
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 2,
            },
        ] {
            let a = build(preset);
            let f = noncommutative_filtration(&a, 3).unwrap();
            for n in 1..f.levels().len() {
                assert!(f.levels()[n - 1].is_subspace_of(&f.levels()[n]).unwrap());
            }
        }
    }

    #[test]
    fn operator_order_examples() {
        let a = build(Preset::DualNumbers);
        let f = commutative_filtration(&a, 3).unwrap();
        // Multiplications have order 0.
        let l = a.left_mult(&[rat_int(2), rat_int(-5)]).unwrap().matrix;
        assert_eq!(f.operator_order(&l).unwrap(), Some(0));
        // D: 1 ↦ 0, X ↦ 1 has order 2 (oracle-checked).
        let d = RatMatrix::new(2, 2, vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)]).unwrap();
        assert_eq!(f.operator_order(&d).unwrap(), Some(2));
        // The zero operator has order 0.
        assert_eq!(f.operator_order(&RatMatrix::zeros(2, 2)).unwrap(), Some(0));
    }

    #[test]
    fn multiplications_have_order_zero_in_nc_mode() {
        for preset in [
            Preset::MatrixAlgebra { n: 2 },
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 2,
            },
        ] {
            let a = build(preset);
            let f = noncommutative_filtration(&a, 1).unwrap();
            let mut element = vec![rat_int(0); a.dim()];
            element[0] = rat_int(3);
            element[a.dim() - 1] = rat_int(-2);
            let l = a.left_mult(&element).unwrap().matrix;
            assert_eq!(f.operator_order(&l).unwrap(), Some(0));
            let r = a.right_mult(&element).unwrap().matrix;
            assert_eq!(f.operator_order(&r).unwrap(), Some(0));
            assert_eq!(
                f.operator_order(&RatMatrix::zeros(a.dim(), a.dim()))
                    .unwrap(),
                Some(0)
            );
        }
    }

    #[test]
    fn iterated_ad_examples() {
        let a = build(Preset::DualNumbers);
        let l = a.left_mult(&[rat_int(1), rat_int(3)]).unwrap().matrix;
        assert!(iterated_ad_test(&a, &l, 0).unwrap());
        let d = RatMatrix::new(2, 2, vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)]).unwrap();
        assert!(!iterated_ad_test(&a, &d, 1).unwrap());
        assert!(iterated_ad_test(&a, &d, 2).unwrap());
    }

    #[test]
    fn ad_criterion_matches_recursion() {
        let a = build(Preset::TruncatedPoly {
            vars: 1,
            max_degree: 2,
        });
        let f = commutative_filtration(&a, 3).unwrap();
        for n in 0..=3 {
            let crit = ad_criterion_subspace(&a, n).unwrap();
            assert_eq!(&crit, f.level(n).unwrap(), "level {n}");
        }
    }

    #[test]
    fn multiplicative_check_small() {
        let a = build(Preset::UpperTriangular { n: 2 });
        let f = noncommutative_filtration(&a, 2).unwrap();
        for r in 0..=1 {
            for s in 0..=(2 - r) {
                let check = check_multiplicative(&f, r, s).unwrap();
                assert!(check.holds, "D_{r}·D_{s}");
            }
        }
    }

    #[test]
    fn derivations_lie_in_level_one() {
        for preset in [
            Preset::DualNumbers,
            Preset::TruncatedPoly {
                vars: 1,
                max_degree: 3,
            },
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 2,
            },
        ] {
            let a = build(preset);
            let ders = derivation_space(&a);
            let f = noncommutative_filtration(&a, 1).unwrap();
            for b in ders.basis() {
                assert!(f.level(1).unwrap().contains(b).unwrap(), "{preset:?}");
            }
        }
    }

    #[test]
    fn left_stability_diagnostic() {
        let a = build(Preset::TruncatedFree {
            generators: 2,
            max_degree: 2,
        });
        let f = noncommutative_filtration(&a, 2).unwrap();
        for n in 0..=2 {
            assert!(left_stability_holds(&f, n).unwrap());
        }
    }

    #[test]
    fn lattice_filtration_dual_numbers() {
        let a = Preset::DualNumbers.build(ScalarMode::Integer).unwrap();
        let f = commutative_filtration_z(&a, 3).unwrap();
        let ranks: Vec<usize> = f.levels().iter().map(IntegerLattice::rank).collect();
        assert_eq!(ranks, vec![2, 3, 4, 4]);
        // Z-mode multiplications: l_{a+bX} with integer a, b.
        let l = a.left_mult(&[rat_int(2), rat_int(7)]).unwrap().matrix;
        assert_eq!(f.operator_order(&l).unwrap(), Some(0));
        let f_q =
            commutative_filtration(&Preset::DualNumbers.build(ScalarMode::Rational).unwrap(), 3)
                .unwrap();
        for (lat, sub) in f.levels().iter().zip(f_q.levels().iter()) {
            assert_eq!(&lat.to_subspace(), sub);
        }
    }

    #[test]
    fn lattice_filtration_requires_integer_mode() {
        let a = build(Preset::DualNumbers);
        assert!(matches!(
            commutative_filtration_z(&a, 1),
            Err(FiltrationError::NotIntegerMode)
        ));
    }

    #[test]
    fn lattice_noncommutative_matrix_algebra() {
        let a = Preset::MatrixAlgebra { n: 2 }
            .build(ScalarMode::Integer)
            .unwrap();
        let f = noncommutative_filtration_z(&a, 2).unwrap();
        // The 16 products l_{E_ij} r_{E_kl} permute the basis, so level 0 is
        // already the full standard lattice.
        assert_eq!(f.level(0).unwrap(), &IntegerLattice::standard(16));
        assert_eq!(f.stabilized_at(), Some(0));
    }
}
