//! Finite-dimensional associative unital algebras presented by structure
//! constants, together with their left/right multiplication operators and the
//! tensor square A⊗A with its multiplication map.

mod presets;

pub use presets::Preset;

use crate::linalg::{LinalgError, RatMatrix, Subspace};
use crate::scalar::{is_integer, Rat};
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Rational,
    Integer,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Rational => write!(f, "Q"),
            ScalarMode::Integer => write!(f, "Z"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    ZeroDimensional,
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    NonIntegerInIntegerMode,
    UnsupportedPreset {
        detail: String,
    },
    Linalg(LinalgError),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::ZeroDimensional => {
                write!(f, "algebras must have dimension >= 1 with a unit")
            }
            AlgebraError::LengthMismatch {
                what,
                expected,
                found,
            } => {
                write!(f, "{what}: expected length {expected}, found {found}")
            }
            AlgebraError::NonIntegerInIntegerMode => {
                write!(f, "Z-mode requires integer structure constants and unit")
            }
            AlgebraError::UnsupportedPreset { detail } => write!(f, "unsupported preset: {detail}"),
            AlgebraError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AlgebraError {}

impl From<LinalgError> for AlgebraError {
    fn from(e: LinalgError) -> Self {
        AlgebraError::Linalg(e)
    }
}

/// A violated algebra law, reported as data rather than an error so that a
/// broken table can be diagnosed in full.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { i, j, k } => {
                write!(f, "(e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})")
            }
            Violation::LeftUnit { i } => write!(f, "1*e{i} != e{i}"),
            Violation::RightUnit { i } => write!(f, "e{i}*1 != e{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The matrix of multiplication by a fixed element, acting on coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultOperator {
    pub matrix: RatMatrix,
    pub side: Side,
    pub element: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    dim: usize,
    labels: Vec<String>,
    /// `table[i][j]` = coordinates of e_i · e_j.
    table: Vec<Vec<Vec<Rat>>>,
    unit: Vec<Rat>,
    scalar_mode: ScalarMode,
    commutative: bool,
}

impl Algebra {
    /// Structural construction: checks shapes, dimension and ℤ-integrality.
    /// The algebra laws themselves are checked by [`Algebra::validate`].
    pub fn new(
        labels: Vec<String>,
        table: Vec<Vec<Vec<Rat>>>,
        unit: Vec<Rat>,
        scalar_mode: ScalarMode,
    ) -> Result<Algebra, AlgebraError> {
        let dim = labels.len();
        if dim == 0 {
            return Err(AlgebraError::ZeroDimensional);
        }
        if table.len() != dim {
            return Err(AlgebraError::LengthMismatch {
                what: "structure table",
                expected: dim,
                found: table.len(),
            });
        }
        for row in &table {
            if row.len() != dim {
                return Err(AlgebraError::LengthMismatch {
                    what: "structure table row",
                    expected: dim,
                    found: row.len(),
                });
            }
            for entry in row {
                if entry.len() != dim {
                    return Err(AlgebraError::LengthMismatch {
                        what: "structure constant vector",
                        expected: dim,
                        found: entry.len(),
                    });
                }
            }
        }
        if unit.len() != dim {
            return Err(AlgebraError::LengthMismatch {
                what: "unit vector",
                expected: dim,
                found: unit.len(),
            });
        }
        if scalar_mode == ScalarMode::Integer {
            let all_integer =
                unit.iter().all(is_integer) && table.iter().flatten().flatten().all(is_integer);
            if !all_integer {
                return Err(AlgebraError::NonIntegerInIntegerMode);
            }
        }
        let commutative = (0..dim).all(|i| (0..dim).all(|j| table[i][j] == table[j][i]));
        Ok(Algebra {
            dim,
            labels,
            table,
            unit,
            scalar_mode,
            commutative,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> &[Rat] {
        &self.unit
    }

    pub fn scalar_mode(&self) -> ScalarMode {
        self.scalar_mode
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    /// Coordinates of e_i · e_j.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Rat] {
        &self.table[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.table[i][j][k]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i] = Rat::from_integer(1.into());
        v
    }

    /// Dimension of the endomorphism coordinate space End_k(A) = d².
    pub fn endo_ambient(&self) -> usize {
        self.dim * self.dim
    }

    /// Bilinear product of coordinate vectors.
    pub fn mul_vec(&self, a: &[Rat], b: &[Rat]) -> Result<Vec<Rat>, AlgebraError> {
        self.check_len(a)?;
        self.check_len(b)?;
        let mut out = vec![Rat::zero(); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks associativity and the unit laws exactly; an empty list means the
    /// table presents a genuine unital associative algebra.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for i in 0..self.dim {
            let ei = self.basis_vector(i);
            let left = self.mul_vec(&self.unit, &ei).expect("basis vector length");
            if left != ei {
                violations.push(Violation::LeftUnit { i });
            }
            let right = self.mul_vec(&ei, &self.unit).expect("basis vector length");
            if right != ei {
                violations.push(Violation::RightUnit { i });
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = &self.table[i][j];
                for k in 0..self.dim {
                    let ek = self.basis_vector(k);
                    let lhs = self.mul_vec(ij, &ek).expect("length");
                    let rhs = self
                        .mul_vec(&self.basis_vector(i), &self.table[j][k])
                        .expect("length");
                    if lhs != rhs {
                        violations.push(Violation::Associativity { i, j, k });
                    }
                }
            }
        }
        violations
    }

    /// l_a : x ↦ a·x as a matrix on coordinates.
    pub fn left_mult(&self, a: &[Rat]) -> Result<MultOperator, AlgebraError> {
        self.check_len(a)?;
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec(a, &self.basis_vector(j))?;
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        Ok(MultOperator {
            matrix: m,
            side: Side::Left,
            element: a.to_vec(),
        })
    }

    /// r_a : x ↦ x·a as a matrix on coordinates.
    pub fn right_mult(&self, a: &[Rat]) -> Result<MultOperator, AlgebraError> {
        self.check_len(a)?;
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec(&self.basis_vector(j), a)?;
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        Ok(MultOperator {
            matrix: m,
            side: Side::Right,
            element: a.to_vec(),
        })
    }

    pub fn left_mult_basis(&self, i: usize) -> RatMatrix {
        self.left_mult(&self.basis_vector(i))
            .expect("basis vector length")
            .matrix
    }

    pub fn right_mult_basis(&self, i: usize) -> RatMatrix {
        self.right_mult(&self.basis_vector(i))
            .expect("basis vector length")
            .matrix
    }

    /// The subspaces L_A and R_A of End_k(A) spanned by left and right
    /// multiplications; for a unital algebra each has dimension d.
    pub fn mult_op_spans(&self) -> (Subspace, Subspace) {
        let ambient = self.endo_ambient();
        let left: Vec<Vec<Rat>> = (0..self.dim)
            .map(|i| self.left_mult_basis(i).flatten())
            .collect();
        let right: Vec<Vec<Rat>> = (0..self.dim)
            .map(|i| self.right_mult_basis(i).flatten())
            .collect();
        let l = Subspace::canonicalize(&left, ambient)
            .expect("flattened operators have ambient length");
        let r = Subspace::canonicalize(&right, ambient)
            .expect("flattened operators have ambient length");
        (l, r)
    }

    /// The tensor square B = A⊗A with componentwise product, together with the
    /// multiplication map m : A⊗A → A, e_i⊗e_j ↦ e_i·e_j (a d×d² matrix on
    /// coordinates, basis tensor e_i⊗e_j at index i·d + j).
    pub fn tensor_square(&self) -> (Algebra, RatMatrix) {
        let d = self.dim;
        let dd = d * d;
        let mut labels = Vec::with_capacity(dd);
        for i in 0..d {
            for j in 0..d {
                labels.push(format!("{}⊗{}", self.labels[i], self.labels[j]));
            }
        }
        let mut table = vec![vec![vec![Rat::zero(); dd]; dd]; dd];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let row = &mut table[i * d + j][k * d + l];
                        for p in 0..d {
                            let cikp = &self.table[i][k][p];
                            if cikp.is_zero() {
                                continue;
                            }
                            for q in 0..d {
                                let cjlq = &self.table[j][l][q];
                                if !cjlq.is_zero() {
                                    row[p * d + q] = cikp * cjlq;
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut unit = vec![Rat::zero(); dd];
        for i in 0..d {
            for j in 0..d {
                unit[i * d + j] = &self.unit[i] * &self.unit[j];
            }
        }
        let tensor =
            Algebra::new(labels, table, unit, self.scalar_mode).expect("tensor square shapes");
        let mut mult_map = RatMatrix::zeros(d, dd);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    mult_map.set(k, i * d + j, self.table[i][j][k].clone());
                }
            }
        }
        (tensor, mult_map)
    }

    /// Span of all pairwise products of two subspaces of this algebra's
    /// coordinate space (products taken in the algebra, not matrix products).
    pub fn subspace_product(&self, s1: &Subspace, s2: &Subspace) -> Result<Subspace, AlgebraError> {
        if s1.ambient_dim() != self.dim || s2.ambient_dim() != self.dim {
            return Err(AlgebraError::Linalg(LinalgError::AmbientMismatch {
                left: s1.ambient_dim(),
                right: self.dim,
            }));
        }
        let mut products = Vec::with_capacity(s1.dim() * s2.dim());
        for a in s1.basis() {
            for b in s2.basis() {
                products.push(self.mul_vec(a, b)?);
            }
        }
        Ok(Subspace::canonicalize(&products, self.dim)?)
    }

    fn check_len(&self, v: &[Rat]) -> Result<(), AlgebraError> {
        if v.len() != self.dim {
            return Err(AlgebraError::LengthMismatch {
                what: "coordinate vector",
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn dual_numbers_is_valid() {
        let a = Preset::DualNumbers.build(ScalarMode::Rational).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.is_commutative());
        assert!(a.validate().is_empty());
    }

    #[test]
    fn broken_unit_is_reported() {
        // e0 declared as unit but e0*e0 = e1.
        let zero = Rat::zero();
        let one = Rat::from_integer(1.into());
        let table = vec![
            vec![
                vec![zero.clone(), one.clone()],
                vec![zero.clone(), one.clone()],
            ],
            vec![
                vec![zero.clone(), one.clone()],
                vec![zero.clone(), zero.clone()],
            ],
        ];
        let a = Algebra::new(
            vec!["e0".into(), "e1".into()],
            table,
            vec![one.clone(), zero.clone()],
            ScalarMode::Rational,
        )
        .unwrap();
        let violations = a.validate();
        assert!(!violations.is_empty());
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::LeftUnit { .. } | Violation::RightUnit { .. })));
    }

    #[test]
    fn matrix_algebra_is_valid_and_noncommutative() {
        let a = Preset::MatrixAlgebra { n: 2 }
            .build(ScalarMode::Rational)
            .unwrap();
        assert_eq!(a.dim(), 4);
        assert!(!a.is_commutative());
        assert!(a.validate().is_empty());
    }

    #[test]
    fn left_mult_by_unit_is_identity() {
        for preset in [
            Preset::DualNumbers,
            Preset::MatrixAlgebra { n: 2 },
            Preset::UpperTriangular { n: 2 },
            Preset::TruncatedPoly {
                vars: 2,
                max_degree: 2,
            },
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 2,
            },
        ] {
            let a = preset.build(ScalarMode::Rational).unwrap();
            let unit = a.unit().to_vec();
            let l = a.left_mult(&unit).unwrap();
            assert_eq!(l.matrix, RatMatrix::identity(a.dim()));
            let r = a.right_mult(&unit).unwrap();
            assert_eq!(r.matrix, RatMatrix::identity(a.dim()));
        }
    }

    #[test]
    fn dual_numbers_left_mult_by_x() {
        let a = Preset::DualNumbers.build(ScalarMode::Rational).unwrap();
        let x = a.basis_vector(1);
        let l = a.left_mult(&x).unwrap();
        // 1 ↦ X, X ↦ 0: single off-diagonal 1.
        let expected =
            RatMatrix::new(2, 2, vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0)]).unwrap();
        assert_eq!(l.matrix, expected);
    }

    #[test]
    fn upper_triangular_left_mult_by_e11() {
        let a = Preset::UpperTriangular { n: 2 }
            .build(ScalarMode::Rational)
            .unwrap();
        // Basis order (E11, E12, E22): l_{E11} fixes E11 and E12, kills E22.
        let l = a.left_mult(&a.basis_vector(0)).unwrap().matrix;
        let fixed_e11 = l.mul_vec(&a.basis_vector(0)).unwrap();
        let fixed_e12 = l.mul_vec(&a.basis_vector(1)).unwrap();
        let killed_e22 = l.mul_vec(&a.basis_vector(2)).unwrap();
        assert_eq!(fixed_e11, a.basis_vector(0));
        assert_eq!(fixed_e12, a.basis_vector(1));
        assert!(killed_e22.iter().all(Rat::is_zero));
    }

    #[test]
    fn mult_op_spans_have_dim_d() {
        for preset in [
            Preset::DualNumbers,
            Preset::MatrixAlgebra { n: 2 },
            Preset::UpperTriangular { n: 2 },
            Preset::TruncatedPoly {
                vars: 1,
                max_degree: 3,
            },
            Preset::TruncatedFree {
                generators: 2,
                max_degree: 2,
            },
        ] {
            let a = preset.build(ScalarMode::Rational).unwrap();
            let (l, r) = a.mult_op_spans();
            assert_eq!(l.dim(), a.dim());
            assert_eq!(r.dim(), a.dim());
            assert_eq!(a.is_commutative(), l == r);
        }
    }

    #[test]
    fn matrix_algebra_products_fill_end() {
        let a = Preset::MatrixAlgebra { n: 2 }
            .build(ScalarMode::Rational)
            .unwrap();
        let (l, r) = a.mult_op_spans();
        let prod = Subspace::product_span(&l, &r).unwrap();
        assert!(prod.is_full());
        assert_eq!(prod.dim(), 16);
    }

    #[test]
    fn tensor_square_mult_map() {
        let a = Preset::DualNumbers.build(ScalarMode::Rational).unwrap();
        let (tensor, mult_map) = a.tensor_square();
        assert_eq!(tensor.dim(), 4);
        assert!(tensor.validate().is_empty());
        // m(1⊗1) = 1.
        let img = mult_map.mul_vec(tensor.unit()).unwrap();
        assert_eq!(img, a.unit().to_vec());
        // m(X⊗X) = X² = 0.
        let xx = tensor.basis_vector(3); // index of X⊗X
        let img = mult_map.mul_vec(&xx).unwrap();
        assert!(img.iter().all(Rat::is_zero));
    }

    #[test]
    fn tensor_square_kernel_dim() {
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
            let a = preset.build(ScalarMode::Rational).unwrap();
            let (_, mult_map) = a.tensor_square();
            let kernel = Subspace::kernel(&mult_map);
            assert_eq!(kernel.dim(), a.dim() * a.dim() - a.dim());
        }
    }

    #[test]
    fn tensor_square_commutativity() {
        let poly = Preset::TruncatedPoly {
            vars: 1,
            max_degree: 3,
        }
        .build(ScalarMode::Rational)
        .unwrap();
        assert!(poly.tensor_square().0.is_commutative());
        let free = Preset::TruncatedFree {
            generators: 2,
            max_degree: 2,
        }
        .build(ScalarMode::Rational)
        .unwrap();
        assert!(!free.tensor_square().0.is_commutative());
    }
}
