//! Canonical linear subspaces of ℚⁿ. The stored basis is the unique RREF
//! basis of the span, so two equal subspaces compare equal as plain data.

use super::rref::{kernel_basis, rref_rows};
use super::{square_side, LinalgError, RatMatrix};
use crate::scalar::Rat;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    /// Canonical subspace spanned by `vectors`; idempotent and independent of
    /// the order or scaling of the inputs.
    pub fn canonicalize(vectors: &[Vec<Rat>], ambient: usize) -> Result<Subspace, LinalgError> {
        for v in vectors {
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        Ok(Subspace {
            ambient,
            basis: rref_rows(vectors.iter().cloned(), ambient),
        })
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        let mut basis = Vec::with_capacity(ambient);
        for i in 0..ambient {
            let mut v = vec![Rat::zero(); ambient];
            v[i] = Rat::one();
            basis.push(v);
        }
        Subspace { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    /// Pivot column of each basis row (strictly increasing).
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|row| {
                row.iter()
                    .position(|v| !v.is_zero())
                    .expect("basis rows are nonzero")
            })
            .collect()
    }

    /// Exact membership test.
    pub fn contains(&self, v: &[Rat]) -> Result<bool, LinalgError> {
        Ok(self.residual(v)?.is_none())
    }

    /// Reduces `v` against the basis; `None` if it lies in the span, else the
    /// nonzero residue.
    fn residual(&self, v: &[Rat]) -> Result<Option<Vec<Rat>>, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(self.pivots().iter()) {
            if !r[p].is_zero() {
                let c = r[p].clone();
                for (ri, bi) in r.iter_mut().zip(row.iter()) {
                    *ri -= &c * bi;
                }
            }
        }
        if r.iter().all(Rat::is_zero) {
            Ok(None)
        } else {
            Ok(Some(r))
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.same_ambient(other)?;
        let vectors: Vec<Vec<Rat>> = self
            .basis
            .iter()
            .chain(other.basis.iter())
            .cloned()
            .collect();
        Subspace::canonicalize(&vectors, self.ambient)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.same_ambient(other)?;
        let mut constraints = self.annihilator_rows();
        constraints.extend(other.annihilator_rows());
        Ok(Subspace {
            ambient: self.ambient,
            basis: kernel_basis(constraints, self.ambient),
        })
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.same_ambient(other)?;
        for row in &self.basis {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rows of a matrix `W` with `W v = 0 ⟺ v ∈ self`. One row per
    /// non-pivot coordinate: `v[c] − Σᵢ basis[i][c] · v[pᵢ]`.
    pub fn annihilator_rows(&self) -> Vec<Vec<Rat>> {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.ambient];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut rows = Vec::with_capacity(self.ambient - self.dim());
        for c in 0..self.ambient {
            if is_pivot[c] {
                continue;
            }
            let mut w = vec![Rat::zero(); self.ambient];
            w[c] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                if !self.basis[i][c].is_zero() {
                    w[p] = -self.basis[i][c].clone();
                }
            }
            rows.push(w);
        }
        rows
    }

    /// `{v : L v ∈ target}`, the exact preimage of a subspace under a linear
    /// map. The result lives in the domain of `L`.
    pub fn preimage_under(map: &RatMatrix, target: &Subspace) -> Result<Subspace, LinalgError> {
        if map.rows() != target.ambient {
            return Err(LinalgError::ShapeMismatch {
                detail: format!(
                    "map into dimension {} vs target ambient {}",
                    map.rows(),
                    target.ambient
                ),
            });
        }
        let constraints: Vec<Vec<Rat>> = target
            .annihilator_rows()
            .into_iter()
            .map(|w| {
                // wᵀ·L, exploiting the sparsity of annihilator rows.
                let mut row = vec![Rat::zero(); map.cols()];
                for (k, wk) in w.iter().enumerate() {
                    if wk.is_zero() {
                        continue;
                    }
                    for (j, m) in map.row(k).iter().enumerate() {
                        if !m.is_zero() {
                            row[j] += wk * m;
                        }
                    }
                }
                row
            })
            .collect();
        Ok(Subspace {
            ambient: map.cols(),
            basis: kernel_basis(constraints, map.cols()),
        })
    }

    /// Null space of `map`.
    pub fn kernel(map: &RatMatrix) -> Subspace {
        let rows: Vec<Vec<Rat>> = (0..map.rows()).map(|i| map.row(i).to_vec()).collect();
        Subspace {
            ambient: map.cols(),
            basis: kernel_basis(rows, map.cols()),
        }
    }

    /// `{v : r · v = 0 for every constraint row r}`. Rows must have length
    /// `ambient`.
    pub fn common_kernel(rows: impl IntoIterator<Item = Vec<Rat>>, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: kernel_basis(rows, ambient),
        }
    }

    /// Span of all pairwise matrix products of the two bases, for subspaces of
    /// an n×n matrix space (row-major flattened coordinates). Bilinearity
    /// makes basis products sufficient.
    pub fn product_span(s1: &Subspace, s2: &Subspace) -> Result<Subspace, LinalgError> {
        s1.same_ambient(s2)?;
        let side = square_side(s1.ambient).ok_or(LinalgError::NotSquareAmbient {
            ambient: s1.ambient,
        })?;
        let left: Vec<RatMatrix> = s1
            .basis
            .iter()
            .map(|v| RatMatrix::unflatten(side, v))
            .collect::<Result<_, _>>()?;
        let right: Vec<RatMatrix> = s2
            .basis
            .iter()
            .map(|v| RatMatrix::unflatten(side, v))
            .collect::<Result<_, _>>()?;
        let mut products = Vec::with_capacity(left.len() * right.len());
        for a in &left {
            for b in &right {
                products.push(a.mul(b)?.flatten());
            }
        }
        Subspace::canonicalize(&products, s1.ambient)
    }

    fn same_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn v(entries: &[i64]) -> Vec<Rat> {
        entries.iter().map(|&e| rat_int(e)).collect()
    }

    #[test]
    fn canonicalize_examples() {
        let empty = Subspace::canonicalize(&[], 3).unwrap();
        assert_eq!(empty.dim(), 0);
        assert!(empty.is_zero());

        let full = Subspace::canonicalize(&[v(&[1, 0]), v(&[0, 1])], 2).unwrap();
        assert!(full.is_full());

        let line = Subspace::canonicalize(&[v(&[2, 4]), v(&[1, 2])], 2).unwrap();
        assert_eq!(line.dim(), 1);
        assert_eq!(line.basis(), &[v(&[1, 2])]);
    }

    #[test]
    fn canonicalize_rejects_mixed_lengths() {
        let err = Subspace::canonicalize(&[v(&[1, 0]), v(&[1, 0, 0])], 2).unwrap_err();
        assert!(matches!(
            err,
            LinalgError::DimensionMismatch {
                expected: 2,
                found: 3
            }
        ));
    }

    #[test]
    fn contains_examples() {
        let zero = Subspace::zero(2);
        assert!(zero.contains(&v(&[0, 0])).unwrap());
        let line = Subspace::canonicalize(&[v(&[1, 2])], 2).unwrap();
        assert!(line.contains(&v(&[2, 4])).unwrap());
        assert!(!line.contains(&v(&[1, 0])).unwrap());
    }

    #[test]
    fn sum_examples() {
        let line = Subspace::canonicalize(&[v(&[1, 2])], 2).unwrap();
        assert_eq!(line.sum(&Subspace::zero(2)).unwrap(), line);
        assert_eq!(line.sum(&line).unwrap(), line);
        let x = Subspace::canonicalize(&[v(&[1, 0])], 2).unwrap();
        let y = Subspace::canonicalize(&[v(&[0, 1])], 2).unwrap();
        assert!(x.sum(&y).unwrap().is_full());
    }

    #[test]
    fn intersect_planes() {
        let a = Subspace::canonicalize(&[v(&[1, 0, 0]), v(&[0, 1, 0])], 3).unwrap();
        let b = Subspace::canonicalize(&[v(&[0, 1, 0]), v(&[0, 0, 1])], 3).unwrap();
        let meet = a.intersect(&b).unwrap();
        assert_eq!(meet.basis(), &[v(&[0, 1, 0])]);
    }

    #[test]
    fn preimage_trivial_cases() {
        let map = RatMatrix::new(2, 3, v(&[1, 0, 0, 0, 1, 0])).unwrap();
        let full = Subspace::full(2);
        assert!(Subspace::preimage_under(&map, &full).unwrap().is_full());

        let zero_map = RatMatrix::zeros(2, 3);
        let target = Subspace::canonicalize(&[v(&[1, 0])], 2).unwrap();
        assert!(Subspace::preimage_under(&zero_map, &target)
            .unwrap()
            .is_full());

        let id = RatMatrix::identity(2);
        assert_eq!(Subspace::preimage_under(&id, &target).unwrap(), target);
    }

    #[test]
    fn annihilator_characterizes_membership() {
        let s = Subspace::canonicalize(&[v(&[1, 2, 0]), v(&[0, 0, 1])], 3).unwrap();
        let w = s.annihilator_rows();
        assert_eq!(w.len(), 1);
        for b in s.basis() {
            let dot: Rat = w[0].iter().zip(b.iter()).map(|(a, c)| a * c).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn product_span_identity_and_zero() {
        let amb = 4;
        let id = Subspace::canonicalize(&[v(&[1, 0, 0, 1])], amb).unwrap();
        let s = Subspace::canonicalize(&[v(&[0, 1, 0, 0]), v(&[1, 0, 0, -1])], amb).unwrap();
        assert_eq!(Subspace::product_span(&id, &s).unwrap(), s);
        assert_eq!(Subspace::product_span(&s, &id).unwrap(), s);
        let zero = Subspace::zero(amb);
        assert!(Subspace::product_span(&zero, &s).unwrap().is_zero());
    }

    #[test]
    fn product_span_rejects_non_square_ambient() {
        let s = Subspace::full(3);
        assert!(matches!(
            Subspace::product_span(&s, &s).unwrap_err(),
            LinalgError::NotSquareAmbient { ambient: 3 }
        ));
    }
}
