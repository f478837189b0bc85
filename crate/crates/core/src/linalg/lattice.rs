//! ℤ-lattices in canonical row Hermite normal form. Spans are taken over ℤ
//! without saturation, so `span_ℤ{2v}` genuinely does not contain `v`; this
//! is what makes the ℤ-mode comparisons meaningful.

use super::{square_side, LinalgError, Subspace};
use crate::scalar::{Int, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    ambient: usize,
    /// Rows in canonical HNF: positive pivots, strictly increasing pivot
    /// columns, entries above each pivot reduced into `[0, pivot)`.
    basis: Vec<Vec<Int>>,
}

impl IntegerLattice {
    /// Canonical HNF basis of the ℤ-row-span of `vectors`.
    pub fn hnf_span(vectors: &[Vec<Int>], ambient: usize) -> Result<IntegerLattice, LinalgError> {
        for v in vectors {
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        let basis = hnf_rows(vectors.to_vec(), ambient);
        Ok(IntegerLattice { ambient, basis })
    }

    pub fn zero(ambient: usize) -> IntegerLattice {
        IntegerLattice {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn standard(ambient: usize) -> IntegerLattice {
        let mut basis = Vec::with_capacity(ambient);
        for i in 0..ambient {
            let mut v = vec![Int::zero(); ambient];
            v[i] = Int::from(1);
            basis.push(v);
        }
        IntegerLattice { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    /// Exact integral membership.
    pub fn contains(&self, v: &[Int]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        let mut r = v.to_vec();
        for row in &self.basis {
            let p = lead_col(row).expect("basis rows are nonzero");
            if r[p].is_zero() {
                continue;
            }
            let (q, rem) = r[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return Ok(false);
            }
            for (ri, bi) in r.iter_mut().zip(row.iter()) {
                *ri -= &q * bi;
            }
        }
        Ok(r.iter().all(Zero::is_zero))
    }

    pub fn sum(&self, other: &IntegerLattice) -> Result<IntegerLattice, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        let vectors: Vec<Vec<Int>> = self
            .basis
            .iter()
            .chain(other.basis.iter())
            .cloned()
            .collect();
        IntegerLattice::hnf_span(&vectors, self.ambient)
    }

    pub fn is_sublattice_of(&self, other: &IntegerLattice) -> Result<bool, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        for row in &self.basis {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The ℚ-span of the lattice.
    pub fn to_subspace(&self) -> Subspace {
        let rows: Vec<Vec<Rat>> = self
            .basis
            .iter()
            .map(|row| row.iter().map(|v| Rat::from_integer(v.clone())).collect())
            .collect();
        Subspace::canonicalize(&rows, self.ambient).expect("lattice rows have ambient length")
    }

    /// ℤ-span of all pairwise matrix products of the two bases, for lattices
    /// of n×n integer matrices (row-major flattened).
    pub fn product_span(
        s1: &IntegerLattice,
        s2: &IntegerLattice,
    ) -> Result<IntegerLattice, LinalgError> {
        if s1.ambient != s2.ambient {
            return Err(LinalgError::AmbientMismatch {
                left: s1.ambient,
                right: s2.ambient,
            });
        }
        let side = square_side(s1.ambient).ok_or(LinalgError::NotSquareAmbient {
            ambient: s1.ambient,
        })?;
        let mut products = Vec::with_capacity(s1.basis.len() * s2.basis.len());
        for a in &s1.basis {
            for b in &s2.basis {
                products.push(int_mat_mul(side, a, b));
            }
        }
        IntegerLattice::hnf_span(&products, s1.ambient)
    }
}

/// Flattened product of two side×side integer matrices.
pub(crate) fn int_mat_mul(side: usize, a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); side * side];
    for i in 0..side {
        for k in 0..side {
            let av = &a[i * side + k];
            if av.is_zero() {
                continue;
            }
            for j in 0..side {
                let bv = &b[k * side + j];
                if !bv.is_zero() {
                    out[i * side + j] += av * bv;
                }
            }
        }
    }
    out
}

fn lead_col(row: &[Int]) -> Option<usize> {
    row.iter().position(|v| !v.is_zero())
}

/// Canonical row HNF of the ℤ-span of `rows`.
fn hnf_rows(rows: Vec<Vec<Int>>, width: usize) -> Vec<Vec<Int>> {
    let mut active: Vec<Vec<Int>> = rows.into_iter().filter(|r| lead_col(r).is_some()).collect();
    let mut pivots: Vec<Vec<Int>> = Vec::new();
    for col in 0..width {
        // Euclid on the rows whose current lead is this column.
        loop {
            let mut idxs: Vec<usize> = (0..active.len())
                .filter(|&i| !active[i][col].is_zero())
                .collect();
            if idxs.is_empty() {
                break;
            }
            if idxs.len() == 1 {
                let mut row = active.swap_remove(idxs[0]);
                if row[col].is_negative() {
                    for v in &mut row {
                        *v = -v.clone();
                    }
                }
                pivots.push(row);
                break;
            }
            idxs.sort_by_key(|&i| active[i][col].abs());
            let min_idx = idxs[0];
            let min_row = active[min_idx].clone();
            for &i in &idxs[1..] {
                let q = active[i][col].div_floor(&min_row[col]);
                if q.is_zero() {
                    continue;
                }
                for (v, m) in active[i].iter_mut().zip(min_row.iter()) {
                    *v -= &q * m;
                }
            }
        }
        active.retain(|r| lead_col(r).is_some());
    }
    // Reduce entries above each pivot into [0, pivot).
    for i in 0..pivots.len() {
        let pivot = pivots[i].clone();
        let c = lead_col(&pivot).expect("pivot rows are nonzero");
        for row in pivots.iter_mut().take(i) {
            let q = row[c].div_floor(&pivot[c]);
            if q.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(pivot.iter()) {
                *v -= &q * p;
            }
        }
    }
    pivots
}

/// Canonical ℤ-basis of `{v ∈ ℤ^width : c · v = 0 for every constraint c}`.
/// Tracks a unimodular transform through row reduction of the transposed
/// constraint matrix; the kernel is the span of the transform rows matched to
/// zero rows, and is automatically saturated.
pub fn integer_kernel(constraints: &[Vec<Int>], width: usize) -> IntegerLattice {
    let m = constraints.len();
    // work rows: (row of the transposed constraint matrix, transform row)
    let mut work: Vec<(Vec<Int>, Vec<Int>)> = (0..width)
        .map(|j| {
            let row: Vec<Int> = constraints.iter().map(|c| c[j].clone()).collect();
            let mut tr = vec![Int::zero(); width];
            tr[j] = Int::from(1);
            (row, tr)
        })
        .collect();
    let mut consumed = vec![false; width];
    for col in 0..m {
        loop {
            let mut idxs: Vec<usize> = (0..width)
                .filter(|&i| !consumed[i] && !work[i].0[col].is_zero())
                .collect();
            if idxs.len() <= 1 {
                if let Some(&i) = idxs.first() {
                    consumed[i] = true;
                }
                break;
            }
            idxs.sort_by_key(|&i| work[i].0[col].abs());
            let min_idx = idxs[0];
            let (min_row, min_tr) = work[min_idx].clone();
            for &i in &idxs[1..] {
                let q = work[i].0[col].div_floor(&min_row[col]);
                if q.is_zero() {
                    continue;
                }
                for (v, mv) in work[i].0.iter_mut().zip(min_row.iter()) {
                    *v -= &q * mv;
                }
                for (v, mv) in work[i].1.iter_mut().zip(min_tr.iter()) {
                    *v -= &q * mv;
                }
            }
        }
    }
    let kernel_rows: Vec<Vec<Int>> = work
        .into_iter()
        .enumerate()
        .filter(|(i, (row, _))| !consumed[*i] && row.iter().all(Zero::is_zero))
        .map(|(_, (_, tr))| tr)
        .collect();
    IntegerLattice::hnf_span(&kernel_rows, width).expect("kernel rows have ambient length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn iv(entries: &[i64]) -> Vec<Int> {
        entries.iter().map(|&e| int(e)).collect()
    }

    #[test]
    fn membership_examples() {
        let even = IntegerLattice::hnf_span(&[iv(&[2, 0]), iv(&[0, 2])], 2).unwrap();
        assert!(!even.contains(&iv(&[1, 1])).unwrap());
        assert!(even.contains(&iv(&[4, -2])).unwrap());

        let all = IntegerLattice::hnf_span(&[iv(&[1, 0]), iv(&[0, 1])], 2).unwrap();
        assert!(all.contains(&iv(&[17, -5])).unwrap());

        let line = IntegerLattice::hnf_span(&[iv(&[2, 4])], 2).unwrap();
        assert!(line.contains(&iv(&[4, 8])).unwrap());
        assert!(!line.contains(&iv(&[1, 2])).unwrap());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = IntegerLattice::hnf_span(&[iv(&[2, 4]), iv(&[4, 8]), iv(&[-2, -4])], 2).unwrap();
        let b = IntegerLattice::hnf_span(&[iv(&[-2, -4])], 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[iv(&[2, 4])]);

        // A pair needing a gcd combination: span{(2,1),(3,1)} = span{(1,0),(0,1)}.
        let c = IntegerLattice::hnf_span(&[iv(&[2, 1]), iv(&[3, 1])], 2).unwrap();
        assert_eq!(c, IntegerLattice::standard(2));
    }

    #[test]
    fn hnf_reduces_above_pivot() {
        let l = IntegerLattice::hnf_span(&[iv(&[1, 5]), iv(&[0, 3])], 2).unwrap();
        assert_eq!(l.basis(), &[iv(&[1, 2]), iv(&[0, 3])]);
    }

    #[test]
    fn q_span_rank_matches_hnf_rank() {
        let vecs = vec![iv(&[1, 2, 3]), iv(&[2, 4, 6]), iv(&[0, 1, 1])];
        let lat = IntegerLattice::hnf_span(&vecs, 3).unwrap();
        assert_eq!(lat.rank(), lat.to_subspace().dim());
        assert_eq!(lat.rank(), 2);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // x + y + z = 0 over ℤ: kernel rank 2, contains (1, -1, 0).
        let k = integer_kernel(&[iv(&[1, 1, 1])], 3);
        assert_eq!(k.rank(), 2);
        assert!(k.contains(&iv(&[1, -1, 0])).unwrap());
        assert!(k.contains(&iv(&[0, 1, -1])).unwrap());
        // 2x = 2y has the primitive solution (1, 1, 0) despite the factor 2.
        let k2 = integer_kernel(&[iv(&[2, -2, 0])], 3);
        assert!(k2.contains(&iv(&[1, 1, 0])).unwrap());
    }

    #[test]
    fn product_span_scales() {
        // span{2I} · span{2I} = span{4I} in 2x2 matrices.
        let two_i = IntegerLattice::hnf_span(&[iv(&[2, 0, 0, 2])], 4).unwrap();
        let prod = IntegerLattice::product_span(&two_i, &two_i).unwrap();
        assert!(prod.contains(&iv(&[4, 0, 0, 4])).unwrap());
        assert!(!prod.contains(&iv(&[2, 0, 0, 2])).unwrap());
    }
}
