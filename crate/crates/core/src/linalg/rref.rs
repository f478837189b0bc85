//! Internal elimination engine. Rows are cleared of denominators and kept as
//! primitive integer vectors during elimination (fraction-free cross
//! multiplication with per-row content reduction); only the final reduced
//! echelon form reintroduces fractions, normalized to pivot 1.

use crate::scalar::{clear_denominators, row_content, Int, Rat};
use num_traits::{Signed, Zero};

/// Incremental row echelon accumulator over ℤ-scaled rows.
pub(crate) struct Echelon {
    width: usize,
    /// Pivot rows keyed by lead column, sorted by lead column. Each row is
    /// primitive with a positive lead entry.
    rows: Vec<(usize, Vec<Int>)>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn insert_rational(&mut self, row: &[Rat]) -> bool {
        debug_assert_eq!(row.len(), self.width);
        self.insert_integer(clear_denominators(row))
    }

    /// Reduces `row` against the current pivots and adopts the residue as a
    /// new pivot row if nonzero. Returns true when the rank grew.
    pub fn insert_integer(&mut self, mut row: Vec<Int>) -> bool {
        debug_assert_eq!(row.len(), self.width);
        loop {
            let lead = match row.iter().position(|v| !v.is_zero()) {
                None => return false,
                Some(l) => l,
            };
            match self.rows.binary_search_by_key(&lead, |(l, _)| *l) {
                Ok(idx) => {
                    // row := p·row − row[lead]·pivot, which zeroes column `lead`.
                    let (_, pivot) = &self.rows[idx];
                    let p = pivot[lead].clone();
                    let c = row[lead].clone();
                    for (r, pv) in row.iter_mut().zip(pivot.iter()) {
                        *r = &*r * &p - &c * pv;
                    }
                    reduce_content(&mut row);
                }
                Err(idx) => {
                    if row[lead].is_negative() {
                        for v in &mut row {
                            *v = -v.clone();
                        }
                    }
                    reduce_content(&mut row);
                    self.rows.insert(idx, (lead, row));
                    return true;
                }
            }
        }
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(l, _)| *l).collect()
    }

    /// Back-eliminates above each pivot and normalizes pivots to 1, yielding
    /// the unique RREF basis ordered by pivot column.
    pub fn into_rref(mut self) -> Vec<Vec<Rat>> {
        for i in (0..self.rows.len()).rev() {
            let (lead, pivot) = self.rows[i].clone();
            let p = pivot[lead].clone();
            for j in 0..i {
                let c = self.rows[j].1[lead].clone();
                if c.is_zero() {
                    continue;
                }
                let target = &mut self.rows[j].1;
                for (t, pv) in target.iter_mut().zip(pivot.iter()) {
                    *t = &*t * &p - &c * pv;
                }
                reduce_content(target);
            }
        }
        self.rows
            .into_iter()
            .map(|(lead, row)| {
                let p = Rat::from_integer(row[lead].clone());
                row.into_iter().map(|v| Rat::from_integer(v) / &p).collect()
            })
            .collect()
    }
}

fn reduce_content(row: &mut [Int]) {
    let g = row_content(row);
    if !g.is_zero() && g != Int::from(1) {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// RREF of the span of `rows` in ambient `width`.
pub(crate) fn rref_rows(rows: impl IntoIterator<Item = Vec<Rat>>, width: usize) -> Vec<Vec<Rat>> {
    let mut ech = Echelon::new(width);
    for row in rows {
        if !ech.is_full() {
            ech.insert_rational(&row);
        }
    }
    ech.into_rref()
}

/// Canonical basis of `{v : r · v = 0 for every constraint row r}`.
pub(crate) fn kernel_basis(
    constraints: impl IntoIterator<Item = Vec<Rat>>,
    width: usize,
) -> Vec<Vec<Rat>> {
    let mut ech = Echelon::new(width);
    for row in constraints {
        ech.insert_rational(&row);
    }
    let pivots = ech.pivots();
    let rref = ech.into_rref();
    let pivot_set: Vec<bool> = {
        let mut set = vec![false; width];
        for &p in &pivots {
            set[p] = true;
        }
        set
    };
    let mut basis = Vec::new();
    for f in 0..width {
        if pivot_set[f] {
            continue;
        }
        let mut v = vec![Rat::zero(); width];
        v[f] = Rat::from_integer(Int::from(1));
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -rref[i][f].clone();
        }
        basis.push(v);
    }
    // The standard free-column basis is not itself in RREF; canonicalize.
    rref_rows(basis, width)
}
