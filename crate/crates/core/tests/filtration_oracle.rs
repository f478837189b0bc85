//! Independent brute-force oracle for operator-filtration dimensions.
//!
//! Everything here is self-contained: multiplication matrices are written out
//! or generated from first principles, and ranks come from a local textbook
//! Gaussian elimination over `BigRational` — none of the crate's subspace or
//! filtration machinery is used. The dimensions frozen below are what the
//! engines must reproduce.
//!
//! Membership of an endomorphism D in level n is decided by the iterated
//! commutator criterion: every (n+1)-fold ad(x_{i_0})⋯ad(x_{i_n}) applied to D
//! must vanish, with the x's ranging over the algebra basis (multisets
//! suffice: the ad's commute for a commutative algebra, and ad is linear in
//! its argument).

use num_rational::BigRational;
use num_traits::{One, Zero};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Plain Gaussian elimination rank; no pivoting subtleties over ℚ.
fn rank(mut rows: Vec<Vec<Q>>, width: usize) -> usize {
    let mut rank = 0;
    for col in 0..width {
        let pivot = match (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            None => continue,
            Some(p) => p,
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for e in rows[rank].iter_mut() {
            *e = &*e / &lead;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..width {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &sub;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

type Mat = Vec<Vec<Q>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    let add = &a[i][k] * &b[k][j];
                    out[i][j] = &out[i][j] + &add;
                }
            }
        }
    }
    out
}

fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b.iter())
        .map(|(ra, rb)| ra.iter().zip(rb.iter()).map(|(x, y)| x - y).collect())
        .collect()
}

fn basis_endo(d: usize, a: usize, b: usize) -> Mat {
    let mut m = vec![vec![Q::zero(); d]; d];
    m[a][b] = Q::one();
    m
}

/// ad(x)D = D·l_x − l_x·D.
fn ad(l: &Mat, d: &Mat) -> Mat {
    mat_sub(&mat_mul(d, l), &mat_mul(l, d))
}

/// Multisets of {0, …, count−1} of the given size, nondecreasing.
fn multisets(count: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(
        count: usize,
        size: usize,
        start: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if size == 0 {
            out.push(prefix.clone());
            return;
        }
        for i in start..count {
            prefix.push(i);
            rec(count, size - 1, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(count, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Dimension of level n of the differential-operator filtration via the
/// iterated-commutator criterion, given the l-matrices of the non-unit basis
/// elements (ad of the unit is zero and contributes no constraints).
fn level_dim(d: usize, nonunit_mults: &[Mat], n: usize) -> usize {
    let dd = d * d;
    let mut constraints: Vec<Vec<Q>> = Vec::new();
    for tuple in multisets(nonunit_mults.len(), n + 1) {
        // Matrix of D ↦ ad(x_{i_0})⋯ad(x_{i_n})D, one column per basis endo.
        let mut columns: Vec<Vec<Q>> = Vec::with_capacity(dd);
        for a in 0..d {
            for b in 0..d {
                let mut m = basis_endo(d, a, b);
                for &i in &tuple {
                    m = ad(&nonunit_mults[i], &m);
                }
                columns.push(m.into_iter().flatten().collect());
            }
        }
        // Row r of the big map = (r-th coordinate of each column).
        for r in 0..dd {
            constraints.push(columns.iter().map(|c| c[r].clone()).collect());
        }
    }
    dd - rank(constraints, dd)
}

/// l_{X^p} on k[X]/(X^m): shifts the coordinate of X^j to X^{j+p}.
fn shift_mult(m: usize, p: usize) -> Mat {
    let mut out = vec![vec![Q::zero(); m]; m];
    for j in 0..m {
        if j + p < m {
            out[j + p][j] = Q::one();
        }
    }
    out
}

fn truncated_power_series_mults(m: usize) -> Vec<Mat> {
    (1..m).map(|p| shift_mult(m, p)).collect()
}

/// Monomial basis of k[X,Y]/(total degree > bound), degree-major then
/// X-exponent descending; returns the l-matrices of the non-unit monomials.
fn truncated_poly2_mults(bound: usize) -> (usize, Vec<Mat>) {
    let mut monomials: Vec<(usize, usize)> = Vec::new();
    for deg in 0..=bound {
        for a in (0..=deg).rev() {
            monomials.push((a, deg - a));
        }
    }
    let d = monomials.len();
    let index = |m: (usize, usize)| monomials.iter().position(|&x| x == m);
    let mut mults = Vec::new();
    for &(a1, b1) in monomials.iter().skip(1) {
        let mut mat = vec![vec![Q::zero(); d]; d];
        for (j, &(a2, b2)) in monomials.iter().enumerate() {
            if a1 + a2 + b1 + b2 <= bound {
                let k = index((a1 + a2, b1 + b2)).unwrap();
                mat[k][j] = Q::one();
            }
        }
        mults.push(mat);
    }
    (d, mults)
}

#[test]
fn dual_numbers_filtration_dims() {
    // k[X]/(X²): the frozen fingerprint is (D₀, D₁, D₂) = (2, 3, 4),
    // stabilizing at full End from level 2 on.
    let mults = truncated_power_series_mults(2);
    let dims: Vec<usize> = (0..4).map(|n| level_dim(2, &mults, n)).collect();
    assert_eq!(dims, vec![2, 3, 4, 4]);
}

#[test]
fn dual_numbers_order_of_x_dual() {
    // D: 1 ↦ 0, X ↦ 1 has order exactly 2: ad(X)D = diag(1, −1) ≠ 0,
    // ad(X)²D = l_{−2X} ≠ 0, ad(X)³D = 0.
    let l_x = shift_mult(2, 1);
    let d = vec![vec![q(0), q(1)], vec![q(0), q(0)]];
    let ad1 = ad(&l_x, &d);
    assert_eq!(ad1, vec![vec![q(1), q(0)], vec![q(0), q(-1)]]);
    let ad2 = ad(&l_x, &ad1);
    assert_eq!(ad2, vec![vec![q(0), q(0)], vec![q(-2), q(0)]]);
    let ad3 = ad(&l_x, &ad2);
    assert!(ad3.iter().flatten().all(Q::is_zero));
}

#[test]
fn truncated_poly_one_var_dims() {
    // k[X]/(X³): dims frozen from this oracle.
    let mults = truncated_power_series_mults(3);
    let dims: Vec<usize> = (0..5).map(|n| level_dim(3, &mults, n)).collect();
    println!("k[X]/(X^3) level dims: {dims:?}");
    assert_eq!(dims, vec![3, 5, 7, 8, 9]);

    // k[X]/(X⁴).
    let mults = truncated_power_series_mults(4);
    let dims: Vec<usize> = (0..7).map(|n| level_dim(4, &mults, n)).collect();
    println!("k[X]/(X^4) level dims: {dims:?}");
    assert_eq!(dims, vec![4, 7, 10, 12, 14, 15, 16]);

    // k[X]/(X⁵).
    let mults = truncated_power_series_mults(5);
    let dims: Vec<usize> = (0..8).map(|n| level_dim(5, &mults, n)).collect();
    println!("k[X]/(X^5) level dims: {dims:?}");
    assert_eq!(dims, vec![5, 9, 13, 16, 19, 21, 23, 24]);
}

#[test]
fn truncated_poly_two_var_dims() {
    let (d, mults) = truncated_poly2_mults(2);
    assert_eq!(d, 6);
    let dims: Vec<usize> = (0..7).map(|n| level_dim(d, &mults, n)).collect();
    println!("k[X,Y]/(deg>2) level dims: {dims:?}");
    assert_eq!(dims, vec![6, 16, 27, 33, 36, 36, 36]);
}

#[test]
fn product_span_of_dual_number_multiplications() {
    // Regular representation of the dual numbers: span{I, N} with N² = 0.
    // All four pairwise products {I·I, I·N, N·I, N·N} = {I, N, N, 0} span a
    // 2-dimensional subspace of the 2×2 matrices.
    let i = basis_endo(2, 0, 0)
        .iter()
        .zip(basis_endo(2, 1, 1).iter())
        .map(|(r1, r2)| {
            r1.iter()
                .zip(r2.iter())
                .map(|(a, b)| a + b)
                .collect::<Vec<Q>>()
        })
        .collect::<Vec<_>>();
    let n = shift_mult(2, 1);
    let mut products: Vec<Vec<Q>> = Vec::new();
    for a in [&i, &n] {
        for b in [&i, &n] {
            products.push(mat_mul(a, b).into_iter().flatten().collect());
        }
    }
    assert_eq!(rank(products, 4), 2);
}
