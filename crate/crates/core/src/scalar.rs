//! Arbitrary-precision scalars: ℚ via `BigRational`, ℤ via `BigInt`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Reduced fraction `numer/denom`. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(Int::from(numer), Int::from(denom))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn factorial(n: usize) -> Int {
    let mut acc = Int::one();
    for k in 2..=n {
        acc *= Int::from(k);
    }
    acc
}

/// Binomial coefficient C(n, k); zero for k > n.
pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Renders a rational as `n` or `n/d` with positive denominator.
pub fn format_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n` or `n/d` (optionally signed). Returns `None` on malformed input
/// or a zero denominator.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        None => text.parse::<Int>().ok().map(Rat::from_integer),
        Some((n, d)) => {
            let numer = n.trim().parse::<Int>().ok()?;
            let denom = d.trim().parse::<Int>().ok()?;
            if denom.is_zero() {
                None
            } else {
                Some(Rat::new(numer, denom))
            }
        }
    }
}

/// Common denominator cleared: returns the integer row `lcm * row`, divided by
/// its content so the result is primitive (all-zero rows stay all-zero).
pub fn clear_denominators(row: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for r in row {
        lcm = num_integer::lcm(lcm, r.denom().clone());
    }
    let mut out: Vec<Int> = row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let mut content = Int::zero();
    for v in &out {
        content = num_integer::gcd(content, v.clone());
    }
    if !content.is_zero() && !content.is_one() {
        for v in &mut out {
            *v /= &content;
        }
    }
    out
}

/// Sign-normalized gcd of a full row (non-negative).
pub fn row_content(row: &[Int]) -> Int {
    let mut g = Int::zero();
    for v in row {
        g = num_integer::gcd(g, v.clone());
    }
    g.abs()
}
