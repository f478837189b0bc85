//! Divided-power differential operators Σ f_{i,j} θ_X^i θ_Y^j on the genuine
//! (untruncated) polynomial rings `k[X]` and `k[X,Y]`, over ℚ or ℤ.
//!
//! θ_X^i acts by X^m ↦ C(m,i) X^{m−i}; over ℚ it equals ∂_X^i/i!. The θ's are
//! the stored basis because they act integrally on `ℤ[X,Y]`, so ℤ-mode needs no
//! denominators and the naive-subalgebra test is plain divisibility of the
//! coefficients by i!·j!.

mod parse;

use crate::scalar::{binomial, factorial, is_integer, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::ScalarMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarCount {
    One,
    Two,
}

impl VarCount {
    pub fn count(&self) -> usize {
        match self {
            VarCount::One => 1,
            VarCount::Two => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffopError {
    VariableMismatch,
    ModeMismatch,
    /// Y used in a one-variable context.
    YUnavailable,
    NonIntegerCoefficient,
    /// `is_naive` is meaningless over ℚ, where the two algebras coincide.
    NaiveTestNeedsIntegerMode,
    NotAPolynomial,
    DivisionByNonConstant,
    Parse {
        position: usize,
        message: String,
    },
}

impl fmt::Display for DiffopError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffopError::VariableMismatch => write!(f, "operands use different variable counts"),
            DiffopError::ModeMismatch => write!(f, "operands use different scalar modes"),
            DiffopError::YUnavailable => write!(f, "Y is not available in one-variable mode"),
            DiffopError::NonIntegerCoefficient => write!(f, "non-integer coefficient in Z-mode"),
            DiffopError::NaiveTestNeedsIntegerMode => {
                write!(
                    f,
                    "the naive-subalgebra test only distinguishes anything over Z"
                )
            }
            DiffopError::NotAPolynomial => write!(f, "expression contains differential symbols"),
            DiffopError::DivisionByNonConstant => write!(f, "division only by nonzero constants"),
            DiffopError::Parse { position, message } => {
                write!(f, "parse error at byte {position}: {message}")
            }
        }
    }
}

impl std::error::Error for DiffopError {}

/// Sparse polynomial in X (and Y), exponent-indexed; one-variable mode keeps
/// every Y-exponent at zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: VarCount,
    mode: ScalarMode,
    terms: BTreeMap<(u32, u32), Rat>,
}

impl Poly {
    pub fn zero(vars: VarCount, mode: ScalarMode) -> Poly {
        Poly {
            vars,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarCount, mode: ScalarMode, c: Rat) -> Result<Poly, DiffopError> {
        Poly::monomial(vars, mode, (0, 0), c)
    }

    pub fn one(vars: VarCount, mode: ScalarMode) -> Poly {
        Poly::constant(vars, mode, Rat::one()).expect("1 is integral")
    }

    pub fn monomial(
        vars: VarCount,
        mode: ScalarMode,
        exps: (u32, u32),
        c: Rat,
    ) -> Result<Poly, DiffopError> {
        if vars == VarCount::One && exps.1 > 0 {
            return Err(DiffopError::YUnavailable);
        }
        if mode == ScalarMode::Integer && !is_integer(&c) {
            return Err(DiffopError::NonIntegerCoefficient);
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Ok(Poly { vars, mode, terms })
    }

    pub fn var_x(vars: VarCount, mode: ScalarMode) -> Poly {
        Poly::monomial(vars, mode, (1, 0), Rat::one()).expect("X is integral")
    }

    pub fn var_y(mode: ScalarMode) -> Poly {
        Poly::monomial(VarCount::Two, mode, (0, 1), Rat::one()).expect("Y is integral")
    }

    pub fn vars(&self) -> VarCount {
        self.vars
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: (u32, u32)) -> Rat {
        self.terms.get(&exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    fn compatible(&self, other: &Poly) -> Result<(), DiffopError> {
        if self.vars != other.vars {
            return Err(DiffopError::VariableMismatch);
        }
        if self.mode != other.mode {
            return Err(DiffopError::ModeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, DiffopError> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Ok(Poly {
            vars: self.vars,
            mode: self.mode,
            terms,
        })
    }

    pub fn neg(&self) -> Poly {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect();
        Poly {
            vars: self.vars,
            mode: self.mode,
            terms,
        }
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, DiffopError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, DiffopError> {
        self.compatible(other)?;
        let mut terms: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                let entry = terms.entry((a1 + a2, b1 + b2)).or_insert_with(Rat::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Poly {
            vars: self.vars,
            mode: self.mode,
            terms,
        })
    }

    pub fn scale(&self, c: &Rat) -> Result<Poly, DiffopError> {
        if self.mode == ScalarMode::Integer {
            for v in self.terms.values() {
                if !is_integer(&(v * c)) {
                    return Err(DiffopError::NonIntegerCoefficient);
                }
            }
        }
        if c.is_zero() {
            return Ok(Poly::zero(self.vars, self.mode));
        }
        let terms = self.terms.iter().map(|(e, v)| (*e, v * c)).collect();
        Ok(Poly {
            vars: self.vars,
            mode: self.mode,
            terms,
        })
    }

    /// θ_X^i θ_Y^j applied to the polynomial:
    /// X^a Y^b ↦ C(a,i) C(b,j) X^{a−i} Y^{b−j}, zero when i > a or j > b.
    /// Binomials are integers, so ℤ-mode stays integral.
    pub fn theta_apply(&self, powers: (u32, u32)) -> Poly {
        let (i, j) = powers;
        let mut terms: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            if a < i || b < j {
                continue;
            }
            let coeff = Rat::from_integer(
                binomial(a as usize, i as usize) * binomial(b as usize, j as usize),
            );
            let entry = terms.entry((a - i, b - j)).or_insert_with(Rat::zero);
            *entry += c * &coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly {
            vars: self.vars,
            mode: self.mode,
            terms,
        }
    }

    /// Whether every coefficient is divisible by the integer `n` (ℤ-mode
    /// sense; callers use it with i!·j!).
    fn all_divisible_by(&self, n: &crate::scalar::Int) -> bool {
        use num_integer::Integer;
        self.terms
            .values()
            .all(|c| c.numer().mod_floor(n).is_zero())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.terms {
            write_signed_term(f, &mut first, c, &monomial_string((a, b)))?;
        }
        Ok(())
    }
}

fn monomial_string((a, b): (u32, u32)) -> String {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push("X".to_string()),
        _ => parts.push(format!("X^{a}")),
    }
    match b {
        0 => {}
        1 => parts.push("Y".to_string()),
        _ => parts.push(format!("Y^{b}")),
    }
    parts.join("*")
}

fn theta_string((i, j): (u32, u32)) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("tX".to_string()),
        _ => parts.push(format!("tX^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("tY".to_string()),
        _ => parts.push(format!("tY^{j}")),
    }
    parts.join("*")
}

/// Shared sum formatting: sign separators, coefficient 1 omitted before a
/// nonempty symbol part.
fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    coeff: &Rat,
    symbol: &str,
) -> fmt::Result {
    let negative = coeff < &Rat::zero();
    let abs = if negative {
        -coeff.clone()
    } else {
        coeff.clone()
    };
    if *first {
        if negative {
            write!(f, "-")?;
        }
        *first = false;
    } else if negative {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let show_coeff = !abs.is_one() || symbol.is_empty();
    if show_coeff {
        write!(f, "{}", crate::scalar::format_rat(&abs))?;
    }
    if !symbol.is_empty() {
        if show_coeff {
            write!(f, "*")?;
        }
        write!(f, "{symbol}")?;
    }
    Ok(())
}

/// A divided-power differential operator Σ f_{i,j} θ_X^i θ_Y^j in normal form
/// (all multiplications to the left of all θ's, no zero coefficient polys).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DPOp {
    vars: VarCount,
    mode: ScalarMode,
    terms: BTreeMap<(u32, u32), Poly>,
}

impl DPOp {
    pub fn zero(vars: VarCount, mode: ScalarMode) -> DPOp {
        DPOp {
            vars,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(vars: VarCount, mode: ScalarMode) -> DPOp {
        DPOp::mult_op(Poly::one(vars, mode))
    }

    /// l_f, multiplication by a polynomial.
    pub fn mult_op(f: Poly) -> DPOp {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert((0, 0), f.clone());
        }
        DPOp {
            vars: f.vars,
            mode: f.mode,
            terms,
        }
    }

    /// θ_X^i θ_Y^j with coefficient 1.
    pub fn theta(
        vars: VarCount,
        mode: ScalarMode,
        powers: (u32, u32),
    ) -> Result<DPOp, DiffopError> {
        if vars == VarCount::One && powers.1 > 0 {
            return Err(DiffopError::YUnavailable);
        }
        let mut terms = BTreeMap::new();
        terms.insert(powers, Poly::one(vars, mode));
        Ok(DPOp { vars, mode, terms })
    }

    /// ∂_X^i ∂_Y^j = i!·j!·θ_X^i θ_Y^j.
    pub fn partial(
        vars: VarCount,
        mode: ScalarMode,
        powers: (u32, u32),
    ) -> Result<DPOp, DiffopError> {
        let coeff = Rat::from_integer(factorial(powers.0 as usize) * factorial(powers.1 as usize));
        let theta = DPOp::theta(vars, mode, powers)?;
        theta.scale(&coeff)
    }

    pub fn vars(&self) -> VarCount {
        self.vars
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, powers: (u32, u32)) -> Poly {
        self.terms
            .get(&powers)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.vars, self.mode))
    }

    fn compatible(&self, other: &DPOp) -> Result<(), DiffopError> {
        if self.vars != other.vars {
            return Err(DiffopError::VariableMismatch);
        }
        if self.mode != other.mode {
            return Err(DiffopError::ModeMismatch);
        }
        Ok(())
    }

    fn insert_term(&mut self, powers: (u32, u32), f: Poly) {
        if f.is_zero() {
            return;
        }
        match self.terms.remove(&powers) {
            None => {
                self.terms.insert(powers, f);
            }
            Some(existing) => {
                let sum = existing.add(&f).expect("same vars and mode");
                if !sum.is_zero() {
                    self.terms.insert(powers, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &DPOp) -> Result<DPOp, DiffopError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (powers, f) in &other.terms {
            out.insert_term(*powers, f.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> DPOp {
        let terms = self.terms.iter().map(|(p, f)| (*p, f.neg())).collect();
        DPOp {
            vars: self.vars,
            mode: self.mode,
            terms,
        }
    }

    pub fn sub(&self, other: &DPOp) -> Result<DPOp, DiffopError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Result<DPOp, DiffopError> {
        let mut out = DPOp::zero(self.vars, self.mode);
        for (powers, f) in &self.terms {
            out.insert_term(*powers, f.scale(c)?);
        }
        Ok(out)
    }

    /// The operator applied to a polynomial; linear, exact, and integral in
    /// ℤ-mode.
    pub fn apply(&self, p: &Poly) -> Result<Poly, DiffopError> {
        if self.vars != p.vars {
            return Err(DiffopError::VariableMismatch);
        }
        if self.mode != p.mode {
            return Err(DiffopError::ModeMismatch);
        }
        let mut out = Poly::zero(self.vars, self.mode);
        for (&powers, f) in &self.terms {
            out = out.add(&f.mul(&p.theta_apply(powers))?)?;
        }
        Ok(out)
    }

    /// Composition in normal form via the divided-power rewrite rules
    /// θ^i ∘ l_f = Σ_s l_{θ^s f} θ^{i−s} and θ^i θ^j = C(i+j, i) θ^{i+j}
    /// (per variable). The result acts identically to the composition.
    pub fn compose(&self, other: &DPOp) -> Result<DPOp, DiffopError> {
        self.compatible(other)?;
        let mut out = DPOp::zero(self.vars, self.mode);
        for (&(i1, j1), f1) in &self.terms {
            for (&(i2, j2), f2) in &other.terms {
                for s in 0..=i1 {
                    for t in 0..=j1 {
                        let shifted = f2.theta_apply((s, t));
                        if shifted.is_zero() {
                            continue;
                        }
                        let cx = binomial((i1 - s + i2) as usize, i2 as usize);
                        let cy = binomial((j1 - t + j2) as usize, j2 as usize);
                        let coeff = Rat::from_integer(cx * cy);
                        let poly = f1.mul(&shifted)?.scale(&coeff)?;
                        out.insert_term((i1 - s + i2, j1 - t + j2), poly);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The tested commutator D∘l_f − l_f∘D; lowers the order by at least one.
    pub fn ad_mult(&self, f: &Poly) -> Result<DPOp, DiffopError> {
        let l = DPOp::mult_op(f.clone());
        self.compose(&l)?.sub(&l.compose(self)?)
    }

    /// Max i+j over stored terms; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// ℤ-mode only: whether the operator lies in the span of
    /// {f·∂_X^i ∂_Y^j} = {f·i!·j!·θ_X^i θ_Y^j}, i.e. every coefficient of
    /// f_{i,j} is divisible by i!·j!.
    pub fn is_naive(&self) -> Result<bool, DiffopError> {
        if self.mode != ScalarMode::Integer {
            return Err(DiffopError::NaiveTestNeedsIntegerMode);
        }
        for (&(i, j), f) in &self.terms {
            let divisor = factorial(i as usize) * factorial(j as usize);
            if !f.all_divisible_by(&divisor) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses the operator syntax, e.g. `(X^2+1)*tX^2*tY + 3*tX`, with
    /// `tX`/`tY` the divided powers and `dX`/`dY` the plain derivations
    /// (expanded as i!·θ^i on parse).
    pub fn parse(text: &str, vars: VarCount, mode: ScalarMode) -> Result<DPOp, DiffopError> {
        parse::parse_operator(text, vars, mode)
    }

    /// Parses a plain polynomial (an operator with no differential symbols).
    pub fn parse_poly(text: &str, vars: VarCount, mode: ScalarMode) -> Result<Poly, DiffopError> {
        let op = parse::parse_operator(text, vars, mode)?;
        match op.order() {
            None => Ok(Poly::zero(vars, mode)),
            Some(0) => Ok(op.coefficient((0, 0))),
            Some(_) => Err(DiffopError::NotAPolynomial),
        }
    }
}

impl fmt::Display for DPOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&powers, poly) in &self.terms {
            let symbol = theta_string(powers);
            if poly.terms.len() == 1 {
                let (&exps, coeff) = poly.terms.iter().next().expect("nonempty");
                let mono = monomial_string(exps);
                let combined = match (mono.is_empty(), symbol.is_empty()) {
                    (true, _) => symbol.clone(),
                    (false, true) => mono,
                    (false, false) => format!("{mono}*{symbol}"),
                };
                write_signed_term(f, &mut first, coeff, &combined)?;
            } else {
                // Multi-term coefficient: parenthesized so the output parses
                // back to the same operator.
                if first {
                    first = false;
                } else {
                    write!(f, " + ")?;
                }
                if symbol.is_empty() {
                    write!(f, "({poly})")?;
                } else {
                    write!(f, "({poly})*{symbol}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn q1() -> (VarCount, ScalarMode) {
        (VarCount::One, ScalarMode::Rational)
    }

    fn q2() -> (VarCount, ScalarMode) {
        (VarCount::Two, ScalarMode::Rational)
    }

    fn x_pow(vars: VarCount, mode: ScalarMode, m: u32) -> Poly {
        Poly::monomial(vars, mode, (m, 0), Rat::one()).unwrap()
    }

    #[test]
    fn theta_binomial_action() {
        let (v, m) = q1();
        // θ_X²(X³) = C(3,2)·X = 3X.
        let theta2 = DPOp::theta(v, m, (2, 0)).unwrap();
        let result = theta2.apply(&x_pow(v, m, 3)).unwrap();
        assert_eq!(result, x_pow(v, m, 1).scale(&rat_int(3)).unwrap());
        // Identity operator fixes everything.
        let id = DPOp::identity(v, m);
        let p = DPOp::parse_poly("X^5 - 2*X + 7", v, m).unwrap();
        assert_eq!(id.apply(&p).unwrap(), p);
    }

    #[test]
    fn theta_xy_on_xy() {
        let (v, m) = q2();
        let txy = DPOp::theta(v, m, (1, 1)).unwrap();
        let xy = DPOp::parse_poly("X*Y", v, m).unwrap();
        assert_eq!(txy.apply(&xy).unwrap(), Poly::one(v, m));
    }

    #[test]
    fn compose_divided_powers() {
        let (v, m) = q1();
        let t1 = DPOp::theta(v, m, (1, 0)).unwrap();
        // θ_X ∘ θ_X = 2·θ_X².
        let composed = t1.compose(&t1).unwrap();
        let expected = DPOp::theta(v, m, (2, 0))
            .unwrap()
            .scale(&rat_int(2))
            .unwrap();
        assert_eq!(composed, expected);
        // θ_X ∘ l_X = l_X·θ_X + 1.
        let lx = DPOp::mult_op(x_pow(v, m, 1));
        let composed = t1.compose(&lx).unwrap();
        let expected = lx.compose(&t1).unwrap().add(&DPOp::identity(v, m)).unwrap();
        assert_eq!(composed, expected);
        // Composition with zero is zero.
        assert!(t1.compose(&DPOp::zero(v, m)).unwrap().is_zero());
    }

    #[test]
    fn compose_agrees_with_action() {
        let (v, m) = q2();
        let d1 = DPOp::parse("(X^2+1)*tX^2*tY + 3*tX", v, m).unwrap();
        let d2 = DPOp::parse("Y*tX + tY^2", v, m).unwrap();
        let composed = d1.compose(&d2).unwrap();
        for a in 0..=5u32 {
            for b in 0..=5u32 {
                let p = Poly::monomial(v, m, (a, b), Rat::one()).unwrap();
                let direct = d1.apply(&d2.apply(&p).unwrap()).unwrap();
                let via_normal_form = composed.apply(&p).unwrap();
                assert_eq!(direct, via_normal_form, "on X^{a} Y^{b}");
            }
        }
    }

    #[test]
    fn ad_mult_examples() {
        let (v, m) = q1();
        let t1 = DPOp::theta(v, m, (1, 0)).unwrap();
        // ad(X²)(θ_X) = l_{θ_X(X²)} = l_{2X}.
        let x2 = x_pow(v, m, 2);
        let expected = DPOp::mult_op(x_pow(v, m, 1).scale(&rat_int(2)).unwrap());
        assert_eq!(t1.ad_mult(&x2).unwrap(), expected);
        // Multiplications commute with multiplications.
        let lg = DPOp::mult_op(DPOp::parse_poly("X^3-4", v, m).unwrap());
        let f = DPOp::parse_poly("X^2+X", v, m).unwrap();
        assert!(lg.ad_mult(&f).unwrap().is_zero());
        // ad(X)(θ_X^i) = θ_X^{i−1}.
        for i in 1..=5u32 {
            let ti = DPOp::theta(v, m, (i, 0)).unwrap();
            let expected = DPOp::theta(v, m, (i - 1, 0)).unwrap();
            assert_eq!(ti.ad_mult(&x_pow(v, m, 1)).unwrap(), expected);
        }
    }

    #[test]
    fn order_examples() {
        let (v, m) = q2();
        let lf = DPOp::mult_op(DPOp::parse_poly("X*Y - 3", v, m).unwrap());
        assert_eq!(lf.order(), Some(0));
        let d = DPOp::parse("tX^2 + (Y+1)*tY", v, m).unwrap();
        assert_eq!(d.order(), Some(2));
        assert_eq!(DPOp::zero(v, m).order(), None);
    }

    #[test]
    fn ad_lowers_order_to_zero() {
        let (v, m) = q2();
        let mut rng = crate::rng::SplitMix64::new(7);
        let d0 = DPOp::parse("(X+Y)*tX^2*tY + X*tY^2 + 5*tX", v, m).unwrap();
        let order = d0.order().unwrap();
        // (order+1)-fold ad with random polynomial arguments annihilates.
        let mut current = d0;
        for _ in 0..=order {
            let f = Poly::monomial(
                v,
                m,
                (rng.below(3) as u32, rng.below(3) as u32),
                rat(rng.int_in(1, 5), 1),
            )
            .unwrap();
            let next = current.ad_mult(&f).unwrap();
            if let (Some(prev), Some(now)) = (current.order(), next.order()) {
                assert!(now < prev);
            }
            current = next;
        }
        assert!(current.is_zero());
    }

    #[test]
    fn naive_test_examples() {
        let (v, mz) = (VarCount::Two, ScalarMode::Integer);
        let theta2 = DPOp::theta(v, mz, (2, 0)).unwrap();
        assert!(!theta2.is_naive().unwrap());
        let partial2 = DPOp::partial(v, mz, (2, 0)).unwrap();
        assert_eq!(partial2, theta2.scale(&rat_int(2)).unwrap());
        assert!(partial2.is_naive().unwrap());
        let six = DPOp::parse("6*tX^2*tY", v, mz).unwrap();
        assert!(six.is_naive().unwrap());
        // Over Q the test is refused.
        let q = DPOp::theta(v, ScalarMode::Rational, (2, 0)).unwrap();
        assert_eq!(
            q.is_naive().unwrap_err(),
            DiffopError::NaiveTestNeedsIntegerMode
        );
    }

    #[test]
    fn integer_mode_rejects_fractions() {
        let err = Poly::constant(VarCount::One, ScalarMode::Integer, rat(1, 2)).unwrap_err();
        assert_eq!(err, DiffopError::NonIntegerCoefficient);
        let t = DPOp::theta(VarCount::One, ScalarMode::Integer, (1, 0)).unwrap();
        assert_eq!(
            t.scale(&rat(1, 2)).unwrap_err(),
            DiffopError::NonIntegerCoefficient
        );
    }

    #[test]
    fn integral_action_in_z_mode() {
        let (v, mz) = (VarCount::One, ScalarMode::Integer);
        let theta3 = DPOp::theta(v, mz, (3, 0)).unwrap();
        for mm in 0..=8u32 {
            let p = Poly::monomial(v, mz, (mm, 0), Rat::one()).unwrap();
            let image = theta3.apply(&p).unwrap();
            for (_, c) in image.terms() {
                assert!(crate::scalar::is_integer(c));
            }
        }
    }

    #[test]
    fn one_variable_rejects_y() {
        let (v, m) = q1();
        assert_eq!(
            DPOp::theta(v, m, (0, 1)).unwrap_err(),
            DiffopError::YUnavailable
        );
        assert!(DPOp::parse("tY", v, m).is_err());
        assert!(DPOp::parse("Y + X", v, m).is_err());
    }

    #[test]
    fn display_round_trip() {
        let (v, m) = q2();
        for text in [
            "(X^2+1)*tX^2*tY + 3*tX",
            "tX",
            "0",
            "-2*X*tY + 1/2*tX^2",
            "X^2*Y - Y + 4",
        ] {
            let d = DPOp::parse(text, v, m).unwrap();
            let shown = d.to_string();
            let back = DPOp::parse(&shown, v, m).unwrap();
            assert_eq!(d, back, "display {shown:?} failed to round-trip");
        }
    }

    #[test]
    fn parse_partials_expand_to_thetas() {
        let (v, m) = q1();
        let d = DPOp::parse("dX^2", v, m).unwrap();
        let expected = DPOp::theta(v, m, (2, 0))
            .unwrap()
            .scale(&rat_int(2))
            .unwrap();
        assert_eq!(d, expected);
        // dX^2 acts as the second derivative: on X^4, gives 12X².
        let p = x_pow(v, m, 4);
        assert_eq!(
            d.apply(&p).unwrap(),
            x_pow(v, m, 2).scale(&rat_int(12)).unwrap()
        );
    }
}
