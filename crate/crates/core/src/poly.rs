//! Exact sparse Laurent polynomials in three variables.
//!
//! Terms are stored in a `BTreeMap` keyed by the exponent triple, so iteration
//! is lexicographic on `(ex, ey, ez)` and serialization is deterministic.
//! Coefficients are arbitrary precision; zero coefficients are never stored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exponents of `x`, `y`, `z`. Negative entries are allowed.
pub type Exponents = [i64; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is not exactly divisible by the divisor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("negative power of a variable evaluated at zero")]
    DivisionByZero,
    #[error("invalid coefficient {0:?}")]
    BadCoefficient(String),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// One of the three variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

/// A single term `coeff * x^ex * y^ey * z^ez`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub ex: i64,
    pub ey: i64,
    pub ez: i64,
    pub coeff: BigInt,
}

impl Monomial {
    pub fn new(exps: Exponents, coeff: impl Into<BigInt>) -> Self {
        Monomial { ex: exps[0], ey: exps[1], ez: exps[2], coeff: coeff.into() }
    }

    pub fn exponents(&self) -> Exponents {
        [self.ex, self.ey, self.ez]
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = TriPoly::monomial(self.exponents(), self.coeff.clone());
        write!(f, "{p}")
    }
}

/// Sparse polynomial in `x, y, z` with integer (possibly negative) exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TriPoly {
    terms: BTreeMap<Exponents, BigInt>,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn one() -> Self {
        TriPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        TriPoly::monomial([0, 0, 0], c)
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        TriPoly::monomial(e, 1)
    }

    pub fn x() -> Self {
        TriPoly::var(Var::X)
    }

    pub fn y() -> Self {
        TriPoly::var(Var::Y)
    }

    pub fn z() -> Self {
        TriPoly::var(Var::Z)
    }

    pub fn monomial(exps: Exponents, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        TriPoly { terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated exponents and dropping zero sums.
    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, C)>,
        C: Into<BigInt>,
    {
        let mut p = TriPoly::zero();
        for (e, c) in iter {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: Exponents) -> BigInt {
        self.terms.get(&exps).cloned().unwrap_or_default()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial::new(*e, c.clone()))
    }

    pub fn support(&self) -> BTreeSet<Exponents> {
        self.terms.keys().copied().collect()
    }

    /// Multiplies by the monomial `c * x^e`.
    pub fn mul_monomial(&self, exps: Exponents, c: &BigInt) -> TriPoly {
        if c.is_zero() {
            return TriPoly::zero();
        }
        let terms = self.terms.iter().map(|(e, v)| ([e[0] + exps[0], e[1] + exps[1], e[2] + exps[2]], v * c)).collect();
        TriPoly { terms }
    }

    /// Shifts every exponent by `exps` (multiplication by `x^e` with unit coefficient).
    pub fn shift(&self, exps: Exponents) -> TriPoly {
        let terms =
            self.terms.iter().map(|(e, v)| ([e[0] + exps[0], e[1] + exps[1], e[2] + exps[2]], v.clone())).collect();
        TriPoly { terms }
    }

    /// Maps every exponent triple through `f`. Colliding images are summed.
    pub fn map_exponents<F>(&self, mut f: F) -> TriPoly
    where
        F: FnMut(Exponents) -> Exponents,
    {
        TriPoly::from_terms(self.terms.iter().map(|(e, c)| (f(*e), c.clone())))
    }

    pub fn pow(&self, n: u32) -> TriPoly {
        let mut acc = TriPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn square(&self) -> TriPoly {
        self * self
    }

    /// Total degree if every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e[0] + e[1] + e[2]);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn exponent_range(&self, var: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|e| e[var]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    /// Exact quotient `self / q`, or [`PolyError::NotDivisible`].
    ///
    /// Runs lexicographic leading-term division. Any exact quotient must fit
    /// inside the per-variable exponent box `[min_p - min_q, max_p - max_q]`,
    /// so a candidate term outside it proves non-divisibility and bounds the loop.
    pub fn exact_div(&self, q: &TriPoly) -> Result<TriPoly, PolyError> {
        let (&lead_e, lead_c) = q.terms.iter().next_back().ok_or(PolyError::ZeroDivisor)?;
        if self.is_zero() {
            return Ok(TriPoly::zero());
        }
        let mut lo = [0i64; 3];
        let mut hi = [0i64; 3];
        for v in 0..3 {
            let (plo, phi) = self.exponent_range(v).expect("nonzero");
            let (qlo, qhi) = q.exponent_range(v).expect("nonzero");
            lo[v] = plo - qlo;
            hi[v] = phi - qhi;
            if lo[v] > hi[v] {
                return Err(PolyError::NotDivisible);
            }
        }
        let mut rem = self.clone();
        let mut quot = TriPoly::zero();
        while let Some((&e, c)) = rem.terms.iter().next_back() {
            let te = [e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2]];
            if (0..3).any(|v| te[v] < lo[v] || te[v] > hi[v]) {
                return Err(PolyError::NotDivisible);
            }
            if !(c % lead_c).is_zero() {
                return Err(PolyError::NotDivisible);
            }
            let tc = c / lead_c;
            rem = &rem - &q.mul_monomial(te, &tc);
            quot.add_term(te, tc);
        }
        Ok(quot)
    }

    /// Exact rational value at integer arguments.
    pub fn eval_ints(&self, x0: i64, y0: i64, z0: i64) -> Result<BigRational, PolyError> {
        self.eval_big(&BigInt::from(x0), &BigInt::from(y0), &BigInt::from(z0))
    }

    pub fn eval_big(&self, x0: &BigInt, y0: &BigInt, z0: &BigInt) -> Result<BigRational, PolyError> {
        let bases = [x0, y0, z0];
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for v in 0..3 {
                let k = e[v];
                if k == 0 {
                    continue;
                }
                if bases[v].is_zero() {
                    if k < 0 {
                        return Err(PolyError::DivisionByZero);
                    }
                    term = BigRational::zero();
                    break;
                }
                let p = num_traits::pow(bases[v].clone(), k.unsigned_abs() as usize);
                if k > 0 {
                    term *= BigRational::from_integer(p);
                } else {
                    term /= BigRational::from_integer(p);
                }
            }
            total += term;
        }
        Ok(total)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { ex: e[0], ey: e[1], ez: e[2], c: c.to_string() })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<TriPoly, PolyError> {
        let mut p = TriPoly::zero();
        for t in &j.terms {
            let c: BigInt = t.c.parse().map_err(|_| PolyError::BadCoefficient(t.c.clone()))?;
            p.add_term([t.ex, t.ey, t.ez], c);
        }
        Ok(p)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<TriPoly, PolyError> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        TriPoly::from_json(&j)
    }
}

/// `{"terms":[{"ex":..,"ey":..,"ez":..,"c":"<decimal>"}]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub ex: i64,
    pub ey: i64,
    pub ez: i64,
    pub c: String,
}

impl<'a> Add for &'a TriPoly {
    type Output = TriPoly;

    fn add(self, rhs: &'a TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub for &'a TriPoly {
    type Output = TriPoly;

    fn sub(self, rhs: &'a TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<'a> Mul for &'a TriPoly {
    type Output = TriPoly;

    fn mul(self, rhs: &'a TriPoly) -> TriPoly {
        let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                *acc.entry(e).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TriPoly { terms: acc }
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;

    fn neg(self) -> TriPoly {
        TriPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Add for TriPoly {
    type Output = TriPoly;

    fn add(self, rhs: TriPoly) -> TriPoly {
        &self + &rhs
    }
}

impl Sub for TriPoly {
    type Output = TriPoly;

    fn sub(self, rhs: TriPoly) -> TriPoly {
        &self - &rhs
    }
}

impl Mul for TriPoly {
    type Output = TriPoly;

    fn mul(self, rhs: TriPoly) -> TriPoly {
        &self * &rhs
    }
}

impl Neg for TriPoly {
    type Output = TriPoly;

    fn neg(self) -> TriPoly {
        -&self
    }
}

/// Human-readable form, highest lexicographic term first: `x^2*y - 3*z^-1 + 1`.
impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            for v in Var::ALL {
                match e[v.index()] {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    k => factors.push(format!("{}^{}", v.name(), k)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> TriPoly {
        TriPoly::x()
    }

    fn v() -> TriPoly {
        TriPoly::y()
    }

    #[test]
    fn identity_product() {
        let p = TriPoly::from_terms([([1, 2, -3], 4), ([0, 0, 5], -7)]);
        assert_eq!(&TriPoly::one() * &p, p);
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&u() + &v()) * &(&u() - &v());
        assert_eq!(p, TriPoly::from_terms([([2, 0, 0], 1), ([0, 2, 0], -1)]));
    }

    #[test]
    fn binomial_square_and_division() {
        let s = &u() + &v();
        let sq = s.square();
        assert_eq!(sq, TriPoly::from_terms([([2, 0, 0], 1), ([1, 1, 0], 2), ([0, 2, 0], 1)]));
        assert_eq!(sq.exact_div(&s).unwrap(), s);
        assert_eq!(sq.exact_div(&TriPoly::one()).unwrap(), sq);
    }

    #[test]
    fn vieta_step_divides_exactly() {
        // x^2 + ((x^2+y^2)/z)^2 is divisible by y in the Laurent ring.
        let x = TriPoly::x();
        let m11 = (&x.square() + &TriPoly::y().square()).mul_monomial([0, 0, -1], &BigInt::one());
        let num = &x.square() + &m11.square();
        let q = num.exact_div(&TriPoly::y()).unwrap();
        assert_eq!(&q * &TriPoly::y(), num);
    }

    #[test]
    fn not_divisible_cases() {
        let p = &u() + &TriPoly::one();
        assert_eq!(p.exact_div(&(&u() - &TriPoly::one())), Err(PolyError::NotDivisible));
        let two_x = TriPoly::monomial([1, 0, 0], 2);
        assert_eq!(u().exact_div(&two_x), Err(PolyError::NotDivisible));
        assert_eq!(u().exact_div(&TriPoly::zero()), Err(PolyError::ZeroDivisor));
        // x^2 + y^2 is not a multiple of x + y.
        let p = &u().square() + &v().square();
        assert_eq!(p.exact_div(&(&u() + &v())), Err(PolyError::NotDivisible));
    }

    #[test]
    fn evaluation() {
        let p = TriPoly::monomial([0, 20, 0], 1);
        assert_eq!(p.eval_ints(1, 1, 1).unwrap(), BigRational::one());
        let q = TriPoly::monomial([-1, 0, 0], 3);
        assert_eq!(q.eval_ints(0, 1, 1), Err(PolyError::DivisionByZero));
        assert_eq!(q.eval_ints(2, 5, 5).unwrap(), BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(u().eval_ints(0, 7, 7).unwrap(), BigRational::zero());
    }

    #[test]
    fn support_and_display() {
        assert!(TriPoly::zero().support().is_empty());
        let p = TriPoly::monomial([8, 4, 8], 1);
        assert_eq!(p.support(), BTreeSet::from([[8, 4, 8]]));
        let q = TriPoly::from_terms([([2, 0, 0], 1), ([0, 0, -1], -3), ([0, 0, 0], 1)]);
        assert_eq!(q.to_string(), "x^2 + 1 - 3*z^-1");
        assert_eq!(TriPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_shape() {
        let p = TriPoly::monomial([1, -2, 0], BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap());
        assert_eq!(p.to_json_string(), r#"{"terms":[{"ex":1,"ey":-2,"ez":0,"c":"123456789012345678901234567890"}]}"#);
        assert_eq!(TriPoly::from_json_str(&p.to_json_string()).unwrap(), p);
        assert!(matches!(
            TriPoly::from_json_str(r#"{"terms":[{"ex":1,"ey":0,"ez":0,"c":"1.5"}]}"#),
            Err(PolyError::BadCoefficient(_))
        ));
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = &u() - &u();
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn homogeneous_degree() {
        let p = TriPoly::from_terms([([2, 0, 0], 1), ([1, 0, 1], 1)]);
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!((&p + &TriPoly::one()).homogeneous_degree(), None);
    }
}
