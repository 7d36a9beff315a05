//! Exact truncated power series and polynomial fractions over the rationals.
//!
//! Every Poincaré series in this crate is built from two kinds of values:
//! [`PolyFraction`], an unreduced numerator/denominator pair of rational
//! polynomials that stands for a closed form, and [`TruncatedSeries`], the
//! coefficients of its expansion in degrees `0..=order`.
//!
//! Truncation is tracked explicitly. Binary operations on series produce the
//! smaller of the two operand orders, and reading a coefficient past the
//! order is an error rather than an implicit zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use thiserror::Error;

/// Exact rational coefficient.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("coefficient of q^{degree} requested beyond truncation order {order}")]
    BeyondTruncation { degree: usize, order: usize },
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("logarithm requires constant term 1, found {0}")]
    NonUnitConstantTerm(Rational),
    #[error("exponential requires constant term 0, found {0}")]
    NonZeroConstantTerm(Rational),
    #[error("denominator has zero constant term; no power-series expansion exists")]
    NotExpandable,
    #[error("cannot divide by q^{shift}: coefficient of q^{degree} is nonzero")]
    NotDivisible { shift: usize, degree: usize },
    #[error("cannot divide by q^{shift} a series truncated at order {order}")]
    ShiftExceedsOrder { shift: usize, order: usize },
    #[error("malformed series JSON: {0}")]
    Malformed(String),
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense univariate polynomial with rational coefficients, index = degree.
///
/// Trailing zero coefficients are always trimmed, so structural equality is
/// polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `1 - c * q^k`; the building block of every denominator in this crate.
    pub fn one_minus(c: Rational, k: usize) -> Self {
        Self::one() - Self::monomial(c, k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate())
    }
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (usize, &'a Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms.filter(|(_, c)| !c.is_zero()) {
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let mag = c.abs();
        match (k, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => f.write_str("q")?,
            (1, false) => write!(f, "{mag}*q")?,
            (_, true) => write!(f, "q^{k}")?,
            (_, false) => write!(f, "{mag}*q^{k}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// A rational function `numerator / denominator` whose denominator has a
/// nonzero constant term, so it has a power-series expansion at `q = 0`.
///
/// No cancellation is ever performed. `==` compares by cross-multiplication.
#[derive(Debug, Clone)]
pub struct PolyFraction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl PolyFraction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self, SeriesError> {
        if denominator.coeff(0).is_zero() {
            return Err(SeriesError::NotExpandable);
        }
        Ok(PolyFraction {
            numerator,
            denominator,
        })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        PolyFraction {
            numerator: p,
            denominator: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_polynomial(Polynomial::one())
    }

    /// `1 / p` for a polynomial with nonzero constant term.
    pub fn reciprocal_of(p: Polynomial) -> Result<Self, SeriesError> {
        Self::new(Polynomial::one(), p)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// `1 / self`; requires the numerator to have a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        Self::new(self.denominator.clone(), self.numerator.clone())
    }

    pub fn pow(&self, exp: u32) -> Self {
        PolyFraction {
            numerator: self.numerator.pow(exp),
            denominator: self.denominator.pow(exp),
        }
    }

    /// Power-series expansion to degree `order` by the term recursion
    /// `den_0 * f_k = num_k - sum_{j=1..k} den_j * f_{k-j}`.
    pub fn expand(&self, order: usize) -> TruncatedSeries {
        let d0 = self.denominator.coeff(0);
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.numerator.coeff(k);
            for (j, dj) in self.denominator.coeffs().iter().enumerate().skip(1) {
                if j > k {
                    break;
                }
                if !dj.is_zero() {
                    acc -= dj * &out[k - j];
                }
            }
            out.push(acc / &d0);
        }
        TruncatedSeries { coeffs: out }
    }
}

impl PartialEq for PolyFraction {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl fmt::Display for PolyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

impl Add<&PolyFraction> for &PolyFraction {
    type Output = PolyFraction;
    fn add(self, rhs: &PolyFraction) -> PolyFraction {
        if self.denominator == rhs.denominator {
            return PolyFraction {
                numerator: &self.numerator + &rhs.numerator,
                denominator: self.denominator.clone(),
            };
        }
        PolyFraction {
            numerator: &(&self.numerator * &rhs.denominator)
                + &(&rhs.numerator * &self.denominator),
            denominator: &self.denominator * &rhs.denominator,
        }
    }
}

impl Sub<&PolyFraction> for &PolyFraction {
    type Output = PolyFraction;
    fn sub(self, rhs: &PolyFraction) -> PolyFraction {
        self + &(-rhs)
    }
}

impl Mul<&PolyFraction> for &PolyFraction {
    type Output = PolyFraction;
    fn mul(self, rhs: &PolyFraction) -> PolyFraction {
        PolyFraction {
            numerator: &self.numerator * &rhs.numerator,
            denominator: &self.denominator * &rhs.denominator,
        }
    }
}

impl Neg for &PolyFraction {
    type Output = PolyFraction;
    fn neg(self) -> PolyFraction {
        PolyFraction {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }
}

/// Formal power series known exactly in degrees `0..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    // invariant: nonempty, len == order + 1
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Series whose order is `coeffs.len() - 1`. An empty vector is treated
    /// as the zero series of order 0.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        TruncatedSeries { coeffs }
    }

    /// Pads with zeros, or truncates, to exactly `order`.
    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::from_polynomial(&Polynomial::from_ints(coeffs), order)
    }

    pub fn from_polynomial(p: &Polynomial, order: usize) -> Self {
        TruncatedSeries {
            coeffs: (0..=order).map(|k| p.coeff(k)).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Exact coefficient of `q^k`.
    pub fn coefficient(&self, k: usize) -> Result<&Rational, SeriesError> {
        self.coeffs.get(k).ok_or(SeriesError::BeyondTruncation {
            degree: k,
            order: self.order(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drops coefficients above `order`; a larger `order` is clamped, since
    /// precision cannot be created.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=keep].to_vec(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `q^k * self`, known to order `order + k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// `self / q^k`, known to order `order - k`; the first `k` coefficients
    /// must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self, SeriesError> {
        if k > self.order() {
            return Err(SeriesError::ShiftExceedsOrder {
                shift: k,
                order: self.order(),
            });
        }
        if let Some(degree) = (0..k).find(|&d| !self.coeffs[d].is_zero()) {
            return Err(SeriesError::NotDivisible { shift: k, degree });
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Lowest degree at which two series disagree, compared up to the
    /// smaller order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let s0 = &self.coeffs[0];
        if s0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = s0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for k in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let sj = &self.coeffs[j];
                if !sj.is_zero() {
                    acc += sj * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Logarithm of a series with constant term 1, i.e. the truncation of
    /// `sum_{m>=1} (-1)^{m+1} (s-1)^m / m`.
    ///
    /// Computed from `s' = (log s)' * s`, which gives
    /// `k c_k = k s_k - sum_{j=1..k-1} j c_j s_{k-j}`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitConstantTerm(self.coeffs[0].clone()));
        }
        let mut out: Vec<Rational> = vec![Rational::zero()];
        for k in 1..self.coeffs.len() {
            let mut acc = rat(k as i64) * &self.coeffs[k];
            for j in 1..k {
                if !out[j].is_zero() {
                    acc -= rat(j as i64) * &out[j] * &self.coeffs[k - j];
                }
            }
            out.push(acc / rat(k as i64));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonZeroConstantTerm(self.coeffs[0].clone()));
        }
        let mut out: Vec<Rational> = vec![Rational::one()];
        for k in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += rat(j as i64) * &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(acc / rat(k as i64));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// JSON array of coefficient strings, index = degree. Integers print
    /// bare (`"3"`), others as lowest-terms `"p/q"`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect(),
        )
    }

    pub fn from_json(value: &Value) -> Result<Self, SeriesError> {
        let items = value
            .as_array()
            .ok_or_else(|| SeriesError::Malformed("expected an array".into()))?;
        if items.is_empty() {
            return Err(SeriesError::Malformed("empty coefficient array".into()));
        }
        let coeffs = items
            .iter()
            .map(|v| {
                let s = v
                    .as_str()
                    .ok_or_else(|| SeriesError::Malformed(format!("expected string, got {v}")))?;
                parse_rational(s)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TruncatedSeries { coeffs })
    }
}

/// Parses `"p"` or `"p/q"` with a nonzero denominator.
pub fn parse_rational(s: &str) -> Result<Rational, SeriesError> {
    let bad = || SeriesError::Malformed(format!("bad rational literal {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p).map_err(|_| bad())?;
            let q = BigInt::from_str(q).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate())?;
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

impl Add<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($ty:ty, $tr:ident, $method:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Polynomial, Add, add);
forward_owned_binop!(Polynomial, Sub, sub);
forward_owned_binop!(Polynomial, Mul, mul);
forward_owned_binop!(PolyFraction, Add, add);
forward_owned_binop!(PolyFraction, Sub, sub);
forward_owned_binop!(PolyFraction, Mul, mul);
forward_owned_binop!(TruncatedSeries, Add, add);
forward_owned_binop!(TruncatedSeries, Sub, sub);
forward_owned_binop!(TruncatedSeries, Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(coeffs: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_ints(coeffs, order)
    }

    fn frac(num: &[i64], den: &[i64]) -> PolyFraction {
        PolyFraction::new(Polynomial::from_ints(num), Polynomial::from_ints(den)).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(&[1, 0, 1], 8) * s(&[1, 0, -1], 8), s(&[1, 0, 0, 0, -1], 8));
        let x = s(&[3, -1, 0, 7], 6);
        assert_eq!(&x * &TruncatedSeries::one(6), x);
        let geom = frac(&[1], &[1, 0, -1]).expand(12);
        assert_eq!(geom * s(&[1, 0, -1], 12), TruncatedSeries::one(12));
    }

    #[test]
    fn binary_ops_take_min_order() {
        let a = s(&[1, 2, 3], 5);
        let b = s(&[1, 1], 3);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a - &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(
            s(&[1, 0, -2], 8).invert().unwrap(),
            s(&[1, 0, 2, 0, 4, 0, 8, 0, 16], 8)
        );
        assert_eq!(TruncatedSeries::one(5).invert().unwrap(), TruncatedSeries::one(5));
        assert_eq!(s(&[0, 1], 4).invert(), Err(SeriesError::ZeroConstantTerm));
    }

    #[test]
    fn invert_cube_like_product() {
        // (1-q^2)^2 (1-q^4), inverted, checked by multiplying back.
        let p = &Polynomial::from_ints(&[1, 0, -1]).pow(2) * &Polynomial::from_ints(&[1, 0, 0, 0, -1]);
        let base = TruncatedSeries::from_polynomial(&p, 8);
        let inv = base.invert().unwrap();
        assert_eq!(&base * &inv, TruncatedSeries::one(8));
        assert_eq!(inv, s(&[1, 0, 2, 0, 4, 0, 6, 0, 9], 8));
    }

    #[test]
    fn expand_examples() {
        assert_eq!(frac(&[1, 0, 1], &[1, 0, -2]).expand(6), s(&[1, 0, 3, 0, 6, 0, 12], 6));
        assert_eq!(frac(&[4, 0, 5], &[1]).expand(5), s(&[4, 0, 5], 5));
        assert_eq!(
            frac(&[1], &[1, 0, 0, 0, -1]).expand(8),
            s(&[1, 0, 0, 0, 1, 0, 0, 0, 1], 8)
        );
    }

    #[test]
    fn expand_rejects_zero_constant_denominator() {
        let err = PolyFraction::new(Polynomial::one(), Polynomial::from_ints(&[0, 1]));
        assert_eq!(err.unwrap_err(), SeriesError::NotExpandable);
    }

    #[test]
    fn expand_with_nonunit_denominator() {
        // 1/(2 - q) = 1/2 + q/4 + q^2/8
        let f = frac(&[1], &[2, -1]).expand(2);
        assert_eq!(f.coefficient(2).unwrap(), &Rational::new(1.into(), 8.into()));
    }

    #[test]
    fn log_examples() {
        assert!(TruncatedSeries::one(6).log().unwrap().is_zero());
        let l = frac(&[1], &[1, 0, -1]).expand(8).log().unwrap();
        let expected: Vec<Rational> = (0..=8)
            .map(|k| {
                if k > 0 && k % 2 == 0 {
                    Rational::new(1.into(), BigInt::from(k / 2))
                } else {
                    Rational::zero()
                }
            })
            .collect();
        assert_eq!(l, TruncatedSeries::from_coeffs(expected));
        assert!(matches!(s(&[2, 1], 3).log(), Err(SeriesError::NonUnitConstantTerm(_))));
        assert!(matches!(s(&[1, 1], 3).exp(), Err(SeriesError::NonZeroConstantTerm(_))));
    }

    #[test]
    fn coefficient_access() {
        let x = s(&[1, 0, 3], 2);
        assert_eq!(x.coefficient(2).unwrap(), &rat(3));
        assert_eq!(x.coefficient(1).unwrap(), &rat(0));
        assert_eq!(
            x.coefficient(5),
            Err(SeriesError::BeyondTruncation { degree: 5, order: 2 })
        );
    }

    #[test]
    fn shifts() {
        let x = s(&[0, 0, 1, 2], 3);
        assert_eq!(x.shift_down(2).unwrap(), s(&[1, 2], 1));
        assert!(matches!(x.shift_down(3), Err(SeriesError::NotDivisible { degree: 2, .. })));
        assert_eq!(x.shift_up(1).order(), 4);
    }

    #[test]
    fn poly_fraction_equality_is_cross_multiplication() {
        // (1+q)/(1-q^2) = 1/(1-q)
        assert_eq!(frac(&[1, 1], &[1, 0, -1]), frac(&[1], &[1, -1]));
        assert_ne!(frac(&[1, 1], &[1, 0, -1]), frac(&[1], &[1, 1]));
    }

    #[test]
    fn json_shape() {
        let x = TruncatedSeries::from_coeffs(vec![rat(1), Rational::new(2.into(), 4.into()), rat(-3)]);
        let v = x.to_json();
        assert_eq!(v.to_string(), r#"["1","1/2","-3"]"#);
        assert_eq!(TruncatedSeries::from_json(&v).unwrap(), x);
        assert!(TruncatedSeries::from_json(&serde_json::json!(["1/0"])).is_err());
        assert!(TruncatedSeries::from_json(&serde_json::json!([])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(s(&[1, -1, 0, 2], 3).to_string(), "1 - q + 2*q^3 + O(q^4)");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    const ORDER: usize = 10;

    fn series_strategy(unit: bool) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(-5i64..=5, ORDER + 1).prop_map(move |mut v| {
            if unit {
                v[0] = 1;
            }
            TruncatedSeries::from_ints(&v, ORDER)
        })
    }

    fn fraction_strategy() -> impl Strategy<Value = PolyFraction> {
        (
            proptest::collection::vec(-4i64..=4, 0..5),
            proptest::collection::vec(-4i64..=4, 0..4),
            prop_oneof![Just(1i64), Just(-1), Just(2), Just(3)],
        )
            .prop_map(|(num, mut den, d0)| {
                den.insert(0, d0);
                frac(&num, &den)
            })
    }

    fn naive_log(s: &TruncatedSeries) -> TruncatedSeries {
        let x = s - &TruncatedSeries::one(s.order());
        let mut acc = TruncatedSeries::zero(s.order());
        let mut power = TruncatedSeries::one(s.order());
        for m in 1..=s.order() as i64 {
            power = &power * &x;
            let sign = if m % 2 == 1 { 1 } else { -1 };
            acc = &acc + &power.scale(&Rational::new(sign.into(), m.into()));
        }
        acc
    }

    proptest! {
        #[test]
        fn ring_axioms(a in series_strategy(false), b in series_strategy(false), c in series_strategy(false)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn invert_is_two_sided(a in series_strategy(true)) {
            let inv = a.invert().unwrap();
            prop_assert_eq!(&a * &inv, TruncatedSeries::one(ORDER));
            prop_assert_eq!(&inv * &a, TruncatedSeries::one(ORDER));
        }

        #[test]
        fn expand_is_ring_homomorphism(f in fraction_strategy(), g in fraction_strategy()) {
            prop_assert_eq!((&f + &g).expand(ORDER), &f.expand(ORDER) + &g.expand(ORDER));
            prop_assert_eq!((&f * &g).expand(ORDER), &f.expand(ORDER) * &g.expand(ORDER));
        }

        #[test]
        fn log_matches_defining_sum_and_is_additive(a in series_strategy(true), b in series_strategy(true)) {
            let la = a.log().unwrap();
            prop_assert_eq!(&la, &naive_log(&a));
            prop_assert_eq!((&a * &b).log().unwrap(), &la + &b.log().unwrap());
            prop_assert_eq!(la.exp().unwrap(), a);
        }

        #[test]
        fn json_round_trip(a in series_strategy(false), d in 1i64..7) {
            let x = a.scale(&Rational::new(1.into(), d.into()));
            let text = x.to_json().to_string();
            let back = TruncatedSeries::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert_eq!(back.to_json().to_string(), text);
        }
    }
}
