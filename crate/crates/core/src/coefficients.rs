//! Generator counts `a_{2i}`, `b_{2i}` in closed form, and the same numbers
//! read back out of `1 - 1/C_A(q)` and out of the Poincaré series of
//! `BG(A)` (`α_i`, `β_i`).
//!
//! The closed forms are
//!
//! ```text
//! a_{2i} = sum_{k=0}^{floor(i/2)} (i-1-2k) C(n+i-2k-3, n-3)     (n >= 3)
//! b_{2i} = (i-1) C(n+i-3, n-3)                                  (n >= 2)
//! ```
//!
//! with `C(m, k) = 0` whenever `k < 0` or `m < k`, so `b_{2i} = 0` at `n = 2`.
//! Index ranges start at `i = 2`; degree 2 never carries a generator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::cartan::Epsilon;
use crate::error::{domain, Error, Result};
use crate::json::big_to_json;
use crate::poincare::{bg_series, chow_series, SeriesRequest};
use crate::series::{Polynomial, Rational, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `a_{2i}`, from `C_A` with ε = 0.
    A,
    /// `b_{2i}`, from `C_A` with ε = 1.
    B,
    /// `α_i`, sphere counts of `BG(A)` with ε = 0.
    Alpha,
    /// `β_i`, sphere counts of `BG(A)` with ε = 1.
    Beta,
}

impl Family {
    pub fn epsilon(self) -> Epsilon {
        match self {
            Family::A | Family::Alpha => Epsilon::Zero,
            Family::B | Family::Beta => Epsilon::One,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::A => "a",
            Family::B => "b",
            Family::Alpha => "alpha",
            Family::Beta => "beta",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Family::A),
            "b" => Ok(Family::B),
            "alpha" => Ok(Family::Alpha),
            "beta" => Ok(Family::Beta),
            _ => Err(domain(format!("unknown coefficient family {s:?}"))),
        }
    }
}

/// How a table was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    ClosedForm,
    Series,
    BgExtraction,
}

impl Source {
    pub const ALL: [Source; 3] = [Source::ClosedForm, Source::Series, Source::BgExtraction];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::ClosedForm => "closed-form",
            Source::Series => "series",
            Source::BgExtraction => "bg-extraction",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Source::ALL
            .into_iter()
            .find(|src| src.as_str() == s)
            .ok_or_else(|| domain(format!("unknown coefficient source {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    pub family: Family,
    pub source: Source,
    pub n: usize,
    /// `i -> value` for `2 <= i <= max_i`.
    pub values: BTreeMap<usize, BigInt>,
}

impl CoefficientTable {
    fn new(family: Family, source: Source, n: usize, values: BTreeMap<usize, BigInt>) -> Self {
        CoefficientTable {
            family,
            source,
            n,
            values,
        }
    }

    pub fn get(&self, i: usize) -> Option<&BigInt> {
        self.values.get(&i)
    }

    /// Generator counts keyed by degree `2i`, zero entries dropped.
    pub fn by_degree(&self) -> BTreeMap<usize, BigInt> {
        self.values
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&i, v)| (2 * i, v.clone()))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family.as_str(),
            "source": self.source.as_str(),
            "n": self.n,
            "values": self.values.iter()
                .map(|(i, v)| json!({"i": i, "value": big_to_json(v)}))
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# family {} (n = {})", self.family, self.n)?;
        writeln!(f, "{:>4}  {:>24}  source", "i", "value")?;
        for (i, v) in &self.values {
            writeln!(f, "{i:>4}  {v:>24}  {}", self.source)?;
        }
        Ok(())
    }
}

/// `C(m, k)`, zero outside `0 <= k <= m`.
pub fn binomial(m: i64, k: i64) -> BigInt {
    if k < 0 || m < 0 || m < k {
        return BigInt::zero();
    }
    let k = k.min(m - k);
    let mut acc = BigInt::from(1);
    for t in 0..k {
        acc = acc * BigInt::from(m - t) / BigInt::from(t + 1);
    }
    acc
}

fn check_index(family: Family, n: usize, i: usize) -> Result<()> {
    let min_n = match family.epsilon() {
        Epsilon::Zero => 3,
        Epsilon::One => 2,
    };
    if n < min_n {
        return Err(domain(format!("family {family} requires n >= {min_n}, got n = {n}")));
    }
    if i < 2 {
        return Err(domain(format!("coefficient index must be >= 2, got i = {i}")));
    }
    Ok(())
}

pub fn a_closed(n: usize, i: usize) -> Result<BigInt> {
    check_index(Family::A, n, i)?;
    let (n, i) = (n as i64, i as i64);
    Ok((0..=i / 2)
        .map(|k| BigInt::from(i - 1 - 2 * k) * binomial(n + i - 2 * k - 3, n - 3))
        .sum())
}

pub fn b_closed(n: usize, i: usize) -> Result<BigInt> {
    check_index(Family::B, n, i)?;
    let (n, i) = (n as i64, i as i64);
    Ok(BigInt::from(i - 1) * binomial(n + i - 3, n - 3))
}

pub fn closed_table(family: Family, n: usize, max_i: usize) -> Result<CoefficientTable> {
    check_index(family, n, 2)?;
    let f = match family.epsilon() {
        Epsilon::Zero => a_closed,
        Epsilon::One => b_closed,
    };
    let values = (2..=max_i).map(|i| Ok((i, f(n, i)?))).collect::<Result<_>>()?;
    Ok(CoefficientTable::new(family, Source::ClosedForm, n, values))
}

fn as_count(x: &Rational, degree: usize) -> Result<BigInt> {
    if !x.is_integer() || x.is_negative() {
        return Err(Error::IdentityViolated {
            degree,
            detail: format!("expected a nonnegative integer, found {x}"),
        });
    }
    Ok(x.to_integer())
}

fn unexpected(degree: usize, x: &Rational) -> Error {
    Error::IdentityViolated {
        degree,
        detail: format!("expected coefficient 0, found {x}"),
    }
}

/// Reads counts at `q^(2i + offset)` from `s`, demanding that every other
/// positive-degree coefficient vanishes up to the order of `s`.
fn read_counts(
    s: &TruncatedSeries,
    offset: usize,
    max_i: usize,
) -> Result<BTreeMap<usize, BigInt>> {
    let slot = |k: usize| k >= 4 + offset && (k - offset).is_multiple_of(2);
    for (k, x) in s.coeffs().iter().enumerate().skip(1) {
        if !slot(k) && !x.is_zero() {
            return Err(unexpected(k, x));
        }
    }
    (2..=max_i)
        .map(|i| {
            let k = 2 * i + offset;
            Ok((i, as_count(s.coefficient(k)?, k)?))
        })
        .collect()
}

fn check_order(order: usize, needed: usize) -> Result<()> {
    if order < needed {
        return Err(domain(format!("order must be at least {needed}, got {order}")));
    }
    Ok(())
}

/// `1 - 1/C_A(q)` for an arbitrary, possibly perturbed, Chow series.
pub fn generating_series(chow: &TruncatedSeries) -> Result<TruncatedSeries> {
    Ok(&TruncatedSeries::one(chow.order()) - &chow.invert()?)
}

fn from_chow(family: Family, n: usize, max_i: usize, order: usize) -> Result<CoefficientTable> {
    check_index(family, n, 2)?;
    check_order(order, 2 * max_i)?;
    let s = generating_series(&chow_series(n, family.epsilon(), order)?)?;
    let values = read_counts(&s, 0, max_i)?;
    Ok(CoefficientTable::new(family, Source::Series, n, values))
}

/// `a_{2i}` as the `q^{2i}` coefficient of `1 - 1/C_A(q)`, ε = 0.
pub fn a_from_series(n: usize, max_i: usize, order: usize) -> Result<CoefficientTable> {
    from_chow(Family::A, n, max_i, order)
}

/// `b_{2i}` as the `q^{2i}` coefficient of `1 - 1/C_A(q)`, ε = 1.
pub fn b_from_series(n: usize, max_i: usize, order: usize) -> Result<CoefficientTable> {
    from_chow(Family::B, n, max_i, order)
}

/// `α_i` as the `q^{2i+1}` coefficient of `P_n(q)`.
pub fn alpha_from_bg(n: usize, max_i: usize, order: usize) -> Result<CoefficientTable> {
    check_index(Family::Alpha, n, 2)?;
    check_order(order, 2 * max_i + 1)?;
    let p = bg_series(n, Epsilon::Zero, order)?;
    let values = read_counts(&p, 1, max_i)?;
    Ok(CoefficientTable::new(Family::Alpha, Source::BgExtraction, n, values))
}

/// `β_i` as the `q^{2i+1}` coefficient of `(1-q^4) Q_n(q)`.
pub fn beta_from_bg(n: usize, max_i: usize, order: usize) -> Result<CoefficientTable> {
    check_index(Family::Beta, n, 2)?;
    check_order(order, 2 * max_i + 1)?;
    let reduced = reduced_bg_series(n, Epsilon::One, order)?;
    let values = read_counts(&reduced, 1, max_i)?;
    Ok(CoefficientTable::new(Family::Beta, Source::BgExtraction, n, values))
}

/// `P_n` for ε = 0; `(1-q^4) Q_n` for ε = 1.
pub fn reduced_bg_series(n: usize, epsilon: Epsilon, order: usize) -> Result<TruncatedSeries> {
    let bg = bg_series(n, epsilon, order)?;
    Ok(match epsilon {
        Epsilon::Zero => bg,
        Epsilon::One => {
            &bg * &TruncatedSeries::from_polynomial(&Polynomial::from_ints(&[1, 0, 0, 0, -1]), order)
        }
    })
}

/// Computes any family from any source.
pub fn table(
    family: Family,
    source: Source,
    n: usize,
    max_i: usize,
    order: usize,
) -> Result<CoefficientTable> {
    let mut t = match source {
        Source::ClosedForm => closed_table(family, n, max_i)?,
        Source::Series => from_chow(family, n, max_i, order)?,
        Source::BgExtraction => match family.epsilon() {
            Epsilon::Zero => alpha_from_bg(n, max_i, order)?,
            Epsilon::One => beta_from_bg(n, max_i, order)?,
        },
    };
    t.family = family;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerificationReport {
    Verified,
    Discrepancy { degree: usize, detail: String },
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        matches!(self, VerificationReport::Verified)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationReport::Verified => f.write_str("verified"),
            VerificationReport::Discrepancy { degree, detail } => {
                write!(f, "discrepancy at degree {degree}: {detail}")
            }
        }
    }
}

/// Checks, coefficientwise up to `order - 1`,
///
/// ```text
/// (R(q) - 1) / q  =  ((n-1)q^2 - 1) / ((1-q^2)^(n-1) (1-q^4)^(1-ε)) + 1  =  1 - 1/C_A(q)
/// ```
///
/// where `R = P_n` (ε = 0) or `(1-q^4) Q_n` (ε = 1), and that the closed-form
/// counts for `i <= max_i` sit at `q^{2i}`.
pub fn verify_identity(
    n: usize,
    epsilon: Epsilon,
    max_i: usize,
    order: usize,
) -> Result<VerificationReport> {
    let chow = chow_series(n, epsilon, order)?;
    verify_identity_against(n, epsilon, &chow, max_i)
}

/// [`verify_identity`] with a caller-supplied Chow series, so that a
/// perturbed input can be checked to fail.
pub fn verify_identity_against(
    n: usize,
    epsilon: Epsilon,
    chow: &TruncatedSeries,
    max_i: usize,
) -> Result<VerificationReport> {
    let req = SeriesRequest::new(n, epsilon, chow.order())?;
    let order = req.order;
    if order < 2 {
        return Err(domain("identity check needs order >= 2"));
    }
    let reduced = reduced_bg_series(n, epsilon, order)?;
    let lhs = (&reduced - &TruncatedSeries::one(order)).shift_down(1)?;

    let mut den = Polynomial::from_ints(&[1, 0, -1]).pow(n as u32 - 1);
    if epsilon == Epsilon::Zero {
        den = &den * &Polynomial::from_ints(&[1, 0, 0, 0, -1]);
    }
    let middle = &crate::series::PolyFraction::new(
        Polynomial::from_ints(&[-1, 0, n as i64 - 1]),
        den,
    )?
    .expand(order - 1)
        + &TruncatedSeries::one(order - 1);
    let rhs = generating_series(chow)?.truncate(order - 1);

    let pairs = [("(R-1)/q", "closed fraction", &lhs, &middle), ("closed fraction", "1-1/C_A", &middle, &rhs)];
    for (left, right, x, y) in pairs {
        if let Some(k) = x.first_difference(y) {
            return Ok(VerificationReport::Discrepancy {
                degree: k,
                detail: format!("{left} has {}, {right} has {}", x.coeffs()[k], y.coeffs()[k]),
            });
        }
    }
    let closed = closed_table(
        match epsilon {
            Epsilon::Zero => Family::A,
            Epsilon::One => Family::B,
        },
        n,
        max_i,
    )?;
    for (&i, v) in &closed.values {
        let k = 2 * i;
        let Ok(found) = rhs.coefficient(k) else { break };
        if *found != Rational::from_integer(v.clone()) {
            return Ok(VerificationReport::Discrepancy {
                degree: k,
                detail: format!("closed form gives {v}, series has {found}"),
            });
        }
    }
    Ok(VerificationReport::Verified)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(t: &CoefficientTable) -> Vec<i64> {
        t.values.values().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn closed_examples() {
        assert_eq!(a_closed(3, 2).unwrap(), BigInt::zero());
        assert_eq!(a_closed(3, 3).unwrap(), BigInt::from(2));
        assert_eq!(a_closed(3, 4).unwrap(), BigInt::from(3));
        assert_eq!(b_closed(3, 2).unwrap(), BigInt::from(1));
        assert_eq!(b_closed(3, 4).unwrap(), BigInt::from(3));
        for i in 2..30 {
            assert!(b_closed(2, i).unwrap().is_zero());
        }
        assert!(a_closed(2, 3).is_err());
        assert!(b_closed(3, 1).is_err());
    }

    #[test]
    fn series_examples() {
        assert_eq!(vals(&a_from_series(3, 4, 8).unwrap()), vec![0, 2, 3]);
        assert_eq!(vals(&b_from_series(3, 4, 8).unwrap()), vec![1, 2, 3]);
        assert!(b_from_series(2, 10, 20).unwrap().values.values().all(Zero::is_zero));
        assert!(a_from_series(3, 10, 19).is_err());
    }

    #[test]
    fn bg_extraction_examples() {
        let alpha = alpha_from_bg(3, 4, 9).unwrap();
        assert_eq!(vals(&alpha), vec![0, 2, 3]);
        let p = bg_series(3, Epsilon::Zero, 9).unwrap();
        assert_eq!(
            p.coefficient(5).unwrap(),
            &Rational::from_integer(alpha.get(2).unwrap().clone())
        );
        assert_eq!(vals(&beta_from_bg(3, 4, 9).unwrap()), vec![1, 2, 3]);
        assert!(beta_from_bg(2, 8, 17).unwrap().values.values().all(Zero::is_zero));
        assert_eq!(alpha_from_bg(4, 19, 40).unwrap().values, closed_table(Family::A, 4, 19).unwrap().values);
        assert!(alpha_from_bg(3, 4, 8).is_err());
    }

    #[test]
    fn extraction_flags_stray_coefficients() {
        let mut c: Vec<Rational> = chow_series(3, Epsilon::Zero, 12).unwrap().coeffs().to_vec();
        c[7] = Rational::from_integer(1.into());
        let s = generating_series(&TruncatedSeries::from_coeffs(c)).unwrap();
        let err = read_counts(&s, 0, 5).unwrap_err();
        assert!(matches!(err, Error::IdentityViolated { degree: 7, .. }));
    }

    #[test]
    fn closed_equals_extractions_small_ranks() {
        for n in 3..=8 {
            let closed = closed_table(Family::A, n, 19).unwrap().values;
            assert_eq!(a_from_series(n, 19, 40).unwrap().values, closed);
            assert_eq!(alpha_from_bg(n, 19, 40).unwrap().values, closed);
        }
        for n in 2..=8 {
            let closed = closed_table(Family::B, n, 19).unwrap().values;
            assert_eq!(b_from_series(n, 19, 40).unwrap().values, closed);
            assert_eq!(beta_from_bg(n, 19, 40).unwrap().values, closed);
        }
    }

    #[test]
    fn b_is_increasing_for_n_at_least_three() {
        for n in 3..=8 {
            let t = closed_table(Family::B, n, 19).unwrap();
            let v: Vec<&BigInt> = t.values.values().collect();
            assert!(v.windows(2).all(|w| w[0] < w[1]), "n={n}");
        }
    }

    #[test]
    fn defining_display_read_back() {
        for n in 3..=8 {
            let t = closed_table(Family::A, n, 20).unwrap();
            let mut coeffs = vec![0i64; 41];
            coeffs[0] = 1;
            let mut p = Polynomial::from_ints(&coeffs);
            for (&i, v) in &t.values {
                p = &p - &Polynomial::monomial(Rational::from_integer(v.clone()), 2 * i);
            }
            let prod = &TruncatedSeries::from_polynomial(&p, 40) * &chow_series(n, Epsilon::Zero, 40).unwrap();
            assert_eq!(prod, TruncatedSeries::one(40));
        }
    }

    #[test]
    fn identity_verification() {
        assert!(verify_identity(3, Epsilon::Zero, 19, 40).unwrap().is_verified());
        assert!(verify_identity(5, Epsilon::One, 19, 40).unwrap().is_verified());
        let mut c: Vec<Rational> = chow_series(4, Epsilon::Zero, 40).unwrap().coeffs().to_vec();
        c[12] += Rational::from_integer(1.into());
        let report =
            verify_identity_against(4, Epsilon::Zero, &TruncatedSeries::from_coeffs(c), 19).unwrap();
        match report {
            VerificationReport::Discrepancy { degree, .. } => assert_eq!(degree, 12),
            other => panic!("expected discrepancy, got {other}"),
        }
    }

    #[test]
    fn names_parse() {
        for f in [Family::A, Family::B, Family::Alpha, Family::Beta] {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        for s in Source::ALL {
            assert_eq!(s.as_str().parse::<Source>().unwrap(), s);
        }
    }

    #[test]
    fn generic_table_dispatch() {
        let t = table(Family::Alpha, Source::Series, 4, 6, 20).unwrap();
        assert_eq!(t.family, Family::Alpha);
        assert_eq!(t.values, closed_table(Family::A, 4, 6).unwrap().values);
        assert_eq!(t.by_degree().keys().next(), Some(&4));
    }
}
