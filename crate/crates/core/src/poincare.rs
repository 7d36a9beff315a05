//! Poincaré series of flag manifolds, of the even homology of `G(A)` and of
//! `BG(A)`, both in closed form and through the rank induction built on the
//! Mayer-Vietoris splitting `BG(A) ~ X_{1..n-1} ∪_{BT} X_n`.
//!
//! Throughout, `u = 1/(1-q^2)` is the series of `H*(BS^1)` and
//! `v = 1/(1-q^4)` is the series of `Q[ψ]`, with `ψ` the degree-4
//! invariant form.

use std::fmt;
use std::str::FromStr;

use crate::cartan::Epsilon;
use crate::error::{domain, Error, Result};
use crate::series::{rat, PolyFraction, Polynomial, TruncatedSeries};

/// Validated `(n, ε, order)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesRequest {
    pub n: usize,
    pub epsilon: Epsilon,
    pub order: usize,
}

impl SeriesRequest {
    /// A generic rank-2 matrix is always symmetrizable, so ε = 0 starts at
    /// rank 3 while ε = 1 starts at rank 2.
    pub fn new(n: usize, epsilon: Epsilon, order: usize) -> Result<Self> {
        let min = min_rank(epsilon);
        if n < min {
            return Err(domain(format!(
                "epsilon = {epsilon} requires n >= {min}, got n = {n}"
            )));
        }
        Ok(SeriesRequest { n, epsilon, order })
    }
}

pub fn min_rank(epsilon: Epsilon) -> usize {
    match epsilon {
        Epsilon::Zero => 3,
        Epsilon::One => 2,
    }
}

fn one_minus_q2() -> Polynomial {
    Polynomial::one_minus(rat(1), 2)
}

fn one_minus_q4() -> Polynomial {
    Polynomial::one_minus(rat(1), 4)
}

fn q() -> PolyFraction {
    PolyFraction::from_polynomial(Polynomial::monomial(rat(1), 1))
}

/// `1/(1-q^2)^k` to `order`.
pub fn torus_series(k: u32, order: usize) -> TruncatedSeries {
    PolyFraction::reciprocal_of(one_minus_q2().pow(k))
        .expect("constant term 1")
        .expand(order)
}

/// Series of the Weyl invariants `H*(BT)^W`: `Q` (ε = 0) or `Q[ψ]` (ε = 1).
pub fn weyl_invariants_series(epsilon: Epsilon, order: usize) -> TruncatedSeries {
    match epsilon {
        Epsilon::Zero => TruncatedSeries::one(order),
        Epsilon::One => psi_series(order),
    }
}

fn psi_series(order: usize) -> TruncatedSeries {
    PolyFraction::reciprocal_of(one_minus_q4())
        .expect("constant term 1")
        .expand(order)
}

pub fn flag_fraction(n: usize) -> Result<PolyFraction> {
    if n < 2 {
        return Err(domain(format!("flag series requires n >= 2, got n = {n}")));
    }
    let num = Polynomial::from_ints(&[1, 0, 1]);
    let den = Polynomial::one_minus(rat(n as i64 - 1), 2);
    Ok(PolyFraction::new(num, den)?)
}

/// `(1+q^2) / (1-(n-1)q^2)`.
pub fn flag_series(n: usize, order: usize) -> Result<TruncatedSeries> {
    Ok(flag_fraction(n)?.expand(order))
}

/// `C_A(q)` after cancelling `1+q^2` against `(1-q^2)^n`:
/// `(1-q^2)^(n-1) (1-q^4)^(1-ε) / (1-(n-1)q^2)`.
pub fn chow_fraction(n: usize, epsilon: Epsilon) -> Result<PolyFraction> {
    let req = SeriesRequest::new(n, epsilon, 0)?;
    let mut num = one_minus_q2().pow(req.n as u32 - 1);
    if epsilon == Epsilon::Zero {
        num = &num * &one_minus_q4();
    }
    let den = Polynomial::one_minus(rat(n as i64 - 1), 2);
    Ok(PolyFraction::new(num, den)?)
}

pub fn chow_series(n: usize, epsilon: Epsilon, order: usize) -> Result<TruncatedSeries> {
    Ok(chow_fraction(n, epsilon)?.expand(order))
}

/// `P_n(q)` (ε = 0) or `Q_n(q)` (ε = 1):
///
/// ```text
/// P_n = q [ ((n-1)q^2 - 1) / ((1-q^2)^(n-1) (1-q^4)) + 1 ] + 1
/// Q_n = ( q [ ((n-1)q^2 - 1) / (1-q^2)^(n-1) + 1 ] + 1 ) / (1-q^4)
/// ```
pub fn bg_fraction(n: usize, epsilon: Epsilon) -> Result<PolyFraction> {
    SeriesRequest::new(n, epsilon, 0)?;
    let one = PolyFraction::one();
    let tail = Polynomial::from_ints(&[-1, 0, n as i64 - 1]);
    let torus = one_minus_q2().pow(n as u32 - 1);
    Ok(match epsilon {
        Epsilon::Zero => {
            let inner = &PolyFraction::new(tail, &torus * &one_minus_q4())? + &one;
            &(&q() * &inner) + &one
        }
        Epsilon::One => {
            let inner = &PolyFraction::new(tail, torus)? + &one;
            let reduced = &(&q() * &inner) + &one;
            &reduced * &PolyFraction::reciprocal_of(one_minus_q4())?
        }
    })
}

pub fn bg_series(n: usize, epsilon: Epsilon, order: usize) -> Result<TruncatedSeries> {
    Ok(bg_fraction(n, epsilon)?.expand(order))
}

/// `base / (1-q^2)^k`: the series of `BG_I(A) ~ BG(A_I) x BT^k`.
pub fn parabolic_series(base: &TruncatedSeries, torus_rank: u32) -> TruncatedSeries {
    base * &torus_series(torus_rank, base.order())
}

/// One Mayer-Vietoris step `X = X_{1..m-1} ∪_{BT} X_m` at the level of
/// Poincaré series: `H*(X) = Σ coker j ⊕ ker j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MayerVietorisStep {
    pub rank: usize,
    pub coker: TruncatedSeries,
    pub ker: TruncatedSeries,
    pub total: TruncatedSeries,
}

/// Cokernel of `j: H*(X_{1..n-1}) ⊕ H*(X_n) -> H*(BT)`.
///
/// `H*(BT)` has series `u^n`, `H*(X_n) = H*(BSU(2)) ⊗ H*(BT^{n-1})` injects
/// with series `u^(n-1) v`, and the two images meet in the Weyl invariants.
/// The image of `X_{1..n-1}` is its own invariant ring tensored with the
/// complementary circle:
///
/// * ε = 0, n = 3 (the split `{1,2} | {3}`, with `A_{12}` symmetrizable of
///   rank 2): `u v`, meeting in `1`, so `coker = u^3 - u v - u^2 v + 1`.
/// * ε = 0, n >= 4 (`A_{1..n-1}` non-symmetrizable): `u`, meeting in `1`,
///   so `coker = u^n - u^(n-1) v - u + 1`.
/// * ε = 1: `u v`, meeting in `v`, so `coker = u^n - u^(n-1) v - u v + v`;
///   this vanishes identically when `n = 2`.
pub fn mv_coker_series(n: usize, epsilon: Epsilon, order: usize) -> Result<TruncatedSeries> {
    let req = SeriesRequest::new(n, epsilon, order)?;
    let n = req.n as u32;
    let u = |k| torus_series(k, order);
    let v = psi_series(order);
    let top = &u(n) - &(&u(n - 1) * &v);
    Ok(match (epsilon, n) {
        (Epsilon::Zero, 3) => {
            &(&top - &(&u(1) * &v)) + &TruncatedSeries::one(order)
        }
        (Epsilon::Zero, _) => &(&top - &u(1)) + &TruncatedSeries::one(order),
        (Epsilon::One, _) => &(&top - &(&u(1) * &v)) + &v,
    })
}

/// The full chain of Mayer-Vietoris steps from the base case up to rank `n`:
/// rank 3 for ε = 0, rank 2 for ε = 1.
///
/// `ker j = H*(X_{1..n-1}) ×_{H*(BT)} H*(X_n)`:
///
/// * base cases: the Weyl invariants, `1` or `v`;
/// * ε = 0: `u (P_{n-1} - 1) + 1`, the reduced (odd) part of `BG(A')`
///   tensored with the circle, plus constants;
/// * ε = 1: `u v ((1-q^4) Q_{n-1} - 1) + v`, i.e. the same bookkeeping
///   carried out on free `Q[ψ]`-module generators.
pub fn mayer_vietoris_chain(
    n: usize,
    epsilon: Epsilon,
    order: usize,
) -> Result<Vec<MayerVietorisStep>> {
    let req = SeriesRequest::new(n, epsilon, order)?;
    let base = min_rank(epsilon);
    let one = TruncatedSeries::one(order);
    let u = torus_series(1, order);
    let v = psi_series(order);
    let mut steps: Vec<MayerVietorisStep> = Vec::with_capacity(req.n - base + 1);
    for rank in base..=req.n {
        let coker = mv_coker_series(rank, epsilon, order)?;
        let ker = match (steps.last(), epsilon) {
            (None, e) => weyl_invariants_series(e, order),
            (Some(prev), Epsilon::Zero) => &(&u * &(&prev.total - &one)) + &one,
            (Some(prev), Epsilon::One) => {
                let generators = &prev.total * &TruncatedSeries::from_polynomial(&one_minus_q4(), order);
                &(&(&u * &v) * &(&generators - &one)) + &v
            }
        };
        let total = &coker.shift_up(1).truncate(order) + &ker;
        steps.push(MayerVietorisStep {
            rank,
            coker,
            ker,
            total,
        });
    }
    Ok(steps)
}

/// `H*(BG(A))` by rank induction, anchored at rank 3 (ε = 0) or at
/// `Q_2 = 1/(1-q^4)` (ε = 1).
pub fn bg_series_recursive(n: usize, epsilon: Epsilon, order: usize) -> Result<TruncatedSeries> {
    let mut chain = mayer_vietoris_chain(n, epsilon, order)?;
    Ok(chain.pop().expect("chain contains the base case").total)
}

/// Series names accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeriesName {
    Flag,
    Chow,
    Bg,
    BgRecursive,
    MvCoker,
}

impl SeriesName {
    pub const ALL: [SeriesName; 5] = [
        SeriesName::Flag,
        SeriesName::Chow,
        SeriesName::Bg,
        SeriesName::BgRecursive,
        SeriesName::MvCoker,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeriesName::Flag => "flag",
            SeriesName::Chow => "chow",
            SeriesName::Bg => "bg",
            SeriesName::BgRecursive => "bg-recursive",
            SeriesName::MvCoker => "mv-coker",
        }
    }

    /// `flag` depends on `n` alone; every other series needs ε.
    pub fn needs_epsilon(self) -> bool {
        self != SeriesName::Flag
    }

    pub fn compute(
        self,
        n: usize,
        epsilon: Option<Epsilon>,
        order: usize,
    ) -> Result<TruncatedSeries> {
        if self == SeriesName::Flag {
            return flag_series(n, order);
        }
        let eps = epsilon
            .ok_or_else(|| domain(format!("series {self} requires epsilon")))?;
        match self {
            SeriesName::Flag => unreachable!(),
            SeriesName::Chow => chow_series(n, eps, order),
            SeriesName::Bg => bg_series(n, eps, order),
            SeriesName::BgRecursive => bg_series_recursive(n, eps, order),
            SeriesName::MvCoker => mv_coker_series(n, eps, order),
        }
    }
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SeriesName::ALL
            .into_iter()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| domain(format!("unknown series {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rational;
    use num_traits::{Signed, Zero};

    fn s(coeffs: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_ints(coeffs, order)
    }

    const E0: Epsilon = Epsilon::Zero;
    const E1: Epsilon = Epsilon::One;

    /// `prod (1 - q^d)^{-1}`-free oracle: convolve explicit geometric series.
    fn geometric(ratio: i64, step: usize, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![0i64; order + 1];
        let mut c = 1i64;
        for k in (0..=order).step_by(step) {
            coeffs[k] = c;
            c *= ratio;
        }
        s(&coeffs, order)
    }

    #[test]
    fn flag_examples() {
        assert_eq!(flag_series(3, 6).unwrap(), s(&[1, 0, 3, 0, 6, 0, 12], 6));
        assert_eq!(flag_series(2, 4).unwrap(), s(&[1, 0, 2, 0, 2], 4));
        assert_eq!(
            flag_series(3, 6).unwrap(),
            &geometric(2, 2, 6) * &s(&[1, 0, 1], 6)
        );
        for n in 2..9 {
            assert_eq!(flag_series(n, 3).unwrap().coefficient(0).unwrap(), &rat(1));
        }
        assert!(flag_series(1, 4).is_err());
    }

    #[test]
    fn chow_examples() {
        assert_eq!(chow_series(3, E0, 8).unwrap(), s(&[1, 0, 0, 0, 0, 0, 2, 0, 3], 8));
        assert_eq!(chow_series(3, E1, 8).unwrap(), s(&[1, 0, 0, 0, 1, 0, 2, 0, 4], 8));
        assert_eq!(chow_series(2, E1, 30).unwrap(), TruncatedSeries::one(30));
        let oracle = &(&s(&[1, 0, -2, 0, 1], 8) * &s(&[1, 0, 0, 0, -1], 8)) * &geometric(2, 2, 8);
        assert_eq!(chow_series(3, E0, 8).unwrap(), oracle);
        assert!(chow_series(2, E0, 8).is_err());
    }

    #[test]
    fn chow_only_even_degrees() {
        for n in 2..=8 {
            for eps in [E0, E1] {
                let Ok(c) = chow_series(n, eps, 30) else { continue };
                for k in (1..=30).step_by(2) {
                    assert!(c.coefficient(k).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn bg_examples() {
        assert_eq!(bg_series(3, E0, 9).unwrap(), s(&[1, 0, 0, 0, 0, 0, 0, 2, 0, 3], 9));
        assert_eq!(bg_series(2, E1, 8).unwrap(), s(&[1, 0, 0, 0, 1, 0, 0, 0, 1], 8));
        let expected = &s(&[1, 0, 0, 0, 0, 1, 0, 2, 0, 3], 9) * &geometric(1, 4, 9);
        assert_eq!(expected, s(&[1, 0, 0, 0, 1, 1, 0, 2, 1, 4], 9));
        assert_eq!(bg_series(3, E1, 9).unwrap(), expected);
    }

    #[test]
    fn bg_shape() {
        for n in 3..=8 {
            let p = bg_series(n, E0, 40).unwrap();
            for k in 1..=40 {
                if k % 2 == 0 || k < 5 {
                    assert!(p.coefficient(k).unwrap().is_zero(), "n={n} k={k}");
                }
            }
        }
        let lift = TruncatedSeries::from_polynomial(&one_minus_q4(), 40);
        for n in 2..=8 {
            let reduced = &bg_series(n, E1, 40).unwrap() * &lift;
            for k in 1..=40 {
                if k % 2 == 0 || k < 5 {
                    assert!(reduced.coefficient(k).unwrap().is_zero(), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn recursion_matches_closed_form() {
        for n in 3..=8 {
            assert_eq!(bg_series_recursive(n, E0, 40).unwrap(), bg_series(n, E0, 40).unwrap());
        }
        for n in 2..=8 {
            assert_eq!(bg_series_recursive(n, E1, 40).unwrap(), bg_series(n, E1, 40).unwrap());
        }
    }

    #[test]
    fn rank_three_base_matches_displayed_cokernel() {
        // (2q^2 - 1) / ((1-q^2)^2 (1-q^4)) + 1
        let display = &PolyFraction::new(
            Polynomial::from_ints(&[-1, 0, 2]),
            &one_minus_q2().pow(2) * &one_minus_q4(),
        )
        .unwrap()
            + &PolyFraction::one();
        assert_eq!(mv_coker_series(3, E0, 40).unwrap(), display.expand(40));
        assert_eq!(mv_coker_series(3, E0, 8).unwrap(), s(&[0, 0, 0, 0, 0, 0, 2, 0, 3], 8));
    }

    #[test]
    fn rank_two_cokernel_vanishes() {
        assert!(mv_coker_series(2, E1, 40).unwrap().is_zero());
    }

    #[test]
    fn cokernels_are_graded_dimensions() {
        for n in 2..=8 {
            for eps in [E0, E1] {
                let Ok(c) = mv_coker_series(n, eps, 40) else { continue };
                for x in c.coeffs() {
                    assert!(x.is_integer() && !x.is_negative(), "n={n} eps={eps}: {x}");
                }
            }
        }
    }

    #[test]
    fn suspension_relation_holds_at_each_step() {
        for eps in [E0, E1] {
            for step in mayer_vietoris_chain(8, eps, 30).unwrap() {
                let rebuilt = &step.coker.shift_up(1).truncate(30) + &step.ker;
                assert_eq!(rebuilt, bg_series(step.rank, eps, 30).unwrap());
            }
        }
    }

    #[test]
    fn base_kernels_are_weyl_invariants() {
        let c0 = mayer_vietoris_chain(3, E0, 20).unwrap();
        assert_eq!(c0[0].ker, TruncatedSeries::one(20));
        let c1 = mayer_vietoris_chain(2, E1, 20).unwrap();
        assert_eq!(c1[0].ker, psi_series(20));
    }

    #[test]
    fn four_step_from_three() {
        // u (P_3 - 1) + 1 + q coker_4, with P_3 taken from the closed form.
        let order = 30;
        let one = TruncatedSeries::one(order);
        let p3 = bg_series(3, E0, order).unwrap();
        let ker = &(&torus_series(1, order) * &(&p3 - &one)) + &one;
        let total = &mv_coker_series(4, E0, order).unwrap().shift_up(1).truncate(order) + &ker;
        assert_eq!(total, bg_series(4, E0, order).unwrap());
    }

    #[test]
    fn literal_step_with_q_factor_fails() {
        // The variant q/(1-q^2)^n - q/((1-q^2)^(n-1)(1-q^4)) - q/(1-q^4) + q
        // + q/(1-q^2) (P_{n-1} - 1) + 1 produces even-degree classes.
        let order = 20;
        let one = TruncatedSeries::one(order);
        let u = |k| torus_series(k, order);
        let v = psi_series(order);
        let p3 = bg_series(3, E0, order).unwrap();
        let bracket = &(&(&u(4) - &(&u(3) * &v)) - &v) + &one;
        let literal = &(&bracket.shift_up(1).truncate(order)
            + &(&u(1) * &(&p3 - &one)).shift_up(1).truncate(order))
            + &one;
        let closed = bg_series(4, E0, order).unwrap();
        assert_ne!(literal, closed);
        assert_eq!(literal.first_difference(&closed), Some(3));
    }

    #[test]
    fn parabolic_examples() {
        let x = s(&[1, 2, 3], 10);
        assert_eq!(parabolic_series(&x, 0), x);
        let q2 = bg_series(2, E1, 20).unwrap();
        let expected = PolyFraction::reciprocal_of(&one_minus_q4() * &one_minus_q2())
            .unwrap()
            .expand(20);
        assert_eq!(parabolic_series(&q2, 1), expected);
        assert_eq!(
            parabolic_series(&TruncatedSeries::one(6), 2),
            s(&[1, 0, 2, 0, 3, 0, 4], 6)
        );
    }

    #[test]
    fn request_validation() {
        assert!(SeriesRequest::new(2, E0, 10).is_err());
        assert!(SeriesRequest::new(1, E1, 10).is_err());
        assert!(SeriesRequest::new(3, E0, 10).is_ok());
        assert!(bg_series(2, E0, 5).is_err());
        assert!(mv_coker_series(1, E1, 5).is_err());
    }

    #[test]
    fn names_round_trip() {
        for name in SeriesName::ALL {
            assert_eq!(name.as_str().parse::<SeriesName>().unwrap(), name);
        }
        assert!("nope".parse::<SeriesName>().is_err());
        assert!(SeriesName::Bg.compute(3, None, 4).is_err());
        assert_eq!(
            SeriesName::Flag.compute(3, None, 4).unwrap(),
            flag_series(3, 4).unwrap()
        );
    }

    #[test]
    fn closed_forms_are_rational_identities() {
        // the closed form and its rewrite through 1/C agree as fractions,
        // not just as truncated expansions
        let f = bg_fraction(5, E0).unwrap();
        let expanded = f.expand(25);
        let c = chow_fraction(5, E0).unwrap();
        // (P - 1)/q = 1 - 1/C
        let lhs = (&expanded - &TruncatedSeries::one(25)).shift_down(1).unwrap();
        let rhs = (&PolyFraction::one() - &c.inverse().unwrap()).expand(24);
        assert_eq!(lhs, rhs);
        let _: Rational = rhs.coefficient(0).unwrap().clone();
    }
}
