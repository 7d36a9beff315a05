//! The full identity suite behind `kmhomotopy verify-all`.
//!
//! Each check recomputes one family of identities from scratch at a given
//! truncation order and reports pass/fail with the first counterexample.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cartan::{CartanMatrix, Epsilon};
use crate::coefficients::{
    a_from_series, alpha_from_bg, b_from_series, beta_from_bg, closed_table, Family,
};
use crate::error::Result;
use crate::homotopy::{bg_homotopy_type, free_lie_dimensions};
use crate::poincare::{
    bg_series, bg_series_recursive, chow_series, flag_series, min_rank, mv_coker_series,
};
use crate::series::{PolyFraction, Polynomial, TruncatedSeries};

pub const MAX_RANK: usize = 8;
pub const MAX_COEFFICIENT_INDEX: usize = 19;
/// Inequivalent `(n, ε)` pairs must already differ at or below this degree.
pub const DISTINCTNESS_DEGREE: usize = 9;
pub const LYNDON_WEIGHT: usize = 20;

/// Generator tables (degree, count) for the Lyndon-word comparison.
pub const LYNDON_TABLES: [&[(usize, u32)]; 6] = [
    &[(6, 2), (8, 3)],
    &[(4, 1), (6, 1)],
    &[(4, 2)],
    &[(4, 1), (8, 2), (10, 1)],
    &[(6, 1), (8, 1), (12, 2)],
    &[(4, 3), (6, 1)],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:<28} {}", self.name, self.detail)
    }
}

impl CheckResult {
    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

fn outcome(name: &'static str, r: Result<std::result::Result<String, String>>) -> CheckResult {
    let (passed, detail) = match r {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        name,
        passed,
        detail,
    }
}

/// All `(n, ε)` pairs with `min_rank(ε) <= n <= MAX_RANK`.
pub fn rank_range() -> Vec<(usize, Epsilon)> {
    let mut out = Vec::new();
    for eps in [Epsilon::Zero, Epsilon::One] {
        for n in min_rank(eps)..=MAX_RANK {
            out.push((n, eps));
        }
    }
    out
}

fn mismatch(what: &str, n: usize, eps: Epsilon, a: &TruncatedSeries, b: &TruncatedSeries) -> Option<String> {
    a.first_difference(b)
        .map(|k| format!("{what}: n={n} eps={eps} differs at degree {k}"))
}

/// `C_A = P_F(A) (1-q^2)^n (1-q^4)^(-ε)`, factor by factor.
pub fn check_chow_identity(order: usize) -> CheckResult {
    outcome("chow-identity", (|| {
        for (n, eps) in rank_range() {
            let torus = TruncatedSeries::from_polynomial(
                &Polynomial::from_ints(&[1, 0, -1]).pow(n as u32),
                order,
            );
            let mut product = &flag_series(n, order)? * &torus;
            if eps == Epsilon::One {
                let psi = PolyFraction::reciprocal_of(Polynomial::from_ints(&[1, 0, 0, 0, -1]))?;
                product = &product * &psi.expand(order);
            }
            if let Some(m) = mismatch("chow", n, eps, &chow_series(n, eps, order)?, &product) {
                return Ok(Err(m));
            }
        }
        Ok(Ok(format!("{} (n, eps) pairs to order {order}", rank_range().len())))
    })())
}

pub fn check_bg_recursion(order: usize) -> CheckResult {
    outcome("bg-recursion", (|| {
        for (n, eps) in rank_range() {
            let closed = bg_series(n, eps, order)?;
            let rec = bg_series_recursive(n, eps, order)?;
            if let Some(m) = mismatch("recursion", n, eps, &rec, &closed) {
                return Ok(Err(m));
            }
        }
        Ok(Ok(format!("{} (n, eps) pairs to order {order}", rank_range().len())))
    })())
}

pub fn check_rank_two_base(order: usize) -> CheckResult {
    outcome("rank-two-base", (|| {
        let s = bg_series(2, Epsilon::One, order)?;
        for (k, c) in s.coeffs().iter().enumerate() {
            let expected = if k % 4 == 0 { 1 } else { 0 };
            if *c != crate::series::rat(expected) {
                return Ok(Err(format!("degree {k}: expected {expected}, found {c}")));
            }
        }
        Ok(Ok(format!("1/(1-q^4) to order {order}")))
    })())
}

pub fn check_rank_two_cokernel(order: usize) -> CheckResult {
    outcome("rank-two-cokernel", (|| {
        let c = mv_coker_series(2, Epsilon::One, order)?;
        Ok(match c.coeffs().iter().position(|x| !x.is_zero()) {
            None => Ok(format!("identically 0 to order {order}")),
            Some(k) => Err(format!("nonzero at degree {k}")),
        })
    })())
}

pub fn check_coefficient_identities(order: usize) -> CheckResult {
    let max_i = MAX_COEFFICIENT_INDEX.min(order.saturating_sub(1) / 2);
    outcome("coefficient-identities", (|| {
        for (n, eps) in rank_range() {
            let (family, series, bg) = match eps {
                Epsilon::Zero => (Family::A, a_from_series(n, max_i, order)?, alpha_from_bg(n, max_i, order)?),
                Epsilon::One => (Family::B, b_from_series(n, max_i, order)?, beta_from_bg(n, max_i, order)?),
            };
            let closed = closed_table(family, n, max_i)?;
            for (i, v) in &closed.values {
                if series.values.get(i) != Some(v) || bg.values.get(i) != Some(v) {
                    return Ok(Err(format!("family {family}, n={n}, i={i}: closed form {v} disagrees")));
                }
            }
        }
        let a4 = crate::coefficients::a_closed(3, 2)?;
        if !a4.is_zero() {
            return Ok(Err(format!("a_4 at n=3 is {a4}, expected 0")));
        }
        Ok(Ok(format!("closed = series = bg for 2 <= i <= {max_i}")))
    })())
}

/// Lyndon words over an alphabet with the given letter weights, counted by
/// total weight up to `max_weight`, generated in Duval's order.
pub fn lyndon_counts(weights: &[usize], max_weight: usize) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    let k = weights.len();
    let Some(&min_w) = weights.iter().min() else {
        return out;
    };
    let max_len = max_weight / min_w.max(1);
    if max_len == 0 {
        return out;
    }
    let mut word = vec![0usize];
    loop {
        let weight: usize = word.iter().map(|&c| weights[c]).sum();
        if weight <= max_weight {
            *out.entry(weight).or_insert(0) += 1;
        }
        let m = word.len();
        while word.len() < max_len {
            word.push(word[word.len() - m]);
        }
        while word.last() == Some(&(k - 1)) {
            word.pop();
        }
        match word.last_mut() {
            Some(c) => *c += 1,
            None => break,
        }
    }
    out
}

pub fn lyndon_table(table: &[(usize, u32)]) -> (BTreeMap<usize, BigInt>, Vec<usize>) {
    let gens = table.iter().map(|&(d, c)| (d, BigInt::from(c))).collect();
    let weights = table
        .iter()
        .flat_map(|&(d, c)| std::iter::repeat_n(d, c as usize))
        .collect();
    (gens, weights)
}

pub fn check_free_lie(order: usize) -> CheckResult {
    outcome("free-lie-dimensions", (|| {
        for (n, eps) in rank_range() {
            let family = match eps {
                Epsilon::Zero => Family::A,
                Epsilon::One => Family::B,
            };
            let gens = closed_table(family, n, order / 2)?.by_degree();
            let dims = free_lie_dimensions(&gens, order)?;
            let chow = chow_series(n, eps, order)?;
            if let Some(m) = mismatch("PBW", n, eps, &dims.pbw_series(order), &chow) {
                return Ok(Err(m));
            }
        }
        for table in LYNDON_TABLES {
            let (gens, weights) = lyndon_table(table);
            let dims = free_lie_dimensions(&gens, LYNDON_WEIGHT)?;
            let brute: BTreeMap<usize, BigInt> = lyndon_counts(&weights, LYNDON_WEIGHT)
                .into_iter()
                .map(|(w, c)| (w, BigInt::from(c)))
                .collect();
            if dims.dims != brute {
                return Ok(Err(format!("generators {table:?}: Witt {:?} vs Lyndon {brute:?}", dims.dims)));
            }
        }
        Ok(Ok(format!(
            "PBW reconstruction to order {order}; {} Lyndon tables to weight {LYNDON_WEIGHT}",
            LYNDON_TABLES.len()
        )))
    })())
}

/// Every generic matrix of rank 3 or 4 with off-diagonal entries in
/// `{-1, -2, -4}`.
pub fn generic_grid() -> Vec<CartanMatrix> {
    let pairs: Vec<(i64, i64)> = [-1i64, -2, -4]
        .iter()
        .flat_map(|&x| [-1i64, -2, -4].map(move |y| (x, y)))
        .filter(|(x, y)| x * y >= 4)
        .collect();
    let mut out = Vec::new();
    for n in 3..=4usize {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let total = pairs.len().pow(slots.len() as u32);
        for mut code in 0..total {
            let mut e = vec![vec![2i64; n]; n];
            for &(i, j) in &slots {
                let (x, y) = pairs[code % pairs.len()];
                code /= pairs.len();
                e[i][j] = x;
                e[j][i] = y;
            }
            out.push(CartanMatrix::from_rows(&e).expect("grid entries satisfy the axioms"));
        }
    }
    out
}

pub fn check_triple_witness() -> CheckResult {
    outcome("nonsymmetrizable-triple", (|| {
        let grid = generic_grid();
        let mut failures = 0usize;
        for a in &grid {
            let triple = a.find_nonsymmetrizable_triple()?;
            match a.symmetrize() {
                Ok(s) => {
                    if triple.is_some() {
                        return Ok(Err(format!("{a}: symmetrizable but triple {triple:?} found")));
                    }
                    let n = a.rank();
                    for i in 0..n {
                        for j in 0..n {
                            let aij = crate::series::Rational::from_integer(a.entry(i, j).clone());
                            if s.b[i][j] != s.b[j][i] || &s.d[i] * &s.b[i][j] != aij {
                                return Ok(Err(format!("{a}: A != DB at ({}, {})", i + 1, j + 1)));
                            }
                        }
                    }
                }
                Err(_) => {
                    failures += 1;
                    if triple.is_none() {
                        return Ok(Err(format!("{a}: not symmetrizable but no triple found")));
                    }
                }
            }
        }
        Ok(Ok(format!(
            "{} generic matrices, {failures} non-symmetrizable",
            grid.len()
        )))
    })())
}

pub fn check_classifier(order: usize) -> CheckResult {
    outcome("equivalence-classifier", (|| {
        let pairs = rank_range();
        let series: Vec<TruncatedSeries> = pairs
            .iter()
            .map(|&(n, e)| bg_series(n, e, order))
            .collect::<Result<_>>()?;
        let mut worst = 0usize;
        for (x, px) in pairs.iter().enumerate() {
            for (y, py) in pairs.iter().enumerate() {
                let diff = series[x].first_difference(&series[y]);
                match (px == py, diff) {
                    (true, None) => {}
                    (true, Some(k)) => return Ok(Err(format!("{px:?} differs from itself at {k}"))),
                    (false, Some(k)) if k <= DISTINCTNESS_DEGREE => worst = worst.max(k),
                    (false, d) => {
                        return Ok(Err(format!("{px:?} vs {py:?}: first difference {d:?}")))
                    }
                }
            }
        }
        Ok(Ok(format!(
            "{} classes pairwise distinct by degree {worst}",
            pairs.len()
        )))
    })())
}

pub fn check_homotopy_reconstruction(order: usize) -> CheckResult {
    outcome("homotopy-reconstruction", (|| {
        for (n, eps) in rank_range() {
            let t = bg_homotopy_type(n, eps, order)?;
            if let Some(m) = mismatch("wedge", n, eps, &t.implied_series(order), &bg_series(n, eps, order)?) {
                return Ok(Err(m));
            }
        }
        Ok(Ok(format!("sphere wedges rebuild bg to order {order}")))
    })())
}

/// Runs every check, sorted by name.
pub fn run_all(order: usize) -> Vec<CheckResult> {
    let mut results = vec![
        check_chow_identity(order),
        check_bg_recursion(order),
        check_rank_two_base(order),
        check_rank_two_cokernel(order),
        check_coefficient_identities(order),
        check_free_lie(order),
        check_triple_witness(),
        check_classifier(order),
        check_homotopy_reconstruction(order),
    ];
    results.sort_by_key(|r| r.name);
    results
}
