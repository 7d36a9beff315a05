//! Rational homotopy type of `BG(A)`, graded dimensions of `π_*(G(A)) ⊗ Q`,
//! the Hopf algebra `H_*(G(A))`, and the rational equivalence classifier.
//!
//! For ε = 0, `BG(A)` is rationally a wedge of odd spheres `S^{2i+1}`, `α_i`
//! of each. For ε = 1 it is `BS^3` times such a wedge with `β_i` spheres.
//! Looping, `π_even(G(A))` is the free graded Lie algebra on `α_i` (or `β_i`)
//! generators in degree `2i`, and the ε = 1 case adds one class in degree 3.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cartan::{CartanMatrix, Epsilon};
use crate::coefficients::{alpha_from_bg, beta_from_bg, closed_table, Family};
use crate::error::{domain, Error, Result};
use crate::json::big_to_json;
use crate::poincare::SeriesRequest;
use crate::series::{Polynomial, PolyFraction, Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalHomotopyType {
    pub has_bs3_factor: bool,
    /// Odd degree `2i+1 >= 5` to the number of wedge summands `S^{2i+1}`;
    /// zero counts are omitted.
    pub sphere_counts: BTreeMap<usize, BigInt>,
    /// Sphere counts are complete up to this degree.
    pub max_degree: usize,
}

impl RationalHomotopyType {
    /// `1 + sum count_d q^d`, times `1/(1-q^4)` when `BS^3` is present. The
    /// reduced cohomologies of wedge summands add and all products of odd
    /// classes vanish, so nothing else contributes.
    pub fn implied_series(&self, order: usize) -> TruncatedSeries {
        let order = order.min(self.max_degree);
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = Rational::one();
        for (&d, c) in self.sphere_counts.range(..=order) {
            coeffs[d] = Rational::from_integer(c.clone());
        }
        let wedge = TruncatedSeries::from_coeffs(coeffs);
        if self.has_bs3_factor {
            let psi = PolyFraction::reciprocal_of(Polynomial::from_ints(&[1, 0, 0, 0, -1]))
                .expect("constant term 1")
                .expand(order);
            &wedge * &psi
        } else {
            wedge
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bs3_factor": self.has_bs3_factor,
            "max_degree": self.max_degree,
            "spheres": self.sphere_counts.iter()
                .map(|(d, c)| json!({"degree": d, "count": big_to_json(c)}))
                .collect::<Vec<_>>(),
            "text": self.to_string(),
        })
    }
}

impl fmt::Display for RationalHomotopyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wedge: Vec<String> = self
            .sphere_counts
            .iter()
            .map(|(d, c)| {
                if c.is_one() {
                    format!("S^{d}")
                } else {
                    format!("{c}*S^{d}")
                }
            })
            .collect();
        let mut wedge = wedge.join(" v ");
        if !wedge.is_empty() {
            wedge.push_str(" v ...");
        }
        match (self.has_bs3_factor, wedge.is_empty()) {
            (true, true) => f.write_str("BS^3"),
            (true, false) => write!(f, "BS^3 x {wedge}"),
            (false, true) => f.write_str("pt"),
            (false, false) => f.write_str(&wedge),
        }
    }
}

/// `dim π_m(G(A)) ⊗ Q` for `2 <= m <= max_degree`; zero entries omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyDimensionTable {
    pub max_degree: usize,
    pub dims: BTreeMap<usize, BigInt>,
}

impl HomotopyDimensionTable {
    pub fn get(&self, degree: usize) -> Result<BigInt> {
        if degree > self.max_degree {
            return Err(domain(format!(
                "degree {degree} is beyond the computed range {}",
                self.max_degree
            )));
        }
        Ok(self.dims.get(&degree).cloned().unwrap_or_default())
    }

    /// Poincaré-Birkhoff-Witt series of the enveloping algebra:
    /// `prod_{d even} (1-q^d)^(-l_d) * prod_{d odd} (1+q^d)^(l_d)`.
    pub fn pbw_series(&self, order: usize) -> TruncatedSeries {
        let order = order.min(self.max_degree);
        let mut acc = TruncatedSeries::one(order);
        for (&d, l) in self.dims.range(..=order) {
            let mut factor = vec![Rational::zero(); order + 1];
            // coefficient of q^{dk}: C(l+k-1, k) for even d, C(l, k) for odd d
            let mut c = BigInt::one();
            for k in 0..=order / d {
                factor[d * k] = Rational::from_integer(c.clone());
                let k1 = BigInt::from(k + 1);
                c = if d % 2 == 0 {
                    c * (l + BigInt::from(k)) / k1
                } else {
                    c * (l - BigInt::from(k)) / k1
                };
            }
            acc = &acc * &TruncatedSeries::from_coeffs(factor);
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_degree": self.max_degree,
            "dims": self.dims.iter()
                .map(|(d, l)| json!({"degree": d, "dim": big_to_json(l)}))
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for HomotopyDimensionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  dim pi_m(G) (x) Q", "m")?;
        for (d, l) in &self.dims {
            writeln!(f, "{d:>6}  {l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfKind {
    /// `T(V)`
    Tensor,
    /// `H_*(S^3) ⊗ T(V)`
    ProductWithSphere,
}

impl HopfKind {
    pub fn as_str(self) -> &'static str {
        match self {
            HopfKind::Tensor => "tensor",
            HopfKind::ProductWithSphere => "product_with_sphere",
        }
    }
}

/// `H_*(G(A); Q)`, primitively generated by `π_*(G(A)) ⊗ Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfAlgebraDescription {
    pub kind: HopfKind,
    /// Even degree `2i` to the number of tensor generators; zeros omitted.
    pub generator_counts: BTreeMap<usize, BigInt>,
    pub odd_factor_degree: Option<usize>,
    pub max_degree: usize,
}

impl HopfAlgebraDescription {
    /// `1/(1 - sum g_d q^d)`, times `1+q^3` for the sphere factor.
    pub fn implied_series(&self, order: usize) -> TruncatedSeries {
        let order = order.min(self.max_degree);
        let tensor = tensor_series(&self.generator_counts, order);
        match self.odd_factor_degree {
            Some(d) => {
                let mut sphere = vec![Rational::zero(); order + 1];
                sphere[0] = Rational::one();
                if d <= order {
                    sphere[d] = Rational::one();
                }
                &tensor * &TruncatedSeries::from_coeffs(sphere)
            }
            None => tensor,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "max_degree": self.max_degree,
            "odd_factor_degree": self.odd_factor_degree,
            "generators": self.generator_counts.iter()
                .map(|(d, g)| json!({"degree": d, "count": big_to_json(g)}))
                .collect::<Vec<_>>(),
            "text": self.to_string(),
        })
    }
}

impl fmt::Display for HopfAlgebraDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generator_counts
            .iter()
            .map(|(d, g)| format!("{g}*x_{d}"))
            .collect();
        let tensor = if gens.is_empty() {
            None
        } else {
            Some(format!("T({} + ...)", gens.join(" + ")))
        };
        match (self.odd_factor_degree, tensor) {
            (Some(d), Some(t)) => write!(f, "H_*(S^{d}) x {t}"),
            (Some(d), None) => write!(f, "H_*(S^{d})"),
            (None, Some(t)) => f.write_str(&t),
            (None, None) => f.write_str("Q"),
        }
    }
}

/// `1 / (1 - sum g_d q^d)` to `order`.
pub fn tensor_series(generators: &BTreeMap<usize, BigInt>, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = Rational::one();
    for (&d, g) in generators.range(1..=order) {
        coeffs[d] = -Rational::from_integer(g.clone());
    }
    TruncatedSeries::from_coeffs(coeffs)
        .invert()
        .expect("constant term 1")
}

pub fn mobius(n: usize) -> i64 {
    assert!(n >= 1);
    let (mut m, mut sign, mut p) = (n, 1i64, 2usize);
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Graded dimensions `l_m` of the free Lie algebra on even generators, from
/// `prod_d (1-q^d)^(-l_d) = 1/(1 - sum g_d q^d)`.
///
/// With `c = log(tensor series)`, `m c_m = sum_{d|m} d l_d`, so Möbius
/// inversion gives `l_m = (1/m) sum_{d|m} μ(m/d) d c_d`.
pub fn free_lie_dimensions(
    generators: &BTreeMap<usize, BigInt>,
    max_degree: usize,
) -> Result<HomotopyDimensionTable> {
    for (&d, g) in generators {
        if g.is_negative() {
            return Err(domain(format!("negative generator count {g} in degree {d}")));
        }
        if !g.is_zero() && (d % 2 != 0 || d < 4) {
            return Err(domain(format!(
                "generator degrees must be even and >= 4, got degree {d}"
            )));
        }
    }
    let log = tensor_series(generators, max_degree).log()?;
    let mut dims = BTreeMap::new();
    for m in 1..=max_degree {
        let mut acc = Rational::zero();
        for d in (1..=m).filter(|d| m % d == 0) {
            let mu = mobius(m / d);
            if mu != 0 {
                acc += Rational::from_integer(BigInt::from(mu * d as i64)) * &log.coeffs()[d];
            }
        }
        let l = acc / Rational::from_integer(BigInt::from(m));
        if !l.is_integer() || l.is_negative() {
            return Err(Error::IdentityViolated {
                degree: m,
                detail: format!("free Lie dimension {l} is not a nonnegative integer"),
            });
        }
        let l = l.to_integer();
        if !l.is_zero() {
            dims.insert(m, l);
        }
    }
    Ok(HomotopyDimensionTable { max_degree, dims })
}

fn family_for(epsilon: Epsilon) -> Family {
    match epsilon {
        Epsilon::Zero => Family::A,
        Epsilon::One => Family::B,
    }
}

pub fn bg_homotopy_type(
    n: usize,
    epsilon: Epsilon,
    max_degree: usize,
) -> Result<RationalHomotopyType> {
    SeriesRequest::new(n, epsilon, max_degree)?;
    let max_i = max_degree.saturating_sub(1) / 2;
    let table = match epsilon {
        Epsilon::Zero => alpha_from_bg(n, max_i, max_degree)?,
        Epsilon::One => beta_from_bg(n, max_i, max_degree)?,
    };
    let sphere_counts = table
        .values
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (2 * i + 1, c))
        .collect();
    Ok(RationalHomotopyType {
        has_bs3_factor: epsilon == Epsilon::One,
        sphere_counts,
        max_degree,
    })
}

fn generator_counts(n: usize, epsilon: Epsilon, max_degree: usize) -> Result<BTreeMap<usize, BigInt>> {
    Ok(closed_table(family_for(epsilon), n, max_degree / 2)?.by_degree())
}

pub fn homotopy_dimensions(
    n: usize,
    epsilon: Epsilon,
    max_degree: usize,
) -> Result<HomotopyDimensionTable> {
    SeriesRequest::new(n, epsilon, max_degree)?;
    let mut table = free_lie_dimensions(&generator_counts(n, epsilon, max_degree)?, max_degree)?;
    if epsilon == Epsilon::One && max_degree >= 3 {
        table.dims.insert(3, BigInt::one());
    }
    Ok(table)
}

pub fn hopf_description(
    n: usize,
    epsilon: Epsilon,
    max_degree: usize,
) -> Result<HopfAlgebraDescription> {
    SeriesRequest::new(n, epsilon, max_degree)?;
    let (kind, odd) = match epsilon {
        Epsilon::Zero => (HopfKind::Tensor, None),
        Epsilon::One => (HopfKind::ProductWithSphere, Some(3)),
    };
    Ok(HopfAlgebraDescription {
        kind,
        generator_counts: generator_counts(n, epsilon, max_degree)?,
        odd_factor_degree: odd,
        max_degree,
    })
}

/// `G(A1) ≃_Q G(A2)` as H-spaces iff the ranks and ε agree.
pub fn rationally_equivalent(a1: &CartanMatrix, a2: &CartanMatrix) -> Result<bool> {
    let eps = |a: &CartanMatrix, label: &str| -> Result<Epsilon> {
        if !a.is_generic() {
            return Err(domain(format!("{label} matrix {a} is not generic")));
        }
        a.epsilon()
            .ok_or_else(|| domain(format!("{label} matrix has rank {} < 2", a.rank())))
    };
    let e1 = eps(a1, "first")?;
    let e2 = eps(a2, "second")?;
    Ok(a1.rank() == a2.rank() && e1 == e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poincare::{bg_series, chow_series};

    const E0: Epsilon = Epsilon::Zero;
    const E1: Epsilon = Epsilon::One;

    fn gens(pairs: &[(usize, i64)]) -> BTreeMap<usize, BigInt> {
        pairs.iter().map(|&(d, g)| (d, BigInt::from(g))).collect()
    }

    fn dims(t: &HomotopyDimensionTable) -> Vec<(usize, i64)> {
        t.dims.iter().map(|(&d, l)| (d, i64::try_from(l).unwrap())).collect()
    }

    /// Lyndon words over a weighted alphabet, counted by total weight, via
    /// Duval's generation order.
    fn lyndon_counts(weights: &[usize], max_weight: usize) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        let k = weights.len();
        let Some(&min_w) = weights.iter().min() else { return out };
        let max_len = max_weight / min_w;
        if max_len == 0 {
            return out;
        }
        let mut w = vec![0usize];
        loop {
            let weight: usize = w.iter().map(|&c| weights[c]).sum();
            if weight <= max_weight {
                *out.entry(weight).or_insert(0) += 1;
            }
            let m = w.len();
            while w.len() < max_len {
                w.push(w[w.len() - m]);
            }
            while w.last() == Some(&(k - 1)) {
                w.pop();
            }
            match w.last_mut() {
                Some(c) => *c += 1,
                None => break,
            }
        }
        out
    }

    fn alphabet(g: &BTreeMap<usize, BigInt>) -> Vec<usize> {
        g.iter()
            .flat_map(|(&d, c)| std::iter::repeat_n(d, usize::try_from(c).unwrap()))
            .collect()
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn single_generator_is_abelian() {
        let t = free_lie_dimensions(&gens(&[(4, 1)]), 12).unwrap();
        assert_eq!(dims(&t), vec![(4, 1)]);
        assert!(free_lie_dimensions(&BTreeMap::new(), 20).unwrap().dims.is_empty());
    }

    #[test]
    fn rank_three_table_against_lyndon_words() {
        let g = gens(&[(4, 0), (6, 2), (8, 3)]);
        let t = free_lie_dimensions(&g, 20).unwrap();
        let brute = lyndon_counts(&alphabet(&g), 20);
        let expected: Vec<(usize, i64)> = brute.into_iter().collect();
        assert_eq!(dims(&t), expected);
        // two letters of weight 6 give one bracket in weight 12; six mixed
        // brackets in 14; three from the weight-8 letters in 16.
        assert_eq!(t.get(12).unwrap(), BigInt::from(1));
        assert_eq!(t.get(14).unwrap(), BigInt::from(6));
        assert_eq!(t.get(10).unwrap(), BigInt::zero());
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(free_lie_dimensions(&gens(&[(5, 1)]), 10).is_err());
        assert!(free_lie_dimensions(&gens(&[(2, 1)]), 10).is_err());
        assert!(free_lie_dimensions(&gens(&[(4, -1)]), 10).is_err());
        assert!(free_lie_dimensions(&gens(&[(5, 0)]), 10).is_ok());
    }

    #[test]
    fn pbw_reconstructs_tensor_series() {
        let g = gens(&[(4, 2), (6, 1), (10, 3)]);
        let t = free_lie_dimensions(&g, 30).unwrap();
        assert_eq!(t.pbw_series(30), tensor_series(&g, 30));
    }

    #[test]
    fn homotopy_dimension_examples() {
        let t = homotopy_dimensions(3, E0, 12).unwrap();
        assert_eq!(t.get(4).unwrap(), BigInt::zero());
        assert_eq!(t.get(6).unwrap(), BigInt::from(2));
        assert_eq!(t.get(8).unwrap(), BigInt::from(3));
        assert!(t.get(13).is_err());
        assert!(t.dims.keys().all(|d| d % 2 == 0));

        let t = homotopy_dimensions(2, E1, 40).unwrap();
        assert_eq!(dims(&t), vec![(3, 1)]);
    }

    #[test]
    fn homotopy_dimensions_rebuild_loop_space_homology() {
        for n in 2..=6 {
            for eps in [E0, E1] {
                let Ok(t) = homotopy_dimensions(n, eps, 30) else { continue };
                let mut expected = chow_series(n, eps, 30).unwrap();
                if eps == E1 {
                    expected = &expected * &TruncatedSeries::from_ints(&[1, 0, 0, 1], 30);
                }
                assert_eq!(t.pbw_series(30), expected, "n={n} eps={eps}");
            }
        }
    }

    #[test]
    fn homotopy_type_examples() {
        let t = bg_homotopy_type(3, E0, 9).unwrap();
        assert!(!t.has_bs3_factor);
        assert_eq!(t.sphere_counts, gens(&[(7, 2), (9, 3)]));
        assert_eq!(t.to_string(), "2*S^7 v 3*S^9 v ...");

        let t = bg_homotopy_type(2, E1, 40).unwrap();
        assert!(t.has_bs3_factor && t.sphere_counts.is_empty());
        assert_eq!(t.to_string(), "BS^3");

        let t = bg_homotopy_type(3, E1, 9).unwrap();
        assert_eq!(t.sphere_counts, gens(&[(5, 1), (7, 2), (9, 3)]));
        assert_eq!(t.to_string(), "BS^3 x S^5 v 2*S^7 v 3*S^9 v ...");
    }

    #[test]
    fn homotopy_type_reconstructs_bg() {
        for n in 2..=8 {
            for eps in [E0, E1] {
                let Ok(t) = bg_homotopy_type(n, eps, 40) else { continue };
                assert_eq!(t.implied_series(40), bg_series(n, eps, 40).unwrap());
            }
        }
    }

    #[test]
    fn hopf_examples() {
        let h = hopf_description(4, E0, 12).unwrap();
        assert_eq!(h.kind, HopfKind::Tensor);
        assert_eq!(h.odd_factor_degree, None);
        let a: BTreeMap<usize, BigInt> = (2..=6)
            .map(|i| (2 * i, crate::coefficients::a_closed(4, i).unwrap()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        assert_eq!(h.generator_counts, a);

        let h = hopf_description(2, E1, 40).unwrap();
        assert_eq!(h.kind, HopfKind::ProductWithSphere);
        assert_eq!(h.odd_factor_degree, Some(3));
        assert!(h.generator_counts.is_empty());
        assert_eq!(h.to_string(), "H_*(S^3)");

        let h = hopf_description(3, E1, 30).unwrap();
        let chow = chow_series(3, E1, 30).unwrap();
        assert_eq!(h.implied_series(30), &chow * &TruncatedSeries::from_ints(&[1, 0, 0, 1], 30));
    }

    #[test]
    fn equivalence_examples() {
        let sym3a = CartanMatrix::from_rows(&[[2, -2, -2], [-2, 2, -2], [-2, -2, 2]]).unwrap();
        let sym3b = CartanMatrix::from_rows(&[[2, -3, -5], [-3, 2, -7], [-5, -7, 2]]).unwrap();
        let nonsym3 = CartanMatrix::from_rows(&[[2, -1, -4], [-4, 2, -1], [-1, -4, 2]]).unwrap();
        let sym4 = CartanMatrix::from_rows(&[
            [2, -2, -2, -2],
            [-2, 2, -2, -2],
            [-2, -2, 2, -2],
            [-2, -2, -2, 2],
        ])
        .unwrap();
        assert!(rationally_equivalent(&sym3a, &sym3b).unwrap());
        assert!(!rationally_equivalent(&sym3a, &nonsym3).unwrap());
        assert!(!rationally_equivalent(&sym3a, &sym4).unwrap());
        let finite = CartanMatrix::from_rows(&[[2, -1], [-1, 2]]).unwrap();
        assert!(rationally_equivalent(&finite, &sym3a).is_err());
        let point = CartanMatrix::from_rows(&[[2]]).unwrap();
        assert!(rationally_equivalent(&sym3a, &point).is_err());
    }

    #[test]
    fn json_shapes() {
        let t = bg_homotopy_type(3, E1, 9).unwrap().to_json();
        assert_eq!(t["spheres"][0], json!({"degree": 5, "count": 1}));
        let h = hopf_description(3, E0, 10).unwrap().to_json();
        assert_eq!(h["kind"], json!("tensor"));
        assert_eq!(h["odd_factor_degree"], Value::Null);
    }

    #[test]
    fn lyndon_oracle_sanity() {
        // binary alphabet, unit weights: 2, 1, 2, 3, 6, 9 words of length 1..6
        let c = lyndon_counts(&[1, 1], 6);
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![2, 1, 2, 3, 6, 9]);
    }
}
