//! Taylor coefficients of the Witten solution W, truncated genus series, the
//! string-equation residual and correlators.
//!
//! Gradings use the integer degree deg x_i = n + 1 − i; a genus-g monomial
//! x_{i₁}⋯x_{i_k} has Σ(n + 1 − i_j) = (n + 1)(2 − 2g).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gd::GdContext;
use crate::poly::{Monomial, Poly};
use crate::rational::Rational;

/// The coordinate x_i.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct XVar(pub u32);

impl fmt::Debug for XVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

pub type XPolynomial = Poly<XVar>;
pub type XMonomial = Monomial<XVar>;

/// Integer quasidegree n + 1 − i of x_i (may be ≤ 0 for i > n).
pub fn quasidegree(n: u32, m: &XMonomial) -> i64 {
    m.factors().iter().map(|x| n as i64 + 1 - x.0 as i64).sum()
}

/// Quasidegree carried by every genus-g monomial.
pub fn genus_quasidegree(n: u32, g: u32) -> i64 {
    (n as i64 + 1) * (2 - 2 * g as i64)
}

/// A truncated piece of W: every monomial with between `min_factors` and
/// `max_factors` factors. `genus` is `None` for a sum over several genera.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSeries {
    pub n: u32,
    pub genus: Option<u32>,
    pub min_factors: usize,
    pub max_factors: usize,
    pub terms: XPolynomial,
}

impl GradedSeries {
    /// Quasihomogeneity guard.
    pub fn check_genus(&self) -> Result<()> {
        if let Some(g) = self.genus {
            let want = genus_quasidegree(self.n, g);
            for m in self.terms.terms().keys() {
                if quasidegree(self.n, m) != want {
                    return Err(Error::Invariant(format!(
                        "monomial {m:?} has quasidegree {} in genus {g} (expected {want})",
                        quasidegree(self.n, m)
                    )));
                }
            }
        }
        let range = self.min_factors..=self.max_factors;
        if let Some(m) = self.terms.terms().keys().find(|m| !range.contains(&m.degree())) {
            return Err(Error::Invariant(format!("monomial {m:?} outside {range:?} factors")));
        }
        Ok(())
    }

    /// Sets x_i = 0 for i ≥ n.
    pub fn restrict_small_phase(&self) -> GradedSeries {
        GradedSeries { terms: self.terms.filter(|m| m.factors().iter().all(|x| x.0 < self.n)), ..self.clone() }
    }

    /// Adds the linear stratum, extending the covered range down to one factor.
    pub fn with_linear(&self, linear: &GradedSeries) -> Result<GradedSeries> {
        if linear.n != self.n || linear.genus != self.genus || linear.max_factors + 1 < self.min_factors {
            return Err(Error::Domain("linear stratum does not match the series".into()));
        }
        let mut terms = self.terms.clone();
        terms.add_assign(&linear.terms);
        Ok(GradedSeries { min_factors: linear.min_factors.min(self.min_factors), terms, ..self.clone() })
    }
}

/// (m, g) for an admissible index multiset, `None` otherwise.
pub fn admissibility(n: u32, indices: &[u32]) -> Option<(u32, u32)> {
    let k = indices.len() as u32;
    let total: u32 = indices.iter().sum();
    if k < 2 || !total.is_multiple_of(n + 1) {
        return None;
    }
    let m = total / (n + 1);
    if m + 2 < k || !(m + 2 - k).is_multiple_of(2) {
        return None;
    }
    Some((m, (m + 2 - k) / 2))
}

/// The symmetric derivative f_{i₁…i_k}(0) = (n−1)^m · N, N the coefficient of
/// (u_{n−1,2})^m in the equation for ∂_{i₁}⋯∂_{i_k}v.
pub fn witten_coefficient(ctx: &mut GdContext, indices: &[u32]) -> Result<Rational> {
    if indices.len() < 2 {
        return Err(Error::Domain("Witten coefficients need k >= 2 indices".into()));
    }
    let n = ctx.n();
    let Some((m, _)) = admissibility(n, indices) else {
        return Ok(Rational::zero());
    };
    if indices.iter().any(|i| i % n == 0) {
        return Ok(Rational::zero());
    }
    let c = ctx.witten_n_coeff(indices)?;
    Ok(c * Rational::from_int(n as i64 - 1).pow(m as i32))
}

/// Non-increasing k-tuples of positive integers summing to `total`, none
/// divisible by `n`.
pub fn index_multisets(n: u32, total: u32, k: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, remaining: u32, slots: u32, cap: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if remaining == 0 {
                let mut v = acc.clone();
                v.reverse();
                out.push(v);
            }
            return;
        }
        let hi = cap.min(remaining + 1 - slots);
        let lo = remaining.div_ceil(slots);
        for i in (lo.max(1)..=hi).rev() {
            if i % n == 0 {
                continue;
            }
            acc.push(i);
            rec(n, remaining - i, slots - 1, i, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 && total >= k {
        rec(n, total, k, total, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

fn orbit_weight(indices: &[u32]) -> Rational {
    // (#orderings)/k! = 1/∏ mult!
    let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
    for &i in indices {
        *counts.entry(i).or_default() += 1;
    }
    let denom: i64 = counts.values().map(|&c| (1..=c).product::<i64>()).product();
    Rational::new(1, denom)
}

/// W^g truncated to 2 ≤ k ≤ `k_max` factors, one series per genus 0..=g_max.
pub fn witten_truncation(ctx: &mut GdContext, g_max: u32, k_max: u32) -> Result<Vec<GradedSeries>> {
    if k_max < 2 {
        return Err(Error::Domain("truncation needs k_max >= 2".into()));
    }
    let n = ctx.n();
    let mut out = Vec::new();
    for g in 0..=g_max {
        let mut terms = XPolynomial::zero();
        for k in 2..=k_max {
            let Some(m) = (2 * g + k).checked_sub(2) else { continue };
            for idx in index_multisets(n, (n + 1) * m, k) {
                let f = witten_coefficient(ctx, &idx)?;
                if f.is_zero() {
                    continue;
                }
                let mono = XMonomial::from_factors(idx.iter().map(|&i| XVar(i)));
                terms.add_term(mono, f * orbit_weight(&idx));
            }
        }
        let series = GradedSeries { n, genus: Some(g), min_factors: 2, max_factors: k_max as usize, terms };
        series.check_genus()?;
        out.push(series);
    }
    Ok(out)
}

/// Sign in front of Σ(i+n)x_{i+n}∂_iW in the string equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StringSign {
    /// ∂₁W = ½Σij x_i x_j − Σ(i+n)x_{i+n}∂_iW, the form W actually satisfies.
    Minus,
    /// ∂₁W = ½Σij x_i x_j + Σ(i+n)x_{i+n}∂_iW.
    Plus,
}

/// ∂₁W − ½Σ_{i+j=n} ij x_i x_j + Σ(i+n)x_{i+n}∂_iW on the factor strata
/// `min_factors..=degree_bound`; stratum d involves W with d and d + 1
/// factors, so lower strata are not determined by the series. Zero certifies
/// the truncation.
pub fn string_residual(w: &GradedSeries, degree_bound: usize) -> Result<GradedSeries> {
    string_residual_with(w, degree_bound, StringSign::Minus)
}

pub fn string_residual_with(w: &GradedSeries, degree_bound: usize, sign: StringSign) -> Result<GradedSeries> {
    // ∂₁ lowers the factor count by one, so bound d needs all of W up to d + 1.
    if degree_bound + 1 > w.max_factors {
        return Err(Error::Bound(format!(
            "residual up to {degree_bound} factors needs W through {} factors, series has {}",
            degree_bound + 1,
            w.max_factors
        )));
    }
    let n = w.n;
    let x_deriv = |p: &XPolynomial, i: u32| {
        p.derive(|v| if v.0 == i { XPolynomial::constant(Rational::one()) } else { XPolynomial::zero() })
    };
    let mut r = x_deriv(&w.terms, 1);
    if w.genus.is_none_or(|g| g == 0) {
        for i in 1..n {
            let j = n - i;
            let c = Rational::new((i * j) as i64, 2);
            let m = XMonomial::from_factors([XVar(i), XVar(j)]);
            r.add_term(m, -c);
        }
    }
    let flow_sign = match sign {
        StringSign::Minus => Rational::one(),
        StringSign::Plus => -Rational::one(),
    };
    for XVar(i) in w.terms.variables() {
        let d = x_deriv(&w.terms, i);
        let lift = XPolynomial::term(XMonomial::var(XVar(i + n)), Rational::from_int((i + n) as i64) * &flow_sign);
        r.add_mul(&lift, &d);
    }
    Ok(GradedSeries {
        n,
        genus: w.genus,
        min_factors: w.min_factors,
        max_factors: degree_bound,
        terms: r.filter(|m| (w.min_factors..=degree_bound).contains(&m.degree())),
    })
}

/// How t_{k,m} maps to x_{mn+k}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// t_{k,m} ↦ −(mn+k)x_{mn+k}, taken literally.
    Literal,
    /// The literal map with an overall sign flip of F, fixed by ⟨τ₀³⟩₀ = +1
    /// for n = 2.
    #[default]
    Frozen,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatorKey {
    pub n: u32,
    pub genus: u32,
    /// (k, m) with 1 ≤ k ≤ n−1.
    pub insertions: Vec<(u32, u32)>,
}

impl CorrelatorKey {
    pub fn linear_indices(&self) -> Result<Vec<u32>> {
        if self.n < 2 {
            return Err(Error::Domain(format!("n must be at least 2, got {}", self.n)));
        }
        self.insertions
            .iter()
            .map(|&(k, m)| {
                if k == 0 || k >= self.n {
                    Err(Error::Domain(format!("insertion ({k},{m}) needs 1 <= k <= {}", self.n - 1)))
                } else {
                    Ok(m * self.n + k)
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correlator {
    pub literal: Rational,
    pub frozen: Rational,
    /// Literal-convention value for one-point correlators, which lie outside
    /// the k ≥ 2 extraction; read off the string equation instead.
    pub extrapolated_literal: Option<Rational>,
    pub diagnostic: Option<String>,
}

impl Correlator {
    pub fn value(&self, sign: SignConvention) -> &Rational {
        match sign {
            SignConvention::Literal => &self.literal,
            SignConvention::Frozen => &self.frozen,
        }
    }

    pub fn extrapolated(&self, sign: SignConvention) -> Option<Rational> {
        self.extrapolated_literal.as_ref().map(|v| match sign {
            SignConvention::Literal => v.clone(),
            SignConvention::Frozen => -v,
        })
    }

    /// +1, −1 or 0 per insertion count parity, relative to the sign-free
    /// relation F = W(x₁, x₂/2, x₃/3, …).
    pub fn sign_pattern(&self) -> i32 {
        if self.literal.is_zero() {
            0
        } else if self.literal.is_negative() {
            -1
        } else {
            1
        }
    }
}

/// ⟨∏τ_{k,m}⟩_g = f_{j₁…j_s}(0)·∏(−j_i)^{−1}, j = mn + k.
pub fn correlator(ctx: &mut GdContext, key: &CorrelatorKey) -> Result<Correlator> {
    let n = ctx.n();
    if key.n != n {
        return Err(Error::Domain(format!("context is for n={n}, key for n={}", key.n)));
    }
    let js = key.linear_indices()?;
    let s = js.len() as u32;
    let scale: Rational = js.iter().map(|&j| Rational::from_int(-(j as i64)).recip()).product();
    if s < 2 {
        let diagnostic =
            Some(format!("{s}-point correlators are outside the k >= 2 coefficient extraction; reported as 0"));
        let extrapolated_literal = if s == 1 { one_point(ctx, js[0], key.genus)?.map(|c| c * &scale) } else { None };
        return Ok(Correlator {
            literal: Rational::zero(),
            frozen: Rational::zero(),
            extrapolated_literal,
            diagnostic,
        });
    }
    let f = match admissibility(n, &js) {
        Some((_, g)) if g == key.genus => witten_coefficient(ctx, &js)?,
        _ => Rational::zero(),
    };
    let literal = f * scale;
    Ok(Correlator { frozen: -&literal, literal, extrapolated_literal: None, diagnostic: None })
}

/// The would-be ∂_jW(0), from the x_{j+n} coefficient of the string
/// equation: ∂₁∂_{j+n}W(0) + (j+n)∂_jW(0) = 0.
fn one_point(ctx: &mut GdContext, j: u32, genus: u32) -> Result<Option<Rational>> {
    let n = ctx.n();
    match admissibility(n, &[1, j + n]) {
        Some((_, g)) if g == genus => {
            let f = witten_coefficient(ctx, &[1, j + n])?;
            Ok(Some(-(f * Rational::new(1, (j + n) as i64))))
        }
        _ => Ok(None),
    }
}

/// The linear terms c_j x_j of W^g forced by the string equation, with
/// j = (n+1)(2g−1). Zero initial data would make them vanish; in genus ≥ 1
/// the k ≥ 2 coefficients are only consistent with them present.
pub fn linear_stratum(ctx: &mut GdContext, genus: u32) -> Result<GradedSeries> {
    let n = ctx.n();
    let mut terms = XPolynomial::zero();
    if genus >= 1 {
        let j = (n + 1) * (2 * genus - 1);
        if let Some(c) = one_point(ctx, j, genus)? {
            terms.add_term(XMonomial::var(XVar(j)), c);
        }
    }
    Ok(GradedSeries { n, genus: Some(genus), min_factors: 1, max_factors: 1, terms })
}

/// W restricted to x_{≥n} = 0, computed without the truncation: on that slice
/// the string equation fixes every u_{s,t}, the pair equations give the
/// Hessian, and quasihomogeneity (Euler's identity, applied twice) rebuilds W.
pub fn genus0_small_phase(ctx: &mut GdContext) -> Result<GradedSeries> {
    let n = ctx.n();
    let d = genus_quasidegree(n, 0);
    let deg = |i: u32| (n + 1 - i) as i64;
    // u_{s,1} = s(n−s)x_{n−s}; u_{n−1,2} = n−1; everything else vanishes.
    let jet_value = |s: u32, t: u32| -> XPolynomial {
        match t {
            1 => XPolynomial::term(XMonomial::var(XVar(n - s)), Rational::from_int((s * (n - s)) as i64)),
            2 if s == n - 1 => XPolynomial::constant(Rational::from_int(n as i64 - 1)),
            _ => XPolynomial::zero(),
        }
    };
    let mut w = XPolynomial::zero();
    for i in 1..n {
        let mut grad = XPolynomial::zero();
        for j in 1..n {
            let hess = ctx.gd_equation(&[i, j])?.substitute(|v| jet_value(v.s, v.t));
            let xj = XPolynomial::term(XMonomial::var(XVar(j)), Rational::from_int(deg(j)));
            grad.add_mul(&xj, &hess);
        }
        let grad = grad.scale(&Rational::new(1, d - deg(i)));
        let xi = XPolynomial::term(XMonomial::var(XVar(i)), Rational::from_int(deg(i)));
        w.add_mul(&xi, &grad);
    }
    let terms = w.scale(&Rational::new(1, d));
    // Every quasidegree-2(n+1) monomial in x₁..x_{n−1} has 2..=n+1 factors.
    let series = GradedSeries { n, genus: Some(0), min_factors: 2, max_factors: n as usize + 1, terms };
    series.check_genus()?;
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(factors: &[u32]) -> XMonomial {
        XMonomial::from_factors(factors.iter().map(|&i| XVar(i)))
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn coefficient_examples() {
        let mut c2 = GdContext::new(2).unwrap();
        assert_eq!(witten_coefficient(&mut c2, &[1, 1, 1]).unwrap(), q(1, 1));
        assert_eq!(witten_coefficient(&mut c2, &[1, 2]).unwrap(), q(0, 1));
        let mut c3 = GdContext::new(3).unwrap();
        assert_eq!(witten_coefficient(&mut c3, &[1, 1, 2]).unwrap(), q(2, 1));
        assert!(witten_coefficient(&mut c3, &[2]).is_err());
    }

    #[test]
    fn truncation_examples() {
        let mut c2 = GdContext::new(2).unwrap();
        let t = witten_truncation(&mut c2, 0, 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].terms, XPolynomial::term(x(&[1, 1, 1]), q(1, 6)));
        let mut c3 = GdContext::new(3).unwrap();
        let t = witten_truncation(&mut c3, 0, 3).unwrap();
        assert_eq!(t[0].terms, XPolynomial::term(x(&[1, 1, 2]), q(1, 1)));
    }

    #[test]
    fn residual_examples() {
        let w = GradedSeries {
            n: 2,
            genus: Some(0),
            min_factors: 2,
            max_factors: 3,
            terms: XPolynomial::term(x(&[1, 1, 1]), q(1, 6)),
        };
        assert!(string_residual(&w, 2).unwrap().terms.is_zero());
        let mut bumped = w.clone();
        bumped.terms.add_term(x(&[1, 1, 1]), q(1, 100));
        assert!(!string_residual(&bumped, 2).unwrap().terms.is_zero());
        assert!(matches!(string_residual(&w, 3), Err(Error::Bound(_))));

        let w3 = GradedSeries {
            n: 3,
            genus: Some(0),
            min_factors: 2,
            max_factors: 5,
            terms: XPolynomial::from_terms([(x(&[1, 1, 2]), q(1, 1)), (x(&[2, 2, 2, 2]), q(2, 3))]),
        };
        // Only the strata these terms feed are complete.
        let r = string_residual(&w3, 2).unwrap();
        assert!(r.terms.is_zero());
    }

    #[test]
    fn plus_sign_fails_for_kdv() {
        let mut c2 = GdContext::new(2).unwrap();
        let w = witten_truncation(&mut c2, 0, 4).unwrap().remove(0);
        assert_eq!(w.terms.coeff(&x(&[1, 1, 1, 3])), q(-1, 2));
        assert!(string_residual(&w, 3).unwrap().terms.is_zero());
        assert!(!string_residual_with(&w, 3, StringSign::Plus).unwrap().terms.is_zero());
    }

    #[test]
    fn correlator_examples() {
        let mut c2 = GdContext::new(2).unwrap();
        let key = |g, ins: &[(u32, u32)]| CorrelatorKey { n: 2, genus: g, insertions: ins.to_vec() };
        let c = correlator(&mut c2, &key(0, &[(1, 0); 3])).unwrap();
        assert_eq!(c.frozen, q(1, 1));
        assert_eq!(c.literal, q(-1, 1));
        let c = correlator(&mut c2, &key(0, &[(1, 0), (1, 0), (1, 0), (1, 1)])).unwrap();
        assert_eq!(c.frozen, q(1, 1));
        assert!(correlator(&mut c2, &key(0, &[(1, 0); 4])).unwrap().frozen.is_zero());
        assert!(matches!(correlator(&mut c2, &key(0, &[(2, 0), (1, 0)])), Err(Error::Domain(_))));
        let one = correlator(&mut c2, &key(1, &[(1, 1)])).unwrap();
        assert!(one.frozen.is_zero() && one.diagnostic.is_some());
        assert_eq!(one.extrapolated(SignConvention::Frozen), Some(q(1, 24)));
    }

    #[test]
    fn genus_one_needs_linear_terms() {
        let mut c2 = GdContext::new(2).unwrap();
        let w = witten_truncation(&mut c2, 1, 4).unwrap().remove(1);
        assert!(string_residual(&w, 3).unwrap().terms.is_zero());
        let lin = linear_stratum(&mut c2, 1).unwrap();
        assert_eq!(lin.terms, XPolynomial::term(x(&[3]), q(1, 8)));
        let full = w.with_linear(&lin).unwrap();
        assert!(string_residual(&full, 3).unwrap().terms.is_zero());
        let bare = GradedSeries { min_factors: 1, ..w };
        assert_eq!(string_residual(&bare, 3).unwrap().terms, XPolynomial::term(x(&[5]), q(-5, 8)));
    }

    #[test]
    fn small_phase_examples() {
        let mut c2 = GdContext::new(2).unwrap();
        assert_eq!(genus0_small_phase(&mut c2).unwrap().terms, XPolynomial::term(x(&[1, 1, 1]), q(1, 6)));
        let mut c3 = GdContext::new(3).unwrap();
        assert_eq!(
            genus0_small_phase(&mut c3).unwrap().terms,
            XPolynomial::from_terms([(x(&[1, 1, 2]), q(1, 1)), (x(&[2, 2, 2, 2]), q(2, 3))])
        );
        let mut c4 = GdContext::new(4).unwrap();
        let allowed = [x(&[1, 1, 3]), x(&[1, 2, 2]), x(&[1, 3, 3, 3]), x(&[2, 2, 3, 3]), x(&[3, 3, 3, 3, 3])];
        let w = genus0_small_phase(&mut c4).unwrap();
        assert!(w.terms.terms().keys().all(|m| allowed.contains(m)));
    }

    #[test]
    fn index_multisets_counts() {
        assert_eq!(index_multisets(2, 6, 4), vec![vec![1, 1, 1, 3]]);
        assert_eq!(index_multisets(5, 4, 2), vec![vec![1, 3], vec![2, 2]]);
        assert!(index_multisets(3, 2, 3).is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inadmissible_keys_vanish(n in 2u32..5, idx in proptest::collection::vec(1u32..9, 2..4)) {
            prop_assume!(admissibility(n, &idx).is_none());
            let mut ctx = GdContext::new(n).unwrap();
            prop_assert!(witten_coefficient(&mut ctx, &idx).unwrap().is_zero());
        }

        #[test]
        fn admissible_monomials_have_genus_degree(n in 2u32..6, idx in proptest::collection::vec(1u32..30, 2..6)) {
            if let Some((_, g)) = admissibility(n, &idx) {
                let m = XMonomial::from_factors(idx.iter().map(|&i| XVar(i)));
                prop_assert_eq!(quasidegree(n, &m), genus_quasidegree(n, g));
            }
        }
    }
}
