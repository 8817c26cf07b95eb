//! Jet variables u_{s,t} = ∂_s∂₁^t v and the auxiliary symbol families
//! (η, ξ, multi-derivatives) used by the expansion layer.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, Poly, Prolongable, Weighted};
use crate::rational::Rational;

/// u_{s,t}. The pure derivative ∂₁^d v is always (1, d−1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVariable {
    pub s: u32,
    pub t: u32,
}

impl JetVariable {
    pub fn new(s: u32, t: u32) -> Self {
        assert!(s >= 1, "jet variable needs s >= 1");
        JetVariable { s, t }
    }

    /// ∂₁^d v, d ≥ 1.
    pub fn pure(d: u32) -> Self {
        assert!(d >= 1);
        JetVariable { s: 1, t: d - 1 }
    }
}

impl fmt::Debug for JetVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{},{}", self.s, self.t)
    }
}

impl Weighted for JetVariable {
    fn weight(&self) -> u32 {
        self.s + self.t
    }
}

impl Prolongable for JetVariable {
    fn d1(&self) -> Self {
        JetVariable { s: self.s, t: self.t + 1 }
    }
}

impl Serialize for JetVariable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.s, self.t].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JetVariable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [s, t] = <[u32; 2]>::deserialize(deserializer)?;
        if s == 0 {
            return Err(serde::de::Error::custom("jet variable with s = 0"));
        }
        Ok(JetVariable { s, t })
    }
}

pub type JetMonomial = Monomial<JetVariable>;
pub type JetPolynomial = Poly<JetVariable>;

/// ∂₁^j η_i.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EtaSymbol {
    pub i: u32,
    pub j: u32,
}

impl Weighted for EtaSymbol {
    fn weight(&self) -> u32 {
        self.i + self.j
    }
}

impl Prolongable for EtaSymbol {
    fn d1(&self) -> Self {
        EtaSymbol { i: self.i, j: self.j + 1 }
    }
}

/// ∂₁^j ξ_i, the Baker–Akhiezer coefficients.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct XiSymbol {
    pub i: u32,
    pub j: u32,
}

impl Weighted for XiSymbol {
    fn weight(&self) -> u32 {
        self.i + self.j
    }
}

impl Prolongable for XiSymbol {
    fn d1(&self) -> Self {
        XiSymbol { i: self.i, j: self.j + 1 }
    }
}

pub type EtaPolynomial = Poly<EtaSymbol>;
pub type XiPolynomial = Poly<XiSymbol>;

/// ∂_{i₁}⋯∂_{i_k} v, indices sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiDerivSymbol(Vec<u32>);

impl MultiDerivSymbol {
    pub fn new(indices: impl IntoIterator<Item = u32>) -> Self {
        let mut v: Vec<u32> = indices.into_iter().collect();
        assert!(!v.is_empty() && v.iter().all(|&i| i >= 1));
        v.sort_unstable();
        MultiDerivSymbol(v)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }
}

impl Weighted for MultiDerivSymbol {
    fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

pub type MultiDerivPolynomial = Poly<MultiDerivSymbol>;

/// Leading-term order used by x₁-integration: factors compared by (t, s),
/// monomials by their factor lists sorted descending.
fn integration_key(m: &JetMonomial) -> Vec<(u32, u32)> {
    let mut k: Vec<(u32, u32)> = m.factors().iter().map(|v| (v.t, v.s)).collect();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

fn from_integration_key(k: &[(u32, u32)]) -> JetMonomial {
    Monomial::from_factors(k.iter().map(|&(t, s)| JetVariable { s, t }))
}

/// Solves d1(X) = p for X without constant term; `None` when p is not a
/// total x₁-derivative.
///
/// The largest monomial of d1(m) raises m's largest factor, with coefficient
/// equal to that factor's multiplicity, so peeling off leading terms is exact.
pub fn integrate_d1(p: &JetPolynomial) -> Option<JetPolynomial> {
    let mut work: BTreeMap<Vec<(u32, u32)>, Rational> =
        p.iter().map(|(m, c)| (integration_key(m), c.clone())).collect();
    let mut out = JetPolynomial::zero();
    while let Some((key, c)) = work.pop_last() {
        let (t, s) = key[0];
        if t == 0 || (key.len() > 1 && key[1] == (t, s)) {
            return None;
        }
        let mut lowered = key.clone();
        lowered[0] = (t - 1, s);
        if key.len() > 1 && key[1] > lowered[0] {
            return None;
        }
        let mult = lowered.iter().filter(|&&f| f == lowered[0]).count();
        let coeff = &c / &Rational::from_int(mult as i64);
        let m = from_integration_key(&lowered);
        let dm = JetPolynomial::term(m.clone(), coeff.clone()).d1();
        out.add_term(m, coeff);
        for (mm, cc) in dm.iter() {
            let k = integration_key(mm);
            if k == key {
                continue;
            }
            let e = work.entry(k.clone()).or_insert_with(Rational::zero);
            *e -= cc;
            if e.is_zero() {
                work.remove(&k);
            }
        }
    }
    Some(out)
}

pub fn u(s: u32, t: u32) -> JetPolynomial {
    JetPolynomial::var(JetVariable::new(s, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn arith_examples() {
        let a = u(1, 1);
        assert!((&a - &a).is_zero());
        let sq = &a * &a;
        assert_eq!(sq.len(), 1);
        let m = Monomial::from_factors([JetVariable::new(1, 1), JetVariable::new(1, 1)]);
        assert_eq!(sq.coeff(&m), Rational::one());
        let s = u(3, 1).scale(&q(4, 3));
        assert_eq!(s.coeff(&Monomial::var(JetVariable::new(3, 1))), q(4, 3));
    }

    #[test]
    fn d1_examples() {
        assert_eq!(u(2, 1).d1(), u(2, 2));
        let sq = &u(1, 1) * &u(1, 1);
        assert_eq!(sq.d1(), (&u(1, 1) * &u(1, 2)).scale(&q(2, 1)));
        assert!(JetPolynomial::constant(q(5, 1)).d1().is_zero());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(Monomial::var(JetVariable::new(3, 1)).weight(), 4);
        let m = Monomial::from_factors([JetVariable::new(2, 2), JetVariable::new(1, 1)]);
        assert_eq!(m.weight(), 6);
        assert_eq!(JetMonomial::one().weight(), 0);
    }

    #[test]
    fn canonical_order_puts_pure_jets_first() {
        let m = Monomial::from_factors([JetVariable::new(3, 1), JetVariable::new(1, 4)]);
        assert_eq!(m.factors()[0], JetVariable::new(1, 4));
        assert_eq!(JetVariable::pure(4), JetVariable::new(1, 3));
    }

    #[test]
    fn json_monomial_shape() {
        let p = u(1, 1).scale(&q(2, 1)).mul(&u(2, 3));
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"[{"monomial":[[1,1],[2,3]],"coeff":{"num":"2","den":"1"}}]"#);
        assert_eq!(serde_json::from_str::<JetPolynomial>(&j).unwrap(), p);
    }

    #[test]
    fn integrate_simple() {
        let p = (&u(1, 1) * &u(1, 2)).scale(&q(2, 1));
        assert_eq!(integrate_d1(&p).unwrap(), &u(1, 1) * &u(1, 1));
        assert!(integrate_d1(&(&u(1, 1) * &u(1, 1))).is_none());
        assert!(integrate_d1(&u(2, 0)).is_none());
    }

    fn arb_var() -> impl Strategy<Value = JetVariable> {
        (1u32..4, 0u32..4).prop_map(|(s, t)| JetVariable::new(s, t))
    }

    fn arb_mono() -> impl Strategy<Value = JetMonomial> {
        prop::collection::vec(arb_var(), 0..4).prop_map(Monomial::from_factors)
    }

    fn arb_poly() -> impl Strategy<Value = JetPolynomial> {
        prop::collection::vec((arb_mono(), -9i64..10, 1i64..5), 0..7)
            .prop_map(|ts| JetPolynomial::from_terms(ts.into_iter().map(|(m, n, d)| (m, q(n, d)))))
    }

    proptest! {
        #[test]
        fn leibniz(p in arb_poly(), r in arb_poly()) {
            let lhs = (&p * &r).d1();
            let rhs = &(&p.d1() * &r) + &(&p * &r.d1());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn weight_additive(a in arb_mono(), b in arb_mono()) {
            prop_assert_eq!(a.mul(&b).weight(), a.weight() + b.weight());
        }

        #[test]
        fn canonicalization_idempotent(a in arb_mono()) {
            prop_assert!(a.is_canonical());
            prop_assert_eq!(Monomial::from_factors(a.factors().to_vec()), a);
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!(!(&a - &a).terms().values().any(|c| c.is_zero()));
        }

        #[test]
        fn integrate_inverts_d1(p in arb_poly()) {
            let p = p.filter(|m| !m.is_one());
            let x = integrate_d1(&p.d1()).expect("exact derivative integrates");
            prop_assert_eq!(x.d1(), p.d1());
        }

        #[test]
        fn rational_json_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
            let r = q(n, d);
            let j = serde_json::to_string(&r).unwrap();
            prop_assert_eq!(serde_json::from_str::<Rational>(&j).unwrap(), r);
        }
    }
}
