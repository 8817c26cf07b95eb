//! The KP hierarchy for v = −ln τ in jet normal form.
//!
//! Stage w builds every ∂_i∂_j v with i + j = w from the ∂_sη_r expansion
//! and the η forms of weight < w, then the η form of weight w.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use rayon::prelude::*;

use crate::combinatorics::{column_multisets, p_coeff_sym, ColumnMultiset};
use crate::error::{Error, Result};
use crate::jet::{
    u, EtaPolynomial, EtaSymbol, JetMonomial, JetPolynomial, JetVariable, MultiDerivPolynomial, MultiDerivSymbol,
    XiPolynomial, XiSymbol,
};
use crate::poly::Monomial;
use crate::rational::Rational;

/// Integer partitions of `total` as non-increasing vectors.
pub fn partitions(total: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(acc.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            acc.push(p);
            rec(rem - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, &mut Vec::new(), &mut out);
    out
}

fn multiplicity_factorials(parts: &[u32]) -> i64 {
    let mut r = 1i64;
    let mut run = 0i64;
    for (k, p) in parts.iter().enumerate() {
        run = if k > 0 && parts[k - 1] == *p { run + 1 } else { 1 };
        r *= run;
    }
    r
}

/// η_r as a linear combination of ∂_{i₁}⋯∂_{i_n} v.
pub fn eta_raw(r: u32) -> MultiDerivPolynomial {
    assert!(r >= 1);
    let mut out = MultiDerivPolynomial::zero();
    for parts in partitions(r) {
        // (−1)^{n+1}/(n!∏i) times n!/∏mult! orderings.
        let n = parts.len();
        let prod: i64 = parts.iter().map(|&p| p as i64).product();
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let c = Rational::new(sign, prod * multiplicity_factorials(&parts));
        out.add_term(Monomial::var(MultiDerivSymbol::new(parts)), c);
    }
    out
}

/// ξ_j = Σ_n (1/n!) Σ_{i₁+⋯+i_n=j} η_{i₁}⋯η_{i_n}.
pub fn xi_from_eta(j: u32) -> EtaPolynomial {
    assert!(j >= 1);
    let mut out = EtaPolynomial::zero();
    for parts in partitions(j) {
        let c = Rational::new(1, multiplicity_factorials(&parts));
        let m = Monomial::from_factors(parts.iter().map(|&i| EtaSymbol { i, j: 0 }));
        out.add_term(m, c);
    }
    out
}

fn eta_monomial(ms: &ColumnMultiset) -> Monomial<EtaSymbol> {
    Monomial::from_factors(ms.columns().iter().map(|c| EtaSymbol { i: c.i, j: c.j }))
}

/// ∂_sη_r in η symbols. Column multisets with Σj > s carry P_s = 0 and are
/// skipped.
pub fn ds_eta(s: u32, r: u32) -> EtaPolynomial {
    let mut out = EtaPolynomial::zero();
    for ms in column_multisets(s + r, s) {
        out.add_term(eta_monomial(&ms), p_coeff_sym(s, &ms));
    }
    out
}

/// B_s^t in η symbols, 2 ≤ t ≤ s.
pub fn b_coeff(s: u32, t: u32) -> Result<EtaPolynomial> {
    if t < 2 || t > s {
        return Err(Error::Domain(format!("B_s^t needs 2 <= t <= s, got s={s}, t={t}")));
    }
    let mut out = EtaPolynomial::zero();
    for ms in column_multisets(t, s) {
        out.add_term(eta_monomial(&ms), -p_coeff_sym(s, &ms));
    }
    Ok(out)
}

fn xi_d(i: u32, d: u32) -> XiPolynomial {
    XiPolynomial::var(XiSymbol { i, j: d })
}

fn binom_q(a: i64, b: i64) -> Rational {
    Rational::from_bigint(crate::combinatorics::binom(a, b))
}

/// B_s^t from the compatibility recursion in ξ symbols, without any P.
pub fn b_coeff_xi(s: u32, t: u32) -> Result<XiPolynomial> {
    if t < 2 || t > s {
        return Err(Error::Domain(format!("B_s^t needs 2 <= t <= s, got s={s}, t={t}")));
    }
    let (s, t) = (s as i64, t as i64);
    let mut b: BTreeMap<i64, XiPolynomial> = BTreeMap::new();
    for tt in 2..=t {
        let mut acc = XiPolynomial::zero();
        for i in 1..tt {
            acc.add_scaled(&xi_d((tt - i) as u32, i as u32), &-binom_q(s, i));
        }
        for j in 2..tt {
            let mut inner = XiPolynomial::zero();
            for i in 0..(tt - j) {
                inner.add_scaled(&xi_d((tt - i - j) as u32, i as u32), &binom_q(s - j, i));
            }
            acc.add_scaled(&b[&j].mul(&inner), &Rational::from_int(-1));
        }
        b.insert(tt, acc);
    }
    Ok(b.remove(&t).unwrap())
}

/// Rewrites ξ symbols through `xi_from_eta`.
pub fn xi_to_eta(p: &XiPolynomial) -> EtaPolynomial {
    p.substitute(|x| xi_from_eta(x.i).d1_n(x.j))
}

/// The KP equation table.
pub struct KpTable {
    equations: BTreeMap<(u32, u32), JetPolynomial>,
    eta_forms: BTreeMap<u32, JetPolynomial>,
    built_weight: u32,
    eta_derivs: RwLock<HashMap<(u32, u32), JetPolynomial>>,
    multiderivs: RwLock<HashMap<MultiDerivSymbol, JetPolynomial>>,
}

impl Default for KpTable {
    fn default() -> Self {
        Self::new()
    }
}

impl KpTable {
    /// The table at weight 1: only η₁ = u_{1,0}.
    pub fn new() -> Self {
        let mut eta_forms = BTreeMap::new();
        eta_forms.insert(1, u(1, 0));
        KpTable {
            equations: BTreeMap::new(),
            eta_forms,
            built_weight: 1,
            eta_derivs: RwLock::default(),
            multiderivs: RwLock::default(),
        }
    }

    pub fn built(max_weight: u32) -> Self {
        let mut t = KpTable::new();
        t.build_to(max_weight);
        t
    }

    /// Reassembles a table from stored entries (used by the cache loader).
    pub fn from_parts(
        equations: BTreeMap<(u32, u32), JetPolynomial>,
        eta_forms: BTreeMap<u32, JetPolynomial>,
        built_weight: u32,
    ) -> Result<Self> {
        let t = KpTable {
            equations,
            eta_forms,
            built_weight,
            eta_derivs: RwLock::default(),
            multiderivs: RwLock::default(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn built_weight(&self) -> u32 {
        self.built_weight
    }

    pub fn equations(&self) -> &BTreeMap<(u32, u32), JetPolynomial> {
        &self.equations
    }

    pub fn eta_forms(&self) -> &BTreeMap<u32, JetPolynomial> {
        &self.eta_forms
    }

    pub fn build_to(&mut self, max_weight: u32) {
        while self.built_weight < max_weight {
            let w = self.built_weight + 1;
            let pairs: Vec<(u32, u32)> = (1..=w / 2).map(|i| (i, w - i)).collect();
            let built: Vec<((u32, u32), JetPolynomial)> = pairs
                .par_iter()
                .map(|&(i, j)| {
                    let eq = self.kp_route(i, j).expect("build order provides prerequisites");
                    ((i, j), eq)
                })
                .collect();
            self.equations.extend(built);
            let eta = self.eta_normal(w).expect("build order provides prerequisites");
            self.eta_forms.insert(w, eta);
            self.built_weight = w;
        }
    }

    /// Stored right-hand side of ∂_i∂_j v.
    pub fn kp_equation(&self, i: u32, j: u32) -> Result<JetPolynomial> {
        if i == 0 || j == 0 {
            return Err(Error::Domain("flow indices start at 1".into()));
        }
        if i == 1 || j == 1 {
            return Ok(u(i.max(j), 1));
        }
        self.equations
            .get(&(i.min(j), i.max(j)))
            .cloned()
            .ok_or_else(|| Error::MissingTable(format!("kp equation ({i},{j})")))
    }

    pub fn eta_form(&self, r: u32) -> Result<JetPolynomial> {
        self.eta_forms.get(&r).cloned().ok_or_else(|| Error::MissingTable(format!("eta form {r}")))
    }

    /// ∂₁^d of the η_r normal form.
    fn eta_deriv(&self, r: u32, d: u32) -> Result<JetPolynomial> {
        if let Some(p) = self.eta_derivs.read().unwrap().get(&(r, d)) {
            return Ok(p.clone());
        }
        let p = if d == 0 { self.eta_form(r)? } else { self.eta_deriv(r, d - 1)?.d1() };
        self.eta_derivs.write().unwrap().insert((r, d), p.clone());
        Ok(p)
    }

    /// (1/j)∂_i∂_j v = ∂_iη_j − ∂_i(η_j − (1/j)∂_j v), with ∂_iη_j expanded
    /// through P_i.
    pub fn kp_route(&self, i: u32, j: u32) -> Result<JetPolynomial> {
        if i == 1 {
            return Ok(u(j, 1));
        }
        let mut acc = self.substitute_eta(&ds_eta(i, j))?;
        let rest = self.eta_rest(j)?;
        acc = &acc - &self.flow(&rest, i)?;
        Ok(acc.scale(&Rational::from_int(j as i64)))
    }

    /// η_r minus its head (1/r)u_{r,0}.
    pub fn eta_rest(&self, r: u32) -> Result<JetPolynomial> {
        let mut p = self.eta_form(r)?;
        p.add_term(Monomial::var(JetVariable::new(r, 0)), -Rational::new(1, r as i64));
        Ok(p)
    }

    /// Replaces every ∂₁^jη_i by its jet normal form.
    pub fn substitute_eta(&self, p: &EtaPolynomial) -> Result<JetPolynomial> {
        for v in p.variables() {
            self.eta_deriv(v.i, v.j)?;
        }
        Ok(p.substitute(|v| self.eta_deriv(v.i, v.j).unwrap()))
    }

    /// ∂_i applied to a jet-normal polynomial.
    pub fn flow(&self, p: &JetPolynomial, i: u32) -> Result<JetPolynomial> {
        if i == 1 {
            return Ok(p.d1());
        }
        let mut images = BTreeMap::new();
        for v in p.variables() {
            images.insert(v, self.kp_equation(i, v.s)?.d1_n(v.t));
        }
        Ok(p.derive_map(&images))
    }

    /// Jet normal form of ∂_{i₁}⋯∂_{i_k} v.
    pub fn reduce_multideriv(&self, sym: &MultiDerivSymbol) -> Result<JetPolynomial> {
        if let Some(p) = self.multiderivs.read().unwrap().get(sym) {
            return Ok(p.clone());
        }
        let idx = sym.indices();
        let ones = idx.iter().filter(|&&i| i == 1).count() as u32;
        let others: Vec<u32> = idx.iter().copied().filter(|&i| i > 1).collect();
        let p = match others.len() {
            0 => u(1, ones - 1),
            1 => u(others[0], ones),
            _ => {
                let n = others.len();
                let mut p = self.kp_equation(others[n - 2], others[n - 1])?;
                for &c in others[..n - 2].iter().rev() {
                    p = self.flow(&p, c)?;
                }
                p.d1_n(ones)
            }
        };
        self.multiderivs.write().unwrap().insert(sym.clone(), p.clone());
        Ok(p)
    }

    /// η_r in jet normal form, from the raw expansion.
    pub fn eta_normal(&self, r: u32) -> Result<JetPolynomial> {
        let mut out = JetPolynomial::zero();
        for (m, c) in eta_raw(r).iter() {
            out.add_scaled(&self.reduce_multideriv(&m.factors()[0])?, c);
        }
        Ok(out)
    }

    /// η_R = (1/R)[∂_R v − Σ_{i<R} ∂_iη_{R−i}], an independent route to the
    /// η forms (obtained by differentiating ln ψ in the spectral parameter).
    pub fn eta_by_recurrence(&self, r: u32) -> Result<JetPolynomial> {
        let mut acc = u(r, 0);
        for i in 1..r {
            acc = &acc - &self.flow(&self.eta_form(r - i)?, i)?;
        }
        Ok(acc.scale(&Rational::new(1, r as i64)))
    }

    /// Checks the stored-entry invariants.
    pub fn validate(&self) -> Result<()> {
        for (&(i, j), p) in &self.equations {
            if i > j || i + j > self.built_weight {
                return Err(Error::Invariant(format!("unexpected key ({i},{j})")));
            }
            for m in p.terms().keys() {
                if m.weight() != i + j || m.factors().iter().any(|v| v.t == 0) {
                    return Err(Error::Invariant(format!("bad monomial in ({i},{j})")));
                }
                if !parity_ok(m) {
                    return Err(Error::Invariant(format!("odd monomial in ({i},{j})")));
                }
            }
        }
        for (&r, p) in &self.eta_forms {
            let head = JetMonomial::var(JetVariable::new(r, 0));
            if p.coeff(&head) != Rational::new(1, r as i64) {
                return Err(Error::Invariant(format!("eta form {r} head")));
            }
            for m in p.terms().keys() {
                if m.weight() != r || (m != &head && m.factors().iter().any(|v| v.t == 0)) {
                    return Err(Error::Invariant(format!("bad monomial in eta form {r}")));
                }
            }
        }
        Ok(())
    }
}

/// Σ(t+1) over the factors is even.
pub fn parity_ok(m: &JetMonomial) -> bool {
    m.factors().iter().map(|v| v.t + 1).sum::<u32>() % 2 == 0
}
