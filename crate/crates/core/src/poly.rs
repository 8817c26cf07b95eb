//! Sparse commutative polynomials with exact rational coefficients over an
//! arbitrary ordered variable type.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::rational::Rational;

pub trait Variable: Clone + Ord + Hash + Debug {}
impl<T: Clone + Ord + Hash + Debug> Variable for T {}

/// Variables carrying the Σ(s+t)-style grading.
pub trait Weighted {
    fn weight(&self) -> u32;
}

/// Variables on which the total x₁-derivative acts by a shift.
pub trait Prolongable {
    fn d1(&self) -> Self;
}

/// A multiset of variables, kept sorted ascending.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial<V>(SmallVec<[V; 6]>);

impl<V: Variable> Monomial<V> {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(smallvec::smallvec![v])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = V>) -> Self {
        let mut f: SmallVec<[V; 6]> = factors.into_iter().collect();
        f.sort();
        Monomial(f)
    }

    /// Caller promises `factors` is already sorted.
    pub fn from_sorted(factors: Vec<V>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0] <= w[1]));
        Monomial(SmallVec::from_vec(factors))
    }

    pub fn factors(&self) -> &[V] {
        &self.0
    }

    pub fn into_factors(self) -> Vec<V> {
        self.0.into_vec()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i].clone());
                i += 1;
            } else {
                out.push(b[j].clone());
                j += 1;
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial(out)
    }

    pub fn multiplicity(&self, v: &V) -> usize {
        self.0.iter().filter(|x| *x == v).count()
    }

    /// Distinct factors with their multiplicities, in ascending order.
    pub fn grouped(&self) -> Vec<(V, usize)> {
        let mut out: Vec<(V, usize)> = Vec::new();
        for v in &self.0 {
            match out.last_mut() {
                Some((last, c)) if last == v => *c += 1,
                _ => out.push((v.clone(), 1)),
            }
        }
        out
    }

    /// The monomial with the factor at `idx` removed.
    pub fn without(&self, idx: usize) -> Self {
        let mut f = self.0.clone();
        f.remove(idx);
        Monomial(f)
    }

    /// Removes one copy of `v`; `None` if absent.
    pub fn divide_var(&self, v: &V) -> Option<Self> {
        let idx = self.0.iter().position(|x| x == v)?;
        Some(self.without(idx))
    }
}

impl<V: Variable + Weighted> Monomial<V> {
    pub fn weight(&self) -> u32 {
        self.0.iter().map(Weighted::weight).sum()
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<V: Variable> {
    terms: BTreeMap<Monomial<V>, Rational>,
}

impl<V: Variable> Default for Poly<V> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<V: Variable> Poly<V> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn var(v: V) -> Self {
        Poly::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial<V>, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V>, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
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

    pub fn terms(&self) -> &BTreeMap<Monomial<V>, Rational> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial<V>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial<V>) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly<V>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, k) in &other.terms {
            self.add_term(m.clone(), k * c);
        }
    }

    pub fn add_assign(&mut self, other: &Poly<V>) {
        if other.len() * 8 < self.len() {
            for (m, k) in &other.terms {
                self.add_term(m.clone(), k.clone());
            }
            return;
        }
        let mine = std::mem::take(&mut self.terms);
        self.terms = merge_sorted(mine.into_iter(), other.terms.iter().map(|(m, c)| (m.clone(), c.clone())));
    }

    /// Adds `c · m · other`.
    pub fn add_product_term(&mut self, m: &Monomial<V>, c: &Rational, other: &Poly<V>) {
        for (m2, k) in &other.terms {
            self.add_term(m.mul(m2), c * k);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    /// Adds `a · b`.
    pub fn add_mul(&mut self, a: &Poly<V>, b: &Poly<V>) {
        let p = a.mul(b);
        self.add_assign(&p);
    }

    pub fn mul(&self, other: &Poly<V>) -> Self {
        let (a, b) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if a.len() == 1 {
            let (m, c) = a.terms.iter().next().unwrap();
            // Multiplying by a monomial preserves the order of `b`.
            return Poly {
                terms: b.terms.iter().map(|(m2, k)| (m.mul(m2), c * k)).filter(|(_, k)| !k.is_zero()).collect(),
            };
        }
        let mut acc = Accumulator::with_capacity(a.len() * b.len());
        for (m, c) in &a.terms {
            for (m2, k) in &b.terms {
                acc.add(m.mul(m2), c * k);
            }
        }
        acc.finish()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Poly::constant(Rational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Applies the derivation determined by its values on variables
    /// (Leibniz rule). `image` is called once per distinct variable.
    pub fn derive(&self, mut image: impl FnMut(&V) -> Poly<V>) -> Self {
        let mut images: BTreeMap<V, Poly<V>> = BTreeMap::new();
        for m in self.terms.keys() {
            for v in m.factors() {
                if !images.contains_key(v) {
                    images.insert(v.clone(), image(v));
                }
            }
        }
        self.derive_map(&images)
    }

    /// Derivation with explicit images; variables absent from `images` map to 0.
    pub fn derive_map(&self, images: &BTreeMap<V, Poly<V>>) -> Self {
        let mut acc = Accumulator::with_capacity(self.len() * 2);
        for (m, c) in &self.terms {
            let f = m.factors();
            let mut idx = 0;
            while idx < f.len() {
                let v = &f[idx];
                let mut mult = 1;
                while idx + mult < f.len() && &f[idx + mult] == v {
                    mult += 1;
                }
                if let Some(img) = images.get(v).filter(|p| !p.is_zero()) {
                    let rest = m.without(idx);
                    let k = c * &Rational::from_int(mult as i64);
                    for (m2, k2) in &img.terms {
                        acc.add(rest.mul(m2), &k * k2);
                    }
                }
                idx += mult;
            }
        }
        acc.finish()
    }

    /// Distinct variables occurring in the polynomial.
    pub fn variables(&self) -> std::collections::BTreeSet<V> {
        self.terms.keys().flat_map(|m| m.factors().iter().cloned()).collect()
    }

    /// Ring homomorphism defined by images of the variables.
    pub fn substitute<W: Variable>(&self, mut image: impl FnMut(&V) -> Poly<W>) -> Poly<W> {
        let mut powers: BTreeMap<(V, usize), Poly<W>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (v, e) in m.grouped() {
                powers.entry((v.clone(), e)).or_insert_with(|| {
                    let base = image(&v);
                    base.pow(e as u32)
                });
                acc = acc.mul(&powers[&(v, e)]);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn filter(&self, keep: impl Fn(&Monomial<V>) -> bool) -> Self {
        Poly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }
}

impl<V: Variable + Prolongable> Poly<V> {
    /// Total x₁-derivative.
    pub fn d1(&self) -> Self {
        let mut acc = Accumulator::with_capacity(self.len() * 2);
        for (m, c) in &self.terms {
            let f = m.factors();
            let mut idx = 0;
            while idx < f.len() {
                let v = &f[idx];
                let mut mult = 1;
                while idx + mult < f.len() && &f[idx + mult] == v {
                    mult += 1;
                }
                let mut g: SmallVec<[V; 6]> = SmallVec::with_capacity(f.len());
                g.extend(f[..idx].iter().cloned());
                g.extend(f[idx + 1..].iter().cloned());
                let dv = v.d1();
                let pos = g.partition_point(|x| x < &dv);
                g.insert(pos, dv);
                acc.add(Monomial(g), c * &Rational::from_int(mult as i64));
                idx += mult;
            }
        }
        acc.finish()
    }

    pub fn d1_n(&self, times: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..times {
            p = p.d1();
        }
        p
    }
}

impl<V: Variable + Weighted> Poly<V> {
    /// `Some(w)` when every monomial has weight `w` (zero polynomial: `None`).
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }
}

/// Hash-based term accumulator; converted to the ordered form once at the end.
struct Accumulator<V: Variable>(FxHashMap<Monomial<V>, Rational>);

impl<V: Variable> Accumulator<V> {
    fn with_capacity(n: usize) -> Self {
        let mut map = FxHashMap::default();
        map.reserve(n.min(1 << 16));
        Accumulator(map)
    }

    fn add(&mut self, m: Monomial<V>, c: Rational) {
        match self.0.get_mut(&m) {
            Some(k) => *k += c,
            None => {
                self.0.insert(m, c);
            }
        }
    }

    fn finish(self) -> Poly<V> {
        let mut v: Vec<_> = self.0.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms: v.into_iter().collect() }
    }
}

/// Merges two ascending term streams, dropping cancelled terms.
fn merge_sorted<V: Variable>(
    a: impl Iterator<Item = (Monomial<V>, Rational)>,
    b: impl Iterator<Item = (Monomial<V>, Rational)>,
) -> BTreeMap<Monomial<V>, Rational> {
    let mut a = a.peekable();
    let mut b = b.peekable();
    let mut out = Vec::new();
    loop {
        let take_a = match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (Some(x), Some(y)) => x.0.cmp(&y.0),
        };
        match take_a {
            std::cmp::Ordering::Less => out.push(a.next().unwrap()),
            std::cmp::Ordering::Greater => out.push(b.next().unwrap()),
            std::cmp::Ordering::Equal => {
                let (m, x) = a.next().unwrap();
                let (_, y) = b.next().unwrap();
                let c = x + y;
                if !c.is_zero() {
                    out.push((m, c));
                }
            }
        }
    }
    out.into_iter().collect()
}

impl<V: Variable> Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<V: Variable> Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from_int(-1));
        out
    }
}

impl<V: Variable> Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        Poly::mul(self, rhs)
    }
}

impl<V: Variable> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        self.scale(&Rational::from_int(-1))
    }
}

/// Serialized term: `{"monomial": [...], "coeff": {"num","den"}}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermRecord<V> {
    pub monomial: Vec<V>,
    pub coeff: Rational,
}

impl<V: Variable + Serialize> Serialize for Poly<V> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermRecord { monomial: m.factors().to_vec(), coeff: c.clone() })?;
        }
        seq.end()
    }
}

impl<'de, V: Variable + Deserialize<'de>> Deserialize<'de> for Poly<V> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let recs: Vec<TermRecord<V>> = Vec::deserialize(deserializer)?;
        let mut p = Poly::zero();
        for r in recs {
            if r.coeff.is_zero() {
                return Err(serde::de::Error::custom("zero coefficient stored"));
            }
            let m = Monomial::from_factors(r.monomial);
            if p.terms.contains_key(&m) {
                return Err(serde::de::Error::custom("duplicate monomial"));
            }
            p.terms.insert(m, r.coeff);
        }
        Ok(p)
    }
}
