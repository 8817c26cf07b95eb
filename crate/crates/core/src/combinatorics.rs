//! The P_s coefficient family: ordered recurrence, orbit sums, and the
//! padding identity used as a property check.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Column {
    pub i: u32,
    pub j: u32,
}

impl Column {
    pub fn new(i: u32, j: u32) -> Self {
        assert!(i >= 1, "column needs i >= 1");
        Column { i, j }
    }

    pub fn weight(&self) -> u32 {
        self.i + self.j
    }
}

/// Ordered columns; P is not symmetric in them.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ColumnMatrix(Vec<Column>);

impl ColumnMatrix {
    pub fn new(columns: Vec<Column>) -> Self {
        assert!(!columns.is_empty());
        ColumnMatrix(columns)
    }

    pub fn columns(&self) -> &[Column] {
        &self.0
    }
}

/// Columns up to permutation, stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColumnMultiset(Vec<Column>);

impl ColumnMultiset {
    pub fn new(mut columns: Vec<Column>) -> Self {
        assert!(!columns.is_empty());
        columns.sort_unstable();
        ColumnMultiset(columns)
    }

    pub fn columns(&self) -> &[Column] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn grouped(&self) -> Vec<(Column, u32)> {
        group(&self.0)
    }

    /// n! / ∏ multiplicity!.
    pub fn orbit_size(&self) -> BigInt {
        let mut r = factorial(self.0.len() as u32);
        for (_, m) in self.grouped() {
            r /= factorial(m);
        }
        r
    }

    /// Every distinct ordering of the columns.
    pub fn orderings(&self) -> Vec<ColumnMatrix> {
        let mut cols = self.0.clone();
        let mut out = Vec::new();
        loop {
            out.push(ColumnMatrix(cols.clone()));
            if !next_permutation(&mut cols) {
                break;
            }
        }
        out
    }
}

fn group(cols: &[Column]) -> Vec<(Column, u32)> {
    let mut out: Vec<(Column, u32)> = Vec::new();
    for c in cols {
        match out.last_mut() {
            Some((last, m)) if last == c => *m += 1,
            _ => out.push((*c, 1)),
        }
    }
    out
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// a!/(b!(a−b)!) for 0 ≤ b ≤ a, otherwise 0 (including every negative a).
pub fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut r = BigInt::one();
    for k in 0..b {
        r = r * BigInt::from(a - k) / BigInt::from(k + 1);
    }
    r
}

/// J!/∏ j! over a column list.
fn multinomial_j(cols: &[Column]) -> BigInt {
    let total: u32 = cols.iter().map(|c| c.j).sum();
    let mut r = factorial(total);
    for c in cols {
        r /= factorial(c.j);
    }
    r
}

#[derive(Default)]
pub struct PTable {
    ordered: RwLock<HashMap<(u32, Vec<Column>), Rational>>,
    orbit: RwLock<HashMap<(u32, Vec<Column>), Rational>>,
}

impl PTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// P_s of an ordered matrix, by rules 1–3 (rule 3 with the shifted
    /// binomial subscript s − Σ_{≤q}(i+j)).
    pub fn p_coeff(&self, s: u32, m: &ColumnMatrix) -> Rational {
        self.ordered_rec(s, &m.0)
    }

    fn ordered_rec(&self, s: u32, cols: &[Column]) -> Rational {
        if cols.iter().all(|c| c.j == 0) {
            return Rational::zero();
        }
        if cols.len() == 1 {
            return Rational::from_bigint(binom(s as i64, cols[0].j as i64));
        }
        let key = (s, cols.to_vec());
        if let Some(v) = self.ordered.read().unwrap().get(&key) {
            return v.clone();
        }
        let n = cols.len();
        let jsum: u32 = cols.iter().map(|c| c.j).sum();
        let mut acc = Rational::from_bigint(binom(s as i64, jsum as i64) * multinomial_j(cols))
            / Rational::from_bigint(factorial(n as u32));
        let mut prefix = 0i64;
        for q in 1..n {
            prefix += cols[q - 1].weight() as i64;
            let rest = &cols[q..];
            let jrest: u32 = rest.iter().map(|c| c.j).sum();
            let b = binom(s as i64 - prefix, jrest as i64);
            if b.is_zero() {
                continue;
            }
            let head = self.ordered_rec(s, &cols[..q]);
            if head.is_zero() {
                continue;
            }
            let tail =
                Rational::from_bigint(b * multinomial_j(rest)) / Rational::from_bigint(factorial((n - q) as u32));
            acc -= head * tail;
        }
        self.ordered.write().unwrap().insert(key, acc.clone());
        acc
    }

    /// Σ of P_s over the distinct orderings of `ms`.
    ///
    /// Summing rule 3 over all labelled orderings makes the prefix run over
    /// labelled sub-multisets, which gives a recursion on multisets alone.
    pub fn p_coeff_sym(&self, s: u32, ms: &ColumnMultiset) -> Rational {
        let groups = ms.grouped();
        let mut denom = BigInt::one();
        for (_, m) in &groups {
            denom *= factorial(*m);
        }
        self.labelled_orbit(s, &groups) / Rational::from_bigint(denom)
    }

    /// Sum of P_s over all n! labelled orderings.
    fn labelled_orbit(&self, s: u32, groups: &[(Column, u32)]) -> Rational {
        if groups.iter().all(|(c, _)| c.j == 0) {
            return Rational::zero();
        }
        let flat: Vec<Column> = groups.iter().flat_map(|(c, m)| std::iter::repeat_n(*c, *m as usize)).collect();
        if flat.len() == 1 {
            return Rational::from_bigint(binom(s as i64, flat[0].j as i64));
        }
        let key = (s, flat.clone());
        if let Some(v) = self.orbit.read().unwrap().get(&key) {
            return v.clone();
        }
        let jsum: u32 = flat.iter().map(|c| c.j).sum();
        let mut acc = Rational::from_bigint(binom(s as i64, jsum as i64) * multinomial_j(&flat));

        // Enumerate sub-multiplicity vectors a with 0 ≤ a_c ≤ m_c, excluding
        // the empty and the full one.
        let mut a = vec![0u32; groups.len()];
        loop {
            let mut idx = 0;
            while idx < a.len() {
                if a[idx] < groups[idx].1 {
                    a[idx] += 1;
                    break;
                }
                a[idx] = 0;
                idx += 1;
            }
            if idx == a.len() {
                break;
            }
            if a.iter().zip(groups).all(|(x, (_, m))| x == m) {
                continue;
            }
            let sub: Vec<(Column, u32)> =
                groups.iter().zip(&a).filter(|(_, &x)| x > 0).map(|((c, _), &x)| (*c, x)).collect();
            let rest: Vec<Column> =
                groups.iter().zip(&a).flat_map(|((c, m), &x)| std::iter::repeat_n(*c, (m - x) as usize)).collect();
            let sigma: i64 = sub.iter().map(|(c, x)| (c.weight() * x) as i64).sum();
            let jrest: u32 = rest.iter().map(|c| c.j).sum();
            let b = binom(s as i64 - sigma, jrest as i64);
            if b.is_zero() {
                continue;
            }
            let t_sub = self.labelled_orbit(s, &sub);
            if t_sub.is_zero() {
                continue;
            }
            let mut ways = BigInt::one();
            for ((_, m), &x) in groups.iter().zip(&a) {
                ways *= binom(*m as i64, x as i64);
            }
            acc -= t_sub * Rational::from_bigint(ways * b * multinomial_j(&rest));
        }
        self.orbit.write().unwrap().insert(key, acc.clone());
        acc
    }
}

fn global() -> &'static PTable {
    static TABLE: OnceLock<PTable> = OnceLock::new();
    TABLE.get_or_init(PTable::new)
}

pub fn p_coeff(s: u32, m: &ColumnMatrix) -> Rational {
    global().p_coeff(s, m)
}

pub fn p_coeff_sym(s: u32, ms: &ColumnMultiset) -> Rational {
    global().p_coeff_sym(s, ms)
}

/// Orbit sum by explicit enumeration of orderings; an oracle for `p_coeff_sym`.
pub fn p_coeff_sym_by_orderings(s: u32, ms: &ColumnMultiset) -> Rational {
    ms.orderings().iter().map(|m| p_coeff(s, m)).sum()
}

/// All column multisets with i, j ≥ 1, total weight `weight`, and
/// Σj ≤ `max_j`. Each is sorted ascending.
pub fn column_multisets(weight: u32, max_j: u32) -> Vec<ColumnMultiset> {
    fn rec(remaining: u32, jbudget: u32, bound: Column, acc: &mut Vec<Column>, out: &mut Vec<ColumnMultiset>) {
        if remaining == 0 {
            if !acc.is_empty() {
                let mut v = acc.clone();
                v.reverse();
                out.push(ColumnMultiset(v));
            }
            return;
        }
        // Columns are chosen in non-increasing order.
        for i in (1..=remaining.saturating_sub(1).min(bound.i)).rev() {
            let jmax = (remaining - i).min(jbudget);
            for j in (1..=jmax).rev() {
                let c = Column { i, j };
                if c > bound {
                    continue;
                }
                acc.push(c);
                rec(remaining - i - j, jbudget - j, c, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    let top = Column { i: u32::MAX, j: u32::MAX };
    rec(weight, max_j, top, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The padding identity on one instance: `active` columns have j ≥ 1,
/// `padding` columns have j = 0. Returns (lhs, rhs).
pub fn padding_identity_sides(s: u32, active: &[Column], padding: &[Column]) -> (Rational, Rational) {
    let mut all = active.to_vec();
    all.extend_from_slice(padding);
    let lhs = p_coeff_sym(s, &ColumnMultiset::new(all));
    let sigma: u32 = active.iter().map(Column::weight).sum();
    let rhs = if s >= sigma {
        Rational::zero()
    } else {
        let pad = ColumnMultiset::new(padding.to_vec());
        Rational::from_bigint(pad.orbit_size()) / Rational::from_bigint(factorial(padding.len() as u32))
            * p_coeff_sym(s, &ColumnMultiset::new(active.to_vec()))
    };
    (lhs, rhs)
}
