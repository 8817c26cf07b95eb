//! The property suites behind `gdh selfcheck`. Randomized suites draw from a
//! seeded generator, so a run is reproducible.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::combinatorics::{
    factorial, p_coeff, p_coeff_sym, p_coeff_sym_by_orderings, padding_identity_sides, Column, ColumnMatrix,
    ColumnMultiset,
};
use crate::gd::{eliminations_from_kp, structure_ok, GdContext};
use crate::jet::{JetMonomial, JetPolynomial, JetVariable};
use crate::kp::{b_coeff, b_coeff_xi, ds_eta, parity_ok, xi_to_eta, KpTable};
use crate::poly::Monomial;
use crate::rational::Rational;
use crate::witten::{
    admissibility, correlator, genus0_small_phase, string_residual, witten_coefficient, witten_truncation,
    CorrelatorKey,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small_rational(rng: &mut StdRng) -> Rational {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=6);
    Rational::new(num, den)
}

fn random_jet_poly(rng: &mut StdRng) -> JetPolynomial {
    let mut p = JetPolynomial::zero();
    for _ in 0..rng.gen_range(0..=6) {
        let deg = rng.gen_range(0..=3);
        let m =
            JetMonomial::from_factors((0..deg).map(|_| JetVariable::new(rng.gen_range(1..=4), rng.gen_range(0..=4))));
        p.add_term(m, small_rational(rng));
    }
    p
}

fn exact_core(rng: &mut StdRng) -> Check {
    for _ in 0..200 {
        let (p, q) = (random_jet_poly(rng), random_jet_poly(rng));
        let lhs = p.mul(&q).d1();
        let rhs = &p.d1().mul(&q) + &p.mul(&q.d1());
        ensure(lhs == rhs, || format!("Leibniz fails for {p:?} * {q:?}"))?;
        for (m1, _) in p.iter() {
            for (m2, _) in q.iter() {
                let m = m1.mul(m2);
                ensure(m.weight() == m1.weight() + m2.weight(), || format!("weight of {m:?}"))?;
                let again = JetMonomial::from_factors(m.factors().iter().copied());
                ensure(again == m && m.is_canonical(), || format!("canonical form of {m:?}"))?;
            }
        }
        let c = small_rational(rng) * Rational::from_int(rng.gen_range(1i64..=1 << 40));
        let json = serde_json::to_string(&c).map_err(|e| e.to_string())?;
        let back: Rational = serde_json::from_str(&json).map_err(|e| e.to_string())?;
        ensure(back == c, || format!("rational round trip {c} -> {json}"))?;
    }
    Ok("200 random cases".into())
}

fn padding_identity(rng: &mut StdRng, instances: usize) -> Check {
    let mut vanishing = 0;
    for _ in 0..instances {
        let s = rng.gen_range(1..=12);
        let m = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let active: Vec<Column> = (0..m).map(|_| Column::new(rng.gen_range(1..=5), rng.gen_range(1..=4))).collect();
        let padding: Vec<Column> = (0..k).map(|_| Column::new(rng.gen_range(1..=6), 0)).collect();
        let (lhs, rhs) = padding_identity_sides(s, &active, &padding);
        if rhs.is_zero() {
            vanishing += 1;
        }
        ensure(lhs == rhs, || format!("s={s} active={active:?} padding={padding:?}: {lhs} != {rhs}"))?;
    }
    Ok(format!("{instances} instances ({vanishing} in the vanishing branch)"))
}

fn p_structure(rng: &mut StdRng) -> Check {
    for _ in 0..200 {
        let s = rng.gen_range(1..=10);
        let len = rng.gen_range(1..=4usize);
        let cols: Vec<Column> = (0..len).map(|_| Column::new(rng.gen_range(1..=3), rng.gen_range(0..=3))).collect();
        let p = p_coeff(s, &ColumnMatrix::new(cols.clone()));
        ensure((factorial(len as u32) % p.denom()) == 0.into(), || format!("denominator of P_{s}{cols:?} = {p}"))?;
        let ms = ColumnMultiset::new(cols.clone());
        let sym = p_coeff_sym(s, &ms);
        ensure(sym == p_coeff_sym_by_orderings(s, &ms), || format!("orbit sum P_{s}{cols:?}"))?;
        let mut shuffled = cols.clone();
        shuffled.reverse();
        ensure(p_coeff_sym(s, &ColumnMultiset::new(shuffled)) == sym, || format!("representation of {cols:?}"))?;
    }
    Ok("200 random matrices".into())
}

fn kp_suites(max_weight: u32) -> Vec<(&'static str, Check)> {
    let w = max_weight.min(12);
    let table = KpTable::built(w);
    let mut out = Vec::new();

    out.push((
        "kp symmetry",
        (|| {
            for total in 3..=w {
                for i in 2..total - 1 {
                    let j = total - i;
                    let other = table.kp_route(i, j).map_err(|e| e.to_string())?;
                    ensure(other == table.kp_equation(i, j).unwrap(), || format!("({i},{j})"))?;
                }
            }
            Ok(format!("i+j <= {w}"))
        })(),
    ));

    out.push((
        "kp leading coefficient",
        (|| {
            for total in 4..=w {
                for i in 2..=total / 2 {
                    let j = total - i;
                    let lead = table.kp_equation(i, j).unwrap().coeff(&Monomial::var(JetVariable::new(i + j - 1, 1)));
                    let want = Rational::new((i * j) as i64, (i + j - 1) as i64);
                    ensure(lead == want, || format!("({i},{j}): {lead} != {want}"))?;
                }
            }
            Ok(format!("2 <= i <= j, i+j <= {w}"))
        })(),
    ));

    out.push((
        "kp parity",
        (|| {
            let mut monomials = 0;
            for ((i, j), p) in table.equations() {
                for m in p.terms().keys() {
                    monomials += 1;
                    ensure(parity_ok(m), || format!("odd monomial {m:?} in ({i},{j})"))?;
                }
            }
            Ok(format!("{monomials} monomials"))
        })(),
    ));

    out.push((
        "kp flow compatibility",
        (|| {
            let bound = w.min(10);
            let mut triples = 0;
            for i in 1..=bound {
                for j in i..=bound {
                    for k in j..=bound {
                        if i + j + k > bound {
                            continue;
                        }
                        triples += 1;
                        let a = table.flow(&table.kp_equation(i, j).unwrap(), k).map_err(|e| e.to_string())?;
                        let b = table.flow(&table.kp_equation(i, k).unwrap(), j).map_err(|e| e.to_string())?;
                        ensure(a == b, || format!("({i},{j},{k})"))?;
                    }
                }
            }
            Ok(format!("{triples} triples, i+j+k <= {bound}"))
        })(),
    ));

    out.push((
        "b cross-oracle",
        (|| {
            let bound = w.min(8);
            for s in 2..=bound {
                for t in 2..=s {
                    let xi = b_coeff_xi(s, t).map_err(|e| e.to_string())?;
                    ensure(xi_to_eta(&xi) == b_coeff(s, t).unwrap(), || format!("B_{s}^{t}"))?;
                }
            }
            Ok(format!("s <= {bound}"))
        })(),
    ));

    out.push((
        "ds_eta consistency",
        (|| {
            let bound = w.min(10);
            for r in 1..bound {
                for s in 2..=bound - r {
                    let via_p = table.substitute_eta(&ds_eta(s, r)).map_err(|e| e.to_string())?;
                    let via_flow = table.flow(&table.eta_form(r).unwrap(), s).map_err(|e| e.to_string())?;
                    ensure(via_p == via_flow, || format!("d_{s} eta_{r}"))?;
                }
            }
            Ok(format!("s+r <= {bound}"))
        })(),
    ));

    out.push((
        "eta recurrence",
        (|| {
            for r in 1..=w {
                let rec = table.eta_by_recurrence(r).map_err(|e| e.to_string())?;
                ensure(rec == table.eta_form(r).unwrap(), || format!("eta_{r}"))?;
            }
            Ok(format!("r <= {w}"))
        })(),
    ));
    out
}

/// Sorted index tuples of length k with sum ≤ `bound`.
fn tuples(k: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, min: u32, budget: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        let left = (k - acc.len()) as u32;
        let mut i = min;
        while i * left <= budget {
            acc.push(i);
            rec(k, i, budget - i, acc, out);
            acc.pop();
            i += 1;
        }
    }
    let mut out = Vec::new();
    rec(k, 1, bound, &mut Vec::new(), &mut out);
    out
}

/// Structural constraints (s < n, Σt ≥ m+k−2, parity) on every equation with 2 ≤ k ≤ `k_max` indices and
/// Σi ≤ `bound`; returns the number of equations checked.
pub fn gd_structure(ctx: &mut GdContext, k_max: usize, bound: u32) -> std::result::Result<usize, String> {
    let n = ctx.n();
    let mut count = 0;
    for k in 2..=k_max {
        for idx in tuples(k, bound) {
            let eq = ctx.gd_equation(&idx).map_err(|e| e.to_string())?;
            let total: u32 = idx.iter().sum();
            for m in eq.terms().keys() {
                ensure(m.weight() == total && structure_ok(n, k, m), || format!("n={n} {idx:?}: monomial {m:?}"))?;
            }
            count += 1;
        }
    }
    Ok(count)
}

fn gd_suites(max_weight: u32, rng: &mut StdRng) -> Vec<(&'static str, Check)> {
    let mut out = Vec::new();
    out.push((
        "gd structure",
        (|| {
            let mut total = 0;
            for n in 2..=5 {
                let mut ctx = GdContext::new(n).map_err(|e| e.to_string())?;
                total += gd_structure(&mut ctx, 3, max_weight.min(4 * (n + 1)))?;
            }
            Ok(format!("{total} equations, n = 2..5, k <= 3"))
        })(),
    ));

    out.push((
        "gd order independence",
        (|| {
            for _ in 0..24 {
                let n = rng.gen_range(2..=5);
                let k = rng.gen_range(3..=4);
                let bound = max_weight.min(14);
                let mut idx: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=bound / k as u32)).collect();
                let mut ctx = GdContext::new(n).map_err(|e| e.to_string())?;
                let a = ctx.gd_equation_in_order(&idx).map_err(|e| e.to_string())?;
                idx.rotate_left(1);
                let b = ctx.gd_equation_in_order(&idx).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("n={n} {idx:?}"))?;
            }
            Ok("24 random multisets".into())
        })(),
    ));

    out.push((
        "gd normalize",
        (|| {
            for n in 2..=5 {
                let mut ctx = GdContext::new(n).map_err(|e| e.to_string())?;
                for _ in 0..20 {
                    let s = rng.gen_range(1..=n + 4);
                    let t = rng.gen_range(1..=4);
                    let p = ctx.gd_normalize(&JetPolynomial::var(JetVariable::new(s, t))).map_err(|e| e.to_string())?;
                    let again = ctx.gd_normalize(&p).map_err(|e| e.to_string())?;
                    ensure(again == p && p.homogeneous_weight().is_none_or(|w| w == s + t), || {
                        format!("n={n} u_{s},{t}")
                    })?;
                }
            }
            Ok("80 random variables".into())
        })(),
    ));

    out.push((
        "gd literal route",
        (|| {
            let w = max_weight.min(12);
            let kp = KpTable::built(w);
            for n in 2..=5 {
                let mut ctx = GdContext::new(n).map_err(|e| e.to_string())?;
                let r_max = w.saturating_sub(n + 1);
                let literal = eliminations_from_kp(n, &kp, r_max).map_err(|e| e.to_string())?;
                for (r, p) in literal {
                    ensure(ctx.elimination_rule(r).map_err(|e| e.to_string())? == p, || format!("n={n} rule {r}"))?;
                }
            }
            Ok(format!("elimination rules through weight {w}"))
        })(),
    ));

    out.push((
        "kdv even flows",
        (|| {
            let mut ctx = GdContext::new(2).map_err(|e| e.to_string())?;
            for a in 1..=8 {
                for b in a..=8 {
                    if a % 2 == 0 || b % 2 == 0 {
                        let eq = ctx.gd_equation(&[a, b]).map_err(|e| e.to_string())?;
                        ensure(eq.is_zero(), || format!("({a},{b})"))?;
                    }
                }
            }
            Ok("flow indices <= 8".into())
        })(),
    ));
    out
}

fn witten_suites(rng: &mut StdRng) -> Vec<(&'static str, Check)> {
    let mut out = Vec::new();
    out.push((
        "witten selection rules",
        (|| {
            let mut ctx = [2, 3, 4].map(|n| GdContext::new(n).unwrap());
            for _ in 0..100 {
                let which = rng.gen_range(0..3);
                let n = ctx[which].n();
                let k = rng.gen_range(2..=4);
                let idx: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=8)).collect();
                if admissibility(n, &idx).is_none() {
                    let f = witten_coefficient(&mut ctx[which], &idx).map_err(|e| e.to_string())?;
                    ensure(f.is_zero(), || format!("n={n} {idx:?} gives {f}"))?;
                }
            }
            Ok("100 random keys".into())
        })(),
    ));

    out.push((
        "witten string equation",
        (|| {
            for n in 2..=4 {
                let mut ctx = GdContext::new(n).map_err(|e| e.to_string())?;
                for series in witten_truncation(&mut ctx, 1, 5).map_err(|e| e.to_string())? {
                    series.check_genus().map_err(|e| e.to_string())?;
                    let r = string_residual(&series, 4).map_err(|e| e.to_string())?;
                    ensure(r.terms.is_zero(), || format!("n={n} genus {:?}: {:?}", series.genus, r.terms))?;
                }
            }
            Ok("n = 2..4, g <= 1, k <= 5, factor strata 2..4".into())
        })(),
    ));

    out.push((
        "witten small phase",
        (|| {
            for n in 2..=4 {
                let mut ctx = GdContext::new(n).map_err(|e| e.to_string())?;
                let direct = genus0_small_phase(&mut ctx).map_err(|e| e.to_string())?;
                let trunc = witten_truncation(&mut ctx, 0, n + 1).map_err(|e| e.to_string())?;
                ensure(direct.terms == trunc[0].restrict_small_phase().terms, || format!("n={n}"))?;
            }
            Ok("n = 2..4".into())
        })(),
    ));

    out.push((
        "correlator sign",
        (|| {
            let mut ctx = GdContext::new(2).map_err(|e| e.to_string())?;
            let key = |ins: &[(u32, u32)]| CorrelatorKey { n: 2, genus: 0, insertions: ins.to_vec() };
            let a = correlator(&mut ctx, &key(&[(1, 0); 3])).map_err(|e| e.to_string())?;
            let b = correlator(&mut ctx, &key(&[(1, 0), (1, 0), (1, 0), (1, 1)])).map_err(|e| e.to_string())?;
            ensure(a.frozen == Rational::one() && b.frozen == Rational::one(), || {
                format!("<t0^3> = {}, <t0^3 t1> = {}", a.frozen, b.frozen)
            })?;
            Ok("<tau_0^3>_0 = <tau_0^3 tau_1>_0 = 1".into())
        })(),
    ));
    out
}

/// Runs every suite. `max_weight` caps the weight-indexed suites at their
/// usual bounds.
pub fn run_all(max_weight: u32, seed: u64) -> Vec<Outcome> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut results: Vec<(&'static str, Check)> = vec![
        ("exact core", exact_core(&mut rng)),
        ("padding identity", padding_identity(&mut rng, 500)),
        ("P coefficients", p_structure(&mut rng)),
    ];
    results.extend(kp_suites(max_weight));
    results.extend(gd_suites(max_weight, &mut rng));
    results.extend(witten_suites(&mut rng));
    results
        .into_iter()
        .map(|(name, r)| match r {
            Ok(detail) => Outcome { name, passed: true, detail },
            Err(detail) => Outcome { name, passed: false, detail },
        })
        .collect()
}
