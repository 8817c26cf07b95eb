//! Acceptance criteria 1–12, one line each.
//!
//! Criteria 1 and 2 compare against the equations exactly as printed in the
//! source. One printed coefficient (−3/2 on ∂₂∂³v, in both the KP and the n=4
//! lists) disagrees with the hierarchy; `tests/soliton.rs` shows the computed
//! −1/2 is right. Those two criteria are reported as FAIL and are listed in
//! `KNOWN_FAILURES`; the process exits nonzero if any other criterion fails,
//! or if a known failure starts passing.

use std::collections::{BTreeMap, BTreeSet};
use std::panic;
use std::process::Command;

use gdh_core::cache::Cache;
use gdh_core::combinatorics::{padding_identity_sides, Column};
use gdh_core::gd::GdContext;
use gdh_core::jet::JetVariable;
use gdh_core::kp::{b_coeff, b_coeff_xi, parity_ok, xi_to_eta, KpTable};
use gdh_core::poly::Monomial;
use gdh_core::render::{self, Style};
use gdh_core::selfcheck;
use gdh_core::witten::{
    correlator, genus0_small_phase, linear_stratum, string_residual, witten_truncation, CorrelatorKey, XMonomial,
    XPolynomial, XVar,
};
use gdh_core::{JetPolynomial, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const KNOWN_FAILURES: [u32; 2] = [1, 2];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn poly(terms: &[(&[(u32, u32)], Rational)]) -> JetPolynomial {
    JetPolynomial::from_terms(
        terms.iter().map(|(f, c)| (Monomial::from_factors(f.iter().map(|&(s, t)| JetVariable::new(s, t))), c.clone())),
    )
}

/// Coefficient-level differences, rendered for the report.
fn diff(label: &str, got: &JetPolynomial, want: &JetPolynomial) -> Vec<String> {
    let mut out = Vec::new();
    let keys: BTreeSet<_> = got.terms().keys().chain(want.terms().keys()).collect();
    for m in keys {
        let (a, b) = (got.coeff(m), want.coeff(m));
        if a != b {
            let shown = render::jet_polynomial(&JetPolynomial::term(m.clone(), Rational::one()), Style::Text);
            out.push(format!("{label}: [{shown}] computed {a}, printed {b}"));
        }
    }
    out
}

fn verdict(diffs: Vec<String>, ok: String) -> Outcome {
    if diffs.is_empty() {
        Ok(ok)
    } else {
        Err(diffs.join("; "))
    }
}

fn criterion_1() -> Outcome {
    let t = KpTable::built(6);
    let printed = [
        ((2, 2), poly(&[(&[(3, 1)], q(4, 3)), (&[(1, 3)], q(-1, 3)), (&[(1, 1), (1, 1)], q(2, 1))])),
        ((2, 3), poly(&[(&[(4, 1)], q(3, 2)), (&[(2, 3)], q(-3, 2)), (&[(2, 1), (1, 1)], q(3, 1))])),
        (
            (3, 3),
            poly(&[
                (&[(5, 1)], q(9, 5)),
                (&[(3, 3)], q(-1, 1)),
                (&[(1, 5)], q(1, 5)),
                (&[(3, 1), (1, 1)], q(3, 1)),
                (&[(2, 1), (2, 1)], q(9, 4)),
                (&[(1, 3), (1, 1)], q(-3, 1)),
                (&[(1, 2), (1, 2)], q(-9, 4)),
                (&[(1, 1), (1, 1), (1, 1)], q(3, 1)),
            ]),
        ),
    ];
    let mut diffs = Vec::new();
    for ((i, j), want) in printed {
        diffs.extend(diff(&format!("kp({i},{j})"), &t.kp_equation(i, j).unwrap(), &want));
    }
    verdict(diffs, "3 equations, all coefficients".into())
}

fn criterion_2() -> Outcome {
    let mut diffs = Vec::new();
    let mut n3 = GdContext::new(3).unwrap();
    let bous = poly(&[(&[(1, 3)], q(-1, 3)), (&[(1, 1), (1, 1)], q(2, 1))]);
    diffs.extend(diff("n=3 (2,2)", &n3.gd_equation(&[2, 2]).unwrap(), &bous));
    let mut n4 = GdContext::new(4).unwrap();
    let printed = [
        (vec![2, 2], poly(&[(&[(3, 1)], q(4, 3)), (&[(1, 3)], q(-1, 3)), (&[(1, 1), (1, 1)], q(2, 1))])),
        (vec![2, 3], poly(&[(&[(2, 3)], q(-3, 2)), (&[(2, 1), (1, 1)], q(3, 1))])),
        (
            vec![3, 3],
            poly(&[
                (&[(3, 3)], q(-1, 4)),
                (&[(1, 5)], q(1, 8)),
                (&[(2, 1), (2, 1)], q(9, 8)),
                (&[(1, 2), (1, 2)], q(-9, 8)),
                (&[(1, 3), (1, 1)], q(-9, 4)),
                (&[(1, 1), (1, 1), (1, 1)], q(3, 1)),
            ]),
        ),
    ];
    for (idx, want) in printed {
        diffs.extend(diff(&format!("n=4 {idx:?}"), &n4.gd_equation(&idx).unwrap(), &want));
    }
    verdict(diffs, "Boussinesq and 3 equations for n=4".into())
}

fn criterion_3() -> Outcome {
    let t = KpTable::built(12);
    let mut count = 0;
    for i in 2..=6 {
        for j in i..=12 - i {
            let got = t.kp_equation(i, j).unwrap().coeff(&Monomial::var(JetVariable::new(i + j - 1, 1)));
            let want = q((i * j) as i64, (i + j - 1) as i64);
            if got != want {
                return Err(format!("({i},{j}): {got} != {want}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} pairs"))
}

fn criterion_4() -> Outcome {
    let t = KpTable::built(12);
    let mut monomials = 0;
    for (&(i, j), eq) in t.equations() {
        if i + j > 12 {
            continue;
        }
        for m in eq.terms().keys() {
            // independent restatement: Σ(t+1) even
            let total: u32 = m.factors().iter().map(|v| v.t + 1).sum();
            if total % 2 == 1 || !parity_ok(m) {
                return Err(format!("odd monomial {m:?} in ({i},{j})"));
            }
            monomials += 1;
        }
    }
    Ok(format!("{monomials} monomials, {} equations", t.equations().len()))
}

fn criterion_5() -> Outcome {
    let mut total = 0;
    for n in 2..=5 {
        let mut ctx = GdContext::new(n).map_err(|e| e.to_string())?;
        total += selfcheck::gd_structure(&mut ctx, 4, 4 * (n + 1))?;
    }
    Ok(format!("{total} equations (n = 2..5, k <= 4, sum <= 4(n+1))"))
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6c656d);
    for case in 0..500 {
        let s = rng.gen_range(1..=12);
        let m = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let active: Vec<Column> = (0..m).map(|_| Column::new(rng.gen_range(1..=5), rng.gen_range(1..=4))).collect();
        let padding: Vec<Column> = (0..k).map(|_| Column::new(rng.gen_range(1..=6), 0)).collect();
        let (lhs, rhs) = padding_identity_sides(s, &active, &padding);
        if lhs != rhs {
            return Err(format!("case {case}: s={s} {active:?} {padding:?}: {lhs} != {rhs}"));
        }
    }
    Ok("500 instances".into())
}

fn permutations(v: &[u32]) -> Vec<Vec<u32>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let t = KpTable::built(10);
    let mut triples = 0;
    for i in 1..=8 {
        for j in i..=8 {
            for k in j..=8 {
                if i + j + k > 10 {
                    continue;
                }
                triples += 1;
                let a = t.flow(&t.kp_equation(i, j).unwrap(), k).unwrap();
                let b = t.flow(&t.kp_equation(i, k).unwrap(), j).unwrap();
                let c = t.flow(&t.kp_equation(j, k).unwrap(), i).unwrap();
                if a != b || a != c {
                    return Err(format!("kp ({i},{j},{k})"));
                }
                for n in 2..=5 {
                    let mut ctx = GdContext::new(n).unwrap();
                    let first = ctx.gd_equation_in_order(&[i, j, k]).unwrap();
                    for p in permutations(&[i, j, k]) {
                        if ctx.gd_equation_in_order(&p).unwrap() != first {
                            return Err(format!("n={n} order {p:?}"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{triples} triples; KP and n = 2..5"))
}

fn criterion_8() -> Outcome {
    let mut pairs = 0;
    for s in 2..=8 {
        for t in 2..=s {
            let raw = xi_to_eta(&b_coeff_xi(s, t).map_err(|e| e.to_string())?);
            if raw != b_coeff(s, t).unwrap() {
                return Err(format!("B_{s}^{t}"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} coefficients"))
}

fn criterion_9() -> Outcome {
    for n in 2..=4 {
        let mut ctx = GdContext::new(n).unwrap();
        for series in witten_truncation(&mut ctx, 1, 5).map_err(|e| e.to_string())? {
            let g = series.genus.unwrap();
            let with_linear = series.with_linear(&linear_stratum(&mut ctx, g).unwrap()).unwrap();
            let r = string_residual(&with_linear, 4).map_err(|e| e.to_string())?;
            if !r.terms.is_zero() {
                return Err(format!("n={n} genus {g}: residual {:?}", r.terms));
            }
        }
    }
    Ok("n = 2..4, g <= 1, k <= 5; factor strata through 4".into())
}

/// Intersection numbers ⟨τ_{d₁}⋯τ_{d_s}⟩_g on M̄_{g,s}, by the DVV recursion.
struct IntersectionOracle {
    memo: BTreeMap<(u32, Vec<u32>), Rational>,
}

fn odd_double_factorial(k: i64) -> Rational {
    // (2k−1)!! with (−1)!! = 1
    Rational::from_int((1..=k).map(|i| 2 * i - 1).product::<i64>().max(1))
}

impl IntersectionOracle {
    fn get(&mut self, g: u32, ds: &[i64]) -> Rational {
        if ds.iter().any(|&d| d < 0) {
            return Rational::zero();
        }
        let s = ds.len() as i64;
        let total: i64 = ds.iter().sum();
        if 2 * g as i64 - 2 + s <= 0 || total != 3 * g as i64 - 3 + s {
            return Rational::zero();
        }
        let mut key: Vec<u32> = ds.iter().map(|&d| d as u32).collect();
        key.sort_unstable();
        if let Some(v) = self.memo.get(&(g, key.clone())) {
            return v.clone();
        }
        let v = match (g, key.as_slice()) {
            (0, [0, 0, 0]) => Rational::one(),
            (1, [1]) => q(1, 24),
            _ => self.dvv(g, &key),
        };
        self.memo.insert((g, key), v.clone());
        v
    }

    fn dvv(&mut self, g: u32, key: &[u32]) -> Rational {
        let k = *key.last().unwrap() as i64;
        let rest: Vec<i64> = key[..key.len() - 1].iter().map(|&d| d as i64).collect();
        let mut acc = Rational::zero();
        for j in 0..rest.len() {
            let dj = rest[j];
            let mut others = rest.clone();
            others[j] = dj + k - 1;
            let c = odd_double_factorial(k + dj) / odd_double_factorial(dj);
            acc += c * self.get(g, &others);
        }
        for a in 0..=k - 2 {
            let b = k - 2 - a;
            let c = odd_double_factorial(a + 1) * odd_double_factorial(b + 1) * q(1, 2);
            if g >= 1 {
                let mut more = rest.clone();
                more.extend([a, b]);
                acc += c.clone() * self.get(g - 1, &more);
            }
            for mask in 0..(1u32 << rest.len()) {
                let mut left = vec![a];
                let mut right = vec![b];
                for (i, &d) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        left.push(d)
                    } else {
                        right.push(d)
                    }
                }
                for g1 in 0..=g {
                    acc += c.clone() * self.get(g1, &left) * self.get(g - g1, &right);
                }
            }
        }
        acc / odd_double_factorial(k + 1)
    }
}

fn multisets(len: usize, total: u32, max: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=max.min(total) {
        for mut rest in multisets(len - 1, total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn criterion_10() -> Outcome {
    let mut oracle = IntersectionOracle { memo: BTreeMap::new() };
    let mut ctx = GdContext::new(2).unwrap();
    let mut checked = 0;
    for (g, points) in [(0u32, 3..=7usize), (1, 2..=5), (2, 2..=3)] {
        for s in points {
            let total = 3 * g + s as u32 - 3;
            for ms in multisets(s, total, total) {
                let key = CorrelatorKey { n: 2, genus: g, insertions: ms.iter().map(|&m| (1, m)).collect() };
                let c = correlator(&mut ctx, &key).map_err(|e| e.to_string())?;
                let ds: Vec<i64> = ms.iter().map(|&m| m as i64).collect();
                let norm: Rational = ms.iter().map(|&m| odd_double_factorial(m as i64)).product();
                let want = oracle.get(g, &ds) * norm;
                if c.frozen.abs() != want {
                    return Err(format!("genus {g} {ms:?}: |{}| != {want}", c.frozen));
                }
                if c.frozen.is_negative() || c.literal != -&c.frozen {
                    return Err(format!("genus {g} {ms:?}: sign {} / {}", c.frozen, c.literal));
                }
                checked += 1;
            }
        }
    }
    let base = |ins: Vec<(u32, u32)>, ctx: &mut GdContext| {
        correlator(ctx, &CorrelatorKey { n: 2, genus: 0, insertions: ins }).unwrap().frozen
    };
    if base(vec![(1, 0); 3], &mut ctx) != Rational::one()
        || base(vec![(1, 0), (1, 0), (1, 0), (1, 1)], &mut ctx) != Rational::one()
    {
        return Err("<tau_0^3>_0 or <tau_0^3 tau_1>_0 != 1".into());
    }
    Ok(format!("{checked} correlators (genus 0 to 2); frozen sign positive throughout"))
}

fn criterion_11() -> Outcome {
    for n in 2..=4 {
        let mut ctx = GdContext::new(n).unwrap();
        let direct = genus0_small_phase(&mut ctx).map_err(|e| e.to_string())?;
        let trunc = witten_truncation(&mut ctx, 0, n + 1).map_err(|e| e.to_string())?;
        if direct.terms != trunc[0].restrict_small_phase().terms {
            return Err(format!("n={n}: {:?}", direct.terms));
        }
        if n == 3 {
            // ansatz W = a x1^2 x2 + b x2^4 (the only genus-0 monomials on x3 = 0).
            // String equation on x3 = 0: ∂₁W = ½Σ_{i+j=3} ij x_i x_j = 2 x1 x2, so 2a = 2.
            let a = Rational::one();
            // Boussinesq ∂₂²W = −⅓∂₁⁴W + 2(∂₁²W)²: 12b x2² = 2(2a x2)².
            let b = Rational::from_int(8) * a.clone() * a.clone() / Rational::from_int(12);
            let want = XPolynomial::from_terms([
                (XMonomial::from_factors([XVar(1), XVar(1), XVar(2)]), a),
                (XMonomial::from_factors([XVar(2); 4]), b),
            ]);
            if direct.terms != want {
                return Err(format!("n=3: {:?}", direct.terms));
            }
        }
    }
    Ok("n = 2..4; n=3 is x1^2 x2 + 2/3 x2^4".into())
}

fn gdh(args: &[&str], cache: Option<&std::path::Path>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gdh"));
    cmd.env_remove("GDH_CACHE").args(args);
    if let Some(dir) = cache {
        cmd.arg("--cache").arg(dir);
    }
    let out = cmd.output().expect("run gdh");
    assert!(out.status.success(), "gdh {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion_12() -> Outcome {
    let commands: [&[&str]; 7] = [
        &["kp", "--pair", "3,3"],
        &["kp", "--pair", "4,5", "--format", "latex"],
        &["gd", "--n", "4", "--indices", "3,3,2", "--format", "json"],
        &["gd", "--n", "3", "--indices", "2,2"],
        &["witten", "--n", "3", "--genus", "1", "--kmax", "4"],
        &["correlators", "--n", "2", "--genus", "0", "--insertions", "1:0,1:0,1:0"],
        &["correlators", "--n", "3", "--genus", "1", "--insertions", "1:1,2:0", "--format", "text"],
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for args in commands {
        let plain = gdh(args, None);
        let again = gdh(args, None);
        let cold = gdh(args, Some(dir.path()));
        let warm = gdh(args, Some(dir.path()));
        if plain != again || plain != cold || plain != warm {
            return Err(format!("output differs for {args:?}"));
        }
    }
    // build → persist → load → re-emit
    let cache = Cache::new(dir.path().join("roundtrip"));
    let (built, _) = cache.kp(10).map_err(|e| e.to_string())?;
    let loaded = cache.load_kp().map_err(|e| format!("{e:?}"))?;
    let emit = |t: &KpTable| -> Vec<String> {
        t.equations().iter().map(|(&(i, j), p)| render::equation(&[i, j], p, Style::Text)).collect()
    };
    if emit(&built) != emit(&loaded) {
        return Err("kp cache round trip".into());
    }
    let (mut ctx, _) = cache.gd(4, 14).map_err(|e| e.to_string())?;
    let mut back = cache.load_gd(4).map_err(|e| format!("{e:?}"))?;
    for a in 1..=7 {
        for b in a..=14 - a {
            let x = ctx.gd_equation(&[a, b]).unwrap();
            let y = back.gd_equation(&[a, b]).unwrap();
            if render::equation(&[a, b], &x, Style::Text) != render::equation(&[a, b], &y, Style::Text) {
                return Err(format!("gd cache round trip ({a},{b})"));
            }
        }
    }
    Ok(format!("{} commands x 4 runs; kp and gd caches round-trip", commands.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "KP ground truth", criterion_1),
        (2, "GD ground truth", criterion_2),
        (3, "leading-coefficient law", criterion_3),
        (4, "KP parity", criterion_4),
        (5, "GD structure", criterion_5),
        (6, "padding identity suite", criterion_6),
        (7, "flow compatibility", criterion_7),
        (8, "B cross-oracle", criterion_8),
        (9, "string equation", criterion_9),
        (10, "correlator oracle", criterion_10),
        (11, "small-phase identity", criterion_11),
        (12, "determinism and cache", criterion_12),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        let start = std::time::Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&id);
        match &outcome {
            Ok(detail) => println!("criterion {id:>2} {name}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                let tag = if known { " [known: printed misprint]" } else { "" };
                println!("criterion {id:>2} {name}: FAIL{tag} ({secs:.1}s) {detail}");
            }
        }
        if outcome.is_ok() == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
