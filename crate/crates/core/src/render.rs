//! Text and LaTeX rendering of equations and series.
//!
//! Text: `dK` is ∂_{x_K}, powers of `d1` are repeated ∂₁, so u_{3,1} prints as
//! `d3 d1 v` and u_{1,3} as `d1^4 v`. LaTeX follows the same shapes with ∂₁
//! written as a bare `\partial`.

use std::cmp::{Ordering, Reverse};

use crate::jet::{JetMonomial, JetPolynomial, JetVariable};
use crate::rational::Rational;
use crate::witten::{XMonomial, XPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

/// Display order: fewer factors first, then descending leading s, then
/// descending leading t; remaining ties by the factors, largest first.
pub fn display_order(a: &JetMonomial, b: &JetMonomial) -> Ordering {
    let key = |m: &JetMonomial| {
        let lead = m.factors().last().copied().unwrap_or(JetVariable { s: 0, t: 0 });
        (m.degree(), Reverse(lead.s), Reverse(lead.t))
    };
    key(a).cmp(&key(b)).then_with(|| {
        let fa = a.factors().iter().rev();
        let fb = b.factors().iter().rev();
        fb.cmp(fa)
    })
}

fn partials(counts: &[(u32, u32)], style: Style) -> String {
    // counts: (index, multiplicity), already ordered for display
    let mut parts = Vec::new();
    for &(i, e) in counts {
        let base = match (style, i) {
            (Style::Text, _) => format!("d{i}"),
            (Style::Latex, 1) => "\\partial".to_string(),
            (Style::Latex, _) if i < 10 => format!("\\partial_{i}"),
            (Style::Latex, _) => format!("\\partial_{{{i}}}"),
        };
        parts.push(if e == 1 { base } else { format!("{base}^{}", braces(e, style)) });
    }
    parts.join(" ")
}

fn braces(e: u32, style: Style) -> String {
    if style == Style::Latex && e >= 10 {
        format!("{{{e}}}")
    } else {
        e.to_string()
    }
}

pub fn jet_variable(v: JetVariable, style: Style) -> String {
    let counts: Vec<(u32, u32)> = if v.s == 1 {
        vec![(1, v.t + 1)]
    } else if v.t == 0 {
        vec![(v.s, 1)]
    } else {
        vec![(v.s, 1), (1, v.t)]
    };
    format!("{} v", partials(&counts, style))
}

/// ∂_{i₁}⋯∂_{i_k} v with repeated indices collected, largest index first.
pub fn derivative_lhs(indices: &[u32], style: Style) -> String {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut counts: Vec<(u32, u32)> = Vec::new();
    for i in sorted {
        match counts.last_mut() {
            Some((j, e)) if *j == i => *e += 1,
            _ => counts.push((i, 1)),
        }
    }
    format!("{} v", partials(&counts, style))
}

fn jet_monomial(m: &JetMonomial, style: Style) -> String {
    let groups = m.grouped();
    if groups.len() == 1 && groups[0].1 == 1 {
        return jet_variable(groups[0].0, style);
    }
    let mut ordered = groups;
    ordered.sort_by(|a, b| b.0.s.cmp(&a.0.s).then(b.0.t.cmp(&a.0.t)));
    let parts: Vec<String> = ordered
        .into_iter()
        .map(|(v, e)| {
            let f = jet_variable(v, style);
            match (e, style) {
                (1, _) => f,
                (_, Style::Text) => format!("({f})^{e}"),
                (_, Style::Latex) => format!("({f})^{}", braces(e as u32, style)),
            }
        })
        .collect();
    parts.join(" ")
}

fn coefficient(c: &Rational, style: Style) -> String {
    match style {
        Style::Text => c.to_string(),
        Style::Latex => {
            if c.is_integer() {
                c.to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
            }
        }
    }
}

/// Joins signed terms as `a - b + c`, with a leading `-` when needed.
fn join_terms(terms: impl Iterator<Item = (Rational, Option<String>)>, style: Style) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match body {
            None => out.push_str(&coefficient(&mag, style)),
            Some(b) if mag.is_one() => out.push_str(&b),
            Some(b) => {
                out.push_str(&coefficient(&mag, style));
                out.push(' ');
                out.push_str(&b);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn jet_polynomial(p: &JetPolynomial, style: Style) -> String {
    let mut terms: Vec<(&JetMonomial, &Rational)> = p.iter().collect();
    terms.sort_by(|a, b| display_order(a.0, b.0));
    join_terms(terms.into_iter().map(|(m, c)| (c.clone(), (!m.is_one()).then(|| jet_monomial(m, style)))), style)
}

pub fn equation(indices: &[u32], rhs: &JetPolynomial, style: Style) -> String {
    format!("{} = {}", derivative_lhs(indices, style), jet_polynomial(rhs, style))
}

fn x_monomial(m: &XMonomial, style: Style) -> String {
    m.grouped()
        .into_iter()
        .map(|(x, e)| {
            let base = match style {
                Style::Text => format!("x{}", x.0),
                Style::Latex => format!("x_{{{}}}", x.0),
            };
            if e == 1 {
                base
            } else {
                format!("{base}^{}", braces(e as u32, style))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Series terms by factor count, then ascending indices.
pub fn x_polynomial(p: &XPolynomial, style: Style) -> String {
    let mut terms: Vec<_> = p.iter().collect();
    terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.cmp(b.0)));
    join_terms(terms.into_iter().map(|(m, c)| (c.clone(), (!m.is_one()).then(|| x_monomial(m, style)))), style)
}

pub fn rational(c: &Rational, style: Style) -> String {
    let s = coefficient(&c.abs(), style);
    if c.is_negative() {
        format!("-{s}")
    } else {
        s
    }
}
