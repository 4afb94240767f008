use num_traits::{One, Signed, Zero};

use crate::expr::{Expr, KernelKind, Label, MultiIndex, Term};
use crate::scalar::{fmt_q, Scalar};

fn axes(m: &MultiIndex) -> String {
    let list: Vec<String> = m.axes().iter().map(|a| a.to_string()).collect();
    format!("[{}]", list.join(","))
}

fn label(l: &Label) -> &str {
    match l {
        Label::Discrete => ".",
        Label::Named(s) => s,
    }
}

/// Splits a coefficient into (negative?, rendered magnitude or None for 1).
fn coefficient(c: &Scalar) -> (bool, Option<String>) {
    let (re, im) = (c.re, c.im);
    if im.is_zero() {
        let neg = re.is_negative();
        let mag = re.abs();
        (neg, (!mag.is_one()).then(|| fmt_q(&mag)))
    } else if re.is_zero() {
        let neg = im.is_negative();
        let mag = im.abs();
        let s = if mag.is_one() {
            "i".to_string()
        } else {
            format!("{}i", fmt_q(&mag))
        };
        (neg, Some(s))
    } else {
        let sign = if im.is_negative() { "-" } else { "+" };
        (
            false,
            Some(format!("({}{}{}i)", fmt_q(&re), sign, fmt_q(&im.abs()))),
        )
    }
}

fn render_term(t: &Term) -> (bool, String) {
    let mut parts: Vec<String> = Vec::new();
    for b in &t.bound {
        parts.push(format!("int({b})"));
    }
    let (neg, mag) = coefficient(&t.coeff);
    let has_factors =
        !t.coeff.atoms.is_one() || !t.kernels.is_empty() || !t.deltas.is_empty() || !t.ops.is_empty();
    match mag {
        Some(m) => parts.push(m),
        None if !has_factors => parts.push("1".into()),
        None => {}
    }
    for (name, e) in t.coeff.atoms.iter() {
        if e == 1 {
            parts.push(format!("${name}"));
        } else {
            parts.push(format!("${name}^{e}"));
        }
    }
    for k in &t.kernels {
        let (base, e) = match k.kind {
            KernelKind::Component { axis, power } => (format!("k[{axis}]({})", k.label), power),
            KernelKind::Energy { species, exponent } => {
                (format!("w_{species}({})", k.label), exponent)
            }
        };
        if e == 1 {
            parts.push(base);
        } else {
            parts.push(format!("{base}^{e}"));
        }
    }
    for d in &t.deltas {
        if d.deriv.is_zero() {
            parts.push(format!("delta({},{})", d.lhs, d.rhs));
        } else {
            parts.push(format!("delta({},{})'{}", d.lhs, d.rhs, axes(&d.deriv)));
        }
    }
    for o in &t.ops {
        let dag = if o.dagger { "+" } else { "" };
        if o.deriv.is_zero() {
            parts.push(format!("a{dag}_{}({})", o.species, label(&o.label)));
        } else {
            parts.push(format!(
                "da{dag}_{}{}({})",
                o.species,
                axes(&o.deriv),
                label(&o.label)
            ));
        }
    }
    (neg, parts.join(" "))
}

/// Deterministic text form; `parse(render(e)) == e` for canonical `e`.
pub fn render(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in e.terms().iter().enumerate() {
        let (neg, body) = render_term(t);
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}
