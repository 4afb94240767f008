//! Normal ordering under the bosonic CCR, brackets and formal derivatives.

use crate::error::SymbolicError;
use crate::expr::{DeltaFactor, Expr, Label, Term};

/// Index of the first annihilator immediately followed by a creator.
fn first_inversion(t: &Term) -> Option<usize> {
    t.ops
        .windows(2)
        .position(|w| !w[0].dagger && w[1].dagger)
}

/// Rewrites `∂^α a_μ(x) ∂^β a_ν⁺(y) → ∂^β a_ν⁺(y) ∂^α a_μ(x) + δ_μν ∂^α_x ∂^β_y δ(x - y)`
/// until every creator stands left of every annihilator.
pub fn normal_order(e: &Expr) -> Result<Expr, SymbolicError> {
    let mut work: Vec<Term> = e.terms().to_vec();
    let mut done = Vec::new();
    while let Some(mut t) = work.pop() {
        let Some(i) = first_inversion(&t) else {
            done.push(t);
            continue;
        };
        let (ann, cre) = (t.ops[i].clone(), t.ops[i + 1].clone());
        if ann.species == cre.species {
            let mut c = t.clone();
            c.ops.drain(i..=i + 1);
            match (&ann.label, &cre.label) {
                (Label::Named(x), Label::Named(y)) => {
                    // ∂^β_y δ(x - y) = (-1)^|β| ∂^β_x δ(x - y)
                    if cre.deriv.is_odd() {
                        c.coeff = -c.coeff;
                    }
                    c.deltas.push(DeltaFactor {
                        lhs: x.clone(),
                        rhs: y.clone(),
                        deriv: ann.deriv.plus(cre.deriv),
                    });
                }
                (Label::Discrete, Label::Discrete) => {}
                _ => return Err(SymbolicError::MixedModes),
            }
            work.push(c);
        }
        t.ops.swap(i, i + 1);
        work.push(t);
    }
    Expr::from_terms(done)
}

/// `normal_order(e1 e2 + sign · e2 e1)`; `sign = -1` is the commutator.
pub fn bracket(e1: &Expr, e2: &Expr, sign: i32) -> Result<Expr, SymbolicError> {
    assert!(sign == 1 || sign == -1, "bracket sign must be ±1");
    let ab = e1.mul(e2)?;
    let ba = e2.mul(e1)?;
    let sum = if sign == 1 { ab.add(&ba) } else { ab.sub(&ba) };
    normal_order(&sum)
}

pub fn commutator(e1: &Expr, e2: &Expr) -> Result<Expr, SymbolicError> {
    bracket(e1, e2, -1)
}

/// Product-rule derivative `∂/∂label_axis`; the label must not be bound.
pub fn formal_derivative(e: &Expr, label: &str, axis: u8) -> Result<Expr, SymbolicError> {
    if !(1..=3).contains(&axis) {
        return Err(SymbolicError::AxisOutOfRange { axis, dim: 3 });
    }
    if e.terms().iter().any(|t| t.bound.iter().any(|b| b == label)) {
        return Err(SymbolicError::LabelNotFree(label.to_string()));
    }
    let terms = e
        .terms()
        .iter()
        .flat_map(|t| t.derivative(label, axis))
        .collect();
    Expr::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::exprs_equal;
    use crate::parser::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn same_species_contraction() {
        let e = normal_order(&p("a_1(k) a+_1(k')")).unwrap();
        assert_eq!(e, p("a+_1(k') a_1(k) + delta(k,k')"));
    }

    #[test]
    fn cross_species_swap_only() {
        let e = normal_order(&p("a_1(k) a+_2(k')")).unwrap();
        assert_eq!(e, p("a+_2(k') a_1(k)"));
    }

    #[test]
    fn derivative_contraction() {
        let e = normal_order(&p("da_1[2](k) a+_1(k')")).unwrap();
        assert_eq!(e, p("a+_1(k') da_1[2](k) + delta(k,k')'[2]"));
        // derivative on the creator picks up a sign
        let e = normal_order(&p("a_1(k) da+_1[2](k')")).unwrap();
        assert_eq!(e, p("da+_1[2](k') a_1(k) - delta(k,k')'[2]"));
    }

    #[test]
    fn discrete_contraction() {
        let e = normal_order(&p("a_2(.) a+_2(.)")).unwrap();
        assert_eq!(e, p("a+_2(.) a_2(.) + 1"));
    }

    #[test]
    fn idempotent() {
        let once = normal_order(&p("a_1(k) a_2(q) a+_1(q') a+_2(k')")).unwrap();
        assert_eq!(normal_order(&once).unwrap(), once);
    }

    #[test]
    fn ccr_bracket() {
        assert_eq!(bracket(&p("a_1(k)"), &p("a+_1(k')"), -1).unwrap(), p("delta(k,k')"));
    }

    #[test]
    fn unitary_bracket() {
        let lhs = bracket(&p("E_1^1(k,k')"), &p("E_1^1(q,q')"), -1).unwrap();
        let rhs = p("delta(k,q') E_1^1(q,k') - delta(k',q) E_1^1(k,q')");
        assert!(exprs_equal(&normal_order(&rhs).unwrap(), &lhs), "{lhs}");
    }

    #[test]
    fn self_bracket_vanishes() {
        let e = p("E_1^2(k,k') + 2 Elow_{12}(k,q)");
        assert!(bracket(&e, &e, -1).unwrap().is_zero());
    }

    #[test]
    fn derivative_of_bilinear() {
        let d = formal_derivative(&p("E_1^2(k,k')"), "k", 3).unwrap();
        let expect = p("1/2 da_1[3](k) a+_2(k') + 1/2 a+_2(k') da_1[3](k)");
        assert_eq!(d, expect);
    }

    #[test]
    fn derivative_of_energy() {
        let d = formal_derivative(&p("w_1(k)"), "k", 2).unwrap();
        assert_eq!(d, p("k[2](k) w_1(k)^-1"));
    }

    #[test]
    fn derivative_of_bound_label_rejected() {
        let e = p("int(q) delta(k,q) a_1(q)");
        let err = formal_derivative(&e, "b1", 1).unwrap_err();
        assert_eq!(err, SymbolicError::LabelNotFree("b1".into()));
    }
}
