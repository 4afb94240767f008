use super::{Expr, Term};
use crate::error::SymbolicError;

/// Finds a bound label with a delta partner other than itself.
fn removable(t: &Term) -> Option<(usize, String, bool)> {
    for (idx, d) in t.deltas.iter().enumerate() {
        if d.lhs == d.rhs {
            continue;
        }
        if t.bound.contains(&d.rhs) {
            return Some((idx, d.rhs.clone(), false));
        }
        if t.bound.contains(&d.lhs) {
            return Some((idx, d.lhs.clone(), true));
        }
    }
    None
}

/// Eliminates bound labels through `∫dq δ(k-q) f(q) = f(k)`.
///
/// With `∂^α_u δ(u - v)` stored on the lhs label `u`:
/// sifting over `v` gives `(∂^α f)(u)`, sifting over `u` gives
/// `(-1)^|α| (∂^α f)(v)`.
pub fn apply_sifting(e: &Expr) -> Result<Expr, SymbolicError> {
    let mut work: Vec<Term> = e.terms().to_vec();
    let mut done = Vec::new();
    while let Some(t) = work.pop() {
        let Some((idx, var, var_is_lhs)) = removable(&t) else {
            done.push(t);
            continue;
        };
        let mut rest = t.clone();
        let delta = rest.deltas.remove(idx);
        let partner = if var_is_lhs { delta.rhs.clone() } else { delta.lhs.clone() };
        rest.bound.retain(|b| b != &var);
        if var_is_lhs && delta.deriv.is_odd() {
            rest.coeff = -rest.coeff;
        }
        let mut layer = vec![rest];
        for axis in delta.deriv.axes() {
            layer = layer
                .iter()
                .flat_map(|x| x.derivative(&var, axis))
                .collect();
        }
        for mut x in layer {
            x.rename(&var, &partner);
            work.push(x);
        }
    }
    Expr::from_terms(done)
}
