use std::cmp::Ordering;

use super::{KernelFactor, Label, Term};
use crate::error::SymbolicError;

fn structural_cmp(a: &Term, b: &Term) -> Ordering {
    a.ops
        .cmp(&b.ops)
        .then_with(|| a.deltas.cmp(&b.deltas))
        .then_with(|| a.kernels.cmp(&b.kernels))
        .then_with(|| a.bound.cmp(&b.bound))
        .then_with(|| a.coeff.atoms.cmp(&b.coeff.atoms))
}

/// Orders kernels, orients deltas and sorts commuting operator runs.
fn normalize_structure(t: &mut Term) {
    t.kernels.sort_by(|x, y| {
        x.label
            .cmp(&y.label)
            .then_with(|| x.kind.base().cmp(&y.kind.base()))
    });
    let mut merged: Vec<KernelFactor> = Vec::with_capacity(t.kernels.len());
    for k in t.kernels.drain(..) {
        match merged.last_mut() {
            Some(last) if last.label == k.label && last.kind.base() == k.kind.base() => {
                let e = last.kind.exponent() + k.kind.exponent();
                last.kind = last.kind.with_exponent(e);
            }
            _ => merged.push(k),
        }
    }
    merged.retain(|k| k.kind.exponent() != 0);
    t.kernels = merged;

    for d in &mut t.deltas {
        if d.lhs > d.rhs {
            std::mem::swap(&mut d.lhs, &mut d.rhs);
            if d.deriv.is_odd() {
                t.coeff = -t.coeff.clone();
            }
        }
    }
    t.deltas.sort();

    // adjacent creators (or annihilators) commute exactly
    let mut start = 0;
    while start < t.ops.len() {
        let mut end = start + 1;
        while end < t.ops.len() && t.ops[end].dagger == t.ops[start].dagger {
            end += 1;
        }
        t.ops[start..end].sort();
        start = end;
    }
}

/// Full canonical form of a single term; `None` for a zero term.
pub(crate) fn canonicalize_term(mut t: Term) -> Result<Option<Term>, SymbolicError> {
    if t.coeff.is_zero() {
        return Ok(None);
    }
    let discrete = t.ops.iter().filter(|o| o.label == Label::Discrete).count();
    if discrete != 0 && discrete != t.ops.len() {
        return Err(SymbolicError::MixedModes);
    }
    if t.ops.iter().any(|o| o.label == Label::Discrete && !o.deriv.is_zero()) {
        return Err(SymbolicError::DiscreteDerivative);
    }
    t.bound.sort();
    t.bound.dedup();
    for b in &t.bound {
        if !t.mentions(b) {
            return Err(SymbolicError::UnusedBound(b.clone()));
        }
    }
    if t.bound.is_empty() {
        normalize_structure(&mut t);
        return Ok(Some(t));
    }

    // canonical bound names b1, b2, ... skipping any used freely in the term
    let free = t.free_labels();
    let names: Vec<String> = (1..)
        .map(|i| format!("b{i}"))
        .filter(|n| !free.contains(n))
        .take(t.bound.len())
        .collect();
    let originals = t.bound.clone();
    for (i, b) in originals.iter().enumerate() {
        t.rename(b, &format!("#c{i}"));
    }
    let n = originals.len();
    let mut best: Option<Term> = None;
    let mut consider = |perm: &[usize]| {
        let mut cand = t.clone();
        for (i, &p) in perm.iter().enumerate() {
            cand.rename(&format!("#c{i}"), &names[p]);
        }
        cand.bound.sort();
        normalize_structure(&mut cand);
        let better = match &best {
            None => true,
            Some(cur) => structural_cmp(&cand, cur)
                .then_with(|| cand.coeff.cmp(&cur.coeff))
                == Ordering::Less,
        };
        if better {
            best = Some(cand);
        }
    };
    if n <= 6 {
        for perm in permutations(n) {
            consider(&perm);
        }
    } else {
        let id: Vec<usize> = (0..n).collect();
        consider(&id);
    }
    Ok(best)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Sorts and merges terms that are already individually canonical.
pub(crate) fn merge_canonical(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by(structural_cmp);
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if structural_cmp(last, &t) == Ordering::Equal => {
                last.coeff = last.coeff.add_same_atoms(&t.coeff);
            }
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

pub(crate) fn canonicalize_terms(terms: Vec<Term>) -> Result<Vec<Term>, SymbolicError> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if let Some(t) = canonicalize_term(t)? {
            out.push(t);
        }
    }
    Ok(merge_canonical(out))
}
