//! Normal ordering checked against a lattice Fock space: continuum labels
//! become sites of spacing `h`, `a(k) → b_k/√h`, `δ(k, q) → δ_kq/h`, and both
//! sides act on occupation-number states.

use std::collections::{BTreeMap, HashMap};

use massop::expr::{Label, OpFactor};
use massop::wick::{bracket, normal_order};
use massop::{Expr, Term};
use num_complex::Complex64;
use proptest::prelude::*;

const SPECIES: usize = 3;
const SITES: usize = 2;
const H: f64 = 0.5;
const LABELS: [&str; 3] = ["k", "p", "q"];

type State = BTreeMap<Vec<u8>, Complex64>;

fn mode(op: &OpFactor, sites: &HashMap<String, usize>) -> usize {
    let s = op.species as usize - 1;
    match &op.label {
        Label::Named(l) => s * SITES + sites[l],
        Label::Discrete => SPECIES * SITES + s,
    }
}

fn apply_op(op: &OpFactor, sites: &HashMap<String, usize>, state: &State) -> State {
    assert!(op.deriv.is_zero());
    let m = mode(op, sites);
    let scale = match op.label {
        Label::Named(_) => H.sqrt().recip(),
        Label::Discrete => 1.0,
    };
    let mut out = State::new();
    for (occ, amp) in state {
        let n = occ[m] as f64;
        let mut next = occ.clone();
        let factor = if op.dagger {
            next[m] += 1;
            (n + 1.0).sqrt()
        } else {
            if occ[m] == 0 {
                continue;
            }
            next[m] -= 1;
            n.sqrt()
        };
        *out.entry(next).or_default() += amp * factor * scale;
    }
    out
}

fn apply_term(t: &Term, sites: &HashMap<String, usize>, state: &State) -> State {
    assert!(t.bound.is_empty() && t.kernels.is_empty());
    let mut c = t.coeff.eval(|_| None).expect("numeric coefficient");
    for d in &t.deltas {
        assert!(d.deriv.is_zero());
        if sites[&d.lhs] != sites[&d.rhs] {
            return State::new();
        }
        c /= H;
    }
    let mut s: State = state.iter().map(|(k, v)| (k.clone(), v * c)).collect();
    for op in t.ops.iter().rev() {
        s = apply_op(op, sites, &s);
    }
    s
}

fn apply_expr(e: &Expr, sites: &HashMap<String, usize>, state: &State) -> State {
    let mut out = State::new();
    for t in e.terms() {
        for (k, v) in apply_term(t, sites, state) {
            *out.entry(k).or_default() += v;
        }
    }
    out
}

fn distance(a: &State, b: &State) -> f64 {
    let mut keys: Vec<&Vec<u8>> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let zero = Complex64::new(0.0, 0.0);
    keys.iter()
        .map(|k| (a.get(*k).unwrap_or(&zero) - b.get(*k).unwrap_or(&zero)).norm())
        .fold(0.0, f64::max)
}

/// Basis states with total occupation at most two.
fn low_states() -> Vec<State> {
    let modes = SPECIES * SITES + SPECIES;
    let mut occs = vec![vec![0u8; modes]];
    for i in 0..modes {
        let mut v = vec![0u8; modes];
        v[i] = 1;
        occs.push(v.clone());
        for j in i..modes {
            let mut w = v.clone();
            w[j] += 1;
            occs.push(w);
        }
    }
    occs.into_iter()
        .map(|o| State::from([(o, Complex64::new(1.0, 0.0))]))
        .collect()
}

/// Continuum or discrete operators only; the engine rejects mixed terms.
fn product(ops: &[(u8, bool, usize)], discrete: bool) -> Expr {
    ops.iter().fold(Expr::one(), |acc, &(s, dagger, l)| {
        let label = if discrete {
            Label::Discrete
        } else {
            Label::named(LABELS[l])
        };
        acc.mul(&Expr::op(OpFactor::new(s, dagger, label))).unwrap()
    })
}

fn assert_same_action(a: &Expr, b: &Expr, assignment: &[usize]) -> Result<(), TestCaseError> {
    let sites: HashMap<String, usize> = LABELS.iter().map(|l| l.to_string()).zip(assignment.iter().copied()).collect();
    for s in low_states() {
        let d = distance(&apply_expr(a, &sites, &s), &apply_expr(b, &sites, &s));
        prop_assert!(d < 1e-10, "deviation {d:e} on {s:?}");
    }
    Ok(())
}

fn ops_strategy(max: usize) -> impl Strategy<Value = Vec<(u8, bool, usize)>> {
    prop::collection::vec((1u8..=SPECIES as u8, any::<bool>(), 0..LABELS.len()), 1..=max)
}

fn sites_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..SITES, LABELS.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normal_order_preserves_action(ops in ops_strategy(5), discrete: bool, sites in sites_strategy()) {
        let e = product(&ops, discrete);
        let n = normal_order(&e).unwrap();
        for t in n.terms() {
            let first_ann = t.ops.iter().position(|o| !o.dagger).unwrap_or(t.ops.len());
            prop_assert!(t.ops[first_ann..].iter().all(|o| !o.dagger));
        }
        assert_same_action(&e, &n, &sites)?;
    }

    #[test]
    fn brackets_match_lattice_commutators(
        x in ops_strategy(2),
        y in ops_strategy(2),
        discrete: bool,
        sites in sites_strategy(),
    ) {
        let (ex, ey) = (product(&x, discrete), product(&y, discrete));
        let lattice = ex.mul(&ey).unwrap().sub(&ey.mul(&ex).unwrap());
        assert_same_action(&bracket(&ex, &ey, -1).unwrap(), &lattice, &sites)?;
        let anti = ex.mul(&ey).unwrap().add(&ey.mul(&ex).unwrap());
        assert_same_action(&bracket(&ex, &ey, 1).unwrap(), &anti, &sites)?;
    }
}

#[test]
fn canonical_pair_on_lattice() {
    let e = product(&[(1, false, 0), (1, true, 2)], false);
    let n = normal_order(&e).unwrap();
    for sites in [[0, 0, 0], [0, 0, 1]] {
        assert_same_action(&e, &n, &sites).unwrap();
    }
}

#[test]
fn oracle_detects_missing_contraction() {
    let e = product(&[(1, false, 0), (1, true, 2)], false);
    let swapped = product(&[(1, true, 2), (1, false, 0)], false);
    assert!(assert_same_action(&e, &swapped, &[0, 0, 1]).is_ok());
    assert!(assert_same_action(&e, &swapped, &[0, 0, 0]).is_err());
}
