use massop::expr::{DeltaFactor, KernelFactor, KernelKind, Label, OpFactor};
use massop::pdo::Pdo;
use massop::wick::{bracket, normal_order};
use massop::{canonicalize, parse, render, Expr, MultiIndex, Scalar, Term};
use proptest::prelude::*;

const LABELS: [&str; 3] = ["k", "p", "q"];

fn multi_index() -> impl Strategy<Value = MultiIndex> {
    prop_oneof![
        3 => Just(MultiIndex::ZERO),
        1 => (1u8..=3).prop_map(MultiIndex::axis),
        1 => ((1u8..=3), (1u8..=3)).prop_map(|(a, b)| MultiIndex::from_axes(&[a, b])),
    ]
}

fn coeff() -> impl Strategy<Value = Scalar> {
    (-4i128..=4, 1i128..=3, any::<bool>()).prop_filter_map("nonzero", |(n, d, imag)| {
        (n != 0).then(|| {
            let s = Scalar::ratio(n, d);
            if imag {
                Scalar::new(s.im, s.re)
            } else {
                s
            }
        })
    })
}

fn op() -> impl Strategy<Value = OpFactor> {
    (1u8..=3, any::<bool>(), 0usize..3, multi_index()).prop_map(|(s, dagger, l, deriv)| {
        let mut op = OpFactor::new(s, dagger, Label::named(LABELS[l]));
        op.deriv = deriv;
        op
    })
}

fn kernel() -> impl Strategy<Value = KernelFactor> {
    (0usize..3, any::<bool>(), 1u8..=3, -2i32..=2).prop_filter_map("nonzero power", |(l, energy, x, p)| {
        (p != 0).then(|| KernelFactor {
            label: LABELS[l].to_string(),
            kind: if energy {
                KernelKind::Energy { species: x, exponent: p }
            } else {
                KernelKind::Component { axis: x, power: p }
            },
        })
    })
}

fn delta() -> impl Strategy<Value = DeltaFactor> {
    (0usize..3, 0usize..3, multi_index()).prop_map(|(a, b, deriv)| DeltaFactor {
        lhs: LABELS[a].to_string(),
        rhs: LABELS[b].to_string(),
        deriv,
    })
}

fn term() -> impl Strategy<Value = Term> {
    (
        coeff(),
        prop::collection::vec(op(), 0..=3),
        prop::collection::vec(kernel(), 0..=1),
        prop::collection::vec(delta(), 0..=1),
        any::<bool>(),
    )
        .prop_map(|(coeff, ops, kernels, deltas, bind)| {
            let mut t = Term::scalar(coeff);
            t.ops = ops;
            t.kernels = kernels;
            t.deltas = deltas;
            if bind && t.mentions("q") {
                t.bound.push("q".to_string());
            }
            t
        })
}

fn expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec(term(), 1..=3).prop_map(|ts| Expr::from_terms(ts).unwrap())
}

fn op_product() -> impl Strategy<Value = Expr> {
    (coeff(), prop::collection::vec(op(), 1..=2)).prop_map(|(c, ops)| {
        let mut t = Term::scalar(c);
        t.ops = ops;
        Expr::from_terms(vec![t]).unwrap()
    })
}

fn pdo() -> impl Strategy<Value = Pdo> {
    let atom = (0u8..6, 1u8..=3).prop_map(|(kind, axis)| match kind {
        0 => Pdo::momentum(3, 1, axis).unwrap(),
        1 | 2 => Pdo::derivative(3, 1, MultiIndex::axis(axis)).unwrap(),
        3 => Pdo::energy(3, 1, 1).unwrap(),
        4 => Pdo::energy(3, 1, -1).unwrap(),
        _ => Pdo::identity(3, 1).unwrap(),
    });
    prop::collection::vec((coeff(), atom.clone(), atom), 1..=2).prop_map(|parts| {
        parts.into_iter().fold(Pdo::zero(3, 1), |acc, (c, a, b)| {
            acc.add(&a.compose(&b).unwrap().scale(&c)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn commutator_is_antisymmetric(x in op_product(), y in op_product()) {
        let xy = bracket(&x, &y, -1).unwrap();
        let yx = bracket(&y, &x, -1).unwrap();
        prop_assert_eq!(xy, yx.neg());
    }

    #[test]
    fn anticommutator_is_symmetric(x in op_product(), y in op_product()) {
        prop_assert_eq!(bracket(&x, &y, 1).unwrap(), bracket(&y, &x, 1).unwrap());
    }

    #[test]
    fn bracket_is_bilinear(x in op_product(), z in op_product(), y in op_product(), c in coeff()) {
        let lhs = bracket(&x.add(&z.scale(&c)), &y, -1).unwrap();
        let rhs = bracket(&x, &y, -1).unwrap().add(&bracket(&z, &y, -1).unwrap().scale(&c));
        prop_assert_eq!(lhs, normal_order(&rhs).unwrap());
    }

    #[test]
    fn normal_order_is_idempotent(e in expr()) {
        let once = normal_order(&e).unwrap();
        prop_assert_eq!(normal_order(&once).unwrap(), once);
    }

    #[test]
    fn canonicalize_is_idempotent(e in expr()) {
        let once = canonicalize(&e).unwrap();
        prop_assert_eq!(canonicalize(&once).unwrap(), once);
    }

    #[test]
    fn canonical_form_respects_linear_structure(e in expr(), c in coeff()) {
        prop_assert!(e.sub(&e).is_zero());
        prop_assert_eq!(e.add(&e), e.scale(&Scalar::int(2)));
        prop_assert_eq!(e.scale(&c).scale(&c.recip().unwrap()), e);
    }

    #[test]
    fn canonical_form_ignores_term_order(ts in prop::collection::vec(term(), 1..=4)) {
        let forward = Expr::from_terms(ts.clone()).unwrap();
        let mut rev = ts;
        rev.reverse();
        prop_assert_eq!(Expr::from_terms(rev).unwrap(), forward);
    }

    #[test]
    fn swapping_delta_sides_flips_by_derivative_parity(t in term(), d in delta()) {
        prop_assume!(d.lhs != d.rhs);
        let mut t = t;
        t.bound.clear();
        let mut a = t.clone();
        a.deltas = vec![d.clone()];
        let mut b = t;
        b.deltas = vec![DeltaFactor { lhs: d.rhs.clone(), rhs: d.lhs.clone(), deriv: d.deriv }];
        if d.deriv.is_odd() {
            b.coeff = -b.coeff;
        }
        let ea = Expr::from_terms(vec![a]).unwrap();
        prop_assert_eq!(&ea, &Expr::from_terms(vec![b.clone()]).unwrap());
        let mut back = b;
        back.deltas = vec![d.clone()];
        if d.deriv.is_odd() {
            back.coeff = -back.coeff;
        }
        prop_assert_eq!(Expr::from_terms(vec![back]).unwrap(), ea);
    }

    #[test]
    fn bound_label_names_are_irrelevant(t in term()) {
        prop_assume!(t.bound.contains(&"q".to_string()));
        let renamed = Expr::from_terms(vec![t.clone()]).unwrap();
        let mut u = t;
        let swap = |s: &mut String| if s == "q" { *s = "r".to_string() };
        u.bound.iter_mut().for_each(swap);
        u.kernels.iter_mut().for_each(|k| swap(&mut k.label));
        for d in &mut u.deltas {
            swap(&mut d.lhs);
            swap(&mut d.rhs);
        }
        for o in &mut u.ops {
            if o.label == Label::named("q") {
                o.label = Label::named("r");
            }
        }
        prop_assert_eq!(Expr::from_terms(vec![u]).unwrap(), renamed);
    }

    #[test]
    fn render_parse_round_trip(e in expr()) {
        let text = render(&e);
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn pdo_commutators_satisfy_jacobi(x in pdo(), y in pdo(), z in pdo()) {
        let c = |a: &Pdo, b: &Pdo| a.commutator(b).unwrap();
        let j = c(&x, &c(&y, &z)).add(&c(&y, &c(&z, &x))).unwrap().add(&c(&z, &c(&x, &y))).unwrap();
        prop_assert!(j.is_zero(), "{:?}", j);
    }

    #[test]
    fn pdo_commutator_is_antisymmetric(x in pdo(), y in pdo()) {
        prop_assert_eq!(x.commutator(&y).unwrap(), y.commutator(&x).unwrap().scale(&Scalar::int(-1)));
    }
}
