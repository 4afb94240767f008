//! Symbolic operator expressions: sums of terms, each a scalar times c-number
//! kernels, delta distributions and an ordered operator product.

mod canon;
mod sift;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::SymbolicError;
use crate::scalar::Scalar;

pub use sift::apply_sifting;

/// Derivative orders per momentum component (axes 1..=3).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub [u8; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; 3]);

    /// Unit index along `axis` (1-based).
    pub fn axis(axis: u8) -> Self {
        MultiIndex::ZERO.plus_axis(axis)
    }

    pub fn from_axes(axes: &[u8]) -> Self {
        axes.iter().fold(MultiIndex::ZERO, |m, &a| m.plus_axis(a))
    }

    pub fn plus_axis(mut self, axis: u8) -> Self {
        assert!((1..=3).contains(&axis), "axis {axis} out of range");
        self.0[axis as usize - 1] += 1;
        self
    }

    pub fn plus(self, other: MultiIndex) -> Self {
        let mut out = self;
        for i in 0..3 {
            out.0[i] += other.0[i];
        }
        out
    }

    pub fn order(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 3]
    }

    /// Axes with repetition, ascending: `{1:2, 3:1}` -> `[1, 1, 3]`.
    pub fn axes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for (i, &n) in self.0.iter().enumerate() {
            for _ in 0..n {
                out.push(i as u8 + 1);
            }
        }
        out
    }

    pub fn max_axis(&self) -> u8 {
        self.axes().last().copied().unwrap_or(0)
    }

    /// `(-1)^|alpha|` as a sign flag.
    pub fn is_odd(&self) -> bool {
        self.order() % 2 == 1
    }
}

/// Momentum label of an operator: a named continuous variable, or the
/// label-free discrete mode of a finite oscillator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Discrete,
    Named(String),
}

impl Label {
    pub fn named(s: &str) -> Self {
        Label::Named(s.to_string())
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Label::Discrete => None,
            Label::Named(s) => Some(s),
        }
    }
}

/// `∂^deriv a_species(label)` or its adjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpFactor {
    pub species: u8,
    pub dagger: bool,
    pub label: Label,
    pub deriv: MultiIndex,
}

impl OpFactor {
    pub fn new(species: u8, dagger: bool, label: Label) -> Self {
        OpFactor {
            species,
            dagger,
            label,
            deriv: MultiIndex::ZERO,
        }
    }
}

/// `∂^deriv_lhs δ(lhs - rhs)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaFactor {
    pub lhs: String,
    pub rhs: String,
    pub deriv: MultiIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelKind {
    /// `k_axis ^ power`
    Component { axis: u8, power: i32 },
    /// `(k^2 + m_species^2) ^ (exponent / 2)`
    Energy { species: u8, exponent: i32 },
}

impl KernelKind {
    fn base(&self) -> (u8, u8) {
        match *self {
            KernelKind::Component { axis, .. } => (0, axis),
            KernelKind::Energy { species, .. } => (1, species),
        }
    }

    fn exponent(&self) -> i32 {
        match *self {
            KernelKind::Component { power, .. } => power,
            KernelKind::Energy { exponent, .. } => exponent,
        }
    }

    fn with_exponent(&self, e: i32) -> KernelKind {
        match *self {
            KernelKind::Component { axis, .. } => KernelKind::Component { axis, power: e },
            KernelKind::Energy { species, .. } => KernelKind::Energy {
                species,
                exponent: e,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelFactor {
    pub label: String,
    pub kind: KernelKind,
}

/// One summand. `bound` lists the labels integrated over in this term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Scalar,
    pub bound: Vec<String>,
    pub kernels: Vec<KernelFactor>,
    pub deltas: Vec<DeltaFactor>,
    pub ops: Vec<OpFactor>,
}

impl Term {
    pub fn scalar(coeff: Scalar) -> Self {
        Term {
            coeff,
            bound: Vec::new(),
            kernels: Vec::new(),
            deltas: Vec::new(),
            ops: Vec::new(),
        }
    }

    /// Every label name mentioned by a factor (bound or free).
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for k in &self.kernels {
            out.insert(k.label.clone());
        }
        for d in &self.deltas {
            out.insert(d.lhs.clone());
            out.insert(d.rhs.clone());
        }
        for o in &self.ops {
            if let Label::Named(n) = &o.label {
                out.insert(n.clone());
            }
        }
        out
    }

    pub fn free_labels(&self) -> BTreeSet<String> {
        let mut all = self.labels();
        for b in &self.bound {
            all.remove(b);
        }
        all
    }

    pub fn mentions(&self, label: &str) -> bool {
        self.kernels.iter().any(|k| k.label == label)
            || self.deltas.iter().any(|d| d.lhs == label || d.rhs == label)
            || self.ops.iter().any(|o| o.label.name() == Some(label))
    }

    pub(crate) fn rename(&mut self, from: &str, to: &str) {
        let swap = |s: &mut String| {
            if s == from {
                *s = to.to_string();
            }
        };
        for k in &mut self.kernels {
            swap(&mut k.label);
        }
        for d in &mut self.deltas {
            swap(&mut d.lhs);
            swap(&mut d.rhs);
        }
        for o in &mut self.ops {
            if let Label::Named(n) = &mut o.label {
                swap(n);
            }
        }
        for b in &mut self.bound {
            swap(b);
        }
    }

    /// Raw product (no canonicalization). Bound labels of `rhs` are renamed
    /// to fresh hygienic names first.
    pub(crate) fn product(&self, rhs: &Term, fresh: &mut usize) -> Term {
        let mut r = rhs.clone();
        for b in rhs.bound.clone() {
            *fresh += 1;
            r.rename(&b, &format!("#h{fresh}"));
        }
        let mut l = self.clone();
        for b in self.bound.clone() {
            *fresh += 1;
            l.rename(&b, &format!("#h{fresh}"));
        }
        let mut bound = l.bound;
        bound.extend(r.bound);
        let mut kernels = l.kernels;
        kernels.extend(r.kernels);
        let mut deltas = l.deltas;
        deltas.extend(r.deltas);
        let mut ops = l.ops;
        ops.extend(r.ops);
        Term {
            coeff: &l.coeff * &r.coeff,
            bound,
            kernels,
            deltas,
            ops,
        }
    }

    /// Product-rule derivative `∂/∂label_axis` (raw terms, not canonical).
    pub(crate) fn derivative(&self, label: &str, axis: u8) -> Vec<Term> {
        let mut out = Vec::new();
        for (idx, k) in self.kernels.iter().enumerate() {
            if k.label != label {
                continue;
            }
            match k.kind {
                KernelKind::Component { axis: a, power } if a == axis => {
                    let mut t = self.clone();
                    t.coeff = t.coeff.scale(crate::scalar::q(power as i128));
                    t.kernels[idx].kind = k.kind.with_exponent(power - 1);
                    out.push(t);
                }
                KernelKind::Component { .. } => {}
                KernelKind::Energy { species, exponent } => {
                    let mut t = self.clone();
                    t.coeff = t.coeff.scale(crate::scalar::q(exponent as i128));
                    t.kernels[idx].kind = KernelKind::Energy {
                        species,
                        exponent: exponent - 2,
                    };
                    t.kernels.push(KernelFactor {
                        label: label.to_string(),
                        kind: KernelKind::Component { axis, power: 1 },
                    });
                    out.push(t);
                }
            }
        }
        for (idx, d) in self.deltas.iter().enumerate() {
            let on_lhs = d.lhs == label;
            let on_rhs = d.rhs == label;
            if on_lhs == on_rhs {
                // absent, or δ(k-k) which is constant in k
                continue;
            }
            let mut t = self.clone();
            t.deltas[idx].deriv = d.deriv.plus_axis(axis);
            if on_rhs {
                t.coeff = -t.coeff;
            }
            out.push(t);
        }
        for (idx, o) in self.ops.iter().enumerate() {
            if o.label.name() == Some(label) {
                let mut t = self.clone();
                t.ops[idx].deriv = o.deriv.plus_axis(axis);
                out.push(t);
            }
        }
        out
    }
}

/// A canonical sum of terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Expr {
    terms: Vec<Term>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr { terms: Vec::new() }
    }

    /// Builds and canonicalizes.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, SymbolicError> {
        canon::canonicalize_terms(terms).map(|terms| Expr { terms })
    }

    pub fn scalar(s: Scalar) -> Self {
        Expr::from_terms(vec![Term::scalar(s)]).expect("scalar term is canonical")
    }

    pub fn one() -> Self {
        Expr::scalar(Scalar::one())
    }

    fn single_op(op: OpFactor) -> Self {
        let mut t = Term::scalar(Scalar::one());
        t.ops.push(op);
        Expr { terms: vec![t] }
    }

    /// `a_species(label)`
    pub fn ann(species: u8, label: &str) -> Self {
        Expr::single_op(OpFactor::new(species, false, Label::named(label)))
    }

    /// `a+_species(label)`
    pub fn cre(species: u8, label: &str) -> Self {
        Expr::single_op(OpFactor::new(species, true, Label::named(label)))
    }

    pub fn ann_discrete(species: u8) -> Self {
        Expr::single_op(OpFactor::new(species, false, Label::Discrete))
    }

    pub fn cre_discrete(species: u8) -> Self {
        Expr::single_op(OpFactor::new(species, true, Label::Discrete))
    }

    pub fn op(op: OpFactor) -> Self {
        Expr::single_op(op)
    }

    /// `δ(l1 - l2)`
    pub fn delta(l1: &str, l2: &str) -> Self {
        let mut t = Term::scalar(Scalar::one());
        t.deltas.push(DeltaFactor {
            lhs: l1.to_string(),
            rhs: l2.to_string(),
            deriv: MultiIndex::ZERO,
        });
        Expr::from_terms(vec![t]).expect("delta term is canonical")
    }

    pub fn kernel(label: &str, kind: KernelKind) -> Self {
        let mut t = Term::scalar(Scalar::one());
        t.kernels.push(KernelFactor {
            label: label.to_string(),
            kind,
        });
        Expr::from_terms(vec![t]).expect("kernel term is canonical")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Integrates every term over `label` (binds it).
    pub fn integrate(&self, label: &str) -> Result<Self, SymbolicError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                if !t.bound.iter().any(|b| b == label) {
                    t.bound.push(label.to_string());
                }
                t
            })
            .collect();
        Expr::from_terms(terms)
    }

    pub fn free_labels(&self) -> BTreeSet<String> {
        self.terms.iter().flat_map(|t| t.free_labels()).collect()
    }

    /// Largest momentum axis mentioned anywhere (0 if none).
    pub fn max_axis(&self) -> u8 {
        let mut m = 0;
        for t in &self.terms {
            for k in &t.kernels {
                if let KernelKind::Component { axis, .. } = k.kind {
                    m = m.max(axis);
                }
            }
            for d in &t.deltas {
                m = m.max(d.deriv.max_axis());
            }
            for o in &t.ops {
                m = m.max(o.deriv.max_axis());
            }
        }
        m
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Expr {
            terms: canon::merge_canonical(terms),
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Expr {
        if s.is_zero() {
            return Expr::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: &t.coeff * s,
                ..t.clone()
            })
            .collect();
        Expr {
            terms: canon::merge_canonical(terms),
        }
    }

    /// Non-commutative product; bound labels are kept apart.
    pub fn mul(&self, other: &Expr) -> Result<Expr, SymbolicError> {
        let mut fresh = 0usize;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.product(b, &mut fresh));
            }
        }
        Expr::from_terms(terms)
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Expr>>(items: I) -> Expr {
        let terms = items
            .into_iter()
            .flat_map(|e| e.terms.iter().cloned())
            .collect();
        Expr {
            terms: canon::merge_canonical(terms),
        }
    }

    /// Renames a free label everywhere.
    pub fn rename_free(&self, from: &str, to: &str) -> Result<Expr, SymbolicError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                if !t.bound.iter().any(|b| b == from) {
                    t.rename(from, to);
                }
                t
            })
            .collect();
        Expr::from_terms(terms)
    }
}

/// Re-canonicalizes an expression (idempotent on canonical input).
pub fn canonicalize(e: &Expr) -> Result<Expr, SymbolicError> {
    Expr::from_terms(e.terms.clone())
}

/// Syntactic equality after canonicalization: `e1 - e2` has no terms.
pub fn exprs_equal(e1: &Expr, e2: &Expr) -> bool {
    e1.sub(e2).is_zero()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render(self))
    }
}
