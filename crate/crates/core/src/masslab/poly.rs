use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{fmt_q, Q};

/// Sparse multivariate polynomial over Q. Monomials map variable names to
/// positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<BTreeMap<String, u32>, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(BTreeMap::new(), c);
        p
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        let mut p = Poly::zero();
        p.add_term(m, Q::one());
        p
    }

    fn add_term(&mut self, mono: BTreeMap<String, u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mono).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-Q::one()))
    }

    pub fn scale(&self, s: Q) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                for (v, e) in mb {
                    *m.entry(v.clone()).or_insert(0) += e;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Degree in `var`.
    pub fn degree(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.get(var).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// Coefficient polynomial of `var^power`.
    pub fn coefficient(&self, var: &str, power: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.get(var).copied().unwrap_or(0) == power {
                let mut rest = m.clone();
                rest.remove(var);
                out.add_term(rest, *c);
            }
        }
        out
    }

    /// Substitutes a polynomial for a variable.
    pub fn substitute(&self, var: &str, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = rest.remove(var).unwrap_or(0);
            let mut term = Poly::zero();
            term.add_term(rest, *c);
            for _ in 0..e {
                term = term.mul(value);
            }
            out = out.add(&term);
        }
        out
    }

    /// Solves `self = 0` for `var` when `self` is linear in it with a
    /// nonzero constant leading coefficient.
    pub fn solve_linear(&self, var: &str) -> Option<Poly> {
        if self.degree(var) != 1 {
            return None;
        }
        let lead = self.coefficient(var, 1);
        let [(mono, c)]: [(&BTreeMap<String, u32>, &Q); 1] = lead.terms.iter().collect::<Vec<_>>().try_into().ok()?;
        if !mono.is_empty() {
            return None;
        }
        Some(self.coefficient(var, 0).scale(-Q::one() / c))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = fmt_q(c);
                for (v, e) in m {
                    s.push('*');
                    s.push_str(v);
                    if *e > 1 {
                        s.push_str(&format!("^{e}"));
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
