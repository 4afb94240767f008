//! Exact scalars: Gaussian rationals times monomials in opaque real symbols.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact rational used throughout the symbolic layer.
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qf(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Monomial in opaque symbols, kept sorted by name with nonzero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atoms(Vec<(String, i32)>);

impl Atoms {
    pub fn one() -> Self {
        Atoms(Vec::new())
    }

    pub fn symbol(name: &str, exponent: i32) -> Self {
        let mut a = Atoms::one();
        a.push(name, exponent);
        a
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i32)> {
        self.0.iter().map(|(n, e)| (n.as_str(), *e))
    }

    pub fn exponent(&self, name: &str) -> i32 {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Multiplies in `name^exponent`.
    pub fn push(&mut self, name: &str, exponent: i32) {
        if exponent == 0 {
            return;
        }
        match self.0.binary_search_by(|(n, _)| n.as_str().cmp(name)) {
            Ok(i) => {
                self.0[i].1 += exponent;
                if self.0[i].1 == 0 {
                    self.0.remove(i);
                }
            }
            Err(i) => self.0.insert(i, (name.to_string(), exponent)),
        }
    }

    pub fn with_exponent(&self, name: &str, exponent: i32) -> Self {
        let mut a = self.clone();
        let cur = a.exponent(name);
        a.push(name, exponent - cur);
        a
    }

    pub fn mul(&self, other: &Atoms) -> Atoms {
        let mut out = self.clone();
        for (n, e) in other.iter() {
            out.push(n, e);
        }
        out
    }
}

/// `(re + i*im) * atoms`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: Q,
    pub im: Q,
    pub atoms: Atoms,
}

impl Scalar {
    pub fn new(re: Q, im: Q) -> Self {
        Scalar {
            re,
            im,
            atoms: Atoms::one(),
        }
    }

    pub fn zero() -> Self {
        Scalar::new(Q::zero(), Q::zero())
    }

    pub fn one() -> Self {
        Scalar::new(Q::one(), Q::zero())
    }

    pub fn i() -> Self {
        Scalar::new(Q::zero(), Q::one())
    }

    pub fn real(re: Q) -> Self {
        Scalar::new(re, Q::zero())
    }

    pub fn int(n: i128) -> Self {
        Scalar::real(q(n))
    }

    pub fn ratio(n: i128, d: i128) -> Self {
        Scalar::real(qf(n, d))
    }

    pub fn imag(im: Q) -> Self {
        Scalar::new(Q::zero(), im)
    }

    pub fn symbol(name: &str, exponent: i32) -> Self {
        Scalar {
            atoms: Atoms::symbol(name, exponent),
            ..Scalar::one()
        }
    }

    pub fn with_atoms(mut self, atoms: Atoms) -> Self {
        self.atoms = atoms;
        self.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero() && self.atoms.is_one()
    }

    /// True when the numeric part is a real number.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, factor: Q) -> Self {
        Scalar {
            re: self.re * factor,
            im: self.im * factor,
            atoms: self.atoms.clone(),
        }
        .normalized()
    }

    /// Adds the numeric parts; the caller guarantees identical atoms.
    pub fn add_same_atoms(&self, other: &Scalar) -> Scalar {
        debug_assert_eq!(self.atoms, other.atoms);
        Scalar {
            re: self.re + other.re,
            im: self.im + other.im,
            atoms: self.atoms.clone(),
        }
        .normalized()
    }

    pub fn conj(&self) -> Scalar {
        Scalar {
            re: self.re,
            im: -self.im,
            atoms: self.atoms.clone(),
        }
    }

    /// Zero scalars carry no atoms.
    fn normalized(mut self) -> Self {
        if self.is_zero() {
            self.atoms = Atoms::one();
        }
        self
    }

    /// Numeric value, substituting atoms via `lookup`.
    pub fn eval<F>(&self, lookup: F) -> Option<num_complex::Complex64>
    where
        F: Fn(&str) -> Option<f64>,
    {
        let mut factor = 1.0;
        for (name, e) in self.atoms.iter() {
            factor *= lookup(name)?.powi(e);
        }
        let re = q_to_f64(&self.re) * factor;
        let im = q_to_f64(&self.im) * factor;
        Some(num_complex::Complex64::new(re, im))
    }

    /// Multiplicative inverse of the numeric part (atoms inverted too).
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let n = self.re * self.re + self.im * self.im;
        let mut atoms = Atoms::one();
        for (name, e) in self.atoms.iter() {
            atoms.push(name, -e);
        }
        Some(Scalar {
            re: self.re / n,
            im: -self.im / n,
            atoms,
        })
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
            atoms: self.atoms.mul(&rhs.atoms),
        }
        .normalized()
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
            atoms: self.atoms,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_same_atoms(rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_same_atoms(&-rhs)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.atoms
            .cmp(&other.atoms)
            .then_with(|| self.re.cmp(&other.re))
            .then_with(|| self.im.cmp(&other.im))
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Scalar {
    /// Renders in the expression grammar's coefficient syntax, atoms included.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_q(&self.re),
            (true, false) => {
                if self.im.is_one() {
                    "i".to_string()
                } else if (-self.im).is_one() {
                    "-i".to_string()
                } else {
                    format!("{}i", fmt_q(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                format!("({}{}{}i)", fmt_q(&self.re), sign, fmt_q(&self.im.abs()))
            }
        };
        write!(f, "{num}")?;
        for (name, e) in self.atoms.iter() {
            if e == 1 {
                write!(f, " ${name}")?;
            } else {
                write!(f, " ${name}^{e}")?;
            }
        }
        Ok(())
    }
}
