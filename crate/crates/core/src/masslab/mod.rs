//! Mass operators as functions of quantum numbers.

mod fit;
mod poly;
mod vn;

pub use fit::{fit_formula, read_particle_table, FitReport, ParticleRow};
pub use poly::Poly;
pub use vn::{kappa_spectrum, mass_from_kappa, von_neumann_generator, VonNeumann};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::MassError;
use crate::scalar::{q, q_to_f64, qf, Q};

/// Hypercharge `Y`, isospin `J` and spin `S`; any may be absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QuantumNumbers {
    pub y: Option<Q>,
    pub j: Option<Q>,
    pub s: Option<Q>,
}

impl QuantumNumbers {
    pub fn new(y: Option<Q>, j: Option<Q>, s: Option<Q>) -> Result<Self, MassError> {
        for (name, v) in [("J", j), ("S", s)] {
            if let Some(v) = v {
                if v.is_negative() {
                    return Err(MassError::Invalid(format!("{name} must be nonnegative, got {v}")));
                }
            }
        }
        Ok(QuantumNumbers { y, j, s })
    }

    /// `(Y, J)` pair, spin absent.
    pub fn yj(y: Q, j: Q) -> Self {
        QuantumNumbers { y: Some(y), j: Some(j), s: None }
    }

    pub fn half_integral(&self) -> bool {
        [self.y, self.j, self.s]
            .iter()
            .flatten()
            .all(|v| (v * q(2)).is_integer())
    }

    fn get(v: Option<Q>, name: &'static str) -> Result<Q, MassError> {
        v.ok_or(MassError::MissingQuantumNumber(name))
    }
}

/// Parses an integer, a decimal or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q, MassError> {
    let t = s.trim();
    let bad = || MassError::Number(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 30 {
        return Err(bad());
    }
    let digits: i128 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let v = Q::new(digits, 10i128.pow(frac.len() as u32));
    Ok(if neg { -v } else { v })
}

/// Which side of a formula is linear in the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Mass,
    MassSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    /// `M² = a′ + b′Y + c′J` (or `c′J(J+1)` with `casimir`)
    TripletLinear { casimir: bool },
    /// `M² = aS + bY + cJ`
    TripletSpin,
    /// `M = a + b S(S+1)`
    TrajHadron,
    /// `M² = a² + b² S(S+1)`, linear in `(a², b²)`
    TrajMeson,
    /// `M = a + bY + c{J(J+1) − Y²/4}`
    OkuboHadron,
    /// `M² = a + bY + c{J(J+1) − Y²/4}`
    OkuboMeson,
}

impl FormulaKind {
    pub const ALL: [FormulaKind; 7] = [
        FormulaKind::TripletLinear { casimir: false },
        FormulaKind::TripletLinear { casimir: true },
        FormulaKind::TripletSpin,
        FormulaKind::TrajHadron,
        FormulaKind::TrajMeson,
        FormulaKind::OkuboHadron,
        FormulaKind::OkuboMeson,
    ];

    pub fn target(&self) -> Target {
        match self {
            FormulaKind::TrajHadron | FormulaKind::OkuboHadron => Target::Mass,
            _ => Target::MassSquared,
        }
    }

    /// Names of the linear parameters, in basis order.
    pub fn params(&self) -> &'static [&'static str] {
        match self {
            FormulaKind::TrajHadron => &["a", "b"],
            FormulaKind::TrajMeson => &["a^2", "b^2"],
            _ => &["a", "b", "c"],
        }
    }

    /// Basis row: the target equals `Σ params_k · basis_k`.
    pub fn basis(&self, qn: &QuantumNumbers) -> Result<Vec<Q>, MassError> {
        let y = || QuantumNumbers::get(qn.y, "Y");
        let j = || QuantumNumbers::get(qn.j, "J");
        let s = || QuantumNumbers::get(qn.s, "S");
        Ok(match self {
            FormulaKind::TripletLinear { casimir: false } => vec![Q::one(), y()?, j()?],
            FormulaKind::TripletLinear { casimir: true } => {
                let j = j()?;
                vec![Q::one(), y()?, j * (j + Q::one())]
            }
            FormulaKind::TripletSpin => vec![s()?, y()?, j()?],
            FormulaKind::TrajHadron | FormulaKind::TrajMeson => {
                let s = s()?;
                vec![Q::one(), s * (s + Q::one())]
            }
            FormulaKind::OkuboHadron | FormulaKind::OkuboMeson => {
                let (y, j) = (y()?, j()?);
                vec![Q::one(), y, j * (j + Q::one()) - y * y / q(4)]
            }
        })
    }
}

impl fmt::Display for FormulaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaKind::TripletLinear { casimir: false } => "triplet-linear",
            FormulaKind::TripletLinear { casimir: true } => "triplet-linear-casimir",
            FormulaKind::TripletSpin => "triplet-spin",
            FormulaKind::TrajHadron => "traj-hadron",
            FormulaKind::TrajMeson => "traj-meson",
            FormulaKind::OkuboHadron => "okubo-hadron",
            FormulaKind::OkuboMeson => "okubo-meson",
        })
    }
}

impl FromStr for FormulaKind {
    type Err = MassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        FormulaKind::ALL
            .into_iter()
            .find(|k| k.to_string() == norm)
            .ok_or_else(|| MassError::Invalid(format!("unknown formula kind `{s}`")))
    }
}

impl Serialize for FormulaKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A formula with numeric coefficients in `kind.params()` order.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFormula {
    pub kind: FormulaKind,
    pub coeffs: Vec<f64>,
}

/// Mass and mass squared produced by a formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassValue {
    pub mass: f64,
    pub mass_squared: f64,
}

impl MassFormula {
    pub fn new(kind: FormulaKind, coeffs: Vec<f64>) -> Result<Self, MassError> {
        if coeffs.len() != kind.params().len() {
            return Err(MassError::LengthMismatch(coeffs.len(), kind.params().len()));
        }
        Ok(MassFormula { kind, coeffs })
    }

    /// Evaluates the formula; a negative `M²` is an unphysical region.
    pub fn eval(&self, qn: &QuantumNumbers) -> Result<MassValue, MassError> {
        let basis = self.kind.basis(qn)?;
        let v: f64 = basis.iter().zip(&self.coeffs).map(|(b, c)| q_to_f64(b) * c).sum();
        match self.kind.target() {
            Target::Mass => Ok(MassValue { mass: v, mass_squared: v * v }),
            Target::MassSquared if v < 0.0 => Err(MassError::NegativeMassSquared(v)),
            Target::MassSquared => Ok(MassValue { mass: v.sqrt(), mass_squared: v }),
        }
    }
}

/// Exact value of the formula's target side.
pub fn eval_exact(kind: FormulaKind, coeffs: &[Q], qn: &QuantumNumbers) -> Result<Q, MassError> {
    if coeffs.len() != kind.params().len() {
        return Err(MassError::LengthMismatch(coeffs.len(), kind.params().len()));
    }
    let basis = kind.basis(qn)?;
    Ok(basis.iter().zip(coeffs).map(|(b, c)| b * c).sum())
}

/// The formula's target as a polynomial in its parameter symbols.
pub fn formula_poly(kind: FormulaKind, qn: &QuantumNumbers) -> Result<Poly, MassError> {
    let basis = kind.basis(qn)?;
    Ok(basis
        .iter()
        .zip(kind.params())
        .fold(Poly::zero(), |acc, (b, p)| acc.add(&Poly::var(p).scale(*b))))
}

/// Exact solve of a square system by building a reduced row basis in row
/// order. A row that reduces to zero is reported with the earlier rows it
/// is a combination of.
pub fn solve_exact(matrix: &[Vec<Q>], rhs: &[Q]) -> Result<Vec<Q>, MassError> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(MassError::Invalid("system must be square".into()));
    }
    // each row is [A | b | e_i]; the trailing part tracks row combinations
    let mut basis: Vec<(usize, Vec<Q>)> = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = matrix[i].clone();
        r.push(rhs[i]);
        r.extend((0..n).map(|k| if k == i { Q::one() } else { Q::zero() }));
        for (pc, b) in &basis {
            let f = r[*pc];
            if !f.is_zero() {
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= f * y);
            }
        }
        let Some(pc) = r[..n].iter().position(|x| !x.is_zero()) else {
            let depends_on = (0..n).filter(|&k| k != i && !r[n + 1 + k].is_zero()).collect();
            return Err(MassError::Singular { row: i, depends_on });
        };
        let inv = Q::one() / r[pc];
        r.iter_mut().for_each(|x| *x *= inv);
        for (_, b) in basis.iter_mut() {
            let f = b[pc];
            if !f.is_zero() {
                b.iter_mut().zip(&r).for_each(|(x, y)| *x -= f * y);
            }
        }
        basis.push((pc, r));
    }
    let mut x = vec![Q::zero(); n];
    for (pc, r) in basis {
        x[pc] = r[n];
    }
    Ok(x)
}

/// Coefficients reproducing three target values exactly (`M²` for the
/// triplet kinds, `M` for mass-target kinds).
pub fn solve_triplet_coeffs(targets: [Q; 3], qnums: [QuantumNumbers; 3], kind: FormulaKind) -> Result<Vec<Q>, MassError> {
    if kind.params().len() != 3 {
        return Err(MassError::Invalid(format!("{kind} has {} parameters, need 3", kind.params().len())));
    }
    let matrix: Vec<Vec<Q>> = qnums.iter().map(|qn| kind.basis(qn)).collect::<Result<_, _>>()?;
    solve_exact(&matrix, &targets)
}

/// Okubo hadron formula obtained by solving the quantized hyperbolic
/// paraboloid `c/4·y² − cz² − cz − by + x − a = 0` for `x`, with
/// `x → M, y → Y, z → J`.
pub fn paraboloid_mass() -> Poly {
    let (a, b, c) = (Poly::var("a"), Poly::var("b"), Poly::var("c"));
    let (x, y, z) = (Poly::var("x"), Poly::var("y"), Poly::var("z"));
    let surface = c
        .mul(&y)
        .mul(&y)
        .scale(qf(1, 4))
        .sub(&c.mul(&z).mul(&z))
        .sub(&c.mul(&z))
        .sub(&b.mul(&y))
        .add(&x)
        .sub(&a);
    surface
        .solve_linear("x")
        .expect("surface is linear in x")
        .substitute("y", &Poly::var("Y"))
        .substitute("z", &Poly::var("J"))
}

/// `a + bY + c{J(J+1) − Y²/4}` with `Y`, `J` symbolic.
pub fn okubo_poly() -> Poly {
    let (a, b, c) = (Poly::var("a"), Poly::var("b"), Poly::var("c"));
    let (y, j) = (Poly::var("Y"), Poly::var("J"));
    let bracket = j.mul(&j.add(&Poly::constant(Q::one()))).sub(&y.mul(&y).scale(qf(1, 4)));
    a.add(&b.mul(&y)).add(&c.mul(&bracket))
}

/// Paraboloid-derived mass minus the Okubo hadron formula.
pub fn okubo_paraboloid_identity() -> Poly {
    paraboloid_mass().sub(&okubo_poly())
}

/// `½(M_N + M_Ξ) − ¼(3M_Λ + M_Σ)` for the octet assignments, symbolic in `(a, b, c)`.
pub fn gell_mann_okubo_residual() -> Poly {
    let m = |y: Q, j: Q| formula_poly(FormulaKind::OkuboHadron, &QuantumNumbers::yj(y, j)).expect("Y and J given");
    let n = m(q(1), qf(1, 2));
    let xi = m(q(-1), qf(1, 2));
    let lambda = m(q(0), q(0));
    let sigma = m(q(0), q(1));
    n.add(&xi).scale(qf(1, 2)).sub(&lambda.scale(q(3)).add(&sigma).scale(qf(1, 4)))
}
