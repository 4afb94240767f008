//! One-particle pseudo-differential operators in momentum space,
//! `Σ c · m^b k^a E^n ∂^β` with `E = (k² + m²)^{1/2}` of a single species.
//!
//! `m²` is always rewritten as `E² − Σ k_j²`, so `b ∈ {0, 1}` and the
//! monomials form a basis: equality of PDOs is equality of term maps.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::SymbolicError;
use crate::expr::MultiIndex;
use crate::scalar::{fmt_q, q, q_to_f64, qf, Scalar, Q};

/// `m^mass · k^k · E^energy · ∂^deriv`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PdoMono {
    pub deriv: MultiIndex,
    pub mass: u8,
    pub k: [u8; 3],
    pub energy: i32,
}

impl PdoMono {
    const ONE: PdoMono = PdoMono {
        deriv: MultiIndex::ZERO,
        mass: 0,
        k: [0; 3],
        energy: 0,
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pdo {
    dim: u8,
    species: u8,
    terms: BTreeMap<PdoMono, Scalar>,
}

fn check_dim(dim: u8) -> Result<(), SymbolicError> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(SymbolicError::BadDimension(dim))
    }
}

impl Pdo {
    pub fn zero(dim: u8, species: u8) -> Self {
        Pdo {
            dim,
            species,
            terms: BTreeMap::new(),
        }
    }

    fn mono(dim: u8, species: u8, m: PdoMono, c: Scalar) -> Self {
        let mut p = Pdo::zero(dim, species);
        p.push(m, c);
        p
    }

    pub fn identity(dim: u8, species: u8) -> Result<Self, SymbolicError> {
        check_dim(dim)?;
        Ok(Pdo::mono(dim, species, PdoMono::ONE, Scalar::one()))
    }

    /// Multiplication by `k_axis`.
    pub fn momentum(dim: u8, species: u8, axis: u8) -> Result<Self, SymbolicError> {
        check_dim(dim)?;
        if axis == 0 || axis > dim {
            return Err(SymbolicError::AxisOutOfRange { axis, dim });
        }
        let mut m = PdoMono::ONE;
        m.k[axis as usize - 1] = 1;
        Ok(Pdo::mono(dim, species, m, Scalar::one()))
    }

    /// Multiplication by `E^n`.
    pub fn energy(dim: u8, species: u8, n: i32) -> Result<Self, SymbolicError> {
        check_dim(dim)?;
        let m = PdoMono {
            energy: n,
            ..PdoMono::ONE
        };
        Ok(Pdo::mono(dim, species, m, Scalar::one()))
    }

    /// `∂^β` with respect to the momentum.
    pub fn derivative(dim: u8, species: u8, beta: MultiIndex) -> Result<Self, SymbolicError> {
        check_dim(dim)?;
        if beta.max_axis() > dim {
            return Err(SymbolicError::AxisOutOfRange {
                axis: beta.max_axis(),
                dim,
            });
        }
        let m = PdoMono {
            deriv: beta,
            ..PdoMono::ONE
        };
        Ok(Pdo::mono(dim, species, m, Scalar::one()))
    }

    /// Multiplication by the mass `m`.
    pub fn mass(dim: u8, species: u8) -> Result<Self, SymbolicError> {
        check_dim(dim)?;
        let m = PdoMono {
            mass: 1,
            ..PdoMono::ONE
        };
        Ok(Pdo::mono(dim, species, m, Scalar::one()))
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn species(&self) -> u8 {
        self.species
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PdoMono, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · mono`, reducing `m²` on the way in.
    fn push(&mut self, mono: PdoMono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        if mono.mass >= 2 {
            let rest = PdoMono {
                mass: mono.mass - 2,
                ..mono
            };
            self.push(
                PdoMono {
                    energy: rest.energy + 2,
                    ..rest
                },
                c.clone(),
            );
            for j in 0..self.dim as usize {
                let mut m = rest;
                m.k[j] += 2;
                self.push(m, -&c);
            }
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(cur) => {
                let s = cur.add_same_atoms(&c);
                if s.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    fn compatible(&self, other: &Pdo) -> Result<(), SymbolicError> {
        if self.dim != other.dim {
            return Err(SymbolicError::DimensionMismatch(self.dim, other.dim));
        }
        if self.species != other.species {
            return Err(SymbolicError::MassMismatch(
                format!("m{}", self.species),
                format!("m{}", other.species),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Pdo) -> Result<Pdo, SymbolicError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.push(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Pdo) -> Result<Pdo, SymbolicError> {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Pdo {
        let mut out = Pdo::zero(self.dim, self.species);
        for (m, c) in &self.terms {
            out.push(*m, c * s);
        }
        out
    }

    /// `∂_axis` of the coefficient function of a monomial (derivative part ignored).
    fn coeff_derivative(&self, mono: &PdoMono, c: &Scalar, axis: usize, out: &mut Vec<(PdoMono, Scalar)>) {
        let a = mono.k[axis];
        if a > 0 {
            let mut m = *mono;
            m.k[axis] -= 1;
            out.push((m, c.scale(q(a as i128))));
        }
        if mono.energy != 0 {
            let mut m = *mono;
            m.k[axis] += 1;
            m.energy -= 2;
            out.push((m, c.scale(q(mono.energy as i128))));
        }
    }

    /// Leibniz composition `self ∘ other`.
    pub fn compose(&self, other: &Pdo) -> Result<Pdo, SymbolicError> {
        self.compatible(other)?;
        let mut out = Pdo::zero(self.dim, self.species);
        for (ma, ca) in &self.terms {
            // ∂^β (g ∂^γ) = Σ_{δ ≤ β} C(β,δ) (∂^δ g) ∂^{β-δ+γ}
            let beta = ma.deriv;
            for (mb, cb) in &other.terms {
                let mut layer: Vec<(PdoMono, Scalar, MultiIndex)> =
                    vec![(PdoMono { deriv: MultiIndex::ZERO, ..*mb }, cb.clone(), MultiIndex::ZERO)];
                for axis in beta.axes() {
                    let mut next = Vec::new();
                    for (m, c, taken) in &layer {
                        // derivative passes through to the right
                        next.push((*m, c.clone(), *taken));
                        let mut hit = Vec::new();
                        self.coeff_derivative(m, c, axis as usize - 1, &mut hit);
                        for (m2, c2) in hit {
                            next.push((m2, c2, taken.plus_axis(axis)));
                        }
                    }
                    layer = next;
                }
                for (m, c, taken) in layer {
                    let mut rest = beta;
                    for j in 0..3 {
                        rest.0[j] -= taken.0[j];
                    }
                    let k: [u8; 3] = std::array::from_fn(|j| ma.k[j] + m.k[j]);
                    let mono = PdoMono {
                        deriv: rest.plus(mb.deriv),
                        mass: ma.mass + m.mass,
                        k,
                        energy: ma.energy + m.energy,
                    };
                    out.push(mono, ca * &c);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Pdo) -> Result<Pdo, SymbolicError> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Coefficient function of the `∂^β` part at momentum `k`, for mass `m`.
    pub fn symbol_at(&self, beta: MultiIndex, k: &[f64], m: f64) -> Complex64 {
        let e = (k.iter().take(self.dim as usize).map(|x| x * x).sum::<f64>() + m * m).sqrt();
        let mut acc = Complex64::zero();
        for (mono, c) in self.terms.range(
            PdoMono { deriv: beta, mass: 0, k: [0; 3], energy: i32::MIN }..,
        ) {
            if mono.deriv != beta {
                break;
            }
            let mut f = m.powi(mono.mass as i32) * e.powi(mono.energy);
            for (kj, p) in k.iter().zip(mono.k).take(self.dim as usize) {
                f *= kj.powi(p as i32);
            }
            acc += Complex64::new(q_to_f64(&c.re), q_to_f64(&c.im)) * f;
        }
        acc
    }

    /// Distinct derivative multi-indices present, ascending.
    pub fn derivative_orders(&self) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = self.terms.keys().map(|m| m.deriv).collect();
        out.dedup();
        out
    }
}

impl fmt::Display for Pdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = if c.im.is_zero() { c.re < Q::zero() } else { c.re.is_zero() && c.im < Q::zero() };
            let c = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts = Vec::new();
            let coeff = if c.im.is_zero() {
                fmt_q(&c.re)
            } else if c.re.is_zero() {
                if c.im == q(1) { "i".into() } else { format!("{}i", fmt_q(&c.im)) }
            } else {
                c.to_string()
            };
            let unit = m.mass == 0 && m.k == [0; 3] && m.energy == 0 && m.deriv.is_zero();
            if coeff != "1" || unit {
                parts.push(coeff);
            }
            if m.mass == 1 {
                parts.push(format!("$m{}", self.species));
            }
            for (j, &a) in m.k.iter().enumerate() {
                match a {
                    0 => {}
                    1 => parts.push(format!("k[{}](k)", j + 1)),
                    _ => parts.push(format!("k[{}](k)^{a}", j + 1)),
                }
            }
            match m.energy {
                0 => {}
                1 => parts.push(format!("w_{}(k)", self.species)),
                n => parts.push(format!("w_{}(k)^{n}", self.species)),
            }
            if !m.deriv.is_zero() {
                let axes: Vec<String> = m.deriv.axes().iter().map(|a| a.to_string()).collect();
                parts.push(format!("d[{}]", axes.join(",")));
            }
            f.write_str(&parts.join(" "))?;
        }
        Ok(())
    }
}

/// Exact decomposition `target = Σ x_i basis_i` over Gaussian rationals.
/// Returns `None` when `target` is outside the span.
pub fn decompose_in_span(target: &Pdo, basis: &[Pdo]) -> Option<Vec<Scalar>> {
    let mut keys: Vec<PdoMono> = target.terms.keys().copied().collect();
    for b in basis {
        keys.extend(b.terms.keys().copied());
    }
    keys.sort();
    keys.dedup();
    let n = basis.len();
    // augmented rows over complex rationals (re, im)
    let get = |p: &Pdo, k: &PdoMono| p.terms.get(k).cloned().unwrap_or_else(Scalar::zero);
    let mut rows: Vec<Vec<Scalar>> = keys
        .iter()
        .map(|k| {
            let mut r: Vec<Scalar> = basis.iter().map(|b| get(b, k)).collect();
            r.push(get(target, k));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].recip().expect("nonzero pivot");
        for x in rows[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot = rows[row].clone();
                for (x, pv) in rows[r].iter_mut().zip(&pivot).take(n + 1) {
                    *x = &*x - &(pv * &f);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][n].clone();
    }
    Some(x)
}

/// Metric signature `diag(+, −, −, −)`, `ε₀₁₂₃ = +1`, and the overall sign
/// `s` in `[M_μν, P_ρ] = s·i(g_νρ P_μ − g_μρ P_ν)`. Every expected Poincaré
/// structure constant is generated from these three entries.
pub mod conventions {
    pub const METRIC: [i32; 4] = [1, -1, -1, -1];
    pub const EPSILON_0123: i32 = 1;
    pub const STRUCTURE_SIGN: i32 = -1;

    pub fn g(mu: usize, nu: usize) -> i32 {
        if mu == nu {
            METRIC[mu]
        } else {
            0
        }
    }

    /// Levi-Civita symbol with `ε₀₁₂₃ = EPSILON_0123`.
    pub fn epsilon(idx: [usize; 4]) -> i32 {
        let mut v = idx;
        let mut sign = EPSILON_0123;
        for i in 0..4 {
            for j in i + 1..4 {
                if v[i] == v[j] {
                    return 0;
                }
            }
        }
        for i in 0..4 {
            while v[i] != i {
                let t = v[i];
                v.swap(i, t);
                sign = -sign;
            }
        }
        sign
    }
}

/// Poincaré generator names; `M(μ, ν)` is stored with `μ < ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    P(u8),
    M(u8, u8),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::P(m) => write!(f, "P_{m}"),
            Generator::M(m, n) => write!(f, "M_{m}{n}"),
        }
    }
}

pub type GeneratorSet = BTreeMap<Generator, Pdo>;

/// `P_0 = E`, `P_j = k_j`, `M_lr = i(k_l ∂_r − k_r ∂_l)`,
/// `M_0l = i E ∂_l + (i/2) k_l E⁻¹` (the symmetrized `½{E, i∂_l}`).
pub fn poincare_generators(species: u8, dim: u8) -> Result<GeneratorSet, SymbolicError> {
    check_dim(dim)?;
    let i = Scalar::i();
    let mut out = BTreeMap::new();
    out.insert(Generator::P(0), Pdo::energy(dim, species, 1)?);
    for j in 1..=dim {
        out.insert(Generator::P(j), Pdo::momentum(dim, species, j)?);
    }
    for l in 1..=dim {
        let d = Pdo::derivative(dim, species, MultiIndex::axis(l))?;
        let e = Pdo::energy(dim, species, 1)?;
        let kl = Pdo::momentum(dim, species, l)?;
        let einv = Pdo::energy(dim, species, -1)?;
        let boost = e
            .compose(&d)?
            .scale(&i)
            .add(&kl.compose(&einv)?.scale(&Scalar::imag(qf(1, 2))))?;
        out.insert(Generator::M(0, l), boost);
        for r in l + 1..=dim {
            let kr = Pdo::momentum(dim, species, r)?;
            let dr = Pdo::derivative(dim, species, MultiIndex::axis(r))?;
            let rot = kl.compose(&dr)?.sub(&kr.compose(&d)?)?.scale(&i);
            out.insert(Generator::M(l, r), rot);
        }
    }
    Ok(out)
}

/// `M_μν` with antisymmetry applied (zero on the diagonal).
fn m_component(gens: &GeneratorSet, mu: usize, nu: usize) -> Option<(Generator, i32)> {
    match mu.cmp(&nu) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some((Generator::M(mu as u8, nu as u8), 1)),
        std::cmp::Ordering::Greater => Some((Generator::M(nu as u8, mu as u8), -1)),
    }
    .filter(|(g, _)| gens.contains_key(g))
}

/// Expected `[X, Y]` as integer multiples of `i` times generators, built from
/// [`conventions`].
pub fn expected_bracket(gens: &GeneratorSet, x: Generator, y: Generator) -> BTreeMap<Generator, i32> {
    use conventions::{g, STRUCTURE_SIGN as s};
    let mut out: BTreeMap<Generator, i32> = BTreeMap::new();
    let mut add = |gen: Option<(Generator, i32)>, c: i32| {
        if let Some((gen, sign)) = gen {
            if c != 0 {
                *out.entry(gen).or_insert(0) += sign * c;
            }
        }
    };
    let p = |mu: usize| Some((Generator::P(mu as u8), 1));
    match (x, y) {
        (Generator::P(_), Generator::P(_)) => {}
        (Generator::M(mu, nu), Generator::P(rho)) => {
            let (mu, nu, rho) = (mu as usize, nu as usize, rho as usize);
            add(p(mu), s * g(nu, rho));
            add(p(nu), -s * g(mu, rho));
        }
        (Generator::P(_), Generator::M(..)) => {
            for (k, v) in expected_bracket(gens, y, x) {
                *out.entry(k).or_insert(0) -= v;
            }
        }
        (Generator::M(mu, nu), Generator::M(rho, sigma)) => {
            let (mu, nu, rho, sigma) = (mu as usize, nu as usize, rho as usize, sigma as usize);
            add(m_component(gens, mu, sigma), s * g(nu, rho));
            add(m_component(gens, nu, sigma), -s * g(mu, rho));
            add(m_component(gens, mu, rho), -s * g(nu, sigma));
            add(m_component(gens, nu, rho), s * g(mu, sigma));
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Assembles `Σ c·i·gen` from [`expected_bracket`] output.
pub fn expected_pdo(gens: &GeneratorSet, table: &BTreeMap<Generator, i32>) -> Result<Pdo, SymbolicError> {
    let any = gens.values().next().expect("nonempty generator set");
    let mut acc = Pdo::zero(any.dim, any.species);
    for (gen, c) in table {
        acc = acc.add(&gens[gen].scale(&Scalar::imag(q(*c as i128))))?;
    }
    Ok(acc)
}

/// `P² = P_0² − Σ P_j²`.
pub fn mass_squared(gens: &GeneratorSet) -> Result<Pdo, SymbolicError> {
    let p0 = &gens[&Generator::P(0)];
    let mut acc = p0.compose(p0)?;
    for (g, p) in gens {
        if let Generator::P(j) = g {
            if *j > 0 {
                acc = acc.sub(&p.compose(p)?)?;
            }
        }
    }
    Ok(acc)
}

/// `W_α = ½ ε_{αβγδ} P^β M^{γδ}` for α = 0..3 (indices raised with the metric).
pub fn pauli_lubanski(gens: &GeneratorSet) -> Result<[Pdo; 4], SymbolicError> {
    use conventions::{epsilon, g};
    let any = gens.values().next().expect("nonempty generator set");
    if any.dim != 3 {
        return Err(SymbolicError::BadDimension(any.dim));
    }
    let mut w: Vec<Pdo> = Vec::with_capacity(4);
    for alpha in 0..4 {
        let mut acc = Pdo::zero(3, any.species);
        for beta in 0..4 {
            for gamma in 0..4 {
                for delta in 0..4 {
                    let eps = epsilon([alpha, beta, gamma, delta]);
                    if eps == 0 {
                        continue;
                    }
                    let (mgen, msign) = m_component(gens, gamma, delta).expect("distinct indices");
                    let c = eps * g(beta, beta) * g(gamma, gamma) * g(delta, delta) * msign;
                    let term = gens[&Generator::P(beta as u8)].compose(&gens[&mgen])?;
                    acc = acc.add(&term.scale(&Scalar::ratio(c as i128, 2)))?;
                }
            }
        }
        w.push(acc);
    }
    Ok(w.try_into().expect("four components"))
}

/// `W² = g^{αα} W_α W_α`.
pub fn pauli_lubanski_square(gens: &GeneratorSet) -> Result<Pdo, SymbolicError> {
    let w = pauli_lubanski(gens)?;
    let mut acc = Pdo::zero(3, w[0].species);
    for (alpha, wa) in w.iter().enumerate() {
        let sq = wa.compose(wa)?;
        acc = acc.add(&sq.scale(&Scalar::int(conventions::g(alpha, alpha) as i128)))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(d: u8) -> GeneratorSet {
        poincare_generators(1, d).unwrap()
    }

    #[test]
    fn heisenberg_pair() {
        let k1 = Pdo::momentum(3, 1, 1).unwrap();
        let d1 = Pdo::derivative(3, 1, MultiIndex::axis(1)).unwrap();
        let c = d1.commutator(&k1).unwrap();
        assert_eq!(c, Pdo::identity(3, 1).unwrap());
    }

    #[test]
    fn identity_and_energy_inverse() {
        let id = Pdo::identity(2, 1).unwrap();
        let g = gens(2);
        let a = &g[&Generator::M(0, 1)];
        assert_eq!(&id.compose(a).unwrap(), a);
        let e = Pdo::energy(2, 1, 1).unwrap();
        let einv = Pdo::energy(2, 1, -1).unwrap();
        assert_eq!(e.compose(&einv).unwrap(), id);
    }

    #[test]
    fn generator_counts() {
        assert_eq!(gens(3).len(), 10);
        let g1: Vec<Generator> = gens(1).keys().copied().collect();
        assert_eq!(g1, vec![Generator::P(0), Generator::P(1), Generator::M(0, 1)]);
    }

    #[test]
    fn mass_shell() {
        for d in 1..=3 {
            let p2 = mass_squared(&gens(d)).unwrap();
            let m = Pdo::mass(d, 1).unwrap();
            assert_eq!(p2, m.compose(&m).unwrap(), "d={d}: {p2}");
        }
    }

    #[test]
    fn boost_translation() {
        let g = gens(3);
        let c = g[&Generator::M(0, 2)].commutator(&g[&Generator::P(2)]).unwrap();
        assert_eq!(c, g[&Generator::P(0)].scale(&Scalar::i()));
    }

    #[test]
    fn full_table_matches_conventions() {
        for d in 1..=3 {
            let g = gens(d);
            let names: Vec<Generator> = g.keys().copied().collect();
            for (a, x) in names.iter().enumerate() {
                for y in &names[a + 1..] {
                    let c = g[x].commutator(&g[y]).unwrap();
                    let e = expected_pdo(&g, &expected_bracket(&g, *x, *y)).unwrap();
                    assert_eq!(c, e, "[{x},{y}] = {c}");
                }
            }
        }
    }

    #[test]
    fn brackets_decompose_in_span() {
        let g = gens(3);
        let basis: Vec<Pdo> = g.values().cloned().collect();
        let c = g[&Generator::M(1, 2)].commutator(&g[&Generator::M(2, 3)]).unwrap();
        let x = decompose_in_span(&c, &basis).unwrap();
        let m13 = g.keys().position(|k| *k == Generator::M(1, 3)).unwrap();
        assert_eq!(x[m13], Scalar::i());
        assert!(decompose_in_span(&Pdo::mass(3, 1).unwrap(), &basis).is_none());
    }

    #[test]
    fn pauli_lubanski_vanishes() {
        let g = gens(3);
        for w in pauli_lubanski(&g).unwrap() {
            assert!(w.is_zero(), "{w}");
        }
        assert!(pauli_lubanski_square(&g).unwrap().is_zero());
    }

    #[test]
    fn species_mismatch_rejected() {
        let a = Pdo::energy(3, 1, 1).unwrap();
        let b = Pdo::energy(3, 2, 1).unwrap();
        assert!(matches!(a.compose(&b), Err(SymbolicError::MassMismatch(..))));
        assert!(pauli_lubanski(&gens(2)).is_err());
    }

    #[test]
    fn epsilon_signs() {
        assert_eq!(conventions::epsilon([0, 1, 2, 3]), 1);
        assert_eq!(conventions::epsilon([1, 0, 2, 3]), -1);
        assert_eq!(conventions::epsilon([1, 2, 3, 0]), -1);
        assert_eq!(conventions::epsilon([0, 0, 2, 3]), 0);
    }
}
