use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::grid::Grid;
use crate::error::NumericError;
use crate::expr::MultiIndex;

/// One summand of a block.
#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    /// Pointwise multiplication.
    Diagonal(Vec<Complex64>),
    /// `left ⊙ ∂^deriv (right ⊙ ψ)`.
    Differential {
        left: Vec<Complex64>,
        deriv: MultiIndex,
        right: Vec<Complex64>,
    },
    /// `u ⟨v, ψ⟩` with the grid inner product.
    RankOne { u: Vec<Complex64>, v: Vec<Complex64> },
}

impl Entry {
    fn apply(&self, grid: &Grid, psi: &[Complex64]) -> Vec<Complex64> {
        match self {
            Entry::Diagonal(d) => d.iter().zip(psi).map(|(a, b)| a * b).collect(),
            Entry::Differential { left, deriv, right } => {
                let inner: Vec<Complex64> = right.iter().zip(psi).map(|(a, b)| a * b).collect();
                let dpsi = grid.derivative(&inner, *deriv);
                left.iter().zip(&dpsi).map(|(a, b)| a * b).collect()
            }
            Entry::RankOne { u, v } => {
                let c = grid.inner(v, psi);
                u.iter().map(|a| a * c).collect()
            }
        }
    }
}

/// Operator on `⊕_i L²(grid)`, one block per species. Block `(i, j)` maps
/// component `j` into component `i` (0-based).
#[derive(Debug, Clone)]
pub struct BlockOperator {
    grid: Arc<Grid>,
    species: usize,
    blocks: BTreeMap<(usize, usize), Vec<Entry>>,
}

impl BlockOperator {
    pub fn zero(grid: Arc<Grid>, species: usize) -> Self {
        BlockOperator {
            grid,
            species,
            blocks: BTreeMap::new(),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn species(&self) -> usize {
        self.species
    }

    /// Total dimension `species · n^d`.
    pub fn total_dim(&self) -> usize {
        self.species * self.grid.len()
    }

    pub fn push(&mut self, i: usize, j: usize, e: Entry) -> Result<(), NumericError> {
        for b in [i, j] {
            if b >= self.species {
                return Err(NumericError::BlockOutOfRange(b, self.species));
            }
        }
        self.blocks.entry((i, j)).or_default().push(e);
        Ok(())
    }

    pub fn block_indices(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.blocks.keys()
    }

    /// Applies to a state given as one grid function per species.
    pub fn apply(&self, psi: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>, NumericError> {
        if psi.len() != self.species || psi.iter().any(|p| p.len() != self.grid.len()) {
            return Err(NumericError::Shape(format!(
                "expected {} blocks of length {}",
                self.species,
                self.grid.len()
            )));
        }
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.grid.len()]; self.species];
        for (&(i, j), entries) in &self.blocks {
            for e in entries {
                for (o, v) in out[i].iter_mut().zip(e.apply(&self.grid, &psi[j])) {
                    *o += v;
                }
            }
        }
        Ok(out)
    }

    /// Applies to a flat vector (blocks concatenated in species order).
    pub fn apply_flat(&self, x: &[Complex64]) -> Result<Vec<Complex64>, NumericError> {
        let n = self.grid.len();
        if x.len() != self.total_dim() {
            return Err(NumericError::Shape(format!("expected length {}", self.total_dim())));
        }
        let parts: Vec<Vec<Complex64>> = x.chunks(n).map(|c| c.to_vec()).collect();
        Ok(self.apply(&parts)?.concat())
    }

    /// Dense matrix in the flat basis (unit vectors, no quadrature weight).
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.grid.len();
        let dim = self.total_dim();
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for (&(i, j), entries) in &self.blocks {
            for e in entries {
                match e {
                    Entry::Diagonal(d) => {
                        for (p, v) in d.iter().enumerate() {
                            m[(i * n + p, j * n + p)] += v;
                        }
                    }
                    Entry::RankOne { u, v } => {
                        let w = self.grid.weight();
                        for (p, a) in u.iter().enumerate() {
                            for (q, b) in v.iter().enumerate() {
                                m[(i * n + p, j * n + q)] += a * b.conj() * w;
                            }
                        }
                    }
                    Entry::Differential { .. } => {
                        let mut unit = vec![Complex64::new(0.0, 0.0); n];
                        for q in 0..n {
                            unit[q] = Complex64::new(1.0, 0.0);
                            let col = e.apply(&self.grid, &unit);
                            unit[q] = Complex64::new(0.0, 0.0);
                            for (p, v) in col.iter().enumerate() {
                                m[(i * n + p, j * n + q)] += v;
                            }
                        }
                    }
                }
            }
        }
        m
    }
}

/// `max |A − A†|`
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Block-diagonal generator kinds. Axes are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    /// `P_0 = E`
    Energy,
    /// `P_j = k_j`
    Momentum(u8),
    /// `M_lr = i(k_l ∂_r − k_r ∂_l)`
    Rotation(u8, u8),
    /// `M_0l = (i/2)(E ∂_l + ∂_l E)`
    Boost(u8),
    /// `M² = P_0² − Σ P_j²`, exactly `m_i²` on block `i`
    MassSquared,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Energy => write!(f, "P_0"),
            GeneratorKind::Momentum(j) => write!(f, "P_{j}"),
            GeneratorKind::Rotation(l, r) => write!(f, "M_{l}{r}"),
            GeneratorKind::Boost(l) => write!(f, "M_0{l}"),
            GeneratorKind::MassSquared => write!(f, "M2"),
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = NumericError;

    /// Accepts `P_0`, `P_2`, `M_12`, `M_03`, `M2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumericError::Invalid(format!("unknown generator `{s}`"));
        if s == "M2" {
            return Ok(GeneratorKind::MassSquared);
        }
        let digits: Vec<u8> = s
            .get(2..)
            .ok_or_else(bad)?
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        match (s.get(..2), digits.as_slice()) {
            (Some("P_"), [0]) => Ok(GeneratorKind::Energy),
            (Some("P_"), [j]) => Ok(GeneratorKind::Momentum(*j)),
            (Some("M_"), [0, l]) => Ok(GeneratorKind::Boost(*l)),
            (Some("M_"), [l, r]) if l < r => Ok(GeneratorKind::Rotation(*l, *r)),
            _ => Err(bad()),
        }
    }
}

fn check_masses(masses: &[f64]) -> Result<(), NumericError> {
    if masses.is_empty() || masses.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
        return Err(NumericError::Invalid("masses must be positive and finite".into()));
    }
    Ok(())
}

/// Block-diagonal realization of a one-particle generator, block `i` using mass `m_i`.
pub fn block_generator(kind: GeneratorKind, grid: &Arc<Grid>, masses: &[f64]) -> Result<BlockOperator, NumericError> {
    check_masses(masses)?;
    let d = grid.dim();
    let axis_ok = |a: u8| (1..=d).contains(&a);
    let valid = match kind {
        GeneratorKind::Momentum(j) | GeneratorKind::Boost(j) => axis_ok(j),
        GeneratorKind::Rotation(l, r) => axis_ok(l) && axis_ok(r) && l < r,
        _ => true,
    };
    if !valid {
        return Err(NumericError::KindDimension(kind.to_string(), d));
    }
    let i_unit = Complex64::new(0.0, 1.0);
    let ones = vec![Complex64::new(1.0, 0.0); grid.len()];
    let component = |a: u8| grid.sample_real(|k| k[a as usize - 1]);
    let mut op = BlockOperator::zero(grid.clone(), masses.len());
    for (b, &m) in masses.iter().enumerate() {
        match kind {
            GeneratorKind::Energy => op.push(b, b, Entry::Diagonal(grid.energy(m)))?,
            GeneratorKind::Momentum(j) => op.push(b, b, Entry::Diagonal(component(j)))?,
            GeneratorKind::MassSquared => {
                op.push(b, b, Entry::Diagonal(vec![Complex64::new(m * m, 0.0); grid.len()]))?
            }
            GeneratorKind::Rotation(l, r) => {
                let kl: Vec<Complex64> = component(l).into_iter().map(|x| x * i_unit).collect();
                let kr: Vec<Complex64> = component(r).into_iter().map(|x| -x * i_unit).collect();
                op.push(b, b, Entry::Differential { left: kl, deriv: MultiIndex::axis(r), right: ones.clone() })?;
                op.push(b, b, Entry::Differential { left: kr, deriv: MultiIndex::axis(l), right: ones.clone() })?;
            }
            GeneratorKind::Boost(l) => {
                let e = grid.energy(m);
                let half_i = Complex64::new(0.0, 0.5);
                let left: Vec<Complex64> = e.iter().map(|x| x * half_i).collect();
                op.push(b, b, Entry::Differential { left, deriv: MultiIndex::axis(l), right: ones.clone() })?;
                op.push(b, b, Entry::Differential {
                    left: vec![half_i; grid.len()],
                    deriv: MultiIndex::axis(l),
                    right: e,
                })?;
            }
        }
    }
    Ok(op)
}

/// Coupling `D_ij`: block `(i, j)` is `F ⟨F′, ·⟩` with `F′ = conj(F)`, and block
/// `(j, i)` is its adjoint, so the operator is self-adjoint for any profile.
pub fn coupling_operator(
    i: usize,
    j: usize,
    profile: &[Complex64],
    grid: &Arc<Grid>,
    species: usize,
) -> Result<BlockOperator, NumericError> {
    if i == j {
        return Err(NumericError::SameBlock(i));
    }
    if profile.len() != grid.len() {
        return Err(NumericError::Shape("profile length differs from grid".into()));
    }
    let f = profile.to_vec();
    let f_prime: Vec<Complex64> = profile.iter().map(|z| z.conj()).collect();
    let mut op = BlockOperator::zero(grid.clone(), species);
    op.push(i, j, Entry::RankOne { u: f.clone(), v: f_prime.clone() })?;
    op.push(j, i, Entry::RankOne { u: f_prime, v: f })?;
    Ok(op)
}
