use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Grid, GridConfig};
use crate::error::NumericError;

/// One component `ψ_i(k)` of a block state with its energy-sign label.
#[derive(Debug, Clone, PartialEq)]
pub struct StateBlock {
    /// 0-based species index.
    pub species: usize,
    /// Energy-sign label `ε ∈ {+1, −1}`.
    pub sign: i8,
    pub values: Vec<Complex64>,
}

/// State on `⊕_i L²(grid)`; per-block norms are the species probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockState {
    pub blocks: Vec<StateBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `H̃ = diag((P² + m_i²)^{1/2})` acting on positive-energy components.
    Plus,
    /// `H′ = diag(H̃, H̃)` on `(Ψ̃₊, Ψ̃₋)`; the sign is a carried label.
    Doubled,
}

impl BlockState {
    /// One positive-energy block per species.
    pub fn plus(blocks: Vec<Vec<Complex64>>) -> Self {
        BlockState {
            blocks: blocks
                .into_iter()
                .enumerate()
                .map(|(species, values)| StateBlock { species, sign: 1, values })
                .collect(),
        }
    }

    pub fn norm_sq(&self, grid: &Grid) -> f64 {
        self.blocks.iter().map(|b| grid.norm_sq(&b.values)).sum()
    }

    /// Per-block probabilities `∫|ψ_i|²`, in block order.
    pub fn probabilities(&self, grid: &Grid) -> Vec<f64> {
        self.blocks.iter().map(|b| grid.norm_sq(&b.values)).collect()
    }

    pub fn normalized(&self, grid: &Grid) -> Self {
        let n = self.norm_sq(grid).sqrt();
        BlockState {
            blocks: self
                .blocks
                .iter()
                .map(|b| StateBlock {
                    values: b.values.iter().map(|z| z / n).collect(),
                    ..b.clone()
                })
                .collect(),
        }
    }

    /// `⟨M²⟩ = Σ_i m_i² ∫|ψ_i|²`.
    pub fn expectation_mass_squared(&self, grid: &Grid, masses: &[f64]) -> Result<f64, NumericError> {
        self.blocks
            .iter()
            .map(|b| {
                let m = masses
                    .get(b.species)
                    .ok_or(NumericError::BlockOutOfRange(b.species, masses.len()))?;
                Ok(m * m * grid.norm_sq(&b.values))
            })
            .sum()
    }

    fn validate(&self, grid: &Grid, masses: &[f64], variant: Variant) -> Result<(), NumericError> {
        for b in &self.blocks {
            if b.values.len() != grid.len() {
                return Err(NumericError::Shape(format!(
                    "block of species {} has {} values, grid has {}",
                    b.species,
                    b.values.len(),
                    grid.len()
                )));
            }
            if b.species >= masses.len() {
                return Err(NumericError::BlockOutOfRange(b.species, masses.len()));
            }
            if b.sign != 1 && b.sign != -1 {
                return Err(NumericError::Invalid(format!("energy sign must be ±1, got {}", b.sign)));
            }
            if variant == Variant::Plus && b.sign != 1 {
                return Err(NumericError::Invalid("plus variant takes positive-energy blocks only".into()));
            }
        }
        Ok(())
    }
}

/// `ψ_i(k) → exp(−i E_i(k) t) ψ_i(k)` on every block. Under the doubled
/// variant both sign sectors evolve with the same `H̃`.
pub fn evolve(
    state: &BlockState,
    grid: &Grid,
    masses: &[f64],
    variant: Variant,
    t: f64,
    strict: bool,
) -> Result<BlockState, NumericError> {
    state.validate(grid, masses, variant)?;
    if strict {
        let n = state.norm_sq(grid).sqrt();
        if (n - 1.0).abs() > 1e-10 {
            return Err(NumericError::Unnormalized(n));
        }
    }
    let blocks = state
        .blocks
        .iter()
        .map(|b| {
            let e = grid.energy(masses[b.species]);
            let values = b
                .values
                .iter()
                .zip(&e)
                .map(|(z, en)| z * Complex64::new(0.0, -en.re * t).exp())
                .collect();
            StateBlock { values, ..b.clone() }
        })
        .collect();
    Ok(BlockState { blocks })
}

/// Sorted spectrum of `H̃` (plus) or `H′ = diag(H̃, H̃)` (doubled).
pub fn hamiltonian_spectrum(grid: &Grid, masses: &[f64], variant: Variant) -> Vec<f64> {
    let copies = match variant {
        Variant::Plus => 1,
        Variant::Doubled => 2,
    };
    let mut out = Vec::with_capacity(copies * masses.len() * grid.len());
    for _ in 0..copies {
        for &m in masses {
            out.extend(grid.energy(m).iter().map(|z| z.re));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSnapshot {
    pub species: usize,
    pub sign: i8,
    pub values: Vec<[f64; 2]>,
}

/// JSON container for states: grid configuration plus `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub grid: GridConfig,
    pub blocks: Vec<BlockSnapshot>,
}

/// Dense matrix container, row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSnapshot {
    pub grid: GridConfig,
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<[f64; 2]>,
}

impl StateSnapshot {
    pub fn from_state(grid: &Grid, state: &BlockState) -> Self {
        StateSnapshot {
            grid: grid.config(),
            blocks: state
                .blocks
                .iter()
                .map(|b| BlockSnapshot {
                    species: b.species,
                    sign: b.sign,
                    values: b.values.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        }
    }

    pub fn to_state(&self) -> BlockState {
        BlockState {
            blocks: self
                .blocks
                .iter()
                .map(|b| StateBlock {
                    species: b.species,
                    sign: b.sign,
                    values: b.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
                })
                .collect(),
        }
    }
}

impl MatrixSnapshot {
    pub fn from_matrix(grid: &Grid, m: &nalgebra::DMatrix<Complex64>) -> Self {
        let mut values = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                values.push([m[(r, c)].re, m[(r, c)].im]);
            }
        }
        MatrixSnapshot {
            grid: grid.config(),
            rows: m.nrows(),
            cols: m.ncols(),
            values,
        }
    }
}
