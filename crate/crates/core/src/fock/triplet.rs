use std::sync::Arc;

use serde::Serialize;

use super::analysis::{commutant_dimension, nested_commutator_rank};
use super::block::{block_generator, coupling_operator, GeneratorKind};
use super::grid::{gaussian_profile, Grid, GridConfig};
use crate::error::NumericError;

/// Depth used for the nested-commutator witness.
pub const WITNESS_DEPTH: usize = 4;

/// Eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: usize,
}

/// Outcome of assembling the multi-species representation on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripletReport {
    pub grid: GridConfig,
    pub masses: Vec<f64>,
    pub mass_squared_spectrum: Vec<Level>,
    /// Commutant of `{P_α blocks} ∪ {D_ij, i < j}`.
    pub commutant_dimension: usize,
    /// Ranks of nested brackets of `{P_0, D_12, D_23, …}` at depths `1..=4`.
    pub nested_ranks: Vec<usize>,
}

impl TripletReport {
    pub fn irreducible(&self) -> bool {
        self.commutant_dimension == 1
    }

    pub fn ranks_strictly_increase(&self) -> bool {
        self.nested_ranks.windows(2).all(|w| w[0] < w[1])
    }
}

/// Builds `M²`, the translations and the couplings with one shared Gaussian
/// profile, then measures irreducibility and the nested-bracket growth.
pub fn triplet_construction(config: GridConfig, masses: &[f64], sigma: f64) -> Result<TripletReport, NumericError> {
    if masses.len() < 2 {
        return Err(NumericError::Invalid("need at least two species".into()));
    }
    let grid = Arc::new(Grid::new(config)?);
    let m2 = block_generator(GeneratorKind::MassSquared, &grid, masses)?.to_dense();
    let mut spectrum: Vec<Level> = Vec::new();
    for r in 0..m2.nrows() {
        let v = m2[(r, r)].re;
        match spectrum.iter_mut().find(|l| l.value == v) {
            Some(l) => l.multiplicity += 1,
            None => spectrum.push(Level { value: v, multiplicity: 1 }),
        }
    }
    spectrum.sort_by(|a, b| a.value.total_cmp(&b.value));

    let profile = gaussian_profile(&grid, sigma, [0.0; 3]);
    let s = masses.len();
    let mut translations = vec![block_generator(GeneratorKind::Energy, &grid, masses)?.to_dense()];
    for j in 1..=grid.dim() {
        translations.push(block_generator(GeneratorKind::Momentum(j), &grid, masses)?.to_dense());
    }
    let mut all = translations.clone();
    for i in 0..s {
        for j in i + 1..s {
            all.push(coupling_operator(i, j, &profile, &grid, s)?.to_dense());
        }
    }
    let commutant = commutant_dimension(&all)?;

    let mut chain = vec![translations[0].clone()];
    for i in 0..s - 1 {
        chain.push(coupling_operator(i, i + 1, &profile, &grid, s)?.to_dense());
    }
    let nested_ranks = nested_commutator_rank(&chain, WITNESS_DEPTH)?;
    Ok(TripletReport {
        grid: config,
        masses: masses.to_vec(),
        mass_squared_spectrum: spectrum,
        commutant_dimension: commutant,
        nested_ranks,
    })
}
