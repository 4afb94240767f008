use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::MassError;
use crate::scalar::Q;

/// Single diagonal generator `A` and lookup tables with `φ_n(A) = A_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VonNeumann {
    /// Diagonal of `A`: the enumeration index of each joint-spectrum point.
    pub a: Vec<usize>,
    /// Joint-spectrum points in enumeration order.
    pub points: Vec<Vec<f64>>,
    /// `φ_n` as `index → value` tables.
    pub phi: Vec<BTreeMap<usize, f64>>,
}

impl VonNeumann {
    /// `φ_n` applied to the diagonal of `A`.
    pub fn reconstruct(&self, n: usize) -> Vec<f64> {
        self.a.iter().map(|k| self.phi[n][k]).collect()
    }
}

fn cmp_point(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Enumerates the distinct joint eigenvalue tuples of commuting diagonal
/// operators (lexicographic order) and labels each basis vector by its tuple's
/// index.
pub fn von_neumann_generator(ops: &[Vec<f64>]) -> Result<VonNeumann, MassError> {
    let Some(first) = ops.first() else {
        return Err(MassError::Invalid("need at least one operator".into()));
    };
    let k = first.len();
    if k == 0 {
        return Err(MassError::Invalid("dimension must be at least 1".into()));
    }
    if let Some(bad) = ops.iter().find(|o| o.len() != k) {
        return Err(MassError::LengthMismatch(bad.len(), k));
    }
    let joint: Vec<Vec<f64>> = (0..k).map(|i| ops.iter().map(|o| o[i]).collect()).collect();
    let mut points = joint.clone();
    points.sort_by(|a, b| cmp_point(a, b));
    points.dedup_by(|a, b| cmp_point(a, b).is_eq());
    let a = joint
        .iter()
        .map(|p| points.binary_search_by(|x| cmp_point(x, p)).expect("point enumerated"))
        .collect();
    let phi = (0..ops.len())
        .map(|n| points.iter().enumerate().map(|(idx, p)| (idx, p[n])).collect())
        .collect();
    Ok(VonNeumann { a, points, phi })
}

/// `[+mλ, −mλ]` per block.
pub fn kappa_spectrum(masses: &[Q], lambdas: &[Q]) -> Result<Vec<[Q; 2]>, MassError> {
    if masses.len() != lambdas.len() {
        return Err(MassError::LengthMismatch(masses.len(), lambdas.len()));
    }
    if let Some(i) = lambdas.iter().position(Zero::is_zero) {
        return Err(MassError::ZeroLambda(i));
    }
    Ok(masses.iter().zip(lambdas).map(|(m, l)| [m * l, -(m * l)]).collect())
}

/// `M = κ/λ`.
pub fn mass_from_kappa(kappa: Q, lambda: Q) -> Result<Q, MassError> {
    if lambda.is_zero() {
        return Err(MassError::ZeroLambda(0));
    }
    Ok(kappa / lambda)
}
