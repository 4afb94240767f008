use num_complex::Complex64;

use super::grid::Grid;
use crate::error::NumericError;
use crate::pdo::Pdo;

/// Applies a PDO on the grid: each `∂^β` through the grid's scheme, each
/// coefficient pointwise. `mass` supplies the value of the species mass.
pub fn eval_pdo<F>(a: &Pdo, grid: &Grid, psi: &[Complex64], mass: F) -> Result<Vec<Complex64>, NumericError>
where
    F: Fn(u8) -> Option<f64>,
{
    if a.dim() != grid.dim() {
        return Err(NumericError::Shape(format!(
            "PDO dimension {} on a {}-dimensional grid",
            a.dim(),
            grid.dim()
        )));
    }
    if psi.len() != grid.len() {
        return Err(NumericError::Shape("grid function length".into()));
    }
    let m = mass(a.species()).ok_or_else(|| NumericError::UnboundAtom(format!("m{}", a.species())))?;
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for beta in a.derivative_orders() {
        let d = grid.derivative(psi, beta);
        for (idx, (o, v)) in out.iter_mut().zip(&d).enumerate() {
            *o += a.symbol_at(beta, &grid.point(idx), m) * v;
        }
    }
    Ok(out)
}
