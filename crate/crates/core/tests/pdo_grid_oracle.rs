mod common;

use massop::fock::{gaussian_profile, Grid, GridConfig};
use massop::pdo::{mass_squared, pauli_lubanski, poincare_generators, Generator, Pdo};
use massop::Scalar;

#[test]
fn one_dimensional_brackets_match_numeric_commutators() {
    for (name, r) in common::poincare_grid_residuals(1, 64, 0.4, 1.0) {
        assert!(r < 1e-6, "{name}: residual {r:e}");
    }
}

#[test]
fn two_dimensional_brackets_match_numeric_commutators() {
    for (name, r) in common::poincare_grid_residuals(2, 64, 0.4, 1.3) {
        assert!(r < 1e-6, "{name}: residual {r:e}");
    }
}

#[test]
fn boost_momentum_bracket_is_energy() {
    let gens = poincare_generators(1, 1).unwrap();
    let grid = Grid::new(GridConfig::spectral(1, 64)).unwrap();
    let psi = gaussian_profile(&grid, 0.4, [0.2, 0.0, 0.0]);
    let m = 0.8;
    let (b, p1) = (&gens[&Generator::M(0, 1)], &gens[&Generator::P(1)]);
    let bp = common::apply(b, &grid, &common::apply(p1, &grid, &psi, m), m);
    let pb = common::apply(p1, &grid, &common::apply(b, &grid, &psi, m), m);
    let ip0 = common::apply(&gens[&Generator::P(0)].scale(&Scalar::i()), &grid, &psi, m);
    let err: f64 = bp
        .iter()
        .zip(&pb)
        .zip(&ip0)
        .map(|((x, y), z)| (x - y - z).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(err * grid.spacing().sqrt() < 1e-8, "{err:e}");
}

#[test]
fn mass_squared_is_scalar() {
    for d in 1..=3 {
        let gens = poincare_generators(2, d).unwrap();
        let m2 = Pdo::mass(d, 2).unwrap();
        assert_eq!(mass_squared(&gens).unwrap(), m2.compose(&m2).unwrap());
    }
}

#[test]
fn pauli_lubanski_components_vanish_symbolically() {
    let gens = poincare_generators(1, 3).unwrap();
    for w in pauli_lubanski(&gens).unwrap() {
        assert!(w.is_zero());
    }
}

#[test]
fn pauli_lubanski_square_vanishes_on_a_packet() {
    let r = common::w_square_relative_norm(32, 0.5, 1.0);
    assert!(r < 1e-8, "relative norm {r:e}");
}
