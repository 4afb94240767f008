#![allow(dead_code)]

use massop::fock::{eval_pdo, gaussian_profile, Grid, GridConfig};
use massop::pdo::conventions::{epsilon, g};
use massop::pdo::{expected_bracket, expected_pdo, poincare_generators, Generator, GeneratorSet, Pdo};
use num_complex::Complex64;

pub type Field = Vec<Complex64>;

pub const CORPUS: &str = include_str!("../data/corpus.txt");

pub fn corpus() -> Vec<&'static str> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

pub fn apply(p: &Pdo, grid: &Grid, psi: &[Complex64], mass: f64) -> Field {
    eval_pdo(p, grid, psi, |_| Some(mass)).unwrap()
}

fn norm(grid: &Grid, v: &[Complex64]) -> f64 {
    grid.norm_sq(v).sqrt()
}

fn diff(a: &[Complex64], b: &[Complex64]) -> Field {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// For every generator pair, `‖XYψ − YXψ − Cψ‖ / max(‖XYψ‖, ‖YXψ‖)` with `C`
/// the expected structure-constant combination, all applied numerically.
pub fn poincare_grid_residuals(dim: u8, n: usize, sigma: f64, mass: f64) -> Vec<(String, f64)> {
    let gens = poincare_generators(1, dim).unwrap();
    let grid = Grid::new(GridConfig::spectral(dim, n)).unwrap();
    let psi = gaussian_profile(&grid, sigma, [0.2, -0.1, 0.15]);
    let keys: Vec<Generator> = gens.keys().copied().collect();
    let mut out = Vec::new();
    for (i, &x) in keys.iter().enumerate() {
        for &y in &keys[i + 1..] {
            let xy = apply(&gens[&x], &grid, &apply(&gens[&y], &grid, &psi, mass), mass);
            let yx = apply(&gens[&y], &grid, &apply(&gens[&x], &grid, &psi, mass), mass);
            let expect = expected_pdo(&gens, &expected_bracket(&gens, x, y)).unwrap();
            let c = apply(&expect, &grid, &psi, mass);
            let r = norm(&grid, &diff(&diff(&xy, &yx), &c));
            let scale = norm(&grid, &xy).max(norm(&grid, &yx)).max(1e-300);
            out.push((format!("[{x},{y}]"), r / scale));
        }
    }
    out
}

fn m_applied(gens: &GeneratorSet, grid: &Grid, psi: &[Complex64], mass: f64, mu: usize, nu: usize) -> Field {
    let (gen, sign) = if mu < nu {
        (Generator::M(mu as u8, nu as u8), 1.0)
    } else {
        (Generator::M(nu as u8, mu as u8), -1.0)
    };
    apply(&gens[&gen], grid, psi, mass).into_iter().map(|z| z * sign).collect()
}

/// `W_α ψ = ½ ε_{αβγδ} g^ββ g^γγ g^δδ P_β(M_γδ ψ)`, each factor applied on the grid.
pub fn pauli_lubanski_numeric(gens: &GeneratorSet, grid: &Grid, psi: &[Complex64], mass: f64, alpha: usize) -> Field {
    let mut acc = vec![Complex64::new(0.0, 0.0); psi.len()];
    for beta in 0..4 {
        for gamma in 0..4 {
            for delta in 0..4 {
                let eps = epsilon([alpha, beta, gamma, delta]);
                if eps == 0 {
                    continue;
                }
                let c = 0.5 * (eps * g(beta, beta) * g(gamma, gamma) * g(delta, delta)) as f64;
                let m = m_applied(gens, grid, psi, mass, gamma, delta);
                let pm = apply(&gens[&Generator::P(beta as u8)], grid, &m, mass);
                for (a, v) in acc.iter_mut().zip(pm) {
                    *a += v * c;
                }
            }
        }
    }
    acc
}

/// `‖W²ψ‖ / ‖ψ‖` for a normalized Gaussian packet in three dimensions.
pub fn w_square_relative_norm(n: usize, sigma: f64, mass: f64) -> f64 {
    let gens = poincare_generators(1, 3).unwrap();
    let grid = Grid::new(GridConfig::spectral(3, n)).unwrap();
    let psi = gaussian_profile(&grid, sigma, [0.2, -0.1, 0.15]);
    let mut w2 = vec![Complex64::new(0.0, 0.0); psi.len()];
    for alpha in 0..4 {
        let once = pauli_lubanski_numeric(&gens, &grid, &psi, mass, alpha);
        let twice = pauli_lubanski_numeric(&gens, &grid, &once, mass, alpha);
        for (a, v) in w2.iter_mut().zip(twice) {
            *a += v * g(alpha, alpha) as f64;
        }
    }
    norm(&grid, &w2) / norm(&grid, &psi)
}

pub mod lab {
    use massop::masslab::{
        eval_exact, fit_formula, solve_triplet_coeffs, von_neumann_generator, FormulaKind, ParticleRow,
        QuantumNumbers,
    };
    use massop::measure::{Atom, Interval, MassMeasure, Of};
    use massop::{MassError, Q};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn half(n: i128) -> Q {
        Q::new(n, 2)
    }

    /// Quantum numbers on the quarter grid, wider than the physical half grid.
    fn random_qn(rng: &mut ChaCha8Rng) -> QuantumNumbers {
        let quarter = |n: i128| Q::new(n, 4);
        QuantumNumbers::new(
            Some(quarter(rng.gen_range(-8..=8))),
            Some(quarter(rng.gen_range(0..=12))),
            Some(quarter(rng.gen_range(0..=12))),
        )
        .unwrap()
    }

    #[derive(Debug, Default)]
    pub struct Sweep {
        pub checked: usize,
        pub singular: usize,
        pub mismatches: Vec<String>,
    }

    /// Solve three-parameter formulas from random quantum-number triples and
    /// rational targets, then evaluate back exactly.
    pub fn solve_eval_sweep(per_kind: usize, seed: u64) -> Sweep {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Sweep::default();
        for kind in FormulaKind::ALL.into_iter().filter(|k| k.params().len() == 3) {
            for _ in 0..per_kind {
                let qns = [random_qn(&mut rng), random_qn(&mut rng), random_qn(&mut rng)];
                let targets = [0; 3].map(|_| Q::new(rng.gen_range(100..4000), rng.gen_range(1..8)));
                match solve_triplet_coeffs(targets, qns, kind) {
                    Ok(c) => {
                        out.checked += 1;
                        for (qn, t) in qns.iter().zip(&targets) {
                            let back = eval_exact(kind, &c, qn).unwrap();
                            if back != *t {
                                out.mismatches.push(format!("{kind} {qn:?}: {back} != {t}"));
                            }
                        }
                    }
                    Err(MassError::Singular { .. }) => out.singular += 1,
                    Err(e) => out.mismatches.push(format!("{kind}: {e}")),
                }
            }
        }
        out
    }

    /// Octet-like rows generated from known coefficients for every formula;
    /// largest relative coefficient error of the least-squares refit.
    pub fn fit_recovery_error() -> f64 {
        let truth = [1100.0, -190.0, 40.0];
        let mut worst: f64 = 0.0;
        for kind in FormulaKind::ALL {
            let coeffs = &truth[..kind.params().len()];
            let mut rows = Vec::new();
            for y in -2..=2 {
                for j in 0..=3 {
                    for s in 0..=3 {
                        let qn = QuantumNumbers::new(Some(half(y)), Some(half(j)), Some(half(s))).unwrap();
                        let basis = kind.basis(&qn).unwrap();
                        let target: f64 =
                            basis.iter().zip(coeffs).map(|(b, c)| massop::scalar::q_to_f64(b) * c).sum();
                        let mass = match kind.target() {
                            massop::masslab::Target::Mass => target,
                            massop::masslab::Target::MassSquared => target.sqrt(),
                        };
                        if mass.is_finite() && mass > 0.0 {
                            rows.push(ParticleRow { name: format!("x{y}{j}{s}"), mass_mev: mass, qn, multiplet: "gen".into() });
                        }
                    }
                }
            }
            let fit = fit_formula(&rows, kind).unwrap();
            for (got, want) in fit.coeff_vec().iter().zip(coeffs) {
                worst = worst.max((got - want).abs() / want.abs());
            }
        }
        worst
    }

    /// Random commuting diagonal families; counts sets where `φ_n(A) ≠ A_n`.
    pub fn von_neumann_failures(sets: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let palette = [-2.5, -1.0, 0.0, 0.25, 1.0, 3.75, 7.0];
        let mut failures = 0;
        for _ in 0..sets {
            let dim = rng.gen_range(1..=64);
            let count = rng.gen_range(1..=4);
            let ops: Vec<Vec<f64>> = (0..count)
                .map(|_| (0..dim).map(|_| *palette.choose(&mut rng).unwrap()).collect())
                .collect();
            let vn = von_neumann_generator(&ops).unwrap();
            if (0..count).any(|n| vn.reconstruct(n) != ops[n]) {
                failures += 1;
            }
        }
        failures
    }

    /// Density `c m²` on `[3, 4]` with weight one half.
    const QUAD: f64 = 1.5 / 37.0;

    /// Largest deviation of quadrature moments from closed forms.
    pub fn closed_form_moment_error() -> f64 {
        let mixed = MassMeasure::new(
            vec![Atom { m: 0.5, w: 0.25, spin: 0.0 }],
            vec![
                Interval::uniform(1.0, 2.0, 0.25, 0.0),
                Interval { lo: 3.0, hi: 4.0, coeffs: vec![0.0, 0.0, QUAD], spin: 0.5 },
            ],
            false,
        )
        .unwrap();
        let mut worst: f64 = 0.0;
        for p in 0..=6u32 {
            let pf = p as f64;
            let uniform = 0.25 * (2f64.powf(pf + 1.0) - 1.0) / (pf + 1.0);
            let quad = QUAD * (4f64.powf(pf + 3.0) - 3f64.powf(pf + 3.0)) / (pf + 3.0);
            let exact = 0.25 * 0.5f64.powf(pf) + uniform + quad;
            worst = worst.max((mixed.moment(p, Of::M) - exact).abs() / exact.abs().max(1.0));
            let exact2 = 0.25 * 0.5f64.powf(2.0 * pf)
                + 0.25 * (2f64.powf(2.0 * pf + 1.0) - 1.0) / (2.0 * pf + 1.0)
                + QUAD * (4f64.powf(2.0 * pf + 3.0) - 3f64.powf(2.0 * pf + 3.0)) / (2.0 * pf + 3.0);
            worst = worst.max((mixed.moment(p, Of::M2) - exact2).abs() / exact2.abs().max(1.0));
        }
        worst
    }

    /// Observed orders `log2(e(ε)/e(ε/2))` for uniform smearing of width 2ε
    /// around `m0`, against the point-mass moments.
    pub fn delta_limit_orders() -> Vec<f64> {
        let m0 = 1.5;
        let err = |eps: f64, p: u32, of: Of| {
            let smeared = MassMeasure::new(vec![], vec![Interval::uniform(m0 - eps, m0 + eps, 1.0, 0.0)], true).unwrap();
            let point = MassMeasure::point(m0).unwrap();
            (smeared.moment(p, of) - point.moment(p, of)).abs()
        };
        let mut out = Vec::new();
        for (p, of) in [(2, Of::M), (3, Of::M), (4, Of::M), (2, Of::M2)] {
            let e: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&x| err(x, p, of)).collect();
            out.push((e[0] / e[1]).log2());
            out.push((e[1] / e[2]).log2());
        }
        out
    }

    /// `|sample mean − exact mean| / (σ/√N)` for a mixed measure.
    pub fn sampling_z(count: usize, seed: u64) -> f64 {
        let m = MassMeasure::new(
            vec![Atom { m: 0.9, w: 0.3, spin: 0.0 }],
            vec![Interval::uniform(1.2, 2.0, 0.5, 0.5), Interval { lo: 2.5, hi: 3.0, coeffs: vec![0.0, 0.16], spin: 1.0 }],
            true,
        )
        .unwrap();
        let mean = m.moment(1, Of::M);
        let sd = (m.moment(2, Of::M) - mean * mean).sqrt();
        let samples = m.sample(seed, count);
        let avg = samples.iter().map(|s| s.m).sum::<f64>() / count as f64;
        (avg - mean).abs() / (sd / (count as f64).sqrt())
    }
}
