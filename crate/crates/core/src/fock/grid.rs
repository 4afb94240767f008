use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::NumericError;
use crate::expr::MultiIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffScheme {
    Spectral,
    Central2,
}

/// Periodic momentum box `[−L, L)^d` with `n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub dim: u8,
    pub n: usize,
    pub half_width: f64,
    pub scheme: DiffScheme,
}

impl GridConfig {
    pub fn spectral(dim: u8, n: usize) -> Self {
        GridConfig {
            dim,
            n,
            half_width: std::f64::consts::PI,
            scheme: DiffScheme::Spectral,
        }
    }
}

type FftPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

/// A validated grid with cached FFT plans. Flat layout is row-major with
/// axis 1 varying slowest.
#[derive(Clone)]
pub struct Grid {
    config: GridConfig,
    axis: Vec<f64>,
    fft: Option<FftPair>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("config", &self.config).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
    }
}

impl Grid {
    pub fn new(config: GridConfig) -> Result<Self, NumericError> {
        if !(1..=3).contains(&config.dim) {
            return Err(NumericError::InvalidGrid(format!("dimension {} not in 1..=3", config.dim)));
        }
        if !(config.half_width.is_finite() && config.half_width > 0.0) {
            return Err(NumericError::InvalidGrid(format!("half-width {} must be positive", config.half_width)));
        }
        let fft = match config.scheme {
            DiffScheme::Spectral => {
                if config.n < 2 || !config.n.is_power_of_two() {
                    return Err(NumericError::InvalidGrid(format!(
                        "spectral scheme needs a power-of-two n ≥ 2, got {}",
                        config.n
                    )));
                }
                let mut planner = FftPlanner::new();
                Some((planner.plan_fft_forward(config.n), planner.plan_fft_inverse(config.n)))
            }
            DiffScheme::Central2 => {
                if config.n < 3 {
                    return Err(NumericError::InvalidGrid(format!("central scheme needs n ≥ 3, got {}", config.n)));
                }
                None
            }
        };
        let h = 2.0 * config.half_width / config.n as f64;
        let axis = (0..config.n).map(|j| -config.half_width + h * j as f64).collect();
        Ok(Grid { config, axis, fft })
    }

    pub fn config(&self) -> GridConfig {
        self.config
    }

    pub fn dim(&self) -> u8 {
        self.config.dim
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    /// Number of grid points `n^d`.
    pub fn len(&self) -> usize {
        self.config.n.pow(self.config.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.config.half_width / self.config.n as f64
    }

    /// Quadrature weight `h^d` of one point.
    pub fn weight(&self) -> f64 {
        self.spacing().powi(self.config.dim as i32)
    }

    pub fn axis_values(&self) -> &[f64] {
        &self.axis
    }

    /// Momentum of flat index `idx`; unused components are zero.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let n = self.config.n;
        let d = self.config.dim as usize;
        let mut out = [0.0; 3];
        let mut rest = idx;
        for a in (0..d).rev() {
            out[a] = self.axis[rest % n];
            rest /= n;
        }
        out
    }

    pub fn sample<F: Fn(&[f64; 3]) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        (0..self.len()).map(|i| f(&self.point(i))).collect()
    }

    pub fn sample_real<F: Fn(&[f64; 3]) -> f64>(&self, f: F) -> Vec<Complex64> {
        self.sample(|k| Complex64::new(f(k), 0.0))
    }

    /// `Σ conj(u) v h^d`
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.weight()
    }

    pub fn norm_sq(&self, u: &[Complex64]) -> f64 {
        u.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.weight()
    }

    /// `E(k) = (|k|² + m²)^{1/2}` sampled on the grid.
    pub fn energy(&self, mass: f64) -> Vec<Complex64> {
        self.sample_real(|k| (k.iter().map(|x| x * x).sum::<f64>() + mass * mass).sqrt())
    }

    /// `∂^β ψ` with the configured scheme.
    pub fn derivative(&self, psi: &[Complex64], beta: MultiIndex) -> Vec<Complex64> {
        assert_eq!(psi.len(), self.len(), "grid function length");
        assert!(beta.max_axis() <= self.config.dim, "derivative axis beyond grid dimension");
        let mut out = psi.to_vec();
        for (a, &order) in beta.0.iter().enumerate() {
            if order > 0 {
                self.axis_derivative(&mut out, a, order as u32);
            }
        }
        out
    }

    fn axis_derivative(&self, data: &mut [Complex64], axis: usize, order: u32) {
        let n = self.config.n;
        let d = self.config.dim as usize;
        let stride = n.pow((d - 1 - axis) as u32);
        let outer = n.pow(axis as u32);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for (j, x) in line.iter_mut().enumerate() {
                    *x = data[base + j * stride];
                }
                self.line_derivative(&mut line, order);
                for (j, x) in line.iter().enumerate() {
                    data[base + j * stride] = *x;
                }
            }
        }
    }

    fn line_derivative(&self, line: &mut [Complex64], order: u32) {
        let n = self.config.n;
        match &self.fft {
            Some((fwd, inv)) => {
                fwd.process(line);
                let scale = std::f64::consts::PI / self.config.half_width;
                for (m, c) in line.iter_mut().enumerate() {
                    let f = if m < n / 2 {
                        m as f64
                    } else if m > n / 2 {
                        m as f64 - n as f64
                    } else if order % 2 == 1 {
                        0.0
                    } else {
                        -(n as f64) / 2.0
                    };
                    *c *= Complex64::new(0.0, f * scale).powu(order) / n as f64;
                }
                inv.process(line);
            }
            None => {
                let h = self.spacing();
                for _ in 0..order {
                    let prev = line.to_vec();
                    for j in 0..n {
                        line[j] = (prev[(j + 1) % n] - prev[(j + n - 1) % n]) / (2.0 * h);
                    }
                }
            }
        }
    }
}

/// Normalized Gaussian `exp(−|k − center|²/(2σ²))` with `Σ|F|² h^d = 1`.
pub fn gaussian_profile(grid: &Grid, sigma: f64, center: [f64; 3]) -> Vec<Complex64> {
    let f = grid.sample_real(|k| {
        let r2: f64 = k.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum();
        (-r2 / (2.0 * sigma * sigma)).exp()
    });
    let norm = grid.norm_sq(&f).sqrt();
    f.into_iter().map(|x| x / norm).collect()
}
