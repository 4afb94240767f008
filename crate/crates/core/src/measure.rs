//! Mass spectra as measures: point masses plus smeared intervals.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::MeasureError;

pub const DEFAULT_NODES: usize = 32;
const NORM_TOL: f64 = 1e-9;

/// Stable particle: a point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub m: f64,
    pub w: f64,
    #[serde(default)]
    pub spin: f64,
}

/// Smeared interval with density `Σ coeffs[k] m^k` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
    #[serde(default)]
    pub spin: f64,
}

impl Interval {
    pub fn uniform(lo: f64, hi: f64, weight: f64, spin: f64) -> Self {
        Interval { lo, hi, coeffs: vec![weight / (hi - lo)], spin }
    }

    pub fn density(&self, m: f64) -> f64 {
        horner(&self.coeffs, m)
    }

    /// `∫_lo^x f` in closed form.
    pub fn cumulative(&self, x: f64) -> f64 {
        let anti: Vec<f64> = std::iter::once(0.0)
            .chain(self.coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64))
            .collect();
        horner(&anti, x) - horner(&anti, self.lo)
    }

    pub fn weight(&self) -> f64 {
        self.cumulative(self.hi)
    }

    /// Smallest density value over the interval, found at the endpoints and
    /// at real critical points inside it.
    fn min_density(&self) -> (f64, f64) {
        let mut cands = vec![self.lo, self.hi];
        cands.extend(real_roots(&derivative(&self.coeffs)).into_iter().filter(|r| *r > self.lo && *r < self.hi));
        cands
            .into_iter()
            .map(|m| (self.density(m), m))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("candidates nonempty")
    }

    fn scale(&mut self, s: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= s);
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

/// Real roots by companion-matrix eigenvalues.
fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    comp.complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-9 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect()
}

/// Whether `M` or `M²` is being integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Of {
    #[serde(rename = "M")]
    M,
    #[serde(rename = "M2")]
    M2,
}

impl std::str::FromStr for Of {
    type Err = MeasureError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "M" | "m" => Ok(Of::M),
            "M2" | "m2" | "M^2" => Ok(Of::M2),
            _ => Err(MeasureError::Invalid(format!("expected M or M2, got `{s}`"))),
        }
    }
}

impl Of {
    fn apply(self, m: f64) -> f64 {
        match self {
            Of::M => m,
            Of::M2 => m * m,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let dp = legendre(n, x).1;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// `∫_a^b f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let (h, c) = ((b - a) / 2.0, (b + a) / 2.0);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

#[derive(Deserialize)]
struct RawMeasure {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    intervals: Vec<Interval>,
}

/// Validated probability measure on masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassMeasure {
    atoms: Vec<Atom>,
    intervals: Vec<Interval>,
}

/// Support of a measure: isolated points and closed intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Support {
    pub points: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
}

impl Support {
    /// Image under `m ↦ m²` (monotone for `m ≥ 0`).
    pub fn squared(&self) -> Support {
        Support {
            points: self.points.iter().map(|m| m * m).collect(),
            intervals: self.intervals.iter().map(|(a, b)| (a * a, b * b)).collect(),
        }
    }
}

/// One draw from a measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub m: f64,
    pub spin: f64,
}

impl MassMeasure {
    /// Validates and, with `normalize`, rescales to total mass 1.
    pub fn new(atoms: Vec<Atom>, intervals: Vec<Interval>, normalize: bool) -> Result<Self, MeasureError> {
        for a in &atoms {
            if !(a.m.is_finite() && a.m > 0.0 && a.w.is_finite() && a.w > 0.0) {
                return Err(MeasureError::Invalid(format!("atom needs m > 0 and w > 0, got ({}, {})", a.m, a.w)));
            }
        }
        let mut intervals = intervals;
        for iv in &intervals {
            if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo >= 0.0 && iv.lo < iv.hi) {
                return Err(MeasureError::Invalid(format!("interval needs 0 ≤ lo < hi, got [{}, {}]", iv.lo, iv.hi)));
            }
            if iv.coeffs.is_empty() || iv.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(MeasureError::Invalid("density coefficients must be finite and nonempty".into()));
            }
            let (fmin, at) = iv.min_density();
            let scale = iv.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
            if fmin < -1e-12 * scale.max(1.0) {
                return Err(MeasureError::NegativeDensity(iv.lo, iv.hi, at));
            }
            if let Some(a) = atoms.iter().find(|a| a.m >= iv.lo && a.m <= iv.hi) {
                return Err(MeasureError::AtomInInterval(a.m, iv.lo, iv.hi));
            }
        }
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for pair in intervals.windows(2) {
            // intervals may touch at an endpoint but not overlap
            if pair[1].lo < pair[0].hi {
                return Err(MeasureError::Overlap(pair[0].lo, pair[0].hi, pair[1].lo, pair[1].hi));
            }
        }
        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.m.total_cmp(&b.m));
        let total: f64 = atoms.iter().map(|a| a.w).sum::<f64>() + intervals.iter().map(Interval::weight).sum::<f64>();
        if total <= 0.0 {
            return Err(MeasureError::ZeroMass);
        }
        if normalize {
            atoms.iter_mut().for_each(|a| a.w /= total);
            intervals.iter_mut().for_each(|iv| iv.scale(1.0 / total));
        } else if (total - 1.0).abs() > NORM_TOL {
            return Err(MeasureError::NotNormalized(total));
        }
        Ok(MassMeasure { atoms, intervals })
    }

    pub fn point(m: f64) -> Result<Self, MeasureError> {
        MassMeasure::new(vec![Atom { m, w: 1.0, spin: 0.0 }], Vec::new(), false)
    }

    /// Parses `{atoms:[{m,w}], intervals:[{lo,hi,coeffs,spin}]}`.
    pub fn from_json(s: &str, normalize: bool) -> Result<Self, MeasureError> {
        let raw: RawMeasure = serde_json::from_str(s).map_err(|e| MeasureError::Invalid(e.to_string()))?;
        MassMeasure::new(raw.atoms, raw.intervals, normalize)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum::<f64>() + self.intervals.iter().map(Interval::weight).sum::<f64>()
    }

    /// `∫ φ(m)^p dμ` with the default quadrature.
    pub fn moment(&self, p: u32, of: Of) -> f64 {
        self.moment_with(p, of, &GaussLegendre::new(DEFAULT_NODES))
    }

    pub fn moment_with(&self, p: u32, of: Of, gl: &GaussLegendre) -> f64 {
        let phi = |m: f64| of.apply(m).powi(p as i32);
        let discrete: f64 = self.atoms.iter().map(|a| a.w * phi(a.m)).sum();
        let smeared: f64 = self
            .intervals
            .iter()
            .map(|iv| gl.integrate(iv.lo, iv.hi, |m| phi(m) * iv.density(m)))
            .sum();
        discrete + smeared
    }

    pub fn support(&self) -> Support {
        Support {
            points: self.atoms.iter().map(|a| a.m).collect(),
            intervals: self.intervals.iter().map(|iv| (iv.lo, iv.hi)).collect(),
        }
    }

    /// Inverse-CDF samples from a generator seeded with `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.quantile(rng.gen::<f64>())).collect()
    }

    /// Inverse of the cumulative distribution, components ordered by mass.
    pub fn quantile(&self, u: f64) -> Sample {
        enum Piece<'a> {
            Atom(&'a Atom),
            Smeared(&'a Interval, f64),
        }
        let mut pieces: Vec<(f64, Piece)> = self
            .atoms
            .iter()
            .map(|a| (a.m, Piece::Atom(a)))
            .chain(self.intervals.iter().map(|iv| (iv.lo, Piece::Smeared(iv, iv.weight()))))
            .collect();
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total = self.total();
        let target = u.clamp(0.0, 1.0) * total;
        let mut acc = 0.0;
        let last = pieces.len() - 1;
        for (i, (_, piece)) in pieces.iter().enumerate() {
            let w = match piece {
                Piece::Atom(a) => a.w,
                Piece::Smeared(_, w) => *w,
            };
            if target < acc + w || i == last {
                return match piece {
                    Piece::Atom(a) => Sample { m: a.m, spin: a.spin },
                    Piece::Smeared(iv, _) => Sample { m: invert_cdf(iv, (target - acc).clamp(0.0, w)), spin: iv.spin },
                };
            }
            acc += w;
        }
        unreachable!("measure has at least one component")
    }
}

/// Solves `cumulative(x) = t` by safeguarded Newton on a monotone function.
fn invert_cdf(iv: &Interval, t: f64) -> f64 {
    let (mut a, mut b) = (iv.lo, iv.hi);
    let mut x = iv.lo + (iv.hi - iv.lo) * t / iv.weight().max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let fx = iv.cumulative(x) - t;
        if fx > 0.0 {
            b = x;
        } else {
            a = x;
        }
        let d = iv.density(x);
        let mut next = if d > 0.0 { x - fx / d } else { f64::NAN };
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) || b - a <= 1e-15 * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn legendre_nodes() {
        let gl = GaussLegendre::new(DEFAULT_NODES);
        assert!(close(gl.weights.iter().sum(), 2.0, 1e-14));
        // degree 63 monomial, odd; degree 62 even
        assert!(gl.integrate(-1.0, 1.0, |x| x.powi(63)).abs() < 1e-14);
        assert!(close(gl.integrate(-1.0, 1.0, |x| x.powi(62)), 2.0 / 63.0, 1e-13));
        let g3 = GaussLegendre::new(3);
        assert!(close(g3.nodes[2], (0.6f64).sqrt(), 1e-15));
        assert!(close(g3.weights[1], 8.0 / 9.0, 1e-15));
    }

    #[test]
    fn construction() {
        assert!(MassMeasure::point(1.0).is_ok());
        let ok = MassMeasure::new(
            vec![Atom { m: 1.0, w: 0.5, spin: 0.0 }],
            vec![Interval::uniform(2.0, 3.0, 0.5, 1.0)],
            false,
        );
        assert!(ok.is_ok());
        let overlap = MassMeasure::new(
            vec![],
            vec![Interval::uniform(1.0, 2.0, 0.5, 0.0), Interval::uniform(1.5, 2.5, 0.5, 0.0)],
            false,
        );
        assert!(matches!(overlap, Err(MeasureError::Overlap(..))));
        let neg = Interval { lo: 0.0, hi: 2.0, coeffs: vec![0.6, -0.6, 0.2], spin: 0.0 };
        // 0.6 − 0.6m + 0.2m² has no real root, min at m = 1.5
        assert!(MassMeasure::new(vec![], vec![neg], true).is_ok());
        let dip = Interval { lo: 0.0, hi: 2.0, coeffs: vec![1.0, -2.0, 1.0 - 1e-3], spin: 0.0 };
        assert!(matches!(MassMeasure::new(vec![], vec![dip], true), Err(MeasureError::NegativeDensity(..))));
        assert!(matches!(
            MassMeasure::new(vec![], vec![Interval { lo: 0.0, hi: 1.0, coeffs: vec![0.0], spin: 0.0 }], true),
            Err(MeasureError::ZeroMass)
        ));
        assert!(matches!(
            MassMeasure::new(vec![Atom { m: 2.5, w: 1.0, spin: 0.0 }], vec![Interval::uniform(2.0, 3.0, 1.0, 0.0)], true),
            Err(MeasureError::AtomInInterval(..))
        ));
        assert!(matches!(
            MassMeasure::new(vec![Atom { m: 1.0, w: 2.0, spin: 0.0 }], vec![], false),
            Err(MeasureError::NotNormalized(_))
        ));
    }

    #[test]
    fn moments() {
        let p = MassMeasure::point(3.0).unwrap();
        assert_eq!(p.moment(2, Of::M2), 81.0);
        let u = MassMeasure::new(vec![], vec![Interval::uniform(0.0, 1.0, 1.0, 0.0)], false).unwrap();
        assert!(close(u.moment(1, Of::M), 0.5, 1e-14));
        let v = MassMeasure::new(vec![], vec![Interval::uniform(2.0, 3.0, 1.0, 0.0)], false).unwrap();
        assert!((v.moment(2, Of::M2) - 211.0 / 5.0).abs() < 1e-10);
    }

    #[test]
    fn support_maps() {
        let g = MassMeasure::new(
            vec![Atom { m: 1.0, w: 0.5, spin: 0.0 }],
            vec![Interval::uniform(2.0, 3.0, 0.5, 0.0)],
            false,
        )
        .unwrap();
        let s = g.support();
        assert_eq!(s.points, vec![1.0]);
        assert_eq!(s.intervals, vec![(2.0, 3.0)]);
        assert_eq!(s.squared().intervals, vec![(4.0, 9.0)]);
    }

    #[test]
    fn sampling() {
        let p = MassMeasure::point(2.0).unwrap();
        assert!(p.sample(1, 50).iter().all(|s| s.m == 2.0));
        let u = MassMeasure::new(vec![], vec![Interval::uniform(0.0, 1.0, 1.0, 0.0)], false).unwrap();
        let xs = u.sample(7, 100_000);
        let mean = xs.iter().map(|s| s.m).sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.5).abs() < 5e-3);
        assert_eq!(u.sample(7, 10), u.sample(7, 10));
        let tri = Interval { lo: 0.0, hi: 1.0, coeffs: vec![0.0, 2.0], spin: 0.0 };
        assert!(close(invert_cdf(&tri, 0.25), 0.5, 1e-12));
    }

    #[test]
    fn json_roundtrip() {
        let s = r#"{"atoms":[{"m":1.0,"w":1}],"intervals":[{"lo":2,"hi":3,"coeffs":[1],"spin":0.5}]}"#;
        let g = MassMeasure::from_json(s, true).unwrap();
        assert!(close(g.total(), 1.0, 1e-15));
        let back = MassMeasure::from_json(&serde_json::to_string(&g).unwrap(), false).unwrap();
        assert_eq!(back, g);
    }
}
