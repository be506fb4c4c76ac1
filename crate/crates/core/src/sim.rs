//! Floating-point orbit checks for constant-field torus flows.
//!
//! These are independent of the exact engine: they only evaluate
//! `x + t omega mod 1` and affine maps in double precision and measure how
//! far the orbit relations are from holding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flow::{Symmetry, TorusFlowSpec};
use crate::linalg::{rational_to_f64, IntMatrix, Rational};
use crate::semiconj::SemiconjugacyMap;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Sampling parameters shared by the orbit checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleConfig {
    pub samples: usize,
    /// Times are drawn uniformly from `[-t_max, t_max]`.
    pub t_max: f64,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 1000,
            t_max: 10.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericFlow {
    omega: Vec<f64>,
}

impl NumericFlow {
    /// `None` if a frequency is not finite.
    pub fn new(omega: Vec<f64>) -> Option<Self> {
        omega.iter().all(|w| w.is_finite()).then_some(NumericFlow { omega })
    }

    pub fn from_spec(flow: &TorusFlowSpec) -> Self {
        let s = flow.scale().map(rational_to_f64).unwrap_or(1.0);
        NumericFlow {
            omega: flow.omega().iter().map(|w| s * w.to_f64()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// `(x0 + t omega) mod 1`.
    pub fn flow_at(&self, t: f64, x0: &[f64]) -> Vec<f64> {
        x0.iter().zip(&self.omega).map(|(x, w)| wrap(x + t * w)).collect()
    }
}

/// Affine torus map `x -> Bx + c mod 1` in floating point.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericAffine {
    pub matrix: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

impl NumericAffine {
    pub fn new(b: &IntMatrix, c: Option<&[Rational]>) -> Self {
        let n = b.dim();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| rational_to_f64(&Rational::from(b.get(i, j).clone()))).collect())
            .collect();
        let translation = match c {
            Some(c) => c.iter().map(rational_to_f64).collect(),
            None => vec![0.0; n],
        };
        NumericAffine { matrix, translation }
    }

    pub fn from_map(v: &SemiconjugacyMap) -> Self {
        Self::new(v.matrix(), v.translation())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, c)| wrap(row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + c))
            .collect()
    }
}

/// A symmetry with its multiplier as a float.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSymmetry {
    pub map: NumericAffine,
    pub alpha: f64,
}

impl NumericSymmetry {
    pub fn from_symmetry(r: &Symmetry) -> Self {
        NumericSymmetry {
            map: NumericAffine::new(&r.matrix, r.translation.as_deref()),
            alpha: r.multiplier.to_f64(),
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }
}

fn wrap(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Wrap-around sup distance on `T^n`.
pub fn torus_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = wrap(x - y);
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

fn max_over_samples(n: usize, cfg: &SampleConfig, mut residual: impl FnMut(&[f64], f64) -> f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let t = if cfg.t_max > 0.0 {
            rng.gen_range(-cfg.t_max..=cfg.t_max)
        } else {
            0.0
        };
        worst = worst.max(residual(&x, t));
    }
    worst
}

/// Largest `dist(V(phi_t x), psi_t(V x))` over the samples.
pub fn check_semiconjugacy_orbits(v: &NumericAffine, phi: &NumericFlow, psi: &NumericFlow, cfg: &SampleConfig) -> f64 {
    max_over_samples(phi.dim(), cfg, |x, t| {
        torus_dist(&v.apply(&phi.flow_at(t, x)), &psi.flow_at(t, &v.apply(x)))
    })
}

/// Largest `dist(R(phi_t x), phi_{alpha t}(R x))` over the samples.
pub fn check_symmetry_orbits(r: &NumericSymmetry, phi: &NumericFlow, cfg: &SampleConfig) -> f64 {
    max_over_samples(phi.dim(), cfg, |x, t| {
        torus_dist(&r.map.apply(&phi.flow_at(t, x)), &phi.flow_at(r.alpha * t, &r.map.apply(x)))
    })
}
