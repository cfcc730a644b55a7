//! Geometric functionals and their registry.
//!
//! Every functional can be evaluated jointly on several bodies. Monte Carlo
//! functionals then share their random subspaces (or walkers) across the
//! bodies and report the covariance of the estimates, so differences such as
//! inequality slacks get small standard errors.

mod capacity;
mod inertia;
mod mixed;
mod quermass;
mod registry;
mod width;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::geometry::unit_ball_volume;
use crate::rng::RngStream;

pub use capacity::{capacity_newtonian_wos, capacity_q1, capacity_q1_mc, capacity_q2_joint};
pub use inertia::{isotropic_constant, minimal_inertia, moment_of_inertia, IsotropicOptions, IsotropicResult};
pub use mixed::{mixed_volume_pair, MixedVolumeFit};
pub use quermass::{
    affine_quermassintegral, harmonic_quermassintegral, power_mean_joint, quermassintegral, quermassintegral_exact,
};
pub use registry::{CostHint, FunctionalDescriptor, FunctionalKind, Monotonicity, Registry};
pub use width::width_power_functional;

pub use crate::geometry::measure::{mean_width, surface_area, volume, Measure};

/// Unit-ball volumes `omega_1, ..., omega_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionalConstants {
    pub omega: Vec<f64>,
}

impl DimensionalConstants {
    pub fn new(n: usize) -> Self {
        DimensionalConstants { omega: (1..=n).map(unit_ball_volume).collect() }
    }

    /// `omega_j` (with `omega_0 = 1`).
    pub fn omega(&self, j: usize) -> f64 {
        if j == 0 {
            1.0
        } else {
            self.omega[j - 1]
        }
    }
}

/// A value with its standard error. `approximate` marks values computed on
/// circumscribed grid polytopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub approximate: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0, approximate: false }
    }
}

impl From<Measure> for Estimate {
    fn from(m: Measure) -> Self {
        Estimate { value: m.value, stderr: 0.0, approximate: m.approximate }
    }
}

/// Estimates for several bodies with their joint covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct JointEstimate {
    pub values: Vec<f64>,
    pub covariance: DMatrix<f64>,
    pub approximate: Vec<bool>,
    pub monte_carlo: bool,
}

impl JointEstimate {
    pub fn deterministic(values: Vec<f64>, approximate: Vec<bool>) -> Self {
        let n = values.len();
        JointEstimate { values, covariance: DMatrix::zeros(n, n), approximate, monte_carlo: false }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Estimate {
        Estimate { value: self.values[i], stderr: self.stderr(i), approximate: self.approximate[i] }
    }

    pub fn stderr(&self, i: usize) -> f64 {
        self.covariance[(i, i)].max(0.0).sqrt()
    }

    /// Standard error of a smooth function of the values with gradient
    /// `grad` (delta method).
    pub fn delta_stderr(&self, grad: &[f64]) -> f64 {
        let n = self.values.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += grad[i] * self.covariance[(i, j)] * grad[j];
            }
        }
        s.max(0.0).sqrt()
    }

    pub fn any_approximate(&self) -> bool {
        self.approximate.iter().any(|a| *a)
    }
}

/// Sample budgets for the stochastic and grid-based functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    /// Grassmannian samples per Monte Carlo evaluation.
    pub mc_samples: usize,
    /// Walkers per capacity estimate.
    pub walkers: usize,
    /// Directions used to sample mixed projection bodies.
    pub projection_grid: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { mc_samples: 20_000, walkers: 100_000, projection_grid: 2562 }
    }
}

/// Everything an evaluation needs besides the bodies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalContext {
    pub rng: RngStream,
    pub budget: Budget,
}

impl EvalContext {
    pub fn new(seed: u64) -> Self {
        EvalContext { rng: RngStream::new(seed), budget: Budget::default() }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }
}

/// Sample mean vectors and the covariance of the means for per-sample
/// observations `rows[k][b]`.
pub(crate) fn mean_and_covariance(rows: &[Vec<f64>]) -> (Vec<f64>, DMatrix<f64>) {
    let m = rows.len();
    let b = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut mean = vec![0.0; b];
    for r in rows {
        for i in 0..b {
            mean[i] += r[i];
        }
    }
    mean.iter_mut().for_each(|x| *x /= m as f64);
    let mut cov = DMatrix::zeros(b, b);
    if m > 1 {
        for r in rows {
            for i in 0..b {
                let di = r[i] - mean[i];
                for j in 0..b {
                    cov[(i, j)] += di * (r[j] - mean[j]);
                }
            }
        }
        cov /= (m - 1) as f64 * m as f64;
    }
    (mean, cov)
}
