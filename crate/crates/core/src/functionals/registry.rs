//! Functionals addressed by name.
//!
//! | name                   | functional                              | degree   |
//! |------------------------|-----------------------------------------|----------|
//! | `volume`               | `V_n`                                   | `n`      |
//! | `quermass:i`           | `W_i`                                   | `n - i`  |
//! | `harmonic_quermass:i`  | `W^_i`                                  | `n - i`  |
//! | `affine_quermass:i`    | `Phi_i`                                 | `n - i`  |
//! | `mixed_volume:j`       | `V(K, j; B, ..., B)`                    | `j`      |
//! | `inertia`              | `I`                                     | `n + 2`  |
//! | `width_power:r`        | `(int w^r)^(1/r)`                       | `1`      |
//! | `capacity_q1`          | `Cap_1` (surface area)                  | `n - 1`  |
//! | `capacity_q2`          | `Cap_2` (n = 3)                         | `1`      |
//! | `projection:j:k`       | `W_{3-j}(Pi_{2-k} K)` (n = 3)           | `j k`    |
//! | `isotropic`            | `min_{T in SL(n)} I(TK)`                | `n + 2`  |

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::capacity::capacity_q2_joint;
use super::inertia::{minimal_inertia, moment_of_inertia, IsotropicOptions};
use super::mixed::mixed_volume_pair;
use super::quermass::quermass_joint;
use super::width::width_power_functional;
use super::{Estimate, EvalContext, JointEstimate};
use crate::error::{Error, Result};
use crate::geometry::measure::{surface_area, volume, Measure};
use crate::geometry::{ConvexBody, DirectionSet};
use crate::projection_bodies::composite_joint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    StrictOnKno,
    Weak,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CostHint {
    ClosedForm,
    PolytopeExact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionalKind {
    Volume,
    Quermass(usize),
    HarmonicQuermass(usize),
    AffineQuermass(usize),
    MixedVolume(usize),
    Inertia,
    WidthPower(f64),
    CapacityQ1,
    CapacityQ2,
    Projection { j: usize, k: usize },
    Isotropic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalDescriptor {
    pub name: String,
    pub dim: usize,
    /// Homogeneity degree of the raw functional.
    pub degree: f64,
    pub monotone: Monotonicity,
    pub translation_invariant: bool,
    pub cost_hint: CostHint,
    #[serde(skip)]
    pub kind: FunctionalKind,
}

impl fmt::Display for FunctionalDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n = {}, degree {})", self.name, self.dim, self.degree)
    }
}

fn bad(name: &str, why: &str) -> Error {
    Error::InvalidArgument(format!("functional {name:?}: {why}"))
}

impl FunctionalDescriptor {
    /// Resolves a registry name for bodies of dimension `n`.
    pub fn parse(name: &str, n: usize) -> Result<Self> {
        let parts: Vec<&str> = name.trim().split(':').collect();
        let idx = |k: usize| -> Result<usize> {
            parts.get(k).ok_or_else(|| bad(name, "missing index"))?.parse::<usize>().map_err(|_| bad(name, "bad index"))
        };
        let mc = if n == 2 { CostHint::ClosedForm } else { CostHint::MonteCarlo };
        let nf = n as f64;
        let (kind, degree, monotone, cost) = match parts[0] {
            "volume" if parts.len() == 1 => (FunctionalKind::Volume, nf, Monotonicity::StrictOnKno, CostHint::PolytopeExact),
            "quermass" | "harmonic_quermass" | "affine_quermass" if parts.len() == 2 => {
                let i = idx(1)?;
                if i < 1 || i >= n {
                    return Err(bad(name, &format!("index must lie in 1..{n}")));
                }
                let kind = match parts[0] {
                    "quermass" => FunctionalKind::Quermass(i),
                    "harmonic_quermass" => FunctionalKind::HarmonicQuermass(i),
                    _ => FunctionalKind::AffineQuermass(i),
                };
                (kind, (n - i) as f64, Monotonicity::StrictOnKno, mc)
            }
            "mixed_volume" if parts.len() == 2 => {
                let j = idx(1)?;
                if !(2..=3).contains(&n) || j < 1 || j > n {
                    return Err(bad(name, "needs n in {2, 3} and 1 <= j <= n"));
                }
                (FunctionalKind::MixedVolume(j), j as f64, Monotonicity::StrictOnKno, CostHint::PolytopeExact)
            }
            "inertia" if parts.len() == 1 => {
                (FunctionalKind::Inertia, nf + 2.0, Monotonicity::StrictOnKno, CostHint::PolytopeExact)
            }
            "width_power" if parts.len() == 2 => {
                let r: f64 = parts[1].parse().map_err(|_| bad(name, "bad exponent"))?;
                if !(r < 1.0) || r == 0.0 || !r.is_finite() {
                    return Err(bad(name, "exponent must satisfy r < 1, r != 0"));
                }
                (FunctionalKind::WidthPower(r), 1.0, Monotonicity::StrictOnKno, CostHint::ClosedForm)
            }
            "capacity_q1" if parts.len() == 1 => {
                (FunctionalKind::CapacityQ1, nf - 1.0, Monotonicity::StrictOnKno, CostHint::PolytopeExact)
            }
            "capacity_q2" if parts.len() == 1 => {
                if n != 3 {
                    return Err(bad(name, "implemented for n = 3"));
                }
                (FunctionalKind::CapacityQ2, 1.0, Monotonicity::StrictOnKno, CostHint::MonteCarlo)
            }
            "projection" if parts.len() == 3 => {
                let (j, k) = (idx(1)?, idx(2)?);
                if n != 3 || !(1..=3).contains(&j) || !(1..=2).contains(&k) {
                    return Err(bad(name, "needs n = 3, j in 1..=3, k in 1..=2"));
                }
                (FunctionalKind::Projection { j, k }, (j * k) as f64, Monotonicity::Weak, CostHint::PolytopeExact)
            }
            "isotropic" if parts.len() == 1 => {
                (FunctionalKind::Isotropic, nf + 2.0, Monotonicity::None, CostHint::PolytopeExact)
            }
            _ => return Err(bad(name, "unknown functional")),
        };
        if n < 2 {
            return Err(bad(name, "bodies must have dimension at least 2"));
        }
        Ok(FunctionalDescriptor {
            name: parts.join(":"),
            dim: n,
            degree,
            monotone,
            translation_invariant: true,
            cost_hint: cost,
            kind,
        })
    }

    pub fn is_monte_carlo(&self) -> bool {
        self.cost_hint == CostHint::MonteCarlo
    }

    /// `Phi^(1/degree)`, the normalization of degree one.
    pub fn normalize(&self, raw: f64) -> f64 {
        raw.powf(1.0 / self.degree)
    }

    pub fn evaluate(&self, body: &ConvexBody, ctx: &EvalContext) -> Result<Estimate> {
        Ok(self.evaluate_joint(std::slice::from_ref(body), ctx)?.get(0))
    }

    /// Evaluates on several bodies with shared randomness.
    pub fn evaluate_joint(&self, bodies: &[ConvexBody], ctx: &EvalContext) -> Result<JointEstimate> {
        for b in bodies {
            if b.dim() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: b.dim() });
            }
        }
        let n = self.dim;
        let per_body = |f: &dyn Fn(&ConvexBody) -> Result<Measure>| -> Result<JointEstimate> {
            let ms: Vec<Measure> = bodies.iter().map(f).collect::<Result<_>>()?;
            Ok(JointEstimate::deterministic(
                ms.iter().map(|m| m.value).collect(),
                ms.iter().map(|m| m.approximate).collect(),
            ))
        };
        let samples = ctx.budget.mc_samples;
        match self.kind {
            FunctionalKind::Volume => per_body(&|b| volume(b)),
            FunctionalKind::Quermass(i) => quermass_joint(bodies, i, 1.0, samples, ctx.rng),
            FunctionalKind::HarmonicQuermass(i) => quermass_joint(bodies, i, -1.0, samples, ctx.rng),
            FunctionalKind::AffineQuermass(i) => quermass_joint(bodies, i, -(n as f64), samples, ctx.rng),
            FunctionalKind::MixedVolume(j) => {
                let ball = ConvexBody::ball(n, 1.0)?;
                per_body(&|b| {
                    let f = mixed_volume_pair(b, &ball, j)?;
                    Ok(Measure { value: f.value, approximate: f.approximate })
                })
            }
            FunctionalKind::Inertia => per_body(&|b| moment_of_inertia(b)),
            FunctionalKind::WidthPower(r) => {
                let grid = DirectionSet::default_for(n)?;
                per_body(&|b| Ok(Measure { value: width_power_functional(b, r, &grid)?, approximate: false }))
            }
            FunctionalKind::CapacityQ1 => per_body(&|b| surface_area(b)),
            FunctionalKind::CapacityQ2 => capacity_q2_joint(bodies, ctx.budget.walkers, ctx.rng),
            FunctionalKind::Projection { j, k } => {
                let grid = Arc::new(DirectionSet::with_count(3, ctx.budget.projection_grid)?);
                composite_joint(bodies, j, k, grid)
            }
            FunctionalKind::Isotropic => {
                let opts = IsotropicOptions::default();
                per_body(&|b| {
                    let r = minimal_inertia(b, &opts)?;
                    Ok(Measure { value: r.min_inertia, approximate: r.approximate })
                })
            }
        }
    }
}

/// The named functionals available in one dimension.
#[derive(Debug, Clone)]
pub struct Registry {
    dim: usize,
    descriptors: Vec<FunctionalDescriptor>,
}

impl Registry {
    /// Every registered functional family instantiated for dimension `n`.
    pub fn standard(n: usize) -> Result<Self> {
        let mut names = vec!["volume".to_string()];
        for fam in ["quermass", "harmonic_quermass", "affine_quermass"] {
            for i in 1..n {
                names.push(format!("{fam}:{i}"));
            }
        }
        if (2..=3).contains(&n) {
            for j in 1..n {
                names.push(format!("mixed_volume:{j}"));
            }
            names.push("inertia".into());
        }
        names.push("width_power:0.5".into());
        names.push("width_power:-1".into());
        if (2..=3).contains(&n) {
            names.push("capacity_q1".into());
        }
        if n == 3 {
            names.push("capacity_q2".into());
            for j in 1..=3 {
                for k in 1..=2 {
                    names.push(format!("projection:{j}:{k}"));
                }
            }
        }
        if (2..=3).contains(&n) {
            names.push("isotropic".into());
        }
        let descriptors = names.iter().map(|s| FunctionalDescriptor::parse(s, n)).collect::<Result<_>>()?;
        Ok(Registry { dim: n, descriptors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn iter(&self) -> impl Iterator<Item = &FunctionalDescriptor> {
        self.descriptors.iter()
    }

    pub fn names(&self) -> Vec<&str> {
        self.descriptors.iter().map(|d| d.name.as_str()).collect()
    }

    /// A registered descriptor, or any valid parametrized name.
    pub fn get(&self, name: &str) -> Result<FunctionalDescriptor> {
        match self.descriptors.iter().find(|d| d.name == name) {
            Some(d) => Ok(d.clone()),
            None => FunctionalDescriptor::parse(name, self.dim),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in [2, 3] {
            let r = Registry::standard(n).unwrap();
            for d in r.iter() {
                assert_eq!(FunctionalDescriptor::parse(&d.name, n).unwrap(), *d);
            }
        }
        assert!(FunctionalDescriptor::parse("quermass:3", 3).is_err());
        assert!(FunctionalDescriptor::parse("capacity_q2", 2).is_err());
        assert!(FunctionalDescriptor::parse("width_power:1", 2).is_err());
        assert!(FunctionalDescriptor::parse("nonsense", 2).is_err());
        assert_eq!(FunctionalDescriptor::parse("projection:2:1", 3).unwrap().degree, 2.0);
    }

    #[test]
    fn planar_evaluations() {
        let ctx = EvalContext::new(1);
        let sq = ConvexBody::cuboid(&[0.0, 0.0], &[0.5, 0.5]).unwrap();
        let r = Registry::standard(2).unwrap();
        let v = r.get("volume").unwrap().evaluate(&sq, &ctx).unwrap();
        assert!((v.value - 1.0).abs() < 1e-14);
        let w = r.get("quermass:1").unwrap().evaluate(&sq, &ctx).unwrap();
        assert!((w.value - 2.0).abs() < 1e-12);
        let m = r.get("mixed_volume:1").unwrap().evaluate(&sq, &ctx).unwrap();
        assert!((m.value - 2.0).abs() < 1e-9);
    }
}
