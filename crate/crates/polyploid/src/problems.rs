//! DTLZ1-4 benchmark problems with closed-form Pareto-front oracles.
//!
//! All four problems minimize M objectives over `n_vars` variables in
//! `[0, 1]`. The first `M - 1` variables position a point on the front
//! surface; the remaining `k = n_vars - M + 1` distance variables control
//! how far the objective vector sits from the true front, which is the
//! hyperplane `sum f_i = 0.5` for DTLZ1 and the unit hypersphere for
//! DTLZ2, DTLZ3 and DTLZ4. Because the true fronts have known equations,
//! both an exact point-to-front distance and a uniform front sampler are
//! available as oracles for the running metrics.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::RngExt;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::genome::{Chromosome, ObjectiveVector};
use crate::rng::RngStream;

/// Default DTLZ4 density exponent.
pub const DEFAULT_ALPHA: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DtlzVariant {
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Dtlz4,
}

impl fmt::Display for DtlzVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DtlzVariant::Dtlz1 => "dtlz1",
            DtlzVariant::Dtlz2 => "dtlz2",
            DtlzVariant::Dtlz3 => "dtlz3",
            DtlzVariant::Dtlz4 => "dtlz4",
        };
        f.write_str(name)
    }
}

impl FromStr for DtlzVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dtlz1" => Ok(DtlzVariant::Dtlz1),
            "dtlz2" => Ok(DtlzVariant::Dtlz2),
            "dtlz3" => Ok(DtlzVariant::Dtlz3),
            "dtlz4" => Ok(DtlzVariant::Dtlz4),
            other => Err(Error::Domain(format!(
                "unknown problem '{other}' (expected dtlz1|dtlz2|dtlz3|dtlz4)"
            ))),
        }
    }
}

/// A fully specified benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    variant: DtlzVariant,
    m: usize,
    n_vars: usize,
    alpha: f64,
}

impl ProblemSpec {
    /// DTLZ4 gets the standard exponent [`DEFAULT_ALPHA`]; it is ignored
    /// by the other variants.
    pub fn new(variant: DtlzVariant, m: usize, n_vars: usize) -> Result<Self> {
        Self::with_alpha(variant, m, n_vars, DEFAULT_ALPHA)
    }

    pub fn with_alpha(variant: DtlzVariant, m: usize, n_vars: usize, alpha: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Config(format!("objectives must be >= 2, got {m}")));
        }
        if n_vars < m {
            return Err(Error::Config(format!(
                "n_vars ({n_vars}) must be >= objectives ({m})"
            )));
        }
        if !(alpha > 0.0) {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        Ok(ProblemSpec {
            variant,
            m,
            n_vars,
            alpha,
        })
    }

    pub fn variant(&self) -> DtlzVariant {
        self.variant
    }

    /// Number of objectives M.
    pub fn objectives(&self) -> usize {
        self.m
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of distance variables, `n_vars - M + 1`.
    pub fn k(&self) -> usize {
        self.n_vars - self.m + 1
    }

    /// Per-variable decision bounds; `[0, 1]` for the whole DTLZ family.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0); self.n_vars]
    }

    /// Range of the true front's projection onto any single objective axis.
    pub fn front_projection_range(&self) -> (f64, f64) {
        match self.variant {
            DtlzVariant::Dtlz1 => (0.0, 0.5),
            _ => (0.0, 1.0),
        }
    }

    /// Evaluate the objective functions at `x`.
    pub fn evaluate(&self, x: &Chromosome) -> Result<ObjectiveVector> {
        if x.len() != self.n_vars {
            return Err(Error::Precondition(format!(
                "chromosome has {} variables, problem expects {}",
                x.len(),
                self.n_vars
            )));
        }
        if !x.in_bounds(&self.bounds()) {
            return Err(Error::Precondition(
                "chromosome allele outside [0, 1]".into(),
            ));
        }
        let xs = x.alleles();
        let tail = &xs[self.n_vars - self.k()..];
        let values = match self.variant {
            DtlzVariant::Dtlz1 => self.linear_shape(xs, g_rastrigin(tail)),
            DtlzVariant::Dtlz2 => self.spherical_shape(xs, g_sphere(tail), 1.0),
            DtlzVariant::Dtlz3 => self.spherical_shape(xs, g_rastrigin(tail), 1.0),
            DtlzVariant::Dtlz4 => self.spherical_shape(xs, g_sphere(tail), self.alpha),
        };
        ObjectiveVector::new(values)
    }

    // f_1 = 0.5 (1+g) x_1 ... x_{M-1}
    // f_i = 0.5 (1+g) x_1 ... x_{M-i} (1 - x_{M-i+1})
    // f_M = 0.5 (1+g) (1 - x_1)
    fn linear_shape(&self, xs: &[f64], g: f64) -> Vec<f64> {
        let scale = 0.5 * (1.0 + g);
        (0..self.m)
            .map(|i| {
                let mut f = scale;
                for &x in &xs[..self.m - 1 - i] {
                    f *= x;
                }
                if i > 0 {
                    f *= 1.0 - xs[self.m - 1 - i];
                }
                f
            })
            .collect()
    }

    // Same structure on the unit sphere, with cos/sin of x pi/2; the
    // position variables are raised to `alpha` first (alpha = 1 except
    // for DTLZ4).
    fn spherical_shape(&self, xs: &[f64], g: f64, alpha: f64) -> Vec<f64> {
        let theta = |x: f64| {
            let y = if alpha == 1.0 { x } else { x.powf(alpha) };
            y * PI / 2.0
        };
        (0..self.m)
            .map(|i| {
                let mut f = 1.0 + g;
                for &x in &xs[..self.m - 1 - i] {
                    f *= theta(x).cos();
                }
                if i > 0 {
                    f *= theta(xs[self.m - 1 - i]).sin();
                }
                f
            })
            .collect()
    }

    /// Exact orthogonal distance from an objective vector to the true
    /// Pareto front: distance to the plane `sum f = 0.5` for DTLZ1,
    /// radial distance to the unit sphere for the others.
    pub fn front_distance(&self, f: &ObjectiveVector) -> f64 {
        match self.variant {
            DtlzVariant::Dtlz1 => {
                let sum: f64 = f.values().iter().sum();
                (sum - 0.5).abs() / (self.m as f64).sqrt()
            }
            _ => {
                let norm = f.values().iter().map(|v| v * v).sum::<f64>().sqrt();
                (norm - 1.0).abs()
            }
        }
    }

    /// Draw points uniformly (with respect to surface measure) on the
    /// true Pareto front.
    ///
    /// Spherical fronts: absolute values of an isotropic Gaussian,
    /// normalized, are uniform on the positive orthant of the unit
    /// sphere. Linear front: normalized exponentials are uniform on the
    /// simplex, scaled so the coordinates sum to 0.5.
    pub fn sample_true_front(&self, count: usize, rng: &mut RngStream) -> Vec<ObjectiveVector> {
        (0..count)
            .map(|_| {
                let values = match self.variant {
                    DtlzVariant::Dtlz1 => loop {
                        let e: Vec<f64> = (0..self.m).map(|_| rng.sample(Exp1)).collect();
                        let sum: f64 = e.iter().sum();
                        if sum > 0.0 {
                            break e.iter().map(|v| 0.5 * v / sum).collect::<Vec<f64>>();
                        }
                    },
                    _ => loop {
                        let z: Vec<f64> = (0..self.m)
                            .map(|_| {
                                let v: f64 = rng.sample(StandardNormal);
                                v.abs()
                            })
                            .collect();
                        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
                        if norm > 0.0 {
                            break z.iter().map(|v| v / norm).collect::<Vec<f64>>();
                        }
                    },
                };
                ObjectiveVector::new(values).expect("front samples are finite")
            })
            .collect()
    }

    /// Number of local fronts of the multimodal variants,
    /// `11^(n_vars - M + 1) - 1`, computed exactly.
    pub fn local_front_count(&self) -> Result<BigUint> {
        match self.variant {
            DtlzVariant::Dtlz1 | DtlzVariant::Dtlz3 => {
                Ok(BigUint::from(11u32).pow(self.k() as u32) - BigUint::from(1u32))
            }
            other => Err(Error::Domain(format!(
                "{other} has a unimodal distance function; local front count is undefined"
            ))),
        }
    }
}

// Multimodal distance function shared by DTLZ1 and DTLZ3:
// g = 100 (k + sum((x-0.5)^2 - cos(20 pi (x-0.5)))).
fn g_rastrigin(tail: &[f64]) -> f64 {
    let sum: f64 = tail
        .iter()
        .map(|&x| {
            let t = x - 0.5;
            t * t - (20.0 * PI * t).cos()
        })
        .sum();
    100.0 * (tail.len() as f64 + sum)
}

// Unimodal distance function of DTLZ2 and DTLZ4: g = sum((x-0.5)^2).
fn g_sphere(tail: &[f64]) -> f64 {
    tail.iter()
        .map(|&x| {
            let t = x - 0.5;
            t * t
        })
        .sum()
}
