//! Real-coded variation: simulated binary crossover, polynomial mutation,
//! per-parent allele-set reduction, and the full partial-dominance mating
//! procedure.
//!
//! Mating works in four steps. Each parent is first reduced to a single
//! allele set by picking, per locus, one allele uniformly from all of its
//! `d` chromosomes. The two reduced sets are recombined with SBX, so the
//! child's expressed value is an intermediate of the parents' alleles
//! (partial dominance). Polynomial mutation is applied to the two child
//! DAS chromosomes only. Finally each child's `d - 1` redundant
//! chromosomes are copied, unmutated, from the pool of all `2d` parental
//! chromosomes, every chromosome equally likely.

use crate::error::{Error, Result};
use crate::genome::{Chromosome, Individual};
use crate::rng::RngStream;

/// How a child's redundant chromosomes are drawn from the 2d parental
/// chromosomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RedundantSampling {
    /// Independent uniform draw per slot; a child may carry two copies of
    /// the same parental chromosome.
    #[default]
    WithReplacement,
    /// Distinct parental chromosomes per child.
    WithoutReplacement,
}

/// Operator parameters: pair-level crossover probability `p_c`, SBX
/// distribution index `eta_c`, per-variable mutation probability `p_m`,
/// and mutation distribution index `eta_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationParams {
    pub p_c: f64,
    pub eta_c: f64,
    pub p_m: f64,
    pub eta_m: f64,
    pub redundant_sampling: RedundantSampling,
}

impl VariationParams {
    /// The standard published setting: `p_c = 1`, `eta_c = 20`,
    /// `p_m = 1 / n_vars`, `eta_m = 15`.
    pub fn defaults(n_vars: usize) -> Self {
        VariationParams {
            p_c: 1.0,
            eta_c: 20.0,
            p_m: 1.0 / n_vars as f64,
            eta_m: 15.0,
            redundant_sampling: RedundantSampling::WithReplacement,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_c) {
            return Err(Error::Config(format!("p_c must be in [0,1], got {}", self.p_c)));
        }
        if !(0.0..=1.0).contains(&self.p_m) {
            return Err(Error::Config(format!("p_m must be in [0,1], got {}", self.p_m)));
        }
        if !(self.eta_c >= 0.0) {
            return Err(Error::Config(format!("eta_c must be >= 0, got {}", self.eta_c)));
        }
        if !(self.eta_m >= 0.0) {
            return Err(Error::Config(format!("eta_m must be >= 0, got {}", self.eta_m)));
        }
        Ok(())
    }
}

/// The SBX formula for one locus: spread factor
/// `beta = (2u)^(1/(eta_c+1))` for `u <= 0.5`, else
/// `(1/(2(1-u)))^(1/(eta_c+1))`, and children
/// `c1 = 0.5 ((1+beta) p1 + (1-beta) p2)`,
/// `c2 = 0.5 ((1-beta) p1 + (1+beta) p2)`.
///
/// `(c1 + c2) / 2 == (p1 + p2) / 2` algebraically; `u = 0.5` gives
/// `beta = 1` and returns the parents unchanged.
pub fn sbx_children(p1: f64, p2: f64, eta_c: f64, u: f64) -> (f64, f64) {
    let beta = if u <= 0.5 {
        (2.0 * u).powf(1.0 / (eta_c + 1.0))
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta_c + 1.0))
    };
    let c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2);
    let c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2);
    (c1, c2)
}

/// The polynomial-mutation perturbation, as a fraction of the variable
/// range: `delta = (2u)^(1/(eta_m+1)) - 1` for `u < 0.5`, else
/// `1 - (2(1-u))^(1/(eta_m+1))`. `u = 0.5` gives `delta = 0`.
pub fn mutation_delta(u: f64, eta_m: f64) -> f64 {
    if u < 0.5 {
        (2.0 * u).powf(1.0 / (eta_m + 1.0)) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u)).powf(1.0 / (eta_m + 1.0))
    }
}

fn clip(value: f64, (lo, hi): (f64, f64)) -> f64 {
    value.clamp(lo, hi)
}

/// Collapse a parent's `d` chromosomes into one allele set: at each
/// locus, one of the parent's chromosomes is chosen uniformly and
/// independently and its allele at that locus is taken.
pub fn reduce_parent(parent: &Individual, rng: &mut RngStream) -> Chromosome {
    let d = parent.ploidy();
    if d == 1 {
        return parent.das().clone();
    }
    let sources: Vec<&Chromosome> = parent.chromosomes().collect();
    let alleles = (0..parent.das().len())
        .map(|locus| sources[rng.index(d)].alleles()[locus])
        .collect();
    Chromosome::new(alleles)
}

/// Simulated binary crossover over two equal-length chromosomes.
///
/// With probability `1 - p_c` the pair is copied unchanged. Otherwise
/// each locus independently undergoes SBX with probability 0.5 (one
/// spread draw per recombined locus) and is copied otherwise. Children
/// are clipped to bounds.
pub fn sbx_pair(
    p1: &Chromosome,
    p2: &Chromosome,
    params: &VariationParams,
    bounds: &[(f64, f64)],
    rng: &mut RngStream,
) -> Result<(Chromosome, Chromosome)> {
    if p1.len() != p2.len() || p1.len() != bounds.len() {
        return Err(Error::Precondition(format!(
            "sbx_pair length mismatch: {} vs {} vs {} bounds",
            p1.len(),
            p2.len(),
            bounds.len()
        )));
    }
    if !p1.in_bounds(bounds) || !p2.in_bounds(bounds) {
        return Err(Error::Precondition("sbx_pair parent outside bounds".into()));
    }
    if !rng.chance(params.p_c) {
        return Ok((p1.clone(), p2.clone()));
    }
    let mut a = Vec::with_capacity(p1.len());
    let mut b = Vec::with_capacity(p2.len());
    for (locus, (&x1, &x2)) in p1.alleles().iter().zip(p2.alleles()).enumerate() {
        if rng.chance(0.5) {
            let (c1, c2) = sbx_children(x1, x2, params.eta_c, rng.uniform());
            a.push(clip(c1, bounds[locus]));
            b.push(clip(c2, bounds[locus]));
        } else {
            a.push(x1);
            b.push(x2);
        }
    }
    Ok((Chromosome::new(a), Chromosome::new(b)))
}

/// Polynomial mutation: each locus mutates independently with probability
/// `p_m`, moving by `delta * (upper - lower)`; results are clipped.
pub fn polynomial_mutate(
    c: &Chromosome,
    params: &VariationParams,
    bounds: &[(f64, f64)],
    rng: &mut RngStream,
) -> Result<Chromosome> {
    if c.len() != bounds.len() {
        return Err(Error::Precondition(format!(
            "polynomial_mutate length mismatch: {} vs {} bounds",
            c.len(),
            bounds.len()
        )));
    }
    if !c.in_bounds(bounds) {
        return Err(Error::Precondition(
            "polynomial_mutate input outside bounds".into(),
        ));
    }
    let alleles = c
        .alleles()
        .iter()
        .zip(bounds)
        .map(|(&x, &(lo, hi))| {
            if rng.chance(params.p_m) {
                let delta = mutation_delta(rng.uniform(), params.eta_m);
                clip(x + delta * (hi - lo), (lo, hi))
            } else {
                x
            }
        })
        .collect();
    Ok(Chromosome::new(alleles))
}

/// The full mating procedure, producing two children.
///
/// Every stochastic step draws from `rng` in a fixed order (reduce parent
/// a, reduce parent b, SBX, mutate child 1, mutate child 2, redundant
/// slots of child 1, then of child 2), so mating is reproducible. The
/// children's objective caches are unset; mating never evaluates the
/// objective function.
pub fn mate(
    parent_a: &Individual,
    parent_b: &Individual,
    params: &VariationParams,
    bounds: &[(f64, f64)],
    rng: &mut RngStream,
) -> Result<(Individual, Individual)> {
    if parent_a.ploidy() != parent_b.ploidy() || parent_a.das().len() != parent_b.das().len() {
        return Err(Error::Precondition(format!(
            "parents disagree on shape: ploidy {} vs {}, {} vs {} variables",
            parent_a.ploidy(),
            parent_b.ploidy(),
            parent_a.das().len(),
            parent_b.das().len()
        )));
    }
    let reduced_a = reduce_parent(parent_a, rng);
    let reduced_b = reduce_parent(parent_b, rng);
    let (das_a, das_b) = sbx_pair(&reduced_a, &reduced_b, params, bounds, rng)?;
    let das_a = polynomial_mutate(&das_a, params, bounds, rng)?;
    let das_b = polynomial_mutate(&das_b, params, bounds, rng)?;

    let pool: Vec<&Chromosome> = parent_a.chromosomes().chain(parent_b.chromosomes()).collect();
    let slots = parent_a.ploidy() - 1;
    let mut draw_redundant = |rng: &mut RngStream| -> Vec<Chromosome> {
        match params.redundant_sampling {
            RedundantSampling::WithReplacement => (0..slots)
                .map(|_| pool[rng.index(pool.len())].clone())
                .collect(),
            RedundantSampling::WithoutReplacement => {
                let mut indices: Vec<usize> = (0..pool.len()).collect();
                // partial Fisher-Yates: the first `slots` entries become a
                // uniform sample without replacement
                for i in 0..slots {
                    let j = i + rng.index(pool.len() - i);
                    indices.swap(i, j);
                }
                indices[..slots].iter().map(|&i| pool[i].clone()).collect()
            }
        }
    };
    let child_a = Individual::new(das_a, draw_redundant(rng));
    let child_b = Individual::new(das_b, draw_redundant(rng));
    Ok((child_a, child_b))
}
