//! Domain types: chromosomes, individuals, objective vectors, populations.
//!
//! An [`Individual`] carries `d` chromosomes: one expressed
//! Dominant-Alleles-Set (DAS) that alone determines its decision
//! variables and fitness, and `d - 1` redundant chromosomes that are
//! inherited silently. The ploidy `d` counts all chromosomes including
//! the DAS.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A fixed-length vector of real-valued alleles, one per decision variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    alleles: Vec<f64>,
}

impl Chromosome {
    pub fn new(alleles: Vec<f64>) -> Self {
        Chromosome { alleles }
    }

    /// A chromosome with every allele drawn uniformly from its variable's bounds.
    pub fn random(bounds: &[(f64, f64)], rng: &mut RngStream) -> Self {
        let alleles = bounds.iter().map(|&(lo, hi)| rng.uniform_in(lo, hi)).collect();
        Chromosome { alleles }
    }

    pub fn alleles(&self) -> &[f64] {
        &self.alleles
    }

    pub fn len(&self) -> usize {
        self.alleles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alleles.is_empty()
    }

    /// True if every allele lies inside its variable's closed bounds.
    pub fn in_bounds(&self, bounds: &[(f64, f64)]) -> bool {
        self.alleles.len() == bounds.len()
            && self
                .alleles
                .iter()
                .zip(bounds)
                .all(|(&a, &(lo, hi))| a >= lo && a <= hi)
    }
}

impl AsRef<[f64]> for Chromosome {
    fn as_ref(&self) -> &[f64] {
        &self.alleles
    }
}

/// M real objective values under the minimization convention.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector {
    values: Vec<f64>,
}

impl ObjectiveVector {
    /// Rejects non-finite entries; every objective value must be a real number.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Precondition(format!(
                "objective value {bad} is not finite"
            )));
        }
        Ok(ObjectiveVector { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// One solution vector: the expressed DAS, the silent redundant
/// chromosomes, and a cached objective vector.
///
/// The cache is set once after evaluating the DAS and never changes
/// afterwards; the DAS itself is immutable after construction, so the
/// cache can never go stale. Exact function-evaluation accounting in the
/// drivers depends on this.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    das: Chromosome,
    redundant: Vec<Chromosome>,
    objectives: Option<ObjectiveVector>,
}

impl Individual {
    pub fn new(das: Chromosome, redundant: Vec<Chromosome>) -> Self {
        Individual {
            das,
            redundant,
            objectives: None,
        }
    }

    /// The expressed chromosome; this alone defines the phenotype.
    pub fn das(&self) -> &Chromosome {
        &self.das
    }

    /// The `d - 1` unexpressed chromosomes.
    pub fn redundant(&self) -> &[Chromosome] {
        &self.redundant
    }

    /// Total chromosome count `d`, including the DAS.
    pub fn ploidy(&self) -> usize {
        1 + self.redundant.len()
    }

    /// All chromosomes, DAS first.
    pub fn chromosomes(&self) -> impl Iterator<Item = &Chromosome> {
        std::iter::once(&self.das).chain(self.redundant.iter())
    }

    pub fn objectives(&self) -> Option<&ObjectiveVector> {
        self.objectives.as_ref()
    }

    pub fn is_evaluated(&self) -> bool {
        self.objectives.is_some()
    }

    /// Store the objective vector obtained by evaluating the DAS.
    pub fn set_objectives(&mut self, objectives: ObjectiveVector) {
        self.objectives = Some(objectives);
    }
}

/// A fixed-size collection of individuals sharing ploidy and variable count.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
}

impl Population {
    /// Checks that all members share the same ploidy and chromosome length.
    pub fn new(members: Vec<Individual>) -> Result<Self> {
        if let Some(first) = members.first() {
            let d = first.ploidy();
            let n_vars = first.das().len();
            for m in &members {
                if m.ploidy() != d || m.das().len() != n_vars {
                    return Err(Error::Precondition(format!(
                        "population is not uniform: expected ploidy {d} and {n_vars} variables, \
                         found ploidy {} and {} variables",
                        m.ploidy(),
                        m.das().len()
                    )));
                }
            }
        }
        Ok(Population { members })
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    /// Borrow every member's cached objectives; errors if any member is
    /// still unevaluated.
    pub fn objectives(&self) -> Result<Vec<&ObjectiveVector>> {
        self.members
            .iter()
            .map(|m| {
                m.objectives().ok_or_else(|| {
                    Error::Precondition("population member has no cached objectives".into())
                })
            })
            .collect()
    }
}
