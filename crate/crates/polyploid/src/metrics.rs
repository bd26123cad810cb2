//! Running performance metrics: average distance to the true Pareto
//! front (convergence) and a projection-based diversity score.
//!
//! The diversity metric works per objective. The true front surface is
//! divided into `pop_size` cells of equal surface measure; projecting
//! those cells onto one objective axis gives unequal grids that reflect
//! the front's shape, so steep front regions are not under-represented.
//! Each cell scores 1 if at least one solution projects into it, then a
//! sliding window converts raw occupation into per-cell diversity
//! credit, and the average over cells (and then over objectives) is the
//! population's diversity in `[0, 1]`: 1 for the best distribution, 0
//! for the worst.
//!
//! Cell boundaries come from the *true* front, not the obtained one:
//! quantiles of a dense uniform-on-front sample realize the equal-area
//! division for any number of objectives.

use crate::dominance::domination_count;
use crate::error::{Error, Result};
use crate::genome::{ObjectiveVector, Population};
use crate::problems::ProblemSpec;
use crate::rng::RngStream;

/// Reference sample size used when callers do not choose one.
pub const DEFAULT_REFERENCE_COUNT: usize = 10_000;

/// Equal-surface-measure cells of the true front, projected onto one
/// objective axis. Boundaries are strictly increasing; the outermost two
/// are the exact range of the front's projection.
#[derive(Debug, Clone)]
pub struct CellPartition {
    objective_index: usize,
    boundaries: Vec<f64>,
}

impl CellPartition {
    pub fn objective_index(&self) -> usize {
        self.objective_index
    }

    /// `cells() + 1` sorted boundary values.
    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn cells(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Cell index of a projected value; values beyond the range clamp to
    /// the nearest end cell, and the last cell is closed on the right.
    fn cell_of(&self, value: f64) -> usize {
        let last = self.cells() - 1;
        if value <= self.boundaries[0] {
            return 0;
        }
        if value >= self.boundaries[self.cells()] {
            return last;
        }
        // boundaries[j] <= value < boundaries[j+1]
        let upper = self.boundaries.partition_point(|&b| b <= value);
        (upper - 1).min(last)
    }
}

/// Linear-interpolation quantile of a sorted sample.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Build the cell partition for one objective from `reference_count`
/// uniform true-front samples. Interior boundaries sit at the
/// `j / pop_size` quantiles of the projected surface measure; the end
/// boundaries are the exact projection range.
pub fn build_partition(
    spec: &ProblemSpec,
    objective_index: usize,
    pop_size: usize,
    reference_count: usize,
    rng: &mut RngStream,
) -> Result<CellPartition> {
    if objective_index >= spec.objectives() {
        return Err(Error::Precondition(format!(
            "objective index {objective_index} out of range for M = {}",
            spec.objectives()
        )));
    }
    if pop_size < 3 {
        return Err(Error::Precondition(format!(
            "partition needs pop_size >= 3, got {pop_size}"
        )));
    }
    if reference_count < 100 * pop_size {
        return Err(Error::Precondition(format!(
            "reference_count {reference_count} too small: need at least 100 * pop_size = {}",
            100 * pop_size
        )));
    }
    let mut projected: Vec<f64> = spec
        .sample_true_front(reference_count, rng)
        .iter()
        .map(|f| f.values()[objective_index])
        .collect();
    projected.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let (lo, hi) = spec.front_projection_range();
    if !(hi > lo) {
        return Err(Error::Metric("degenerate front projection range".into()));
    }
    let mut boundaries = Vec::with_capacity(pop_size + 1);
    boundaries.push(lo);
    for j in 1..pop_size {
        boundaries.push(quantile(&projected, j as f64 / pop_size as f64));
    }
    boundaries.push(hi);
    if boundaries.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Metric(
            "cell boundaries are not strictly increasing; raise reference_count".into(),
        ));
    }
    Ok(CellPartition {
        objective_index,
        boundaries,
    })
}

/// Mark each cell occupied (true) if at least one solution projects into it.
pub fn occupation<V: AsRef<[f64]>>(partition: &CellPartition, objs: &[V]) -> Vec<bool> {
    let mut occupied = vec![false; partition.cells()];
    for obj in objs {
        occupied[partition.cell_of(obj.as_ref()[partition.objective_index])] = true;
    }
    occupied
}

/// Diversity credit of a non-boundary cell given the occupation of its
/// immediate window `(left, cell, right)`.
pub fn interior_cell_score(left: bool, center: bool, right: bool) -> f64 {
    match (left, center, right) {
        (false, false, false) => 0.0,
        (false, false, true) => 0.5,
        (false, true, false) => 0.75,
        (false, true, true) => 0.67,
        (true, false, false) => 0.5,
        (true, false, true) => 0.75,
        (true, true, false) => 0.67,
        (true, true, true) => 1.0,
    }
}

/// Diversity credit of a boundary cell given itself and its single
/// neighbor; the same symmetric table serves both ends.
pub fn boundary_cell_score(cell: bool, neighbor: bool) -> f64 {
    match (cell, neighbor) {
        (false, false) => 0.0,
        (false, true) => 0.67,
        (true, false) => 0.67,
        (true, true) => 1.0,
    }
}

/// Sliding-window diversity value of an occupation vector: per-cell
/// credits summed and divided by the cell count. All-occupied scores 1,
/// all-empty scores 0.
pub fn window_score(occ: &[bool]) -> Result<f64> {
    let n = occ.len();
    if n < 3 {
        return Err(Error::Metric(format!(
            "window score needs at least 3 cells, got {n}"
        )));
    }
    let mut sum = boundary_cell_score(occ[0], occ[1]);
    for j in 1..n - 1 {
        sum += interior_cell_score(occ[j - 1], occ[j], occ[j + 1]);
    }
    sum += boundary_cell_score(occ[n - 1], occ[n - 2]);
    Ok(sum / n as f64)
}

/// Per-objective diversity values and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    per_objective: Vec<f64>,
    overall: f64,
}

impl DiversityReport {
    pub fn per_objective(&self) -> &[f64] {
        &self.per_objective
    }

    /// Arithmetic mean of the per-objective values.
    pub fn overall(&self) -> f64 {
        self.overall
    }
}

/// Immutable bundle of one partition per objective; build once, measure
/// many populations against it.
#[derive(Debug, Clone)]
pub struct DiversityMeter {
    partitions: Vec<CellPartition>,
}

impl DiversityMeter {
    pub fn new(
        spec: &ProblemSpec,
        pop_size: usize,
        reference_count: usize,
        rng: &mut RngStream,
    ) -> Result<Self> {
        let partitions = (0..spec.objectives())
            .map(|j| build_partition(spec, j, pop_size, reference_count, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiversityMeter { partitions })
    }

    pub fn partitions(&self) -> &[CellPartition] {
        &self.partitions
    }

    pub fn report<V: AsRef<[f64]>>(&self, objs: &[V]) -> Result<DiversityReport> {
        if objs.is_empty() {
            return Err(Error::Precondition("diversity of an empty set".into()));
        }
        let per_objective: Vec<f64> = self
            .partitions
            .iter()
            .map(|p| window_score(&occupation(p, objs)))
            .collect::<Result<Vec<_>>>()?;
        let overall = per_objective.iter().sum::<f64>() / per_objective.len() as f64;
        Ok(DiversityReport {
            per_objective,
            overall,
        })
    }
}

/// One-shot diversity of a set of objective vectors, building partitions
/// with [`DEFAULT_REFERENCE_COUNT`] samples.
pub fn diversity<V: AsRef<[f64]>>(
    spec: &ProblemSpec,
    objs: &[V],
    pop_size: usize,
    rng: &mut RngStream,
) -> Result<DiversityReport> {
    DiversityMeter::new(spec, pop_size, DEFAULT_REFERENCE_COUNT, rng)?.report(objs)
}

/// Mean orthogonal distance of the population's objective vectors to the
/// true Pareto front.
pub fn convergence(spec: &ProblemSpec, pop: &Population) -> Result<f64> {
    let objs = pop.objectives()?;
    if objs.is_empty() {
        return Err(Error::Precondition("convergence of an empty population".into()));
    }
    Ok(objs.iter().map(|f| spec.front_distance(f)).sum::<f64>() / objs.len() as f64)
}

/// Results of evaluating every chromosome of every individual as a
/// standalone solution (the "extracted" population of size
/// `pop_size * d`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractedStats {
    /// Mean front distance of the original population (DAS phenotypes).
    pub avg_distance_original: f64,
    /// Mean front distance of the extracted population.
    pub avg_distance_new: f64,
    /// Percentage (0-100) of extracted members dominated within the
    /// extracted population.
    pub pct_dominated: f64,
}

/// Evaluate the silent genetic material: every redundant chromosome is
/// scored as its own decision vector (the cached DAS objectives are
/// reused, so this consumes exactly `pop_size * (d - 1)` evaluations).
pub fn extract_expanded(spec: &ProblemSpec, pop: &Population) -> Result<ExtractedStats> {
    if pop.is_empty() {
        return Err(Error::Precondition("extracting an empty population".into()));
    }
    let mut expanded: Vec<ObjectiveVector> = Vec::with_capacity(pop.len());
    let mut original_sum = 0.0;
    for member in pop.members() {
        let das_objs = member
            .objectives()
            .ok_or_else(|| Error::Precondition("population member has no cached objectives".into()))?;
        original_sum += spec.front_distance(das_objs);
        expanded.push(das_objs.clone());
        for chromosome in member.redundant() {
            expanded.push(spec.evaluate(chromosome)?);
        }
    }
    let avg_distance_original = original_sum / pop.len() as f64;
    let avg_distance_new =
        expanded.iter().map(|f| spec.front_distance(f)).sum::<f64>() / expanded.len() as f64;
    let counts = domination_count(&expanded)?;
    let dominated = counts.iter().filter(|&&c| c > 0).count();
    let pct_dominated = 100.0 * dominated as f64 / expanded.len() as f64;
    Ok(ExtractedStats {
        avg_distance_original,
        avg_distance_new,
        pct_dominated,
    })
}
