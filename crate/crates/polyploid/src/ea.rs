//! The polyploid generational loop: random initialization, non-dominated
//! mating selection with a varying pool size, partial-dominance
//! reproduction, and least-dominated survival with random tie breaking.
//!
//! Selection pressure is high by construction: only non-dominated
//! members mate, each at most once per generation, and survival keeps
//! the `pop_size` least-dominated of parents plus offspring. There is no
//! explicit diversity maintenance; the redundant chromosomes carry the
//! population's reserve of genetic material.

use crate::dominance::domination_count;
use crate::error::{Error, Result};
use crate::genome::{Chromosome, Individual, Population};
use crate::metrics::{convergence, DiversityMeter};
use crate::problems::ProblemSpec;
use crate::rng::RngStream;
use crate::variation::{mate, VariationParams};

/// Sub-stream of the run seed that drives the evolutionary loop.
pub const EA_RNG_STREAM: u64 = 0;
/// Sub-stream of the run seed that samples the metric cell partitions,
/// kept separate so measurement never perturbs the evolution.
pub const METRIC_RNG_STREAM: u64 = 1;

/// Configuration of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct EaConfig {
    pub pop_size: usize,
    /// Ploidy: chromosomes per individual, including the DAS.
    pub d: usize,
    /// The run stops at the first generation boundary at or past this count.
    pub max_evaluations: u64,
    pub variation: VariationParams,
    /// Evaluations between metric snapshots; snapshots land on the first
    /// generation boundary crossing each interval.
    pub metric_interval: u64,
    pub seed: u64,
    /// True-front samples per objective for the diversity partitions.
    pub reference_count: usize,
}

impl EaConfig {
    /// Defaults: metric snapshot every 500 evaluations, diversity
    /// partitions from `max(10_000, 100 * pop_size)` front samples.
    pub fn new(
        pop_size: usize,
        d: usize,
        max_evaluations: u64,
        variation: VariationParams,
        seed: u64,
    ) -> Self {
        EaConfig {
            pop_size,
            d,
            max_evaluations,
            variation,
            metric_interval: 500.min(max_evaluations),
            seed,
            reference_count: 10_000.max(100 * pop_size),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::Config(format!(
                "pop_size must be >= 2, got {}",
                self.pop_size
            )));
        }
        if self.d < 1 {
            return Err(Error::Config("ploidy must be >= 1".into()));
        }
        if self.max_evaluations == 0 {
            return Err(Error::Config("max_evaluations must be positive".into()));
        }
        if self.metric_interval == 0 || self.metric_interval > self.max_evaluations {
            return Err(Error::Config(format!(
                "metric_interval must be in 1..=max_evaluations, got {}",
                self.metric_interval
            )));
        }
        self.variation.validate()
    }
}

/// One metric snapshot, stamped with the cumulative evaluation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    pub evaluations: u64,
    pub convergence: f64,
    pub diversity: f64,
}

/// Everything a run produces: the metric time series, the final
/// population, and the exact evaluation total.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub series: Vec<MetricSample>,
    pub final_population: Population,
    pub total_evaluations: u64,
}

impl RunRecord {
    /// The last snapshot; the series always ends at the final state.
    pub fn final_sample(&self) -> &MetricSample {
        self.series.last().expect("a run records at least one sample")
    }
}

/// Takes convergence/diversity snapshots at generation boundaries, one
/// per crossed metric interval, and always records the final state.
pub(crate) struct MetricRecorder<'a> {
    problem: &'a ProblemSpec,
    meter: DiversityMeter,
    interval: u64,
    next_due: u64,
    series: Vec<MetricSample>,
}

impl<'a> MetricRecorder<'a> {
    pub(crate) fn new(problem: &'a ProblemSpec, cfg: &EaConfig) -> Result<Self> {
        let mut rng = RngStream::with_stream(cfg.seed, METRIC_RNG_STREAM);
        let meter = DiversityMeter::new(problem, cfg.pop_size, cfg.reference_count, &mut rng)?;
        Ok(MetricRecorder {
            problem,
            meter,
            interval: cfg.metric_interval,
            next_due: cfg.metric_interval,
            series: Vec::new(),
        })
    }

    fn measure(&self, evaluations: u64, pop: &Population) -> Result<MetricSample> {
        let objs = pop.objectives()?;
        Ok(MetricSample {
            evaluations,
            convergence: convergence(self.problem, pop)?,
            diversity: self.meter.report(&objs)?.overall(),
        })
    }

    pub(crate) fn observe(&mut self, evaluations: u64, pop: &Population) -> Result<()> {
        if evaluations >= self.next_due {
            let sample = self.measure(evaluations, pop)?;
            self.series.push(sample);
            self.next_due = (evaluations / self.interval + 1) * self.interval;
        }
        Ok(())
    }

    pub(crate) fn finish(mut self, evaluations: u64, pop: &Population) -> Result<Vec<MetricSample>> {
        if self.series.last().map(|s| s.evaluations) != Some(evaluations) {
            let sample = self.measure(evaluations, pop)?;
            self.series.push(sample);
        }
        Ok(self.series)
    }
}

/// Random population of `pop_size` d-ploid individuals, every allele
/// uniform in bounds, every DAS evaluated (consuming exactly `pop_size`
/// evaluations).
pub fn initialize(cfg: &EaConfig, problem: &ProblemSpec, rng: &mut RngStream) -> Result<Population> {
    let bounds = problem.bounds();
    let mut members = Vec::with_capacity(cfg.pop_size);
    for _ in 0..cfg.pop_size {
        let das = Chromosome::random(&bounds, rng);
        let redundant = (1..cfg.d).map(|_| Chromosome::random(&bounds, rng)).collect();
        let mut individual = Individual::new(das, redundant);
        let objectives = problem.evaluate(individual.das())?;
        individual.set_objectives(objectives);
        members.push(individual);
    }
    Population::new(members)
}

/// The non-dominated members, cloned into a mating pool.
///
/// If fewer than two members are non-dominated the pool is topped up to
/// two with the least-dominated of the rest (ties broken at random), and
/// an odd pool loses one uniformly random member so that everyone mates
/// exactly once.
pub fn select_mating_pool(pop: &Population, rng: &mut RngStream) -> Result<Vec<Individual>> {
    let objs = pop.objectives()?;
    let counts = domination_count(&objs)?;
    let mut pool: Vec<usize> = (0..pop.len()).filter(|&i| counts[i] == 0).collect();

    if pool.len() < 2 {
        let mut rest: Vec<usize> = (0..pop.len()).filter(|&i| counts[i] > 0).collect();
        rest.sort_by_key(|&i| counts[i]);
        let mut need = 2 - pool.len();
        let mut at = 0;
        while need > 0 && at < rest.len() {
            // whole tie groups fit or get subsampled at random
            let count = counts[rest[at]];
            let mut group: Vec<usize> = rest[at..]
                .iter()
                .take_while(|&&i| counts[i] == count)
                .copied()
                .collect();
            at += group.len();
            if group.len() > need {
                rng.shuffle(&mut group);
                group.truncate(need);
            }
            need -= group.len();
            pool.extend(group);
        }
    }

    if pool.len() % 2 == 1 {
        let drop = rng.index(pool.len());
        pool.remove(drop);
    }
    Ok(pool.iter().map(|&i| pop.members()[i].clone()).collect())
}

/// Partition the pool into random disjoint pairs, mate each pair, and
/// evaluate every child's DAS. Produces exactly `pool.len()` offspring
/// and consumes exactly `pool.len()` evaluations.
pub fn reproduce(
    pool: &[Individual],
    cfg: &EaConfig,
    problem: &ProblemSpec,
    rng: &mut RngStream,
) -> Result<Vec<Individual>> {
    if pool.len() < 2 || pool.len() % 2 != 0 {
        return Err(Error::Precondition(format!(
            "mating pool must have even size >= 2, got {}",
            pool.len()
        )));
    }
    let mut order: Vec<usize> = (0..pool.len()).collect();
    rng.shuffle(&mut order);
    let bounds = problem.bounds();
    let mut offspring = Vec::with_capacity(pool.len());
    for pair in order.chunks(2) {
        let (mut a, mut b) = mate(&pool[pair[0]], &pool[pair[1]], &cfg.variation, &bounds, rng)?;
        a.set_objectives(problem.evaluate(a.das())?);
        b.set_objectives(problem.evaluate(b.das())?);
        offspring.push(a);
        offspring.push(b);
    }
    Ok(offspring)
}

/// Least-dominated survival over parents plus offspring: members are
/// ranked by domination count within the combined set, the first
/// `pop_size` survive, and the tie group at the cut is subsampled
/// uniformly at random.
pub fn survive(
    parents: Population,
    offspring: Vec<Individual>,
    cfg: &EaConfig,
    rng: &mut RngStream,
) -> Result<Population> {
    let mut combined = parents.into_members();
    combined.extend(offspring);
    if combined.len() < cfg.pop_size {
        return Err(Error::Precondition(format!(
            "combined population {} smaller than pop_size {}",
            combined.len(),
            cfg.pop_size
        )));
    }
    let objs: Vec<_> = combined
        .iter()
        .map(|m| {
            m.objectives().ok_or_else(|| {
                Error::Precondition("unevaluated individual in survival selection".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let counts = domination_count(&objs)?;

    let mut order: Vec<usize> = (0..combined.len()).collect();
    order.sort_by_key(|&i| (counts[i], i));
    let cut_count = counts[order[cfg.pop_size - 1]];

    let mut keep = vec![false; combined.len()];
    let mut kept = 0;
    for &i in &order {
        if counts[i] < cut_count {
            keep[i] = true;
            kept += 1;
        }
    }
    let mut boundary: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| counts[i] == cut_count)
        .collect();
    rng.shuffle(&mut boundary);
    for &i in boundary.iter().take(cfg.pop_size - kept) {
        keep[i] = true;
    }

    let members: Vec<Individual> = combined
        .into_iter()
        .enumerate()
        .filter_map(|(i, m)| keep[i].then_some(m))
        .collect();
    debug_assert_eq!(members.len(), cfg.pop_size);
    Population::new(members)
}

/// A full seeded run: initialize, then select/reproduce/survive until
/// `max_evaluations` is reached, recording convergence and diversity
/// along the way. Identical configurations produce identical records.
pub fn run(cfg: &EaConfig, problem: &ProblemSpec) -> Result<RunRecord> {
    cfg.validate()?;
    let mut rng = RngStream::with_stream(cfg.seed, EA_RNG_STREAM);
    let mut recorder = MetricRecorder::new(problem, cfg)?;

    let mut pop = initialize(cfg, problem, &mut rng)?;
    let mut evaluations = cfg.pop_size as u64;
    recorder.observe(evaluations, &pop)?;

    let mut pool_total: u64 = 0;
    while evaluations < cfg.max_evaluations {
        let pool = select_mating_pool(&pop, &mut rng)?;
        let offspring = reproduce(&pool, cfg, problem, &mut rng)?;
        evaluations += offspring.len() as u64;
        pool_total += pool.len() as u64;
        pop = survive(pop, offspring, cfg, &mut rng)?;
        recorder.observe(evaluations, &pop)?;
    }
    // exact evaluation accounting: initialization plus one per offspring
    debug_assert_eq!(evaluations, cfg.pop_size as u64 + pool_total);

    let series = recorder.finish(evaluations, &pop)?;
    Ok(RunRecord {
        series,
        final_population: pop,
        total_evaluations: evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::nondominated_indices;
    use crate::genome::ObjectiveVector;
    use crate::problems::DtlzVariant;

    fn problem() -> ProblemSpec {
        ProblemSpec::new(DtlzVariant::Dtlz2, 3, 7).unwrap()
    }

    fn config(pop_size: usize, d: usize, max_evaluations: u64, seed: u64) -> EaConfig {
        EaConfig::new(
            pop_size,
            d,
            max_evaluations,
            VariationParams::defaults(7),
            seed,
        )
    }

    fn synthetic_pop(objs: &[Vec<f64>]) -> Population {
        let members = objs
            .iter()
            .map(|f| {
                let mut ind = Individual::new(Chromosome::new(vec![0.5; 7]), vec![]);
                ind.set_objectives(ObjectiveVector::new(f.clone()).unwrap());
                ind
            })
            .collect();
        Population::new(members).unwrap()
    }

    #[test]
    fn initialize_builds_the_right_structure() {
        let p = problem();
        let cfg = config(10, 3, 1000, 1);
        let mut rng = RngStream::new(cfg.seed);
        let pop = initialize(&cfg, &p, &mut rng).unwrap();
        assert_eq!(pop.len(), 10);
        for m in pop.members() {
            assert_eq!(m.ploidy(), 3);
            assert_eq!(m.redundant().len(), 2);
            assert!(m.is_evaluated());
            assert_eq!(m.objectives().unwrap(), &p.evaluate(m.das()).unwrap());
        }
    }

    #[test]
    fn initialize_monoploid_has_no_redundant() {
        let p = problem();
        let cfg = config(6, 1, 1000, 2);
        let mut rng = RngStream::new(cfg.seed);
        let pop = initialize(&cfg, &p, &mut rng).unwrap();
        assert!(pop.members().iter().all(|m| m.redundant().is_empty()));
    }

    #[test]
    fn initialize_is_deterministic() {
        let p = problem();
        let cfg = config(8, 2, 1000, 33);
        let a = initialize(&cfg, &p, &mut RngStream::new(33)).unwrap();
        let b = initialize(&cfg, &p, &mut RngStream::new(33)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn odd_nondominated_pool_drops_one() {
        // five mutually non-dominated members
        let pop = synthetic_pop(&[
            vec![1.0, 5.0, 3.0],
            vec![2.0, 4.0, 2.0],
            vec![3.0, 3.0, 4.0],
            vec![4.0, 2.0, 1.0],
            vec![5.0, 1.0, 5.0],
        ]);
        let mut rng = RngStream::new(3);
        let pool = select_mating_pool(&pop, &mut rng).unwrap();
        assert_eq!(pool.len(), 4);
    }

    #[test]
    fn dominated_population_pads_pool_to_two() {
        // member 0 dominates everyone else
        let pop = synthetic_pop(&[
            vec![1.0, 1.0, 1.0],
            vec![2.0, 2.0, 2.0],
            vec![3.0, 3.0, 3.0],
            vec![4.0, 4.0, 4.0],
        ]);
        let mut rng = RngStream::new(4);
        let pool = select_mating_pool(&pop, &mut rng).unwrap();
        assert_eq!(pool.len(), 2);
        assert_eq!(pool[0].objectives().unwrap().values(), &[1.0, 1.0, 1.0]);
        // the pad member is the least dominated of the rest
        assert_eq!(pool[1].objectives().unwrap().values(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn pool_is_subset_of_nondominated_set() {
        let p = problem();
        let cfg = config(20, 2, 1000, 5);
        let mut rng = RngStream::new(cfg.seed);
        let pop = initialize(&cfg, &p, &mut rng).unwrap();
        let front = nondominated_indices(&pop.objectives().unwrap()).unwrap();
        let front_objs: Vec<&ObjectiveVector> =
            front.iter().map(|&i| pop.members()[i].objectives().unwrap()).collect();
        let pool = select_mating_pool(&pop, &mut rng).unwrap();
        if front.len() >= 2 {
            assert!(pool.len() <= front.len());
            for member in &pool {
                assert!(front_objs.contains(&member.objectives().unwrap()));
            }
        }
    }

    #[test]
    fn reproduce_counts_match_pool() {
        let p = problem();
        let cfg = config(10, 2, 1000, 6);
        let mut rng = RngStream::new(cfg.seed);
        let pop = initialize(&cfg, &p, &mut rng).unwrap();
        let pool: Vec<Individual> = pop.members()[..2].to_vec();
        let offspring = reproduce(&pool, &cfg, &p, &mut rng).unwrap();
        assert_eq!(offspring.len(), 2);
        assert!(offspring.iter().all(|c| c.is_evaluated()));
    }

    #[test]
    fn reproduce_rejects_odd_pools() {
        let p = problem();
        let cfg = config(10, 1, 1000, 7);
        let mut rng = RngStream::new(cfg.seed);
        let pop = initialize(&cfg, &p, &mut rng).unwrap();
        assert!(reproduce(&pop.members()[..3].to_vec(), &cfg, &p, &mut rng).is_err());
        assert!(reproduce(&[], &cfg, &p, &mut rng).is_err());
    }

    #[test]
    fn reproduce_is_deterministic() {
        let p = problem();
        let cfg = config(10, 2, 1000, 8);
        let pop = initialize(&cfg, &p, &mut RngStream::new(8)).unwrap();
        let pool = pop.members().to_vec();
        let a = reproduce(&pool, &cfg, &p, &mut RngStream::new(99)).unwrap();
        let b = reproduce(&pool, &cfg, &p, &mut RngStream::new(99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn survive_keeps_parents_when_offspring_dominated() {
        let cfg = config(3, 1, 1000, 9);
        let parents = synthetic_pop(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 1.0, 3.0],
            vec![3.0, 2.0, 1.0],
        ]);
        let offspring = synthetic_pop(&[
            vec![5.0, 5.0, 5.0],
            vec![6.0, 6.0, 6.0],
            vec![7.0, 7.0, 7.0],
        ])
        .into_members();
        let mut rng = RngStream::new(9);
        let survivors = survive(parents.clone(), offspring, &cfg, &mut rng).unwrap();
        assert_eq!(survivors, parents);
    }

    #[test]
    fn survive_subsamples_nondominated_ties_uniformly() {
        let cfg = config(2, 1, 1000, 10);
        // four mutually non-dominated members; two must survive at random
        let parents = synthetic_pop(&[vec![1.0, 4.0, 2.0], vec![2.0, 3.0, 1.0]]);
        let offspring =
            synthetic_pop(&[vec![3.0, 2.0, 4.0], vec![4.0, 1.0, 3.0]]).into_members();
        let mut seen = std::collections::HashSet::new();
        for seed in 0..200u64 {
            let mut rng = RngStream::new(seed);
            let survivors = survive(parents.clone(), offspring.clone(), &cfg, &mut rng).unwrap();
            assert_eq!(survivors.len(), 2);
            let mut key: Vec<u64> = survivors
                .members()
                .iter()
                .map(|m| m.objectives().unwrap().values()[0] as u64)
                .collect();
            key.sort();
            seen.insert(key);
        }
        // all 6 two-element subsets show up across seeds
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn survivors_have_minimal_domination_counts() {
        let p = problem();
        let cfg = config(12, 2, 1000, 11);
        let mut rng = RngStream::new(cfg.seed);
        let parents = initialize(&cfg, &p, &mut rng).unwrap();
        let pool = select_mating_pool(&parents, &mut rng).unwrap();
        let offspring = reproduce(&pool, &cfg, &p, &mut rng).unwrap();

        let mut combined: Vec<Individual> = parents.members().to_vec();
        combined.extend(offspring.iter().cloned());
        let objs: Vec<&ObjectiveVector> = combined.iter().map(|m| m.objectives().unwrap()).collect();
        let counts = domination_count(&objs).unwrap();
        let mut sorted = counts.clone();
        sorted.sort();
        let cut = sorted[cfg.pop_size - 1];

        let survivors = survive(parents, offspring, &cfg, &mut rng).unwrap();
        assert_eq!(survivors.len(), cfg.pop_size);
        for m in survivors.members() {
            let idx = combined.iter().position(|c| c == m).unwrap();
            assert!(counts[idx] <= cut);
        }
    }

    #[test]
    fn run_with_budget_equal_to_pop_size_snapshots_once() {
        let p = problem();
        let mut cfg = config(10, 2, 10, 12);
        cfg.metric_interval = 10;
        let record = run(&cfg, &p).unwrap();
        assert_eq!(record.total_evaluations, 10);
        assert_eq!(record.series.len(), 1);
        assert_eq!(record.series[0].evaluations, 10);
        assert_eq!(record.final_population.len(), 10);
    }

    #[test]
    fn run_is_deterministic() {
        let p = problem();
        let mut cfg = config(12, 2, 300, 13);
        cfg.metric_interval = 50;
        cfg.reference_count = 1200;
        let a = run(&cfg, &p).unwrap();
        let b = run(&cfg, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn run_accounting_and_series_shape() {
        let p = problem();
        let mut cfg = config(10, 3, 253, 14);
        cfg.metric_interval = 40;
        cfg.reference_count = 1000;
        let record = run(&cfg, &p).unwrap();
        assert!(record.total_evaluations >= cfg.max_evaluations);
        assert!(record.total_evaluations < cfg.max_evaluations + cfg.pop_size as u64);
        assert!(record
            .series
            .windows(2)
            .all(|w| w[1].evaluations > w[0].evaluations));
        assert_eq!(
            record.final_sample().evaluations,
            record.total_evaluations
        );
        assert_eq!(record.final_population.len(), cfg.pop_size);
        // elitist loop keeps ploidy constant
        assert!(record.final_population.members().iter().all(|m| m.ploidy() == 3));
    }

    #[test]
    fn monoploid_run_never_grows_redundant_chromosomes() {
        let p = problem();
        let mut cfg = config(8, 1, 200, 15);
        cfg.metric_interval = 100;
        cfg.reference_count = 800;
        let record = run(&cfg, &p).unwrap();
        assert!(record
            .final_population
            .members()
            .iter()
            .all(|m| m.redundant().is_empty()));
    }

    #[test]
    fn config_validation() {
        let p7 = VariationParams::defaults(7);
        assert!(config(10, 2, 100, 0).validate().is_ok());
        assert!(EaConfig::new(1, 2, 100, p7, 0).validate().is_err());
        assert!(EaConfig::new(10, 0, 100, p7, 0).validate().is_err());
        let mut bad = config(10, 2, 100, 0);
        bad.metric_interval = 200;
        assert!(bad.validate().is_err());
    }
}
