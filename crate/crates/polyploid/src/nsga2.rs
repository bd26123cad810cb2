//! NSGA-II baseline: fast non-dominated sorting, crowding distance,
//! binary tournament on (rank, crowding), and elitist (mu + lambda)
//! truncation. Shares the SBX/polynomial-mutation operators and the
//! metric snapshot contract with the polyploid loop, so comparison runs
//! differ only in the algorithm itself.

use crate::dominance::dominates_values;
use crate::ea::{EaConfig, MetricRecorder, RunRecord, EA_RNG_STREAM};
use crate::error::{Error, Result};
use crate::genome::{Individual, ObjectiveVector, Population};
use crate::problems::ProblemSpec;
use crate::rng::RngStream;
use crate::variation::mate;

/// A monoploid individual annotated with its front index and crowding
/// distance. Rank 0 is the non-dominated set; boundary solutions of each
/// front carry infinite crowding.
#[derive(Debug, Clone)]
pub struct RankedIndividual {
    pub individual: Individual,
    pub rank: usize,
    pub crowding: f64,
}

/// Deb's fast non-dominated sort: front 0 is the non-dominated set,
/// front k the non-dominated set after removing fronts < k. The fronts
/// partition all indices.
pub fn fast_nondominated_sort<V: AsRef<[f64]>>(objs: &[V]) -> Result<Vec<Vec<usize>>> {
    let n = objs.len();
    if n == 0 {
        return Err(Error::Precondition("empty objective list".into()));
    }
    let dim = objs[0].as_ref().len();
    for o in objs {
        if o.as_ref().len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: o.as_ref().len(),
            });
        }
    }

    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates_values(objs[i].as_ref(), objs[j].as_ref()) {
                dominated_by[i].push(j);
                counts[j] += 1;
            } else if dominates_values(objs[j].as_ref(), objs[i].as_ref()) {
                dominated_by[j].push(i);
                counts[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| counts[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by[p] {
                counts[q] -= 1;
                if counts[q] == 0 {
                    next.push(q);
                }
            }
        }
        fronts.push(std::mem::replace(&mut current, next));
    }
    Ok(fronts)
}

/// Crowding distance within one front: per objective, boundary points
/// get infinity and interior points accumulate the neighbor gap divided
/// by the front's range in that objective. Objectives with zero range
/// are skipped, so duplicated vectors stay finite instead of dividing by
/// zero.
pub fn crowding_distance<V: AsRef<[f64]>>(front_objs: &[V]) -> Result<Vec<f64>> {
    let n = front_objs.len();
    if n == 0 {
        return Err(Error::Precondition("empty front".into()));
    }
    if n <= 2 {
        return Ok(vec![f64::INFINITY; n]);
    }
    let dim = front_objs[0].as_ref().len();
    let mut distance = vec![0.0f64; n];
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..dim {
        order.sort_by(|&a, &b| {
            front_objs[a].as_ref()[m]
                .partial_cmp(&front_objs[b].as_ref()[m])
                .unwrap()
        });
        let min = front_objs[order[0]].as_ref()[m];
        let max = front_objs[order[n - 1]].as_ref()[m];
        if max == min {
            continue;
        }
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        for w in 1..n - 1 {
            let gap = front_objs[order[w + 1]].as_ref()[m] - front_objs[order[w - 1]].as_ref()[m];
            distance[order[w]] += gap / (max - min);
        }
    }
    Ok(distance)
}

/// Rank a whole population into annotated individuals.
pub fn rank_population(pop: &Population) -> Result<Vec<RankedIndividual>> {
    let objs = pop.objectives()?;
    let ranks = rank_and_crowd(&objs)?;
    Ok(pop
        .members()
        .iter()
        .zip(ranks)
        .map(|(m, (rank, crowding))| RankedIndividual {
            individual: m.clone(),
            rank,
            crowding,
        })
        .collect())
}

/// Per-index (rank, crowding) annotations.
fn rank_and_crowd<V: AsRef<[f64]>>(objs: &[V]) -> Result<Vec<(usize, f64)>> {
    let fronts = fast_nondominated_sort(objs)?;
    let mut out = vec![(0usize, 0.0f64); objs.len()];
    for (rank, front) in fronts.iter().enumerate() {
        let front_objs: Vec<&[f64]> = front.iter().map(|&i| objs[i].as_ref()).collect();
        let crowding = crowding_distance(&front_objs)?;
        for (&i, &c) in front.iter().zip(&crowding) {
            out[i] = (rank, c);
        }
    }
    Ok(out)
}

/// Binary tournament under the crowded comparison: lower rank wins, then
/// higher crowding, then a fair coin.
fn tournament(annotations: &[(usize, f64)], rng: &mut RngStream) -> usize {
    let a = rng.index(annotations.len());
    let b = rng.index(annotations.len());
    let (rank_a, crowd_a) = annotations[a];
    let (rank_b, crowd_b) = annotations[b];
    if rank_a != rank_b {
        if rank_a < rank_b {
            a
        } else {
            b
        }
    } else if crowd_a != crowd_b {
        if crowd_a > crowd_b {
            a
        } else {
            b
        }
    } else if rng.chance(0.5) {
        a
    } else {
        b
    }
}

/// Fill the next generation front by front; the front that overflows is
/// sorted by descending crowding and truncated.
fn truncate(combined: Vec<Individual>, pop_size: usize) -> Result<Population> {
    let objs: Vec<ObjectiveVector> = combined
        .iter()
        .map(|m| {
            m.objectives()
                .cloned()
                .ok_or_else(|| Error::Precondition("unevaluated individual in truncation".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let fronts = fast_nondominated_sort(&objs)?;
    let mut chosen: Vec<usize> = Vec::with_capacity(pop_size);
    for front in fronts {
        if chosen.len() + front.len() <= pop_size {
            chosen.extend(front);
        } else {
            let front_objs: Vec<&[f64]> = front.iter().map(|&i| objs[i].as_ref()).collect();
            let crowding = crowding_distance(&front_objs)?;
            let mut by_crowding: Vec<usize> = (0..front.len()).collect();
            by_crowding.sort_by(|&x, &y| {
                crowding[y].partial_cmp(&crowding[x]).unwrap().then(x.cmp(&y))
            });
            chosen.extend(by_crowding[..pop_size - chosen.len()].iter().map(|&w| front[w]));
        }
        if chosen.len() == pop_size {
            break;
        }
    }
    let mut keep = vec![false; combined.len()];
    for &i in &chosen {
        keep[i] = true;
    }
    Population::new(
        combined
            .into_iter()
            .enumerate()
            .filter_map(|(i, m)| keep[i].then_some(m))
            .collect(),
    )
}

/// A full seeded NSGA-II run with the shared snapshot contract. Requires
/// a monoploid configuration (`cfg.d == 1`).
pub fn run_nsga2(cfg: &EaConfig, problem: &ProblemSpec) -> Result<RunRecord> {
    if cfg.d != 1 {
        return Err(Error::Config(format!(
            "nsga2 runs monoploid individuals; got d = {}",
            cfg.d
        )));
    }
    cfg.validate()?;
    let mut rng = RngStream::with_stream(cfg.seed, EA_RNG_STREAM);
    let mut recorder = MetricRecorder::new(problem, cfg)?;
    let bounds = problem.bounds();

    let mut pop = crate::ea::initialize(cfg, problem, &mut rng)?;
    let mut evaluations = cfg.pop_size as u64;
    recorder.observe(evaluations, &pop)?;

    while evaluations < cfg.max_evaluations {
        let annotations = rank_and_crowd(&pop.objectives()?)?;
        let mut offspring: Vec<Individual> = Vec::with_capacity(cfg.pop_size);
        while offspring.len() < cfg.pop_size {
            let pa = tournament(&annotations, &mut rng);
            let pb = tournament(&annotations, &mut rng);
            let (mut a, mut b) = mate(
                &pop.members()[pa],
                &pop.members()[pb],
                &cfg.variation,
                &bounds,
                &mut rng,
            )?;
            a.set_objectives(problem.evaluate(a.das())?);
            offspring.push(a);
            if offspring.len() < cfg.pop_size {
                b.set_objectives(problem.evaluate(b.das())?);
                offspring.push(b);
            }
        }
        evaluations += offspring.len() as u64;
        let mut combined = pop.into_members();
        combined.extend(offspring);
        pop = truncate(combined, cfg.pop_size)?;
        recorder.observe(evaluations, &pop)?;
    }

    let series = recorder.finish(evaluations, &pop)?;
    Ok(RunRecord {
        series,
        final_population: pop,
        total_evaluations: evaluations,
    })
}
