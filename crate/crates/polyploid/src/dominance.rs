//! Pareto dominance under the minimization convention.

use crate::error::{Error, Result};
use crate::genome::ObjectiveVector;

/// True iff `a` Pareto-dominates `b`: no worse in every objective and
/// strictly better in at least one (minimization).
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(dominates_values(a.values(), b.values()))
}

/// Unchecked dominance test on raw objective slices.
pub(crate) fn dominates_values(a: &[f64], b: &[f64]) -> bool {
    let mut strictly_better = false;
    for (&ai, &bi) in a.iter().zip(b) {
        if ai > bi {
            return false;
        }
        if ai < bi {
            strictly_better = true;
        }
    }
    strictly_better
}

fn check_uniform_dims<V: AsRef<[f64]>>(objs: &[V]) -> Result<usize> {
    let first = objs
        .first()
        .ok_or_else(|| Error::Precondition("empty objective list".into()))?
        .as_ref()
        .len();
    for o in objs {
        if o.as_ref().len() != first {
            return Err(Error::DimensionMismatch {
                left: first,
                right: o.as_ref().len(),
            });
        }
    }
    Ok(first)
}

/// For each vector, the number of others in the list that dominate it.
/// "Least dominated" means the smallest of these counts.
pub fn domination_count<V: AsRef<[f64]>>(objs: &[V]) -> Result<Vec<usize>> {
    check_uniform_dims(objs)?;
    let mut counts = vec![0usize; objs.len()];
    for i in 0..objs.len() {
        for j in 0..objs.len() {
            if i != j && dominates_values(objs[j].as_ref(), objs[i].as_ref()) {
                counts[i] += 1;
            }
        }
    }
    Ok(counts)
}

/// Indices of the non-dominated members (domination count zero). Never
/// empty for a non-empty input.
pub fn nondominated_indices<V: AsRef<[f64]>>(objs: &[V]) -> Result<Vec<usize>> {
    let counts = domination_count(objs)?;
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 0)
        .map(|(i, _)| i)
        .collect())
}
