use std::sync::Arc;

use rayon::prelude::*;

use super::nsga::{crowding_distance, fast_non_dominated_sort};
use super::Individual;
use crate::dominance::{q_sort, DominanceTensor};
use crate::error::{Error, Result};
use crate::grid::AugmentedGrid;
use crate::transport::{EmpiricalCOMap, Orientation, SampleSet};

/// Survivors of one selection round.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    /// Pool indices of the survivors, in admission order.
    pub indices: Vec<usize>,
    /// Tournament key of each survivor, aligned with `indices`: front index
    /// and a secondary value, both lower-is-better.
    pub keys: Vec<(usize, f64)>,
}

impl Selection {
    fn from_ranked(order: Vec<(usize, usize, f64)>, popsize: usize) -> Self {
        let take = order.into_iter().take(popsize);
        let (indices, keys) = take.map(|(i, f, s)| (i, (f, s))).unzip();
        Selection { indices, keys }
    }
}

/// Fills in the missing empirical maps of `pool` on `grid`.
pub(crate) fn ensure_maps(pool: &mut [Individual], grid: &Arc<AugmentedGrid>) -> Result<()> {
    pool.par_iter_mut().filter(|ind| ind.map.is_none()).try_for_each(|ind| {
        let set = SampleSet::new("", Orientation::Minimize, ind.samples.clone())?;
        ind.map = Some(Arc::new(EmpiricalCOMap::new(&set, grid)?));
        Ok(())
    })
}

/// q-dominance survival: sort the pool with [`q_sort`] (no ties) and admit
/// candidates front by front in within-front order.
pub fn survival_qdom(pool: &mut [Individual], popsize: usize, grid: &Arc<AugmentedGrid>) -> Result<Selection> {
    ensure_maps(pool, grid)?;
    let maps: Vec<EmpiricalCOMap> = pool.iter().map(|ind| ind.map.as_deref().cloned().expect("map built")).collect();
    let tensor = DominanceTensor::from_maps(&maps)?;
    let sorted = q_sort(&tensor, false);
    let order = sorted
        .fronts
        .iter()
        .enumerate()
        .flat_map(|(f, front)| front.iter().map(move |&j| (j, f)))
        .map(|(j, f)| (j, f, sorted.scores[j]))
        .collect();
    Ok(Selection::from_ranked(order, popsize))
}

/// NSGA-II survival on the sample means.
pub fn survival_mean(pool: &[Individual], popsize: usize) -> Result<Selection> {
    let objs: Vec<Vec<f64>> = pool.iter().map(|ind| ind.mean.clone()).collect();
    Ok(nsga_select(&objs, popsize))
}

/// NSGA-II survival on a single sample per individual.
pub fn survival_single(pool: &[Individual], popsize: usize) -> Result<Selection> {
    let mut objs = Vec::with_capacity(pool.len());
    for ind in pool {
        if ind.samples.len() != 1 {
            return Err(Error::invalid(format!("single mode expects one sample, found {}", ind.samples.len())));
        }
        objs.push(ind.samples[0].clone());
    }
    Ok(nsga_select(&objs, popsize))
}

fn nsga_select(objs: &[Vec<f64>], popsize: usize) -> Selection {
    let mut order = Vec::with_capacity(objs.len());
    for (f, front) in fast_non_dominated_sort(objs).into_iter().enumerate() {
        let crowd = crowding_distance(objs, &front);
        let mut members: Vec<(usize, f64)> = front.into_iter().zip(crowd).collect();
        members.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        order.extend(members.into_iter().map(|(i, c)| (i, f, -c)));
    }
    Selection::from_ranked(order, popsize)
}
