//! Rank five Gaussian candidates whose means lie along a diagonal, with
//! one wide candidate thrown in. Candidates are bi-objective and maximized.

use std::sync::Arc;

use qdom::rng::stream;
use qdom::{co_map, q_sort, AugmentedGrid, DominanceTensor, GridSpec, Orientation, SampleSet};
use rand_distr::{Distribution, Normal};

fn main() -> qdom::Result<()> {
    let grid = Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, 8, 8, 0, 0)?)?);
    let candidates = [("c0", 0.0, 1.0), ("c1", 0.5, 1.0), ("c2", 1.0, 1.0), ("wide", 1.0, 3.0), ("c3", 1.5, 1.0)];
    let mut rng = stream(3, &[]);
    let mut maps = Vec::new();
    for &(label, mean, sd) in &candidates {
        let noise = Normal::new(mean, sd).expect("valid normal");
        let points = (0..grid.len()).map(|_| vec![noise.sample(&mut rng), noise.sample(&mut rng)]).collect();
        maps.push(co_map(&SampleSet::new(label, Orientation::Maximize, points)?, &grid)?);
    }
    let tensor = DominanceTensor::from_maps(&maps)?;
    let ordering = q_sort(&tensor, true);
    for (f, front) in ordering.fronts.iter().enumerate() {
        let names: Vec<String> =
            front.iter().map(|&j| format!("{} ({:.3})", candidates[j].0, ordering.scores[j])).collect();
        println!("front {f} at c={}: {}", ordering.levels[f], names.join(", "));
    }
    Ok(())
}
