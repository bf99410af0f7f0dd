//! Two distributions with equal marginals where no direction dominates:
//! X puts mass on (0,1) and (1,0), Y on (0,0) and (1,1). Prints the
//! dominance level in each direction and the grid-matched coupling.

use std::sync::Arc;

use qdom::rng::stream;
use qdom::{co_map, coupled_fraction, max_dominated_quantile, AugmentedGrid, GridSpec, Orientation, SampleSet};
use rand::Rng;

fn two_clusters(a: [f64; 2], b: [f64; 2], n: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let base = if i % 2 == 0 { a } else { b };
            base.iter().map(|v| v + 1e-3 * rng.random_range(-1.0..1.0)).collect()
        })
        .collect()
}

fn main() -> qdom::Result<()> {
    let grid = Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, 8, 8, 0, 0)?)?);
    for seed in 0..5 {
        let mut rng = stream(seed, &[]);
        let x = SampleSet::new("X", Orientation::Maximize, two_clusters([0.0, 1.0], [1.0, 0.0], 64, &mut rng))?;
        let y = SampleSet::new("Y", Orientation::Maximize, two_clusters([0.0, 0.0], [1.0, 1.0], 64, &mut rng))?;
        let (mx, my) = (co_map(&x, &grid)?, co_map(&y, &grid)?);
        println!(
            "seed {seed}: X>Y level {:>2}  Y>X level {:>2}  coupled X>=Y {:.3}  Y>=X {:.3}",
            max_dominated_quantile(&mx, &my)?,
            max_dominated_quantile(&my, &mx)?,
            coupled_fraction(&mx, &my)?,
            coupled_fraction(&my, &mx)?
        );
    }
    Ok(())
}
