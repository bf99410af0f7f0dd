//! Map a banana-shaped sample onto a shared grid and print its empirical
//! center-outward contours, innermost first.
//!
//! cargo run --example quantile_contours -- [n] [seed]

use std::sync::Arc;

use qdom::io::write_front_csv;
use qdom::rng::stream;
use qdom::{co_map, AugmentedGrid, GridSpec, Orientation, SampleSet};
use rand_distr::{Distribution, StandardNormal};

fn main() -> qdom::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map_or(Ok(100), |s| s.parse()).expect("n");
    let seed: u64 = args.get(2).map_or(Ok(0), |s| s.parse()).expect("seed");

    let mut rng = stream(seed, &[]);
    let points = (0..n)
        .map(|_| {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            vec![a, 0.5 * b + 0.4 * a * a]
        })
        .collect();
    let set = SampleSet::new("banana", Orientation::Maximize, points)?;
    let grid = Arc::new(AugmentedGrid::build(GridSpec::with_theta(n, 2, None, seed)?)?);
    let spec = grid.spec();
    println!("n={} nR={} nS={} n0={}", spec.n, spec.nr, spec.ns, spec.n0);

    let map = co_map(&set, &grid)?;
    for level in 0..=spec.nr {
        let contour = map.quantile_contour(level)?;
        if contour.is_empty() {
            continue;
        }
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for &i in &contour {
            for (j, v) in map.sample(i).into_iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let region = map.quantile_region(level)?;
        println!(
            "q={:.3}  contour size {:>3}  region size {:>3}  x in [{:+.2}, {:+.2}]  y in [{:+.2}, {:+.2}]",
            region.order,
            contour.len(),
            region.members.len(),
            lo[0],
            hi[0],
            lo[1],
            hi[1]
        );
    }

    if let Some(path) = args.get(3) {
        write_front_csv(std::slice::from_ref(&map), spec.nr / 2, std::fs::File::create(path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
