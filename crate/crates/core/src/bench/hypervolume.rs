//! Two-objective hypervolume (minimization) and the ΔHV gap to a true front.

use serde::{Deserialize, Serialize};

use super::zdt::ZdtSpec;

/// Area dominated by `points` and bounded by `reference`. Points not strictly
/// better than the reference in both objectives contribute nothing.
pub fn hypervolume_2d(points: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let [r1, r2] = reference;
    let mut pts: Vec<[f64; 2]> =
        points.iter().copied().filter(|p| p[0] < r1 && p[1] < r2 && p[0].is_finite() && p[1].is_finite()).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut hv = 0.0;
    let mut best_f2 = r2;
    for (i, p) in pts.iter().enumerate() {
        if p[1] >= best_f2 {
            continue;
        }
        best_f2 = p[1];
        // width until the next point that improves on f2
        let next_x = pts[i + 1..].iter().find(|q| q[1] < best_f2).map_or(r1, |q| q[0]);
        hv += (next_x - p[0]) * (r2 - best_f2);
    }
    hv
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HvConfig {
    pub reference: [f64; 2],
    /// Divide ΔHV by the hypervolume of the true front.
    pub normalize: bool,
}

impl Default for HvConfig {
    fn default() -> Self {
        HvConfig { reference: [11.0, 11.0], normalize: false }
    }
}

/// `HV(front) − HV(points)` for one population measurement.
pub fn delta_hv(problem: &ZdtSpec, points: &[[f64; 2]], cfg: &HvConfig) -> f64 {
    let front = problem.front_hypervolume(cfg.reference);
    let gap = front - hypervolume_2d(points, cfg.reference);
    if cfg.normalize {
        gap / front
    } else {
        gap
    }
}

/// Average ΔHV over several noisy measurements of the same population, each
/// given as one objective vector per individual.
pub fn mean_delta_hv(problem: &ZdtSpec, measurements: &[Vec<[f64; 2]>], cfg: &HvConfig) -> f64 {
    if measurements.is_empty() {
        return f64::NAN;
    }
    measurements.iter().map(|m| delta_hv(problem, m, cfg)).sum::<f64>() / measurements.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::zdt::ZdtVariant;

    #[test]
    fn single_point_boxes() {
        assert_eq!(hypervolume_2d(&[[1.0, 2.0]], [3.0, 3.0]), 2.0);
        assert_eq!(hypervolume_2d(&[], [3.0, 3.0]), 0.0);
        assert_eq!(hypervolume_2d(&[[3.0, 0.0]], [3.0, 3.0]), 0.0);
        assert_eq!(hypervolume_2d(&[[4.0, 4.0]], [3.0, 3.0]), 0.0);
    }

    #[test]
    fn staircase_and_dominated_points() {
        let r = [4.0, 4.0];
        // union of [1,4]x[3,4], [2,4]x[2,4], [3,4]x[1,4]
        let stairs = [[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]];
        assert_eq!(hypervolume_2d(&stairs, r), 6.0);
        let mut with_dominated = stairs.to_vec();
        with_dominated.push([2.5, 2.5]);
        with_dominated.push([2.0, 2.0]);
        assert_eq!(hypervolume_2d(&with_dominated, r), 6.0);
    }

    #[test]
    fn dense_front_approaches_closed_form() {
        for variant in ZdtVariant::ALL {
            let spec = ZdtSpec::standard(variant);
            let front = spec.analytic_front(200_000);
            let cfg = HvConfig::default();
            let gap = delta_hv(&spec, &front, &cfg);
            assert!((-1e-9..1e-3).contains(&gap), "{variant}: {gap}");
        }
    }

    #[test]
    fn normalized_gap_of_empty_population_is_one() {
        let spec = ZdtSpec::standard(ZdtVariant::Zdt2);
        let cfg = HvConfig { normalize: true, ..HvConfig::default() };
        assert!((delta_hv(&spec, &[], &cfg) - 1.0).abs() < 1e-15);
    }
}
