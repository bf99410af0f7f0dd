use std::sync::Arc;

use proptest::prelude::*;

use qdom::bench::{hypervolume_2d, ZdtSpec, ZdtVariant};
use qdom::grid::factorize;
use qdom::io::{read_samples_csv, write_samples_csv};
use qdom::rng::stream;
use qdom::smoo::nsga::{fast_non_dominated_sort, pareto_dominates};
use qdom::{co_map, dominates_at, q_sort, AugmentedGrid, DominanceTensor, GridSpec, Orientation, SampleSet};

fn point() -> impl Strategy<Value = [f64; 2]> {
    (0.0..12.0f64, 0.0..12.0f64).prop_map(|(a, b)| [a, b])
}

fn cloud(n: usize, d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, d), n)
}

fn tensor() -> impl Strategy<Value = DominanceTensor> {
    (1usize..=5, 1usize..=7, prop::sample::select(vec![1u32, 2, 3, 8]))
        .prop_flat_map(|(nr, m, ns)| {
            let full = prop::bool::weighted(0.35);
            prop::collection::vec((full, 0..=ns), nr * m * m).prop_map(move |cells| {
                let counts = cells.into_iter().map(|(f, c)| if f { ns } else { c }).collect();
                DominanceTensor::from_counts(nr, ns as usize, m, counts).unwrap()
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hypervolume_never_decreases_when_adding_a_point(pts in prop::collection::vec(point(), 0..10), extra in point()) {
        let r = [11.0, 11.0];
        let before = hypervolume_2d(&pts, r);
        let mut more = pts.clone();
        more.push(extra);
        prop_assert!(hypervolume_2d(&more, r) >= before);
        prop_assert!(before <= 121.0);
    }

    #[test]
    fn dominated_points_leave_hypervolume_unchanged(pts in prop::collection::vec(point(), 1..10), pick in any::<prop::sample::Index>(), shift in (0.0..3.0f64, 0.0..3.0f64)) {
        let r = [11.0, 11.0];
        let base = pts[pick.index(pts.len())];
        let mut more = pts.clone();
        more.push([base[0] + shift.0, base[1] + shift.1]);
        prop_assert_eq!(hypervolume_2d(&more, r), hypervolume_2d(&pts, r));
    }

    #[test]
    fn factorize_respects_grid_invariants(n in 4usize..5000, d in 2usize..8) {
        let (nr, ns, n0) = factorize(n, d, None).unwrap();
        prop_assert_eq!(nr * ns + n0, n);
        prop_assert!(nr >= 1 && ns >= 1);
        prop_assert!(n0 < nr.min(ns));
    }

    #[test]
    fn grid_sphere_counts_and_norms(nr in 1usize..7, ns in 1usize..7, n0_raw in 0usize..7, d in 2usize..5, seed in any::<u64>()) {
        let n0 = n0_raw % nr.min(ns);
        let grid = AugmentedGrid::build(GridSpec::from_counts(d, nr, ns, n0, seed).unwrap()).unwrap();
        let again = AugmentedGrid::build(GridSpec::from_counts(d, nr, ns, n0, seed).unwrap()).unwrap();
        prop_assert_eq!(grid.len(), nr * ns + n0);
        let mut per_level = vec![0usize; nr + 1];
        for (g, p) in grid.points().enumerate() {
            let (k, _) = grid.level_of(g);
            per_level[k] += 1;
            let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!((norm - k as f64 / (nr + 1) as f64).abs() < 1e-12);
            prop_assert_eq!(p, again.point(g));
        }
        prop_assert_eq!(per_level[0], n0);
        prop_assert!(per_level[1..].iter().all(|&c| c == ns));
    }

    #[test]
    fn co_map_is_translation_equivariant(pts in cloud(13, 2), c in prop::collection::vec(-100.0..100.0f64, 2)) {
        let grid = Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, 3, 4, 1, 7).unwrap()).unwrap());
        let set = SampleSet::new("y", Orientation::Maximize, pts).unwrap();
        let a = co_map(&set, &grid).unwrap();
        let b = co_map(&set.translated(&c), &grid).unwrap();
        prop_assert_eq!(a.assignment(), b.assignment());
        prop_assert_eq!(a.ranks(), b.ranks());
    }

    #[test]
    fn co_map_ignores_sample_order(pts in cloud(12, 2), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let grid = Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, 3, 4, 0, 1).unwrap()).unwrap());
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.shuffle(&mut stream(seed, &[]));
        let shuffled: Vec<Vec<f64>> = order.iter().map(|&i| pts[i].clone()).collect();
        let a = co_map(&SampleSet::new("a", Orientation::Maximize, pts).unwrap(), &grid).unwrap();
        let b = co_map(&SampleSet::new("b", Orientation::Maximize, shuffled).unwrap(), &grid).unwrap();
        for (new, &old) in order.iter().enumerate() {
            prop_assert_eq!(b.forward(new), a.forward(old));
        }
    }

    #[test]
    fn dominance_is_downward_closed(x in cloud(16, 2), y in cloud(16, 2), shift in 0.0..4.0f64) {
        let grid = Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, 4, 4, 0, 0).unwrap()).unwrap());
        let x: Vec<Vec<f64>> = x.into_iter().map(|p| p.into_iter().map(|v| 0.3 * v + shift).collect()).collect();
        let x = co_map(&SampleSet::new("x", Orientation::Maximize, x).unwrap(), &grid).unwrap();
        let y = co_map(&SampleSet::new("y", Orientation::Maximize, y).unwrap(), &grid).unwrap();
        let holds: Vec<bool> = (0..=4).map(|l| dominates_at(&x, &y, l).unwrap()).collect();
        for l in 1..holds.len() {
            prop_assert!(!holds[l] || holds[l - 1]);
        }
    }

    #[test]
    fn q_sort_partitions_candidates(t in tensor(), ties in any::<bool>()) {
        let out = q_sort(&t, ties);
        let mut seen: Vec<usize> = out.order();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..t.candidates()).collect::<Vec<_>>());
        prop_assert!(out.fronts.len() <= t.candidates() * (t.nr() + 1));
        for front in &out.fronts {
            prop_assert!(!front.is_empty());
            prop_assert!(front.windows(2).all(|w| out.scores[w[0]] <= out.scores[w[1]]));
        }
    }

    #[test]
    fn q_sort_fronts_follow_relabelling(t in tensor(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let m = t.candidates();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut stream(seed, &[]));
        let a = q_sort(&t, false);
        let b = q_sort(&t.permuted(&perm), false);
        let relabel = |front: &Vec<usize>| {
            let mut f: Vec<usize> = front.iter().map(|&j| perm[j]).collect();
            f.sort_unstable();
            f
        };
        let sorted = |front: &Vec<usize>| {
            let mut f = front.clone();
            f.sort_unstable();
            f
        };
        prop_assert_eq!(b.fronts.iter().map(relabel).collect::<Vec<_>>(), a.fronts.iter().map(sorted).collect::<Vec<_>>());
    }

    #[test]
    fn samples_csv_round_trip(pts in prop::collection::vec(prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 3), 4..12)) {
        let set = SampleSet::new("s", Orientation::Minimize, pts).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&set, &mut buf).unwrap();
        let back = read_samples_csv(buf.as_slice(), "s", Orientation::Minimize).unwrap();
        for (p, q) in back.points.iter().flatten().zip(set.points.iter().flatten()) {
            prop_assert_eq!(p.to_bits(), q.to_bits());
        }
    }

    #[test]
    fn noisy_evaluations_stay_finite(seed in any::<u64>(), x1 in 0.0..1.0f64, variant in prop::sample::select(ZdtVariant::ALL.to_vec())) {
        let spec = ZdtSpec::standard(variant);
        let mut x = spec.optimum(x1);
        x[0] = x1;
        let f = spec.evaluate_noisy(&x, 0.1, &mut stream(seed, &[])).unwrap();
        prop_assert!(f.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn non_dominated_sort_matches_peeling(objs in prop::collection::vec(prop::collection::vec(0u8..6, 2), 1..14)) {
        let objs: Vec<Vec<f64>> = objs.into_iter().map(|p| p.into_iter().map(f64::from).collect()).collect();
        let mut left: Vec<usize> = (0..objs.len()).collect();
        let mut expected = Vec::new();
        while !left.is_empty() {
            let front: Vec<usize> = left
                .iter()
                .copied()
                .filter(|&j| !left.iter().any(|&i| pareto_dominates(&objs[i], &objs[j])))
                .collect();
            left.retain(|j| !front.contains(j));
            expected.push(front);
        }
        prop_assert_eq!(fast_non_dominated_sort(&objs), expected);
    }
}
