use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use qdom::assignment::{solve, CostMatrix};
use qdom::commands::{cmd_rank, RankRequest};
use qdom::grid::RadialPolicy;
use qdom::io::write_samples_csv;
use qdom::rng::{stream, Stream};
use qdom::smoo::{survival_qdom, Individual};
use qdom::{co_map, AugmentedGrid, EmpiricalCOMap, GridSpec, Orientation, SampleSet};

fn gaussian(n: usize, d: usize, rng: &mut Stream) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| StandardNormal.sample(rng)).collect()).collect()
}

/// Every grid point is matched to itself after scaling all of them by 2.
#[test]
fn scaled_grid_matches_radially_by_brute_force() {
    let grid = AugmentedGrid::build(GridSpec::from_counts(2, 2, 3, 1, 0).unwrap()).unwrap();
    let rows: Vec<f64> = grid.points().flatten().map(|v| 2.0 * v).collect();
    let cols: Vec<f64> = grid.points().flatten().copied().collect();
    let cost = CostMatrix::squared_euclidean(&rows, &cols, 2).unwrap();
    let mut best = (f64::INFINITY, Vec::new());
    let mut perm: Vec<usize> = (0..7).collect();
    // Heap's algorithm
    let mut c = [0; 7];
    let mut consider = |p: &Vec<usize>| {
        let t = cost.total(p);
        if t < best.0 {
            best = (t, p.clone());
        }
    };
    consider(&perm);
    let mut i = 0;
    while i < 7 {
        if c[i] < i {
            perm.swap(if i % 2 == 0 { 0 } else { c[i] }, i);
            consider(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    assert_eq!(best.1, (0..7).collect::<Vec<_>>());
    assert_eq!(solve(&cost), best.1);
}

fn reference_fronts(d: &[Vec<Vec<f64>>], nr: usize, m: usize) -> Vec<Vec<usize>> {
    let mut pool: Vec<usize> = (0..m).collect();
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut c = 0;
    let done = |fronts: &Vec<Vec<usize>>, j: usize| fronts.iter().any(|f| f.contains(&j));
    while (0..m).any(|j| !done(&fronts, j)) {
        let score = |j: usize| -> f64 { (0..nr - c).map(|k| pool.iter().map(|&i| d[k][i][j]).sum::<f64>()).sum() };
        let mut front: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&j| !done(&fronts, j))
            .filter(|&j| (0..nr - c).all(|k| pool.iter().all(|&i| d[k][i][j] != 1.0)))
            .collect();
        front.sort_by(|&a, &b| score(a).total_cmp(&score(b)));
        if c == nr {
            c = 0;
            pool.retain(|&j| !done(&fronts, j));
        } else {
            c += 1;
        }
        fronts.push(front);
    }
    fronts
}

#[test]
fn qdom_survival_matches_reference_sort_and_truncation() {
    let grid = Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, 4, 4, 0, 0).unwrap()).unwrap());
    let mut rng = stream(11, &[]);
    for _ in 0..25 {
        let mut pool: Vec<Individual> = (0..6)
            .map(|_| {
                let centre = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
                let spread = rng.random_range(0.01..0.3);
                let samples = gaussian(16, 2, &mut rng)
                    .into_iter()
                    .map(|p| vec![centre[0] + spread * p[0], centre[1] + spread * p[1]])
                    .collect();
                Individual::new(vec![0.0], samples).unwrap()
            })
            .collect();
        // minimization: compare negated samples
        let maps: Vec<EmpiricalCOMap> = pool
            .iter()
            .map(|ind| co_map(&SampleSet::new("", Orientation::Minimize, ind.samples.clone()).unwrap(), &grid).unwrap())
            .collect();
        let d: Vec<Vec<Vec<f64>>> = (1..=4)
            .map(|k| {
                (0..6)
                    .map(|i| {
                        (0..6)
                            .map(|j| {
                                if i == j {
                                    return 0.0;
                                }
                                let hits = (0..4)
                                    .filter(|&s| {
                                        let (a, b) = (maps[i].quantile_at(k, s), maps[j].quantile_at(k, s));
                                        a.iter().zip(b).all(|(u, v)| u >= v)
                                    })
                                    .count();
                                hits as f64 / 4.0
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let expected: Vec<usize> = reference_fronts(&d, 4, 6).into_iter().flatten().take(3).collect();
        let got = survival_qdom(&mut pool, 3, &grid).unwrap();
        assert_eq!(got.indices, expected);
    }
}

#[test]
fn lone_best_individual_survives_qdom_selection() {
    let grid = Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, 4, 4, 0, 0).unwrap()).unwrap());
    let mut rng = stream(12, &[]);
    let base = gaussian(16, 2, &mut rng);
    let mut pool: Vec<Individual> = (0..8)
        .map(|i| {
            let offset = if i == 5 { -10.0 } else { rng.random_range(0.0..1.0) };
            let samples = base.iter().map(|p| vec![p[0] + offset, p[1] + offset]).collect();
            Individual::new(vec![i as f64], samples).unwrap()
        })
        .collect();
    let sel = survival_qdom(&mut pool, 2, &grid).unwrap();
    assert_eq!(sel.indices[0], 5);
    assert_eq!(sel.keys[0].0, 0);
}

fn write_set(dir: &Path, label: &str, points: Vec<Vec<f64>>, reps: Option<Vec<u64>>) -> std::path::PathBuf {
    let mut set = SampleSet::new(label, Orientation::Maximize, points).unwrap();
    if let Some(r) = reps {
        set = set.with_replications(r).unwrap();
    }
    let path = dir.join(format!("{label}.csv"));
    let mut buf = Vec::new();
    write_samples_csv(&set, &mut buf).unwrap();
    fs::write(&path, buf).unwrap();
    path
}

fn request(files: Vec<std::path::PathBuf>) -> RankRequest {
    RankRequest {
        files,
        k: None,
        reps: 1,
        policy: RadialPolicy::Fixed { nr: 8, ns: 8 },
        orientation: None,
        ties: false,
        seed: 0,
    }
}

#[test]
fn shifted_copy_ranks_first() {
    let dir = tempfile::tempdir().unwrap();
    let y = gaussian(64, 2, &mut stream(21, &[]));
    let x: Vec<Vec<f64>> = y.iter().map(|p| vec![p[0] + 0.5, p[1] + 1.0]).collect();
    let files = vec![write_set(dir.path(), "low", y, None), write_set(dir.path(), "high", x, None)];
    let report = cmd_rank(&request(files)).unwrap();
    assert_eq!(report.fronts[0], vec!["high".to_string()]);
    assert_eq!(report.mean_rank["high"], 1.0);
    assert_eq!(report.mean_rank["low"], 2.0);
    assert_eq!(report.rank_sd["high"], 0.0);
    assert_eq!(report.max_dominated_quantile["high>low"], 8);
    assert_eq!(report.max_dominated_quantile["low>high"], -1);
}

#[test]
fn single_candidate_ranks_first() {
    let dir = tempfile::tempdir().unwrap();
    let files = vec![write_set(dir.path(), "only", gaussian(64, 2, &mut stream(22, &[])), None)];
    let report = cmd_rank(&request(files)).unwrap();
    assert_eq!(report.fronts, vec![vec!["only".to_string()]]);
    assert_eq!(report.mean_rank["only"], 1.0);
}

#[test]
fn repeated_subsampling_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = stream(23, &[]);
    let reps: Vec<u64> = (0..80).map(|i| i / 10).collect();
    let files: Vec<_> = ["a", "b", "c"]
        .iter()
        .enumerate()
        .map(|(c, l)| {
            let pts = gaussian(80, 2, &mut rng).into_iter().map(|p| vec![p[0] + 0.2 * c as f64, p[1]]).collect();
            write_set(dir.path(), l, pts, Some(reps.clone()))
        })
        .collect();
    let req = RankRequest { k: Some(8), reps: 5, policy: RadialPolicy::RootD, ..request(files) };
    let a = cmd_rank(&req).unwrap();
    assert_eq!(a, cmd_rank(&req).unwrap());
    assert_eq!(a.grid.n, 64);
    let total: f64 = a.mean_rank.values().sum();
    assert!((total - 6.0).abs() < 1e-12);
}

#[test]
fn rank_rejects_mismatched_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = stream(24, &[]);
    let a = write_set(dir.path(), "a", gaussian(64, 2, &mut rng), None);
    let b = write_set(dir.path(), "b", gaussian(32, 2, &mut rng), None);
    let err = cmd_rank(&RankRequest { policy: RadialPolicy::RootD, ..request(vec![a.clone(), b]) }).unwrap_err();
    assert!(err.is_validation());
    let dup = cmd_rank(&request(vec![a.clone(), a.clone()])).unwrap_err();
    assert!(dup.is_validation());
    let no_reps = cmd_rank(&RankRequest { k: Some(4), ..request(vec![a]) }).unwrap_err();
    assert!(no_reps.is_validation());
}
