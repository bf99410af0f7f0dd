//! Empirical center-outward q-dominance, the pairwise dominance tensor and
//! the front sorting built on it.
//!
//! All comparisons are made on samples in maximization orientation with a
//! non-strict componentwise `>=` and no tolerance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transport::EmpiricalCOMap;

#[inline]
fn weakly_dominates(x: &[f64], y: &[f64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a >= b)
}

fn check_shared_grid(x: &EmpiricalCOMap, y: &EmpiricalCOMap) -> Result<()> {
    if x.grid().same_frame(y.grid()) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Converts a quantile `q` on the lattice `{0, 1/(nR+1), …, nR/(nR+1)}` to
/// its level `j`.
pub fn level_from_quantile(q: f64, nr: usize) -> Result<usize> {
    let scaled = q * (nr + 1) as f64;
    let level = scaled.round();
    if !(0.0..=nr as f64).contains(&level) || (scaled - level).abs() > 1e-9 {
        return Err(Error::invalid(format!("q={q} is not on the empirical quantile lattice for nR={nr}")));
    }
    Ok(level as usize)
}

/// Comparison at the origin level.
///
/// No origin copies: vacuous. One copy: the two matched samples are compared.
/// Several copies: every origin sample of `x` must dominate every origin
/// sample of `y`.
fn origin_dominates(x: &EmpiricalCOMap, y: &EmpiricalCOMap) -> bool {
    x.origin_quantiles().all(|a| y.origin_quantiles().all(|b| weakly_dominates(a, b)))
}

fn sphere_dominates(x: &EmpiricalCOMap, y: &EmpiricalCOMap, k: usize) -> bool {
    (0..x.grid().spec().ns).all(|s| weakly_dominates(x.quantile_at(k, s), y.quantile_at(k, s)))
}

/// Whether `x` q-dominates `y` at lattice level `level` (q = level/(nR+1)):
/// the quantiles of `x` weakly dominate those of `y` at the origin and at
/// every grid point on spheres `1..=level`.
pub fn dominates_at(x: &EmpiricalCOMap, y: &EmpiricalCOMap, level: usize) -> Result<bool> {
    check_shared_grid(x, y)?;
    let nr = x.grid().spec().nr;
    if level > nr {
        return Err(Error::invalid(format!("quantile level {level} exceeds nR={nr}")));
    }
    Ok(origin_dominates(x, y) && (1..=level).all(|k| sphere_dominates(x, y, k)))
}

/// [`dominates_at`] taking the quantile itself.
pub fn dominates_at_quantile(x: &EmpiricalCOMap, y: &EmpiricalCOMap, q: f64) -> Result<bool> {
    dominates_at(x, y, level_from_quantile(q, x.grid().spec().nr)?)
}

/// Largest level at which `x` q-dominates `y`, or `-1` when the first
/// informative level already fails.
///
/// With origin copies the first informative level is 0. Without them level
/// 0 holds vacuously and is not counted, so the scan starts at level 1.
pub fn max_dominated_quantile(x: &EmpiricalCOMap, y: &EmpiricalCOMap) -> Result<i64> {
    check_shared_grid(x, y)?;
    let spec = x.grid().spec();
    if !origin_dominates(x, y) {
        return Ok(-1);
    }
    let mut best: i64 = if spec.n0 > 0 { 0 } else { -1 };
    for k in 1..=spec.nr {
        if !sphere_dominates(x, y, k) {
            break;
        }
        best = k as i64;
    }
    Ok(best)
}

/// Fraction of grid-matched pairs `(x_i, y_i)` (both matched to the same grid
/// point) with `x_i >= y_i` componentwise.
pub fn coupled_fraction(x: &EmpiricalCOMap, y: &EmpiricalCOMap) -> Result<f64> {
    check_shared_grid(x, y)?;
    let n = x.len();
    let hits = (0..n).filter(|&g| weakly_dominates(x.quantile(g), y.quantile(g))).count();
    Ok(hits as f64 / n as f64)
}

/// `D[k][i][j]`: share of directions on sphere `k` where candidate `i`'s
/// quantile weakly dominates candidate `j`'s. Stored as integer counts out
/// of `nS` so that the test `D == 1` is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceTensor {
    nr: usize,
    ns: usize,
    m: usize,
    counts: Vec<u32>,
}

impl DominanceTensor {
    /// Tensor from raw counts laid out `[k-1][i][j]`; the diagonal is zeroed.
    pub fn from_counts(nr: usize, ns: usize, m: usize, mut counts: Vec<u32>) -> Result<Self> {
        if counts.len() != nr * m * m {
            return Err(Error::invalid(format!(
                "expected {} tensor entries, got {}",
                nr * m * m,
                counts.len()
            )));
        }
        if counts.iter().any(|&c| c as usize > ns) {
            return Err(Error::invalid(format!("tensor counts must not exceed nS={ns}")));
        }
        for k in 0..nr {
            for i in 0..m {
                counts[(k * m + i) * m + i] = 0;
            }
        }
        Ok(DominanceTensor { nr, ns, m, counts })
    }

    /// Builds the tensor for maps that all live on one grid.
    pub fn from_maps(maps: &[EmpiricalCOMap]) -> Result<Self> {
        let Some(first) = maps.first() else {
            return Err(Error::invalid("need at least one candidate"));
        };
        for map in &maps[1..] {
            check_shared_grid(first, map)?;
        }
        let spec = first.grid().spec();
        let (nr, ns, m) = (spec.nr, spec.ns, maps.len());
        let counts: Vec<u32> = (0..nr * m * m)
            .into_par_iter()
            .map(|cell| {
                let k = cell / (m * m) + 1;
                let (i, j) = ((cell / m) % m, cell % m);
                if i == j {
                    return 0;
                }
                (0..ns)
                    .filter(|&s| weakly_dominates(maps[i].quantile_at(k, s), maps[j].quantile_at(k, s)))
                    .count() as u32
            })
            .collect();
        Ok(DominanceTensor { nr, ns, m, counts })
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn ns(&self) -> usize {
        self.ns
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    /// Direction count behind `D[k][i][j]`, `k` 1-based.
    #[inline]
    pub fn count(&self, k: usize, i: usize, j: usize) -> u32 {
        self.counts[((k - 1) * self.m + i) * self.m + j]
    }

    /// `D[k][i][j]` as a fraction in `[0, 1]`, `k` 1-based.
    pub fn value(&self, k: usize, i: usize, j: usize) -> f64 {
        self.count(k, i, j) as f64 / self.ns as f64
    }

    #[inline]
    fn is_full(&self, k: usize, i: usize, j: usize) -> bool {
        self.count(k, i, j) as usize == self.ns
    }

    /// Same tensor with candidates relabelled: new index `a` is old `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let m = self.m;
        let mut counts = vec![0; self.counts.len()];
        for k in 1..=self.nr {
            for a in 0..m {
                for b in 0..m {
                    counts[((k - 1) * m + a) * m + b] = self.count(k, perm[a], perm[b]);
                }
            }
        }
        DominanceTensor { nr: self.nr, ns: self.ns, m, counts }
    }
}

/// Output of [`q_sort`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontOrdering {
    /// Non-empty fronts, best first, each listed in within-front order.
    pub fronts: Vec<Vec<usize>>,
    /// Value of `c` in the sweep at which each front was formed.
    pub levels: Vec<usize>,
    /// Per candidate: sum of `D[k][i][j]` over the spheres and pool used
    /// when its front was formed. Lower means further from being dominated.
    pub scores: Vec<f64>,
    pub ties_allowed: bool,
}

impl FrontOrdering {
    /// Front index (0-based) of every candidate.
    pub fn front_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.scores.len()];
        for (f, front) in self.fronts.iter().enumerate() {
            for &j in front {
                out[j] = f;
            }
        }
        out
    }

    /// Candidates in final order.
    pub fn order(&self) -> Vec<usize> {
        self.fronts.iter().flatten().copied().collect()
    }

    /// 1-based position of every candidate. When ties are allowed,
    /// candidates of one front with equal scores share the mean of their
    /// positions.
    pub fn positions(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.scores.len()];
        let mut next = 1usize;
        for front in &self.fronts {
            let mut start = 0;
            while start < front.len() {
                let mut end = start + 1;
                if self.ties_allowed {
                    while end < front.len() && self.scores[front[end]] == self.scores[front[start]] {
                        end += 1;
                    }
                }
                let shared = (next + start + next + end - 1) as f64 / 2.0;
                for &j in &front[start..end] {
                    out[j] = shared;
                }
                start = end;
            }
            next += front.len();
        }
        out
    }
}

/// Sorts candidates into fronts with the q-dominance sweep.
///
/// A counter `c` runs over `0..=nR`. At each step the unassigned candidates
/// that no pool member fully dominates (`D == 1`) on any sphere
/// `k <= nR - c` form the next front, ordered by increasing
/// `Σ_{k <= nR-c} Σ_{i in pool} D[k][i][j]` (ties by index). When `c`
/// reaches `nR` it wraps to 0 and the pool drops the candidates that were
/// already fronted before this step. The pool starts as all candidates and
/// therefore still contains fronted ones until the wrap. Steps that select
/// nobody produce no front.
pub fn q_sort(tensor: &DominanceTensor, ties: bool) -> FrontOrdering {
    let (nr, m) = (tensor.nr, tensor.m);
    let mut pool: Vec<usize> = (0..m).collect();
    let mut assigned = vec![false; m];
    let mut remaining = m;
    let mut fronts = Vec::new();
    let mut levels = Vec::new();
    let mut scores = vec![0.0; m];
    let mut c = 0usize;

    while remaining > 0 {
        let depth = nr - c;
        let mut front: Vec<(u64, usize)> = pool
            .iter()
            .copied()
            .filter(|&j| !assigned[j])
            .filter(|&j| (1..=depth).all(|k| pool.iter().all(|&i| !tensor.is_full(k, i, j))))
            .map(|j| {
                let sum: u64 = (1..=depth)
                    .flat_map(|k| pool.iter().map(move |&i| tensor.count(k, i, j) as u64))
                    .sum();
                (sum, j)
            })
            .collect();
        front.sort_unstable();

        let fronted_before: Vec<bool> = assigned.clone();
        if !front.is_empty() {
            for &(sum, j) in &front {
                assigned[j] = true;
                scores[j] = sum as f64 / tensor.ns as f64;
            }
            remaining -= front.len();
            fronts.push(front.into_iter().map(|(_, j)| j).collect());
            levels.push(c);
        }

        if c == nr {
            c = 0;
            pool.retain(|&j| !fronted_before[j]);
        } else {
            c += 1;
        }
    }

    FrontOrdering { fronts, levels, scores, ties_allowed: ties }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AugmentedGrid, GridSpec};
    use crate::transport::{co_map, Orientation, SampleSet};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};
    use std::sync::Arc;

    fn grid(nr: usize, ns: usize, n0: usize) -> Arc<AugmentedGrid> {
        Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, nr, ns, n0, 0).unwrap()).unwrap())
    }

    fn gaussian(n: usize, seed: u64) -> SampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..n).map(|_| (0..2).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
        SampleSet::new(format!("g{seed}"), Orientation::Maximize, pts).unwrap()
    }

    #[test]
    fn shifted_pair_dominates_everywhere() {
        let g = grid(8, 8, 0);
        let y = gaussian(64, 1);
        let my = co_map(&y, &g).unwrap();
        let mx = co_map(&y.translated(&[1.0, 1.0]), &g).unwrap();
        for level in 0..=8 {
            assert!(dominates_at(&mx, &my, level).unwrap());
            assert!(dominates_at(&my, &my, level).unwrap());
        }
        assert_eq!(max_dominated_quantile(&mx, &my).unwrap(), 8);
        assert_eq!(max_dominated_quantile(&my, &mx).unwrap(), -1);
        assert!(dominates_at_quantile(&mx, &my, 4.0 / 9.0).unwrap());
        assert!(dominates_at_quantile(&mx, &my, 0.3).is_err());
        assert!(dominates_at(&mx, &my, 9).is_err());

        let t = DominanceTensor::from_maps(&[mx, my]).unwrap();
        for k in 1..=8 {
            assert_eq!(t.value(k, 0, 1), 1.0);
            assert_eq!(t.value(k, 1, 0), 0.0);
        }
        let order = q_sort(&t, false);
        assert_eq!(order.fronts, vec![vec![0], vec![1]]);
        assert_eq!(order.positions(), vec![1.0, 2.0]);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a = co_map(&gaussian(12, 1), &grid(3, 4, 0)).unwrap();
        let other = Arc::new(AugmentedGrid::build(GridSpec::from_counts(2, 4, 3, 0, 0).unwrap()).unwrap());
        let b = co_map(&gaussian(12, 2), &other).unwrap();
        assert!(matches!(dominates_at(&a, &b, 1), Err(Error::GridMismatch)));
        assert!(matches!(max_dominated_quantile(&a, &b), Err(Error::GridMismatch)));
        assert!(matches!(DominanceTensor::from_maps(&[a, b]), Err(Error::GridMismatch)));
        // separately built but identical grids count as shared
        let c = co_map(&gaussian(12, 3), &grid(3, 4, 0)).unwrap();
        let d = co_map(&gaussian(12, 4), &grid(3, 4, 0)).unwrap();
        assert!(dominates_at(&c, &d, 1).is_ok());
    }

    #[test]
    fn origin_levels() {
        let g = grid(3, 4, 2);
        let y = gaussian(14, 9);
        let my = co_map(&y, &g).unwrap();
        let mx = co_map(&y.translated(&[0.5, 0.5]), &g).unwrap();
        assert!(dominates_at(&mx, &my, 0).unwrap());
        assert!(!dominates_at(&my, &mx, 0).unwrap());
        assert_eq!(max_dominated_quantile(&my, &mx).unwrap(), -1);
        assert_eq!(max_dominated_quantile(&mx, &my).unwrap(), 3);
    }

    #[test]
    fn single_candidate_tensor_and_sort() {
        let g = grid(3, 4, 0);
        let m = co_map(&gaussian(12, 4), &g).unwrap();
        let t = DominanceTensor::from_maps(std::slice::from_ref(&m)).unwrap();
        assert!((1..=3).all(|k| t.count(k, 0, 0) == 0));
        let order = q_sort(&t, true);
        assert_eq!(order.fronts, vec![vec![0]]);
        assert_eq!(order.positions(), vec![1.0]);
    }

    #[test]
    fn identical_maps_fully_dominate_each_other() {
        let g = grid(3, 4, 0);
        let m = co_map(&gaussian(12, 4), &g).unwrap();
        let t = DominanceTensor::from_maps(&[m.clone(), m]).unwrap();
        for k in 1..=3 {
            assert_eq!(t.value(k, 0, 1), 1.0);
            assert_eq!(t.value(k, 1, 0), 1.0);
        }
        // both stay dominated until the vacuous step, then tie
        let order = q_sort(&t, true);
        assert_eq!(order.fronts, vec![vec![0, 1]]);
        assert_eq!(order.levels, vec![3]);
        assert_eq!(order.positions(), vec![1.5, 1.5]);
        assert_eq!(q_sort(&t, false).positions(), vec![1.0, 2.0]);
    }

    #[test]
    fn tensor_counts_validation() {
        assert!(DominanceTensor::from_counts(1, 2, 2, vec![0, 1, 3, 0]).is_err());
        assert!(DominanceTensor::from_counts(1, 2, 2, vec![0, 1, 2]).is_err());
        let t = DominanceTensor::from_counts(1, 2, 2, vec![2, 1, 2, 2]).unwrap();
        assert_eq!(t.count(1, 0, 0), 0);
        assert_eq!(t.count(1, 1, 1), 0);
    }

    #[test]
    fn level_lattice() {
        assert_eq!(level_from_quantile(0.0, 8).unwrap(), 0);
        assert_eq!(level_from_quantile(8.0 / 9.0, 8).unwrap(), 8);
        assert!(level_from_quantile(1.0, 8).is_err());
        assert!(level_from_quantile(0.5, 8).is_err());
    }
}
