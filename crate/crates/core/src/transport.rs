//! Empirical center-outward distribution and quantile maps.
//!
//! A sample of `n` points is matched to the `n` points of an augmented grid
//! by minimizing the total squared Euclidean distance. The matched grid point
//! of a sample is its image under the empirical distribution function; read
//! backwards, the matching is the empirical quantile function on the grid.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assignment::{self, CostMatrix};
use crate::error::{Error, Result};
use crate::grid::AugmentedGrid;

/// Relative tolerance when recovering an integer rank from a grid norm.
const RANK_TOLERANCE: f64 = 1e-9;

/// Which direction counts as better. Dominance is evaluated on maximized
/// coordinates, so minimization samples are negated on ingestion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Maximize,
    Minimize,
}

impl Orientation {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Maximize => 1.0,
            Orientation::Minimize => -1.0,
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" | "maximize" => Ok(Orientation::Maximize),
            "min" | "minimize" => Ok(Orientation::Minimize),
            other => Err(Error::invalid(format!("unknown orientation `{other}`"))),
        }
    }
}

/// A labelled sample of `d`-dimensional outcomes of one candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub label: String,
    #[serde(default)]
    pub orientation: Orientation,
    pub points: Vec<Vec<f64>>,
    /// Replication id of every point, when the sample pools several runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<Vec<u64>>,
}

impl SampleSet {
    pub fn new(label: impl Into<String>, orientation: Orientation, points: Vec<Vec<f64>>) -> Result<Self> {
        let set = SampleSet { label: label.into(), orientation, points, replications: None };
        set.validate()?;
        Ok(set)
    }

    pub fn with_replications(mut self, replications: Vec<u64>) -> Result<Self> {
        self.replications = Some(replications);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.points.first() else {
            return Err(Error::invalid(format!("sample `{}` is empty", self.label)));
        };
        let d = first.len();
        if d < 2 {
            return Err(Error::invalid(format!("sample `{}` has dimension {d}, need >= 2", self.label)));
        }
        for p in &self.points {
            if p.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.len() });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("sample `{}` has non-finite values", self.label)));
            }
        }
        if let Some(reps) = &self.replications {
            if reps.len() != self.points.len() {
                return Err(Error::invalid(format!(
                    "sample `{}` has {} replication ids for {} points",
                    self.label,
                    reps.len(),
                    self.points.len()
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// Copy shifted by `c`.
    pub fn translated(&self, c: &[f64]) -> SampleSet {
        let mut out = self.clone();
        for p in &mut out.points {
            p.iter_mut().zip(c).for_each(|(x, dx)| *x += dx);
        }
        out
    }
}

/// Optimal matching of flat sample points to grid points; `result[i]` is the
/// grid index paired with sample `i`.
pub fn solve_assignment(samples: &[f64], dim: usize, grid: &AugmentedGrid) -> Result<Vec<usize>> {
    let cost = assignment_cost(samples, dim, grid)?;
    Ok(assignment::solve(&cost))
}

/// Squared-distance cost matrix between samples (rows) and grid points.
pub fn assignment_cost(samples: &[f64], dim: usize, grid: &AugmentedGrid) -> Result<CostMatrix> {
    if dim != grid.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), found: dim });
    }
    if samples.len() != grid.len() * dim {
        return Err(Error::SizeMismatch { samples: samples.len() / dim.max(1), grid: grid.len() });
    }
    let grid_points: Vec<f64> = grid.points().flatten().copied().collect();
    CostMatrix::squared_euclidean(samples, &grid_points, dim)
}

/// Empirical center-outward map of one sample on a shared grid.
#[derive(Clone, Debug)]
pub struct EmpiricalCOMap {
    grid: Arc<AugmentedGrid>,
    label: String,
    orientation: Orientation,
    /// Samples in maximization orientation, flat row-major.
    oriented: Vec<f64>,
    forward: Vec<usize>,
    inverse: Vec<usize>,
    ranks: Vec<usize>,
}

impl EmpiricalCOMap {
    /// Builds the map of `samples` on `grid`.
    ///
    /// Costs are computed on mean-centered samples. Centering adds only row
    /// and column constants to the squared distances, so the optimal
    /// matching is unchanged, and translated inputs produce the same costs.
    pub fn new(samples: &SampleSet, grid: &Arc<AugmentedGrid>) -> Result<Self> {
        samples.validate()?;
        let d = samples.dim();
        if d != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), found: d });
        }
        if samples.len() != grid.len() {
            return Err(Error::SizeMismatch { samples: samples.len(), grid: grid.len() });
        }
        let sign = samples.orientation.sign();
        let oriented: Vec<f64> = samples.points.iter().flatten().map(|v| sign * v).collect();

        let n = samples.len();
        let mut mean = vec![0.0; d];
        for p in oriented.chunks_exact(d) {
            mean.iter_mut().zip(p).for_each(|(m, v)| *m += v);
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let centered: Vec<f64> =
            oriented.chunks_exact(d).flat_map(|p| p.iter().zip(&mean).map(|(v, m)| v - m)).collect();

        let forward = solve_assignment(&centered, d, grid)?;
        let mut inverse = vec![0usize; n];
        for (i, &g) in forward.iter().enumerate() {
            inverse[g] = i;
        }
        let nr1 = (grid.spec().nr + 1) as f64;
        let ranks = forward
            .iter()
            .map(|&g| {
                let norm = grid.point(g).iter().map(|x| x * x).sum::<f64>().sqrt();
                let raw = nr1 * norm;
                let rank = raw.round();
                debug_assert!((raw - rank).abs() <= RANK_TOLERANCE * nr1);
                debug_assert_eq!(rank as usize, grid.level_of(g).0);
                rank as usize
            })
            .collect();

        Ok(EmpiricalCOMap {
            grid: Arc::clone(grid),
            label: samples.label.clone(),
            orientation: samples.orientation,
            oriented,
            forward,
            inverse,
            ranks,
        })
    }

    pub fn grid(&self) -> &Arc<AugmentedGrid> {
        &self.grid
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// Sample `i` in maximization orientation.
    pub fn oriented_sample(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.oriented[i * d..(i + 1) * d]
    }

    /// Sample `i` as it was supplied.
    pub fn sample(&self, i: usize) -> Vec<f64> {
        let sign = self.orientation.sign();
        self.oriented_sample(i).iter().map(|v| sign * v).collect()
    }

    /// Grid index paired with sample `i` (the empirical distribution function).
    pub fn forward(&self, i: usize) -> usize {
        self.forward[i]
    }

    /// The whole sample → grid permutation.
    pub fn assignment(&self) -> &[usize] {
        &self.forward
    }

    /// Sample index paired with grid point `g`.
    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// Empirical quantile at grid point `g`, in maximization orientation.
    pub fn quantile(&self, g: usize) -> &[f64] {
        self.oriented_sample(self.inverse[g])
    }

    /// Empirical quantile on sphere `k` (1-based) in direction `s`.
    pub fn quantile_at(&self, k: usize, s: usize) -> &[f64] {
        self.quantile(self.grid.index_of(k, s))
    }

    /// Samples matched to the origin copies.
    pub fn origin_quantiles(&self) -> impl Iterator<Item = &[f64]> {
        self.grid.origin_indices().map(move |g| self.quantile(g))
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Unit direction of the matched grid point; zero for origin copies.
    pub fn sign(&self, i: usize) -> Vec<f64> {
        match self.grid.level_of(self.forward[i]) {
            (_, Some(s)) => self.grid.directions()[s].clone(),
            (_, None) => vec![0.0; self.dim()],
        }
    }

    /// Total squared distance of the matching, in maximization orientation.
    pub fn transport_cost(&self) -> f64 {
        self.forward
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                self.oriented_sample(i).iter().zip(self.grid.point(g)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
            })
            .sum()
    }

    fn check_level(&self, level: usize) -> Result<()> {
        let nr = self.grid.spec().nr;
        if level > nr {
            return Err(Error::invalid(format!("quantile level {level} exceeds nR={nr}")));
        }
        Ok(())
    }

    /// Samples of rank at most `level`.
    pub fn quantile_region(&self, level: usize) -> Result<QuantileRegion> {
        self.check_level(level)?;
        Ok(QuantileRegion {
            level,
            order: level as f64 / (self.grid.spec().nr + 1) as f64,
            members: (0..self.len()).filter(|&i| self.ranks[i] <= level).collect(),
        })
    }

    /// Samples of rank exactly `level`.
    pub fn quantile_contour(&self, level: usize) -> Result<Vec<usize>> {
        self.check_level(level)?;
        Ok((0..self.len()).filter(|&i| self.ranks[i] == level).collect())
    }
}

/// Convenience wrapper around [`EmpiricalCOMap::new`].
pub fn co_map(samples: &SampleSet, grid: &Arc<AugmentedGrid>) -> Result<EmpiricalCOMap> {
    EmpiricalCOMap::new(samples, grid)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantileRegion {
    pub level: usize,
    /// Probability content `level / (nR + 1)`.
    pub order: f64,
    /// Sample indices.
    pub members: Vec<usize>,
}
