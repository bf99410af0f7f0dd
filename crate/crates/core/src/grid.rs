//! The augmented grid on the closed unit ball.
//!
//! `nR` concentric spheres with radii `k / (nR + 1)`, `k = 1..=nR`, each
//! carrying the same `nS` unit directions, plus `n0` copies of the origin.
//! Every empirical center-outward map in this crate is a bijection between a
//! sample and the points of one of these grids, and two maps can only be
//! compared when they share the same grid.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pairwise dot products of generated directions must stay below this.
const MAX_DIRECTION_DOT: f64 = 1.0 - 1e-9;

/// Open interval of admissible radial exponents for dimension `d`.
pub fn theta_interval(d: usize) -> (f64, f64) {
    let d = d as f64;
    if d <= 4.0 {
        (1.0 / (2.0 * d), (d + 1.0) / (2.0 * d))
    } else {
        ((d - 2.0) / (d * d), (2.0 * d - 3.0) / (d * d))
    }
}

/// Midpoint of [`theta_interval`].
pub fn default_theta(d: usize) -> f64 {
    let (lo, hi) = theta_interval(d);
    0.5 * (lo + hi)
}

pub fn theta_is_admissible(d: usize, theta: f64) -> bool {
    let (lo, hi) = theta_interval(d);
    theta > lo && theta < hi
}

/// How the radial count is chosen from the sample size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialPolicy {
    /// `nR ≈ n^theta`; `None` uses [`default_theta`].
    TheoremTheta(Option<f64>),
    /// `nR ≈ n^(1/d)`, the rule used for ranking pooled optimizer outputs.
    RootD,
    /// Explicit counts; `n0` is whatever remains.
    Fixed { nr: usize, ns: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub d: usize,
    pub nr: usize,
    pub ns: usize,
    pub n0: usize,
    /// Radial exponent the counts were derived from, when there was one.
    pub theta: Option<f64>,
    pub seed: u64,
}

impl GridSpec {
    /// Spec from explicit counts; `n = nr * ns + n0`.
    pub fn from_counts(d: usize, nr: usize, ns: usize, n0: usize, seed: u64) -> Result<Self> {
        let spec = GridSpec { n: nr * ns + n0, d, nr, ns, n0, theta: None, seed };
        spec.validate()?;
        Ok(spec)
    }

    /// Spec for `n` points with `nR ≈ n^theta` (see [`factorize`]).
    pub fn with_theta(n: usize, d: usize, theta: Option<f64>, seed: u64) -> Result<Self> {
        let theta = theta.unwrap_or_else(|| default_theta(d));
        let (nr, ns, n0) = factorize(n, d, Some(theta))?;
        Ok(GridSpec { n, d, nr, ns, n0, theta: Some(theta), seed })
    }

    pub fn from_policy(n: usize, d: usize, policy: RadialPolicy, seed: u64) -> Result<Self> {
        match policy {
            RadialPolicy::TheoremTheta(theta) => Self::with_theta(n, d, theta, seed),
            RadialPolicy::RootD => {
                let theta = 1.0 / d as f64;
                let (nr, ns, n0) = factorize(n, d, Some(theta))?;
                Ok(GridSpec { n, d, nr, ns, n0, theta: Some(theta), seed })
            }
            RadialPolicy::Fixed { nr, ns } => {
                if nr == 0 || ns == 0 || nr * ns > n {
                    return Err(Error::invalid(format!(
                        "cannot place nR={nr} x nS={ns} grid points in a sample of {n}"
                    )));
                }
                Self::from_counts(d, nr, ns, n - nr * ns, seed)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::invalid(format!("grid dimension must be >= 2, got {}", self.d)));
        }
        if self.nr == 0 || self.ns == 0 {
            return Err(Error::invalid("nR and nS must be positive"));
        }
        if self.n != self.nr * self.ns + self.n0 {
            return Err(Error::invalid(format!(
                "n={} differs from nR*nS+n0={}",
                self.n,
                self.nr * self.ns + self.n0
            )));
        }
        if self.n0 >= self.nr.min(self.ns) {
            return Err(Error::invalid(format!(
                "n0={} must be below min(nR, nS)={}",
                self.n0,
                self.nr.min(self.ns)
            )));
        }
        Ok(())
    }

    /// Radius of the `k`-th sphere.
    pub fn radius(&self, k: usize) -> f64 {
        k as f64 / (self.nr + 1) as f64
    }
}

/// Splits `n = nR * nS + n0` with `nR` close to `n^theta`.
///
/// Candidates within ten percent of `round(n^theta)` are scanned nearest
/// first for an exact factorization. Failing that, `nR` starts at the target
/// and is lowered until `n0 < min(nR, nS)`.
pub fn factorize(n: usize, d: usize, theta: Option<f64>) -> Result<(usize, usize, usize)> {
    if n < 4 {
        return Err(Error::invalid(format!("need at least 4 points, got {n}")));
    }
    if d < 2 {
        return Err(Error::invalid(format!("grid dimension must be >= 2, got {d}")));
    }
    let theta = theta.unwrap_or_else(|| default_theta(d));
    if !theta_is_admissible(d, theta) {
        let (lo, hi) = theta_interval(d);
        return Err(Error::invalid(format!(
            "theta={theta} outside the admissible interval ({lo}, {hi}) for d={d}"
        )));
    }
    let target = ((n as f64).powf(theta).round() as usize).clamp(1, n);
    let window = ((target as f64 * 0.1).ceil() as usize).max(1);

    let valid = |nr: usize| {
        let ns = n / nr;
        let n0 = n - nr * ns;
        (ns >= 1 && n0 < nr.min(ns)).then_some((nr, ns, n0))
    };

    for offset in 0..=window {
        let mut candidates = vec![target.checked_sub(offset)];
        if offset > 0 {
            candidates.push(Some(target + offset));
        }
        for nr in candidates.into_iter().flatten() {
            if nr >= 1 && nr <= n && n.is_multiple_of(nr) {
                if let Some(split) = valid(nr) {
                    return Ok(split);
                }
            }
        }
    }
    (1..=target)
        .rev()
        .find_map(valid)
        .ok_or_else(|| Error::invalid(format!("no valid factorization of n={n}")))
}

/// `ns` pairwise-distinct unit vectors in dimension `d`.
///
/// * `d = 2`: equally spaced angles `2πj/nS` starting at angle 0. For even
///   `nS` the second half is the exact negation of the first.
/// * `d = 3`: Fibonacci-sphere lattice (the seed is unused).
/// * `d >= 4`: normalized Gaussian draws from a ChaCha stream keyed by `seed`,
///   redrawing any vector too close to an earlier one.
pub fn unit_directions(ns: usize, d: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if ns == 0 || d < 2 {
        return Err(Error::invalid(format!("need nS >= 1 and d >= 2, got nS={ns}, d={d}")));
    }
    let dirs = match d {
        2 => circle_directions(ns),
        3 => fibonacci_sphere(ns),
        _ => random_sphere(ns, d, seed),
    };
    Ok(dirs)
}

fn circle_directions(ns: usize) -> Vec<Vec<f64>> {
    let step = std::f64::consts::TAU / ns as f64;
    let half = if ns.is_multiple_of(2) { ns / 2 } else { ns };
    let mut dirs: Vec<Vec<f64>> = (0..half)
        .map(|j| {
            let (s, c) = (step * j as f64).sin_cos();
            vec![c, s]
        })
        .collect();
    if half < ns {
        let opposite: Vec<Vec<f64>> = dirs.iter().map(|u| u.iter().map(|v| -v).collect()).collect();
        dirs.extend(opposite);
    }
    dirs
}

fn fibonacci_sphere(ns: usize) -> Vec<Vec<f64>> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..ns)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / ns as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let (s, c) = (golden_angle * i as f64).sin_cos();
            normalized(vec![r * c, r * s, z])
        })
        .collect()
}

fn random_sphere(ns: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return normalized(v);
        }
    };
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(ns);
    while dirs.len() < ns {
        let candidate = draw(&mut rng);
        if dirs.iter().all(|u| dot(u, &candidate) < MAX_DIRECTION_DOT) {
            dirs.push(candidate);
        }
    }
    dirs
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Immutable augmented grid. Points are ordered sphere-major: index
/// `(k - 1) * nS + s` holds `k / (nR + 1) * directions[s]`, and the `n0`
/// origin copies follow at the end.
#[derive(Clone, Debug)]
pub struct AugmentedGrid {
    spec: GridSpec,
    directions: Vec<Vec<f64>>,
    points: Vec<f64>,
}

impl AugmentedGrid {
    pub fn build(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let directions = unit_directions(spec.ns, spec.d, spec.seed)?;
        let mut points = Vec::with_capacity(spec.n * spec.d);
        for k in 1..=spec.nr {
            let radius = spec.radius(k);
            for u in &directions {
                points.extend(u.iter().map(|c| radius * c));
            }
        }
        points.resize(spec.n * spec.d, 0.0);
        Ok(AugmentedGrid { spec, directions, points })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.spec.n
    }

    pub fn is_empty(&self) -> bool {
        self.spec.n == 0
    }

    pub fn dim(&self) -> usize {
        self.spec.d
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.points[index * self.spec.d..(index + 1) * self.spec.d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + DoubleEndedIterator {
        self.points.chunks_exact(self.spec.d)
    }

    /// Grid index of the point on sphere `k` (1-based) in direction `s`.
    pub fn index_of(&self, k: usize, s: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.spec.nr && s < self.spec.ns);
        (k - 1) * self.spec.ns + s
    }

    /// Indices of the origin copies.
    pub fn origin_indices(&self) -> std::ops::Range<usize> {
        self.spec.nr * self.spec.ns..self.spec.n
    }

    /// Sphere index and direction of a grid point; `(0, None)` for the origin.
    pub fn level_of(&self, index: usize) -> (usize, Option<usize>) {
        if index >= self.spec.nr * self.spec.ns {
            (0, None)
        } else {
            (index / self.spec.ns + 1, Some(index % self.spec.ns))
        }
    }

    /// Same spec and bit-identical directions.
    pub fn same_frame(&self, other: &AugmentedGrid) -> bool {
        std::ptr::eq(self, other)
            || (self.spec == other.spec
                && self
                    .directions
                    .iter()
                    .flatten()
                    .zip(other.directions.iter().flatten())
                    .all(|(a, b)| a.to_bits() == b.to_bits()))
    }
}

impl PartialEq for AugmentedGrid {
    fn eq(&self, other: &Self) -> bool {
        self.same_frame(other)
    }
}
