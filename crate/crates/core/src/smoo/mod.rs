//! NSGA-II style optimization of noisy objectives with a choice of
//! survival rule: q-dominance sorting, sample means, or one sample.

pub mod nsga;
pub mod operators;
mod optimizer;
mod survival;

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bench::{HvConfig, ZdtSpec};
use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::transport::EmpiricalCOMap;

pub use optimizer::{run, run_replications, Checkpoint, Optimizer, RunHistory};
pub use survival::{survival_mean, survival_qdom, survival_single, Selection};

/// An objective function observed through input noise.
pub trait NoisyProblem: Sync {
    fn name(&self) -> &str;
    fn bounds(&self) -> &[(f64, f64)];
    fn num_objectives(&self) -> usize;
    fn sigma(&self) -> f64;
    /// One noisy objective vector at `x`.
    fn evaluate(&self, x: &[f64], rng: &mut Stream) -> Result<Vec<f64>>;
    /// Hypervolume of the true Pareto front, when known.
    fn front_hypervolume(&self, _reference: [f64; 2]) -> Option<f64> {
        None
    }

    fn dim(&self) -> usize {
        self.bounds().len()
    }
}

/// A ZDT problem with truncated-normal input noise.
#[derive(Clone, Debug)]
pub struct NoisyZdt {
    spec: ZdtSpec,
    sigma: f64,
    bounds: Vec<(f64, f64)>,
    name: String,
}

impl NoisyZdt {
    pub fn new(spec: ZdtSpec, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!("sigma must be finite and >= 0, got {sigma}")));
        }
        Ok(NoisyZdt { spec, sigma, bounds: spec.all_bounds(), name: spec.variant.name().to_string() })
    }

    pub fn spec(&self) -> &ZdtSpec {
        &self.spec
    }
}

impl NoisyProblem for NoisyZdt {
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn sigma(&self) -> f64 {
        self.sigma
    }

    fn evaluate(&self, x: &[f64], rng: &mut Stream) -> Result<Vec<f64>> {
        Ok(self.spec.evaluate_noisy(x, self.sigma, rng)?.to_vec())
    }

    fn front_hypervolume(&self, reference: [f64; 2]) -> Option<f64> {
        Some(self.spec.front_hypervolume(reference))
    }
}

/// `n` independent noisy evaluations at `x`, one row each.
pub fn evaluate_batch<P: NoisyProblem + ?Sized>(
    problem: &P,
    x: &[f64],
    n: usize,
    rng: &mut Stream,
) -> Result<Vec<Vec<f64>>> {
    (0..n).map(|_| problem.evaluate(x, rng)).collect()
}

/// A decision vector with its cached objective samples.
#[derive(Clone, Debug)]
pub struct Individual {
    pub x: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub(crate) map: Option<Arc<EmpiricalCOMap>>,
}

impl Individual {
    pub fn new(x: Vec<f64>, samples: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::invalid("an individual needs at least one objective sample"));
        };
        if samples.iter().any(|r| r.len() != first.len()) {
            return Err(Error::invalid("objective samples have unequal lengths"));
        }
        // accumulate offsets from the first row so identical rows give an exact mean
        let n = samples.len() as f64;
        let mean = (0..first.len())
            .map(|j| first[j] + samples.iter().map(|r| r[j] - first[j]).sum::<f64>() / n)
            .collect();
        Ok(Individual { x, samples, mean, map: None })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    /// q-dominance sorting of the `n`-sample empirical distributions.
    Qdom,
    /// NSGA-II on sample means of `n` evaluations.
    Mean,
    /// NSGA-II on one evaluation per individual, run for `n` times as many
    /// generations.
    Single,
}

impl SelectionMode {
    pub const ALL: [SelectionMode; 3] = [SelectionMode::Qdom, SelectionMode::Mean, SelectionMode::Single];

    pub fn name(self) -> &'static str {
        match self {
            SelectionMode::Qdom => "qdom",
            SelectionMode::Mean => "mean",
            SelectionMode::Single => "single",
        }
    }
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qdom" => Ok(SelectionMode::Qdom),
            "mean" => Ok(SelectionMode::Mean),
            "single" => Ok(SelectionMode::Single),
            other => Err(Error::invalid(format!("unknown mode `{other}` (expected qdom, mean or single)"))),
        }
    }
}

impl std::fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub popsize: usize,
    /// Generations in qdom and mean mode; single mode runs `generations · n`.
    pub generations: usize,
    /// Samples per candidate.
    pub n: usize,
    pub nr: usize,
    pub ns: usize,
    pub mode: SelectionMode,
    pub eta_c: f64,
    pub p_c: f64,
    pub eta_m: f64,
    /// Per-variable mutation probability; `None` means `1/N`.
    pub p_m: Option<f64>,
    pub seed: u64,
    /// Re-mate when an offspring repeats a decision vector already in the
    /// population or among earlier offspring.
    pub eliminate_duplicates: bool,
    pub hv: HvConfig,
    /// Fresh evaluations per individual used to estimate the expected HV.
    pub hv_samples: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            popsize: 20,
            generations: 200,
            n: 64,
            nr: 8,
            ns: 8,
            mode: SelectionMode::Qdom,
            eta_c: 15.0,
            p_c: 0.9,
            eta_m: 20.0,
            p_m: None,
            seed: 0,
            eliminate_duplicates: true,
            hv: HvConfig::default(),
            hv_samples: 32,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.popsize < 2 || !self.popsize.is_multiple_of(2) {
            return Err(Error::invalid(format!("population size must be even and >= 2, got {}", self.popsize)));
        }
        if self.n == 0 {
            return Err(Error::invalid("samples per candidate must be >= 1"));
        }
        if self.mode == SelectionMode::Qdom && (self.nr == 0 || self.ns == 0 || self.nr * self.ns != self.n) {
            return Err(Error::invalid(format!(
                "qdom mode needs n = nR·nS, got n={} nR={} nS={}",
                self.n, self.nr, self.ns
            )));
        }
        if !(0.0..=1.0).contains(&self.p_c) || self.p_m.is_some_and(|p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::invalid("operator probabilities must lie in [0, 1]"));
        }
        if !(self.eta_c >= 0.0 && self.eta_m >= 0.0) {
            return Err(Error::invalid("distribution indices must be >= 0"));
        }
        if self.hv_samples == 0 {
            return Err(Error::invalid("hv_samples must be >= 1"));
        }
        Ok(())
    }

    /// Evaluations spent on each new individual.
    pub fn samples_per_individual(&self) -> usize {
        match self.mode {
            SelectionMode::Single => 1,
            _ => self.n,
        }
    }

    /// Native generations between two history checkpoints.
    pub fn checkpoint_stride(&self) -> usize {
        match self.mode {
            SelectionMode::Single => self.n,
            _ => 1,
        }
    }

    /// Native generations of a full run.
    pub fn total_generations(&self) -> usize {
        self.generations * self.checkpoint_stride()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::ZdtVariant;
    use crate::rng::stream;

    #[test]
    fn batch_shapes_and_noiseless_rows() {
        let p = NoisyZdt::new(ZdtSpec::standard(ZdtVariant::Zdt1), 0.0).unwrap();
        let x = p.spec().optimum(0.3);
        let mut rng = stream(0, &[]);
        let rows = evaluate_batch(&p, &x, 5, &mut rng).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r == &rows[0]));
        assert_eq!(evaluate_batch(&p, &x, 1, &mut rng).unwrap().len(), 1);
        let ind = Individual::new(x, rows.clone()).unwrap();
        assert_eq!(ind.mean, rows[0]);
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let odd = OptimizerConfig { popsize: 21, ..Default::default() };
        assert!(odd.validate().is_err());
        let bad_grid = OptimizerConfig { n: 60, ..Default::default() };
        assert!(bad_grid.validate().is_err());
        let mean = OptimizerConfig { n: 60, mode: SelectionMode::Mean, ..Default::default() };
        assert!(mean.validate().is_ok());
        assert!(NoisyZdt::new(ZdtSpec::standard(ZdtVariant::Zdt1), -0.1).is_err());
    }
}
