//! Library side of the `qdom` binary: each subcommand is a function from a
//! request to a serializable report, so it can be driven without a shell.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bench::{ZdtSpec, ZdtVariant};
use crate::dominance::{max_dominated_quantile, q_sort, DominanceTensor};
use crate::error::{Error, Result};
use crate::grid::{AugmentedGrid, GridSpec, RadialPolicy};
use crate::io;
use crate::rng::stream;
use crate::smoo::{run_replications, NoisyZdt, OptimizerConfig, RunHistory};
use crate::threshold::{sample_threshold_with, Formula, ThresholdInputs};
use crate::transport::{co_map, Orientation, SampleSet};

#[derive(Clone, Debug)]
pub struct RankRequest {
    pub files: Vec<PathBuf>,
    /// Points drawn per replication id; `None` uses every point.
    pub k: Option<usize>,
    pub reps: usize,
    pub policy: RadialPolicy,
    pub orientation: Option<Orientation>,
    pub ties: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub grid: GridSpec,
    /// Fronts of the final repetition, by label.
    pub fronts: Vec<Vec<String>>,
    /// Within-front scores of the final repetition.
    pub scores: BTreeMap<String, f64>,
    /// `"A>B"`: largest lattice level at which A dominates B in the final
    /// repetition; −1 when none.
    pub max_dominated_quantile: BTreeMap<String, i64>,
    pub mean_rank: BTreeMap<String, f64>,
    pub rank_sd: BTreeMap<String, f64>,
}

/// Draws `k` points uniformly, with replacement, from every replication
/// group of `set`.
fn subsample<R: Rng + ?Sized>(set: &SampleSet, k: usize, rng: &mut R) -> Result<SampleSet> {
    let Some(reps) = &set.replications else {
        return Err(Error::invalid(format!(
            "`{}` has no `{}` column; subsampling needs one",
            set.label,
            io::REPLICATION_COLUMN
        )));
    };
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, &r) in reps.iter().enumerate() {
        groups.entry(r).or_default().push(i);
    }
    let mut points = Vec::with_capacity(groups.len() * k);
    for members in groups.values() {
        for _ in 0..k {
            points.push(set.points[members[rng.random_range(0..members.len())]].clone());
        }
    }
    SampleSet::new(set.label.clone(), set.orientation, points)
}

pub fn cmd_rank(req: &RankRequest) -> Result<RankReport> {
    if req.files.is_empty() {
        return Err(Error::invalid("rank needs at least one sample file"));
    }
    if req.reps == 0 {
        return Err(Error::invalid("reps must be >= 1"));
    }
    if req.k == Some(0) {
        return Err(Error::invalid("k must be >= 1"));
    }
    let sets = req.files.iter().map(|p| io::load_samples(p, req.orientation)).collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = sets.iter().map(|s| s.label.clone()).collect();
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::invalid(format!("duplicate candidate label `{l}`")));
        }
    }
    let d = sets[0].dim();
    if let Some(s) = sets.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
    }

    let m = sets.len();
    let mut rng = stream(req.seed, &[]);
    let mut rank_sum = vec![0.0; m];
    let mut rank_sq = vec![0.0; m];
    let mut last = None;
    for _ in 0..req.reps {
        let drawn = match req.k {
            Some(k) => sets.iter().map(|s| subsample(s, k, &mut rng)).collect::<Result<Vec<_>>>()?,
            None => sets.clone(),
        };
        let n = drawn[0].len();
        if let Some(s) = drawn.iter().find(|s| s.len() != n) {
            return Err(Error::invalid(format!(
                "candidates need equal sample counts, `{}` has {} and `{}` has {n}",
                s.label,
                s.len(),
                drawn[0].label
            )));
        }
        let spec = GridSpec::from_policy(n, d, req.policy, req.seed)?;
        let grid = Arc::new(AugmentedGrid::build(spec)?);
        let maps = drawn.iter().map(|s| co_map(s, &grid)).collect::<Result<Vec<_>>>()?;
        let ordering = q_sort(&DominanceTensor::from_maps(&maps)?, req.ties);
        for (j, p) in ordering.positions().into_iter().enumerate() {
            rank_sum[j] += p;
            rank_sq[j] += p * p;
        }
        last = Some((grid, maps, ordering));
    }

    let (grid, maps, ordering) = last.expect("at least one repetition");
    let r = req.reps as f64;
    let mut report = RankReport {
        grid: grid.spec().clone(),
        fronts: ordering.fronts.iter().map(|f| f.iter().map(|&j| labels[j].clone()).collect()).collect(),
        scores: BTreeMap::new(),
        max_dominated_quantile: BTreeMap::new(),
        mean_rank: BTreeMap::new(),
        rank_sd: BTreeMap::new(),
    };
    for j in 0..m {
        let mean = rank_sum[j] / r;
        let var = if req.reps > 1 { ((rank_sq[j] - r * mean * mean) / (r - 1.0)).max(0.0) } else { 0.0 };
        report.scores.insert(labels[j].clone(), ordering.scores[j]);
        report.mean_rank.insert(labels[j].clone(), mean);
        report.rank_sd.insert(labels[j].clone(), var.sqrt());
        for i in 0..m {
            if i != j {
                let key = format!("{}>{}", labels[j], labels[i]);
                report.max_dominated_quantile.insert(key, max_dominated_quantile(&maps[j], &maps[i])?);
            }
        }
    }
    Ok(report)
}

/// Experiment file for [`cmd_optimize`]. Optimizer fields sit at the top
/// level next to the problem description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub problem: ZdtVariant,
    pub n_vars: usize,
    pub sigma: f64,
    pub replications: u64,
    #[serde(flatten)]
    pub optimizer: OptimizerConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            problem: ZdtVariant::Zdt1,
            n_vars: ZdtSpec::DEFAULT_VARS,
            sigma: 0.1,
            replications: 1,
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?)
    }

    /// Evaluations a qdom or mean run spends in total; the ΔHV curve's
    /// budget fractions are relative to this.
    pub fn budget(&self) -> u64 {
        let o = &self.optimizer;
        (o.popsize * o.n * (o.generations + 1)) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub history_csv: PathBuf,
    pub curve_csv: PathBuf,
    pub final_delta_hv: Vec<f64>,
}

/// Runs every replication of `config` and writes
/// `<problem>_<mode>_history.csv` and `<problem>_<mode>_curve.csv` into
/// `out_dir`.
pub fn cmd_optimize(config: &ExperimentConfig, out_dir: &Path) -> Result<OptimizeReport> {
    if config.replications == 0 {
        return Err(Error::invalid("replications must be >= 1"));
    }
    let problem = NoisyZdt::new(ZdtSpec::new(config.problem, config.n_vars)?, config.sigma)?;
    let histories: Vec<RunHistory> = run_replications(&problem, &config.optimizer, config.replications)?;
    std::fs::create_dir_all(out_dir)?;
    let stem = format!("{}_{}", config.problem, config.optimizer.mode);
    let history_csv = out_dir.join(format!("{stem}_history.csv"));
    let curve_csv = out_dir.join(format!("{stem}_curve.csv"));
    io::write_history_csv(&histories, BufWriter::new(File::create(&history_csv)?))?;
    let curve = io::delta_hv_curve(&histories, config.budget())?;
    io::write_curve_csv(&curve, BufWriter::new(File::create(&curve_csv)?))?;
    Ok(OptimizeReport {
        history_csv,
        curve_csv,
        final_delta_hv: histories.iter().map(RunHistory::final_delta_hv).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub branch: String,
    pub formula: Formula,
    /// `n*` when it fits in a `u64`.
    pub n_star: Option<u64>,
    /// log10 of `n*`, finite even when `n*` overflows.
    pub log10_n_star: f64,
    pub ln_n1: f64,
    pub ln_n2: f64,
}

pub fn cmd_threshold(inputs: &ThresholdInputs, formula: Formula) -> Result<ThresholdReport> {
    let t = sample_threshold_with(inputs, formula)?;
    let ln_star = t.ln_n1.max(t.ln_n2).max(0.0);
    Ok(ThresholdReport {
        branch: t.branch.to_string(),
        formula,
        n_star: t.as_u64(),
        log10_n_star: ln_star / std::f64::consts::LN_10,
        ln_n1: t.ln_n1,
        ln_n2: t.ln_n2,
    })
}

#[derive(Clone, Debug)]
pub struct GridRequest {
    pub spec: GridSpec,
    pub grid_csv: PathBuf,
    /// Samples to map onto the grid, and where to write the map.
    pub samples: Option<(PathBuf, PathBuf)>,
    pub orientation: Option<Orientation>,
}

/// Writes the grid dump and, when samples are given, their map dump.
pub fn cmd_grid(req: &GridRequest) -> Result<GridSpec> {
    let grid = Arc::new(AugmentedGrid::build(req.spec.clone())?);
    // map before writing anything so that bad input leaves no files behind
    let map = match &req.samples {
        Some((input, output)) => Some((co_map(&io::load_samples(input, req.orientation)?, &grid)?, output)),
        None => None,
    };
    io::write_grid_csv(&grid, BufWriter::new(File::create(&req.grid_csv)?))?;
    if let Some((map, output)) = map {
        io::write_map_csv(&map, BufWriter::new(File::create(output)?))?;
    }
    Ok(grid.spec().clone())
}
