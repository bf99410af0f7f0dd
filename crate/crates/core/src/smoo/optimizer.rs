use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::operators::{polynomial_mutation, sbx_crossover};
use super::survival::{survival_mean, survival_qdom, survival_single, Selection};
use super::{evaluate_batch, Individual, NoisyProblem, OptimizerConfig, SelectionMode};
use crate::bench::hypervolume_2d;
use crate::error::{Error, Result};
use crate::grid::{AugmentedGrid, GridSpec};
use crate::rng::stream;

// stream path tags
const INIT: u64 = 0;
const VARIATION: u64 = 1;
const EVALUATION: u64 = 2;
const MEASUREMENT: u64 = 3;

/// Seed for the shared q-dominance grid; planar directions do not depend on
/// it, but higher objective counts do, and all runs must share one frame.
const GRID_SEED: u64 = 0x5eed;

/// Matings tried before duplicates are accepted.
const MAX_MATING_ATTEMPTS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    /// Native generation (single mode counts `n` per checkpoint).
    pub generation: usize,
    /// Objective evaluations spent so far, measurement excluded.
    pub evaluations: u64,
    pub delta_hv: f64,
    pub decisions: Vec<Vec<f64>>,
    pub means: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunHistory {
    pub problem: String,
    pub mode: SelectionMode,
    pub replication: u64,
    pub checkpoints: Vec<Checkpoint>,
}

impl RunHistory {
    pub fn final_delta_hv(&self) -> f64 {
        self.checkpoints.last().map_or(f64::NAN, |c| c.delta_hv)
    }
}

/// One replication of the generational loop, advanced with [`Optimizer::step`].
pub struct Optimizer<'a, P: NoisyProblem + ?Sized> {
    problem: &'a P,
    config: OptimizerConfig,
    master: u64,
    grid: Option<Arc<AugmentedGrid>>,
    population: Vec<Individual>,
    keys: Vec<(usize, f64)>,
    generation: usize,
    evaluations: u64,
}

impl<'a, P: NoisyProblem + ?Sized> Optimizer<'a, P> {
    /// Samples and evaluates the initial population of replication `rep`,
    /// whose master seed is `config.seed + rep`.
    pub fn new(problem: &'a P, config: OptimizerConfig, rep: u64) -> Result<Self> {
        config.validate()?;
        let bounds = problem.bounds();
        if bounds.iter().any(|&(a, b)| !(a < b)) {
            return Err(Error::invalid("problem bounds must satisfy a < b"));
        }
        let grid = match config.mode {
            SelectionMode::Qdom => {
                let spec = GridSpec::from_counts(problem.num_objectives(), config.nr, config.ns, 0, GRID_SEED)?;
                Some(Arc::new(AugmentedGrid::build(spec)?))
            }
            _ => None,
        };
        let master = config.seed.wrapping_add(rep);
        let mut rng = stream(master, &[INIT]);
        let decisions: Vec<Vec<f64>> = (0..config.popsize)
            .map(|_| bounds.iter().map(|&(a, b)| rng.random_range(a..=b)).collect())
            .collect();

        let mut opt = Optimizer {
            problem,
            config,
            master,
            grid,
            population: Vec::new(),
            keys: Vec::new(),
            generation: 0,
            evaluations: 0,
        };
        let mut pool = opt.evaluate_all(decisions)?;
        let sel = opt.select(&mut pool)?;
        opt.adopt(pool, sel);
        Ok(opt)
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn config(&self) -> &OptimizerConfig {
        &self.config
    }

    fn evaluate_all(&mut self, decisions: Vec<Vec<f64>>) -> Result<Vec<Individual>> {
        let per = self.config.samples_per_individual();
        let (master, gen, problem) = (self.master, self.generation as u64, self.problem);
        let pool = decisions
            .into_par_iter()
            .enumerate()
            .map(|(i, x)| {
                let mut rng = stream(master, &[EVALUATION, gen, i as u64]);
                let samples = evaluate_batch(problem, &x, per, &mut rng)?;
                Individual::new(x, samples)
            })
            .collect::<Result<Vec<_>>>()?;
        self.evaluations += (pool.len() * per) as u64;
        Ok(pool)
    }

    fn select(&self, pool: &mut [Individual]) -> Result<Selection> {
        let k = self.config.popsize;
        match self.config.mode {
            SelectionMode::Qdom => survival_qdom(pool, k, self.grid.as_ref().expect("qdom grid")),
            SelectionMode::Mean => survival_mean(pool, k),
            SelectionMode::Single => survival_single(pool, k),
        }
    }

    fn adopt(&mut self, mut pool: Vec<Individual>, sel: Selection) {
        let mut slots: Vec<Option<Individual>> = pool.drain(..).map(Some).collect();
        self.population = sel.indices.iter().map(|&i| slots[i].take().expect("unique survivor")).collect();
        self.keys = sel.keys;
    }

    fn tournament<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let a = rng.random_range(0..self.population.len());
        let b = rng.random_range(0..self.population.len());
        let (ka, kb) = (self.keys[a], self.keys[b]);
        match ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)) {
            std::cmp::Ordering::Greater => b,
            _ => a,
        }
    }

    /// One generation: tournament, variation, evaluation of the offspring
    /// and survival over parents plus offspring.
    pub fn step(&mut self) -> Result<()> {
        self.generation += 1;
        let bounds = self.problem.bounds();
        let p_m = self.config.p_m.unwrap_or(1.0 / bounds.len() as f64);
        let mut rng = stream(self.master, &[VARIATION, self.generation as u64]);
        let mut offspring: Vec<Vec<f64>> = Vec::with_capacity(self.config.popsize);
        let mut attempts = 0usize;
        while offspring.len() < self.config.popsize {
            let a = self.tournament(&mut rng);
            let b = self.tournament(&mut rng);
            let (mut c1, mut c2) = sbx_crossover(
                &self.population[a].x,
                &self.population[b].x,
                bounds,
                self.config.eta_c,
                self.config.p_c,
                &mut rng,
            );
            polynomial_mutation(&mut c1, bounds, self.config.eta_m, p_m, &mut rng);
            polynomial_mutation(&mut c2, bounds, self.config.eta_m, p_m, &mut rng);
            for child in [c1, c2] {
                let seen = |x: &Vec<f64>| self.population.iter().any(|i| &i.x == x) || offspring.contains(x);
                if self.config.eliminate_duplicates && attempts < MAX_MATING_ATTEMPTS && seen(&child) {
                    continue;
                }
                if offspring.len() < self.config.popsize {
                    offspring.push(child);
                }
            }
            attempts += 1;
        }
        let children = self.evaluate_all(offspring)?;
        let mut pool = std::mem::take(&mut self.population);
        pool.extend(children);
        let sel = self.select(&mut pool)?;
        self.adopt(pool, sel);
        Ok(())
    }

    /// Expected ΔHV of the current population, estimated from
    /// `hv_samples` fresh evaluations per individual that are not charged
    /// to the budget. NaN when the problem has no known front.
    pub fn measure(&self, checkpoint: usize) -> Result<f64> {
        let reference = self.config.hv.reference;
        let Some(front) = self.problem.front_hypervolume(reference) else {
            return Ok(f64::NAN);
        };
        let reps = self.config.hv_samples;
        let blocks = self
            .population
            .par_iter()
            .enumerate()
            .map(|(i, ind)| {
                let mut rng = stream(self.master, &[MEASUREMENT, checkpoint as u64, i as u64]);
                evaluate_batch(self.problem, &ind.x, reps, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut total = 0.0;
        for r in 0..reps {
            let points: Vec<[f64; 2]> = blocks.iter().map(|b| [b[r][0], b[r][1]]).collect();
            total += front - hypervolume_2d(&points, reference);
        }
        let gap = total / reps as f64;
        Ok(if self.config.hv.normalize { gap / front } else { gap })
    }

    fn checkpoint(&self, index: usize) -> Result<Checkpoint> {
        Ok(Checkpoint {
            generation: self.generation,
            evaluations: self.evaluations,
            delta_hv: self.measure(index)?,
            decisions: self.population.iter().map(|i| i.x.clone()).collect(),
            means: self.population.iter().map(|i| i.mean.clone()).collect(),
        })
    }
}

/// Runs replication `rep` to completion, recording a checkpoint after the
/// initial population and after every `checkpoint_stride` generations.
pub fn run<P: NoisyProblem + ?Sized>(problem: &P, config: &OptimizerConfig, rep: u64) -> Result<RunHistory> {
    if problem.num_objectives() != 2 && problem.front_hypervolume(config.hv.reference).is_some() {
        return Err(Error::invalid("hypervolume tracking supports two objectives only"));
    }
    let mut opt = Optimizer::new(problem, config.clone(), rep)?;
    let stride = config.checkpoint_stride();
    let mut checkpoints = vec![opt.checkpoint(0)?];
    for c in 1..=config.generations {
        for _ in 0..stride {
            opt.step()?;
        }
        checkpoints.push(opt.checkpoint(c)?);
    }
    Ok(RunHistory { problem: problem.name().to_string(), mode: config.mode, replication: rep, checkpoints })
}

/// Replications `0..reps`, run concurrently.
pub fn run_replications<P: NoisyProblem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
    reps: u64,
) -> Result<Vec<RunHistory>> {
    (0..reps).into_par_iter().map(|r| run(problem, config, r)).collect()
}
