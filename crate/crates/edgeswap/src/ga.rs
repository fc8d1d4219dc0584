//! The two-stage genetic algorithm: population setup, generation steps, and
//! full runs with reports.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crossover::{es_crossover, Strategy};
use crate::instance::{build_neighbor_lists, Instance, NeighborLists};
use crate::local_search::two_opt;
use crate::tour::Tour;

/// Strategy choice by name, resolved against [`GaConfig::k_multiple`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Single,
    Random,
    KMultiple,
    Block,
}

impl StrategyKind {
    pub fn resolve(self, k: usize) -> Strategy {
        match self {
            StrategyKind::Single => Strategy::Single,
            StrategyKind::Random => Strategy::Random,
            StrategyKind::KMultiple => Strategy::KMultiple(k),
            StrategyKind::Block => Strategy::Block(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    /// Population size.
    pub n_pop: usize,
    /// Children attempted per parent pair and generation.
    pub n_ch: usize,
    /// Stagnant generations that end a stage.
    pub g_stagnation: usize,
    /// Ring count used by the `KMultiple` and `Block` strategies.
    pub k_multiple: usize,
    /// Crossover strategy of the first stage.
    pub local_strategy: StrategyKind,
    /// Crossover strategy of the second stage.
    pub global_strategy: StrategyKind,
    /// Neighbor-list length for 2-opt and loop reconnection.
    pub neighbor_k: usize,
    pub seed: u64,
    /// Wall-clock cap in seconds; unlimited when absent.
    pub time_limit: Option<f64>,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            n_pop: 200,
            n_ch: 20,
            g_stagnation: 30,
            k_multiple: 6,
            local_strategy: StrategyKind::Random,
            global_strategy: StrategyKind::Block,
            neighbor_k: 10,
            seed: 1,
            time_limit: None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{field} must be at least {min}")]
    TooSmall { field: &'static str, min: usize },
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let checks = [
            ("n_pop", self.n_pop, 2),
            ("n_ch", self.n_ch, 1),
            ("g_stagnation", self.g_stagnation, 1),
            ("k_multiple", self.k_multiple, 1),
            ("neighbor_k", self.neighbor_k, 1),
        ];
        for (field, value, min) in checks {
            if value < min {
                return Err(ConfigError::TooSmall { field, min });
            }
        }
        Ok(())
    }

    fn strategy_for(&self, stage: Stage) -> Strategy {
        match stage {
            Stage::Local => self.local_strategy.resolve(self.k_multiple),
            Stage::Global => self.global_strategy.resolve(self.k_multiple),
        }
    }
}

/// The two phases of a run: small swaps first, larger ring blocks after the
/// first stretch of stagnation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Local,
    Global,
}

/// Scores a tour for survivor selection; smaller wins. The default is plain
/// tour length.
pub type EvalFn<'a> = dyn Fn(&Instance, &Tour) -> i64 + 'a;

/// The default evaluation: integer tour length.
pub fn length_eval(inst: &Instance, tour: &Tour) -> i64 {
    tour.length(inst)
}

#[derive(Debug, Clone)]
pub struct Population {
    pub members: Vec<Tour>,
    lengths: Vec<i64>,
    pub best_length: i64,
    pub generation: usize,
    pub stage: Stage,
    /// Generations since `best_length` last improved.
    pub stagnant: usize,
}

impl Population {
    pub fn lengths(&self) -> &[i64] {
        &self.lengths
    }

    pub fn mean_length(&self) -> f64 {
        self.lengths.iter().sum::<i64>() as f64 / self.lengths.len() as f64
    }

    fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.lengths.len() {
            if self.lengths[i] < self.lengths[best] {
                best = i;
            }
        }
        best
    }
}

/// Builds the starting population: random permutations improved by 2-opt.
pub fn init_population<R: Rng + ?Sized>(
    inst: &Instance,
    nbrs: &NeighborLists,
    cfg: &GaConfig,
    rng: &mut R,
) -> Population {
    let n = inst.n();
    let mut members = Vec::with_capacity(cfg.n_pop);
    let mut lengths = Vec::with_capacity(cfg.n_pop);
    for _ in 0..cfg.n_pop {
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(rng);
        let tour = two_opt(inst, nbrs, &Tour::new(order), rng);
        lengths.push(tour.length(inst));
        members.push(tour);
    }
    let best_length = lengths.iter().copied().min().expect("population is non-empty");
    Population { members, lengths, best_length, generation: 0, stage: Stage::Local, stagnant: 0 }
}

/// Runs one generation: pairs the population along a random cycle, breeds
/// each pair, and replaces each first parent with its best child when that
/// child strictly improves on it (ties keep the parent).
pub fn step_generation<R: Rng + ?Sized>(
    pop: &mut Population,
    inst: &Instance,
    nbrs: &NeighborLists,
    cfg: &GaConfig,
    strategy: Strategy,
    eval: &EvalFn,
    rng: &mut R,
) {
    let n_pop = pop.members.len();
    let mut pairing: Vec<usize> = (0..n_pop).collect();
    pairing.shuffle(rng);

    for i in 0..n_pop {
        let a = pairing[i];
        let b = pairing[(i + 1) % n_pop];
        let mut children = es_crossover(
            inst,
            nbrs,
            &pop.members[a],
            &pop.members[b],
            strategy,
            cfg.n_ch,
            rng,
        )
        .expect("population members share one instance");
        if children.is_empty() {
            continue;
        }
        let parent_score = eval(inst, &pop.members[a]);
        let mut best: Option<(i64, usize)> = None;
        for (ci, child) in children.iter().enumerate() {
            let score = eval(inst, child);
            if score < parent_score && best.is_none_or(|(bs, _)| score < bs) {
                best = Some((score, ci));
            }
        }
        if let Some((_, ci)) = best {
            let child = children.swap_remove(ci);
            pop.lengths[a] = child.length(inst);
            pop.members[a] = child;
        }
    }

    pop.generation += 1;
    let gen_best = pop.lengths.iter().copied().min().expect("population is non-empty");
    if gen_best < pop.best_length {
        pop.best_length = gen_best;
        pop.stagnant = 0;
    } else {
        pop.stagnant += 1;
    }
}

/// Per-generation snapshot of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStat {
    pub generation: usize,
    pub stage: Stage,
    pub best: i64,
    pub mean: f64,
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Both stages ran out of improvement.
    Stagnation,
    TimeLimit,
}

/// Everything a finished run reports. Identical seeds and configs reproduce
/// identical reports except for `wall_seconds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub best_length: i64,
    /// Visiting order of the best tour found.
    pub best_tour: Vec<u32>,
    pub generations: usize,
    /// Generation at which the second stage took over, if it was reached.
    pub stage_switch_generation: Option<usize>,
    pub stop_reason: StopReason,
    pub trace: Vec<GenerationStat>,
    pub wall_seconds: f64,
    pub seed: u64,
    pub config: GaConfig,
}

impl RunReport {
    pub fn best_tour(&self) -> Tour {
        Tour::new(self.best_tour.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<RunReport, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The trace as `generation,best,mean,stage` CSV.
    pub fn trace_csv(&self) -> String {
        use std::fmt::Write;

        let mut out = String::from("generation,best,mean,stage\n");
        for row in &self.trace {
            let stage = match row.stage {
                Stage::Local => "local",
                Stage::Global => "global",
            };
            writeln!(out, "{},{},{:.3},{}", row.generation, row.best, row.mean, stage).unwrap();
        }
        out
    }
}

/// Runs the full two-stage algorithm with the default length evaluation.
pub fn run(inst: &Instance, cfg: &GaConfig) -> Result<RunReport, ConfigError> {
    run_with_eval(inst, cfg, &length_eval)
}

/// Runs the full two-stage algorithm with a custom survivor score.
///
/// Stage one breeds with `local_strategy` until the best length stalls for
/// `g_stagnation` generations, then stage two continues with
/// `global_strategy` until it stalls for the same span again.
pub fn run_with_eval(
    inst: &Instance,
    cfg: &GaConfig,
    eval: &EvalFn,
) -> Result<RunReport, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let nbrs = build_neighbor_lists(inst, cfg.neighbor_k);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut pop = init_population(inst, &nbrs, cfg, &mut rng);
    let mut best_tour = pop.members[pop.best_index()].clone();
    let mut best_length = pop.best_length;
    let mut trace = vec![GenerationStat {
        generation: 0,
        stage: pop.stage,
        best: pop.best_length,
        mean: pop.mean_length(),
    }];
    let mut stage_switch_generation = None;

    let over_time = |started: &Instant| {
        cfg.time_limit
            .is_some_and(|limit| started.elapsed().as_secs_f64() >= limit)
    };

    let mut stop_reason = StopReason::Stagnation;
    loop {
        if over_time(&started) {
            stop_reason = StopReason::TimeLimit;
            break;
        }
        let strategy = cfg.strategy_for(pop.stage);
        step_generation(&mut pop, inst, &nbrs, cfg, strategy, eval, &mut rng);
        if pop.best_length < best_length {
            best_length = pop.best_length;
            best_tour = pop.members[pop.best_index()].clone();
        }
        trace.push(GenerationStat {
            generation: pop.generation,
            stage: pop.stage,
            best: pop.best_length,
            mean: pop.mean_length(),
        });
        if pop.stagnant >= cfg.g_stagnation {
            match pop.stage {
                Stage::Local => {
                    pop.stage = Stage::Global;
                    pop.stagnant = 0;
                    stage_switch_generation = Some(pop.generation);
                }
                Stage::Global => break,
            }
        }
    }

    debug_assert_eq!(best_length, best_tour.length(inst));
    Ok(RunReport {
        instance: inst.name().to_string(),
        best_length,
        best_tour: best_tour.order().to_vec(),
        generations: pop.generation,
        stage_switch_generation,
        stop_reason,
        trace,
        wall_seconds: started.elapsed().as_secs_f64(),
        seed: cfg.seed,
        config: cfg.clone(),
    })
}
