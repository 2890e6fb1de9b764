//! Evolutionary search over leader mixed strategies.
//!
//! The loop is generic over an [`Evaluator`]. Plugging in the rational
//! follower, an exact bounded-rationality oracle or a trained network gives
//! EASG, EASG_BR and NESG respectively; nothing else changes between them.

use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behavior::{exact_leader_value, BehaviorModel};
use crate::error::{Error, Result};
use crate::game::{Game, MixedStrategy, PureStrategy};
use crate::rng::rng_from_seed;

/// Scores a leader strategy. Implementations must be deterministic.
pub trait Evaluator: Sync {
    fn evaluate(&self, game: &Game, strategy: &MixedStrategy) -> Result<f64>;
}

impl<F> Evaluator for F
where
    F: Fn(&Game, &MixedStrategy) -> Result<f64> + Sync,
{
    fn evaluate(&self, game: &Game, strategy: &MixedStrategy) -> Result<f64> {
        self(game, strategy)
    }
}

/// Exact leader value against a follower obeying a known model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactEvaluator {
    pub model: BehaviorModel,
}

impl ExactEvaluator {
    pub fn new(model: BehaviorModel) -> Self {
        Self { model }
    }

    pub fn rational() -> Self {
        Self::new(BehaviorModel::Rational)
    }
}

impl Evaluator for ExactEvaluator {
    fn evaluate(&self, game: &Game, strategy: &MixedStrategy) -> Result<f64> {
        exact_leader_value(game, strategy, &self.model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub generations: usize,
    pub mutation_rate: f64,
    pub crossover_rate: f64,
    pub selection_pressure: f64,
    pub elite_size: usize,
    /// Cap on the support of any individual; crossover drops the least
    /// probable pure strategies beyond it.
    pub max_support: usize,
    pub seed: u64,
    /// Evaluate individuals on the rayon pool. Results are written back in
    /// individual order, so runs stay bit-identical either way.
    pub parallel: bool,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 1000,
            mutation_rate: 0.5,
            crossover_rate: 0.8,
            selection_pressure: 0.9,
            elite_size: 2,
            max_support: 20,
            seed: 0,
            parallel: false,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mutation_rate", self.mutation_rate),
            ("crossover_rate", self.crossover_rate),
            ("selection_pressure", self.selection_pressure),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(name, format!("{v} not in [0, 1]")));
            }
        }
        if self.population_size < 2 {
            return Err(Error::invalid("population_size", "must be at least 2"));
        }
        if self.elite_size >= self.population_size {
            return Err(Error::invalid("elite_size", "must be smaller than population_size"));
        }
        if self.max_support == 0 {
            return Err(Error::invalid("max_support", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub strategy: MixedStrategy,
    /// Cached evaluator value; cleared whenever the strategy changes.
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn new(strategy: MixedStrategy) -> Self {
        Self { strategy, fitness: None }
    }

    fn score(&self) -> f64 {
        self.fitness.unwrap_or(f64::NEG_INFINITY)
    }
}

/// A pure strategy sending every unit to a uniformly random target at every step.
pub fn random_pure_strategy<R: Rng + ?Sized>(game: &Game, rng: &mut R) -> PureStrategy {
    let (k, m, n) = (game.num_units(), game.num_steps(), game.num_targets());
    let targets = (0..k * m).map(|_| rng.gen_range(0..n)).collect();
    PureStrategy::from_flat(k, m, targets).expect("dimensions come from the game")
}

pub fn init_population<R: Rng + ?Sized>(game: &Game, config: &EvolutionConfig, rng: &mut R) -> Vec<Individual> {
    (0..config.population_size)
        .map(|_| Individual::new(MixedStrategy::pure(random_pure_strategy(game, rng))))
        .collect()
}

/// Joins both supports with halved probabilities.
pub fn crossover(a: &Individual, b: &Individual, max_support: usize) -> Individual {
    let child = a
        .strategy
        .mix(&b.strategy, 0.5)
        .expect("parents share the game's dimensions")
        .truncated(max_support);
    Individual::new(child)
}

/// Redraws the targets of a random non-empty subset of units in one
/// randomly chosen pure strategy of the support.
pub fn mutate<R: Rng + ?Sized>(ind: &Individual, game: &Game, rng: &mut R) -> Individual {
    let support = ind.strategy.support();
    let site = rng.gen_range(0..support.len());
    let mut pure = support[site].0.clone();
    let (k, m, n) = (pure.num_units(), pure.num_steps(), game.num_targets());
    let chosen: Vec<usize> = loop {
        let subset: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
        if !subset.is_empty() {
            break subset;
        }
    };
    for u in chosen {
        for s in 0..m {
            pure.set_target(u, s, rng.gen_range(0..n));
        }
    }
    Individual::new(ind.strategy.with_replaced(site, pure))
}

/// Binary tournament: the fitter of two distinct random individuals wins
/// with probability `pressure`.
pub fn tournament_select<'a, R: Rng + ?Sized>(
    population: &'a [Individual],
    pressure: f64,
    rng: &mut R,
) -> Result<&'a Individual> {
    if population.len() < 2 {
        return Err(Error::invalid("population", "tournament needs at least two individuals"));
    }
    let pair = sample(rng, population.len(), 2);
    let (a, b) = (&population[pair.index(0)], &population[pair.index(1)]);
    if a.fitness.is_none() || b.fitness.is_none() {
        return Err(Error::validation("evaluated population", "tournament entrant has no fitness"));
    }
    let (fit, weak) = if a.score() >= b.score() { (a, b) } else { (b, a) };
    Ok(if rng.gen_bool(pressure) { fit } else { weak })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub evaluations: usize,
    /// Time spent inside the evaluator during this generation.
    pub eval_ms: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionOutcome {
    pub best: MixedStrategy,
    pub best_fitness: f64,
    /// Row 0 is the initial population, then one row per generation.
    pub history: Vec<GenerationStats>,
}

impl EvolutionOutcome {
    pub fn total_evaluations(&self) -> usize {
        self.history.iter().map(|h| h.evaluations).sum()
    }

    pub fn total_eval_ms(&self) -> f64 {
        self.history.iter().map(|h| h.eval_ms).sum()
    }
}

/// Runs the evolutionary loop with a random stream seeded from `config.seed`.
pub fn evolve<E: Evaluator + ?Sized>(game: &Game, evaluator: &E, config: &EvolutionConfig) -> Result<EvolutionOutcome> {
    let mut rng = rng_from_seed(config.seed);
    evolve_with_rng(game, evaluator, config, &mut rng)
}

pub fn evolve_with_rng<E: Evaluator + ?Sized, R: Rng + ?Sized>(
    game: &Game,
    evaluator: &E,
    config: &EvolutionConfig,
    rng: &mut R,
) -> Result<EvolutionOutcome> {
    config.validate()?;
    let start = Instant::now();
    let mut population = init_population(game, config, rng);
    let mut best: Option<(MixedStrategy, f64)> = None;
    let mut history = Vec::with_capacity(config.generations + 1);

    let (evaluations, eval_ms) = evaluate_all(game, evaluator, &mut population, 0, config.parallel)?;
    track_best(&population, &mut best);
    history.push(stats(0, &population, evaluations, eval_ms, start));

    for generation in 1..=config.generations {
        let mut pool = population.clone();

        let chosen = ((config.crossover_rate * pool.len() as f64).round() as usize).min(pool.len()) & !1;
        if chosen >= 2 {
            let picks = sample(rng, pool.len(), chosen).into_vec();
            let mut consumed = vec![false; pool.len()];
            for pair in picks.chunks_exact(2) {
                pool[pair[0]] = crossover(&pool[pair[0]], &pool[pair[1]], config.max_support);
                consumed[pair[1]] = true;
            }
            let mut idx = 0;
            pool.retain(|_| {
                idx += 1;
                !consumed[idx - 1]
            });
        }

        for ind in &mut pool {
            if rng.gen_bool(config.mutation_rate) {
                *ind = mutate(ind, game, rng);
            }
        }

        let (evaluations, eval_ms) = evaluate_all(game, evaluator, &mut pool, generation, config.parallel)?;
        track_best(&pool, &mut best);

        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| population[b].score().total_cmp(&population[a].score()).then(a.cmp(&b)));
        let elites: Vec<Individual> = order[..config.elite_size].iter().map(|&i| population[i].clone()).collect();
        pool.extend(elites.iter().cloned());

        let mut next = elites;
        while next.len() < config.population_size {
            let pick = if pool.len() >= 2 {
                tournament_select(&pool, config.selection_pressure, rng)?
            } else {
                &pool[0]
            };
            next.push(pick.clone());
        }
        population = next;
        history.push(stats(generation, &population, evaluations, eval_ms, start));
    }

    let (strategy, _) = best.expect("population is never empty");
    let best_fitness = evaluator
        .evaluate(game, &strategy)
        .map_err(|e| e.context("re-scoring best strategy"))?;
    Ok(EvolutionOutcome {
        best: strategy,
        best_fitness,
        history,
    })
}

fn evaluate_all<E: Evaluator + ?Sized>(
    game: &Game,
    evaluator: &E,
    population: &mut [Individual],
    generation: usize,
    parallel: bool,
) -> Result<(usize, f64)> {
    let pending: Vec<usize> = (0..population.len()).filter(|&i| population[i].fitness.is_none()).collect();
    let start = Instant::now();
    let score = |&i: &usize| -> Result<f64> {
        let wrap = |source: Error| Error::Evaluation {
            generation,
            individual: i,
            source: Box::new(source),
        };
        let v = evaluator.evaluate(game, &population[i].strategy).map_err(wrap)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(wrap(Error::validation("finite fitness", format!("evaluator returned {v}"))))
        }
    };
    let values: Vec<Result<f64>> = if parallel {
        pending.par_iter().map(score).collect()
    } else {
        pending.iter().map(score).collect()
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    for (&i, v) in pending.iter().zip(values) {
        population[i].fitness = Some(v?);
    }
    Ok((pending.len(), elapsed))
}

fn track_best(population: &[Individual], best: &mut Option<(MixedStrategy, f64)>) {
    for ind in population {
        let f = ind.score();
        if best.as_ref().map_or(true, |(_, b)| f > *b) {
            *best = Some((ind.strategy.clone(), f));
        }
    }
}

fn stats(generation: usize, population: &[Individual], evaluations: usize, eval_ms: f64, start: Instant) -> GenerationStats {
    let scores = population.iter().map(Individual::score);
    GenerationStats {
        generation,
        best: scores.clone().fold(f64::NEG_INFINITY, f64::max),
        mean: scores.sum::<f64>() / population.len() as f64,
        evaluations,
        eval_ms,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Writes the per-generation history as CSV
/// (`generation,best,mean,evaluations,wall_ms`). `wall_ms` is left empty
/// unless `with_wall_clock` is set, so that reruns stay byte-identical.
pub fn write_history_csv<W: std::io::Write>(history: &[GenerationStats], with_wall_clock: bool, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::parse("history csv", e);
    w.write_record(["generation", "best", "mean", "evaluations", "wall_ms"]).map_err(io)?;
    for h in history {
        let wall = if with_wall_clock { h.wall_ms.to_string() } else { String::new() };
        w.write_record([
            h.generation.to_string(),
            h.best.to_string(),
            h.mean.to_string(),
            h.evaluations.to_string(),
            wall,
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::parse("history csv", e))?;
    Ok(())
}
