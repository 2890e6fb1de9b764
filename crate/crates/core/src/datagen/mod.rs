//! Benchmark games and synthetic training data.
//!
//! Payoffs follow the cybersecurity benchmark convention: penalties drawn from
//! `(-1, 0)`, rewards from `(0, 1)`, and between a quarter and three quarters
//! of the targets protectable per step.

pub mod io;

use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::behavior::{exact_leader_value, BehaviorModel};
use crate::error::{Error, Result};
use crate::evolution::random_pure_strategy;
use crate::game::{Game, MixedStrategy, Payoffs};
use crate::rng::{derive_seed, rng_from_seed};
use crate::senn::{encode_strategy, TrainingExample};

/// Inclusive range for the number of leader units: `[⌊n/4m⌋, ⌈3n/4m⌉]`,
/// with the lower end raised to 1.
pub fn unit_range(n: usize, m: usize) -> (usize, usize) {
    let lo = (n / (4 * m)).max(1);
    let hi = (3 * n).div_ceil(4 * m).max(lo);
    (lo, hi)
}

pub fn gen_benchmark_game<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Game> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("n, m", "benchmark games need n >= 1 and m >= 1"));
    }
    let (lo, hi) = unit_range(n, m);
    let k = rng.gen_range(lo..=hi);
    Ok(gen_benchmark_game_with_units(n, m, k, rng))
}

/// Random benchmark payoffs with a fixed number of units.
pub fn gen_benchmark_game_with_units<R: Rng + ?Sized>(n: usize, m: usize, k: usize, rng: &mut R) -> Game {
    let payoffs = (0..n)
        .map(|_| {
            let leader_reward: f64 = rng.sample(Open01);
            let leader_penalty = -rng.sample::<f64, _>(Open01);
            let follower_reward: f64 = rng.sample(Open01);
            let follower_penalty = -rng.sample::<f64, _>(Open01);
            Payoffs::new(leader_reward, leader_penalty, follower_reward, follower_penalty)
        })
        .collect();
    Game::new(m, k, payoffs).expect("generated games are valid")
}

/// Grid of benchmark games.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub steps_list: Vec<usize>,
    pub targets_list: Vec<usize>,
    pub games_per_pair: usize,
    pub seed: u64,
}

impl BenchmarkSpec {
    /// The full grid: 1, 2, 4 steps; 4 to 128 targets; 5 games each.
    pub fn paper_scale(seed: u64) -> Self {
        Self {
            steps_list: vec![1, 2, 4],
            targets_list: vec![4, 8, 16, 32, 64, 128],
            games_per_pair: 5,
            seed,
        }
    }

    /// Small grid that runs in minutes: 4 to 16 targets, 1 or 2 steps, 3 games each.
    pub fn desk_scale(seed: u64) -> Self {
        Self {
            steps_list: vec![1, 2],
            targets_list: vec![4, 8, 16],
            games_per_pair: 3,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_list.is_empty() || self.targets_list.is_empty() {
            return Err(Error::Config("benchmark grid needs at least one step count and one target count".into()));
        }
        if self.steps_list.contains(&0) || self.targets_list.contains(&0) || self.games_per_pair == 0 {
            return Err(Error::Config("benchmark grid entries must be positive".into()));
        }
        Ok(())
    }
}

/// One generated game and where it came from.
#[derive(Debug, Clone)]
pub struct BenchmarkGame {
    pub n: usize,
    pub m: usize,
    /// 1-based index within its `(n, m)` cell.
    pub index: usize,
    pub seed: u64,
    pub game: Game,
}

impl BenchmarkGame {
    pub fn file_name(&self) -> String {
        format!("game_n{}_m{}_{}.json", self.n, self.m, self.index)
    }
}

/// Seed of the `index`-th game (1-based) in cell `(n, m)`.
pub fn game_seed(root: u64, n: usize, m: usize, index: usize) -> u64 {
    derive_seed(root, "game", &[n as u64, m as u64, index as u64])
}

/// Generates every game of the grid, ordered by steps, then targets, then index.
pub fn gen_benchmark_suite(spec: &BenchmarkSpec) -> Result<Vec<BenchmarkGame>> {
    spec.validate()?;
    let mut games = Vec::new();
    for &m in &spec.steps_list {
        for &n in &spec.targets_list {
            for index in 1..=spec.games_per_pair {
                let seed = game_seed(spec.seed, n, m, index);
                let game = gen_benchmark_game(n, m, &mut rng_from_seed(seed))?;
                games.push(BenchmarkGame { n, m, index, seed, game });
            }
        }
    }
    Ok(games)
}

/// Random mixed strategy with between 1 and `max_support` pure strategies.
pub fn sample_mixed_strategy<R: Rng + ?Sized>(game: &Game, max_support: usize, rng: &mut R) -> Result<MixedStrategy> {
    Ok(sample_counted(game, max_support, rng)?.0)
}

/// Like [`sample_mixed_strategy`], also returning how many pure strategies were drawn
/// before duplicates were merged.
fn sample_counted<R: Rng + ?Sized>(game: &Game, max_support: usize, rng: &mut R) -> Result<(MixedStrategy, usize)> {
    if max_support == 0 {
        return Err(Error::invalid("max_support", "must be at least 1"));
    }
    let l = rng.gen_range(1..=max_support);
    let entries = (0..l)
        .map(|_| {
            let pure = random_pure_strategy(game, rng);
            let w: f64 = rng.sample(Open01);
            (pure, w)
        })
        .collect();
    Ok((MixedStrategy::from_weights(entries)?, l))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub num_examples: usize,
    pub max_support: usize,
    pub model: BehaviorModel,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn new(num_examples: usize, model: BehaviorModel, seed: u64) -> Self {
        Self {
            num_examples,
            max_support: 5,
            model,
            seed,
        }
    }
}

/// Counters describing a generated dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DatasetStats {
    /// Pure strategies absorbed into an identical sibling while sampling.
    pub merged_duplicates: usize,
}

/// `count` random strategies labeled with their exact leader value under `model`.
pub fn gen_training_set<R: Rng + ?Sized>(
    game: &Game,
    model: &BehaviorModel,
    count: usize,
    rng: &mut R,
) -> Result<Vec<TrainingExample>> {
    Ok(gen_training_set_with_stats(game, model, count, 5, rng)?.0)
}

pub fn gen_training_set_with_stats<R: Rng + ?Sized>(
    game: &Game,
    model: &BehaviorModel,
    count: usize,
    max_support: usize,
    rng: &mut R,
) -> Result<(Vec<TrainingExample>, DatasetStats)> {
    model.validate()?;
    let mut stats = DatasetStats::default();
    let mut examples = Vec::with_capacity(count);
    for _ in 0..count {
        let (strategy, drawn) = sample_counted(game, max_support, rng)?;
        stats.merged_duplicates += drawn - strategy.len();
        let label = exact_leader_value(game, &strategy, model)?;
        examples.push(TrainingExample {
            input: encode_strategy(game, &strategy)?,
            label,
        });
    }
    Ok((examples, stats))
}

/// Dataset for `spec`, drawn from the stream seeded by `spec.seed`.
pub fn gen_dataset(game: &Game, spec: &DatasetSpec) -> Result<(Vec<TrainingExample>, DatasetStats)> {
    if spec.num_examples == 0 {
        return Err(Error::Config("dataset needs at least one example".into()));
    }
    gen_training_set_with_stats(game, &spec.model, spec.num_examples, spec.max_support, &mut rng_from_seed(spec.seed))
}
