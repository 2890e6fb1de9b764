//! Experiment drivers: network error per grid cell, solver payoff comparison
//! and evaluation timing. Each driver returns an [`ExperimentReport`] that
//! carries the configuration it ran with, so any report can be regenerated
//! from its own contents.

pub mod cli;
pub mod table;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::behavior::{exact_leader_value, BehaviorModel};
use crate::datagen::{gen_benchmark_suite, gen_training_set_with_stats, BenchmarkGame, BenchmarkSpec};
use crate::error::{Error, Result};
use crate::evolution::{evolve, EvolutionConfig, EvolutionOutcome, ExactEvaluator};
use crate::game::Game;
use crate::rng::{derive_seed, rng_from_seed, STREAM_SCHEME};
use crate::senn::{evaluate_mae, senn_evaluator, split_validation, train, SennNetwork, TrainConfig, TrainReport};

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    /// Evolution scored against a perfectly rational follower.
    Easg,
    /// Evolution scored exactly against the true behavior model.
    EasgBr,
    /// Evolution scored by a network trained on the true behavior model.
    Nesg,
}

impl Solver {
    pub const ALL: [Solver; 3] = [Solver::Easg, Solver::EasgBr, Solver::Nesg];

    pub fn id(self) -> &'static str {
        match self {
            Solver::Easg => "easg",
            Solver::EasgBr => "easg_br",
            Solver::Nesg => "nesg",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Solver::Easg => "EASG",
            Solver::EasgBr => "EASG_BR",
            Solver::Nesg => "NESG",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "easg" => Ok(Solver::Easg),
            "easg_br" | "easg-br" => Ok(Solver::EasgBr),
            "nesg" => Ok(Solver::Nesg),
            other => Err(Error::parse("solver", format!("unknown solver {other:?} (expected easg, easg_br or nesg)"))),
        }
    }
}

/// How the learned evaluator is built for one game and model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SennSetup {
    /// Labeled strategies generated for fitting, including the validation tail.
    pub train_size: usize,
    pub validation_fraction: f64,
    pub max_support: usize,
    pub train: TrainConfig,
}

impl Default for SennSetup {
    fn default() -> Self {
        Self {
            train_size: 5000,
            validation_fraction: 0.1,
            max_support: 5,
            train: TrainConfig::default(),
        }
    }
}

impl SennSetup {
    pub fn validate(&self) -> Result<()> {
        if self.train_size == 0 {
            return Err(Error::Config("train_size is 0: no examples to fit the network on".into()));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::invalid("validation_fraction", "must lie in (0, 1)"));
        }
        if self.max_support == 0 {
            return Err(Error::invalid("max_support", "must be at least 1"));
        }
        Ok(())
    }
}

/// Derived seeds for one (game, model) pair. Labels include the model string,
/// so adding a model to a run never shifts the streams of the others.
fn model_seed(root: u64, what: &str, model: &BehaviorModel, bg: &BenchmarkGame) -> u64 {
    derive_seed(root, &format!("{what}/{model}"), &[bg.n as u64, bg.m as u64, bg.index as u64])
}

/// Seed shared by every solver and model for one evolutionary run.
pub fn evolution_seed(root: u64, bg: &BenchmarkGame, repeat: usize) -> u64 {
    derive_seed(root, "evolve", &[bg.n as u64, bg.m as u64, bg.index as u64, repeat as u64])
}

/// A fitted network with what it took to produce it.
#[derive(Debug, Clone)]
pub struct FittedSenn {
    pub network: SennNetwork,
    pub report: TrainReport,
    pub train_ms: f64,
}

/// Generates labeled data for `game` under `model` and trains a network on it.
pub fn fit_senn(game: &Game, model: &BehaviorModel, setup: &SennSetup, data_seed: u64, net_seed: u64) -> Result<FittedSenn> {
    setup.validate()?;
    let start = Instant::now();
    let (examples, _) = gen_training_set_with_stats(game, model, setup.train_size, setup.max_support, &mut rng_from_seed(data_seed))?;
    let (fit, val) = split_validation(&examples, setup.validation_fraction)?;
    let net = SennNetwork::build(game.num_targets(), game.num_steps(), &mut rng_from_seed(net_seed))?;
    let cfg = TrainConfig {
        seed: derive_seed(net_seed, "shuffle", &[]),
        ..setup.train
    };
    let (network, report) = train(net, fit, val, &cfg)?;
    Ok(FittedSenn {
        network,
        report,
        train_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn fit_for(root: u64, bg: &BenchmarkGame, model: &BehaviorModel, setup: &SennSetup) -> Result<FittedSenn> {
    fit_senn(
        &bg.game,
        model,
        setup,
        model_seed(root, "train-data", model, bg),
        model_seed(root, "net-init", model, bg),
    )
}

fn cell_context(n: usize, m: usize, model: &dyn fmt::Display, what: &str) -> String {
    format!("{what} at n={n}, m={m}, model={model}")
}

/// One aggregated cell of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub m: usize,
    pub model: String,
    pub solver_id: String,
    pub mean_leader_value: f64,
    /// One entry per game (and per repeat, game-major).
    pub per_game_values: Vec<f64>,
    pub senn_mae: Option<f64>,
    /// Only filled in when wall-clock recording was requested; timings make
    /// otherwise identical reruns differ.
    pub wall_clock_ms: Option<f64>,
    /// Seeds of the games behind `per_game_values`.
    pub seeds: Vec<u64>,
}

impl ExperimentRecord {
    fn new(n: usize, m: usize, model: String, solver_id: &str, values: Vec<f64>, seeds: Vec<u64>) -> Self {
        Self {
            n,
            m,
            model,
            solver_id: solver_id.to_string(),
            mean_leader_value: mean(&values),
            per_game_values: values,
            senn_mae: None,
            wall_clock_ms: None,
            seeds,
        }
    }

    /// Checks that the stored mean is the mean of the stored values.
    pub fn check(&self) -> Result<()> {
        if self.per_game_values.is_empty() {
            return Err(Error::validation("record has per-game values", format!("{} {} is empty", self.model, self.solver_id)));
        }
        let recomputed = mean(&self.per_game_values);
        if (recomputed - self.mean_leader_value).abs() > 1e-12 {
            return Err(Error::validation(
                "mean equals mean of per-game values",
                format!("stored {} recomputed {}", self.mean_leader_value, recomputed),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub stream_scheme: String,
    pub config: serde_json::Value,
    /// Columns of the reference layout that this crate does not produce.
    #[serde(default)]
    pub absent_columns: Vec<String>,
    pub records: Vec<ExperimentRecord>,
}

impl ExperimentReport {
    fn new<C: Serialize>(experiment: &str, config: &C) -> Self {
        Self {
            experiment: experiment.to_string(),
            stream_scheme: STREAM_SCHEME.to_string(),
            config: serde_json::to_value(config).expect("configs serialize"),
            absent_columns: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn find(&self, n: usize, m: usize, model: &str, solver_id: &str) -> Option<&ExperimentRecord> {
        self.records
            .iter()
            .find(|r| r.n == n && r.m == m && r.model == model && r.solver_id == solver_id)
    }

    pub fn check(&self) -> Result<()> {
        self.records.iter().try_for_each(ExperimentRecord::check)
    }

    pub fn to_json(&self) -> String {
        crate::datagen::io::to_json(self)
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SennErrorConfig {
    pub benchmark: BenchmarkSpec,
    pub models: Vec<BehaviorModel>,
    pub setup: SennSetup,
    pub test_size: usize,
    pub record_wall_clock: bool,
}

impl SennErrorConfig {
    pub fn desk(seed: u64) -> Self {
        Self {
            benchmark: BenchmarkSpec::desk_scale(seed),
            models: BehaviorModel::bounded_defaults().to_vec(),
            setup: SennSetup::default(),
            test_size: 1000,
            record_wall_clock: false,
        }
    }

    pub fn paper(seed: u64) -> Self {
        Self {
            benchmark: BenchmarkSpec::paper_scale(seed),
            ..Self::desk(seed)
        }
    }
}

/// Trains one network per game and model and reports its error on fresh test
/// strategies. `per_game_values` holds the per-game test MAE.
pub fn run_senn_error(config: &SennErrorConfig) -> Result<ExperimentReport> {
    config.setup.validate()?;
    if config.test_size == 0 {
        return Err(Error::Config("test_size is 0: nothing to measure the error on".into()));
    }
    if config.models.is_empty() {
        return Err(Error::Config("no behavior models selected".into()));
    }
    let root = config.benchmark.seed;
    let games = gen_benchmark_suite(&config.benchmark)?;
    let mut report = ExperimentReport::new("senn_error", config);

    for cell in cells(&games) {
        let (n, m) = (cell[0].n, cell[0].m);
        for model in &config.models {
            let start = Instant::now();
            let mut maes = Vec::with_capacity(cell.len());
            for bg in cell {
                let mae = (|| {
                    let fitted = fit_for(root, bg, model, &config.setup)?;
                    let mut rng = rng_from_seed(model_seed(root, "test-data", model, bg));
                    let (test, _) = gen_training_set_with_stats(&bg.game, model, config.test_size, config.setup.max_support, &mut rng)?;
                    evaluate_mae(&fitted.network, &test)
                })()
                .map_err(|e| e.context(cell_context(n, m, model, "network error")))?;
                log::info!("senn error n={n} m={m} {model} game {}: {mae:.5}", bg.index);
                maes.push(mae);
            }
            let mut rec = ExperimentRecord::new(n, m, model.to_string(), "senn", maes, cell.iter().map(|g| g.seed).collect());
            rec.senn_mae = Some(rec.mean_leader_value);
            if config.record_wall_clock {
                rec.wall_clock_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            report.records.push(rec);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffConfig {
    pub benchmark: BenchmarkSpec,
    pub models: Vec<BehaviorModel>,
    pub solvers: Vec<Solver>,
    /// Shared by every solver; its `seed` is overwritten per run from the
    /// common schedule.
    pub evolution: EvolutionConfig,
    pub setup: SennSetup,
    pub repeats: usize,
    pub record_wall_clock: bool,
}

/// Desk-scale evolution: population 50, 200 generations.
pub fn desk_evolution() -> EvolutionConfig {
    EvolutionConfig {
        population_size: 50,
        generations: 200,
        ..EvolutionConfig::default()
    }
}

impl PayoffConfig {
    pub fn desk(seed: u64) -> Self {
        Self {
            benchmark: BenchmarkSpec::desk_scale(seed),
            models: BehaviorModel::bounded_defaults().to_vec(),
            solvers: Solver::ALL.to_vec(),
            evolution: desk_evolution(),
            setup: SennSetup::default(),
            repeats: 1,
            record_wall_clock: false,
        }
    }

    pub fn paper(seed: u64) -> Self {
        Self {
            benchmark: BenchmarkSpec::paper_scale(seed),
            evolution: EvolutionConfig::default(),
            ..Self::desk(seed)
        }
    }

    fn validate(&self) -> Result<()> {
        self.evolution.validate()?;
        if self.repeats == 0 {
            return Err(Error::invalid("repeats", "must be at least 1"));
        }
        if self.models.is_empty() || self.solvers.is_empty() {
            return Err(Error::Config("select at least one model and one solver".into()));
        }
        if self.solvers.contains(&Solver::Nesg) {
            self.setup.validate()?;
        }
        Ok(())
    }
}

/// Runs every solver on every game, then scores each returned strategy
/// exactly against the true behavior model.
pub fn run_payoff_comparison(config: &PayoffConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let root = config.benchmark.seed;
    let games = gen_benchmark_suite(&config.benchmark)?;
    let mut report = ExperimentReport::new("payoff_comparison", config);
    report.absent_columns.push("C2016".into());

    for cell in cells(&games) {
        let (n, m) = (cell[0].n, cell[0].m);
        // The rational-follower search ignores the model, so it runs once per game.
        let mut easg_runs: Vec<Vec<EvolutionOutcome>> = Vec::new();
        let mut easg_ms = 0.0;
        if config.solvers.contains(&Solver::Easg) {
            let start = Instant::now();
            for bg in cell {
                let runs = (0..config.repeats)
                    .map(|r| evolve(&bg.game, &ExactEvaluator::rational(), &seeded(&config.evolution, root, bg, r)))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| e.context(cell_context(n, m, &"rational", "EASG")))?;
                easg_runs.push(runs);
            }
            easg_ms = start.elapsed().as_secs_f64() * 1e3;
        }

        for model in &config.models {
            for &solver in &config.solvers {
                let start = Instant::now();
                let mut values = Vec::new();
                let mut maes = Vec::new();
                for (gi, bg) in cell.iter().enumerate() {
                    let result: Result<()> = (|| {
                        let outcomes = match solver {
                            Solver::Easg => easg_runs[gi].clone(),
                            Solver::EasgBr => (0..config.repeats)
                                .map(|r| evolve(&bg.game, &ExactEvaluator::new(*model), &seeded(&config.evolution, root, bg, r)))
                                .collect::<Result<Vec<_>>>()?,
                            Solver::Nesg => {
                                let fitted = fit_for(root, bg, model, &config.setup)?;
                                maes.push(fitted.report.final_mae);
                                let eval = senn_evaluator(fitted.network, &bg.game)?;
                                (0..config.repeats)
                                    .map(|r| evolve(&bg.game, &eval, &seeded(&config.evolution, root, bg, r)))
                                    .collect::<Result<Vec<_>>>()?
                            }
                        };
                        for out in outcomes {
                            values.push(exact_leader_value(&bg.game, &out.best, model)?);
                        }
                        Ok(())
                    })();
                    result.map_err(|e| e.context(cell_context(n, m, model, solver.label())))?;
                }
                log::info!("payoffs n={n} m={m} {model} {}: {:.4}", solver.label(), mean(&values));
                let seeds = cell
                    .iter()
                    .flat_map(|bg| std::iter::repeat(bg.seed).take(config.repeats))
                    .collect();
                let mut rec = ExperimentRecord::new(n, m, model.to_string(), solver.id(), values, seeds);
                if solver == Solver::Nesg {
                    rec.senn_mae = Some(mean(&maes));
                }
                if config.record_wall_clock {
                    let own = start.elapsed().as_secs_f64() * 1e3;
                    rec.wall_clock_ms = Some(if solver == Solver::Easg { easg_ms } else { own });
                }
                report.records.push(rec);
            }
        }
    }
    Ok(report)
}

fn seeded(base: &EvolutionConfig, root: u64, bg: &BenchmarkGame, repeat: usize) -> EvolutionConfig {
    EvolutionConfig {
        seed: evolution_seed(root, bg, repeat),
        ..base.clone()
    }
}

/// Groups consecutive games of the same `(n, m)` cell.
fn cells(games: &[BenchmarkGame]) -> impl Iterator<Item = &[BenchmarkGame]> {
    games.chunk_by(|a, b| a.n == b.n && a.m == b.m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    pub benchmark: BenchmarkSpec,
    /// Model the exact and learned evaluators target.
    pub model: BehaviorModel,
    pub solvers: Vec<Solver>,
    pub evolution: EvolutionConfig,
    pub setup: SennSetup,
}

impl TimingConfig {
    pub fn desk(seed: u64) -> Self {
        Self {
            benchmark: BenchmarkSpec {
                games_per_pair: 1,
                ..BenchmarkSpec::desk_scale(seed)
            },
            model: BehaviorModel::quantal(crate::behavior::DEFAULT_LAMBDA).expect("default lambda is valid"),
            solvers: Solver::ALL.to_vec(),
            evolution: desk_evolution(),
            setup: SennSetup::default(),
        }
    }

    pub fn paper(seed: u64) -> Self {
        Self {
            benchmark: BenchmarkSpec {
                games_per_pair: 1,
                ..BenchmarkSpec::paper_scale(seed)
            },
            evolution: EvolutionConfig::default(),
            ..Self::desk(seed)
        }
    }
}

/// One row of the timing table. Times are averaged over the games of a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub solver: String,
    pub n: usize,
    pub m: usize,
    pub total_ms: f64,
    /// Time inside the evaluator only.
    pub eval_ms: f64,
    pub evaluations: usize,
    pub eval_us_per_individual: f64,
    pub best_fitness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub report: ExperimentReport,
    pub rows: Vec<TimingRow>,
}

impl TimingReport {
    pub fn row(&self, solver: &str, n: usize, m: usize) -> Option<&TimingRow> {
        self.rows.iter().find(|r| r.solver == solver && r.n == n && r.m == m)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::parse("timing csv", e.to_string()))?;
        }
        w.flush().map_err(|e| Error::parse("timing csv", e.to_string()))?;
        Ok(())
    }
}

/// Times each solver single-threaded. Every measured run is preceded by a
/// one-generation warm-up that is not counted. NESG appears twice: `nesg`
/// excludes network fitting, `nesg_with_training` includes it.
pub fn run_timing(config: &TimingConfig) -> Result<TimingReport> {
    let evo = EvolutionConfig {
        parallel: false,
        ..config.evolution.clone()
    };
    evo.validate()?;
    if config.solvers.contains(&Solver::Nesg) {
        config.setup.validate()?;
    }
    let root = config.benchmark.seed;
    let games = gen_benchmark_suite(&config.benchmark)?;
    let mut report = ExperimentReport::new("timing", config);
    let mut rows = Vec::new();
    let model = config.model;

    for cell in cells(&games) {
        let (n, m) = (cell[0].n, cell[0].m);
        for &solver in &config.solvers {
            let mut acc = TimingAcc::default();
            let mut acc_trained = TimingAcc::default();
            for bg in cell {
                let cfg = seeded(&evo, root, bg, 0);
                let timed = |eval: &dyn crate::evolution::Evaluator| -> Result<(EvolutionOutcome, f64)> {
                    let warm = EvolutionConfig { generations: 1, ..cfg.clone() };
                    evolve(&bg.game, eval, &warm)?;
                    let start = Instant::now();
                    let out = evolve(&bg.game, eval, &cfg)?;
                    Ok((out, start.elapsed().as_secs_f64() * 1e3))
                };
                let result: Result<()> = (|| {
                    match solver {
                        Solver::Easg => {
                            let (out, ms) = timed(&ExactEvaluator::rational())?;
                            acc.add(&bg.game, &out, ms, &model)?;
                        }
                        Solver::EasgBr => {
                            let (out, ms) = timed(&ExactEvaluator::new(model))?;
                            acc.add(&bg.game, &out, ms, &model)?;
                        }
                        Solver::Nesg => {
                            let fitted = fit_for(root, bg, &model, &config.setup)?;
                            let train_ms = fitted.train_ms;
                            let eval = senn_evaluator(fitted.network, &bg.game)?;
                            let (out, ms) = timed(&eval)?;
                            acc.add(&bg.game, &out, ms, &model)?;
                            acc_trained.add(&bg.game, &out, ms + train_ms, &model)?;
                        }
                    }
                    Ok(())
                })();
                result.map_err(|e| e.context(cell_context(n, m, &model, solver.label())))?;
            }
            rows.push(acc.row(solver.id(), n, m));
            if solver == Solver::Nesg {
                rows.push(acc_trained.row("nesg_with_training", n, m));
            }
        }
    }

    for row in &rows {
        let mut rec = ExperimentRecord::new(
            row.n,
            row.m,
            model.to_string(),
            &row.solver,
            vec![row.best_fitness],
            games.iter().filter(|g| g.n == row.n && g.m == row.m).map(|g| g.seed).collect(),
        );
        rec.wall_clock_ms = Some(row.total_ms);
        report.records.push(rec);
    }
    Ok(TimingReport { report, rows })
}

#[derive(Default)]
struct TimingAcc {
    runs: usize,
    total_ms: f64,
    eval_ms: f64,
    evaluations: usize,
    value: f64,
}

impl TimingAcc {
    fn add(&mut self, game: &Game, out: &EvolutionOutcome, total_ms: f64, model: &BehaviorModel) -> Result<()> {
        self.runs += 1;
        self.total_ms += total_ms;
        self.eval_ms += out.total_eval_ms();
        self.evaluations += out.total_evaluations();
        self.value += exact_leader_value(game, &out.best, model)?;
        Ok(())
    }

    fn row(&self, solver: &str, n: usize, m: usize) -> TimingRow {
        let runs = self.runs.max(1) as f64;
        TimingRow {
            solver: solver.to_string(),
            n,
            m,
            total_ms: self.total_ms / runs,
            eval_ms: self.eval_ms / runs,
            evaluations: self.evaluations / self.runs.max(1),
            eval_us_per_individual: if self.evaluations == 0 {
                0.0
            } else {
                self.eval_ms * 1e3 / self.evaluations as f64
            },
            best_fitness: self.value / runs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_bench(seed: u64) -> BenchmarkSpec {
        BenchmarkSpec {
            steps_list: vec![1],
            targets_list: vec![4],
            games_per_pair: 2,
            seed,
        }
    }

    fn tiny_setup() -> SennSetup {
        SennSetup {
            train_size: 200,
            train: TrainConfig {
                max_epochs: 20,
                ..TrainConfig::default()
            },
            ..SennSetup::default()
        }
    }

    #[test]
    fn solver_names_round_trip() {
        for s in Solver::ALL {
            assert_eq!(s.id().parse::<Solver>().unwrap(), s);
        }
        assert!("c2016".parse::<Solver>().is_err());
    }

    #[test]
    fn zero_training_examples_is_a_config_error() {
        let mut cfg = SennErrorConfig::desk(1);
        cfg.setup.train_size = 0;
        assert!(matches!(run_senn_error(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn senn_error_report_shape() {
        let cfg = SennErrorConfig {
            benchmark: tiny_bench(3),
            models: vec![BehaviorModel::quantal(0.8).unwrap()],
            setup: tiny_setup(),
            test_size: 50,
            record_wall_clock: false,
        };
        let report = run_senn_error(&cfg).unwrap();
        assert_eq!(report.records.len(), 1);
        let rec = &report.records[0];
        assert_eq!(rec.per_game_values.len(), 2);
        assert_eq!(rec.senn_mae, Some(rec.mean_leader_value));
        assert!(rec.wall_clock_ms.is_none());
        report.check().unwrap();
        assert_eq!(report, run_senn_error(&cfg).unwrap());
    }

    #[test]
    fn payoff_comparison_shares_games_and_seeds() {
        let cfg = PayoffConfig {
            benchmark: tiny_bench(5),
            models: vec![BehaviorModel::anchoring(0.5).unwrap()],
            solvers: Solver::ALL.to_vec(),
            evolution: EvolutionConfig {
                population_size: 10,
                generations: 5,
                ..EvolutionConfig::default()
            },
            setup: tiny_setup(),
            repeats: 2,
            record_wall_clock: false,
        };
        let report = run_payoff_comparison(&cfg).unwrap();
        report.check().unwrap();
        assert_eq!(report.records.len(), 3);
        assert_eq!(report.absent_columns, vec!["C2016".to_string()]);
        let seeds: Vec<_> = report.records.iter().map(|r| r.seeds.clone()).collect();
        assert!(seeds.iter().all(|s| s == &seeds[0] && s.len() == 4));
        assert!(report.find(4, 1, "at:0.5", "nesg").unwrap().senn_mae.is_some());
        assert_eq!(report.config["evolution"]["population_size"], 10);
    }

    #[test]
    fn timing_rows_cover_every_solver() {
        let cfg = TimingConfig {
            benchmark: BenchmarkSpec {
                games_per_pair: 1,
                ..tiny_bench(2)
            },
            evolution: EvolutionConfig {
                population_size: 8,
                generations: 3,
                ..EvolutionConfig::default()
            },
            setup: tiny_setup(),
            ..TimingConfig::desk(2)
        };
        let t = run_timing(&cfg).unwrap();
        let names: Vec<_> = t.rows.iter().map(|r| r.solver.as_str()).collect();
        assert_eq!(names, ["easg", "easg_br", "nesg", "nesg_with_training"]);
        assert!(t.rows.iter().all(|r| r.total_ms >= 0.0 && r.eval_ms >= 0.0));
        assert!(t.row("nesg_with_training", 4, 1).unwrap().total_ms >= t.row("nesg", 4, 1).unwrap().total_ms);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 5);
    }
}
