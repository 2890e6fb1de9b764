//! Command-line front end. `run` parses arguments, dispatches and maps any
//! error to a diagnostic on stderr and a nonzero exit status.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use super::table::{payoff_table, senn_error_table, timing_table};
use super::{
    desk_evolution, run_payoff_comparison, run_senn_error, run_timing, ExperimentReport, PayoffConfig, SennErrorConfig,
    Solver, TimingConfig, DEFAULT_SEED,
};
use crate::behavior::{exact_leader_value, BehaviorModel};
use crate::datagen::io::{
    load_dataset, load_game, load_network, load_strategy, save_dataset, save_game, save_network, save_strategy,
    write_file, write_json,
};
use crate::datagen::{gen_benchmark_suite, gen_dataset, BenchmarkSpec, DatasetSpec};
use crate::error::{Error, Result};
use crate::evolution::{evolve, write_history_csv, EvolutionConfig, ExactEvaluator};
use crate::rng::{derive_seed, rng_from_seed, STREAM_SCHEME};
use crate::senn::{senn_evaluator, split_validation, train, SennNetwork, TrainConfig};

#[derive(Debug, Parser)]
#[command(name = "nesg", version, about = "Leader strategies against boundedly rational attackers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a grid of random benchmark games plus a manifest of their seeds.
    GenGames(GenGames),
    /// Sample random strategies for one game and label them with exact leader values.
    GenData(GenData),
    /// Fit a strategy evaluation network to a labeled dataset.
    Train(TrainCmd),
    /// Search for a leader strategy with EASG, EASG_BR or NESG.
    Solve(Solve),
    /// Print the exact leader value of a strategy under one or more follower models.
    Score(Score),
    /// Network test error per grid cell and model.
    Table1(Table1),
    /// Mean leader payoff per grid cell, model and solver.
    Table2(Table2),
    /// Solver wall-clock and per-evaluation times per grid cell.
    Timing(Timing),
}

#[derive(Debug, Args)]
struct Grid {
    /// Target counts, comma separated [default: 4,8,16; paper scale 4,...,128].
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<usize>>,
    /// Step counts, comma separated [default: 1,2; paper scale 1,2,4].
    #[arg(long, value_delimiter = ',')]
    steps: Option<Vec<usize>>,
    /// Games per (targets, steps) pair [default: 3; paper scale 5].
    #[arg(long)]
    per_pair: Option<usize>,
    /// Start from the full grid and evolution settings instead of the small default.
    #[arg(long)]
    paper_scale: bool,
}

impl Grid {
    fn spec(&self, seed: u64) -> BenchmarkSpec {
        let base = if self.paper_scale {
            BenchmarkSpec::paper_scale(seed)
        } else {
            BenchmarkSpec::desk_scale(seed)
        };
        BenchmarkSpec {
            steps_list: self.steps.clone().unwrap_or(base.steps_list),
            targets_list: self.targets.clone().unwrap_or(base.targets_list),
            games_per_pair: self.per_pair.unwrap_or(base.games_per_pair),
            seed,
        }
    }
}

#[derive(Debug, Args)]
struct Evo {
    /// JSON file with an evolution config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Population size [default: 50; paper scale 100].
    #[arg(long)]
    pop: Option<usize>,
    /// Generations [default: 200; paper scale 1000].
    #[arg(long)]
    gens: Option<usize>,
    /// Mutation probability [default: 0.5].
    #[arg(long = "mut")]
    mutation: Option<f64>,
    /// Crossover probability [default: 0.8].
    #[arg(long)]
    cx: Option<f64>,
    /// Probability that the fitter tournament entrant wins [default: 0.9].
    #[arg(long)]
    pressure: Option<f64>,
    /// Individuals copied unchanged into the next generation [default: 2].
    #[arg(long)]
    elite: Option<usize>,
    /// Largest support of any individual [default: 20].
    #[arg(long)]
    max_support: Option<usize>,
    /// Evaluate each generation on all cores; results are identical either way.
    #[arg(long)]
    parallel: bool,
}

impl Evo {
    fn build(&self, paper_scale: bool) -> Result<EvolutionConfig> {
        let mut cfg = match &self.config {
            Some(path) => serde_json::from_str(&crate::datagen::io::read_to_string(path)?)
                .map_err(|e| Error::parse(path.display().to_string(), e))?,
            None if paper_scale => EvolutionConfig::default(),
            None => desk_evolution(),
        };
        let EvolutionConfig {
            population_size,
            generations,
            mutation_rate,
            crossover_rate,
            selection_pressure,
            elite_size,
            max_support,
            ..
        } = &mut cfg;
        set(population_size, self.pop);
        set(generations, self.gens);
        set(mutation_rate, self.mutation);
        set(crossover_rate, self.cx);
        set(selection_pressure, self.pressure);
        set(elite_size, self.elite);
        set(max_support, self.max_support);
        cfg.parallel |= self.parallel;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

#[derive(Debug, Args)]
struct Fit {
    /// Labeled strategies generated per game for fitting, validation tail included.
    #[arg(long, default_value_t = 5000)]
    train_size: usize,
    /// Fraction of the examples held out for early stopping.
    #[arg(long, default_value_t = 0.1)]
    val_fraction: f64,
    /// Epoch cap.
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    /// Epochs without validation improvement before stopping.
    #[arg(long, default_value_t = 20)]
    patience: usize,
    #[arg(long, default_value_t = 32)]
    batch: usize,
    /// Adam learning rate.
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
}

impl Fit {
    fn train_config(&self) -> TrainConfig {
        let mut cfg = TrainConfig {
            batch_size: self.batch,
            max_epochs: self.epochs,
            patience: self.patience,
            ..TrainConfig::default()
        };
        cfg.adam.learning_rate = self.lr;
        cfg
    }

    fn setup(&self) -> super::SennSetup {
        super::SennSetup {
            train_size: self.train_size,
            validation_fraction: self.val_fraction,
            train: self.train_config(),
            ..super::SennSetup::default()
        }
    }
}

#[derive(Debug, Args)]
struct GenGames {
    #[command(flatten)]
    grid: Grid,
    /// Root seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GenData {
    /// Game JSON file.
    #[arg(long)]
    game: PathBuf,
    /// Follower model used for labels: rational, at:DELTA, qr:LAMBDA or pt:GAMMA,THETA,ALPHA,BETA.
    #[arg(long, default_value = "qr:0.8")]
    model: BehaviorModel,
    /// Number of labeled strategies.
    #[arg(long, default_value_t = 5000)]
    count: usize,
    /// Largest support of a sampled strategy.
    #[arg(long, default_value_t = 5)]
    max_support: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output CSV; metadata goes to the same path with `.meta.json` appended.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TrainCmd {
    /// Dataset CSV written by gen-data.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    fit: Fit,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output network JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV of per-epoch training and validation loss.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Solve {
    /// Game JSON file.
    #[arg(long)]
    game: PathBuf,
    /// easg (rational follower), easg_br (exact model, needs --model) or nesg (needs --net).
    #[arg(long)]
    solver: Solver,
    /// Follower model for easg_br.
    #[arg(long)]
    model: Option<BehaviorModel>,
    /// Trained network JSON for nesg.
    #[arg(long)]
    net: Option<PathBuf>,
    #[command(flatten)]
    evo: Evo,
    /// Use the full-scale evolution defaults (population 100, 1000 generations).
    #[arg(long)]
    paper_scale: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output strategy JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional per-generation history CSV.
    #[arg(long)]
    history: Option<PathBuf>,
    /// Record wall-clock times in the history; reruns are then no longer byte-identical.
    #[arg(long)]
    wall_clock: bool,
}

#[derive(Debug, Args)]
struct Score {
    /// Game JSON file.
    #[arg(long)]
    game: PathBuf,
    /// Strategy JSON file.
    #[arg(long)]
    strategy: PathBuf,
    /// Follower model; repeat for several [default: rational and the three bounded models].
    #[arg(long)]
    model: Vec<BehaviorModel>,
    /// Accepted for uniformity; scoring is deterministic.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Optional JSON file for the values.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Table1 {
    #[command(flatten)]
    grid: Grid,
    /// Follower model; repeat for several [default: at, qr, pt].
    #[arg(long)]
    model: Vec<BehaviorModel>,
    #[command(flatten)]
    fit: Fit,
    /// Fresh labeled strategies per game for measuring the error.
    #[arg(long, default_value_t = 1000)]
    test_size: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory for table1.json and table1.txt.
    #[arg(long)]
    out: PathBuf,
    /// Record wall-clock times in the report.
    #[arg(long)]
    wall_clock: bool,
}

#[derive(Debug, Args)]
struct Table2 {
    #[command(flatten)]
    grid: Grid,
    /// Follower model; repeat for several [default: at, qr, pt].
    #[arg(long)]
    model: Vec<BehaviorModel>,
    /// Solver; repeat for several [default: easg, easg_br, nesg].
    #[arg(long)]
    solver: Vec<Solver>,
    /// Independent evolutionary runs per game and solver.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[command(flatten)]
    evo: Evo,
    #[command(flatten)]
    fit: Fit,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory for table2.json and table2.txt.
    #[arg(long)]
    out: PathBuf,
    /// Record wall-clock times in the report.
    #[arg(long)]
    wall_clock: bool,
}

#[derive(Debug, Args)]
struct Timing {
    #[command(flatten)]
    grid: Grid,
    /// Follower model targeted by easg_br and nesg.
    #[arg(long, default_value = "qr:0.8")]
    model: BehaviorModel,
    /// Solver; repeat for several [default: easg, easg_br, nesg].
    #[arg(long)]
    solver: Vec<Solver>,
    #[command(flatten)]
    evo: Evo,
    #[command(flatten)]
    fit: Fit,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory for timing.csv, timing.json and timing.txt.
    #[arg(long)]
    out: PathBuf,
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            1
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::GenGames(c) => gen_games(c),
        Command::GenData(c) => gen_data(c),
        Command::Train(c) => train_cmd(c),
        Command::Solve(c) => solve(c),
        Command::Score(c) => score(c),
        Command::Table1(c) => table1(c),
        Command::Table2(c) => table2(c),
        Command::Timing(c) => timing(c),
    }
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    n: usize,
    m: usize,
    index: usize,
    seed: u64,
    units: usize,
}

#[derive(Serialize)]
struct Manifest {
    stream_scheme: &'static str,
    spec: BenchmarkSpec,
    games: Vec<ManifestEntry>,
}

fn gen_games(c: GenGames) -> Result<()> {
    let spec = c.grid.spec(c.seed);
    let games = gen_benchmark_suite(&spec)?;
    let mut entries = Vec::with_capacity(games.len());
    for bg in &games {
        save_game(&c.out.join(bg.file_name()), &bg.game)?;
        entries.push(ManifestEntry {
            file: bg.file_name(),
            n: bg.n,
            m: bg.m,
            index: bg.index,
            seed: bg.seed,
            units: bg.game.num_units(),
        });
    }
    write_json(
        &c.out.join("manifest.json"),
        &Manifest {
            stream_scheme: STREAM_SCHEME,
            spec,
            games: entries,
        },
    )?;
    println!("wrote {} games to {}", games.len(), c.out.display());
    Ok(())
}

#[derive(Serialize)]
struct DatasetMeta {
    stream_scheme: &'static str,
    game: String,
    targets: usize,
    steps: usize,
    model: BehaviorModel,
    count: usize,
    max_support: usize,
    seed: u64,
    /// Sampled pure strategies merged into an identical sibling.
    merged_duplicates: usize,
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn gen_data(c: GenData) -> Result<()> {
    let game = load_game(&c.game)?;
    let spec = DatasetSpec {
        max_support: c.max_support,
        ..DatasetSpec::new(c.count, c.model, c.seed)
    };
    let (examples, stats) = gen_dataset(&game, &spec)?;
    save_dataset(&c.out, game.num_targets(), game.num_steps(), &examples)?;
    write_json(
        &sidecar(&c.out, ".meta.json"),
        &DatasetMeta {
            stream_scheme: STREAM_SCHEME,
            game: c.game.display().to_string(),
            targets: game.num_targets(),
            steps: game.num_steps(),
            model: c.model,
            count: c.count,
            max_support: c.max_support,
            seed: c.seed,
            merged_duplicates: stats.merged_duplicates,
        },
    )?;
    println!("wrote {} examples to {}", examples.len(), c.out.display());
    Ok(())
}

fn train_cmd(c: TrainCmd) -> Result<()> {
    let data = load_dataset(&c.data)?;
    let (fit, val) = split_validation(&data.examples, c.fit.val_fraction)?;
    let net = SennNetwork::build(data.targets, data.steps, &mut rng_from_seed(derive_seed(c.seed, "net-init", &[])))?;
    let cfg = TrainConfig {
        seed: derive_seed(c.seed, "shuffle", &[]),
        ..c.fit.train_config()
    };
    let (net, report) = train(net, fit, val, &cfg)?;
    save_network(&c.out, &net)?;
    if let Some(path) = &c.log {
        let mut w = csv::Writer::from_writer(Vec::new());
        for rec in &report.loss_curve {
            w.serialize(rec).map_err(|e| Error::parse("loss curve", e))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::parse("loss curve", e))?;
        write_file(path, &bytes)?;
    }
    println!(
        "best epoch {} of {}, validation MAE {}",
        report.best_epoch, report.epochs_run, report.final_mae
    );
    Ok(())
}

fn solve(c: Solve) -> Result<()> {
    let game = load_game(&c.game)?;
    let cfg = EvolutionConfig {
        seed: c.seed,
        ..c.evo.build(c.paper_scale)?
    };
    let outcome = match c.solver {
        Solver::Easg => evolve(&game, &ExactEvaluator::rational(), &cfg)?,
        Solver::EasgBr => {
            let model = c
                .model
                .ok_or_else(|| Error::Config("easg_br needs --model".into()))?;
            evolve(&game, &ExactEvaluator::new(model), &cfg)?
        }
        Solver::Nesg => {
            let path = c.net.as_ref().ok_or_else(|| Error::Config("nesg needs --net".into()))?;
            let eval = senn_evaluator(load_network(path)?, &game)?;
            evolve(&game, &eval, &cfg)?
        }
    };
    save_strategy(&c.out, &outcome.best)?;
    if let Some(path) = &c.history {
        let mut buf = Vec::new();
        write_history_csv(&outcome.history, c.wall_clock, &mut buf)?;
        write_file(path, &buf)?;
    }
    println!("{} best fitness {}", c.solver.label(), outcome.best_fitness);
    Ok(())
}

#[derive(Serialize)]
struct ScoreLine {
    model: BehaviorModel,
    value: f64,
}

fn score(c: Score) -> Result<()> {
    let game = load_game(&c.game)?;
    let strategy = load_strategy(&c.strategy, Some(&game))?;
    let models = if c.model.is_empty() {
        let mut all = vec![BehaviorModel::Rational];
        all.extend(BehaviorModel::bounded_defaults());
        all
    } else {
        c.model
    };
    let mut lines = Vec::with_capacity(models.len());
    for model in models {
        let value = exact_leader_value(&game, &strategy, &model)?;
        println!("{model}\t{value}");
        lines.push(ScoreLine { model, value });
    }
    if let Some(path) = &c.out {
        write_json(path, &lines)?;
    }
    Ok(())
}

fn write_report(dir: &Path, stem: &str, report: &ExperimentReport, text: &str) -> Result<()> {
    write_file(&dir.join(format!("{stem}.json")), report.to_json().as_bytes())?;
    write_file(&dir.join(format!("{stem}.txt")), text.as_bytes())?;
    print!("{text}");
    Ok(())
}

fn table1(c: Table1) -> Result<()> {
    let base = if c.grid.paper_scale {
        SennErrorConfig::paper(c.seed)
    } else {
        SennErrorConfig::desk(c.seed)
    };
    let cfg = SennErrorConfig {
        benchmark: c.grid.spec(c.seed),
        models: if c.model.is_empty() { base.models } else { c.model },
        setup: c.fit.setup(),
        test_size: c.test_size,
        record_wall_clock: c.wall_clock,
    };
    let report = run_senn_error(&cfg)?;
    write_report(&c.out, "table1", &report, &senn_error_table(&report))
}

fn table2(c: Table2) -> Result<()> {
    let base = if c.grid.paper_scale {
        PayoffConfig::paper(c.seed)
    } else {
        PayoffConfig::desk(c.seed)
    };
    let cfg = PayoffConfig {
        benchmark: c.grid.spec(c.seed),
        models: if c.model.is_empty() { base.models } else { c.model },
        solvers: if c.solver.is_empty() { base.solvers } else { c.solver },
        evolution: c.evo.build(c.grid.paper_scale)?,
        setup: c.fit.setup(),
        repeats: c.repeats,
        record_wall_clock: c.wall_clock,
    };
    let report = run_payoff_comparison(&cfg)?;
    write_report(&c.out, "table2", &report, &payoff_table(&report))
}

fn timing(c: Timing) -> Result<()> {
    let base = if c.grid.paper_scale {
        TimingConfig::paper(c.seed)
    } else {
        TimingConfig::desk(c.seed)
    };
    let mut benchmark = c.grid.spec(c.seed);
    if c.grid.per_pair.is_none() {
        benchmark.games_per_pair = base.benchmark.games_per_pair;
    }
    let cfg = TimingConfig {
        benchmark,
        model: c.model,
        solvers: if c.solver.is_empty() { base.solvers } else { c.solver },
        evolution: c.evo.build(c.grid.paper_scale)?,
        setup: c.fit.setup(),
    };
    let report = run_timing(&cfg)?;
    let csv_path = c.out.join("timing.csv");
    if let Some(parent) = csv_path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    let file = File::create(&csv_path).map_err(|e| Error::Io {
        path: csv_path.clone(),
        source: e,
    })?;
    report.write_csv(BufWriter::new(file))?;
    write_json(&c.out.join("timing.json"), &report)?;
    let text = timing_table(&report);
    write_file(&c.out.join("timing.txt"), text.as_bytes())?;
    print!("{text}");
    Ok(())
}
