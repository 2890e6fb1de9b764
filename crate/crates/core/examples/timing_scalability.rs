//! Per-evaluation cost of the exact evaluators against the network as the
//! number of targets grows. Writes CSV to stdout.
//!
//! Usage: `cargo run --release --example timing_scalability [MAX_TARGETS]`

use nesg::datagen::BenchmarkSpec;
use nesg::harness::{run_timing, TimingConfig};
use nesg::EvolutionConfig;

fn main() -> nesg::Result<()> {
    let max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(64);
    let targets: Vec<usize> = (2..=7).map(|i| 1 << i).filter(|&n| n <= max).collect();

    let mut config = TimingConfig::desk(0);
    config.benchmark = BenchmarkSpec {
        steps_list: vec![1],
        targets_list: targets,
        games_per_pair: 1,
        seed: 0,
    };
    config.evolution = EvolutionConfig {
        population_size: 30,
        generations: 50,
        ..config.evolution
    };
    config.setup.train_size = 2000;

    let report = run_timing(&config)?;
    report.write_csv(std::io::stdout().lock())
}
