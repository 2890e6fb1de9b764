//! EASG on a random game, with the per-generation history as CSV on stdout.
//!
//! Usage: `cargo run --release --example evolve_easg [TARGETS] [STEPS] [SEED]`

use nesg::datagen::gen_benchmark_game;
use nesg::evolution::write_history_csv;
use nesg::rng::stream;
use nesg::{evolve, exact_leader_value, BehaviorModel, EvolutionConfig, ExactEvaluator};

fn main() -> nesg::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let n = *args.first().unwrap_or(&8) as usize;
    let m = *args.get(1).unwrap_or(&1) as usize;
    let seed = *args.get(2).unwrap_or(&0);

    let game = gen_benchmark_game(n, m, &mut stream(seed, "evolve-example", &[]))?;
    let config = EvolutionConfig {
        population_size: 50,
        generations: 200,
        seed,
        ..EvolutionConfig::default()
    };
    let outcome = evolve(&game, &ExactEvaluator::rational(), &config)?;

    write_history_csv(&outcome.history, false, std::io::stdout().lock())?;
    eprintln!("best value against a rational attacker: {:.4}", outcome.best_fitness);
    eprintln!("support size of the best strategy: {}", outcome.best.len());
    for model in BehaviorModel::bounded_defaults() {
        eprintln!("  same strategy against {model}: {:.4}", exact_leader_value(&game, &outcome.best, &model)?);
    }
    Ok(())
}
