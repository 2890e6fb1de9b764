//! Solver comparison on a small grid: EASG, EASG_BR and NESG, all judged
//! against the follower's true behavior model.
//!
//! Usage: `cargo run --release --example nesg_vs_easg [MODEL] [SEED]`

use nesg::datagen::BenchmarkSpec;
use nesg::harness::table::payoff_table;
use nesg::harness::{run_payoff_comparison, PayoffConfig};
use nesg::BehaviorModel;

fn main() -> nesg::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let model: BehaviorModel = args.first().map(|s| s.parse()).transpose()?.unwrap_or(BehaviorModel::quantal(0.8)?);
    let seed = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0);

    let config = PayoffConfig {
        benchmark: BenchmarkSpec {
            steps_list: vec![1],
            targets_list: vec![4, 8],
            games_per_pair: 2,
            seed,
        },
        models: vec![model],
        ..PayoffConfig::desk(seed)
    };
    let report = run_payoff_comparison(&config)?;
    print!("{}", payoff_table(&report));
    for rec in report.records.iter().filter(|r| r.senn_mae.is_some()) {
        println!("n={} m={}: network validation MAE {:.4}", rec.n, rec.m, rec.senn_mae.unwrap_or(f64::NAN));
    }
    Ok(())
}
