//! Generates the small benchmark grid and writes it to a directory.
//!
//! Usage: `cargo run --example benchmark_games [OUT_DIR] [SEED]`

use std::path::PathBuf;

use nesg::datagen::io::save_game;
use nesg::datagen::{gen_benchmark_suite, unit_range, BenchmarkSpec};

fn main() -> nesg::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "target/benchmark-games".into()));
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let spec = BenchmarkSpec::desk_scale(seed);
    let games = gen_benchmark_suite(&spec)?;
    for bg in &games {
        let (lo, hi) = unit_range(bg.n, bg.m);
        let (worst, best) = bg.game.leader_payoff_range();
        println!(
            "{:<20} units {:>2} (range {lo}..={hi})  leader payoffs [{worst:+.3}, {best:+.3}]",
            bg.file_name(),
            bg.game.num_units()
        );
        save_game(&out.join(bg.file_name()), &bg.game)?;
    }
    println!("{} games written to {}", games.len(), out.display());
    Ok(())
}
