//! Seven-host packet inspection network: three inspection units, one step.
//!
//! Loads the game and strategy from `examples/data`, prints the coverage of
//! every host and the defender's payoff if each host is attacked.

use std::path::Path;

use nesg::datagen::io::{load_game, load_strategy};
use nesg::game::leader_payoff;
use nesg::{coverage_profile, exact_leader_value, BehaviorModel};

fn main() -> nesg::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let game = load_game(&data.join("fig1_game.json"))?;
    let strategy = load_strategy(&data.join("fig1_strategy.json"), Some(&game))?;
    let coverage = coverage_profile(&game, &strategy)?;

    println!("host  coverage  defender payoff if attacked");
    for t in 0..game.num_targets() {
        println!("#{:<4} {:>8.2}  {:>8.3}", t + 1, coverage.get(0, t), leader_payoff(&game, &coverage, t)?);
    }

    let host5 = leader_payoff(&game, &coverage, 4)?;
    assert!((host5 + 0.21).abs() < 1e-12);
    println!("\nattack on #5 costs the defender {host5:.2}");
    println!("against a rational attacker: {:.3}", exact_leader_value(&game, &strategy, &BehaviorModel::Rational)?);
    Ok(())
}
