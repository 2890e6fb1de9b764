//! How each follower model responds to the same leader strategy.
//!
//! Usage: `cargo run --example behavior_models [MODEL...]`, where a model is
//! written as `rational`, `at:0.5`, `qr:0.8` or `pt:0.64,2.25,0.88,0.88`.

use nesg::behavior::{follower_response, pt_value, pt_weight};
use nesg::datagen::{gen_benchmark_game, sample_mixed_strategy};
use nesg::rng::stream;
use nesg::{coverage_profile, exact_leader_value, BehaviorModel, FollowerResponse};

fn main() -> nesg::Result<()> {
    let mut models: Vec<BehaviorModel> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<nesg::Result<_>>()?;
    if models.is_empty() {
        models.push(BehaviorModel::Rational);
        models.extend(BehaviorModel::bounded_defaults());
    }

    let mut rng = stream(7, "behavior-example", &[]);
    let game = gen_benchmark_game(6, 1, &mut rng)?;
    let strategy = sample_mixed_strategy(&game, 3, &mut rng)?;
    let coverage = coverage_profile(&game, &strategy)?;
    println!("coverage: {:.3?}", coverage.step(0));

    for model in &models {
        let value = exact_leader_value(&game, &strategy, model)?;
        match follower_response(&game, &coverage, model)? {
            FollowerResponse::Target(t) => println!("{model:<24} attacks #{}  leader gets {value:.4}", t + 1),
            FollowerResponse::Distribution(q) => println!("{model:<24} attacks with {q:.3?}  leader gets {value:.4}"),
        }
    }

    println!("\nprospect theory shapes (default parameters):");
    for x in [-1.0, -0.5, 0.5, 1.0] {
        println!("  V({x:+.1}) = {:+.4}", pt_value(x, 0.88, 0.88, 2.25));
    }
    for p in [0.1, 0.5, 0.9] {
        println!("  pi({p}) = {:.4}", pt_weight(p, 0.64)?);
    }
    Ok(())
}
