//! Fits a strategy evaluation network to one benchmark game.
//!
//! Usage: `cargo run --release --example train_senn [TARGETS] [STEPS] [MODEL]`

use nesg::datagen::{gen_benchmark_game, gen_training_set};
use nesg::rng::stream;
use nesg::senn::{evaluate_mae, split_validation, train};
use nesg::{BehaviorModel, SennNetwork, TrainConfig};

fn main() -> nesg::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(8);
    let m: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let model: BehaviorModel = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(BehaviorModel::quantal(0.8)?);

    let game = gen_benchmark_game(n, m, &mut stream(1, "train-example/game", &[]))?;
    let data = gen_training_set(&game, &model, 5000, &mut stream(1, "train-example/data", &[]))?;
    let test = gen_training_set(&game, &model, 1000, &mut stream(1, "train-example/test", &[]))?;
    let (fit, val) = split_validation(&data, 0.1)?;

    let net = SennNetwork::build(n, m, &mut stream(1, "train-example/init", &[]))?;
    println!("layers {:?}, {} trainable parameters", net.layer_sizes(), net.params().len());
    let (net, report) = train(net, fit, val, &TrainConfig::default())?;

    for rec in report.loss_curve.iter().step_by(25) {
        println!("epoch {:>4}  train mse {:.6}  val mse {:.6}", rec.epoch, rec.train_mse, rec.val_mse);
    }
    println!("best epoch {} of {}", report.best_epoch, report.epochs_run);
    println!("{model} test MAE: {:.4}", evaluate_mae(&net, &test)?);
    Ok(())
}
