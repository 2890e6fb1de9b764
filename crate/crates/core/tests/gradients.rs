mod common;

use common::{masked_weights, max_gradient_error};
use nesg::datagen::{gen_benchmark_game, gen_training_set};
use nesg::rng::rng_from_seed;
use nesg::senn::{adam_step, split_validation, train, AdamConfig, AdamState, TrainingExample};
use nesg::{BehaviorModel, SennNetwork, TrainConfig};
use rand::Rng;

fn random_batch(n: usize, m: usize, size: usize, rng: &mut impl Rng) -> Vec<TrainingExample> {
    (0..size)
        .map(|_| TrainingExample {
            input: (0..n * m).map(|_| rng.gen::<f64>()).collect(),
            label: rng.gen_range(-0.9..0.9),
        })
        .collect()
}

#[test]
fn analytic_gradients_match_finite_differences() {
    let mut rng = rng_from_seed(11);
    for case in 0..50 {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=2);
        let net = SennNetwork::build(n, m, &mut rng).unwrap();
        let batch = random_batch(n, m, 8, &mut rng);
        let (err, param) = max_gradient_error(&net, &batch, 1e-6);
        assert!(err < 1e-4, "case {case} (n={n}, m={m}): {param:?} relative error {err}");
    }
}

#[test]
fn masked_weights_stay_zero_under_adam() {
    let mut rng = rng_from_seed(12);
    for _ in 0..10 {
        let (n, m) = (rng.gen_range(2..=8), 2);
        let mut net = SennNetwork::build(n, m, &mut rng).unwrap();
        let mut state = AdamState::new(&net, AdamConfig { learning_rate: 0.05, ..AdamConfig::default() });
        assert!(masked_weights(&net).iter().all(|&w| w == 0.0));
        for _ in 0..100 {
            let batch = random_batch(n, m, 16, &mut rng);
            let (_, grads) = net.loss_and_gradient(&batch).unwrap();
            adam_step(&mut net, &mut state, &grads).unwrap();
        }
        assert!(masked_weights(&net).iter().all(|&w| w == 0.0));
    }
}

#[test]
fn other_steps_do_not_influence_a_block() {
    // Changing the inputs of step 1 must leave step 0's block activations
    // untouched, which shows up as identical outputs when the later layers
    // only see step 0.
    let mut rng = rng_from_seed(13);
    let n = 8;
    let mut net = SennNetwork::build(n, 2, &mut rng).unwrap();
    let sizes = net.layer_sizes();
    let h = sizes[1] / 2;
    for out in 0..sizes[2] {
        for input in h..sizes[1] {
            net.set_param(nesg::senn::Param::Weight { layer: 1, out, input }, 0.0).unwrap();
        }
    }
    let mut x: Vec<f64> = (0..2 * n).map(|_| rng.gen()).collect();
    let before = net.forward(&x).unwrap();
    for v in &mut x[n..] {
        *v = rng.gen();
    }
    assert_eq!(net.forward(&x).unwrap(), before);
}

#[test]
fn training_returns_the_best_validation_snapshot() {
    let mut rng = rng_from_seed(14);
    let game = gen_benchmark_game(8, 1, &mut rng).unwrap();
    let data = gen_training_set(&game, &BehaviorModel::quantal(0.8).unwrap(), 1500, &mut rng).unwrap();
    let (fit, val) = split_validation(&data, 0.2).unwrap();
    let net = SennNetwork::build(8, 1, &mut rng).unwrap();
    let cfg = TrainConfig { max_epochs: 60, patience: 60, ..TrainConfig::default() };
    let (best, report) = train(net, fit, val, &cfg).unwrap();

    // A snapshot is only replaced by a strictly better one.
    let mut record = f64::INFINITY;
    let mut snapshots = Vec::new();
    for r in &report.loss_curve {
        if r.val_mse < record - cfg.min_delta {
            record = r.val_mse;
            snapshots.push(r.val_mse);
        }
    }
    assert!(snapshots.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(report.best_val_mse, record);
    let min = report.loss_curve.iter().map(|r| r.val_mse).fold(f64::INFINITY, f64::min);
    assert!(min >= record - cfg.min_delta);

    let (val_mse, _) = best.loss_and_gradient(val).unwrap();
    assert!((val_mse - report.best_val_mse).abs() < 1e-12);
    assert!(report.loss_curve.first().unwrap().train_mse > report.loss_curve.last().unwrap().train_mse);
}

#[test]
fn training_is_deterministic() {
    let mut rng = rng_from_seed(15);
    let game = gen_benchmark_game(4, 2, &mut rng).unwrap();
    let data = gen_training_set(&game, &BehaviorModel::anchoring(0.5).unwrap(), 400, &mut rng).unwrap();
    let (fit, val) = split_validation(&data, 0.25).unwrap();
    let net = SennNetwork::build(4, 2, &mut rng).unwrap();
    let cfg = TrainConfig { max_epochs: 20, seed: 3, ..TrainConfig::default() };
    let a = train(net.clone(), fit, val, &cfg).unwrap();
    let b = train(net, fit, val, &cfg).unwrap();
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
}
