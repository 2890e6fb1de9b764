//! Shared helpers for the integration tests: an independent brute-force
//! leader value, a finite-difference gradient check and small fixtures.

#![allow(dead_code)]

use nesg::behavior::AnchorPoint;
use nesg::senn::{Param, TrainingExample};
use nesg::{BehaviorModel, Game, MixedStrategy, Payoffs, PureStrategy, SennNetwork};

/// Leader value computed from scratch, one target at a time, without any of
/// the crate's coverage or response code.
pub fn naive_leader_value(game: &Game, strategy: &MixedStrategy, model: &BehaviorModel) -> f64 {
    let n = game.num_targets();
    let m = game.num_steps();
    let pay = game.payoffs();

    // coverage[s][t]: total probability of pure strategies touching t at step s
    let mut coverage = vec![vec![0.0; n]; m];
    for (pure, p) in strategy.support() {
        for s in 0..m {
            for t in 0..n {
                if (0..pure.num_units()).any(|u| pure.target(u, s) == t) {
                    coverage[s][t] += p;
                }
            }
        }
    }
    let success = |cov: &Vec<Vec<f64>>, t: usize| (0..m).fold(1.0, |acc, s| acc * (1.0 - cov[s][t]));
    let leader = |t: usize| {
        let p = success(&coverage, t);
        p * pay[t].leader_penalty + (1.0 - p) * pay[t].leader_reward
    };
    let follower_with = |p: f64, t: usize| p * pay[t].follower_reward + (1.0 - p) * pay[t].follower_penalty;
    let argmax = |score: &dyn Fn(usize) -> f64| {
        let mut best = 0;
        for t in 1..n {
            let (a, b) = (score(t), score(best));
            if a > b + 1e-9 || ((a - b).abs() <= 1e-9 && leader(t) > leader(best) + 1e-9) {
                best = t;
            }
        }
        best
    };

    match *model {
        BehaviorModel::Rational => leader(argmax(&|t| follower_with(success(&coverage, t), t))),
        BehaviorModel::Anchoring { delta, anchor } => {
            let perceived: Vec<Vec<f64>> = coverage
                .iter()
                .map(|row| row.iter().map(|c| (1.0 - delta) * c + delta / n as f64).collect())
                .collect();
            let t = match anchor {
                AnchorPoint::Coverage => argmax(&|t| follower_with(success(&perceived, t), t)),
                AnchorPoint::Outcome => {
                    argmax(&|t| follower_with((1.0 - delta) * success(&coverage, t) + delta * 0.5, t))
                }
            };
            leader(t)
        }
        BehaviorModel::Quantal { lambda } => {
            let w: Vec<f64> = (0..n).map(|t| (lambda * follower_with(success(&coverage, t), t)).exp()).collect();
            let z: f64 = w.iter().sum();
            (0..n).map(|t| w[t] / z * leader(t)).sum()
        }
        BehaviorModel::Prospect(pp) => {
            let v = |x: f64| if x < 0.0 { -pp.theta * (-x).powf(pp.beta) } else { x.powf(pp.alpha) };
            let pi = |p: f64| {
                let a = p.powf(pp.gamma);
                a / (a + (1.0 - p).powf(pp.gamma)).powf(1.0 / pp.gamma)
            };
            leader(argmax(&|t| {
                let p = success(&coverage, t);
                pi(p) * v(pay[t].follower_reward) + pi(1.0 - p) * v(pay[t].follower_penalty)
            }))
        }
    }
}

/// Largest relative error between analytic and central-difference gradients
/// over every trainable parameter. Relative error uses a denominator floored
/// at 1e-6 so vanishing gradients are compared absolutely.
pub fn max_gradient_error(net: &SennNetwork, batch: &[TrainingExample], step: f64) -> (f64, Param) {
    let (_, grads) = net.loss_and_gradient(batch).unwrap();
    let mut worst = (0.0, net.params()[0]);
    let mut probe = net.clone();
    for p in net.params() {
        let base = net.param(p);
        probe.set_param(p, base + step).unwrap();
        let up = probe.loss_and_gradient(batch).unwrap().0;
        probe.set_param(p, base - step).unwrap();
        let down = probe.loss_and_gradient(batch).unwrap().0;
        probe.set_param(p, base).unwrap();
        let numeric = (up - down) / (2.0 * step);
        let analytic = net.gradient_of(&grads, p);
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6);
        if rel > worst.0 {
            worst = (rel, p);
        }
    }
    worst
}

/// Every weight the block mask disconnects.
pub fn masked_weights(net: &SennNetwork) -> Vec<f64> {
    let sizes = net.layer_sizes();
    let mut out = Vec::new();
    for (layer, w) in net.weights().iter().enumerate() {
        for o in 0..sizes[layer + 1] {
            for i in 0..sizes[layer] {
                if !net.connected(layer, o, i) {
                    out.push(w[o * sizes[layer] + i]);
                }
            }
        }
    }
    out
}

/// The seven-host packet inspection example.
pub fn fig1() -> (Game, MixedStrategy) {
    let payoffs = (0..7)
        .map(|t| Payoffs::new(0.0, if t == 4 { -0.3 } else { -0.5 }, 0.5, -0.5))
        .collect();
    let game = Game::new(1, 3, payoffs).unwrap();
    let pure = |ts: [usize; 3]| PureStrategy::from_rows(&ts.map(|t| vec![t])).unwrap();
    let strategy = MixedStrategy::new(vec![(pure([0, 1, 5]), 0.4), (pure([0, 1, 6]), 0.3), (pure([2, 3, 4]), 0.3)]).unwrap();
    (game, strategy)
}

/// Two targets, one step, one unit, all payoffs ±1. The best the leader can
/// do against a rational follower is 0, at coverage (0.5, 0.5).
pub fn symmetric_two_target() -> Game {
    Game::new(1, 1, vec![Payoffs::new(1.0, -1.0, 1.0, -1.0); 2]).unwrap()
}
