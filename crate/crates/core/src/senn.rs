//! Strategy evaluation network.
//!
//! A four-layer perceptron mapping a coverage-encoded leader strategy to an
//! estimated leader payoff. Layer widths are `m·n`, `m·⌈n/4⌉`, `⌈n/4⌉` and 1.
//! The first hidden layer is split into one block of `⌈n/4⌉` units per time
//! step, and each block only sees the `n` coverage inputs of its own step.
//! The block structure is stored as a dense weight matrix whose off-block
//! entries are held at zero. All activations are `tanh`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::Evaluator;
use crate::game::{coverage_profile, Game, MixedStrategy};
use crate::rng::rng_from_seed;

/// One training or test sample: step-major coverage and the exact leader value.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingExample {
    pub input: Vec<f64>,
    pub label: f64,
}

/// Coverage of `strategy`, flattened step-major (`s * n + t`).
pub fn encode_strategy(game: &Game, strategy: &MixedStrategy) -> Result<Vec<f64>> {
    Ok(coverage_profile(game, strategy)?.into_values())
}

/// Identifies one trainable parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Weight { layer: usize, out: usize, input: usize },
    Bias { layer: usize, out: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SennNetwork {
    n: usize,
    m: usize,
    sizes: [usize; 4],
    // per layer, row-major outputs x inputs
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

/// Parameter gradients, shaped like the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

fn block_width(n: usize) -> usize {
    n.div_ceil(4)
}

impl SennNetwork {
    pub fn layer_sizes_for(n: usize, m: usize) -> [usize; 4] {
        let h = block_width(n);
        [m * n, m * h, h, 1]
    }

    /// All-zero network with the right shape.
    pub fn zeros(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::invalid("n, m", "network needs at least one target and one step"));
        }
        let sizes = Self::layer_sizes_for(n, m);
        Ok(Self {
            n,
            m,
            sizes,
            weights: (0..3).map(|l| vec![0.0; sizes[l] * sizes[l + 1]]).collect(),
            biases: (0..3).map(|l| vec![0.0; sizes[l + 1]]).collect(),
        })
    }

    /// Random network: unmasked weights uniform in `±sqrt(6 / (fan_in + fan_out))`
    /// over each unit's actual connections, biases zero.
    pub fn build<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        let mut net = Self::zeros(n, m)?;
        let h = block_width(n);
        for layer in 0..3 {
            let (fan_in, fan_out) = if layer == 0 {
                (n, h)
            } else {
                (net.sizes[layer], net.sizes[layer + 1])
            };
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let inputs = net.sizes[layer];
            for out in 0..net.sizes[layer + 1] {
                for input in 0..inputs {
                    if net.connected(layer, out, input) {
                        net.weights[layer][out * inputs + input] = rng.gen_range(-limit..=limit);
                    }
                }
            }
        }
        Ok(net)
    }

    pub fn num_targets(&self) -> usize {
        self.n
    }

    pub fn num_steps(&self) -> usize {
        self.m
    }

    pub fn layer_sizes(&self) -> [usize; 4] {
        self.sizes
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    /// Whether weight `(layer, out, input)` exists in the block structure.
    pub fn connected(&self, layer: usize, out: usize, input: usize) -> bool {
        layer != 0 || out / block_width(self.n) == input / self.n
    }

    /// Every trainable (unmasked) parameter.
    pub fn params(&self) -> Vec<Param> {
        let mut ids = Vec::new();
        for layer in 0..3 {
            for out in 0..self.sizes[layer + 1] {
                for input in 0..self.sizes[layer] {
                    if self.connected(layer, out, input) {
                        ids.push(Param::Weight { layer, out, input });
                    }
                }
                ids.push(Param::Bias { layer, out });
            }
        }
        ids
    }

    pub fn param(&self, p: Param) -> f64 {
        match p {
            Param::Weight { layer, out, input } => self.weights[layer][out * self.sizes[layer] + input],
            Param::Bias { layer, out } => self.biases[layer][out],
        }
    }

    /// The entry of `grads` belonging to `p`.
    pub fn gradient_of(&self, grads: &Gradients, p: Param) -> f64 {
        match p {
            Param::Weight { layer, out, input } => grads.weights[layer][out * self.sizes[layer] + input],
            Param::Bias { layer, out } => grads.biases[layer][out],
        }
    }

    /// Sets a parameter. Masked weights cannot be set to anything but zero.
    pub fn set_param(&mut self, p: Param, value: f64) -> Result<()> {
        match p {
            Param::Weight { layer, out, input } => {
                if !self.connected(layer, out, input) && value != 0.0 {
                    return Err(Error::validation("masked weights are zero", format!("{p:?}")));
                }
                let inputs = self.sizes[layer];
                self.weights[layer][out * inputs + input] = value;
            }
            Param::Bias { layer, out } => self.biases[layer][out] = value,
        }
        Ok(())
    }

    fn check_input(&self, input: &[f64]) -> Result<()> {
        if input.len() != self.sizes[0] {
            return Err(Error::DimensionMismatch(format!(
                "network expects {} inputs, got {}",
                self.sizes[0],
                input.len()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, input: &[f64]) -> Result<f64> {
        self.check_input(input)?;
        SCRATCH.with(|cell| {
            let mut scratch = cell.borrow_mut();
            if scratch.as_ref().is_none_or(|t| !t.fits(&self.sizes)) {
                *scratch = Some(Trace::new(&self.sizes));
            }
            Ok(self.forward_into(input, scratch.as_mut().expect("just filled")))
        })
    }

    fn forward_into(&self, input: &[f64], trace: &mut Trace) -> f64 {
        let (n, h) = (self.n, block_width(self.n));
        let inputs = self.sizes[0];
        // block layer: only the n inputs of the unit's own step contribute
        for (out, a) in trace.acts[0].iter_mut().enumerate() {
            let lo = (out / h) * n;
            let row = &self.weights[0][out * inputs + lo..out * inputs + lo + n];
            let z = self.biases[0][out] + dot(row, &input[lo..lo + n]);
            *a = tanh(z);
        }
        for layer in 1..3 {
            let (prev, rest) = trace.acts.split_at_mut(layer);
            let x = &prev[layer - 1];
            let ins = self.sizes[layer];
            for (out, a) in rest[0].iter_mut().enumerate() {
                let z = self.biases[layer][out] + dot(&self.weights[layer][out * ins..(out + 1) * ins], x);
                *a = tanh(z);
            }
        }
        trace.acts[2][0]
    }

    pub fn zero_gradients(&self) -> Gradients {
        Gradients {
            weights: self.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            biases: self.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    /// Mean squared error over `batch` and its exact gradient.
    pub fn loss_and_gradient(&self, batch: &[TrainingExample]) -> Result<(f64, Gradients)> {
        let mut grads = self.zero_gradients();
        let mut trace = Trace::new(&self.sizes);
        let loss = self.accumulate_gradient(batch, &mut grads, &mut trace)?;
        Ok((loss, grads))
    }

    fn accumulate_gradient(&self, batch: &[TrainingExample], grads: &mut Gradients, trace: &mut Trace) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::invalid("batch", "empty batch"));
        }
        for g in grads.weights.iter_mut().chain(grads.biases.iter_mut()) {
            g.fill(0.0);
        }
        let scale = 1.0 / batch.len() as f64;
        let (n, h) = (self.n, block_width(self.n));
        let mut loss = 0.0;
        for ex in batch {
            self.check_input(&ex.input)?;
            let y = self.forward_into(&ex.input, trace);
            let err = y - ex.label;
            loss += err * err;

            // output layer
            let d_out = 2.0 * err * scale * (1.0 - y * y);
            grads.biases[2][0] += d_out;
            for (i, &a) in trace.acts[1].iter().enumerate() {
                grads.weights[2][i] += d_out * a;
            }
            // second hidden layer
            let ins1 = self.sizes[1];
            for j in 0..self.sizes[2] {
                let a = trace.acts[1][j];
                let d = d_out * self.weights[2][j] * (1.0 - a * a);
                trace.delta1[j] = d;
                grads.biases[1][j] += d;
                for (i, &x) in trace.acts[0].iter().enumerate() {
                    grads.weights[1][j * ins1 + i] += d * x;
                }
            }
            // block layer
            let ins0 = self.sizes[0];
            for j in 0..self.sizes[1] {
                let a = trace.acts[0][j];
                let back: f64 = (0..self.sizes[2]).map(|k| trace.delta1[k] * self.weights[1][k * ins1 + j]).sum();
                let d = back * (1.0 - a * a);
                grads.biases[0][j] += d;
                let lo = (j / h) * n;
                for i in lo..lo + n {
                    grads.weights[0][j * ins0 + i] += d * ex.input[i];
                }
            }
        }
        Ok(loss * scale)
    }

    fn check_gradients(&self, grads: &Gradients) -> Result<()> {
        let same = |a: &[Vec<f64>], b: &[Vec<f64>]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.len() == y.len());
        if !same(&self.weights, &grads.weights) || !same(&self.biases, &grads.biases) {
            return Err(Error::DimensionMismatch("gradients do not match the network shape".into()));
        }
        Ok(())
    }
}

thread_local! {
    // reused activation buffers, so evaluation does not allocate
    static SCRATCH: std::cell::RefCell<Option<Trace>> = const { std::cell::RefCell::new(None) };
}

/// `tanh` through a single `expm1`, accurate to a few ulps and about twice as
/// fast as the libm version.
#[inline]
fn tanh(z: f64) -> f64 {
    if z.abs() > 20.0 {
        return z.signum();
    }
    let e = (2.0 * z).exp_m1();
    e / (e + 2.0)
}

/// Dot product with eight independent partial sums, which lets the compiler
/// vectorize it.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().min(b.len());
    let (a, b) = (&a[..len], &b[..len]);
    let mut acc = [0.0; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for i in 0..8 {
            acc[i] += x[i] * y[i];
        }
    }
    acc.iter().sum::<f64>() + tail
}

struct Trace {
    acts: [Vec<f64>; 3],
    delta1: Vec<f64>,
}

impl Trace {
    fn fits(&self, sizes: &[usize; 4]) -> bool {
        self.acts[0].len() == sizes[1] && self.acts[1].len() == sizes[2] && self.acts[2].len() == sizes[3]
    }

    fn new(sizes: &[usize; 4]) -> Self {
        Self {
            acts: [vec![0.0; sizes[1]], vec![0.0; sizes[2]], vec![0.0; sizes[3]]],
            delta1: vec![0.0; sizes[2]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Adam moment estimates for every parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    pub step: u64,
    pub first: Gradients,
    pub second: Gradients,
}

impl AdamState {
    pub fn new(net: &SennNetwork, config: AdamConfig) -> Self {
        Self {
            config,
            step: 0,
            first: net.zero_gradients(),
            second: net.zero_gradients(),
        }
    }
}

/// One bias-corrected Adam update. Masked weights are never touched.
pub fn adam_step(net: &mut SennNetwork, state: &mut AdamState, grads: &Gradients) -> Result<()> {
    net.check_gradients(grads)?;
    net.check_gradients(&state.first)?;
    net.check_gradients(&state.second)?;
    state.step += 1;
    let AdamConfig { learning_rate, beta1, beta2, epsilon } = state.config;
    let c1 = 1.0 - beta1.powi(state.step as i32);
    let c2 = 1.0 - beta2.powi(state.step as i32);
    let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
        *m = beta1 * *m + (1.0 - beta1) * g;
        *v = beta2 * *v + (1.0 - beta2) * g * g;
        *p -= learning_rate * (*m / c1) / ((*v / c2).sqrt() + epsilon);
    };
    for layer in 0..3 {
        let inputs = net.sizes[layer];
        for idx in 0..net.weights[layer].len() {
            if !net.connected(layer, idx / inputs, idx % inputs) {
                continue;
            }
            update(
                &mut net.weights[layer][idx],
                grads.weights[layer][idx],
                &mut state.first.weights[layer][idx],
                &mut state.second.weights[layer][idx],
            );
        }
        for idx in 0..net.biases[layer].len() {
            update(
                &mut net.biases[layer][idx],
                grads.biases[layer][idx],
                &mut state.first.biases[layer][idx],
                &mut state.second.biases[layer][idx],
            );
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub adam: AdamConfig,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Epochs without a validation improvement larger than `min_delta` before stopping.
    pub patience: usize,
    pub min_delta: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            adam: AdamConfig::default(),
            batch_size: 32,
            max_epochs: 500,
            patience: 20,
            min_delta: 1e-5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_mse: f64,
    pub val_mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainReport {
    /// Validation MAE of the returned (best) snapshot.
    pub final_mae: f64,
    pub best_val_mse: f64,
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub loss_curve: Vec<EpochRecord>,
}

/// Minibatch Adam training with early stopping on validation MSE.
/// Returns the snapshot with the lowest validation error.
pub fn train(
    mut net: SennNetwork,
    train_set: &[TrainingExample],
    val_set: &[TrainingExample],
    config: &TrainConfig,
) -> Result<(SennNetwork, TrainReport)> {
    if train_set.is_empty() || val_set.is_empty() {
        return Err(Error::invalid("dataset", "training and validation sets must be non-empty"));
    }
    if config.batch_size == 0 {
        return Err(Error::invalid("batch_size", "must be at least 1"));
    }
    for ex in train_set.iter().chain(val_set) {
        net.check_input(&ex.input)?;
    }
    let mut rng = rng_from_seed(config.seed);
    let mut adam = AdamState::new(&net, config.adam);
    let mut grads = net.zero_gradients();
    let mut trace = Trace::new(&net.sizes);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut batch: Vec<TrainingExample> = Vec::with_capacity(config.batch_size);

    let mut best = (net.clone(), mse(&net, val_set), 0usize);
    let mut curve = Vec::new();
    let mut stale = 0;
    let mut epochs_run = 0;
    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(config.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| train_set[i].clone()));
            net.accumulate_gradient(&batch, &mut grads, &mut trace)?;
            adam_step(&mut net, &mut adam, &grads)?;
        }
        epochs_run = epoch;
        let val_mse = mse(&net, val_set);
        curve.push(EpochRecord {
            epoch,
            train_mse: mse(&net, train_set),
            val_mse,
        });
        if val_mse < best.1 - config.min_delta {
            best = (net.clone(), val_mse, epoch);
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience {
                break;
            }
        }
    }
    let (net, best_val_mse, best_epoch) = best;
    let final_mae = evaluate_mae(&net, val_set)?;
    Ok((
        net,
        TrainReport {
            final_mae,
            best_val_mse,
            best_epoch,
            epochs_run,
            loss_curve: curve,
        },
    ))
}

fn mse(net: &SennNetwork, data: &[TrainingExample]) -> f64 {
    let mut trace = Trace::new(&net.sizes);
    data.iter()
        .map(|ex| {
            let e = net.forward_into(&ex.input, &mut trace) - ex.label;
            e * e
        })
        .sum::<f64>()
        / data.len() as f64
}

/// Mean absolute difference between network output and label.
pub fn evaluate_mae(net: &SennNetwork, dataset: &[TrainingExample]) -> Result<f64> {
    if dataset.is_empty() {
        return Err(Error::invalid("dataset", "empty dataset"));
    }
    let mut trace = Trace::new(&net.sizes);
    let mut total = 0.0;
    for ex in dataset {
        net.check_input(&ex.input)?;
        total += (net.forward_into(&ex.input, &mut trace) - ex.label).abs();
    }
    Ok(total / dataset.len() as f64)
}

/// Splits off the trailing `fraction` of `examples` for validation (at least one).
pub fn split_validation(examples: &[TrainingExample], fraction: f64) -> Result<(&[TrainingExample], &[TrainingExample])> {
    if examples.len() < 2 {
        return Err(Error::invalid("dataset", "need at least two examples to split"));
    }
    let val = ((examples.len() as f64 * fraction).round() as usize).clamp(1, examples.len() - 1);
    Ok(examples.split_at(examples.len() - val))
}

/// Fitness function backed by a trained network.
#[derive(Debug, Clone)]
pub struct SennEvaluator {
    net: SennNetwork,
}

/// Wraps `net` as an evaluator for `game`, checking that the shapes agree.
pub fn senn_evaluator(net: SennNetwork, game: &Game) -> Result<SennEvaluator> {
    if net.n != game.num_targets() || net.m != game.num_steps() {
        return Err(Error::DimensionMismatch(format!(
            "network built for {} targets x {} steps, game has {} x {}",
            net.n,
            net.m,
            game.num_targets(),
            game.num_steps()
        )));
    }
    Ok(SennEvaluator { net })
}

impl SennEvaluator {
    pub fn network(&self) -> &SennNetwork {
        &self.net
    }
}

impl Evaluator for SennEvaluator {
    fn evaluate(&self, game: &Game, strategy: &MixedStrategy) -> Result<f64> {
        self.net.forward(&encode_strategy(game, strategy)?)
    }
}

/// On-disk network layout.
#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct NetworkFile {
    pub n: usize,
    pub m: usize,
    pub layers: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl From<&SennNetwork> for NetworkFile {
    fn from(net: &SennNetwork) -> Self {
        Self {
            n: net.n,
            m: net.m,
            layers: net.sizes.to_vec(),
            weights: net.weights.clone(),
            biases: net.biases.clone(),
        }
    }
}

impl TryFrom<NetworkFile> for SennNetwork {
    type Error = Error;

    fn try_from(f: NetworkFile) -> Result<Self> {
        let mut net = SennNetwork::zeros(f.n, f.m)?;
        if f.layers != net.sizes {
            return Err(Error::validation(
                "layer sizes [mn, m*ceil(n/4), ceil(n/4), 1]",
                format!("file lists {:?}, expected {:?}", f.layers, net.sizes),
            ));
        }
        let shape_ok = f.weights.len() == 3
            && f.biases.len() == 3
            && (0..3).all(|l| f.weights[l].len() == net.weights[l].len() && f.biases[l].len() == net.biases[l].len());
        if !shape_ok {
            return Err(Error::validation("weight shapes", "weight or bias arrays have the wrong length"));
        }
        let inputs = net.sizes[0];
        for (idx, &w) in f.weights[0].iter().enumerate() {
            if !net.connected(0, idx / inputs, idx % inputs) && w != 0.0 {
                return Err(Error::validation(
                    "masked weights are zero",
                    format!("first-layer weight {idx} is {w}"),
                ));
            }
        }
        net.weights = f.weights;
        net.biases = f.biases;
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn layer_sizes() {
        assert_eq!(SennNetwork::layer_sizes_for(16, 2), [32, 8, 4, 1]);
        assert_eq!(SennNetwork::layer_sizes_for(4, 1), [4, 1, 1, 1]);
        assert_eq!(SennNetwork::layer_sizes_for(7, 1), [7, 2, 2, 1]);
        let net = SennNetwork::build(16, 2, &mut rng_from_seed(1)).unwrap();
        assert_eq!(net.layer_sizes(), [32, 8, 4, 1]);
    }

    #[test]
    fn build_respects_mask_and_limits() {
        let net = SennNetwork::build(5, 3, &mut rng_from_seed(4)).unwrap();
        let inputs = net.sizes[0];
        let limit0 = (6.0 / (5.0 + 2.0f64)).sqrt();
        for (idx, &w) in net.weights[0].iter().enumerate() {
            if net.connected(0, idx / inputs, idx % inputs) {
                assert!(w.abs() <= limit0 && w != 0.0);
            } else {
                assert_eq!(w, 0.0);
            }
        }
        assert!(net.biases.iter().flatten().all(|&b| b == 0.0));
    }

    #[test]
    fn zero_network_outputs_zero() {
        let net = SennNetwork::zeros(6, 2).unwrap();
        assert_eq!(net.forward(&[0.3; 12]).unwrap(), 0.0);
        assert!(net.forward(&[0.3; 11]).is_err());
    }

    #[test]
    fn tanh_matches_libm() {
        for i in -300_000..=300_000 {
            let z = i as f64 * 1e-4;
            assert!((tanh(z) - z.tanh()).abs() <= 4.0 * f64::EPSILON * z.tanh().abs().max(1e-300) + 1e-300, "{z}");
        }
        assert_eq!(tanh(0.0), 0.0);
        assert_eq!(tanh(50.0), 1.0);
        assert_eq!(tanh(-50.0), -1.0);
    }

    #[test]
    fn hand_computed_forward() {
        // n = 2, m = 1: sizes [2, 1, 1, 1]
        let mut net = SennNetwork::zeros(2, 1).unwrap();
        net.weights = vec![vec![0.5, -1.0], vec![2.0], vec![-0.75]];
        net.biases = vec![vec![0.1], vec![-0.2], vec![0.3]];
        let x = [0.4, 0.9];
        let a1 = (0.1 + 0.5 * 0.4 - 1.0 * 0.9f64).tanh();
        let a2 = (-0.2 + 2.0 * a1).tanh();
        let y = (0.3 - 0.75 * a2).tanh();
        assert!((net.forward(&x).unwrap() - y).abs() < 1e-12);
    }

    #[test]
    fn output_stays_in_open_interval() {
        let mut rng = rng_from_seed(2);
        for _ in 0..50 {
            let net = SennNetwork::build(9, 2, &mut rng).unwrap();
            let input: Vec<f64> = (0..18).map(|_| rng.gen()).collect();
            let y = net.forward(&input).unwrap();
            assert!(y > -1.0 && y < 1.0);
        }
    }

    #[test]
    fn perfect_labels_give_zero_loss_and_gradient() {
        let net = SennNetwork::build(5, 2, &mut rng_from_seed(8)).unwrap();
        let mut rng = rng_from_seed(9);
        let batch: Vec<TrainingExample> = (0..6)
            .map(|_| {
                let input: Vec<f64> = (0..10).map(|_| rng.gen()).collect();
                let label = net.forward(&input).unwrap();
                TrainingExample { input, label }
            })
            .collect();
        let (loss, grads) = net.loss_and_gradient(&batch).unwrap();
        assert_eq!(loss, 0.0);
        assert!(grads.weights.iter().chain(&grads.biases).flatten().all(|&g| g == 0.0));
        assert!(net.loss_and_gradient(&[]).is_err());
    }

    #[test]
    fn adam_zero_gradient_leaves_parameters() {
        let mut net = SennNetwork::build(4, 2, &mut rng_from_seed(3)).unwrap();
        let before = net.clone();
        let mut state = AdamState::new(&net, AdamConfig::default());
        state.first.biases[0][0] = 0.5;
        state.second.biases[0][0] = 0.25;
        let zero = net.zero_gradients();
        adam_step(&mut net, &mut state, &zero).unwrap();
        // with nonzero moments the parameter moves; everything else stays put
        assert_eq!(net.weights, before.weights);
        assert!((state.first.biases[0][0] - 0.45).abs() < 1e-15);
        assert!((state.second.biases[0][0] - 0.25 * 0.999).abs() < 1e-15);

        let mut net = before.clone();
        let mut state = AdamState::new(&net, AdamConfig::default());
        adam_step(&mut net, &mut state, &zero).unwrap();
        assert_eq!(net, before);
    }

    #[test]
    fn adam_first_step_closed_form() {
        let mut net = SennNetwork::zeros(2, 1).unwrap();
        let mut state = AdamState::new(&net, AdamConfig::default());
        let mut g = net.zero_gradients();
        g.biases[2][0] = 0.37;
        g.biases[1][0] = -4.0;
        adam_step(&mut net, &mut state, &g).unwrap();
        assert!((net.biases[2][0] - (-1e-3 * 0.37 / (0.37 + 1e-8))).abs() < 1e-15);
        assert!((net.biases[1][0] - (1e-3 * 4.0 / (4.0 + 1e-8))).abs() < 1e-15);
        let wrong = SennNetwork::zeros(3, 1).unwrap().zero_gradients();
        assert!(adam_step(&mut net, &mut state, &wrong).is_err());
    }

    #[test]
    fn adam_two_steps_match_scalar_reference() {
        let (lr, b1, b2, eps) = (1e-3, 0.9, 0.999, 1e-8);
        let gs = [0.3, -0.7];
        let (mut p, mut m, mut v) = (0.25f64, 0.0f64, 0.0f64);
        for (t, g) in gs.iter().enumerate() {
            m = b1 * m + (1.0 - b1) * g;
            v = b2 * v + (1.0 - b2) * g * g;
            let mh = m / (1.0 - b1.powi(t as i32 + 1));
            let vh = v / (1.0 - b2.powi(t as i32 + 1));
            p -= lr * mh / (vh.sqrt() + eps);
        }

        let mut net = SennNetwork::zeros(2, 1).unwrap();
        net.weights[1][0] = 0.25;
        let mut state = AdamState::new(&net, AdamConfig::default());
        for g in gs {
            let mut grads = net.zero_gradients();
            grads.weights[1][0] = g;
            adam_step(&mut net, &mut state, &grads).unwrap();
        }
        assert!((net.weights[1][0] - p).abs() < 1e-12);
    }

    #[test]
    fn mae_examples() {
        let net = SennNetwork::build(3, 1, &mut rng_from_seed(5)).unwrap();
        let input = vec![0.2, 0.5, 0.9];
        let y = net.forward(&input).unwrap();
        let exact = [TrainingExample { input: input.clone(), label: y }];
        assert_eq!(evaluate_mae(&net, &exact).unwrap(), 0.0);
        let shifted: Vec<TrainingExample> = (0..5)
            .map(|i| {
                let input = vec![0.1 * i as f64, 0.3, 0.7];
                let label = net.forward(&input).unwrap() + 0.125;
                TrainingExample { input, label }
            })
            .collect();
        assert!((evaluate_mae(&net, &shifted).unwrap() - 0.125).abs() < 1e-12);
        assert!(evaluate_mae(&net, &[]).is_err());
    }

    #[test]
    fn split_keeps_tail_for_validation() {
        let data: Vec<TrainingExample> = (0..50)
            .map(|i| TrainingExample {
                input: vec![i as f64],
                label: 0.0,
            })
            .collect();
        let (tr, va) = split_validation(&data, 0.1).unwrap();
        assert_eq!((tr.len(), va.len()), (45, 5));
        assert_eq!(va[0].input[0], 45.0);
    }
}
