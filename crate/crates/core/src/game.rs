//! Game model, leader strategies, coverage and expected payoffs.
//!
//! Indices are 0-based throughout the library. The JSON file formats in
//! [`crate::datagen::io`] shift them to 1-based.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used for probability sums and payoff comparisons.
pub const TOLERANCE: f64 = 1e-9;

/// The four payoffs attached to one target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Payoffs {
    /// Leader payoff when the attacker is caught.
    #[serde(rename = "lr")]
    pub leader_reward: f64,
    /// Leader payoff when the attack succeeds.
    #[serde(rename = "lp")]
    pub leader_penalty: f64,
    /// Follower payoff when the attack succeeds.
    #[serde(rename = "fr")]
    pub follower_reward: f64,
    /// Follower payoff when caught.
    #[serde(rename = "fp")]
    pub follower_penalty: f64,
}

impl Payoffs {
    pub fn new(leader_reward: f64, leader_penalty: f64, follower_reward: f64, follower_penalty: f64) -> Self {
        Self {
            leader_reward,
            leader_penalty,
            follower_reward,
            follower_penalty,
        }
    }

    /// `lr > 0 > lp` and `fr > 0 > fp`.
    pub fn is_standard(&self) -> bool {
        self.leader_reward > 0.0
            && self.leader_penalty < 0.0
            && self.follower_reward > 0.0
            && self.follower_penalty < 0.0
    }

    fn is_finite(&self) -> bool {
        [
            self.leader_reward,
            self.leader_penalty,
            self.follower_reward,
            self.follower_penalty,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// An `m`-step security game over `n` targets with `k` leader units.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    num_targets: usize,
    num_steps: usize,
    num_units: usize,
    payoffs: Vec<Payoffs>,
    nonstandard_payoffs: bool,
}

impl Game {
    /// Builds a game. Payoffs outside the usual sign pattern are accepted
    /// with a warning and flagged via [`Game::nonstandard_payoffs`].
    pub fn new(num_steps: usize, num_units: usize, payoffs: Vec<Payoffs>) -> Result<Self> {
        let num_targets = payoffs.len();
        if num_targets == 0 {
            return Err(Error::validation("targets >= 1", "game has no targets"));
        }
        if num_steps == 0 {
            return Err(Error::validation("steps >= 1", "game has zero time steps"));
        }
        if num_units == 0 {
            return Err(Error::validation("units >= 1", "leader has zero units"));
        }
        if let Some(t) = payoffs.iter().position(|p| !p.is_finite()) {
            return Err(Error::validation(
                "finite payoffs",
                format!("target {} has a non-finite payoff", t + 1),
            ));
        }
        let nonstandard_payoffs = !payoffs.iter().all(Payoffs::is_standard);
        if nonstandard_payoffs {
            log::warn!("game payoffs do not follow lr > 0 > lp, fr > 0 > fp on every target");
        }
        Ok(Self {
            num_targets,
            num_steps,
            num_units,
            payoffs,
            nonstandard_payoffs,
        })
    }

    pub fn num_targets(&self) -> usize {
        self.num_targets
    }

    pub fn num_steps(&self) -> usize {
        self.num_steps
    }

    pub fn num_units(&self) -> usize {
        self.num_units
    }

    pub fn payoffs(&self) -> &[Payoffs] {
        &self.payoffs
    }

    pub fn payoff(&self, target: usize) -> Result<&Payoffs> {
        self.payoffs.get(target).ok_or(Error::IndexOutOfRange {
            what: "target",
            index: target,
            len: self.num_targets,
        })
    }

    /// True when some target breaks the benchmark sign convention.
    pub fn nonstandard_payoffs(&self) -> bool {
        self.nonstandard_payoffs
    }

    /// Smallest leader penalty and largest leader reward over all targets.
    pub fn leader_payoff_range(&self) -> (f64, f64) {
        self.payoffs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (
                lo.min(p.leader_penalty).min(p.leader_reward),
                hi.max(p.leader_reward).max(p.leader_penalty),
            )
        })
    }
}

/// A deterministic allocation: the target of every unit at every step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureStrategy {
    units: usize,
    steps: usize,
    // unit-major: entry u * steps + s
    targets: Vec<usize>,
}

impl PureStrategy {
    /// Builds a strategy from `allocation[u][s]`, the target of unit `u` at step `s`.
    pub fn from_rows(allocation: &[Vec<usize>]) -> Result<Self> {
        let units = allocation.len();
        if units == 0 {
            return Err(Error::DimensionMismatch("allocation has no unit rows".into()));
        }
        let steps = allocation[0].len();
        if steps == 0 {
            return Err(Error::DimensionMismatch("allocation has no steps".into()));
        }
        if let Some(u) = allocation.iter().position(|r| r.len() != steps) {
            return Err(Error::DimensionMismatch(format!(
                "unit row {} has {} steps, expected {}",
                u + 1,
                allocation[u].len(),
                steps
            )));
        }
        Ok(Self {
            units,
            steps,
            targets: allocation.concat(),
        })
    }

    pub fn from_flat(units: usize, steps: usize, targets: Vec<usize>) -> Result<Self> {
        if units == 0 || steps == 0 || targets.len() != units * steps {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot form a {}x{} allocation",
                targets.len(),
                units,
                steps
            )));
        }
        Ok(Self { units, steps, targets })
    }

    pub fn num_units(&self) -> usize {
        self.units
    }

    pub fn num_steps(&self) -> usize {
        self.steps
    }

    pub fn target(&self, unit: usize, step: usize) -> usize {
        self.targets[unit * self.steps + step]
    }

    pub fn set_target(&mut self, unit: usize, step: usize, target: usize) {
        self.targets[unit * self.steps + step] = target;
    }

    /// Targets visited by each unit, one row per unit.
    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.targets.chunks(self.steps)
    }

    /// Checks dimensions and target indices against `game`.
    pub fn validate_for(&self, game: &Game) -> Result<()> {
        if self.units != game.num_units() || self.steps != game.num_steps() {
            return Err(Error::DimensionMismatch(format!(
                "strategy is {}x{} (units x steps), game expects {}x{}",
                self.units,
                self.steps,
                game.num_units(),
                game.num_steps()
            )));
        }
        if let Some(&t) = self.targets.iter().find(|&&t| t >= game.num_targets()) {
            return Err(Error::IndexOutOfRange {
                what: "target",
                index: t,
                len: game.num_targets(),
            });
        }
        Ok(())
    }
}

/// A probability distribution over distinct pure strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    support: Vec<(PureStrategy, f64)>,
}

impl MixedStrategy {
    /// Builds a mixed strategy from `(pure, probability)` pairs.
    ///
    /// Repeated pure strategies are merged by summing their probabilities,
    /// keeping the position of the first occurrence. The merged probabilities
    /// must sum to one within [`TOLERANCE`].
    pub fn new(entries: Vec<(PureStrategy, f64)>) -> Result<Self> {
        Self::check_entries(&entries)?;
        let support = merge_duplicates(entries);
        let sum: f64 = support.iter().map(|(_, p)| p).sum();
        if (sum - 1.0).abs() > TOLERANCE {
            return Err(Error::validation(
                "probabilities sum to 1",
                format!("probabilities sum to {sum}"),
            ));
        }
        if let Some((_, p)) = support.iter().find(|(_, p)| *p > 1.0 + TOLERANCE) {
            return Err(Error::validation("probability in (0, 1]", format!("merged probability {p}")));
        }
        Ok(Self { support })
    }

    /// Builds a mixed strategy from positive weights, normalizing them to sum to one
    /// before merging duplicates.
    pub fn from_weights(entries: Vec<(PureStrategy, f64)>) -> Result<Self> {
        if entries.iter().any(|(_, w)| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::validation("positive weights", "weights must be finite and > 0"));
        }
        let total: f64 = entries.iter().map(|(_, w)| w).sum();
        let normalized = entries.into_iter().map(|(s, w)| (s, w / total)).collect::<Vec<_>>();
        Self::check_entries(&normalized)?;
        Ok(Self {
            support: merge_duplicates(normalized),
        })
    }

    pub fn pure(strategy: PureStrategy) -> Self {
        Self {
            support: vec![(strategy, 1.0)],
        }
    }

    fn check_entries(entries: &[(PureStrategy, f64)]) -> Result<()> {
        let first = entries
            .first()
            .ok_or_else(|| Error::validation("non-empty support", "mixed strategy has no entries"))?;
        let (units, steps) = (first.0.num_units(), first.0.num_steps());
        for (i, (s, p)) in entries.iter().enumerate() {
            if s.num_units() != units || s.num_steps() != steps {
                return Err(Error::DimensionMismatch(format!(
                    "support entry {} is {}x{}, entry 1 is {}x{}",
                    i + 1,
                    s.num_units(),
                    s.num_steps(),
                    units,
                    steps
                )));
            }
            if !(p.is_finite() && *p > 0.0 && *p <= 1.0 + TOLERANCE) {
                return Err(Error::validation(
                    "probability in (0, 1]",
                    format!("support entry {} has probability {}", i + 1, p),
                ));
            }
        }
        Ok(())
    }

    pub fn support(&self) -> &[(PureStrategy, f64)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn num_units(&self) -> usize {
        self.support[0].0.num_units()
    }

    pub fn num_steps(&self) -> usize {
        self.support[0].0.num_steps()
    }

    /// Mixes `self` with weight `w` and `other` with weight `1 - w`.
    pub fn mix(&self, other: &MixedStrategy, w: f64) -> Result<Self> {
        if !(w > 0.0 && w < 1.0) {
            return Err(Error::invalid("w", format!("mixing weight {w} not in (0, 1)")));
        }
        let entries = self
            .support
            .iter()
            .map(|(s, p)| (s.clone(), p * w))
            .chain(other.support.iter().map(|(s, p)| (s.clone(), p * (1.0 - w))))
            .collect();
        Self::new(entries)
    }

    /// Keeps the `max_support` most probable entries and renormalizes.
    /// Ties keep the earlier entry.
    pub fn truncated(mut self, max_support: usize) -> Self {
        let max_support = max_support.max(1);
        if self.support.len() <= max_support {
            return self;
        }
        let mut order: Vec<usize> = (0..self.support.len()).collect();
        order.sort_by(|&a, &b| self.support[b].1.total_cmp(&self.support[a].1).then(a.cmp(&b)));
        let mut keep = vec![false; self.support.len()];
        for &i in &order[..max_support] {
            keep[i] = true;
        }
        let mut idx = 0;
        self.support.retain(|_| {
            idx += 1;
            keep[idx - 1]
        });
        let total: f64 = self.support.iter().map(|(_, p)| p).sum();
        for (_, p) in &mut self.support {
            *p /= total;
        }
        self
    }

    /// Replaces the pure strategy at `index`, merging it into an existing entry
    /// if the replacement duplicates one.
    pub fn with_replaced(&self, index: usize, strategy: PureStrategy) -> Self {
        let mut entries = self.support.clone();
        entries[index].0 = strategy;
        Self {
            support: merge_duplicates(entries),
        }
    }

    pub fn validate_for(&self, game: &Game) -> Result<()> {
        for (s, _) in &self.support {
            s.validate_for(game)?;
        }
        Ok(())
    }
}

fn merge_duplicates(entries: Vec<(PureStrategy, f64)>) -> Vec<(PureStrategy, f64)> {
    let mut seen: HashMap<PureStrategy, usize> = HashMap::with_capacity(entries.len());
    let mut merged: Vec<(PureStrategy, f64)> = Vec::with_capacity(entries.len());
    for (s, p) in entries {
        match seen.get(&s) {
            Some(&i) => merged[i].1 += p,
            None => {
                seen.insert(s.clone(), merged.len());
                merged.push((s, p));
            }
        }
    }
    merged
}

/// Per-step, per-target probability that at least one unit guards the target.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageProfile {
    steps: usize,
    targets: usize,
    // step-major: entry s * targets + t
    values: Vec<f64>,
}

impl CoverageProfile {
    /// Builds a profile from step-major values, checking the `[0, 1]` range.
    pub fn from_values(steps: usize, targets: usize, values: Vec<f64>) -> Result<Self> {
        if steps == 0 || targets == 0 || values.len() != steps * targets {
            return Err(Error::DimensionMismatch(format!(
                "{} coverage values cannot form {} steps x {} targets",
                values.len(),
                steps,
                targets
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= -TOLERANCE && **v <= 1.0 + TOLERANCE)) {
            return Err(Error::validation("coverage in [0, 1]", format!("coverage value {v}")));
        }
        Ok(Self { steps, targets, values })
    }

    pub fn num_steps(&self) -> usize {
        self.steps
    }

    pub fn num_targets(&self) -> usize {
        self.targets
    }

    pub fn get(&self, step: usize, target: usize) -> f64 {
        self.values[step * self.targets + target]
    }

    pub fn step(&self, step: usize) -> &[f64] {
        &self.values[step * self.targets..(step + 1) * self.targets]
    }

    /// Step-major flattening: position `s * n + t` holds `c_s(t)`.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub(crate) fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            steps: self.steps,
            targets: self.targets,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn check_target(&self, target: usize) -> Result<()> {
        if target >= self.targets {
            return Err(Error::IndexOutOfRange {
                what: "target",
                index: target,
                len: self.targets,
            });
        }
        Ok(())
    }

    /// Probability that an attack on `target` meets no unit in any step.
    pub fn attack_success_prob(&self, target: usize) -> Result<f64> {
        self.check_target(target)?;
        Ok(self.success_prob_unchecked(target))
    }

    pub(crate) fn success_prob_unchecked(&self, target: usize) -> f64 {
        (0..self.steps)
            .map(|s| 1.0 - self.values[s * self.targets + target])
            .product()
    }

    /// Attack success probability for every target.
    pub fn attack_success_probs(&self) -> Vec<f64> {
        (0..self.targets).map(|t| self.success_prob_unchecked(t)).collect()
    }

    fn check_game(&self, game: &Game) -> Result<()> {
        if self.steps != game.num_steps() || self.targets != game.num_targets() {
            return Err(Error::DimensionMismatch(format!(
                "coverage is {} steps x {} targets, game is {} x {}",
                self.steps,
                self.targets,
                game.num_steps(),
                game.num_targets()
            )));
        }
        Ok(())
    }
}

/// Coverage of every target at every step under `strategy`.
pub fn coverage_profile(game: &Game, strategy: &MixedStrategy) -> Result<CoverageProfile> {
    strategy.validate_for(game)?;
    Ok(coverage_unchecked(game, strategy))
}

pub(crate) fn coverage_unchecked(game: &Game, strategy: &MixedStrategy) -> CoverageProfile {
    let (n, m) = (game.num_targets(), game.num_steps());
    let mut values = vec![0.0; n * m];
    // last support entry that covered (step, target); avoids double counting
    // when several units share a target
    let mut marked = vec![usize::MAX; n * m];
    for (i, (pure, p)) in strategy.support().iter().enumerate() {
        for row in pure.rows() {
            for (s, &t) in row.iter().enumerate() {
                let cell = s * n + t;
                if marked[cell] != i {
                    marked[cell] = i;
                    values[cell] += p;
                }
            }
        }
    }
    for v in &mut values {
        *v = v.min(1.0);
    }
    CoverageProfile {
        steps: m,
        targets: n,
        values,
    }
}

/// Expected leader payoff when the follower attacks `target`.
pub fn leader_payoff(game: &Game, coverage: &CoverageProfile, target: usize) -> Result<f64> {
    coverage.check_game(game)?;
    let p = coverage.attack_success_prob(target)?;
    Ok(leader_value_at(&game.payoffs()[target], p))
}

/// Expected follower payoff when attacking `target`.
pub fn follower_payoff(game: &Game, coverage: &CoverageProfile, target: usize) -> Result<f64> {
    coverage.check_game(game)?;
    let p = coverage.attack_success_prob(target)?;
    Ok(follower_value_at(&game.payoffs()[target], p))
}

#[inline]
pub(crate) fn leader_value_at(payoffs: &Payoffs, success: f64) -> f64 {
    success * payoffs.leader_penalty + (1.0 - success) * payoffs.leader_reward
}

#[inline]
pub(crate) fn follower_value_at(payoffs: &Payoffs, success: f64) -> f64 {
    success * payoffs.follower_reward + (1.0 - success) * payoffs.follower_penalty
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn pure(rows: &[&[usize]]) -> PureStrategy {
        PureStrategy::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Seven hosts, one step, three inspection units.
    fn fig1() -> (Game, MixedStrategy) {
        let payoffs = (0..7).map(|t| Payoffs::new(0.0, if t == 4 { -0.3 } else { -0.5 }, 0.5, -0.5)).collect();
        let game = Game::new(1, 3, payoffs).unwrap();
        let s = MixedStrategy::new(vec![
            (pure(&[&[0], &[1], &[5]]), 0.4),
            (pure(&[&[0], &[1], &[6]]), 0.3),
            (pure(&[&[2], &[3], &[4]]), 0.3),
        ])
        .unwrap();
        (game, s)
    }

    #[test]
    fn fig1_coverage_and_payoff() {
        let (game, s) = fig1();
        let c = coverage_profile(&game, &s).unwrap();
        let expected = [0.7, 0.7, 0.3, 0.3, 0.3, 0.4, 0.3];
        for (t, e) in expected.iter().enumerate() {
            assert!((c.get(0, t) - e).abs() < 1e-12, "target {t}");
        }
        assert!((c.attack_success_prob(4).unwrap() - 0.7).abs() < 1e-12);
        assert!((leader_payoff(&game, &c, 4).unwrap() + 0.21).abs() < 1e-12);
        assert!(game.nonstandard_payoffs());
    }

    #[test]
    fn degenerate_and_duplicate_strategies() {
        let game = Game::new(3, 1, vec![Payoffs::new(0.5, -0.5, 0.5, -0.5); 3]).unwrap();
        let sigma = pure(&[&[0, 0, 0]]);
        let c = coverage_profile(&game, &MixedStrategy::pure(sigma.clone())).unwrap();
        for s in 0..3 {
            assert_eq!(c.step(s), &[1.0, 0.0, 0.0]);
        }
        let dup = MixedStrategy::new(vec![(sigma.clone(), 0.5), (sigma.clone(), 0.5)]).unwrap();
        assert_eq!(dup.support(), &[(sigma.clone(), 1.0)]);
        assert_eq!(coverage_profile(&game, &dup).unwrap(), c);
    }

    #[test]
    fn success_probability_examples() {
        let c = CoverageProfile::from_values(1, 1, vec![0.3]).unwrap();
        assert!((c.attack_success_prob(0).unwrap() - 0.7).abs() < 1e-15);
        let c = CoverageProfile::from_values(3, 1, vec![0.2, 1.0, 0.1]).unwrap();
        assert_eq!(c.attack_success_prob(0).unwrap(), 0.0);
        let c = CoverageProfile::from_values(2, 1, vec![0.5, 0.5]).unwrap();
        assert_eq!(c.attack_success_prob(0).unwrap(), 0.25);
        assert!(matches!(c.attack_success_prob(1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn payoff_endpoints() {
        let game = Game::new(1, 1, vec![Payoffs::new(0.8, -0.6, 0.6, -0.4)]).unwrap();
        let full = CoverageProfile::from_values(1, 1, vec![1.0]).unwrap();
        let none = CoverageProfile::from_values(1, 1, vec![0.0]).unwrap();
        let half = CoverageProfile::from_values(1, 1, vec![0.5]).unwrap();
        assert_eq!(leader_payoff(&game, &full, 0).unwrap(), 0.8);
        assert_eq!(leader_payoff(&game, &none, 0).unwrap(), -0.6);
        assert_eq!(follower_payoff(&game, &none, 0).unwrap(), 0.6);
        assert_eq!(follower_payoff(&game, &full, 0).unwrap(), -0.4);
        assert!((follower_payoff(&game, &half, 0).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn follower_payoff_matches_monte_carlo() {
        // Coin-flip between guarding and not guarding the only target: P_x = 0.5.
        let payoffs = vec![Payoffs::new(0.8, -0.6, 0.6, -0.4), Payoffs::new(0.1, -0.1, 0.1, -0.1)];
        let game = Game::new(1, 1, payoffs).unwrap();
        let s = MixedStrategy::new(vec![(pure(&[&[0]]), 0.5), (pure(&[&[1]]), 0.5)]).unwrap();
        let c = coverage_profile(&game, &s).unwrap();
        let analytic = follower_payoff(&game, &c, 0).unwrap();
        assert!((analytic - 0.1).abs() < 1e-15);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let draws = 1_000_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..draws {
            let r: f64 = rng.gen();
            let mut acc = 0.0;
            let realized = s
                .support()
                .iter()
                .find(|(_, p)| {
                    acc += p;
                    r < acc
                })
                .unwrap_or(s.support().last().unwrap());
            let caught = realized.0.rows().any(|row| row.contains(&0));
            let u = if caught { -0.4 } else { 0.6 };
            sum += u;
            sq += u * u;
        }
        let mean = sum / draws as f64;
        let se = ((sq / draws as f64 - mean * mean) / draws as f64).sqrt();
        assert!((mean - analytic).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn rejects_bad_strategies() {
        let s = pure(&[&[0]]);
        let err = MixedStrategy::new(vec![(s.clone(), 0.9)]).unwrap_err();
        assert!(matches!(err, Error::Validation { invariant: "probabilities sum to 1", .. }));
        assert!(MixedStrategy::new(vec![]).is_err());
        let game = Game::new(1, 2, vec![Payoffs::new(0.5, -0.5, 0.5, -0.5)]).unwrap();
        assert!(matches!(
            coverage_profile(&game, &MixedStrategy::pure(s)),
            Err(Error::DimensionMismatch(_))
        ));
        let game = Game::new(1, 1, vec![Payoffs::new(0.5, -0.5, 0.5, -0.5)]).unwrap();
        assert!(coverage_profile(&game, &MixedStrategy::pure(pure(&[&[3]]))).is_err());
    }

    #[test]
    fn truncation_keeps_most_probable() {
        let s = MixedStrategy::new(vec![
            (pure(&[&[0]]), 0.1),
            (pure(&[&[1]]), 0.5),
            (pure(&[&[2]]), 0.4),
        ])
        .unwrap()
        .truncated(2);
        assert_eq!(s.len(), 2);
        assert_eq!(s.support()[0].0, pure(&[&[1]]));
        assert!((s.support()[0].1 - 5.0 / 9.0).abs() < 1e-15);
        assert!((s.support()[1].1 - 4.0 / 9.0).abs() < 1e-15);
    }

    fn arb_game_and_strategies() -> impl Strategy<Value = (Game, MixedStrategy, MixedStrategy, f64)> {
        (1usize..6, 1usize..3, 1usize..4, any::<u64>(), 0.05f64..0.95).prop_map(|(n, m, k, seed, w)| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let game = crate::datagen::gen_benchmark_game_with_units(n, m, k, &mut rng);
            let a = crate::datagen::sample_mixed_strategy(&game, 3, &mut rng).unwrap();
            let b = crate::datagen::sample_mixed_strategy(&game, 3, &mut rng).unwrap();
            (game, a, b, w)
        })
    }

    proptest! {
        #[test]
        fn coverage_is_bilinear((game, a, b, w) in arb_game_and_strategies()) {
            let mixed = a.mix(&b, w).unwrap();
            let ca = coverage_profile(&game, &a).unwrap();
            let cb = coverage_profile(&game, &b).unwrap();
            let cm = coverage_profile(&game, &mixed).unwrap();
            for i in 0..cm.as_slice().len() {
                let expect = w * ca.as_slice()[i] + (1.0 - w) * cb.as_slice()[i];
                prop_assert!((cm.as_slice()[i] - expect).abs() < 1e-12);
            }
            for s in 0..game.num_steps() {
                prop_assert!(cm.step(s).iter().sum::<f64>() <= game.num_units() as f64 + TOLERANCE);
            }
        }

        #[test]
        fn payoffs_are_bounded_and_monotone(lr in 0.01f64..1.0, lp in -1.0f64..-0.01, c1 in 0.0f64..1.0, c2 in 0.0f64..1.0, other in 0.0f64..1.0) {
            let game = Game::new(2, 1, vec![Payoffs::new(lr, lp, 0.5, -0.5)]).unwrap();
            let (lo, hi) = (c1.min(c2), c1.max(c2));
            let a = CoverageProfile::from_values(2, 1, vec![lo, other]).unwrap();
            let b = CoverageProfile::from_values(2, 1, vec![hi, other]).unwrap();
            let ua = leader_payoff(&game, &a, 0).unwrap();
            let ub = leader_payoff(&game, &b, 0).unwrap();
            prop_assert!(ub >= ua - 1e-15);
            prop_assert!(ua >= lp - 1e-15 && ua <= lr + 1e-15);
            let fa = follower_payoff(&game, &a, 0).unwrap();
            prop_assert!((-0.5 - 1e-15..=0.5 + 1e-15).contains(&fa));
        }
    }
}
