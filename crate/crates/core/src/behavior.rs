//! Follower behavior models and exact leader-value evaluation.
//!
//! Four models are supported: a perfectly rational follower, anchoring
//! (probabilities flattened toward uniform), quantal response (logit choice)
//! and prospect theory (weighted probabilities, asymmetric value function).
//! [`exact_leader_value`] is the ground truth used both as the oracle fitness
//! of the evolutionary solver and as the label generator for network training.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{coverage_profile, follower_value_at, leader_value_at, CoverageProfile, Game, MixedStrategy, TOLERANCE};

pub const DEFAULT_DELTA: f64 = 0.5;
pub const DEFAULT_LAMBDA: f64 = 0.8;

/// Which probabilities the anchoring bias flattens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorPoint {
    /// Per-step coverage `c_s(t)`, flattened toward `1/n` over the targets.
    #[default]
    Coverage,
    /// The success/caught outcome of each target, flattened toward `1/2`.
    Outcome,
}

/// Prospect theory parameters: probability weighting curvature `gamma`,
/// loss aversion `theta`, gain curvature `alpha`, loss curvature `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProspectParams {
    pub gamma: f64,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for ProspectParams {
    fn default() -> Self {
        Self {
            gamma: 0.64,
            theta: 2.25,
            alpha: 0.88,
            beta: 0.88,
        }
    }
}

impl ProspectParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |name, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("{v} not in (0, 1]")))
            }
        };
        unit("gamma", self.gamma)?;
        unit("alpha", self.alpha)?;
        unit("beta", self.beta)?;
        if !(self.theta >= 1.0 && self.theta.is_finite()) {
            return Err(Error::invalid("theta", format!("{} is not >= 1", self.theta)));
        }
        Ok(())
    }
}

/// How the follower picks a target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model")]
pub enum BehaviorModel {
    #[serde(rename = "rational")]
    Rational,
    #[serde(rename = "at")]
    Anchoring {
        delta: f64,
        #[serde(default)]
        anchor: AnchorPoint,
    },
    #[serde(rename = "qr")]
    Quantal { lambda: f64 },
    #[serde(rename = "pt")]
    Prospect(ProspectParams),
}

impl BehaviorModel {
    pub fn anchoring(delta: f64) -> Result<Self> {
        Self::Anchoring {
            delta,
            anchor: AnchorPoint::Coverage,
        }
        .validated()
    }

    pub fn quantal(lambda: f64) -> Result<Self> {
        Self::Quantal { lambda }.validated()
    }

    pub fn prospect(params: ProspectParams) -> Result<Self> {
        Self::Prospect(params).validated()
    }

    /// The three bounded-rationality models with their default parameters.
    pub fn bounded_defaults() -> [BehaviorModel; 3] {
        [
            Self::Anchoring {
                delta: DEFAULT_DELTA,
                anchor: AnchorPoint::Coverage,
            },
            Self::Quantal { lambda: DEFAULT_LAMBDA },
            Self::Prospect(ProspectParams::default()),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Rational => Ok(()),
            Self::Anchoring { delta, .. } => check_delta(delta),
            Self::Quantal { lambda } => {
                if lambda >= 0.0 && lambda.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("lambda", format!("{lambda} is not >= 0")))
                }
            }
            Self::Prospect(p) => p.validate(),
        }
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Short model name: `rational`, `at`, `qr` or `pt`.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Rational => "rational",
            Self::Anchoring { .. } => "at",
            Self::Quantal { .. } => "qr",
            Self::Prospect(_) => "pt",
        }
    }
}

impl fmt::Display for BehaviorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational => write!(f, "rational"),
            Self::Anchoring { delta, anchor } => match anchor {
                AnchorPoint::Coverage => write!(f, "at:{delta}"),
                AnchorPoint::Outcome => write!(f, "at:{delta},outcome"),
            },
            Self::Quantal { lambda } => write!(f, "qr:{lambda}"),
            Self::Prospect(p) => write!(f, "pt:{},{},{},{}", p.gamma, p.theta, p.alpha, p.beta),
        }
    }
}

impl FromStr for BehaviorModel {
    type Err = Error;

    /// Parses `rational`, `at[:delta[,outcome]]`, `qr[:lambda]` or
    /// `pt[:gamma,theta,alpha,beta]`. Omitted parameters take their defaults.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let bad = |detail: String| Error::parse(format!("behavior model '{s}'"), detail);
        let nums = |a: &str| -> Result<Vec<f64>> {
            a.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|e| bad(format!("'{x}': {e}"))))
                .collect()
        };
        let model = match (name.to_ascii_lowercase().as_str(), args) {
            ("rational", None) => Self::Rational,
            ("at", None) => Self::Anchoring {
                delta: DEFAULT_DELTA,
                anchor: AnchorPoint::Coverage,
            },
            ("at", Some(a)) => {
                let (d, anchor) = match a.split_once(',') {
                    Some((d, "outcome")) => (d, AnchorPoint::Outcome),
                    Some((d, "coverage")) => (d, AnchorPoint::Coverage),
                    Some((_, other)) => return Err(bad(format!("unknown anchor point '{other}'"))),
                    None => (a, AnchorPoint::Coverage),
                };
                Self::Anchoring {
                    delta: nums(d)?[0],
                    anchor,
                }
            }
            ("qr", None) => Self::Quantal { lambda: DEFAULT_LAMBDA },
            ("qr", Some(a)) => match nums(a)?.as_slice() {
                [lambda] => Self::Quantal { lambda: *lambda },
                v => return Err(bad(format!("expected 1 parameter, got {}", v.len()))),
            },
            ("pt", None) => Self::Prospect(ProspectParams::default()),
            ("pt", Some(a)) => match nums(a)?.as_slice() {
                [gamma, theta, alpha, beta] => Self::Prospect(ProspectParams {
                    gamma: *gamma,
                    theta: *theta,
                    alpha: *alpha,
                    beta: *beta,
                }),
                v => return Err(bad(format!("expected 4 parameters, got {}", v.len()))),
            },
            _ => return Err(bad("expected rational, at:δ, qr:λ or pt:γ,θ,α,β".into())),
        };
        model.validated()
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("delta", format!("{delta} not in (0, 1)")))
    }
}

/// The follower's reply: a single target or, for quantal response, a
/// distribution over targets.
#[derive(Debug, Clone, PartialEq)]
pub enum FollowerResponse {
    Target(usize),
    Distribution(Vec<f64>),
}

impl FollowerResponse {
    pub fn target(&self) -> Option<usize> {
        match self {
            Self::Target(t) => Some(*t),
            Self::Distribution(_) => None,
        }
    }

    pub fn distribution(&self) -> Option<&[f64]> {
        match self {
            Self::Target(_) => None,
            Self::Distribution(q) => Some(q),
        }
    }
}

/// Index of the best score. Scores within [`TOLERANCE`] of the best are tied;
/// ties go to the highest leader value, then to the lowest index.
fn select_target(scores: &[f64], leader: &[f64]) -> usize {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied = || (0..scores.len()).filter(move |&t| scores[t] >= best - TOLERANCE);
    let best_leader = tied().map(|t| leader[t]).fold(f64::NEG_INFINITY, f64::max);
    tied()
        .find(|&t| leader[t] >= best_leader - TOLERANCE)
        .expect("at least one target")
}

fn check_shapes(game: &Game, coverage: &CoverageProfile) -> Result<()> {
    if coverage.num_steps() != game.num_steps() || coverage.num_targets() != game.num_targets() {
        return Err(Error::DimensionMismatch(format!(
            "coverage is {} steps x {} targets, game is {} x {}",
            coverage.num_steps(),
            coverage.num_targets(),
            game.num_steps(),
            game.num_targets()
        )));
    }
    Ok(())
}

fn leader_values(game: &Game, success: &[f64]) -> Vec<f64> {
    game.payoffs().iter().zip(success).map(|(p, &s)| leader_value_at(p, s)).collect()
}

fn follower_values(game: &Game, success: &[f64]) -> Vec<f64> {
    game.payoffs().iter().zip(success).map(|(p, &s)| follower_value_at(p, s)).collect()
}

/// Best response of a payoff-maximizing follower.
pub fn rational_response(game: &Game, coverage: &CoverageProfile) -> Result<FollowerResponse> {
    check_shapes(game, coverage)?;
    let success = coverage.attack_success_probs();
    let t = select_target(&follower_values(game, &success), &leader_values(game, &success));
    Ok(FollowerResponse::Target(t))
}

/// Coverage as seen by an anchoring follower: `c' = c (1 - δ) + δ / n`.
pub fn at_perceived_coverage(coverage: &CoverageProfile, delta: f64) -> Result<CoverageProfile> {
    check_delta(delta)?;
    let uniform = delta / coverage.num_targets() as f64;
    Ok(coverage.map_values(|c| c * (1.0 - delta) + uniform))
}

/// Anchoring follower: best-responds to the flattened coverage.
pub fn at_response(game: &Game, coverage: &CoverageProfile, delta: f64) -> Result<FollowerResponse> {
    at_response_with(game, coverage, delta, AnchorPoint::Coverage)
}

pub fn at_response_with(
    game: &Game,
    coverage: &CoverageProfile,
    delta: f64,
    anchor: AnchorPoint,
) -> Result<FollowerResponse> {
    check_shapes(game, coverage)?;
    check_delta(delta)?;
    let success = coverage.attack_success_probs();
    let perceived_success = match anchor {
        AnchorPoint::Coverage => at_perceived_coverage(coverage, delta)?.attack_success_probs(),
        AnchorPoint::Outcome => success.iter().map(|p| p * (1.0 - delta) + delta / 2.0).collect(),
    };
    let t = select_target(
        &follower_values(game, &perceived_success),
        &leader_values(game, &success),
    );
    Ok(FollowerResponse::Target(t))
}

/// Logit choice probabilities `q(x) ∝ exp(λ u(x))` over the true expected
/// follower payoffs.
pub fn qr_distribution(game: &Game, coverage: &CoverageProfile, lambda: f64) -> Result<FollowerResponse> {
    check_shapes(game, coverage)?;
    BehaviorModel::Quantal { lambda }.validate()?;
    let success = coverage.attack_success_probs();
    Ok(FollowerResponse::Distribution(softmax(&follower_values(game, &success), lambda)))
}

fn softmax(u: &[f64], lambda: f64) -> Vec<f64> {
    let max = u.iter().map(|&x| lambda * x).fold(f64::NEG_INFINITY, f64::max);
    let mut q: Vec<f64> = u.iter().map(|&x| (lambda * x - max).exp()).collect();
    let z: f64 = q.iter().sum();
    for v in &mut q {
        *v /= z;
    }
    q
}

/// Prospect theory value function: `x^α` for gains, `-θ (-x)^β` for losses.
pub fn pt_value(outcome: f64, alpha: f64, beta: f64, theta: f64) -> f64 {
    if outcome >= 0.0 {
        outcome.powf(alpha)
    } else {
        -theta * (-outcome).powf(beta)
    }
}

/// Prospect theory probability weighting `p^γ / (p^γ + (1-p)^γ)^(1/γ)`.
pub fn pt_weight(p: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", format!("{p} not in [0, 1]")));
    }
    Ok(weight_unchecked(p, gamma))
}

fn weight_unchecked(p: f64, gamma: f64) -> f64 {
    let a = p.powf(gamma);
    a / (a + (1.0 - p).powf(gamma)).powf(1.0 / gamma)
}

fn prospects(game: &Game, success: &[f64], params: &ProspectParams) -> Vec<f64> {
    let ProspectParams { gamma, theta, alpha, beta } = *params;
    game.payoffs()
        .iter()
        .zip(success)
        .map(|(pay, &p)| {
            let p = p.clamp(0.0, 1.0);
            weight_unchecked(p, gamma) * pt_value(pay.follower_reward, alpha, beta, theta)
                + weight_unchecked(1.0 - p, gamma) * pt_value(pay.follower_penalty, alpha, beta, theta)
        })
        .collect()
}

/// Prospect-maximizing follower.
pub fn pt_response(game: &Game, coverage: &CoverageProfile, params: &ProspectParams) -> Result<FollowerResponse> {
    check_shapes(game, coverage)?;
    params.validate()?;
    let success = coverage.attack_success_probs();
    let t = select_target(&prospects(game, &success, params), &leader_values(game, &success));
    Ok(FollowerResponse::Target(t))
}

/// The follower's reply under `model`.
pub fn follower_response(game: &Game, coverage: &CoverageProfile, model: &BehaviorModel) -> Result<FollowerResponse> {
    match model {
        BehaviorModel::Rational => rational_response(game, coverage),
        BehaviorModel::Anchoring { delta, anchor } => at_response_with(game, coverage, *delta, *anchor),
        BehaviorModel::Quantal { lambda } => qr_distribution(game, coverage, *lambda),
        BehaviorModel::Prospect(p) => pt_response(game, coverage, p),
    }
}

/// Expected leader payoff of `strategy` against a follower behaving per `model`.
///
/// Deterministic models score the chosen target with the true coverage; the
/// quantal model returns the expectation over its choice distribution.
pub fn exact_leader_value(game: &Game, strategy: &MixedStrategy, model: &BehaviorModel) -> Result<f64> {
    let coverage = coverage_profile(game, strategy)?;
    leader_value_for_coverage(game, &coverage, model)
}

pub fn leader_value_for_coverage(game: &Game, coverage: &CoverageProfile, model: &BehaviorModel) -> Result<f64> {
    let success = coverage.attack_success_probs();
    let payoffs = game.payoffs();
    Ok(match follower_response(game, coverage, model)? {
        FollowerResponse::Target(t) => leader_value_at(&payoffs[t], success[t]),
        FollowerResponse::Distribution(q) => q
            .iter()
            .zip(payoffs.iter().zip(&success))
            .map(|(qx, (pay, &s))| qx * leader_value_at(pay, s))
            .sum(),
    })
}
