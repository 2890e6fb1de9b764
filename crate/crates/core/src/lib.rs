//! Leader strategies for Stackelberg security games played against
//! boundedly rational attackers.
//!
//! The crate is organized bottom-up:
//!
//! * [`game`]: targets, payoffs, pure and mixed leader strategies, coverage
//!   and expected payoffs.
//! * [`behavior`]: follower responses (rational, anchoring, quantal response,
//!   prospect theory) and the exact leader value under each.
//! * [`evolution`]: the evolutionary solver, generic over an [`evolution::Evaluator`].
//! * [`senn`]: the strategy evaluation network used as a learned evaluator.
//! * [`datagen`]: benchmark games, training data, file formats.
//! * [`harness`]: experiment drivers and the command-line front end.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod behavior;
pub mod datagen;
pub mod error;
pub mod evolution;
pub mod game;
pub mod harness;
pub mod rng;
pub mod senn;

pub use behavior::{exact_leader_value, BehaviorModel, FollowerResponse, ProspectParams};
pub use error::{Error, Result};
pub use evolution::{evolve, Evaluator, EvolutionConfig, EvolutionOutcome, ExactEvaluator};
pub use game::{coverage_profile, CoverageProfile, Game, MixedStrategy, Payoffs, PureStrategy};
pub use senn::{senn_evaluator, SennEvaluator, SennNetwork, TrainConfig, TrainingExample};
