//! Exact-arithmetic toolkit for equilibrium refinement in strategic-form
//! games.
//!
//! Everything runs on arbitrary-precision rationals; there are no floats and
//! no tolerances. The crate provides:
//!
//! - [`game`]: games, mixed profiles, expected payoffs, Nash verification;
//! - [`lp`]: an exact simplex solver with self-verified optimality, Farkas
//!   and unboundedness certificates;
//! - [`poly`]: univariate rational polynomials with Sturm-based sign
//!   certification on intervals;
//! - [`refinement`]: weak-dominance LPs, the two-player perfection test,
//!   symbolic tremble-witness certificates, and a brute-force perfection
//!   oracle;
//! - [`minmax`]: certified bounds on Player 1's minmax value in three-player
//!   games and the promise-problem classifier;
//! - [`reduction`]: the bot-extension gadget that ties minmax verdicts to
//!   perfection verdicts, with an end-to-end consistency report;
//! - [`document`]: canonical textual formats for games, profiles,
//!   certificates and reports;
//! - [`corpus`]: deterministic generation of test instances.

pub mod corpus;
pub mod document;
pub mod error;
pub mod game;
pub mod lp;
pub mod minmax;
pub mod poly;
pub mod rational;
pub mod reduction;
pub mod refinement;

pub use error::{Error, Result};
pub use game::{Game, MixedProfile, PureProfile};
pub use rational::Rational;
