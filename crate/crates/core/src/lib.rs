//! Zero-sum extensive-form game solving with counterfactual regret
//! minimization, where cumulative regrets may come from hashed linear
//! estimators and policies from polynomial or exponential link functions.

// `!(x >= 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod efg;
pub mod error;
pub mod games;
pub mod links;
pub mod matcher;
pub mod odp;
pub mod regress;
pub mod solver;

pub use efg::{BehaviorProfile, GameTree, Player};
pub use error::{Error, Result};
pub use games::GameSpec;
pub use links::{LinkFamily, LinkSpec};
pub use solver::{solve, MetricsRow, SolveConfig, SolveOutput, Solver};
