//! Extensive-form game engine: enumerated trees, profiles, full-tree
//! traversal, best responses and average-policy tracking.

mod average;
mod best_response;
mod dump;
mod profile;
mod traverse;
mod tree;

pub use average::AveragePolicyTracker;
pub use best_response::{best_response, best_response_value, exploitability, BestResponse};
pub use dump::write_tree;
pub use profile::BehaviorProfile;
pub use traverse::{counterfactual_values, expected_utility, instantaneous_regrets, Evaluator};
pub use tree::{build_tree, Game, GameTree, InfoSet, Node, NodeKind, Player, Step};
