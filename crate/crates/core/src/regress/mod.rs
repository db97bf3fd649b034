//! Hashed linear estimators of cumulative counterfactual regrets.

mod estimator;
mod features;
mod ridge;

pub use estimator::{EstimatorParams, HashedRegretEstimator};
pub use features::{build_features, FeatureGroup, FeatureMap, SparseRow};
pub use ridge::{ridge_fit, RidgeSystem};
