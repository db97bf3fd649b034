use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::efg::{GameTree, Player};
use crate::error::{Error, Result};

use super::features::{build_features, FeatureMap};
use super::ridge::RidgeSystem;

/// Hyperparameters of one player's estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorParams {
    pub partitions: usize,
    pub buckets: usize,
    pub lambda: f64,
    pub seed: u64,
}

/// Per-action linear predictors of one player's cumulative counterfactual
/// regrets. Each step adds the ridge solution for that step's targets, which
/// on a fixed design equals the solution for the summed targets.
#[derive(Debug, Clone)]
pub struct HashedRegretEstimator {
    params: EstimatorParams,
    features: FeatureMap,
    systems: Vec<RidgeSystem>,
    weights: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Checkpoint {
    game: String,
    player: Player,
    params: EstimatorParams,
    labels: Vec<String>,
    rows: Vec<usize>,
    weights: Vec<Vec<f64>>,
}

impl HashedRegretEstimator {
    pub fn new(tree: &GameTree, player: Player, params: EstimatorParams) -> Result<Self> {
        let features = build_features(tree, player, params.partitions, params.buckets, params.seed)?;
        let dim = features.dim();
        let systems = features
            .groups()
            .par_iter()
            .map(|g| RidgeSystem::new(g.features.clone(), dim, params.lambda))
            .collect::<Result<Vec<_>>>()?;
        let weights = vec![vec![0.0; dim]; systems.len()];
        Ok(Self {
            params,
            features,
            systems,
            weights,
        })
    }

    pub fn params(&self) -> &EstimatorParams {
        &self.params
    }

    pub fn features(&self) -> &FeatureMap {
        &self.features
    }

    pub fn player(&self) -> Player {
        self.features.player()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    /// Adds the ridge fit of `targets` (sequence layout; only this player's
    /// entries are read) to every group's weights.
    pub fn accumulate(&mut self, tree: &GameTree, targets: &[f64]) -> Result<()> {
        if targets.len() != tree.num_sequences() {
            return Err(Error::DimensionMismatch {
                expected: tree.num_sequences(),
                got: targets.len(),
            });
        }
        let groups = self.features.groups();
        self.systems
            .par_iter()
            .zip(self.weights.par_iter_mut())
            .zip(groups.par_iter())
            .try_for_each(|((system, w), group)| {
                let t: Vec<f64> = group
                    .rows
                    .iter()
                    .map(|&(s, a)| targets[tree.infoset(s).offset + a])
                    .collect();
                let step = system.solve(&t)?;
                for (wi, si) in w.iter_mut().zip(step) {
                    *wi += si;
                }
                Ok(())
            })
    }

    /// Writes predictions for every sequence of this player into `out`.
    pub fn predict_into(&self, out: &mut [f64], tree: &GameTree) {
        for ((system, w), group) in self.systems.iter().zip(&self.weights).zip(self.features.groups()) {
            for (&(s, a), p) in group.rows.iter().zip(system.predict(w)) {
                out[tree.infoset(s).offset + a] = p;
            }
        }
    }

    /// Predicted cumulative regrets at one information state.
    pub fn predict(&self, tree: &GameTree, infoset: usize) -> Vec<f64> {
        let info = tree.infoset(infoset);
        info.sequences()
            .map(|seq| match self.features.locate(seq) {
                Some((g, r)) => self.features.groups()[g].features[r]
                    .iter()
                    .map(|&(j, s)| s * self.weights[g][j])
                    .sum(),
                None => 0.0,
            })
            .collect()
    }

    pub fn to_json(&self, tree: &GameTree) -> Result<String> {
        Ok(serde_json::to_string(&Checkpoint {
            game: tree.name().to_string(),
            player: self.player(),
            params: self.params,
            labels: self.features.groups().iter().map(|g| g.label.clone()).collect(),
            rows: self.features.groups().iter().map(|g| g.rows.len()).collect(),
            weights: self.weights.clone(),
        })?)
    }

    /// Rebuilds the estimator on `tree` and restores its weights exactly.
    pub fn from_json(tree: &GameTree, json: &str) -> Result<Self> {
        let cp: Checkpoint = serde_json::from_str(json)?;
        if cp.game != tree.name() {
            return Err(Error::Checkpoint(format!("saved for `{}`, not `{}`", cp.game, tree.name())));
        }
        let mut est = Self::new(tree, cp.player, cp.params)?;
        let labels: Vec<&str> = est.features.groups().iter().map(|g| g.label.as_str()).collect();
        let rows: Vec<usize> = est.features.groups().iter().map(|g| g.rows.len()).collect();
        if labels != cp.labels.iter().map(String::as_str).collect::<Vec<_>>() || rows != cp.rows {
            return Err(Error::Checkpoint("action groups differ from the tree".into()));
        }
        if cp.weights.len() != est.weights.len()
            || cp.weights.iter().any(|w| w.len() != est.features.dim())
        {
            return Err(Error::Checkpoint("weight shapes differ from the feature map".into()));
        }
        est.weights = cp.weights;
        Ok(est)
    }
}
