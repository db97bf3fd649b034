use rand::Rng;

use crate::error::{Error, Result};

use super::tree::{GameTree, InfoSet, Player};

const ROW_SUM_TOL: f64 = 1e-9;

/// A behavioral strategy for both players, stored in the tree's flat
/// sequence layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorProfile {
    probs: Vec<f64>,
}

impl BehaviorProfile {
    pub fn uniform(tree: &GameTree) -> Self {
        let mut probs = vec![0.0; tree.num_sequences()];
        for info in tree.infosets() {
            let p = 1.0 / info.num_actions() as f64;
            probs[info.sequences()].iter_mut().for_each(|x| *x = p);
        }
        Self { probs }
    }

    /// Independent random rows, each a normalized vector of uniform draws.
    pub fn random<R: Rng + ?Sized>(tree: &GameTree, rng: &mut R) -> Self {
        let mut probs = vec![0.0; tree.num_sequences()];
        for info in tree.infosets() {
            let row = &mut probs[info.sequences()];
            row.iter_mut().for_each(|x| *x = rng.gen::<f64>() + 1e-3);
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= total);
        }
        Self { probs }
    }

    /// Builds a profile from per-info-state rows, validating each one.
    pub fn from_fn<F>(tree: &GameTree, mut row: F) -> Result<Self>
    where
        F: FnMut(usize, &InfoSet) -> Vec<f64>,
    {
        let mut probs = vec![0.0; tree.num_sequences()];
        for (s, info) in tree.infosets().iter().enumerate() {
            let r = row(s, info);
            if r.len() != info.num_actions() {
                return Err(Error::DimensionMismatch {
                    expected: info.num_actions(),
                    got: r.len(),
                });
            }
            probs[info.sequences()].copy_from_slice(&r);
        }
        let profile = Self { probs };
        profile.validate(tree)?;
        Ok(profile)
    }

    pub fn from_sequences(tree: &GameTree, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != tree.num_sequences() {
            return Err(Error::DimensionMismatch {
                expected: tree.num_sequences(),
                got: probs.len(),
            });
        }
        let profile = Self { probs };
        profile.validate(tree)?;
        Ok(profile)
    }

    pub fn validate(&self, tree: &GameTree) -> Result<()> {
        for info in tree.infosets() {
            let row = &self.probs[info.sequences()];
            let sum: f64 = row.iter().sum();
            if row.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidConfig(format!(
                    "policy at `{}` is not a distribution (sum {sum})",
                    info.key
                )));
            }
        }
        Ok(())
    }

    pub fn policy(&self, info: &InfoSet) -> &[f64] {
        &self.probs[info.sequences()]
    }

    pub fn policy_mut(&mut self, info: &InfoSet) -> &mut [f64] {
        &mut self.probs[info.sequences()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// Replaces `player`'s rows with those of `other`.
    pub fn splice(&mut self, tree: &GameTree, player: Player, other: &BehaviorProfile) {
        for &s in tree.player_infosets(player) {
            let range = tree.infoset(s).sequences();
            self.probs[range.clone()].copy_from_slice(&other.probs[range]);
        }
    }
}
