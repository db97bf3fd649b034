use super::profile::BehaviorProfile;
use super::tree::{GameTree, Player};

/// Reach-weighted running sum of behavioral policies, one row per sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragePolicyTracker {
    sums: Vec<f64>,
    iterations: usize,
}

impl AveragePolicyTracker {
    pub fn new(tree: &GameTree) -> Self {
        Self {
            sums: vec![0.0; tree.num_sequences()],
            iterations: 0,
        }
    }

    /// Adds `reach[k] * σ(s_k)` for every state `s_k` of `player`, where
    /// `reach` follows `tree.player_infosets(player)` order.
    pub fn accumulate(
        &mut self,
        tree: &GameTree,
        profile: &BehaviorProfile,
        player: Player,
        reach: &[f64],
    ) {
        for (&s, &w) in tree.player_infosets(player).iter().zip(reach) {
            if w == 0.0 {
                continue;
            }
            let info = tree.infoset(s);
            for (acc, p) in self.sums[info.sequences()].iter_mut().zip(profile.policy(info)) {
                *acc += w * p;
            }
        }
    }

    /// Accumulates both players and counts one iteration.
    pub fn accumulate_both(&mut self, tree: &GameTree, profile: &BehaviorProfile, reach: [&[f64]; 2]) {
        for player in Player::BOTH {
            self.accumulate(tree, profile, player, reach[player.index()]);
        }
        self.iterations += 1;
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Normalized average; uniform wherever the accumulated weight is zero.
    pub fn extract(&self, tree: &GameTree) -> BehaviorProfile {
        let mut out = BehaviorProfile::uniform(tree);
        for info in tree.infosets() {
            let row = &self.sums[info.sequences()];
            let total: f64 = row.iter().sum();
            if total > 0.0 {
                for (o, v) in out.policy_mut(info).iter_mut().zip(row) {
                    *o = v / total;
                }
            }
        }
        out
    }
}
