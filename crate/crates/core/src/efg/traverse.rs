//! Full-tree evaluation of a profile: reach probabilities, node values,
//! counterfactual values and instantaneous counterfactual regrets.

use super::profile::BehaviorProfile;
use super::tree::{GameTree, NodeKind, Player};

/// Reusable buffers for repeated full-tree passes over one tree.
#[derive(Debug, Clone)]
pub struct Evaluator<'t> {
    tree: &'t GameTree,
    /// Per node, each player's own contribution to the reach probability.
    player_reach: [Vec<f64>; 2],
    chance_reach: Vec<f64>,
    /// Expected player-1 utility of each node under the profile.
    values: Vec<f64>,
    cf_values: Vec<f64>,
}

impl<'t> Evaluator<'t> {
    pub fn new(tree: &'t GameTree) -> Self {
        let n = tree.nodes().len();
        Self {
            tree,
            player_reach: [vec![0.0; n], vec![0.0; n]],
            chance_reach: vec![0.0; n],
            values: vec![0.0; n],
            cf_values: vec![0.0; tree.num_sequences()],
        }
    }

    pub fn tree(&self) -> &'t GameTree {
        self.tree
    }

    /// Runs the forward and backward passes and fills counterfactual values
    /// for both players.
    pub fn evaluate(&mut self, profile: &BehaviorProfile) {
        self.forward(profile);
        self.backward(profile);
        self.counterfactual();
    }

    fn forward(&mut self, profile: &BehaviorProfile) {
        let tree = self.tree;
        let [r1, r2] = &mut self.player_reach;
        let rc = &mut self.chance_reach;
        r1[0] = 1.0;
        r2[0] = 1.0;
        rc[0] = 1.0;
        for (h, node) in tree.nodes().iter().enumerate() {
            match &node.kind {
                NodeKind::Terminal { .. } => {}
                NodeKind::Chance { children, probs } => {
                    for (&c, &p) in children.iter().zip(probs) {
                        r1[c] = r1[h];
                        r2[c] = r2[h];
                        rc[c] = rc[h] * p;
                    }
                }
                NodeKind::Decision {
                    player,
                    infoset,
                    children,
                } => {
                    let policy = profile.policy(tree.infoset(*infoset));
                    for (&c, &p) in children.iter().zip(policy) {
                        r1[c] = r1[h];
                        r2[c] = r2[h];
                        rc[c] = rc[h];
                        match player {
                            Player::One => r1[c] *= p,
                            Player::Two => r2[c] *= p,
                        }
                    }
                }
            }
        }
    }

    fn backward(&mut self, profile: &BehaviorProfile) {
        let tree = self.tree;
        for h in (0..tree.nodes().len()).rev() {
            self.values[h] = match &tree.node(h).kind {
                NodeKind::Terminal { utility } => *utility,
                NodeKind::Chance { children, probs } => children
                    .iter()
                    .zip(probs)
                    .map(|(&c, &p)| p * self.values[c])
                    .sum(),
                NodeKind::Decision {
                    infoset, children, ..
                } => children
                    .iter()
                    .zip(profile.policy(tree.infoset(*infoset)))
                    .map(|(&c, &p)| p * self.values[c])
                    .sum(),
            };
        }
    }

    fn counterfactual(&mut self) {
        let tree = self.tree;
        self.cf_values.iter_mut().for_each(|v| *v = 0.0);
        for info in tree.infosets() {
            let sign = info.player.sign();
            let opponent = info.player.opponent().index();
            for &h in &info.nodes {
                let weight = self.player_reach[opponent][h] * self.chance_reach[h];
                if weight == 0.0 {
                    continue;
                }
                for (a, &c) in tree.node(h).children().iter().enumerate() {
                    self.cf_values[info.offset + a] += weight * sign * self.values[c];
                }
            }
        }
    }

    /// Counterfactual values `v_i(s, a)` in the sequence layout (both players).
    pub fn counterfactual_values(&self) -> &[f64] {
        &self.cf_values
    }

    pub fn node_values(&self) -> &[f64] {
        &self.values
    }

    pub fn player_reach(&self, player: Player) -> &[f64] {
        &self.player_reach[player.index()]
    }

    pub fn chance_reach(&self) -> &[f64] {
        &self.chance_reach
    }

    /// `u_1(σ)` from the root value.
    pub fn root_value(&self) -> f64 {
        self.values[0]
    }

    /// Instantaneous regrets `v(s, a) - Σ_a' σ(s, a') v(s, a')` for every
    /// sequence of `player`, written into `out` (sequence layout).
    pub fn regrets_into(&self, profile: &BehaviorProfile, player: Player, out: &mut [f64]) {
        for &s in self.tree.player_infosets(player) {
            let info = self.tree.infoset(s);
            let values = &self.cf_values[info.sequences()];
            let policy = profile.policy(info);
            let expected: f64 = values.iter().zip(policy).map(|(v, p)| v * p).sum();
            for (o, v) in out[info.sequences()].iter_mut().zip(values) {
                *o = v - expected;
            }
        }
    }

    /// `Σ_{h ∈ s} η_i(h)` for every information state of `player`, indexed by
    /// position in `tree.player_infosets(player)`.
    pub fn own_reach(&self, player: Player) -> Vec<f64> {
        let reach = &self.player_reach[player.index()];
        self.tree
            .player_infosets(player)
            .iter()
            .map(|&s| self.tree.infoset(s).nodes.iter().map(|&h| reach[h]).sum())
            .collect()
    }
}

/// Counterfactual values of `player`'s sequences; other entries are zero.
pub fn counterfactual_values(tree: &GameTree, profile: &BehaviorProfile, player: Player) -> Vec<f64> {
    let mut eval = Evaluator::new(tree);
    eval.evaluate(profile);
    let mut out = vec![0.0; tree.num_sequences()];
    for &s in tree.player_infosets(player) {
        let range = tree.infoset(s).sequences();
        out[range.clone()].copy_from_slice(&eval.counterfactual_values()[range]);
    }
    out
}

/// Instantaneous counterfactual regrets of `player`'s sequences; other entries are zero.
pub fn instantaneous_regrets(tree: &GameTree, profile: &BehaviorProfile, player: Player) -> Vec<f64> {
    let mut eval = Evaluator::new(tree);
    eval.evaluate(profile);
    let mut out = vec![0.0; tree.num_sequences()];
    eval.regrets_into(profile, player, &mut out);
    out
}

/// `u_1(σ) = Σ_z η(z) r_1(z)`, summed directly over terminals.
pub fn expected_utility(tree: &GameTree, profile: &BehaviorProfile) -> f64 {
    let mut eval = Evaluator::new(tree);
    eval.forward(profile);
    tree.terminals()
        .map(|(z, u)| eval.player_reach[0][z] * eval.player_reach[1][z] * eval.chance_reach[z] * u)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::GameSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn terminal_reach_sums_to_one_and_factorizes() {
        for spec in [GameSpec::kuhn(), GameSpec::rps(), GameSpec::leduc()] {
            let tree = spec.build_tree().unwrap();
            let profile = BehaviorProfile::random(&tree, &mut ChaCha8Rng::seed_from_u64(11));
            let mut eval = Evaluator::new(&tree);
            eval.evaluate(&profile);
            let mut total = 0.0;
            for (z, _) in tree.terminals() {
                // Product along the path, computed independently of the
                // forward pass.
                let mut prob = 1.0;
                let mut h = z;
                while let Some(parent) = tree.node(h).parent {
                    let node = tree.node(parent);
                    let a = node.children().iter().position(|&c| c == h).unwrap();
                    prob *= match &node.kind {
                        NodeKind::Chance { probs, .. } => probs[a],
                        NodeKind::Decision { infoset, .. } => {
                            profile.policy(tree.infoset(*infoset))[a]
                        }
                        NodeKind::Terminal { .. } => unreachable!(),
                    };
                    h = parent;
                }
                let factored = eval.player_reach(Player::One)[z]
                    * eval.player_reach(Player::Two)[z]
                    * eval.chance_reach()[z];
                assert!((prob - factored).abs() <= 1e-15);
                total += factored;
            }
            assert!((total - 1.0).abs() <= 1e-10, "{}: {total}", tree.name());
        }
    }

    #[test]
    fn degenerate_one_shot_values() {
        let tree = GameSpec::matrix("one", vec![vec![1.0], vec![0.0]])
            .build_tree()
            .unwrap();
        let profile = BehaviorProfile::uniform(&tree);
        let v = counterfactual_values(&tree, &profile, Player::One);
        let s = tree.player_infosets(Player::One)[0];
        let info = tree.infoset(s);
        assert_eq!(&v[info.sequences()], &[1.0, 0.0]);
        let r = instantaneous_regrets(&tree, &profile, Player::One);
        assert_eq!(&r[info.sequences()], &[0.5, -0.5]);
    }

    #[test]
    fn root_values_weighted_by_policy_recover_expected_utility() {
        for spec in [GameSpec::kuhn(), GameSpec::leduc(), GameSpec::biased_matching_pennies()] {
            let tree = spec.build_tree().unwrap();
            let profile = BehaviorProfile::random(&tree, &mut ChaCha8Rng::seed_from_u64(5));
            let direct = expected_utility(&tree, &profile);
            for player in Player::BOTH {
                let v = counterfactual_values(&tree, &profile, player);
                // Root-level info states: no earlier own decision on the path.
                let mut total = 0.0;
                for &s in tree.player_infosets(player) {
                    let info = tree.infoset(s);
                    let first = info.nodes[0];
                    let mut h = first;
                    let mut root_level = true;
                    while let Some(p) = tree.node(h).parent {
                        if let NodeKind::Decision { player: q, .. } = tree.node(p).kind {
                            if q == player {
                                root_level = false;
                            }
                        }
                        h = p;
                    }
                    if root_level {
                        total += profile
                            .policy(info)
                            .iter()
                            .zip(&v[info.sequences()])
                            .map(|(p, x)| p * x)
                            .sum::<f64>();
                    }
                }
                assert!((total - player.sign() * direct).abs() <= 1e-12, "{} {player}", tree.name());
            }
        }
    }

    #[test]
    fn policy_weighted_regret_is_zero() {
        let tree = GameSpec::leduc().build_tree().unwrap();
        let profile = BehaviorProfile::random(&tree, &mut ChaCha8Rng::seed_from_u64(2));
        for player in Player::BOTH {
            let r = instantaneous_regrets(&tree, &profile, player);
            for &s in tree.player_infosets(player) {
                let info = tree.infoset(s);
                let weighted: f64 = profile
                    .policy(info)
                    .iter()
                    .zip(&r[info.sequences()])
                    .map(|(p, x)| p * x)
                    .sum();
                let scale: f64 = r[info.sequences()].iter().map(|x| x.abs()).sum::<f64>() + 1.0;
                assert!(weighted.abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn greedy_argmax_policy_has_no_positive_regret() {
        let tree = GameSpec::kuhn().build_tree().unwrap();
        let base = BehaviorProfile::uniform(&tree);
        let values = counterfactual_values(&tree, &base, Player::One);
        let mut greedy = base.clone();
        for &s in tree.player_infosets(Player::One) {
            let info = tree.infoset(s);
            let v = &values[info.sequences()];
            let best = (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
            let row = greedy.policy_mut(info);
            row.iter_mut().for_each(|x| *x = 0.0);
            row[best] = 1.0;
        }
        // Deeper own states change only their own subtree, so check states
        // whose own policy changed nothing below them: every last-round state.
        let r = instantaneous_regrets(&tree, &greedy, Player::One);
        let v2 = counterfactual_values(&tree, &greedy, Player::One);
        for &s in tree.player_infosets(Player::One) {
            let info = tree.infoset(s);
            let v = &v2[info.sequences()];
            let best = (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
            if greedy.policy(info)[best] == 1.0 {
                assert!(r[info.sequences()].iter().all(|&x| x <= 1e-12));
            }
        }
    }

    /// Counterfactual values by explicit path enumeration: for every node in
    /// `s`, walk every terminal below `h a` and multiply probabilities.
    fn enumerate_cfv(tree: &GameTree, profile: &BehaviorProfile, s: usize, a: usize) -> f64 {
        let info = tree.infoset(s);
        let player = info.player;
        let mut total = 0.0;
        for &h in &info.nodes {
            // Opponent and chance reach of h.
            let mut reach = 1.0;
            let mut x = h;
            while let Some(p) = tree.node(x).parent {
                let node = tree.node(p);
                let idx = node.children().iter().position(|&c| c == x).unwrap();
                match &node.kind {
                    NodeKind::Chance { probs, .. } => reach *= probs[idx],
                    NodeKind::Decision { player: q, infoset, .. } if *q != player => {
                        reach *= profile.policy(tree.infoset(*infoset))[idx]
                    }
                    _ => {}
                }
                x = p;
            }
            let start = tree.node(h).children()[a];
            let mut stack = vec![(start, 1.0)];
            while let Some((x, prob)) = stack.pop() {
                match &tree.node(x).kind {
                    NodeKind::Terminal { utility } => total += reach * prob * player.sign() * utility,
                    NodeKind::Chance { children, probs } => {
                        for (&c, &p) in children.iter().zip(probs) {
                            stack.push((c, prob * p));
                        }
                    }
                    NodeKind::Decision { infoset, children, .. } => {
                        for (&c, &p) in children.iter().zip(profile.policy(tree.infoset(*infoset))) {
                            stack.push((c, prob * p));
                        }
                    }
                }
            }
        }
        total
    }

    #[test]
    fn leduc_uniform_values_match_path_enumeration() {
        let tree = GameSpec::leduc().build_tree().unwrap();
        let profile = BehaviorProfile::uniform(&tree);
        let mut eval = Evaluator::new(&tree);
        eval.evaluate(&profile);
        for s in (0..tree.num_infosets()).step_by(37) {
            let info = tree.infoset(s);
            for a in 0..info.num_actions() {
                let expect = enumerate_cfv(&tree, &profile, s, a);
                let got = eval.counterfactual_values()[info.offset + a];
                assert!((expect - got).abs() <= 1e-12, "{} {a}: {expect} vs {got}", info.key);
            }
        }
    }
}
