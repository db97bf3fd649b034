use super::profile::BehaviorProfile;
use super::traverse::Evaluator;
use super::tree::{GameTree, NodeKind, Player};

/// A pure best response and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub player: Player,
    /// Expected utility of the responder against the fixed opponent policy.
    pub value: f64,
    /// Chosen action per information state of the responder, in
    /// `tree.player_infosets(player)` order.
    pub actions: Vec<usize>,
}

struct Search<'a> {
    tree: &'a GameTree,
    profile: &'a BehaviorProfile,
    player: Player,
    /// Opponent-and-chance reach per node.
    weight: Vec<f64>,
    value: Vec<Option<f64>>,
    choice: Vec<Option<usize>>,
}

impl Search<'_> {
    fn node_value(&mut self, h: usize) -> f64 {
        if let Some(v) = self.value[h] {
            return v;
        }
        let tree = self.tree;
        let v = match &tree.node(h).kind {
            NodeKind::Terminal { utility } => self.player.sign() * utility,
            NodeKind::Chance { children, probs } => children
                .iter()
                .zip(probs)
                .map(|(&c, &p)| p * self.node_value(c))
                .sum(),
            NodeKind::Decision {
                player,
                infoset,
                children,
            } if *player == self.player => {
                let a = self.decide(*infoset);
                self.node_value(children[a])
            }
            NodeKind::Decision {
                infoset, children, ..
            } => {
                let policy = self.profile.policy(tree.infoset(*infoset));
                children
                    .iter()
                    .zip(policy)
                    .map(|(&c, &p)| if p > 0.0 { p * self.node_value(c) } else { 0.0 })
                    .sum()
            }
        };
        self.value[h] = Some(v);
        v
    }

    /// Action maximizing the reach-weighted value summed over the state's nodes.
    fn decide(&mut self, s: usize) -> usize {
        if let Some(a) = self.choice[s] {
            return a;
        }
        let info = self.tree.infoset(s);
        let mut totals = vec![0.0; info.num_actions()];
        for &h in &info.nodes {
            let w = self.weight[h];
            if w == 0.0 {
                continue;
            }
            for (a, &c) in self.tree.node(h).children().iter().enumerate() {
                totals[a] += w * self.node_value(c);
            }
        }
        let best = argmax(&totals);
        self.choice[s] = Some(best);
        best
    }
}

/// First index attaining the maximum.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (a, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = a;
        }
    }
    best
}

/// Pure best response of `player` to the opponent rows of `profile`.
pub fn best_response(tree: &GameTree, profile: &BehaviorProfile, player: Player) -> BestResponse {
    let mut eval = Evaluator::new(tree);
    eval.evaluate(profile);
    let opponent = eval.player_reach(player.opponent());
    let weight = opponent
        .iter()
        .zip(eval.chance_reach())
        .map(|(a, b)| a * b)
        .collect();
    let mut search = Search {
        tree,
        profile,
        player,
        weight,
        value: vec![None; tree.nodes().len()],
        choice: vec![None; tree.num_infosets()],
    };
    let value = search.node_value(0);
    let actions = tree
        .player_infosets(player)
        .iter()
        .map(|&s| search.decide(s))
        .collect();
    BestResponse {
        player,
        value,
        actions,
    }
}

pub fn best_response_value(tree: &GameTree, profile: &BehaviorProfile, player: Player) -> f64 {
    best_response(tree, profile, player).value
}

/// `1000 (b_1 + b_2) / 2`, where `b_i` is player `i`'s best-response value.
pub fn exploitability(tree: &GameTree, profile: &BehaviorProfile) -> f64 {
    let b1 = best_response_value(tree, profile, Player::One);
    let b2 = best_response_value(tree, profile, Player::Two);
    1000.0 * (b1 + b2) / 2.0
}
