use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CHANCE_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// Multiplier turning player-1 utilities into this player's utilities.
    pub fn sign(self) -> f64 {
        match self {
            Player::One => 1.0,
            Player::Two => -1.0,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// What a game rule set reports about a state.
#[derive(Debug, Clone)]
pub enum Step<S> {
    /// Utility to player 1; player 2 receives its negation.
    Terminal { utility: f64 },
    Chance { outcomes: Vec<(String, f64, S)> },
    Decision {
        player: Player,
        /// Must depend only on what `player` has observed.
        infostate: String,
        actions: Vec<(String, S)>,
    },
}

/// Rules of a finite two-player zero-sum game.
pub trait Game {
    type State;

    fn name(&self) -> String;
    fn root(&self) -> Self::State;
    fn step(&self, state: &Self::State) -> Step<Self::State>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Terminal {
        utility: f64,
    },
    Chance {
        children: Vec<usize>,
        probs: Vec<f64>,
    },
    Decision {
        player: Player,
        infoset: usize,
        children: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub parent: Option<usize>,
    /// Label of the action or chance outcome leading here (empty at the root).
    pub label: String,
    pub depth: usize,
    pub kind: NodeKind,
}

impl Node {
    pub fn children(&self) -> &[usize] {
        match &self.kind {
            NodeKind::Terminal { .. } => &[],
            NodeKind::Chance { children, .. } | NodeKind::Decision { children, .. } => children,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoSet {
    pub key: String,
    pub player: Player,
    pub actions: Vec<String>,
    /// Index of this state's first sequence in the global sequence layout.
    pub offset: usize,
    pub nodes: Vec<usize>,
}

impl InfoSet {
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn sequences(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.actions.len()
    }
}

/// A fully enumerated game. Nodes are stored in depth-first pre-order, so
/// every parent precedes its children; sequences `(s, a)` of both players
/// share one flat layout indexed by `InfoSet::offset + a`.
#[derive(Debug, Clone)]
pub struct GameTree {
    name: String,
    nodes: Vec<Node>,
    infosets: Vec<InfoSet>,
    player_infosets: [Vec<usize>; 2],
    num_sequences: usize,
    utility_bound: f64,
}

impl GameTree {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    pub fn infosets(&self) -> &[InfoSet] {
        &self.infosets
    }

    pub fn infoset(&self, index: usize) -> &InfoSet {
        &self.infosets[index]
    }

    pub fn player_infosets(&self, player: Player) -> &[usize] {
        &self.player_infosets[player.index()]
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    pub fn num_sequences(&self) -> usize {
        self.num_sequences
    }

    /// `U = max_z |r_1(z)|`.
    pub fn utility_bound(&self) -> f64 {
        self.utility_bound
    }

    pub fn max_actions(&self) -> usize {
        self.infosets
            .iter()
            .map(InfoSet::num_actions)
            .max()
            .unwrap_or(0)
    }

    pub fn terminals(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match n.kind {
                NodeKind::Terminal { utility } => Some((i, utility)),
                _ => None,
            })
    }

    pub fn find_infoset(&self, key: &str) -> Option<usize> {
        self.infosets.iter().position(|s| s.key == key)
    }
}

type OwnHistory = Vec<(usize, usize)>;

struct Builder<'g, G: Game> {
    game: &'g G,
    nodes: Vec<Node>,
    infosets: Vec<InfoSet>,
    recall: Vec<OwnHistory>,
    by_key: HashMap<String, usize>,
    num_sequences: usize,
}

impl<G: Game> Builder<'_, G> {
    fn expand(
        &mut self,
        state: &G::State,
        parent: Option<usize>,
        label: String,
        depth: usize,
        history: &mut [OwnHistory; 2],
    ) -> Result<usize> {
        let index = self.nodes.len();
        self.nodes.push(Node {
            parent,
            label,
            depth,
            kind: NodeKind::Terminal { utility: 0.0 },
        });
        let invalid = |reason: String| Error::InvalidTree {
            node: index,
            reason,
        };
        let kind = match self.game.step(state) {
            Step::Terminal { utility } => {
                if !utility.is_finite() {
                    return Err(invalid(format!("non-finite terminal utility {utility}")));
                }
                NodeKind::Terminal { utility }
            }
            Step::Chance { outcomes } => {
                if outcomes.is_empty() {
                    return Err(invalid("chance node without outcomes".into()));
                }
                let total: f64 = outcomes.iter().map(|(_, p, _)| p).sum();
                if outcomes.iter().any(|(_, p, _)| !(*p >= 0.0))
                    || (total - 1.0).abs() > CHANCE_SUM_TOL
                {
                    return Err(invalid(format!("chance probabilities sum to {total}")));
                }
                let mut children = Vec::with_capacity(outcomes.len());
                let mut probs = Vec::with_capacity(outcomes.len());
                for (label, p, next) in outcomes {
                    children.push(self.expand(&next, Some(index), label, depth + 1, history)?);
                    probs.push(p);
                }
                NodeKind::Chance { children, probs }
            }
            Step::Decision {
                player,
                infostate,
                actions,
            } => {
                if actions.is_empty() {
                    return Err(invalid(format!("info state `{infostate}` has no actions")));
                }
                let labels: Vec<String> = actions.iter().map(|(l, _)| l.clone()).collect();
                let own = &history[player.index()];
                let infoset = match self.by_key.get(&infostate) {
                    Some(&s) => {
                        let existing = &self.infosets[s];
                        if existing.player != player {
                            return Err(invalid(format!(
                                "info state `{infostate}` shared by both players"
                            )));
                        }
                        if existing.actions != labels {
                            return Err(invalid(format!(
                                "info state `{infostate}` has inconsistent actions"
                            )));
                        }
                        if &self.recall[s] != own {
                            return Err(invalid(format!(
                                "perfect recall violated at info state `{infostate}`"
                            )));
                        }
                        s
                    }
                    None => {
                        let s = self.infosets.len();
                        self.infosets.push(InfoSet {
                            key: infostate.clone(),
                            player,
                            actions: labels,
                            offset: self.num_sequences,
                            nodes: Vec::new(),
                        });
                        self.num_sequences += actions.len();
                        self.recall.push(own.clone());
                        self.by_key.insert(infostate, s);
                        s
                    }
                };
                self.infosets[infoset].nodes.push(index);
                let mut children = Vec::with_capacity(actions.len());
                for (a, (label, next)) in actions.into_iter().enumerate() {
                    history[player.index()].push((infoset, a));
                    let child = self.expand(&next, Some(index), label, depth + 1, history);
                    history[player.index()].pop();
                    children.push(child?);
                }
                NodeKind::Decision {
                    player,
                    infoset,
                    children,
                }
            }
        };
        self.nodes[index].kind = kind;
        Ok(index)
    }
}

/// Enumerates every history of `game` and validates chance rows, action
/// consistency and perfect recall.
pub fn build_tree<G: Game>(game: &G) -> Result<GameTree> {
    let mut builder = Builder {
        game,
        nodes: Vec::new(),
        infosets: Vec::new(),
        recall: Vec::new(),
        by_key: HashMap::new(),
        num_sequences: 0,
    };
    let mut history = [Vec::new(), Vec::new()];
    builder.expand(&game.root(), None, String::new(), 0, &mut history)?;

    let mut player_infosets = [Vec::new(), Vec::new()];
    for (s, info) in builder.infosets.iter().enumerate() {
        player_infosets[info.player.index()].push(s);
    }
    let utility_bound = builder
        .nodes
        .iter()
        .filter_map(|n| match n.kind {
            NodeKind::Terminal { utility } => Some(utility.abs()),
            _ => None,
        })
        .fold(0.0, f64::max);
    Ok(GameTree {
        name: game.name(),
        nodes: builder.nodes,
        infosets: builder.infosets,
        player_infosets,
        num_sequences: builder.num_sequences,
        utility_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Chance deals a bit, then player 1 moves twice. `forget` makes player 1
    /// forget its first move.
    struct Toy {
        forget: bool,
        bad_chance: bool,
    }

    #[derive(Clone)]
    struct ToyState(Vec<usize>);

    impl Game for Toy {
        type State = ToyState;
        fn name(&self) -> String {
            "toy".into()
        }
        fn root(&self) -> ToyState {
            ToyState(Vec::new())
        }
        fn step(&self, s: &ToyState) -> Step<ToyState> {
            let push = |a: usize| {
                let mut v = s.0.clone();
                v.push(a);
                ToyState(v)
            };
            match s.0.len() {
                0 => Step::Chance {
                    outcomes: vec![
                        ("x".into(), 0.5, push(0)),
                        ("y".into(), if self.bad_chance { 0.6 } else { 0.5 }, push(1)),
                    ],
                },
                1 => Step::Decision {
                    player: Player::One,
                    infostate: format!("p1:{}", s.0[0]),
                    actions: vec![("l".into(), push(0)), ("r".into(), push(1))],
                },
                2 => Step::Decision {
                    player: Player::One,
                    infostate: if self.forget {
                        "p1:second".into()
                    } else {
                        format!("p1:{}:{}", s.0[0], s.0[1])
                    },
                    actions: vec![("l".into(), push(0)), ("r".into(), push(1))],
                },
                _ => Step::Terminal {
                    utility: (s.0[1] + s.0[2]) as f64 - 1.0,
                },
            }
        }
    }

    #[test]
    fn builds_valid_tree() {
        let tree = build_tree(&Toy {
            forget: false,
            bad_chance: false,
        })
        .unwrap();
        assert_eq!(tree.num_infosets(), 2 + 4);
        assert_eq!(tree.num_sequences(), 12);
        assert_eq!(tree.utility_bound(), 1.0);
        for (i, node) in tree.nodes().iter().enumerate() {
            for &c in node.children() {
                assert!(c > i);
                assert_eq!(tree.node(c).parent, Some(i));
            }
        }
    }

    #[test]
    fn rejects_imperfect_recall() {
        let err = build_tree(&Toy {
            forget: true,
            bad_chance: false,
        })
        .unwrap_err();
        assert!(matches!(err, Error::InvalidTree { ref reason, .. } if reason.contains("perfect recall")));
    }

    #[test]
    fn rejects_bad_chance_row() {
        let err = build_tree(&Toy {
            forget: false,
            bad_chance: true,
        })
        .unwrap_err();
        assert!(matches!(err, Error::InvalidTree { node: 0, .. }));
    }
}
