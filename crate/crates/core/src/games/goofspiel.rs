//! Imperfect-information goofspiel.
//!
//! Each round a point card is revealed, both players bid a card from their
//! hand without seeing the other's bid, and only the winner of the round is
//! announced. Tied bids discard the point card. The final round is forced
//! and resolved automatically. The final score difference decides a utility
//! of +1, -1 or 0.

use serde::{Deserialize, Serialize};

use crate::efg::{Game, Player, Step};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoofspielConfig {
    pub ranks: usize,
    /// Point cards are drawn uniformly at random instead of in descending order.
    pub random_deck: bool,
}

#[derive(Debug, Clone)]
pub struct GoofspielState {
    /// Point cards revealed so far, one per round.
    points: Vec<usize>,
    bids: [Vec<usize>; 2],
    /// Round winners as `1`, `2` or `0` for a tie.
    outcomes: String,
    score: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct Goofspiel {
    config: GoofspielConfig,
}

impl Goofspiel {
    pub fn new(config: GoofspielConfig) -> Result<Self> {
        if config.ranks < 2 {
            return Err(Error::InvalidGame("goofspiel needs at least 2 ranks".into()));
        }
        Ok(Self { config })
    }

    fn remaining(&self, used: &[usize]) -> Vec<usize> {
        (1..=self.config.ranks).filter(|c| !used.contains(c)).collect()
    }

    fn resolve(state: &mut GoofspielState, point: usize, b1: usize, b2: usize) {
        state.bids[0].push(b1);
        state.bids[1].push(b2);
        let winner = match b1.cmp(&b2) {
            std::cmp::Ordering::Greater => {
                state.score[0] += point;
                '1'
            }
            std::cmp::Ordering::Less => {
                state.score[1] += point;
                '2'
            }
            std::cmp::Ordering::Equal => '0',
        };
        state.outcomes.push(winner);
    }

    fn infostate(player: Player, s: &GoofspielState) -> String {
        let join = |v: &[usize]| {
            v.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(".")
        };
        format!(
            "{player}|{}|{}|{}",
            join(&s.points),
            join(&s.bids[player.index()]),
            s.outcomes
        )
    }
}

impl Game for Goofspiel {
    type State = GoofspielState;

    fn name(&self) -> String {
        if self.config.random_deck {
            "random_goofspiel".into()
        } else {
            "goofspiel".into()
        }
    }

    fn root(&self) -> GoofspielState {
        GoofspielState {
            points: Vec::new(),
            bids: [Vec::new(), Vec::new()],
            outcomes: String::new(),
            score: [0, 0],
        }
    }

    fn step(&self, s: &GoofspielState) -> Step<GoofspielState> {
        let n = self.config.ranks;
        let round = s.bids[1].len();
        if round + 1 == n {
            let mut last = s.clone();
            let point = self.remaining(&s.points)[0];
            last.points.push(point);
            let b1 = self.remaining(&s.bids[0])[0];
            let b2 = self.remaining(&s.bids[1])[0];
            Self::resolve(&mut last, point, b1, b2);
            let utility = match last.score[0].cmp(&last.score[1]) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Less => -1.0,
                std::cmp::Ordering::Equal => 0.0,
            };
            return Step::Terminal { utility };
        }
        if s.points.len() == round {
            let left = self.remaining(&s.points);
            if !self.config.random_deck {
                let mut next = s.clone();
                next.points.push(*left.last().expect("deck not exhausted"));
                return self.step(&next);
            }
            let p = 1.0 / left.len() as f64;
            return Step::Chance {
                outcomes: left
                    .into_iter()
                    .map(|c| {
                        let mut next = s.clone();
                        next.points.push(c);
                        (format!("p{c}"), p, next)
                    })
                    .collect(),
            };
        }
        // Player 1's pending bid is the extra entry in its bid list; player
        // 2's key is built from the state before that bid.
        let player = if s.bids[0].len() == round {
            Player::One
        } else {
            Player::Two
        };
        let mut visible = s.clone();
        visible.bids[0].truncate(round);
        let actions = self
            .remaining(&s.bids[player.index()])
            .into_iter()
            .map(|b| {
                let mut next = s.clone();
                match player {
                    Player::One => next.bids[0].push(b),
                    Player::Two => {
                        let b1 = next.bids[0].pop().expect("player 1 bid first");
                        Self::resolve(&mut next, s.points[round], b1, b);
                    }
                }
                (format!("b{b}"), next)
            })
            .collect();
        Step::Decision {
            player,
            infostate: Self::infostate(player, &visible),
            actions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::{build_tree, NodeKind};

    #[test]
    fn sorted_deck_starts_with_top_card() {
        let game = Goofspiel::new(GoofspielConfig {
            ranks: 5,
            random_deck: false,
        })
        .unwrap();
        match game.step(&game.root()) {
            Step::Decision { infostate, .. } => assert_eq!(infostate, "1|5||"),
            _ => panic!("expected a decision"),
        }
    }

    #[test]
    fn random_deck_first_draw() {
        let tree = build_tree(
            &Goofspiel::new(GoofspielConfig {
                ranks: 4,
                random_deck: true,
            })
            .unwrap(),
        )
        .unwrap();
        match &tree.node(0).kind {
            NodeKind::Chance { probs, .. } => assert_eq!(probs, &vec![0.25; 4]),
            _ => panic!("expected chance at the root"),
        }
        let mut values: Vec<f64> = tree.terminals().map(|(_, u)| u).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        assert_eq!(values, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn points_are_conserved_without_ties() {
        let total: usize = (1..=5).sum();
        assert_eq!(total, 15);
        let mut s = Goofspiel::new(GoofspielConfig {
            ranks: 5,
            random_deck: false,
        })
        .unwrap()
        .root();
        for (k, point) in (1..=5).rev().enumerate() {
            s.points.push(point);
            Goofspiel::resolve(&mut s, point, k + 1, 5 - k + usize::from(k >= 2));
        }
        let tied = s.outcomes.matches('0').count();
        assert_eq!(tied, 0);
        assert_eq!(s.score[0] + s.score[1], total);
    }
}
