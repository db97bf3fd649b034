//! Leduc hold'em and its one-round relatives (Kuhn poker).
//!
//! Player 1 acts first in every round. Actions are `f` (fold, only when
//! facing a bet), `c` (check or call) and `r` (bet or raise); the opening bet
//! counts toward the per-round raise cap.

use serde::{Deserialize, Serialize};

use crate::efg::{Game, Player, Step};
use crate::error::{Error, Result};

const RANK_NAMES: &[u8] = b"23456789TJQK";
const SUIT_NAMES: &[u8] = b"shdc";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeducConfig {
    pub ranks: usize,
    pub suits: usize,
    /// 1 (no public card) or 2 (public card dealt before the second round).
    pub rounds: usize,
    pub max_raises: usize,
    /// Bet size per round.
    pub bets: Vec<f64>,
    pub ante: f64,
}

impl LeducConfig {
    pub fn leduc() -> Self {
        Self {
            ranks: 3,
            suits: 2,
            rounds: 2,
            max_raises: 2,
            bets: vec![2.0, 4.0],
            ante: 1.0,
        }
    }

    pub fn kuhn() -> Self {
        Self {
            ranks: 3,
            suits: 1,
            rounds: 1,
            max_raises: 1,
            bets: vec![1.0],
            ante: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: &str| Err(Error::InvalidGame(m.into()));
        if self.ranks < 2 || self.ranks > RANK_NAMES.len() {
            return err("ranks must be in 2..=12");
        }
        if self.suits < 1 || self.suits > SUIT_NAMES.len() {
            return err("suits must be in 1..=4");
        }
        if !(1..=2).contains(&self.rounds) {
            return err("rounds must be 1 or 2");
        }
        if self.max_raises < 1 {
            return err("max_raises must be at least 1");
        }
        if self.bets.len() != self.rounds || self.bets.iter().any(|b| !(*b > 0.0)) {
            return err("need one positive bet size per round");
        }
        let needed = 2 + usize::from(self.rounds == 2);
        if self.ranks * self.suits < needed {
            return err("deck too small");
        }
        if !(self.ante >= 0.0) {
            return err("ante must be nonnegative");
        }
        Ok(())
    }

    fn card_name(&self, card: usize) -> String {
        let rank = RANK_NAMES[RANK_NAMES.len() - self.ranks + card / self.suits] as char;
        let suit = SUIT_NAMES[card % self.suits] as char;
        format!("{rank}{suit}")
    }
}

#[derive(Debug, Clone)]
pub struct LeducState {
    /// Player 1's card, player 2's card, then the public card.
    deal: Vec<usize>,
    /// Betting per round, as action characters.
    rounds: Vec<String>,
    contrib: [f64; 2],
    folded: Option<Player>,
}

#[derive(Debug, Clone)]
pub struct Leduc {
    config: LeducConfig,
}

impl Leduc {
    pub fn new(config: LeducConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config })
    }

    fn rank(&self, card: usize) -> usize {
        card / self.config.suits
    }

    fn showdown(&self, s: &LeducState) -> f64 {
        let stake = s.contrib[0];
        let r1 = self.rank(s.deal[0]);
        let r2 = self.rank(s.deal[1]);
        if let Some(&public) = s.deal.get(2) {
            let rp = self.rank(public);
            match (r1 == rp, r2 == rp) {
                (true, false) => return stake,
                (false, true) => return -stake,
                _ => {}
            }
        }
        match r1.cmp(&r2) {
            std::cmp::Ordering::Greater => stake,
            std::cmp::Ordering::Less => -stake,
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    fn deal(&self, s: &LeducState) -> Step<LeducState> {
        let remaining: Vec<usize> = (0..self.config.ranks * self.config.suits)
            .filter(|c| !s.deal.contains(c))
            .collect();
        let p = 1.0 / remaining.len() as f64;
        Step::Chance {
            outcomes: remaining
                .into_iter()
                .map(|c| {
                    let mut next = s.clone();
                    next.deal.push(c);
                    (self.config.card_name(c), p, next)
                })
                .collect(),
        }
    }
}

fn round_over(history: &str) -> bool {
    history.len() >= 2 && history.ends_with('c')
}

impl Game for Leduc {
    type State = LeducState;

    fn name(&self) -> String {
        if self.config == LeducConfig::leduc() {
            "leduc".into()
        } else if self.config == LeducConfig::kuhn() {
            "kuhn".into()
        } else {
            "leduc_variant".into()
        }
    }

    fn root(&self) -> LeducState {
        LeducState {
            deal: Vec::new(),
            rounds: vec![String::new()],
            contrib: [self.config.ante; 2],
            folded: None,
        }
    }

    fn step(&self, s: &LeducState) -> Step<LeducState> {
        if s.deal.len() < 2 {
            return self.deal(s);
        }
        if let Some(loser) = s.folded {
            let utility = match loser {
                Player::One => -s.contrib[0],
                Player::Two => s.contrib[1],
            };
            return Step::Terminal { utility };
        }
        let round = s.rounds.len() - 1;
        let history = &s.rounds[round];
        if round_over(history) {
            if round + 1 == self.config.rounds {
                return Step::Terminal {
                    utility: self.showdown(s),
                };
            }
            if s.deal.len() < 3 {
                return self.deal(s);
            }
            let mut next = s.clone();
            next.rounds.push(String::new());
            return self.step(&next);
        }

        let player = if history.len().is_multiple_of(2) {
            Player::One
        } else {
            Player::Two
        };
        let me = player.index();
        let facing = history.ends_with('r');
        let raises = history.matches('r').count();
        let bet = self.config.bets[round];

        let mut actions = Vec::with_capacity(3);
        let push = |label: char, f: &dyn Fn(&mut LeducState)| {
            let mut next = s.clone();
            next.rounds[round].push(label);
            f(&mut next);
            (label.to_string(), next)
        };
        if facing {
            actions.push(push('f', &|n| n.folded = Some(player)));
        }
        actions.push(push('c', &|n| n.contrib[me] = n.contrib[1 - me]));
        if raises < self.config.max_raises {
            actions.push(push('r', &|n| n.contrib[me] = n.contrib[1 - me] + bet));
        }

        let public = if round > 0 {
            self.config.card_name(s.deal[2])
        } else {
            String::new()
        };
        Step::Decision {
            player,
            infostate: format!(
                "{player}|{}|{public}|{}",
                self.config.card_name(s.deal[me]),
                s.rounds.join("/")
            ),
            actions,
        }
    }
}
