use serde::{Deserialize, Serialize};

use crate::efg::{Game, Player, Step};
use crate::error::{Error, Result};

/// One-shot zero-sum matrix game: player 1 picks a row, player 2 picks a
/// column without seeing it, player 1 receives the entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixGame {
    pub name: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub payoffs: Vec<Vec<f64>>,
}

impl MatrixGame {
    pub fn new(name: &str, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        let rows = payoffs.len();
        let cols = payoffs.first().map_or(0, Vec::len);
        Self::labelled(
            name,
            (0..rows).map(|i| format!("r{i}")).collect(),
            (0..cols).map(|j| format!("c{j}")).collect(),
            payoffs,
        )
    }

    pub fn labelled(
        name: &str,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        payoffs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if payoffs.is_empty() || payoffs[0].is_empty() {
            return Err(Error::InvalidGame("empty payoff matrix".into()));
        }
        if payoffs.len() != row_labels.len()
            || payoffs.iter().any(|r| r.len() != col_labels.len())
        {
            return Err(Error::InvalidGame("ragged payoff matrix".into()));
        }
        Ok(Self {
            name: name.into(),
            row_labels,
            col_labels,
            payoffs,
        })
    }

    pub fn rock_paper_scissors() -> Self {
        let labels = || vec!["rock".into(), "paper".into(), "scissors".into()];
        Self::labelled(
            "rps",
            labels(),
            labels(),
            vec![
                vec![0.0, -1.0, 1.0],
                vec![1.0, 0.0, -1.0],
                vec![-1.0, 1.0, 0.0],
            ],
        )
        .expect("valid matrix")
    }

    /// Equilibrium row mix (2/5, 3/5), value 1/5.
    pub fn biased_matching_pennies() -> Self {
        let labels = || vec!["heads".into(), "tails".into()];
        Self::labelled(
            "biased_mp",
            labels(),
            labels(),
            vec![vec![2.0, -1.0], vec![-1.0, 1.0]],
        )
        .expect("valid matrix")
    }

    /// Row 0 and column 0 are strictly dominant.
    pub fn dominance() -> Self {
        Self::new("dominance", vec![vec![1.0, 2.0], vec![0.0, 1.0]]).expect("valid matrix")
    }
}

#[derive(Debug, Clone, Copy)]
pub enum MatrixState {
    Start,
    Row(usize),
    Done(usize, usize),
}

impl Game for MatrixGame {
    type State = MatrixState;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn root(&self) -> MatrixState {
        MatrixState::Start
    }

    fn step(&self, state: &MatrixState) -> Step<MatrixState> {
        match *state {
            MatrixState::Start => Step::Decision {
                player: Player::One,
                infostate: "1".into(),
                actions: self
                    .row_labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.clone(), MatrixState::Row(i)))
                    .collect(),
            },
            MatrixState::Row(i) => Step::Decision {
                player: Player::Two,
                infostate: "2".into(),
                actions: self
                    .col_labels
                    .iter()
                    .enumerate()
                    .map(|(j, l)| (l.clone(), MatrixState::Done(i, j)))
                    .collect(),
            },
            MatrixState::Done(i, j) => Step::Terminal {
                utility: self.payoffs[i][j],
            },
        }
    }
}
