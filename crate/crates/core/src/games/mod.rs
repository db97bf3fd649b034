//! Game constructors and the name registry used by the command line.

mod goofspiel;
mod leduc;
mod matrix;

use serde::{Deserialize, Serialize};

use crate::efg::{build_tree, GameTree};
use crate::error::{Error, Result};

pub use goofspiel::{Goofspiel, GoofspielConfig, GoofspielState};
pub use leduc::{Leduc, LeducConfig, LeducState};
pub use matrix::{MatrixGame, MatrixState};

/// Registered experiment games; [`GameSpec::from_name`] also accepts `kuhn`.
pub const GAME_NAMES: [&str; 5] = ["leduc", "goofspiel", "random_goofspiel", "rps", "biased_mp"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GameSpec {
    Leduc(LeducConfig),
    Goofspiel(GoofspielConfig),
    Matrix(MatrixGame),
}

impl GameSpec {
    pub fn leduc() -> Self {
        GameSpec::Leduc(LeducConfig::leduc())
    }

    /// Three-card one-round poker (Kuhn poker).
    pub fn kuhn() -> Self {
        GameSpec::Leduc(LeducConfig::kuhn())
    }

    pub fn goofspiel(ranks: usize) -> Self {
        GameSpec::Goofspiel(GoofspielConfig {
            ranks,
            random_deck: false,
        })
    }

    pub fn random_goofspiel(ranks: usize) -> Self {
        GameSpec::Goofspiel(GoofspielConfig {
            ranks,
            random_deck: true,
        })
    }

    pub fn rps() -> Self {
        GameSpec::Matrix(MatrixGame::rock_paper_scissors())
    }

    pub fn biased_matching_pennies() -> Self {
        GameSpec::Matrix(MatrixGame::biased_matching_pennies())
    }

    pub fn dominance() -> Self {
        GameSpec::Matrix(MatrixGame::dominance())
    }

    /// Matrix game with generic labels; panics on an empty or ragged matrix.
    pub fn matrix(name: &str, payoffs: Vec<Vec<f64>>) -> Self {
        GameSpec::Matrix(MatrixGame::new(name, payoffs).expect("valid payoff matrix"))
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "leduc" => Ok(Self::leduc()),
            "kuhn" => Ok(Self::kuhn()),
            "goofspiel" => Ok(Self::goofspiel(5)),
            "random_goofspiel" => Ok(Self::random_goofspiel(4)),
            "rps" => Ok(Self::rps()),
            "biased_mp" => Ok(Self::biased_matching_pennies()),
            other => Err(Error::UnknownGame(other.into())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GameSpec::Leduc(c) => leduc::Leduc::new(c.clone()).map_or("leduc_variant".into(), |g| {
                crate::efg::Game::name(&g)
            }),
            GameSpec::Goofspiel(c) if c.random_deck => "random_goofspiel".into(),
            GameSpec::Goofspiel(_) => "goofspiel".into(),
            GameSpec::Matrix(m) => m.name.clone(),
        }
    }

    pub fn build_tree(&self) -> Result<GameTree> {
        match self {
            GameSpec::Leduc(c) => build_tree(&Leduc::new(c.clone())?),
            GameSpec::Goofspiel(c) => build_tree(&Goofspiel::new(*c)?),
            GameSpec::Matrix(m) => build_tree(m),
        }
    }
}
