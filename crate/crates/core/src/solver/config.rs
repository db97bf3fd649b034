use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::links::LinkSpec;

/// Growth factor between consecutive log-spaced evaluation points.
pub const LOG_CADENCE_RATIO: f64 = 1.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Tabular,
    FunctionApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UpdateScheme {
    Simultaneous,
    Alternating,
}

impl FromStr for UpdateScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sim" | "simultaneous" => Ok(Self::Simultaneous),
            "alt" | "alternating" => Ok(Self::Alternating),
            other => Err(Error::InvalidConfig(format!("unknown update scheme `{other}`"))),
        }
    }
}

impl fmt::Display for UpdateScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Simultaneous => "sim",
            Self::Alternating => "alt",
        })
    }
}

/// When metrics are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cadence {
    /// Iteration 1, then each point about 1.3 times the previous one.
    Log,
    /// Every multiple of the given interval.
    Every(usize),
}

impl FromStr for Cadence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "log" {
            return Ok(Self::Log);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Self::Every(n)),
            _ => Err(Error::InvalidConfig(format!(
                "cadence must be `log` or a positive integer, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for Cadence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Log => f.write_str("log"),
            Self::Every(n) => write!(f, "{n}"),
        }
    }
}

impl Cadence {
    /// Sorted evaluation iterations in `1..=iterations`; always ends with
    /// `iterations`.
    pub fn points(&self, iterations: usize) -> Vec<usize> {
        let mut out = Vec::new();
        match *self {
            Cadence::Log => {
                let mut t = 1;
                while t < iterations {
                    out.push(t);
                    t = ((t as f64 * LOG_CADENCE_RATIO).ceil() as usize).max(t + 1);
                }
            }
            Cadence::Every(n) => {
                out.extend((1..).map(|k| k * n).take_while(|&t| t < iterations));
            }
        }
        if iterations >= 1 {
            out.push(iterations);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub game: GameSpec,
    pub link: LinkSpec,
    /// Hashed partitions per action group; 0 runs tabular regret tables.
    pub partitions: usize,
    pub buckets: usize,
    pub lambda: f64,
    pub iterations: usize,
    pub cadence: Cadence,
    pub seed: u64,
    pub update: UpdateScheme,
}

impl SolveConfig {
    pub fn tabular(game: GameSpec, link: LinkSpec, iterations: usize) -> Self {
        Self {
            game,
            link,
            partitions: 0,
            buckets: 10,
            lambda: 1e-3,
            iterations,
            cadence: Cadence::Log,
            seed: 1,
            update: UpdateScheme::Simultaneous,
        }
    }

    pub fn mode(&self) -> Mode {
        if self.partitions == 0 {
            Mode::Tabular
        } else {
            Mode::FunctionApprox
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if let Cadence::Every(0) = self.cadence {
            return Err(Error::InvalidConfig("cadence must be at least 1".into()));
        }
        if self.mode() == Mode::FunctionApprox {
            if self.buckets < 2 {
                return Err(Error::InvalidConfig("buckets must be at least 2".into()));
            }
            if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
                return Err(Error::InvalidConfig(format!("lambda must be >= 0, got {}", self.lambda)));
            }
        }
        Ok(())
    }
}
