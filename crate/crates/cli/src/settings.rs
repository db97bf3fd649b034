//! Merging command-line flags with an optional TOML config file.

use std::fs;
use std::path::{Path, PathBuf};

use frcfr::solver::{Cadence, UpdateScheme};
use serde::Deserialize;

use crate::args::{LinkArg, SolveArgs};
use crate::error::{CliError, CliResult};

pub const DEFAULT_BUCKETS: usize = 10;
pub const DEFAULT_LAMBDA: f64 = 1e-3;
pub const DEFAULT_ITERATIONS: usize = 5000;
pub const DEFAULT_OUT: &str = "runs";
pub const DEFAULT_SEEDS: std::ops::RangeInclusive<u64> = 1..=5;
pub const DEFAULT_POLY_PARAM: f64 = 2.0;
pub const DEFAULT_EXP_PARAM: f64 = 0.1;
/// Environment variable added to every seed.
pub const SEED_BASE_VAR: &str = "FRCFR_SEED_BASE";

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            Self::One(x) => vec![x],
            Self::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SeedsValue {
    Text(String),
    One(u64),
    Many(Vec<u64>),
}

/// Config file contents; keys mirror the flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    game: Option<OneOrMany<String>>,
    link: Option<OneOrMany<LinkArg>>,
    param: Option<OneOrMany<f64>>,
    partitions: Option<OneOrMany<usize>>,
    tabular: Option<bool>,
    buckets: Option<usize>,
    lambda: Option<f64>,
    iterations: Option<usize>,
    seeds: Option<SeedsValue>,
    cadence: Option<String>,
    update: Option<String>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    timing: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text).map_err(|source| CliError::Config {
            path: path.to_owned(),
            source,
        })
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Fully resolved sweep settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub games: Vec<String>,
    pub links: Vec<LinkArg>,
    /// Explicit parameters; `None` uses each family's default.
    pub params: Option<Vec<f64>>,
    pub partitions: Vec<usize>,
    pub buckets: usize,
    pub lambda: f64,
    pub iterations: usize,
    pub seeds: Vec<u64>,
    pub cadence: Cadence,
    pub update: UpdateScheme,
    pub jobs: usize,
    pub out: PathBuf,
    pub timing: bool,
}

impl Settings {
    /// Flags override the file; `seed_base` is the raw value of
    /// [`SEED_BASE_VAR`], if set.
    pub fn resolve(args: &SolveArgs, file: FileConfig, seed_base: Option<&str>) -> CliResult<Self> {
        let games = args
            .game
            .clone()
            .or(file.game.map(OneOrMany::into_vec))
            .ok_or_else(|| CliError::Usage("--game is required".into()))?;
        let links = args
            .link
            .clone()
            .or(file.link.map(OneOrMany::into_vec))
            .unwrap_or_else(|| vec![LinkArg::Poly]);
        let params = args.param.clone().or(file.param.map(OneOrMany::into_vec));
        let tabular = args.tabular || file.tabular.unwrap_or(false);
        let explicit = args.partitions.clone().or(file.partitions.map(OneOrMany::into_vec));
        let partitions = match (tabular, explicit) {
            (true, Some(p)) if p.iter().any(|&n| n != 0) => {
                return Err(CliError::Usage(
                    "--tabular conflicts with nonzero --partitions".into(),
                ))
            }
            (_, Some(p)) => p,
            (_, None) => vec![0],
        };
        let seeds = match (&args.seeds, file.seeds) {
            (Some(text), _) => parse_seeds(text)?,
            (None, Some(SeedsValue::Text(text))) => parse_seeds(&text)?,
            (None, Some(SeedsValue::One(s))) => vec![s],
            (None, Some(SeedsValue::Many(v))) => v,
            (None, None) => DEFAULT_SEEDS.collect(),
        };
        let base = match seed_base {
            Some(raw) => raw.trim().parse::<u64>().map_err(|_| {
                CliError::Usage(format!("{SEED_BASE_VAR} must be a nonnegative integer, got `{raw}`"))
            })?,
            None => 0,
        };
        let seeds = seeds
            .into_iter()
            .map(|s| {
                s.checked_add(base)
                    .ok_or_else(|| CliError::Usage(format!("seed {s} + {base} overflows")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let cadence = args
            .cadence
            .clone()
            .or(file.cadence)
            .map(|c| c.parse::<Cadence>())
            .transpose()
            .map_err(usage)?
            .unwrap_or(Cadence::Log);
        let update = args
            .update
            .clone()
            .or(file.update)
            .map(|u| u.parse::<UpdateScheme>())
            .transpose()
            .map_err(usage)?
            .unwrap_or(UpdateScheme::Simultaneous);
        let jobs = args.jobs.or(file.jobs).unwrap_or_else(default_jobs);
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        let settings = Self {
            games,
            links,
            params,
            partitions,
            buckets: args.buckets.or(file.buckets).unwrap_or(DEFAULT_BUCKETS),
            lambda: args.lambda.or(file.lambda).unwrap_or(DEFAULT_LAMBDA),
            iterations: args.iterations.or(file.iterations).unwrap_or(DEFAULT_ITERATIONS),
            seeds,
            cadence,
            update,
            jobs,
            out: args
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            timing: args.timing || file.timing.unwrap_or(false),
        };
        for (name, empty) in [
            ("--game", settings.games.is_empty()),
            ("--link", settings.links.is_empty()),
            ("--partitions", settings.partitions.is_empty()),
            ("--seeds", settings.seeds.is_empty()),
            ("--param", settings.params.as_ref().is_some_and(Vec::is_empty)),
        ] {
            if empty {
                return Err(CliError::Usage(format!("{name} needs at least one value")));
            }
        }
        Ok(settings)
    }

    /// Parameters swept for `link`.
    pub fn params_for(&self, link: LinkArg) -> Vec<f64> {
        match (&self.params, link) {
            (Some(p), _) => p.clone(),
            (None, LinkArg::Poly) => vec![DEFAULT_POLY_PARAM],
            (None, LinkArg::Exp) => vec![DEFAULT_EXP_PARAM],
        }
    }
}

fn usage(e: frcfr::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// `a..b` (inclusive), `a..=b`, or a comma-separated list.
pub fn parse_seeds(text: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::Usage(format!("cannot parse seeds `{text}`"));
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}
