use std::collections::HashSet;
use std::path::PathBuf;

use frcfr::games::GameSpec;
use frcfr::links::{LinkFamily, LinkSpec};
use frcfr::solver::SolveConfig;

use crate::args::LinkArg;
use crate::error::{CliError, CliResult};
use crate::settings::Settings;

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub config: SolveConfig,
    /// Output file name; encodes every swept setting.
    pub file_name: String,
    /// Runs sharing a group differ only by seed.
    pub group: String,
}

/// Resolved runs: games × links × params × partitions × seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub runs: Vec<RunSpec>,
    pub out_dir: PathBuf,
}

impl RunManifest {
    pub fn build(settings: &Settings) -> CliResult<Self> {
        let mut runs = Vec::new();
        let mut names = HashSet::new();
        for game_name in &settings.games {
            let game = GameSpec::from_name(game_name).map_err(|e| CliError::Usage(e.to_string()))?;
            for &link_arg in &settings.links {
                let family = match link_arg {
                    LinkArg::Poly => LinkFamily::Polynomial,
                    LinkArg::Exp => LinkFamily::Exponential,
                };
                for param in settings.params_for(link_arg) {
                    let link = LinkSpec::new(family, param).map_err(|e| CliError::Usage(e.to_string()))?;
                    for &partitions in &settings.partitions {
                        for &seed in &settings.seeds {
                            let config = SolveConfig {
                                game: game.clone(),
                                link,
                                partitions,
                                buckets: settings.buckets,
                                lambda: settings.lambda,
                                iterations: settings.iterations,
                                cadence: settings.cadence,
                                seed,
                                update: settings.update,
                            };
                            config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
                            let group = group_name(&config);
                            let file_name = format!("{group}_seed{seed}.csv");
                            if !names.insert(file_name.clone()) {
                                return Err(CliError::Usage(format!("duplicate run {file_name}")));
                            }
                            runs.push(RunSpec {
                                config,
                                file_name,
                                group,
                            });
                        }
                    }
                }
            }
        }
        Ok(Self {
            runs,
            out_dir: settings.out.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }
}

fn group_name(c: &SolveConfig) -> String {
    format!(
        "{}_{}_n{}_m{}_lam{}_{}_T{}",
        c.game.name(),
        c.link.tag(),
        c.partitions,
        c.buckets,
        c.lambda,
        c.update,
        c.iterations
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::SolveArgs;
    use crate::settings::FileConfig;

    fn manifest(args: SolveArgs) -> CliResult<RunManifest> {
        RunManifest::build(&Settings::resolve(&args, FileConfig::default(), None)?)
    }

    #[test]
    fn cross_product_with_unique_names() {
        let m = manifest(SolveArgs {
            game: Some(vec!["leduc".into(), "rps".into()]),
            link: Some(vec![LinkArg::Poly, LinkArg::Exp]),
            param: Some(vec![1.5, 2.0]),
            partitions: Some(vec![0, 5]),
            seeds: Some("1..3".into()),
            ..SolveArgs::default()
        })
        .unwrap();
        assert_eq!(m.len(), 2 * 2 * 2 * 2 * 3);
        let names: HashSet<_> = m.runs.iter().map(|r| r.file_name.as_str()).collect();
        assert_eq!(names.len(), m.len());
        assert_eq!(
            m.runs[0].file_name,
            "leduc_poly1.5_n0_m10_lam0.001_sim_T5000_seed1.csv"
        );
        let groups: HashSet<_> = m.runs.iter().map(|r| r.group.as_str()).collect();
        assert_eq!(groups.len(), m.len() / 3);
    }

    #[test]
    fn invalid_values_are_usage_errors() {
        let bad_game = SolveArgs {
            game: Some(vec!["chess".into()]),
            ..SolveArgs::default()
        };
        assert!(matches!(manifest(bad_game), Err(CliError::Usage(_))));
        let bad_param = SolveArgs {
            game: Some(vec!["rps".into()]),
            param: Some(vec![0.5]),
            ..SolveArgs::default()
        };
        assert!(matches!(manifest(bad_param), Err(CliError::Usage(_))));
        let duplicate = SolveArgs {
            game: Some(vec!["rps".into()]),
            seeds: Some("1,1".into()),
            ..SolveArgs::default()
        };
        assert!(matches!(manifest(duplicate), Err(CliError::Usage(_))));
        let one_bucket = SolveArgs {
            game: Some(vec!["rps".into()]),
            partitions: Some(vec![3]),
            buckets: Some(1),
            ..SolveArgs::default()
        };
        assert!(matches!(manifest(one_bucket), Err(CliError::Usage(_))));
    }
}
