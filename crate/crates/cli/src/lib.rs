//! Experiment harness for the frcfr solver: sweeps over games, link
//! functions and feature sizes, CSV output, and a conformance suite.

pub mod args;
pub mod checks;
pub mod error;
pub mod manifest;
pub mod output;
pub mod run;
pub mod settings;
pub mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use frcfr::efg::write_tree;
use frcfr::games::{GameSpec, GAME_NAMES};

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};
pub use manifest::{RunManifest, RunSpec};
pub use settings::Settings;

pub fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve(args) => {
            if args.list_games {
                for name in GAME_NAMES {
                    println!("{name}");
                }
                return Ok(());
            }
            let file = match &args.config {
                Some(path) => settings::FileConfig::load(path)?,
                None => settings::FileConfig::default(),
            };
            let seed_base = std::env::var(settings::SEED_BASE_VAR).ok();
            let settings = Settings::resolve(&args, file, seed_base.as_deref())?;
            let manifest = RunManifest::build(&settings)?;
            log::info!("{} runs into {}", manifest.len(), manifest.out_dir.display());
            run::execute(&manifest, settings.jobs, settings.timing)?;
            Ok(())
        }
        Command::Validate(args) => {
            let results = validate::conformance_suite(args.quick);
            for check in &results {
                println!("{check}");
            }
            let failed = results.iter().filter(|c| !c.pass).count();
            println!("{} passed, {failed} failed", results.len() - failed);
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
            Ok(())
        }
        Command::DumpTree(args) => {
            let game = GameSpec::from_name(&args.game).map_err(|e| CliError::Usage(e.to_string()))?;
            let tree = game.build_tree()?;
            match &args.out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path).map_err(CliError::io(path))?);
                    write_tree(&tree, &mut w).and_then(|_| w.flush()).map_err(CliError::io(path))
                }
                None => {
                    let stdout = io::stdout();
                    let mut w = BufWriter::new(stdout.lock());
                    write_tree(&tree, &mut w).and_then(|_| w.flush()).map_err(CliError::io("<stdout>"))
                }
            }
        }
    }
}
