//! Shared fixtures for the benchmarks.

use frcfr::games::GameSpec;
use frcfr::links::LinkSpec;
use frcfr::solver::SolveConfig;
use frcfr::GameTree;

pub fn tree(game: &GameSpec) -> GameTree {
    game.build_tree().expect("registered games build")
}

/// Leduc with `p = 2`; `partitions = 0` is tabular.
pub fn leduc_config(partitions: usize) -> SolveConfig {
    let mut config = SolveConfig::tabular(
        GameSpec::leduc(),
        LinkSpec::polynomial(2.0).expect("valid exponent"),
        1_000_000,
    );
    config.partitions = partitions;
    config
}
