use frcfr::games::GameSpec;
use frcfr::links::LinkSpec;

use crate::checks::{self, Check};

/// Seed of the randomized batteries.
pub const BATTERY_SEED: u64 = 20;
pub const BLACKWELL_DRAWS: usize = 1000;
pub const FIXED_POINT_DRAWS: usize = 500;
pub const RIDGE_SEQUENCES: usize = 100;

/// Info-state counts, the Blackwell and fixed-point batteries (skipped when
/// `quick`), and bound dominance on the small oracle games.
pub fn conformance_suite(quick: bool) -> Vec<Check> {
    let mut out = checks::game_conformance();
    if !quick {
        out.extend(checks::exact_blackwell(BLACKWELL_DRAWS, BATTERY_SEED));
        out.extend(checks::approximate_blackwell(BLACKWELL_DRAWS, BATTERY_SEED));
        out.push(checks::internal_fixed_points(FIXED_POINT_DRAWS, BATTERY_SEED));
        out.push(checks::ridge_additivity(RIDGE_SEQUENCES, BATTERY_SEED));
    }
    let iterations = if quick { 200 } else { 1000 };
    for game in [GameSpec::rps(), GameSpec::biased_matching_pennies(), GameSpec::kuhn()] {
        for link in [
            LinkSpec::polynomial(2.0).expect("valid exponent"),
            LinkSpec::exponential(0.1).expect("valid temperature"),
        ] {
            out.push(checks::bound_dominance(&game, link, iterations));
        }
    }
    out
}
