use serde::{Deserialize, Serialize};

/// One evaluation record. Per-player arrays are indexed by player.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub iteration: usize,
    /// Exploitability of the average profile, in thousandths of a utility unit.
    pub exploitability_milli: f64,
    /// `(1/t) Σ_s max(max_a R_t(s, a), 0)`.
    pub avg_regret: [f64; 2],
    /// `Σ_s ε_i(s)`, cumulative link-space estimation error.
    pub err_sum: [f64; 2],
    /// Per-state bound on `avg_regret`.
    pub bound: [f64; 2],
    /// Looser bound using the largest action count and error.
    pub bound_uniform: [f64; 2],
    pub wall_ms: f64,
}
