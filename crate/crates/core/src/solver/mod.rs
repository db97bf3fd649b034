//! Tabular CFR and f-RCFR iteration loops.
//!
//! Tabular regret tables are kept in both modes. In function-approximation
//! mode the policy comes from the estimators' predictions while the tables
//! measure the link-space estimation error and feed the bounds.

mod config;
mod metrics;

use std::time::Instant;

use crate::bounds::rcfr_bound;
use crate::efg::{exploitability, AveragePolicyTracker, BehaviorProfile, Evaluator, GameTree, Player};
use crate::error::{Error, Result};
use crate::links::link_error;
use crate::matcher::external_policy;
use crate::regress::{EstimatorParams, HashedRegretEstimator};

pub use config::{Cadence, Mode, SolveConfig, UpdateScheme, LOG_CADENCE_RATIO};
pub use metrics::MetricsRow;

#[derive(Debug, Clone)]
pub struct Solver<'t> {
    tree: &'t GameTree,
    config: SolveConfig,
    evaluator: Evaluator<'t>,
    /// Cumulative counterfactual regrets, sequence layout.
    regrets: Vec<f64>,
    /// Regret estimates driving the policy; equal to `regrets` when tabular.
    estimates: Vec<f64>,
    estimators: Option<[HashedRegretEstimator; 2]>,
    /// `ε(s)` per information state.
    errors: Vec<f64>,
    instant: Vec<f64>,
    profile: BehaviorProfile,
    average: AveragePolicyTracker,
    t: usize,
}

impl<'t> Solver<'t> {
    pub fn new(tree: &'t GameTree, config: SolveConfig) -> Result<Self> {
        config.validate()?;
        let estimators = match config.mode() {
            Mode::Tabular => None,
            Mode::FunctionApprox => {
                let params = EstimatorParams {
                    partitions: config.partitions,
                    buckets: config.buckets,
                    lambda: config.lambda,
                    seed: config.seed,
                };
                Some([
                    HashedRegretEstimator::new(tree, Player::One, params)?,
                    HashedRegretEstimator::new(tree, Player::Two, params)?,
                ])
            }
        };
        let n = tree.num_sequences();
        Ok(Self {
            tree,
            config,
            evaluator: Evaluator::new(tree),
            regrets: vec![0.0; n],
            estimates: vec![0.0; n],
            estimators,
            errors: vec![0.0; tree.num_infosets()],
            instant: vec![0.0; n],
            profile: BehaviorProfile::uniform(tree),
            average: AveragePolicyTracker::new(tree),
            t: 0,
        })
    }

    pub fn tree(&self) -> &'t GameTree {
        self.tree
    }

    pub fn config(&self) -> &SolveConfig {
        &self.config
    }

    pub fn iteration(&self) -> usize {
        self.t
    }

    /// Profile played at the most recent iteration (uniform before the first).
    pub fn current_profile(&self) -> &BehaviorProfile {
        &self.profile
    }

    pub fn average_profile(&self) -> BehaviorProfile {
        self.average.extract(self.tree)
    }

    pub fn regrets(&self) -> &[f64] {
        &self.regrets
    }

    pub fn estimates(&self) -> &[f64] {
        &self.estimates
    }

    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn estimators(&self) -> Option<&[HashedRegretEstimator; 2]> {
        self.estimators.as_ref()
    }

    /// Sets `player`'s rows from the current estimates. With `count_error`
    /// the link-space error of these rows is added to `ε(s)`.
    fn refresh_policy(&mut self, player: Player, count_error: bool) -> Result<()> {
        let link = self.config.link;
        let approx = self.estimators.is_some();
        for &s in self.tree.player_infosets(player) {
            let info = self.tree.infoset(s);
            let range = info.sequences();
            let estimates = if approx {
                &self.estimates[range.clone()]
            } else {
                &self.regrets[range.clone()]
            };
            let policy = external_policy(&link, estimates)?;
            self.profile.policy_mut(info).copy_from_slice(&policy);
            if approx && count_error {
                let g_true = link.gordon_g(&self.regrets[range])?;
                let g_est = link.gordon_g(estimates)?;
                self.errors[s] += link_error(&g_true, &g_est)?;
            }
        }
        Ok(())
    }

    /// Evaluates the current profile and folds each listed player's
    /// instantaneous regrets and reach-weighted policy into the totals.
    fn update(&mut self, players: &[Player]) -> Result<()> {
        self.evaluator.evaluate(&self.profile);
        for &player in players {
            self.evaluator.regrets_into(&self.profile, player, &mut self.instant);
            for &s in self.tree.player_infosets(player) {
                let info = self.tree.infoset(s);
                for seq in info.sequences() {
                    let r = self.instant[seq];
                    if !r.is_finite() {
                        return Err(Error::NonFiniteRegret {
                            iteration: self.t + 1,
                            infostate: info.key.clone(),
                        });
                    }
                    self.regrets[seq] += r;
                }
            }
            if let Some(estimators) = self.estimators.as_mut() {
                let est = &mut estimators[player.index()];
                est.accumulate(self.tree, &self.instant)?;
                est.predict_into(&mut self.estimates, self.tree);
            }
            let reach = self.evaluator.own_reach(player);
            self.average.accumulate(self.tree, &self.profile, player, &reach);
        }
        Ok(())
    }

    /// Runs one iteration. Under alternating updates player 2 responds to
    /// player 1's freshly updated policy.
    pub fn step(&mut self) -> Result<()> {
        match self.config.update {
            UpdateScheme::Simultaneous => {
                self.refresh_policy(Player::One, true)?;
                self.refresh_policy(Player::Two, true)?;
                self.update(&Player::BOTH)?;
            }
            UpdateScheme::Alternating => {
                self.refresh_policy(Player::One, true)?;
                self.refresh_policy(Player::Two, false)?;
                self.update(&[Player::One])?;
                self.refresh_policy(Player::One, false)?;
                self.refresh_policy(Player::Two, true)?;
                self.update(&[Player::Two])?;
            }
        }
        self.t += 1;
        Ok(())
    }

    /// `(1/t) Σ_s max(max_a R_t(s, a), 0)` for `player`.
    pub fn average_regret(&self, player: Player) -> f64 {
        if self.t == 0 {
            return 0.0;
        }
        let total: f64 = self
            .tree
            .player_infosets(player)
            .iter()
            .map(|&s| {
                self.regrets[self.tree.infoset(s).sequences()]
                    .iter()
                    .fold(0.0f64, |m, &r| m.max(r))
            })
            .sum();
        total / self.t as f64
    }

    pub fn metrics(&self, wall_ms: f64) -> Result<MetricsRow> {
        let mut row = MetricsRow {
            iteration: self.t,
            exploitability_milli: exploitability(self.tree, &self.average_profile()),
            avg_regret: [0.0; 2],
            err_sum: [0.0; 2],
            bound: [0.0; 2],
            bound_uniform: [0.0; 2],
            wall_ms,
        };
        for player in Player::BOTH {
            let i = player.index();
            let states = self.tree.player_infosets(player);
            let counts: Vec<usize> = states.iter().map(|&s| self.tree.infoset(s).num_actions()).collect();
            let errors: Vec<f64> = states.iter().map(|&s| self.errors[s]).collect();
            row.avg_regret[i] = self.average_regret(player);
            row.err_sum[i] = errors.iter().sum();
            let bound = rcfr_bound(
                &self.config.link,
                self.t.max(1),
                self.tree.utility_bound(),
                &counts,
                &errors,
            )?;
            row.bound[i] = bound.per_state;
            row.bound_uniform[i] = bound.uniform;
        }
        Ok(row)
    }

    /// Runs to the configured iteration count, handing each cadence row to
    /// `on_row` as soon as it is computed.
    pub fn run<F: FnMut(&MetricsRow)>(&mut self, mut on_row: F) -> Result<Vec<MetricsRow>> {
        let start = Instant::now();
        let mut rows = Vec::new();
        for point in self.config.cadence.points(self.config.iterations) {
            while self.t < point {
                self.step()?;
            }
            let row = self.metrics(start.elapsed().as_secs_f64() * 1000.0)?;
            on_row(&row);
            rows.push(row);
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub rows: Vec<MetricsRow>,
    pub average: BehaviorProfile,
}

/// Builds the game and runs `config` to completion.
pub fn solve(config: &SolveConfig) -> Result<SolveOutput> {
    let tree = config.game.build_tree()?;
    let mut solver = Solver::new(&tree, config.clone())?;
    let rows = solver.run(|_| {})?;
    Ok(SolveOutput {
        rows,
        average: solver.average_profile(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::GameSpec;
    use crate::links::LinkSpec;

    fn p2() -> LinkSpec {
        LinkSpec::polynomial(2.0).unwrap()
    }

    #[test]
    fn first_iteration_is_uniform() {
        let tree = GameSpec::leduc().build_tree().unwrap();
        let mut solver = Solver::new(&tree, SolveConfig::tabular(GameSpec::leduc(), p2(), 1)).unwrap();
        solver.step().unwrap();
        assert_eq!(solver.current_profile(), &BehaviorProfile::uniform(&tree));
    }

    #[test]
    fn tables_equal_summed_instantaneous_regrets() {
        let tree = GameSpec::kuhn().build_tree().unwrap();
        let mut solver = Solver::new(&tree, SolveConfig::tabular(GameSpec::kuhn(), p2(), 10)).unwrap();
        let mut sum = vec![0.0; tree.num_sequences()];
        for _ in 0..10 {
            solver.refresh_policy(Player::One, false).unwrap();
            solver.refresh_policy(Player::Two, false).unwrap();
            let profile = solver.current_profile().clone();
            solver.step().unwrap();
            for player in Player::BOTH {
                let r = crate::efg::instantaneous_regrets(&tree, &profile, player);
                for &s in tree.player_infosets(player) {
                    for seq in tree.infoset(s).sequences() {
                        sum[seq] += r[seq];
                    }
                }
            }
        }
        for (a, b) in solver.regrets().iter().zip(&sum) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn cadence_beyond_horizon_gives_one_row() {
        let mut config = SolveConfig::tabular(GameSpec::rps(), p2(), 5);
        config.cadence = Cadence::Every(100);
        let out = solve(&config).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].iteration, 5);
    }

    #[test]
    fn rps_converges_under_bound() {
        let mut config = SolveConfig::tabular(GameSpec::rps(), p2(), 1000);
        config.cadence = Cadence::Every(10);
        let out = solve(&config).unwrap();
        let at10 = out.rows.iter().find(|r| r.iteration == 10).unwrap();
        let last = out.rows.last().unwrap();
        assert!(last.exploitability_milli <= at10.exploitability_milli);
        for row in &out.rows {
            for i in 0..2 {
                assert_eq!(row.err_sum[i], 0.0);
                assert!(row.avg_regret[i] <= row.bound[i]);
            }
        }
    }

    #[test]
    fn alternating_updates_also_converge() {
        let mut config = SolveConfig::tabular(GameSpec::kuhn(), p2(), 2000);
        config.update = UpdateScheme::Alternating;
        let out = solve(&config).unwrap();
        assert!(out.rows.last().unwrap().exploitability_milli < 10.0);
    }

    #[test]
    fn rejects_invalid_config() {
        let tree = GameSpec::rps().build_tree().unwrap();
        let mut config = SolveConfig::tabular(GameSpec::rps(), p2(), 0);
        assert!(Solver::new(&tree, config.clone()).is_err());
        config.iterations = 1;
        config.partitions = 1;
        config.buckets = 1;
        assert!(Solver::new(&tree, config).is_err());
    }
}
