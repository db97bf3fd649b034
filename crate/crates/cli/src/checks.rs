//! Conformance checks shared by `frcfr validate` and the acceptance suite.
//!
//! Each check recomputes its reference quantity independently of the code
//! under test: link outputs, expected regrets, transition matrices and
//! stationary distributions are rebuilt here from their definitions.

use std::fmt;
use std::time::{Duration, Instant};

use frcfr::efg::{exploitability, BehaviorProfile, GameTree};
use frcfr::games::GameSpec;
use frcfr::links::{LinkFamily, LinkSpec};
use frcfr::matcher::{internal_fixed_point, policy_from_estimates};
use frcfr::odp::{TransformationKind, TransformationSet};
use frcfr::regress::{RidgeSystem, SparseRow};
use frcfr::solver::{solve, SolveConfig, Solver, UpdateScheme};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

/// Expected information-state counts of the registered imperfect-information games.
pub const EXPECTED_INFOSETS: [(&str, usize); 3] =
    [("leduc", 936), ("goofspiel", 2124), ("random_goofspiel", 3608)];
pub const CONFORMANCE_TIME_LIMIT: Duration = Duration::from_secs(10);

pub fn infoset_count(label: &str, tree: frcfr::Result<GameTree>, expected: usize) -> Check {
    let name = format!("info states {label}");
    match tree {
        Ok(tree) => {
            let got = tree.num_infosets();
            Check::new(name, got == expected, format!("{got} (expected {expected})"))
        }
        Err(e) => Check::new(name, false, format!("build failed: {e}")),
    }
}

/// Counts for every registered game plus the total build time.
pub fn game_conformance() -> Vec<Check> {
    let start = Instant::now();
    let mut checks: Vec<Check> = EXPECTED_INFOSETS
        .iter()
        .map(|&(name, expected)| {
            let tree = GameSpec::from_name(name).and_then(|g| g.build_tree());
            infoset_count(name, tree, expected)
        })
        .collect();
    let elapsed = start.elapsed();
    checks.push(Check::new(
        "tree build time",
        elapsed < CONFORMANCE_TIME_LIMIT,
        format!("{:.2} s (limit {} s)", elapsed.as_secs_f64(), CONFORMANCE_TIME_LIMIT.as_secs()),
    ));
    checks
}

/// Link families exercised by the Blackwell batteries.
pub fn battery_links() -> Vec<LinkSpec> {
    let mut out: Vec<LinkSpec> = [1.5, 2.0, 3.0]
        .into_iter()
        .map(|p| LinkSpec::polynomial(p).expect("valid exponent"))
        .collect();
    out.extend([0.1, 1.0].into_iter().map(|t| LinkSpec::exponential(t).expect("valid temperature")));
    out
}

/// Link output computed straight from the family's formula.
fn link_reference(spec: &LinkSpec, x: &[f64]) -> Vec<f64> {
    match spec.family() {
        LinkFamily::Polynomial => x.iter().map(|v| v.max(0.0).powf(spec.param() - 1.0)).collect(),
        LinkFamily::Exponential => x.iter().map(|v| (v / spec.param()).exp()).collect(),
    }
}

/// Expected instantaneous regret per transformation. External members
/// come one per target action; internal members are the identity then
/// `a -> b` for `a != b` in row-major order.
fn expected_regret_reference(kind: TransformationKind, sigma: &[f64], r: &[f64]) -> Vec<f64> {
    let n = r.len();
    let value: f64 = sigma.iter().zip(r).map(|(s, x)| s * x).sum();
    match kind {
        TransformationKind::External => r.iter().map(|x| x - value).collect(),
        _ => {
            let mut out = vec![0.0];
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        out.push(sigma[a] * (r[b] - r[a]));
                    }
                }
            }
            out
        }
    }
}

struct Draw {
    kind: TransformationKind,
    phi: TransformationSet,
    utility_bound: f64,
    regrets: Vec<f64>,
    rewards: Vec<f64>,
}

fn draw(rng: &mut ChaCha8Rng) -> Draw {
    let n = rng.gen_range(2..=5);
    let kind = if rng.gen_bool(0.5) {
        TransformationKind::External
    } else {
        TransformationKind::Internal
    };
    let phi = TransformationSet::enumerate(kind, n).expect("nonempty action set");
    let utility_bound = rng.gen_range(0.5..5.0);
    let regrets = (0..phi.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let rewards = (0..n).map(|_| rng.gen_range(-utility_bound..=utility_bound)).collect();
    Draw {
        kind,
        phi,
        utility_bound,
        regrets,
        rewards,
    }
}

fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Matching on the true regrets makes `f(R) · E_σ[ρ]` vanish.
pub fn exact_blackwell(draws: usize, seed: u64) -> Vec<Check> {
    battery_links()
        .into_iter()
        .enumerate()
        .map(|(k, spec)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut passed = 0;
            let mut worst = 0.0f64;
            for _ in 0..draws {
                let d = draw(&mut rng);
                let Ok(policy) = policy_from_estimates(&spec, &d.regrets, &d.phi) else {
                    continue;
                };
                let y = link_reference(&spec, &d.regrets);
                let rho = expected_regret_reference(d.kind, &policy.distribution, &d.rewards);
                let scale = l1(&y) * d.utility_bound;
                let lhs = dot(&y, &rho).abs();
                if lhs <= 1e-8 * scale {
                    passed += 1;
                }
                if scale > 0.0 {
                    worst = worst.max(lhs / scale);
                }
            }
            Check::new(
                format!("exact Blackwell {}", spec.tag()),
                passed == draws,
                format!("{passed}/{draws} pass, worst |lhs|/(|f(R)|_1 U) = {worst:.2e}"),
            )
        })
        .collect()
}

/// Matching on perturbed estimates keeps `f(R) · E_σ[ρ]` within
/// `2U ||f(R) - f(R̃)||_1`.
pub fn approximate_blackwell(draws: usize, seed: u64) -> Vec<Check> {
    battery_links()
        .into_iter()
        .enumerate()
        .map(|(k, spec)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(100 + k as u64);
            let mut passed = 0;
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..draws {
                let d = draw(&mut rng);
                let noise = rng.gen_range(0.01..1.0);
                let estimates: Vec<f64> = d
                    .regrets
                    .iter()
                    .map(|r| r + rng.gen_range(-noise..=noise))
                    .collect();
                let Ok(policy) = policy_from_estimates(&spec, &estimates, &d.phi) else {
                    continue;
                };
                let y = link_reference(&spec, &d.regrets);
                let y_est = link_reference(&spec, &estimates);
                let rho = expected_regret_reference(d.kind, &policy.distribution, &d.rewards);
                let lhs = dot(&y, &rho);
                let gap: Vec<f64> = y.iter().zip(&y_est).map(|(a, b)| a - b).collect();
                let rhs = 2.0 * d.utility_bound * l1(&gap);
                if lhs <= rhs + 1e-8 {
                    passed += 1;
                }
                worst = worst.max(lhs - rhs);
            }
            Check::new(
                format!("approximate Blackwell {}", spec.tag()),
                passed == draws,
                format!("{passed}/{draws} pass, max lhs - rhs = {worst:.3e}"),
            )
        })
        .collect()
}

/// Row-stochastic operator of weights over the internal transformations,
/// assembled from what each transformation does to each action.
fn internal_operator_reference(n: usize, weights: &[f64]) -> DMatrix<f64> {
    let total: f64 = weights.iter().sum();
    let mut q = DMatrix::identity(n, n) * (weights[0] / total);
    let mut k = 1;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let w = weights[k] / total;
            k += 1;
            for c in 0..n {
                if c == a {
                    q[(a, b)] += w;
                } else {
                    q[(c, c)] += w;
                }
            }
        }
    }
    q
}

/// Stationary distribution as the null vector of `Qᵀ - I` from an SVD.
fn stationary_by_svd(q: &DMatrix<f64>) -> Vec<f64> {
    let n = q.nrows();
    let a = q.transpose() - DMatrix::identity(n, n);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smallest = (0..n)
        .min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]))
        .expect("nonempty matrix");
    let v: Vec<f64> = v_t.row(smallest).iter().copied().collect();
    let total: f64 = v.iter().sum();
    v.iter().map(|x| x / total).collect()
}

pub fn internal_fixed_points(draws: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(200);
    let mut passed = 0;
    let mut worst_residual = 0.0f64;
    let mut worst_gap = 0.0f64;
    for _ in 0..draws {
        let n = rng.gen_range(2..=4);
        let phi = TransformationSet::internal(n).expect("nonempty action set");
        let weights: Vec<f64> = (0..phi.len()).map(|_| rng.gen_range(1e-3..1.0)).collect();
        let Ok(policy) = internal_fixed_point(&weights, &phi) else {
            continue;
        };
        let sigma = &policy.distribution;
        let q = internal_operator_reference(n, &weights);
        let residual: f64 = (0..n)
            .map(|b| ((0..n).map(|a| sigma[a] * q[(a, b)]).sum::<f64>() - sigma[b]).abs())
            .sum();
        let direct = stationary_by_svd(&q);
        let gap: f64 = sigma.iter().zip(&direct).map(|(a, b)| (a - b).abs()).sum();
        if residual <= 1e-10 && gap <= 1e-8 {
            passed += 1;
        }
        worst_residual = worst_residual.max(residual);
        worst_gap = worst_gap.max(gap);
    }
    Check::new(
        "internal fixed point",
        passed == draws,
        format!("{passed}/{draws} pass, worst residual {worst_residual:.2e}, worst gap to direct solve {worst_gap:.2e}"),
    )
}

/// Measured average positive regret never exceeds the per-state bound at
/// any recorded iteration, for either player.
pub fn bound_dominance(game: &GameSpec, link: LinkSpec, iterations: usize) -> Check {
    let name = format!("bound dominance {} {}", game.name(), link.tag());
    let config = SolveConfig::tabular(game.clone(), link, iterations);
    match solve(&config) {
        Ok(out) => {
            let mut violations = 0;
            let mut max_ratio = 0.0f64;
            for row in &out.rows {
                for i in 0..2 {
                    if row.avg_regret[i] > row.bound[i] {
                        violations += 1;
                    }
                    max_ratio = max_ratio.max(row.avg_regret[i] / row.bound[i]);
                }
            }
            Check::new(
                name,
                violations == 0,
                format!(
                    "{violations} violations over {} rows, max measured/bound = {max_ratio:.3}",
                    out.rows.len()
                ),
            )
        }
        Err(e) => Check::new(name, false, format!("run failed: {e}")),
    }
}

/// Fitting summed targets equals summing fits, on random fixed designs.
pub fn ridge_additivity(sequences: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(300);
    let mut passed = 0;
    let mut worst = 0.0f64;
    for _ in 0..sequences {
        let dim = rng.gen_range(2..40);
        let rows = rng.gen_range(2..60);
        let design: Vec<SparseRow> = (0..rows)
            .map(|_| {
                let nnz = rng.gen_range(1..=dim.min(5));
                let mut cols: Vec<usize> = (0..nnz).map(|_| rng.gen_range(0..dim)).collect();
                cols.sort_unstable();
                cols.dedup();
                cols.into_iter()
                    .map(|j| (j, if rng.gen_bool(0.5) { 1.0 } else { -1.0 }))
                    .collect()
            })
            .collect();
        let lambda = [1e-3, 1e-1, 1.0][rng.gen_range(0..3)];
        let Ok(system) = RidgeSystem::new(design, dim, lambda) else {
            continue;
        };
        let steps = rng.gen_range(2..=20);
        let mut summed_targets = vec![0.0; rows];
        let mut summed_weights = vec![0.0; dim];
        let mut ok = true;
        for _ in 0..steps {
            let targets: Vec<f64> = (0..rows).map(|_| rng.gen_range(-10.0..10.0)).collect();
            for (s, t) in summed_targets.iter_mut().zip(&targets) {
                *s += t;
            }
            match system.solve(&targets) {
                Ok(w) => summed_weights.iter_mut().zip(&w).for_each(|(s, x)| *s += x),
                Err(_) => ok = false,
            }
        }
        let Ok(direct) = system.solve(&summed_targets) else {
            continue;
        };
        let gap = summed_weights
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(gap);
        if ok && gap <= 1e-8 {
            passed += 1;
        }
    }
    Check::new(
        "ridge additivity",
        passed == sequences,
        format!("{passed}/{sequences} pass, worst max-abs gap {worst:.2e}"),
    )
}

/// With one partition, at least as many buckets as states and a negligible
/// regularizer, the regression reproduces the regret tables, so both solvers
/// play the same policies every iteration.
pub fn full_rank_reduction(iterations: usize) -> Check {
    let name = "full-rank reduction leduc";
    let spec = GameSpec::leduc();
    let tree = match spec.build_tree() {
        Ok(t) => t,
        Err(e) => return Check::new(name, false, format!("build failed: {e}")),
    };
    let link = LinkSpec::polynomial(2.0).expect("valid exponent");
    let tabular_config = SolveConfig::tabular(spec, link, iterations);
    let mut approx_config = tabular_config.clone();
    approx_config.partitions = 1;
    approx_config.buckets = tree.num_infosets().max(1000);
    approx_config.lambda = 1e-12;
    let solvers = Solver::new(&tree, tabular_config).and_then(|a| Ok((a, Solver::new(&tree, approx_config)?)));
    let (mut tabular, mut approx) = match solvers {
        Ok(pair) => pair,
        Err(e) => return Check::new(name, false, format!("setup failed: {e}")),
    };
    let mut worst = 0.0f64;
    for t in 1..=iterations {
        if let Err(e) = tabular.step().and_then(|_| approx.step()) {
            return Check::new(name, false, format!("iteration {t} failed: {e}"));
        }
        for info in tree.infosets() {
            let gap: f64 = tabular
                .current_profile()
                .policy(info)
                .iter()
                .zip(approx.current_profile().policy(info))
                .map(|(a, b)| (a - b).abs())
                .sum();
            worst = worst.max(gap);
        }
    }
    Check::new(
        name,
        worst <= 1e-6,
        format!("max per-state L1 gap over {iterations} iterations = {worst:.2e}"),
    )
}

/// Average-profile exploitability of tabular matching with `p = 2`.
pub fn equilibrium_sanity(iterations: usize, update: UpdateScheme) -> Vec<Check> {
    let mut checks = Vec::new();
    let rps = GameSpec::rps();
    match rps.build_tree() {
        Ok(tree) => {
            let value = exploitability(&tree, &BehaviorProfile::uniform(&tree));
            checks.push(Check::new(
                "uniform rps exploitability",
                value == 0.0,
                format!("{value} milli"),
            ));
        }
        Err(e) => checks.push(Check::new("uniform rps exploitability", false, e.to_string())),
    }
    for game in [rps, GameSpec::biased_matching_pennies()] {
        let name = format!("equilibrium {} ({update} updates)", game.name());
        let mut config = SolveConfig::tabular(game, LinkSpec::polynomial(2.0).expect("valid exponent"), iterations);
        config.update = update;
        checks.push(match solve(&config) {
            Ok(out) => {
                let last = out.rows.last().map_or(f64::INFINITY, |r| r.exploitability_milli);
                Check::new(name, last < 1.0, format!("{last:.4} milli after {iterations} iterations"))
            }
            Err(e) => Check::new(name, false, format!("run failed: {e}")),
        });
    }
    checks
}
