//! Closed-form regret bounds for approximate regret matching and the
//! per-state sums used for counterfactual regret minimization, plus a
//! checker for the approximate Blackwell inequality.

use crate::error::{Error, Result};
use crate::links::{self, LinkFamily, LinkSpec};
use crate::odp::{check_len, dot, expected_phi_regret, TransformationSet};

/// Relative slack in the Blackwell checker; absorbs float rounding only.
pub const BLACKWELL_TOLERANCE: f64 = 1e-8;

/// Inputs of the single-decision-problem bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdpBoundInputs {
    pub t: usize,
    pub utility_bound: f64,
    /// `μ(Φ)`, used by the polynomial family.
    pub activation: usize,
    /// `|Φ|`, used by the exponential family.
    pub num_transformations: usize,
    /// `Σ_k ||g(R_{k-1}) - g(R̃_{k-1})||_1`.
    pub cumulative_error: f64,
}

/// Bound on the average Φ-regret after `t` rounds.
pub fn odp_bound(spec: &LinkSpec, inputs: &OdpBoundInputs) -> Result<f64> {
    let OdpBoundInputs {
        t,
        utility_bound: u,
        activation,
        num_transformations,
        cumulative_error: err,
    } = *inputs;
    if t == 0 {
        return Err(Error::InvalidConfig("bounds need t >= 1".into()));
    }
    if !(u >= 0.0) || !(err >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "bounds need U >= 0 and error >= 0, got {u} and {err}"
        )));
    }
    let tf = t as f64;
    let mu = activation as f64;
    let p = spec.param();
    Ok(match spec.family() {
        LinkFamily::Polynomial if p > 2.0 => {
            (tf * (p - 1.0) * 4.0 * u * u * mu.powf(2.0 / p) + 2.0 * u * err).sqrt() / tf
        }
        LinkFamily::Polynomial => (tf * (2.0 * u).powf(p) * mu + 2.0 * u * err).powf(1.0 / p) / tf,
        LinkFamily::Exponential => {
            if num_transformations == 0 {
                return Err(Error::InvalidConfig("exponential bound needs |Φ| >= 1".into()));
            }
            (p * (num_transformations as f64).ln() + 2.0 * u * err) / tf + 2.0 * u * u / p
        }
    })
}

/// Both forms of a player's counterfactual-regret bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcfrBound {
    /// Sum over information states of each state's own bound.
    pub per_state: f64,
    /// `|S_i|` times the bound at the largest action count and error.
    pub uniform: f64,
}

/// Per-player bound on `(1/t) Σ_s (R_t(s))^+`, treating each information
/// state as an external-regret problem with `|A(s)|` actions.
pub fn rcfr_bound(
    spec: &LinkSpec,
    t: usize,
    utility_bound: f64,
    action_counts: &[usize],
    errors: &[f64],
) -> Result<RcfrBound> {
    check_len(action_counts.len(), errors.len())?;
    let state = |actions: usize, err: f64| {
        let inputs = OdpBoundInputs {
            t,
            utility_bound,
            activation: actions.saturating_sub(1),
            num_transformations: actions,
            cumulative_error: err,
        };
        odp_bound(spec, &inputs)
    };
    let mut per_state = 0.0;
    for (&n, &e) in action_counts.iter().zip(errors) {
        per_state += state(n, e)?;
    }
    let uniform = match action_counts.iter().max() {
        Some(&max_actions) => {
            let max_error = errors.iter().copied().fold(0.0, f64::max);
            action_counts.len() as f64 * state(max_actions, max_error)?
        }
        None => 0.0,
    };
    Ok(RcfrBound { per_state, uniform })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackwellCheck {
    /// `f(R) · E_σ[ρ]`.
    pub lhs: f64,
    /// `2U ||f(R) - f(R̃)||_1`.
    pub rhs: f64,
    pub pass: bool,
    /// Both sides were scaled by a common positive factor because the raw
    /// exponential link overflowed.
    pub normalized: bool,
}

/// Evaluates the approximate Blackwell inequality for a policy `σ` built
/// from the estimates `R̃` against the reward vector `r`.
pub fn blackwell_check(
    spec: &LinkSpec,
    phi: &TransformationSet,
    regrets: &[f64],
    estimates: &[f64],
    policy: &[f64],
    rewards: &[f64],
    utility_bound: f64,
) -> Result<BlackwellCheck> {
    check_len(phi.len(), regrets.len())?;
    check_len(phi.len(), estimates.len())?;
    let (y, y_est, normalized) = match spec.family() {
        LinkFamily::Polynomial => (spec.link(regrets)?, spec.link(estimates)?, false),
        LinkFamily::Exponential => {
            let tau = spec.param();
            let shift = regrets
                .iter()
                .chain(estimates)
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            if !shift.is_finite() {
                return Err(Error::NonFinite {
                    index: 0,
                    value: shift,
                });
            }
            let overflows = (shift / tau).exp() * phi.len() as f64;
            if overflows.is_finite() {
                (spec.link(regrets)?, spec.link(estimates)?, false)
            } else {
                (
                    links::shifted_exponential(tau, regrets, shift),
                    links::shifted_exponential(tau, estimates, shift),
                    true,
                )
            }
        }
    };
    let rho = expected_phi_regret(policy, rewards, phi)?;
    let lhs = dot(&y, &rho);
    let rhs = 2.0 * utility_bound * links::link_error(&y, &y_est)?;
    Ok(BlackwellCheck {
        lhs,
        rhs,
        pass: lhs <= rhs + BLACKWELL_TOLERANCE * (1.0 + rhs.abs()),
        normalized,
    })
}

/// Potential function `G` of each family's Gordon triple `(G, g, γ)`.
pub fn gordon_potential(spec: &LinkSpec, x: &[f64]) -> f64 {
    let p = spec.param();
    match spec.family() {
        LinkFamily::Polynomial => {
            let sum: f64 = x.iter().map(|&v| v.max(0.0).powf(p)).sum();
            if p > 2.0 {
                sum.powf(2.0 / p)
            } else {
                sum
            }
        }
        LinkFamily::Exponential => {
            let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            max + p * x.iter().map(|&v| ((v - max) / p).exp()).sum::<f64>().ln()
        }
    }
}

/// Second-order term `γ` of each family's Gordon triple.
pub fn gordon_gamma(spec: &LinkSpec, y: &[f64]) -> f64 {
    let p = spec.param();
    let p_norm_pow = || y.iter().map(|v| v.abs().powf(p)).sum::<f64>();
    match spec.family() {
        LinkFamily::Polynomial if p > 2.0 => (p - 1.0) * p_norm_pow().powf(2.0 / p),
        LinkFamily::Polynomial => p_norm_pow(),
        LinkFamily::Exponential => {
            let inf = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            inf * inf / (2.0 * p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::policy_from_estimates;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inputs(t: usize, activation: usize, phi: usize) -> OdpBoundInputs {
        OdpBoundInputs {
            t,
            utility_bound: 1.0,
            activation,
            num_transformations: phi,
            cumulative_error: 0.0,
        }
    }

    #[test]
    fn odp_examples() {
        let p2 = LinkSpec::polynomial(2.0).unwrap();
        let p3 = LinkSpec::polynomial(3.0).unwrap();
        let e1 = LinkSpec::exponential(1.0).unwrap();
        assert!((odp_bound(&p2, &inputs(100, 1, 2)).unwrap() - 0.2).abs() < 1e-15);
        let expect = 3f64.ln() / 100.0 + 2.0;
        assert!((odp_bound(&e1, &inputs(100, 2, 3)).unwrap() - expect).abs() < 1e-15);
        assert!((odp_bound(&e1, &inputs(100, 2, 3)).unwrap() - 2.01099).abs() < 1e-5);
        let expect = 512f64.sqrt() / 64.0;
        assert!((odp_bound(&p3, &inputs(64, 1, 2)).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.35355).abs() < 1e-5);
        assert!(odp_bound(&p2, &inputs(0, 1, 2)).is_err());
    }

    #[test]
    fn single_state_rcfr_reduces_to_odp() {
        let p2 = LinkSpec::polynomial(2.0).unwrap();
        let b = rcfr_bound(&p2, 100, 1.0, &[2], &[0.0]).unwrap();
        assert!((b.per_state - 0.2).abs() < 1e-15);
        assert_eq!(b.per_state, b.uniform);
    }

    #[test]
    fn exponential_floor() {
        let e = LinkSpec::exponential(0.5).unwrap();
        for t in [1, 10, 1000, 1_000_000] {
            let b = odp_bound(&e, &inputs(t, 2, 3)).unwrap();
            assert!(b >= 2.0 / 0.5);
        }
    }

    #[test]
    fn worst_case_reward_grid() {
        // R = (1, 0), R̃ = (0, 1), p = 2: rhs = 2 * 1 * 2 = 4.
        let spec = LinkSpec::polynomial(2.0).unwrap();
        let phi = TransformationSet::external(2).unwrap();
        let sigma = policy_from_estimates(&spec, &[0.0, 1.0], &phi).unwrap().distribution;
        let mut worst = f64::NEG_INFINITY;
        for i in 0..=20 {
            for j in 0..=20 {
                let r = [-1.0 + 0.1 * i as f64, -1.0 + 0.1 * j as f64];
                let c = blackwell_check(&spec, &phi, &[1.0, 0.0], &[0.0, 1.0], &sigma, &r, 1.0).unwrap();
                assert_eq!(c.rhs, 4.0);
                assert!(c.pass);
                worst = worst.max(c.lhs);
            }
        }
        assert!(worst <= 4.0 && worst > 0.0);
    }

    #[test]
    fn exponential_overflow_is_normalized() {
        let spec = LinkSpec::exponential(0.01).unwrap();
        let phi = TransformationSet::external(2).unwrap();
        let r_true = [100.0, 99.0];
        let sigma = policy_from_estimates(&spec, &r_true, &phi).unwrap().distribution;
        let c = blackwell_check(&spec, &phi, &r_true, &r_true, &sigma, &[1.0, -1.0], 1.0).unwrap();
        assert!(c.normalized);
        assert!(c.lhs.abs() <= 1e-8);
        assert!(c.pass);
    }

    #[test]
    fn small_p_gamma_needs_no_scale_factor() {
        // At x = 0, y = 1 the triple inequality is 1 <= γ(1), so scaling the
        // p-norm power by (p - 1) < 1 would break it.
        let spec = LinkSpec::polynomial(1.5).unwrap();
        let lhs = gordon_potential(&spec, &[1.0]);
        assert_eq!(lhs, 1.0);
        assert!(lhs <= gordon_gamma(&spec, &[1.0]));
        assert!(lhs > 0.5 * gordon_gamma(&spec, &[1.0]));
    }

    #[test]
    fn gordon_triples_hold_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let specs = [
            LinkSpec::polynomial(1.1).unwrap(),
            LinkSpec::polynomial(1.5).unwrap(),
            LinkSpec::polynomial(2.0).unwrap(),
            LinkSpec::polynomial(3.0).unwrap(),
            LinkSpec::polynomial(5.0).unwrap(),
            LinkSpec::exponential(0.1).unwrap(),
            LinkSpec::exponential(1.0).unwrap(),
        ];
        for spec in specs {
            for _ in 0..2000 {
                let n = rng.gen_range(1..6);
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                let g = spec.gordon_g(&x).unwrap();
                let lhs = gordon_potential(&spec, &sum);
                let rhs = gordon_potential(&spec, &x) + dot(&g, &y) + gordon_gamma(&spec, &y);
                assert!(lhs <= rhs + 1e-9 * (1.0 + rhs.abs()), "{spec:?} {x:?} {y:?}: {lhs} > {rhs}");
            }
        }
    }

    proptest! {
        #[test]
        fn per_state_never_exceeds_uniform(
            counts in prop::collection::vec(1usize..5, 1..20),
            seed in 0u64..1000,
            t in 1usize..500,
            which in 0usize..4,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let errors: Vec<f64> = counts.iter().map(|_| rng.gen_range(0.0..50.0)).collect();
            let spec = [
                LinkSpec::polynomial(1.5).unwrap(),
                LinkSpec::polynomial(2.0).unwrap(),
                LinkSpec::polynomial(3.0).unwrap(),
                LinkSpec::exponential(0.1).unwrap(),
            ][which];
            let b = rcfr_bound(&spec, t, 2.0, &counts, &errors).unwrap();
            prop_assert!(b.per_state <= b.uniform * (1.0 + 1e-12));
        }

        #[test]
        fn zero_error_bound_decreases_in_t(t in 1usize..10_000, which in 0usize..4) {
            let spec = [
                LinkSpec::polynomial(1.5).unwrap(),
                LinkSpec::polynomial(2.0).unwrap(),
                LinkSpec::polynomial(3.0).unwrap(),
                LinkSpec::exponential(0.1).unwrap(),
            ][which];
            let a = odp_bound(&spec, &inputs(t, 2, 3)).unwrap();
            let b = odp_bound(&spec, &inputs(t + 1, 2, 3)).unwrap();
            prop_assert!(b <= a);
        }
    }
}
