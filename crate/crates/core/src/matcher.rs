//! (Φ, f)-regret matching: turn (estimated) cumulative regrets into the fixed
//! point of the link-weighted transformation operator.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::links::{self, LinkFamily, LinkSpec};
use crate::odp::{check_len, TransformationKind, TransformationSet};

/// Residual tolerance for non-external fixed points.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;
/// Power-iteration sweep cap.
pub const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointPolicy {
    pub distribution: Vec<f64>,
    /// `||σQ - σ||_1`; zero for external fixed points.
    pub residual: f64,
}

impl FixedPointPolicy {
    fn exact(distribution: Vec<f64>) -> Self {
        Self {
            distribution,
            residual: 0.0,
        }
    }
}

pub fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

fn check_weights(y: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (index, &value) in y.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        if value < 0.0 {
            return Err(Error::NegativeWeight { index, value });
        }
        total += value;
    }
    Ok(total)
}

/// `σ ∝ y`, or uniform when `y` is the zero vector.
pub fn external_fixed_point(y: &[f64]) -> Result<FixedPointPolicy> {
    if y.is_empty() {
        return Err(Error::EmptyActionSet);
    }
    let total = check_weights(y)?;
    if total > 0.0 {
        Ok(FixedPointPolicy::exact(y.iter().map(|v| v / total).collect()))
    } else {
        Ok(FixedPointPolicy::exact(uniform(y.len())))
    }
}

/// The row-stochastic matrix `Q = Σ_φ (y_φ / ||y||_1) Mat(φ)`.
pub fn transformation_operator(y: &[f64], phi: &TransformationSet) -> Result<DMatrix<f64>> {
    check_len(phi.len(), y.len())?;
    let total = check_weights(y)?;
    let n = phi.num_actions();
    let mut q = DMatrix::zeros(n, n);
    if total == 0.0 {
        return Ok(q);
    }
    for (t, &w) in phi.members().iter().zip(y) {
        if w == 0.0 {
            continue;
        }
        let w = w / total;
        for a in 0..n {
            for (b, &x) in t.row(a).iter().enumerate() {
                q[(a, b)] += w * x;
            }
        }
    }
    Ok(q)
}

/// `||σQ - σ||_1`.
pub fn stationary_residual(q: &DMatrix<f64>, sigma: &[f64]) -> f64 {
    let n = sigma.len();
    (0..n)
        .map(|b| {
            let flow: f64 = (0..n).map(|a| sigma[a] * q[(a, b)]).sum();
            (flow - sigma[b]).abs()
        })
        .sum()
}

/// Grassmann-Taksar-Heyman elimination. Every update adds nonnegative
/// terms, so tiny transition probabilities keep their relative accuracy.
/// When a state cannot reach any lower-indexed state the chain is reducible
/// and the returned distribution lives on that state's closed class.
fn gth_stationary(q: &DMatrix<f64>) -> Vec<f64> {
    let n = q.nrows();
    let mut a = q.clone();
    let mut start = 0;
    for k in (1..n).rev() {
        let s: f64 = (0..k).map(|j| a[(k, j)]).sum();
        if s <= 0.0 {
            start = k;
            break;
        }
        for i in 0..k {
            a[(i, k)] /= s;
        }
        for i in 0..k {
            let w = a[(i, k)];
            if w == 0.0 {
                continue;
            }
            for j in 0..k {
                a[(i, j)] += w * a[(k, j)];
            }
        }
    }
    let mut sigma = vec![0.0; n];
    sigma[start] = 1.0;
    for j in start + 1..n {
        sigma[j] = (start..j).map(|i| sigma[i] * a[(i, j)]).sum();
    }
    let total: f64 = sigma.iter().sum();
    sigma.iter_mut().for_each(|v| *v /= total);
    sigma
}

fn power_stationary(q: &DMatrix<f64>) -> FixedPointPolicy {
    let n = q.nrows();
    let mut sigma = uniform(n);
    let mut next = vec![0.0; n];
    let mut residual = stationary_residual(q, &sigma);
    for _ in 0..MAX_SWEEPS {
        if residual <= FIXED_POINT_TOLERANCE {
            break;
        }
        // Lazy chain (Q + I) / 2 shares Q's stationary distributions and is aperiodic.
        for b in 0..n {
            let flow: f64 = (0..n).map(|a| sigma[a] * q[(a, b)]).sum();
            next[b] = 0.5 * (flow + sigma[b]);
        }
        let total: f64 = next.iter().sum();
        for (s, v) in sigma.iter_mut().zip(&next) {
            *s = v / total;
        }
        residual = stationary_residual(q, &sigma);
    }
    FixedPointPolicy {
        distribution: sigma,
        residual,
    }
}

/// A distribution fixed by the weighted operator of an arbitrary
/// transformation set (typically `Φ_INT`).
pub fn internal_fixed_point(y: &[f64], phi: &TransformationSet) -> Result<FixedPointPolicy> {
    check_len(phi.len(), y.len())?;
    let n = phi.num_actions();
    if check_weights(y)? == 0.0 || n == 1 {
        return Ok(FixedPointPolicy::exact(uniform(n)));
    }
    let q = transformation_operator(y, phi)?;
    let sigma = gth_stationary(&q);
    let residual = stationary_residual(&q, &sigma);
    if residual <= FIXED_POINT_TOLERANCE {
        return Ok(FixedPointPolicy {
            distribution: sigma,
            residual,
        });
    }
    let result = power_stationary(&q);
    if result.residual <= FIXED_POINT_TOLERANCE {
        Ok(result)
    } else {
        Err(Error::FixedPointNotConverged {
            residual: result.residual,
            tolerance: FIXED_POINT_TOLERANCE,
        })
    }
}

/// Fixed point of `y` for any transformation set; dispatches on its kind.
pub fn fixed_point(y: &[f64], phi: &TransformationSet) -> Result<FixedPointPolicy> {
    match phi.kind() {
        TransformationKind::External => {
            check_len(phi.len(), y.len())?;
            external_fixed_point(y)
        }
        _ => internal_fixed_point(y, phi),
    }
}

/// Approximate (Φ, f)-regret matching: the fixed point of `f(R̃)`.
pub fn policy_from_estimates(
    spec: &LinkSpec,
    estimates: &[f64],
    phi: &TransformationSet,
) -> Result<FixedPointPolicy> {
    check_len(phi.len(), estimates.len())?;
    if phi.num_actions() == 1 {
        return Ok(FixedPointPolicy::exact(vec![1.0]));
    }
    match spec.family() {
        LinkFamily::Exponential => {
            if let Some((index, &value)) =
                estimates.iter().enumerate().find(|(_, v)| !v.is_finite())
            {
                return Err(Error::NonFinite { index, value });
            }
            if phi.kind() == TransformationKind::External {
                Ok(FixedPointPolicy::exact(links::softmax(spec.param(), estimates)))
            } else {
                let max = estimates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let y = links::shifted_exponential(spec.param(), estimates, max);
                fixed_point(&y, phi)
            }
        }
        LinkFamily::Polynomial => fixed_point(&spec.link(estimates)?, phi),
    }
}

/// External regret matching on one information state: `σ ∝ f(R̃)`.
pub fn external_policy(spec: &LinkSpec, estimates: &[f64]) -> Result<Vec<f64>> {
    match estimates.len() {
        0 => Err(Error::EmptyActionSet),
        1 => Ok(vec![1.0]),
        _ => match spec.family() {
            LinkFamily::Exponential => {
                if let Some((index, &value)) =
                    estimates.iter().enumerate().find(|(_, v)| !v.is_finite())
                {
                    return Err(Error::NonFinite { index, value });
                }
                Ok(links::softmax(spec.param(), estimates))
            }
            LinkFamily::Polynomial => Ok(external_fixed_point(&spec.link(estimates)?)?.distribution),
        },
    }
}
