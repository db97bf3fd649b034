//! Link functions and the companion `g` maps of their Gordon triples.
//!
//! Two families are supported:
//!
//! * polynomial, `f(x)_i = (x_i^+)^(p-1)` with `p > 1`;
//! * exponential, `f(x)_i = exp(x_i / τ)` with `τ > 0`.
//!
//! The `g` map depends on the regime: for `p > 2` it is
//! `2 (x_i^+)^(p-1) / ||x^+||_p^(p-2)`, for `1 < p <= 2` it is `p (x_i^+)^(p-1)`,
//! and for the exponential family it is the softmax at temperature `τ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odp::check_len;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkFamily {
    Polynomial,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkSpec {
    family: LinkFamily,
    param: f64,
}

impl LinkSpec {
    pub fn new(family: LinkFamily, param: f64) -> Result<Self> {
        match family {
            LinkFamily::Polynomial if !(param > 1.0) || !param.is_finite() => Err(
                Error::InvalidLink(format!("polynomial link needs p > 1, got {param}")),
            ),
            LinkFamily::Exponential if !(param > 0.0) || !param.is_finite() => Err(
                Error::InvalidLink(format!("exponential link needs tau > 0, got {param}")),
            ),
            _ => Ok(Self { family, param }),
        }
    }

    pub fn polynomial(p: f64) -> Result<Self> {
        Self::new(LinkFamily::Polynomial, p)
    }

    pub fn exponential(tau: f64) -> Result<Self> {
        Self::new(LinkFamily::Exponential, tau)
    }

    pub fn family(&self) -> LinkFamily {
        self.family
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    /// Short tag used in file names, e.g. `poly2` or `exp0.1`.
    pub fn tag(&self) -> String {
        match self.family {
            LinkFamily::Polynomial => format!("poly{}", self.param),
            LinkFamily::Exponential => format!("exp{}", self.param),
        }
    }

    pub fn link(&self, x: &[f64]) -> Result<Vec<f64>> {
        link(self, x)
    }

    pub fn gordon_g(&self, x: &[f64]) -> Result<Vec<f64>> {
        gordon_g(self, x)
    }
}

/// Polynomial exponents the experiment grids sweep by default.
pub const POLYNOMIAL_GRID: [f64; 5] = [1.1, 1.5, 2.0, 2.5, 3.0];
/// Temperatures swept for Leduc and random goofspiel.
pub const EXPONENTIAL_GRID: [f64; 5] = [0.01, 0.05, 0.1, 0.5, 1.0];
/// Temperatures swept for sorted goofspiel.
pub const EXPONENTIAL_GRID_GOOFSPIEL: [f64; 5] = [0.1, 0.5, 1.0, 5.0, 10.0];

fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: x[index],
        }),
        None => Ok(()),
    }
}

fn positive_power(x: f64, exponent: f64) -> f64 {
    if x > 0.0 {
        x.powf(exponent)
    } else {
        0.0
    }
}

/// Raw link output. Exponential outputs that overflow are clamped to
/// `f64::MAX` with a warning; policies never go through this path.
pub fn link(spec: &LinkSpec, x: &[f64]) -> Result<Vec<f64>> {
    check_finite(x)?;
    Ok(match spec.family {
        LinkFamily::Polynomial => x
            .iter()
            .map(|&v| positive_power(v, spec.param - 1.0))
            .collect(),
        LinkFamily::Exponential => {
            let mut clamped = false;
            let out = x
                .iter()
                .map(|&v| {
                    let e = (v / spec.param).exp();
                    if e.is_finite() {
                        e
                    } else {
                        clamped = true;
                        f64::MAX
                    }
                })
                .collect();
            if clamped {
                log::warn!("exponential link overflowed at tau = {}; clamped", spec.param);
            }
            out
        }
    })
}

/// Exponential link scaled by `exp(-shift / τ)`. Any common shift leaves the
/// induced policy and every scale-free inequality unchanged.
pub fn shifted_exponential(tau: f64, x: &[f64], shift: f64) -> Vec<f64> {
    x.iter().map(|&v| ((v - shift) / tau).exp()).collect()
}

/// Softmax of `x / τ`, computed from max-shifted logits.
pub fn softmax(tau: f64, x: &[f64]) -> Vec<f64> {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = shifted_exponential(tau, x, max);
    let total: f64 = out.iter().sum();
    for v in &mut out {
        *v /= total;
    }
    out
}

pub fn gordon_g(spec: &LinkSpec, x: &[f64]) -> Result<Vec<f64>> {
    check_finite(x)?;
    let p = spec.param;
    Ok(match spec.family {
        LinkFamily::Polynomial if p > 2.0 => {
            let norm_p: f64 = x
                .iter()
                .map(|&v| positive_power(v, p))
                .sum::<f64>()
                .powf(1.0 / p);
            if norm_p == 0.0 {
                vec![0.0; x.len()]
            } else {
                let scale = 2.0 / norm_p.powf(p - 2.0);
                x.iter()
                    .map(|&v| scale * positive_power(v, p - 1.0))
                    .collect()
            }
        }
        LinkFamily::Polynomial => x
            .iter()
            .map(|&v| p * positive_power(v, p - 1.0))
            .collect(),
        LinkFamily::Exponential => {
            if x.is_empty() {
                Vec::new()
            } else {
                softmax(p, x)
            }
        }
    })
}

/// `||y - ỹ||_1`.
pub fn link_error(y: &[f64], y_est: &[f64]) -> Result<f64> {
    check_len(y.len(), y_est.len())?;
    Ok(y.iter().zip(y_est).map(|(a, b)| (a - b).abs()).sum())
}
