//! Online decision problems: reward systems, action transformations and
//! Φ-regret accounting for a single learner with full-information feedback.

use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

/// A finite action set together with a bound `U` on the magnitude of any
/// reward the environment may assign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardSystem {
    num_actions: usize,
    reward_bound: f64,
}

impl RewardSystem {
    pub fn new(num_actions: usize, reward_bound: f64) -> Result<Self> {
        if num_actions == 0 {
            return Err(Error::EmptyActionSet);
        }
        if !(reward_bound >= 0.0) || !reward_bound.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "reward bound must be finite and nonnegative, got {reward_bound}"
            )));
        }
        Ok(Self {
            num_actions,
            reward_bound,
        })
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn reward_bound(&self) -> f64 {
        self.reward_bound
    }

    /// Rejects reward vectors of the wrong length or with entries outside `[-U, U]`.
    pub fn check_rewards(&self, rewards: &[f64]) -> Result<()> {
        check_len(self.num_actions, rewards.len())?;
        for (index, &value) in rewards.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            if value.abs() > self.reward_bound * (1.0 + 1e-12) {
                return Err(Error::InvalidConfig(format!(
                    "reward {value} at action {index} exceeds bound {}",
                    self.reward_bound
                )));
            }
        }
        Ok(())
    }
}

/// A map from actions to distributions over actions, stored as a dense
/// row-stochastic matrix (row `a` is `φ(a)`).
#[derive(Debug, Clone, PartialEq)]
pub struct ActionTransformation {
    num_actions: usize,
    rows: Vec<f64>,
}

impl ActionTransformation {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyActionSet);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            check_len(n, row.len())?;
            if row.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::InvalidTransformation(format!(
                    "row {a} has a negative or non-finite entry"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidTransformation(format!(
                    "row {a} sums to {sum}"
                )));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self {
            num_actions: n,
            rows: flat,
        })
    }

    pub fn identity(num_actions: usize) -> Self {
        let mut rows = vec![0.0; num_actions * num_actions];
        for a in 0..num_actions {
            rows[a * num_actions + a] = 1.0;
        }
        Self { num_actions, rows }
    }

    /// The constant map sending every action to `target`.
    pub fn external(num_actions: usize, target: usize) -> Self {
        let mut rows = vec![0.0; num_actions * num_actions];
        for a in 0..num_actions {
            rows[a * num_actions + target] = 1.0;
        }
        Self { num_actions, rows }
    }

    /// Redirects `from` to `to`, leaving every other action in place.
    pub fn internal(num_actions: usize, from: usize, to: usize) -> Self {
        let mut t = Self::identity(num_actions);
        t.rows[from * num_actions + from] = 0.0;
        t.rows[from * num_actions + to] = 1.0;
        t
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn row(&self, action: usize) -> &[f64] {
        let n = self.num_actions;
        &self.rows[action * n..(action + 1) * n]
    }

    /// Whether `φ(a) = δ_a`.
    pub fn fixes(&self, action: usize) -> bool {
        self.row(action)
            .iter()
            .enumerate()
            .all(|(b, &x)| if b == action { x == 1.0 } else { x == 0.0 })
    }

    /// The induced policy `[φ](σ) = Σ_a σ(a) φ(a)`.
    pub fn apply(&self, policy: &[f64]) -> Vec<f64> {
        let n = self.num_actions;
        let mut out = vec![0.0; n];
        for (a, &weight) in policy.iter().enumerate() {
            if weight == 0.0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(a)) {
                *o += weight * x;
            }
        }
        out
    }

    /// `E_{a' ~ φ(a)}[r(a')] - r(a)`.
    pub fn regret(&self, action: usize, rewards: &[f64]) -> f64 {
        dot(self.row(action), rewards) - rewards[action]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformationKind {
    External,
    Internal,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformationSet {
    kind: TransformationKind,
    num_actions: usize,
    members: Vec<ActionTransformation>,
}

impl TransformationSet {
    /// Enumerates `Φ_EXT` (one constant map per action) or `Φ_INT` (the
    /// identity followed by every `φ^(a,b)` with `a != b`, in row-major order).
    pub fn enumerate(kind: TransformationKind, num_actions: usize) -> Result<Self> {
        if num_actions == 0 {
            return Err(Error::EmptyActionSet);
        }
        let members = match kind {
            TransformationKind::External => (0..num_actions)
                .map(|b| ActionTransformation::external(num_actions, b))
                .collect(),
            TransformationKind::Internal => {
                let mut members = vec![ActionTransformation::identity(num_actions)];
                for a in 0..num_actions {
                    for b in 0..num_actions {
                        if a != b {
                            members.push(ActionTransformation::internal(num_actions, a, b));
                        }
                    }
                }
                members
            }
            TransformationKind::Custom => {
                return Err(Error::InvalidTransformation(
                    "custom sets are built with TransformationSet::custom".into(),
                ))
            }
        };
        Ok(Self {
            kind,
            num_actions,
            members,
        })
    }

    pub fn external(num_actions: usize) -> Result<Self> {
        Self::enumerate(TransformationKind::External, num_actions)
    }

    pub fn internal(num_actions: usize) -> Result<Self> {
        Self::enumerate(TransformationKind::Internal, num_actions)
    }

    pub fn custom(members: Vec<ActionTransformation>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyActionSet)?;
        let num_actions = first.num_actions();
        if let Some(bad) = members.iter().find(|m| m.num_actions() != num_actions) {
            return Err(Error::DimensionMismatch {
                expected: num_actions,
                got: bad.num_actions(),
            });
        }
        Ok(Self {
            kind: TransformationKind::Custom,
            num_actions,
            members,
        })
    }

    pub fn kind(&self) -> TransformationKind {
        self.kind
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ActionTransformation] {
        &self.members
    }

    /// `μ(Φ)`: the largest number of transformations that move any single action.
    pub fn maximal_activation(&self) -> usize {
        (0..self.num_actions)
            .map(|a| self.members.iter().filter(|phi| !phi.fixes(a)).count())
            .max()
            .unwrap_or(0)
    }
}

/// Expected Φ-regret vector of `policy` against the reward vector `rewards`:
/// component `φ` is `Σ_a σ(a) (E_{a'~φ(a)}[r(a')] - r(a))`.
pub fn expected_phi_regret(
    policy: &[f64],
    rewards: &[f64],
    phi: &TransformationSet,
) -> Result<Vec<f64>> {
    let n = phi.num_actions();
    check_len(n, policy.len())?;
    check_len(n, rewards.len())?;
    Ok(phi
        .members()
        .iter()
        .map(|t| {
            policy
                .iter()
                .enumerate()
                .filter(|&(_, &w)| w != 0.0)
                .map(|(a, &w)| w * t.regret(a, rewards))
                .sum()
        })
        .collect())
}

pub fn maximal_activation(phi: &TransformationSet) -> usize {
    phi.maximal_activation()
}

/// Cumulative Φ-regret of one learner. Single writer.
#[derive(Debug, Clone)]
pub struct RegretState {
    system: RewardSystem,
    cumulative: Vec<f64>,
    step: usize,
    history: Option<Vec<(Vec<f64>, Vec<f64>)>>,
}

impl RegretState {
    pub fn new(system: RewardSystem, phi: &TransformationSet) -> Result<Self> {
        check_len(system.num_actions(), phi.num_actions())?;
        Ok(Self {
            system,
            cumulative: vec![0.0; phi.len()],
            step: 0,
            history: None,
        })
    }

    /// Like [`RegretState::new`] but keeps every `(policy, rewards)` pair observed.
    pub fn with_history(system: RewardSystem, phi: &TransformationSet) -> Result<Self> {
        let mut state = Self::new(system, phi)?;
        state.history = Some(Vec::new());
        Ok(state)
    }

    /// Adds the expected regret of `policy` against `rewards` and returns it.
    pub fn observe(
        &mut self,
        policy: &[f64],
        rewards: &[f64],
        phi: &TransformationSet,
    ) -> Result<Vec<f64>> {
        check_len(self.cumulative.len(), phi.len())?;
        self.system.check_rewards(rewards)?;
        let regret = expected_phi_regret(policy, rewards, phi)?;
        for (c, r) in self.cumulative.iter_mut().zip(&regret) {
            *c += r;
        }
        self.step += 1;
        if let Some(history) = self.history.as_mut() {
            history.push((policy.to_vec(), rewards.to_vec()));
        }
        Ok(regret)
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn system(&self) -> &RewardSystem {
        &self.system
    }

    pub fn history(&self) -> Option<&[(Vec<f64>, Vec<f64>)]> {
        self.history.as_deref()
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
