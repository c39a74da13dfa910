use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    Pp,
    Fb,
    Drs,
    Pdps,
    Pdes,
    Admm,
    Padmm,
    Nlpdps,
}

impl Algo {
    pub const ALL: [Algo; 8] =
        [Algo::Pp, Algo::Fb, Algo::Drs, Algo::Pdps, Algo::Pdes, Algo::Admm, Algo::Padmm, Algo::Nlpdps];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Pp => "pp",
            Algo::Fb => "fb",
            Algo::Drs => "drs",
            Algo::Pdps => "pdps",
            Algo::Pdes => "pdes",
            Algo::Admm => "admm",
            Algo::Padmm => "padmm",
            Algo::Nlpdps => "nlpdps",
        }
    }

    pub fn is_primal_dual(self) -> bool {
        matches!(self, Algo::Pdps | Algo::Pdes | Algo::Nlpdps)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algo `{s}`")))
    }
}

/// Acceleration rule for PDPS.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Accel<T> {
    #[default]
    None,
    /// F₀ strongly convex with factor γ: varying steps.
    StrongPrimal { gamma: T },
    /// F₀ and G* strongly convex with factors γ, ρ: constant steps.
    StrongBoth { gamma: T, rho: T },
}

impl<T: Scalar> Accel<T> {
    pub fn factors(&self) -> (T, T) {
        match *self {
            Accel::None => (T::zero(), T::zero()),
            Accel::StrongPrimal { gamma } => (gamma, T::zero()),
            Accel::StrongBoth { gamma, rho } => (gamma, rho),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Accel::None)
    }
}

/// Over-relaxation parameters λ_k.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaSchedule<T> {
    /// Constant λ = max(lower bound, 1).
    Auto,
    Constant(T),
    /// λ_k for k = 0, 1, …; the last entry repeats.
    Explicit(Vec<T>),
}

impl<T: Scalar> LambdaSchedule<T> {
    pub fn at(&self, k: usize, lower: T) -> T {
        match self {
            LambdaSchedule::Auto => lower.max(T::one()),
            LambdaSchedule::Constant(l) => *l,
            LambdaSchedule::Explicit(v) => v[k.min(v.len() - 1)],
        }
    }

    /// Checks positivity, monotonicity and the lower bound.
    pub fn validate(&self, lower: T) -> Result<()> {
        let values: Vec<T> = match self {
            LambdaSchedule::Auto => return Ok(()),
            LambdaSchedule::Constant(l) => vec![*l],
            LambdaSchedule::Explicit(v) if v.is_empty() => {
                return Err(invalid("overrelax.lambda", "schedule is empty"));
            }
            LambdaSchedule::Explicit(v) => v.clone(),
        };
        for (i, &l) in values.iter().enumerate() {
            if !l.is_finite() || !(l > T::zero()) {
                return Err(invalid("overrelax.lambda", format!("λ_{i} = {l} is not positive")));
            }
            if l < lower {
                return Err(Error::Inadmissible(format!("over-relaxation λ_{i} = {l} below the lower bound {lower}")));
            }
            if i > 0 && l > values[i - 1] {
                return Err(Error::Inadmissible(format!("over-relaxation schedule increases at k = {i}")));
            }
        }
        Ok(())
    }
}

/// Backtracking parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearch<T> {
    pub theta: T,
    pub tau_init: T,
}

impl<T: Scalar> Default for LineSearch<T> {
    fn default() -> Self {
        Self { theta: T::lit(0.5), tau_init: T::one() }
    }
}

pub const LINESEARCH_MAX_HALVINGS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    /// Primal step τ₀; a method-specific default when absent.
    pub tau0: Option<T>,
    /// Dual step σ₀ (PDPS) or x-step σ (preconditioned ADMM).
    pub sigma0: Option<T>,
    /// z-step θ of preconditioned ADMM.
    pub theta0: Option<T>,
    pub accel: Accel<T>,
    /// Use the stricter step and acceleration rules under which ergodic gap rates hold.
    pub gap_mode: bool,
    pub overrelax: Option<LambdaSchedule<T>>,
    pub inertia: bool,
    pub linesearch: Option<LineSearch<T>>,
    pub max_iter: usize,
    pub tol: T,
    pub seed: u64,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            tau0: None,
            sigma0: None,
            theta0: None,
            accel: Accel::None,
            gap_mode: false,
            overrelax: None,
            inertia: false,
            linesearch: None,
            max_iter: 1000,
            tol: T::lit(1e-8),
            seed: 0,
        }
    }
}
