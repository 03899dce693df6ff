use thiserror::Error;

use crate::series::EffectiveRule;

pub type Result<T, E = HmlfError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HmlfError {
    /// Argument outside the domain of a real-valued function.
    #[error("{function}: argument {value} is outside the domain")]
    Domain { function: &'static str, value: f64 },

    #[error("alpha and beta must be positive and finite (alpha = {alpha}, beta = {beta})")]
    InvalidAlphaBeta { alpha: f64, beta: f64 },

    #[error("parameter {value} is not finite")]
    NonFiniteParameter { value: f64 },

    /// A lower parameter is a nonpositive integer and no upper parameter
    /// terminates the series before the denominator vanishes.
    #[error("lower parameter {value} is a pole of the denominator Pochhammer symbol")]
    LowerParamPole { value: f64 },

    #[error("{what} overflows the f64 range")]
    Overflow { what: &'static str },

    #[error("series is divergent at u = {u} (effective rule {rule}); asymptotic mode is off")]
    DivergenceRejected { u: f64, rule: EffectiveRule },

    #[error("no convergence after {terms} terms (partial sum {partial}, last term {last_term})")]
    NonConvergence {
        terms: usize,
        partial: f64,
        last_term: f64,
    },

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("invalid delta {0}")]
    InvalidDelta(f64),

    #[error("invalid transform variable s = {0}; s must be positive and finite")]
    InvalidS(f64),

    /// The closed form only holds as a formal (divergent) series.
    #[error("identity is formal only: result series has effective rule {rule}")]
    FormalIdentity { rule: EffectiveRule },

    #[error("gamma function pole at {0}")]
    GammaPole(f64),

    #[error("adaptive quadrature hit {limit} subdivisions (estimate {estimate}, error {error})")]
    MaxSubdivisions {
        limit: usize,
        estimate: f64,
        error: f64,
    },

    #[error("sequence acceleration did not stabilize after {intervals} intervals")]
    AccelerationFailure { intervals: usize, estimate: f64 },

    #[error("scan range [{u_min}, {u_max}] does not intersect the convergence domain")]
    DomainOutsideConvergence { u_min: f64, u_max: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
