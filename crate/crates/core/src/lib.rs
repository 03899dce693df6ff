//! Hypergeometric–Mittag-Leffler functions on the real line.

pub mod analysis;
pub mod calculus;
pub mod error;
pub mod integrals;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod special_cases;
pub mod sum;
pub mod verify;

pub use error::{HmlfError, Result};
pub use series::{
    classify, eval, ClassicalRule, ConvergenceClass, EffectiveRule, EvalOptions, EvalResult,
    EvalStatus, HmlfSpec,
};
