//! The generalized series
//!
//! ```text
//! pFqE(α,β)(a; b; u) = Σ_r  ∏(a_i)_r / [∏(b_j)_r Γ(αr + β)] · u^r
//! ```
//!
//! with parameter validation, convergence classification and a guarded
//! evaluator.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HmlfError, Result};
use crate::special::{
    gamma_ratio, pochhammer_signed_log, reciprocal_gamma, reciprocal_gamma_signed_log, SignedLog,
};
use crate::sum::CompensatedSum;

/// Relative slack used when deciding whether `p − q − α` is exactly zero.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Minimum index before the stopping rule may fire.
const MIN_TERMS: usize = 8;

fn nonpositive_integer(x: f64) -> Option<u64> {
    (x <= 0.0 && x == x.floor()).then(|| (-x) as u64)
}

/// One member of the family: upper and lower parameter lists plus `(α, β)`.
///
/// Always valid once constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct HmlfSpec {
    upper: Vec<f64>,
    lower: Vec<f64>,
    alpha: f64,
    beta: f64,
}

/// Unvalidated wire form of [`HmlfSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    #[serde(default)]
    pub upper: Vec<f64>,
    #[serde(default)]
    pub lower: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl TryFrom<RawSpec> for HmlfSpec {
    type Error = HmlfError;

    fn try_from(raw: RawSpec) -> Result<Self> {
        HmlfSpec::new(raw.upper, raw.lower, raw.alpha, raw.beta)
    }
}

impl From<HmlfSpec> for RawSpec {
    fn from(spec: HmlfSpec) -> Self {
        RawSpec {
            upper: spec.upper,
            lower: spec.lower,
            alpha: spec.alpha,
            beta: spec.beta,
        }
    }
}

impl HmlfSpec {
    /// Validates and builds a spec.
    ///
    /// A nonpositive-integer lower parameter `b` is accepted only when some
    /// upper parameter terminates the series at or before index `|b|`, so the
    /// vanishing denominator `(b)_r`, `r > |b|`, is never reached.
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(HmlfError::InvalidAlphaBeta { alpha, beta });
        }
        if let Some(&value) = upper.iter().chain(&lower).find(|x| !x.is_finite()) {
            return Err(HmlfError::NonFiniteParameter { value });
        }
        let spec = HmlfSpec {
            upper,
            lower,
            alpha,
            beta,
        };
        let last_index = spec.polynomial_length().map(|len| len as u64 - 1);
        for &b in &spec.lower {
            if let Some(nb) = nonpositive_integer(b) {
                if !last_index.is_some_and(|last| last <= nb) {
                    return Err(HmlfError::LowerParamPole { value: b });
                }
            }
        }
        Ok(spec)
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// Number of nonzero terms when some upper parameter is a nonpositive
    /// integer `−n` (the series stops after index `n`); `None` otherwise.
    pub fn polynomial_length(&self) -> Option<usize> {
        self.upper
            .iter()
            .filter_map(|&a| nonpositive_integer(a))
            .min()
            .map(|n| n as usize + 1)
    }

    /// Same parameters with a different `(α, β)`.
    pub fn with_alpha_beta(&self, alpha: f64, beta: f64) -> Result<Self> {
        HmlfSpec::new(self.upper.clone(), self.lower.clone(), alpha, beta)
    }

    pub fn classify(&self) -> ConvergenceClass {
        classify(self)
    }

    /// Coefficient of `u^r` in signed-log form.
    pub fn coefficient_signed_log(&self, r: usize) -> SignedLog {
        let mut c = reciprocal_gamma_signed_log(self.alpha * r as f64 + self.beta);
        for &a in &self.upper {
            c = c * pochhammer_signed_log(a, r);
        }
        if c.is_zero() {
            return c;
        }
        for &b in &self.lower {
            // b is never a vanishing denominator here: validation guarantees
            // a zero numerator first
            c = c
                .checked_div(pochhammer_signed_log(b, r))
                .unwrap_or(SignedLog::ZERO);
        }
        c
    }

    /// Coefficient of `u^r`; `1/Γ(β)` at `r = 0`.
    pub fn coefficient(&self, r: usize) -> Result<f64> {
        if r == 0 {
            return Ok(reciprocal_gamma(self.beta));
        }
        self.coefficient_signed_log(r)
            .try_to_f64()
            .ok_or(HmlfError::Overflow {
                what: "series coefficient",
            })
    }

    /// Evaluates the series at `u` with default options.
    pub fn eval(&self, u: f64) -> Result<EvalResult> {
        self.eval_with(u, &EvalOptions::default())
    }

    /// Evaluates the series at `u`.
    pub fn eval_with(&self, u: f64, opts: &EvalOptions) -> Result<EvalResult> {
        eval(self, u, opts)
    }

    /// Ratio `t_{r+1}/t_r` of consecutive terms of the unscaled series.
    fn term_ratio(&self, r: usize, u: f64) -> f64 {
        let rf = r as f64;
        let mut ratio = u;
        for &a in &self.upper {
            ratio *= a + rf;
        }
        for &b in &self.lower {
            ratio /= b + rf;
        }
        ratio * gamma_ratio(self.alpha * rf + self.beta, self.alpha)
    }
}

/// Convergence rule stated purely in terms of `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalRule {
    AllFinite,
    UnitDisk,
    DivergesNonzero,
}

/// Convergence rule from the growth of the full coefficient including
/// `Γ(αr + β)`: terms scale as `(r!)^(p−q−α) α^(−αr) u^r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectiveRule {
    Entire,
    FiniteRadius { radius: f64 },
    FormalOnly,
}

impl fmt::Display for EffectiveRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffectiveRule::Entire => write!(f, "entire"),
            EffectiveRule::FiniteRadius { radius } => write!(f, "finite radius {radius}"),
            EffectiveRule::FormalOnly => write!(f, "formal only"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceClass {
    pub classical_rule: ClassicalRule,
    pub effective_rule: EffectiveRule,
}

pub fn classify(spec: &HmlfSpec) -> ConvergenceClass {
    let (p, q) = (spec.p(), spec.q());
    let classical_rule = if p <= q {
        ClassicalRule::AllFinite
    } else if p == q + 1 {
        ClassicalRule::UnitDisk
    } else {
        ClassicalRule::DivergesNonzero
    };
    let alpha = spec.alpha();
    let excess = p as f64 - q as f64 - alpha;
    let effective_rule = if excess.abs() <= BOUNDARY_SLACK * alpha.max(1.0) {
        EffectiveRule::FiniteRadius {
            radius: alpha.powf(alpha),
        }
    } else if excess < 0.0 {
        EffectiveRule::Entire
    } else {
        EffectiveRule::FormalOnly
    };
    ConvergenceClass {
        classical_rule,
        effective_rule,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub tol: f64,
    pub max_terms: usize,
    /// Permits optimal truncation of series that diverge at `u`.
    pub allow_asymptotic: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_terms: 10_000,
            allow_asymptotic: false,
        }
    }
}

impl EvalOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn asymptotic(self) -> Self {
        Self {
            allow_asymptotic: true,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalStatus {
    Converged,
    /// The series is a polynomial and every nonzero term was summed.
    Terminated,
    /// Optimal truncation of a divergent series.
    TruncatedAsymptotic,
    /// The terms grew without bound before the tolerance was met.
    DivergenceDetected,
}

impl fmt::Display for EvalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EvalStatus::Converged => "converged",
            EvalStatus::Terminated => "terminated",
            EvalStatus::TruncatedAsymptotic => "truncated_asymptotic",
            EvalStatus::DivergenceDetected => "divergence_detected",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub terms_used: usize,
    /// Truncation bound plus a bound on accumulated rounding.
    pub est_abs_error: f64,
    pub status: EvalStatus,
}

impl EvalResult {
    /// Multiplies value and error estimate by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            est_abs_error: self.est_abs_error * factor.abs(),
            ..self
        }
    }
}

/// Running sum in units of the leading term `1/Γ(β)`.
struct Accumulator {
    sum: CompensatedSum,
    abs_sum: f64,
    max_abs: f64,
}

impl Accumulator {
    fn new() -> Self {
        Self {
            sum: CompensatedSum::new(),
            abs_sum: 0.0,
            max_abs: 0.0,
        }
    }

    fn add(&mut self, t: f64) {
        self.sum.add(t);
        self.abs_sum += t.abs();
        self.max_abs = self.max_abs.max(t.abs());
    }

    fn rounding_bound(&self, terms: usize) -> f64 {
        // compensated summation leaves ~2ε Σ|t|; each recurrence step adds
        // a few ulps of relative error to its term
        (2.0 + 0.5 * (terms as f64).sqrt()) * f64::EPSILON * self.abs_sum
    }

    /// Multiplies the scaled sum and error by `1/Γ(β)`.
    fn finish(
        &self,
        beta: f64,
        terms_used: usize,
        truncation: f64,
        status: EvalStatus,
    ) -> Result<EvalResult> {
        let s = self.sum.total();
        let err = truncation + self.rounding_bound(terms_used);
        let rg = reciprocal_gamma(beta);
        let (value, est_abs_error) = if rg > f64::MIN_POSITIVE {
            (s * rg, err * rg)
        } else {
            let lrg = reciprocal_gamma_signed_log(beta).log_abs();
            (
                s.signum() * (s.abs().ln() + lrg).exp(),
                (err.ln() + lrg).exp(),
            )
        };
        if !value.is_finite() {
            return Err(HmlfError::Overflow {
                what: "series value",
            });
        }
        Ok(EvalResult {
            value,
            terms_used,
            est_abs_error,
            status,
        })
    }
}

/// Sums the series at `u`.
///
/// Terms are produced by the ratio recurrence and accumulated in units of the
/// leading term. Convergent evaluation stops once two consecutive terms with
/// index at least 8 fall below `tol · max(|S|, ε·max|t|)` and the terms are
/// decreasing. Polynomial specs sum their exact length. A spec that diverges
/// at `u` is rejected unless `allow_asymptotic` is set, in which case the sum
/// is cut just before its smallest term and that term is the error estimate.
pub fn eval(spec: &HmlfSpec, u: f64, opts: &EvalOptions) -> Result<EvalResult> {
    if !u.is_finite() {
        return Err(HmlfError::Domain {
            function: "eval",
            value: u,
        });
    }
    if !(opts.tol > 0.0) || !opts.tol.is_finite() {
        return Err(HmlfError::InvalidArgument(format!(
            "tol must be positive and finite, got {}",
            opts.tol
        )));
    }
    if opts.max_terms == 0 {
        return Err(HmlfError::InvalidArgument(
            "max_terms must be at least 1".into(),
        ));
    }

    if let Some(len) = spec.polynomial_length() {
        return eval_polynomial(spec, u, len);
    }
    if u == 0.0 {
        let mut acc = Accumulator::new();
        acc.add(1.0);
        return acc.finish(spec.beta, 1, 0.0, EvalStatus::Converged);
    }

    let rule = classify(spec).effective_rule;
    let divergent = match rule {
        EffectiveRule::Entire => false,
        EffectiveRule::FiniteRadius { radius } => u.abs() >= radius,
        EffectiveRule::FormalOnly => true,
    };
    if divergent {
        if !opts.allow_asymptotic {
            return Err(HmlfError::DivergenceRejected { u, rule });
        }
        return eval_asymptotic(spec, u, opts);
    }
    eval_convergent(spec, u, opts, rule)
}

fn eval_polynomial(spec: &HmlfSpec, u: f64, len: usize) -> Result<EvalResult> {
    let mut acc = Accumulator::new();
    let mut t = 1.0;
    for r in 0..len {
        acc.add(t);
        if r + 1 < len {
            t *= spec.term_ratio(r, u);
            if !t.is_finite() {
                return Err(HmlfError::Overflow {
                    what: "series term",
                });
            }
        }
    }
    acc.finish(spec.beta, len, 0.0, EvalStatus::Terminated)
}

fn eval_convergent(
    spec: &HmlfSpec,
    u: f64,
    opts: &EvalOptions,
    rule: EffectiveRule,
) -> Result<EvalResult> {
    // limiting term ratio for finite-radius series
    let limit_ratio = match rule {
        EffectiveRule::FiniteRadius { radius } => u.abs() / radius,
        _ => 0.0,
    };
    let mut acc = Accumulator::new();
    let mut t = 1.0_f64;
    let mut small_run = 0;
    for r in 0..opts.max_terms {
        acc.add(t);
        let ratio = spec.term_ratio(r, u);
        let next = t * ratio;
        if !next.is_finite() {
            return Err(HmlfError::Overflow {
                what: "series term",
            });
        }
        let threshold = opts.tol * acc.sum.total().abs().max(f64::EPSILON * acc.max_abs);
        if t.abs() <= threshold {
            small_run += 1;
        } else {
            small_run = 0;
        }
        let decreasing = ratio.abs() < 1.0;
        if small_run >= 2 && r >= MIN_TERMS && decreasing {
            let q = ratio.abs().max(limit_ratio);
            let tail = if q < 1.0 {
                next.abs() / (1.0 - q)
            } else {
                next.abs()
            };
            return acc.finish(spec.beta, r + 1, tail, EvalStatus::Converged);
        }
        t = next;
    }
    Err(HmlfError::NonConvergence {
        terms: opts.max_terms,
        partial: acc.sum.total() * reciprocal_gamma(spec.beta),
        last_term: t * reciprocal_gamma(spec.beta),
    })
}

fn eval_asymptotic(spec: &HmlfSpec, u: f64, opts: &EvalOptions) -> Result<EvalResult> {
    let mut acc = Accumulator::new();
    let mut t = 1.0_f64;
    for r in 0..opts.max_terms {
        let next = t * spec.term_ratio(r, u);
        if next.abs() >= t.abs() && r > 0 {
            // t is the smallest term; it is left out and bounds the error
            return acc.finish(spec.beta, r, t.abs(), EvalStatus::TruncatedAsymptotic);
        }
        acc.add(t);
        if t.abs() <= opts.tol * acc.sum.total().abs() && r >= MIN_TERMS {
            return acc.finish(spec.beta, r + 1, next.abs(), EvalStatus::TruncatedAsymptotic);
        }
        t = next;
    }
    Err(HmlfError::NonConvergence {
        terms: opts.max_terms,
        partial: acc.sum.total() * reciprocal_gamma(spec.beta),
        last_term: t * reciprocal_gamma(spec.beta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(upper: &[f64], lower: &[f64], alpha: f64, beta: f64) -> HmlfSpec {
        HmlfSpec::new(upper.to_vec(), lower.to_vec(), alpha, beta).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(HmlfSpec::new(vec![1.0, 1.0], vec![1.0], 1.0, 1.0).is_ok());
        assert_eq!(
            HmlfSpec::new(vec![1.0, 1.0], vec![-2.0], 1.0, 1.0),
            Err(HmlfError::LowerParamPole { value: -2.0 })
        );
        let s = HmlfSpec::new(vec![-2.0, 1.0], vec![-5.0], 1.0, 1.0).unwrap();
        assert_eq!(s.polynomial_length(), Some(3));
        // termination exactly at the lower zero is still protected
        assert!(HmlfSpec::new(vec![-5.0], vec![-5.0], 1.0, 1.0).is_ok());
        assert!(HmlfSpec::new(vec![-6.0], vec![-5.0], 1.0, 1.0).is_err());
        for (a, b) in [(0.0, 1.0), (1.0, -1.0), (f64::NAN, 1.0), (1.0, f64::INFINITY)] {
            assert!(matches!(
                HmlfSpec::new(vec![], vec![], a, b),
                Err(HmlfError::InvalidAlphaBeta { .. })
            ));
        }
        assert!(matches!(
            HmlfSpec::new(vec![f64::NAN], vec![], 1.0, 1.0),
            Err(HmlfError::NonFiniteParameter { .. })
        ));
    }

    #[test]
    fn classification_examples() {
        let c = spec(&[1.0], &[1.0, 2.0], 1.0, 1.0).classify();
        assert_eq!(c.classical_rule, ClassicalRule::AllFinite);
        let c = spec(&[1.0, 1.0], &[1.0], 1.0, 1.0).classify();
        assert_eq!(c.classical_rule, ClassicalRule::UnitDisk);
        assert_eq!(c.effective_rule, EffectiveRule::FiniteRadius { radius: 1.0 });
        let c = spec(&[1.0, 1.0], &[1.0], 2.0, 1.0).classify();
        assert_eq!(c.effective_rule, EffectiveRule::Entire);
        let c = spec(&[1.0, 1.0, 1.0], &[1.0], 1.0, 1.0).classify();
        assert_eq!(c.classical_rule, ClassicalRule::DivergesNonzero);
        assert_eq!(c.effective_rule, EffectiveRule::FormalOnly);
        let c = spec(&[1.0, 1.0, 1.0], &[], 3.0, 1.0).classify();
        assert_eq!(c.effective_rule, EffectiveRule::FiniteRadius { radius: 27.0 });
    }

    #[test]
    fn coefficient_examples() {
        let s = spec(&[1.0, 1.0], &[1.0], 1.0, 1.0);
        assert!((s.coefficient(5).unwrap() - 1.0).abs() < 1e-15);
        let s = spec(&[], &[], 1.0, 1.0);
        assert!((s.coefficient(4).unwrap() - 1.0 / 24.0).abs() < 1e-17);
        let s = spec(&[2.5], &[0.5], 0.7, 3.3);
        assert_eq!(s.coefficient(0).unwrap(), reciprocal_gamma(3.3));
        let s = spec(&[-2.0, 1.0], &[-5.0], 1.0, 1.0);
        assert_eq!(s.coefficient(3).unwrap(), 0.0);
        assert_eq!(s.coefficient(7).unwrap(), 0.0);
    }

    #[test]
    fn eval_examples() {
        let geo = spec(&[1.0, 1.0], &[1.0], 1.0, 1.0);
        let r = geo.eval(0.5).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert_eq!(r.status, EvalStatus::Converged);

        let s = spec(&[0.3], &[1.7], 1.4, 2.2);
        let r = s.eval(0.0).unwrap();
        assert_eq!(r.value, reciprocal_gamma(2.2));

        let exp = spec(&[], &[], 1.0, 1.0);
        let r = exp.eval(1.0).unwrap();
        assert!((r.value - std::f64::consts::E).abs() < 1e-15);

        let formal = spec(&[1.0, 1.0, 1.0], &[1.0], 1.0, 1.0);
        assert!(matches!(
            formal.eval(0.1),
            Err(HmlfError::DivergenceRejected { .. })
        ));
        assert!(matches!(
            geo.eval(1.0),
            Err(HmlfError::DivergenceRejected { .. })
        ));
    }

    #[test]
    fn polynomial_reports_exact_length() {
        // (1 − u)^2 from 2F1E(−2, 1; 1; α=1, β=1) gives Σ (−2)_r u^r / r!
        let s = spec(&[-2.0, 1.0], &[1.0], 1.0, 1.0);
        let r = s.eval(0.3).unwrap();
        assert_eq!(r.status, EvalStatus::Terminated);
        assert_eq!(r.terms_used, 3);
        assert!((r.value - 0.49).abs() < 1e-15);
        // polynomials are fine everywhere, even for a FormalOnly class
        let s = spec(&[-3.0, 2.0, 2.0], &[], 0.5, 1.0);
        assert_eq!(s.eval(100.0).unwrap().status, EvalStatus::Terminated);
    }

    #[test]
    fn asymptotic_mode_stops_at_smallest_term() {
        // Σ r! (−0.1)^r: terms 9 and 10 tie for smallest, the first one stops
        let s = spec(&[1.0, 1.0], &[], 1.0, 1.0);
        let r = s
            .eval_with(-0.1, &EvalOptions::default().asymptotic())
            .unwrap();
        assert_eq!(r.status, EvalStatus::TruncatedAsymptotic);
        assert_eq!(r.terms_used, 9);
        let smallest = 362_880.0 * 1e-9;
        assert!((r.est_abs_error - smallest).abs() < 1e-6 * smallest);
    }

    #[test]
    fn non_convergence_is_reported() {
        let s = spec(&[1.0, 1.0], &[1.0], 1.0, 1.0);
        let opts = EvalOptions {
            max_terms: 20,
            ..EvalOptions::default()
        };
        assert!(matches!(
            s.eval_with(0.9, &opts),
            Err(HmlfError::NonConvergence { terms: 20, .. })
        ));
    }

    #[test]
    fn large_beta_uses_log_route() {
        let s = spec(&[], &[], 1.0, 172.0);
        let r = s.eval(0.0).unwrap();
        let expected = (-crate::special::log_gamma(172.0).unwrap()).exp();
        assert!(r.value > 0.0);
        assert!(((r.value - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn serde_rejects_invalid_specs() {
        let ok: HmlfSpec =
            serde_json::from_str(r#"{"upper":[1,2],"lower":[3],"alpha":2,"beta":1}"#).unwrap();
        assert_eq!(ok, spec(&[1.0, 2.0], &[3.0], 2.0, 1.0));
        assert!(serde_json::from_str::<HmlfSpec>(r#"{"upper":[],"lower":[],"alpha":0,"beta":1}"#)
            .is_err());
        assert!(serde_json::from_str::<HmlfSpec>(r#"{"upper":[1],"lower":[-1],"alpha":1,"beta":1}"#)
            .is_err());
    }
}
