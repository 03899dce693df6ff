//! Closed forms of integrals and transforms of the series.
//!
//! Every builder returns a [`ClosedForm`]: a prefactor, a result spec and the
//! point at which it is evaluated. All identities follow from integrating the
//! series term by term:
//!
//! - moments: `∫_0^u t^{δ+r} dt = u^{δ+r+1}/(δ+r+1)` and
//!   `1/(δ+r+1) = (δ+1)_r / ((δ+1)(δ+2)_r)`;
//! - Gaussian weight: see [`gaussian_closed_form`];
//! - sine, cosine, Laplace and Sumudu: `∫_0^∞ t^n e^{−st} dt = n!/s^{n+1}`,
//!   with `s = ∓i` for the trigonometric kernels.
//!
//! Where the result series is not convergent at its argument the identity
//! holds only formally, and evaluation is refused unless the caller opts
//! into asymptotic mode.

use serde::{Deserialize, Serialize};

use crate::error::{HmlfError, Result};
use crate::series::{classify, EffectiveRule, EvalOptions, EvalResult, HmlfSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub prefactor: f64,
    pub spec: HmlfSpec,
    pub argument: f64,
}

impl ClosedForm {
    /// `prefactor · F(spec; argument)`.
    pub fn evaluate(&self, opts: &EvalOptions) -> Result<EvalResult> {
        if self.prefactor == 0.0 {
            return Ok(EvalResult {
                value: 0.0,
                terms_used: 0,
                est_abs_error: 0.0,
                status: crate::series::EvalStatus::Converged,
            });
        }
        Ok(self
            .spec
            .eval_with(self.argument, opts)?
            .scaled(self.prefactor))
    }

    pub fn effective_rule(&self) -> EffectiveRule {
        classify(&self.spec).effective_rule
    }

    /// Evaluates, refusing with `FormalIdentity` when the result series is
    /// not entire and asymptotic mode is off.
    fn evaluate_entire_only(&self, opts: &EvalOptions) -> Result<EvalResult> {
        let rule = self.effective_rule();
        if rule != EffectiveRule::Entire && !opts.allow_asymptotic {
            return Err(HmlfError::FormalIdentity { rule });
        }
        self.evaluate(opts)
    }
}

fn require_2f1(spec: &HmlfSpec) -> Result<(f64, f64, f64)> {
    match (spec.upper(), spec.lower()) {
        (&[a1, a2], &[b1]) => Ok((a1, a2, b1)),
        _ => Err(HmlfError::InvalidArgument(format!(
            "expected two upper and one lower parameter, got p = {}, q = {}",
            spec.p(),
            spec.q()
        ))),
    }
}

fn appended(base: &[f64], extra: &[f64]) -> Vec<f64> {
    base.iter().chain(extra).copied().collect()
}

fn halves(params: &[f64], offset: f64) -> Vec<f64> {
    params
        .iter()
        .flat_map(|&a| [(a + offset) / 2.0, (a + offset + 1.0) / 2.0])
        .collect()
}

/// `∫_0^u t^δ F(t) dt = u^{δ+1}/(δ+1) · F(a, δ+1; b, δ+2; u)`.
pub fn moment_closed_form(spec: &HmlfSpec, delta: f64, u: f64) -> Result<ClosedForm> {
    if !delta.is_finite() || delta == -1.0 || (delta + 2.0 <= 0.0 && delta == delta.floor()) {
        return Err(HmlfError::InvalidDelta(delta));
    }
    let power = if u == 0.0 {
        if delta > -1.0 {
            0.0
        } else {
            return Err(HmlfError::Domain {
                function: "moment_integral",
                value: u,
            });
        }
    } else if u < 0.0 && delta != delta.floor() {
        // u^{δ+1} is not real
        return Err(HmlfError::Domain {
            function: "moment_integral",
            value: u,
        });
    } else if delta == delta.floor() && delta.abs() < 1e9 {
        u.powi(delta as i32 + 1)
    } else {
        u.powf(delta + 1.0)
    };
    let result = HmlfSpec::new(
        appended(spec.upper(), &[delta + 1.0]),
        appended(spec.lower(), &[delta + 2.0]),
        spec.alpha(),
        spec.beta(),
    )?;
    Ok(ClosedForm {
        prefactor: power / (delta + 1.0),
        spec: result,
        argument: u,
    })
}

pub fn moment_integral(spec: &HmlfSpec, delta: f64, u: f64, opts: &EvalOptions) -> Result<EvalResult> {
    moment_closed_form(spec, delta, u)?.evaluate(opts)
}

/// `∫_ℝ e^{−δu²} F(u) du = √(π/δ) · F(a/2, (a+1)/2, 1/2; b/2, (b+1)/2; 2α, β; 4^{p−q}/δ)`.
///
/// Odd powers integrate to zero and
/// `∫_ℝ e^{−δu²} u^{2r} du = Γ(r+1/2)/δ^{r+1/2} = √(π/δ) (1/2)_r δ^{−r}`.
/// The surviving coefficients carry `(a)_{2r}` and `(b)_{2r}`, which the
/// duplication identity `(a)_{2r} = 4^r (a/2)_r ((a+1)/2)_r` splits into two
/// Pochhammer symbols each. The `4^r` factors leave `4^{r(p−q)}`, so the
/// argument is `4/δ`, `1/δ` or `1/(4δ)` for `p − q = 1, 0, −1`, and `Γ(2αr+β)`
/// doubles `α`.
pub fn gaussian_closed_form(spec: &HmlfSpec, delta: f64) -> Result<ClosedForm> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(HmlfError::InvalidDelta(delta));
    }
    let mut upper = halves(spec.upper(), 0.0);
    upper.push(0.5);
    let lower = halves(spec.lower(), 0.0);
    let excess = spec.p() as i32 - spec.q() as i32;
    let result = HmlfSpec::new(upper, lower, 2.0 * spec.alpha(), spec.beta())?;
    Ok(ClosedForm {
        prefactor: (std::f64::consts::PI / delta).sqrt(),
        spec: result,
        argument: 4f64.powi(excess) / delta,
    })
}

/// Refuses with `FormalIdentity` when the doubled spec is formal-only,
/// unless asymptotic mode is on.
pub fn gaussian_integral(spec: &HmlfSpec, delta: f64, opts: &EvalOptions) -> Result<EvalResult> {
    let form = gaussian_closed_form(spec, delta)?;
    let rule = form.effective_rule();
    if rule == EffectiveRule::FormalOnly && !opts.allow_asymptotic {
        return Err(HmlfError::FormalIdentity { rule });
    }
    form.evaluate(opts)
}

/// `∫_0^∞ F(−u) sin u du` for `2F1E(α,β)`:
/// `6F2E(2α, β)(a1/2, (a1+1)/2, a2/2, (a2+1)/2, 1/2, 1; b1/2, (b1+1)/2; −16)`.
pub fn sine_closed_form(spec: &HmlfSpec) -> Result<ClosedForm> {
    let (a1, a2, b1) = require_2f1(spec)?;
    let mut upper = halves(&[a1, a2], 0.0);
    upper.extend([0.5, 1.0]);
    let result = HmlfSpec::new(upper, halves(&[b1], 0.0), 2.0 * spec.alpha(), spec.beta())?;
    Ok(ClosedForm {
        prefactor: 1.0,
        spec: result,
        argument: -16.0,
    })
}

/// `∫_0^∞ F(−u) cos u du` for `2F1E(α,β)`:
/// `a1 a2/b1 · 6F2E(2α, α+β)((a1+1)/2, (a1+2)/2, (a2+1)/2, (a2+2)/2, 3/2, 1;
/// (b1+1)/2, (b1+2)/2; −16)`.
pub fn cosine_closed_form(spec: &HmlfSpec) -> Result<ClosedForm> {
    let (a1, a2, b1) = require_2f1(spec)?;
    let mut upper = halves(&[a1, a2], 1.0);
    upper.extend([1.5, 1.0]);
    let result = HmlfSpec::new(
        upper,
        halves(&[b1], 1.0),
        2.0 * spec.alpha(),
        spec.alpha() + spec.beta(),
    )?;
    Ok(ClosedForm {
        prefactor: a1 * a2 / b1,
        spec: result,
        argument: -16.0,
    })
}

/// Sine integral; `FormalIdentity` unless the result series is entire
/// (`α > 2`) or asymptotic mode is on.
pub fn sine_integral_rhs(spec: &HmlfSpec, opts: &EvalOptions) -> Result<EvalResult> {
    sine_closed_form(spec)?.evaluate_entire_only(opts)
}

/// Cosine integral; same guard as [`sine_integral_rhs`].
pub fn cosine_integral_rhs(spec: &HmlfSpec, opts: &EvalOptions) -> Result<EvalResult> {
    cosine_closed_form(spec)?.evaluate_entire_only(opts)
}

fn transform_spec(spec: &HmlfSpec) -> Result<HmlfSpec> {
    let (a1, a2, b1) = require_2f1(spec)?;
    HmlfSpec::new(vec![a1, a2, 1.0], vec![b1], spec.alpha(), spec.beta())
}

/// `ℒ{F(−t)}(s) = (1/s) · 3F1E(α,β)(a1, a2, 1; b1; −1/s)`.
pub fn laplace_closed_form(spec: &HmlfSpec, s: f64) -> Result<ClosedForm> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(HmlfError::InvalidS(s));
    }
    Ok(ClosedForm {
        prefactor: s.recip(),
        spec: transform_spec(spec)?,
        argument: -s.recip(),
    })
}

/// Laplace transform of `t ↦ F(−t)`.
///
/// For `α ≤ 2` the result series is not entire and the value is the optimal
/// truncation of an expansion in `1/s`, with status `TruncatedAsymptotic`.
pub fn laplace_transform(spec: &HmlfSpec, s: f64, opts: &EvalOptions) -> Result<EvalResult> {
    let form = laplace_closed_form(spec, s)?;
    let opts = if form.effective_rule() == EffectiveRule::Entire {
        *opts
    } else {
        opts.asymptotic()
    };
    form.evaluate(&opts)
}

/// `𝒮{F(−t)}(u) = ∫_0^∞ e^{−t} F(−ut) dt = 3F1E(α,β)(a1, a2, 1; b1; −u)`.
pub fn sumudu_closed_form(spec: &HmlfSpec, u: f64) -> Result<ClosedForm> {
    Ok(ClosedForm {
        prefactor: 1.0,
        spec: transform_spec(spec)?,
        argument: -u,
    })
}

pub fn sumudu_transform(spec: &HmlfSpec, u: f64, opts: &EvalOptions) -> Result<EvalResult> {
    sumudu_closed_form(spec, u)?.evaluate(opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::reciprocal_gamma;

    fn spec(upper: &[f64], lower: &[f64], alpha: f64, beta: f64) -> HmlfSpec {
        HmlfSpec::new(upper.to_vec(), lower.to_vec(), alpha, beta).unwrap()
    }

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn moment_examples() {
        let s = spec(&[1.0, 1.0], &[1.0], 1.0, 1.0);
        let form = moment_closed_form(&s, 0.0, 0.5).unwrap();
        assert_eq!(form.spec.upper(), &[1.0, 1.0, 1.0]);
        assert_eq!(form.spec.lower(), &[1.0, 2.0]);
        assert_eq!(form.prefactor, 0.5);
        let v = form.evaluate(&opts()).unwrap().value;
        assert!((v - std::f64::consts::LN_2).abs() < 1e-13);
        assert_eq!(moment_integral(&s, 0.0, 0.0, &opts()).unwrap().value, 0.0);
    }

    #[test]
    fn moment_rejects_bad_delta_and_domain() {
        let s = spec(&[1.0, 1.0], &[1.0], 2.0, 1.0);
        for d in [-1.0, -2.0, -3.0, f64::NAN] {
            assert!(matches!(
                moment_closed_form(&s, d, 0.5),
                Err(HmlfError::InvalidDelta(_))
            ));
        }
        assert!(matches!(
            moment_closed_form(&s, 0.5, -0.5),
            Err(HmlfError::Domain { .. })
        ));
        // integer δ allows negative u
        let e = spec(&[], &[], 1.0, 1.0);
        let v = moment_integral(&e, 1.0, -1.0, &opts()).unwrap().value;
        // ∫_0^{−1} t e^t dt = (t − 1)e^t from 0 to −1
        assert!((v - (1.0 - 2.0 / std::f64::consts::E)).abs() < 1e-14);
    }

    #[test]
    fn gaussian_argument_rule() {
        for (p, q, expected) in [(2, 1, 4.0), (1, 1, 1.0), (1, 2, 0.25)] {
            let s = spec(&vec![1.5; p], &vec![2.5; q], 3.0, 1.0);
            let form = gaussian_closed_form(&s, 1.0).unwrap();
            assert_eq!(form.argument, expected);
            let form = gaussian_closed_form(&s, 2.0).unwrap();
            assert_eq!(form.argument, expected / 2.0);
        }
    }

    #[test]
    fn gaussian_examples() {
        let s = spec(&[1.0, 2.0], &[3.0], 2.0, 1.0);
        let form = gaussian_closed_form(&s, 1.0).unwrap();
        assert_eq!(form.spec, spec(&[0.5, 1.0, 1.0, 1.5, 0.5], &[1.5, 2.0], 4.0, 1.0));
        assert_eq!(form.argument, 4.0);

        // ∫ e^{−u²} e^u du = √π e^{1/4}
        let e = spec(&[], &[], 1.0, 1.0);
        let v = gaussian_integral(&e, 1.0, &opts()).unwrap().value;
        let truth = std::f64::consts::PI.sqrt() * 0.25f64.exp();
        assert!((v - truth).abs() < 1e-13 * truth);

        let s = spec(&[1.0, 2.0], &[3.0], 1.0, 1.0);
        assert!(matches!(
            gaussian_integral(&s, 1.0, &opts()),
            Err(HmlfError::FormalIdentity { .. })
        ));
        assert!(matches!(
            gaussian_integral(&s, 0.0, &opts()),
            Err(HmlfError::InvalidDelta(_))
        ));
    }

    #[test]
    fn trig_closed_form_structure() {
        let s = spec(&[2.0, 3.0], &[4.0], 3.0, 1.5);
        let sine = sine_closed_form(&s).unwrap();
        assert_eq!(sine.argument, -16.0);
        assert_eq!(sine.spec.upper(), &[1.0, 1.5, 1.5, 2.0, 0.5, 1.0]);
        assert_eq!(sine.spec.lower(), &[2.0, 2.5]);
        assert_eq!(sine.spec.alpha(), 6.0);
        assert_eq!(sine.spec.beta(), 1.5);
        let cosine = cosine_closed_form(&s).unwrap();
        assert_eq!(cosine.prefactor, 1.5);
        assert_eq!(cosine.argument, -16.0);
        assert_eq!(cosine.spec.upper(), &[1.5, 2.0, 2.0, 2.5, 1.5, 1.0]);
        assert_eq!(cosine.spec.beta(), 4.5);

        let low = spec(&[1.0, 1.0], &[2.0], 1.0, 1.0);
        assert!(matches!(
            sine_integral_rhs(&low, &opts()),
            Err(HmlfError::FormalIdentity { .. })
        ));
        assert!(matches!(
            cosine_integral_rhs(&spec(&[1.0, 1.0], &[2.0], 2.0, 1.0), &opts()),
            Err(HmlfError::FormalIdentity { .. })
        ));
    }

    #[test]
    fn transform_examples() {
        let s = spec(&[1.0, 1.0], &[2.0], 3.0, 1.7);
        let form = laplace_closed_form(&s, 2.0).unwrap();
        assert_eq!(form.spec.upper(), &[1.0, 1.0, 1.0]);
        assert_eq!(form.argument, -0.5);
        let big = 1e6;
        let v = laplace_transform(&s, big, &opts()).unwrap().value;
        assert!((big * v - reciprocal_gamma(1.7)).abs() < 1e-5);
        assert!(matches!(
            laplace_transform(&s, 0.0, &opts()),
            Err(HmlfError::InvalidS(_))
        ));
        let v = sumudu_transform(&s, 0.0, &opts()).unwrap().value;
        assert_eq!(v, reciprocal_gamma(1.7));
        // duality S(u) = L(1/u)/u
        let u = 0.5;
        let sv = sumudu_transform(&s, u, &opts()).unwrap().value;
        let lv = laplace_transform(&s, 1.0 / u, &opts()).unwrap().value / u;
        assert!((sv - lv).abs() < 1e-14 * sv.abs());
    }

    #[test]
    fn laplace_switches_to_asymptotic_below_entire_regime() {
        let s = spec(&[1.0, 1.0], &[1.0], 1.0, 1.0);
        let r = laplace_transform(&s, 10.0, &opts()).unwrap();
        assert_eq!(r.status, crate::series::EvalStatus::TruncatedAsymptotic);
    }
}
