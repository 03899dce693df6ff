//! β-downshift recurrence and derivative closed forms for `2F1E(α,β)`.
//!
//! All closed forms here map a spec to another spec plus an explicit
//! prefactor; evaluation is delegated to the series engine.

use crate::error::{HmlfError, Result};
use crate::series::{EvalOptions, HmlfSpec};
use crate::special::{pochhammer, reciprocal_gamma};
use crate::sum::CompensatedSum;

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

fn require_positive(name: &str, m: u32) -> Result<()> {
    if m == 0 {
        Err(HmlfError::InvalidArgument(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

/// `(a1)_n (a2)_n / (b1)_n`.
fn pochhammer_weight(a1: f64, a2: f64, b1: f64, n: usize) -> Result<f64> {
    let num = pochhammer(a1, n)? * pochhammer(a2, n)?;
    if num == 0.0 {
        return Ok(0.0);
    }
    Ok(num / pochhammer(b1, n)?)
}

/// Right-hand side of the β-downshift identity
///
/// ```text
/// 2F1E(α, β−nα)(a1,a2; b1; u)
///   = u^n (a1)_n(a2)_n/(b1)_n · 2F1E(α,β)(a1+n, a2+n; b1+n; u)
///   + Σ_{r=1}^{n} (a1)_{n−r}(a2)_{n−r}/(b1)_{n−r} · u^{n−r} / Γ(β − rα)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct DownshiftExpansion {
    /// u-free part of the factor multiplying the shifted function.
    pub scale: f64,
    pub power: u32,
    /// Parameters shifted by `n`, same `(α, β)`.
    pub shifted: HmlfSpec,
    /// `(power, coeff)` pairs with powers `n−1, n−2, …, 0`.
    pub correction: Vec<(u32, f64)>,
}

impl DownshiftExpansion {
    pub fn evaluate(&self, u: f64, opts: &EvalOptions) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        if u != 0.0 {
            let shifted = self.shifted.eval_with(u, opts)?.value;
            acc.add(self.scale * u.powi(self.power as i32) * shifted);
        }
        for &(power, coeff) in &self.correction {
            acc.add(coeff * u.powi(power as i32));
        }
        Ok(acc.total())
    }
}

/// Builds the downshift expansion of `spec` by `n` steps.
///
/// Requires `β > nα` even where `1/Γ` would silently zero the offending
/// correction terms.
pub fn downshift_expansion(spec: &HmlfSpec, n: u32) -> Result<DownshiftExpansion> {
    let (a1, a2, b1) = require_2f1(spec)?;
    require_positive("n", n)?;
    let (alpha, beta) = (spec.alpha(), spec.beta());
    if beta <= f64::from(n) * alpha {
        return Err(HmlfError::ConditionViolated(format!(
            "beta = {beta} must exceed n·alpha = {}",
            f64::from(n) * alpha
        )));
    }
    let nf = f64::from(n);
    let shifted = HmlfSpec::new(vec![a1 + nf, a2 + nf], vec![b1 + nf], alpha, beta)?;
    let scale = pochhammer_weight(a1, a2, b1, n as usize)?;
    let correction = (1..=n)
        .map(|r| {
            let k = n - r;
            let w = pochhammer_weight(a1, a2, b1, k as usize)?;
            Ok((k, w * reciprocal_gamma(beta - f64::from(r) * alpha)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DownshiftExpansion {
        scale,
        power: n,
        shifted,
        correction,
    })
}

/// Value of `2F1E(α, β−nα)` at `u` computed from the shifted function.
pub fn beta_downshift(spec: &HmlfSpec, n: u32, u: f64, opts: &EvalOptions) -> Result<f64> {
    downshift_expansion(spec, n)?.evaluate(u, opts)
}

/// A derivative expressed as `scale · F(spec; u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeForm {
    pub scale: f64,
    pub spec: HmlfSpec,
}

impl DerivativeForm {
    pub fn evaluate(&self, u: f64, opts: &EvalOptions) -> Result<f64> {
        Ok(self.scale * self.spec.eval_with(u, opts)?.value)
    }
}

/// `m`-th derivative of `2F1E(α,β)(a1,a2; b1; u)`:
/// `m!(a1)_m(a2)_m/(b1)_m · 3F2E(α, mα+β)(a1+m, a2+m, m+1; b1+m, 1; u)`.
pub fn derivative_closed_form(spec: &HmlfSpec, m: u32) -> Result<DerivativeForm> {
    let (a1, a2, b1) = require_2f1(spec)?;
    require_positive("m", m)?;
    let mf = f64::from(m);
    let scale = pochhammer(1.0, m as usize)? * pochhammer_weight(a1, a2, b1, m as usize)?;
    let result = HmlfSpec::new(
        vec![a1 + mf, a2 + mf, mf + 1.0],
        vec![b1 + mf, 1.0],
        spec.alpha(),
        mf * spec.alpha() + spec.beta(),
    )?;
    Ok(DerivativeForm {
        scale,
        spec: result,
    })
}

/// First derivative of any member of the family:
/// `∏a/∏b · F(α, α+β)(a+1, 2; b+1, 1; u)`.
///
/// Composing this step reproduces [`derivative_closed_form`] for higher
/// orders once the matching `(k)` pairs cancel.
pub fn derivative_step(form: &DerivativeForm) -> Result<DerivativeForm> {
    let spec = &form.spec;
    let num: f64 = spec.upper().iter().product();
    let den: f64 = spec.lower().iter().product();
    let mut upper: Vec<f64> = spec.upper().iter().map(|a| a + 1.0).collect();
    upper.push(2.0);
    let mut lower: Vec<f64> = spec.lower().iter().map(|b| b + 1.0).collect();
    lower.push(1.0);
    let result = HmlfSpec::new(upper, lower, spec.alpha(), spec.alpha() + spec.beta())?;
    let scale = if num == 0.0 { 0.0 } else { form.scale * num / den };
    Ok(DerivativeForm {
        scale,
        spec: result,
    })
}

/// `u^m (a1)_m(a2)_m/(b1)_m · 2F1E(α,β)(a1+m, a2+m; b1+m; u)`.
pub fn umbral_shift_rhs(spec: &HmlfSpec, m: u32, u: f64, opts: &EvalOptions) -> Result<f64> {
    let (a1, a2, b1) = require_2f1(spec)?;
    require_positive("m", m)?;
    if u == 0.0 {
        return Ok(0.0);
    }
    let mf = f64::from(m);
    let shifted = HmlfSpec::new(
        vec![a1 + mf, a2 + mf],
        vec![b1 + mf],
        spec.alpha(),
        spec.beta(),
    )?;
    let w = pochhammer_weight(a1, a2, b1, m as usize)?;
    Ok(u.powi(m as i32) * w * shifted.eval_with(u, opts)?.value)
}

/// `u^m · (m+2)F(m+1)E(α, mα+β)(a1, a2, 2, …, 2; b1, 1, …, 1; u)` with `m`
/// copies of 2 and of 1.
pub fn chi_shift_rhs(spec: &HmlfSpec, m: u32, u: f64, opts: &EvalOptions) -> Result<f64> {
    let (a1, a2, b1) = require_2f1(spec)?;
    require_positive("m", m)?;
    if u == 0.0 {
        return Ok(0.0);
    }
    let mut upper = vec![a1, a2];
    upper.extend(std::iter::repeat_n(2.0, m as usize));
    let mut lower = vec![b1];
    lower.extend(std::iter::repeat_n(1.0, m as usize));
    let mf = f64::from(m);
    let result = HmlfSpec::new(upper, lower, spec.alpha(), mf * spec.alpha() + spec.beta())?;
    Ok(u.powi(m as i32) * result.eval_with(u, opts)?.value)
}

/// Default finite-difference step for derivative order `m`.
pub fn default_step(m: u32) -> f64 {
    match m {
        1 => 1e-5,
        _ => 1e-3,
    }
}

/// Five-point central difference of order 1 or 2 with step `h`.
pub fn numerical_derivative<F>(f: F, u: f64, m: u32, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(HmlfError::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let fm2 = f(u - 2.0 * h)?;
    let fm1 = f(u - h)?;
    let fp1 = f(u + h)?;
    let fp2 = f(u + 2.0 * h)?;
    match m {
        1 => Ok((fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)),
        2 => {
            let f0 = f(u)?;
            Ok((-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h))
        }
        _ => Err(HmlfError::InvalidArgument(format!(
            "finite differences support orders 1 and 2, got {m}"
        ))),
    }
}

/// Numerical `m`-th derivative of the series at `u`, `m ∈ {1, 2}`.
pub fn series_numerical_derivative(
    spec: &HmlfSpec,
    u: f64,
    m: u32,
    opts: &EvalOptions,
) -> Result<f64> {
    numerical_derivative(|x| Ok(spec.eval_with(x, opts)?.value), u, m, default_step(m))
}
