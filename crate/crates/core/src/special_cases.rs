//! Classical and recently introduced functions that are members of the
//! family for particular parameters.

use std::f64::consts::PI;

use crate::error::{HmlfError, Result};
use crate::series::HmlfSpec;
use crate::special::{gamma, pochhammer};

fn value(spec: &HmlfSpec, u: f64) -> Result<f64> {
    Ok(spec.eval(u)?.value)
}

/// `E(α,β)` as the member with no parameters.
pub fn mittag_leffler_spec(alpha: f64, beta: f64) -> Result<HmlfSpec> {
    HmlfSpec::new(vec![], vec![], alpha, beta)
}

/// Two-parameter Mittag-Leffler function `Σ u^r / Γ(αr + β)`.
pub fn mittag_leffler(alpha: f64, beta: f64, u: f64) -> Result<f64> {
    value(&mittag_leffler_spec(alpha, beta)?, u)
}

pub fn prabhakar_spec(a1: f64, alpha: f64, beta: f64) -> Result<HmlfSpec> {
    HmlfSpec::new(vec![a1], vec![1.0], alpha, beta)
}

/// Three-parameter (Prabhakar) Mittag-Leffler function `Σ (a1)_r u^r / (r! Γ(αr + β))`.
pub fn prabhakar(a1: f64, alpha: f64, beta: f64, u: f64) -> Result<f64> {
    value(&prabhakar_spec(a1, alpha, beta)?, u)
}

/// `2F2E(1, m+1)(a1, a2; b1, 1)`, evaluated at `−u` by [`hyp_tricomi`].
pub fn tricomi_spec(a1: f64, a2: f64, b1: f64, m: u32) -> Result<HmlfSpec> {
    HmlfSpec::new(vec![a1, a2], vec![b1, 1.0], 1.0, f64::from(m) + 1.0)
}

/// Hypergeometric-Tricomi function
/// `Σ (−u)^r (a1)_r (a2)_r / (Γ(m+r+1) r! (b1)_r)`.
pub fn hyp_tricomi(a1: f64, a2: f64, b1: f64, m: u32, u: f64) -> Result<f64> {
    value(&tricomi_spec(a1, a2, b1, m)?, -u)
}

/// `4F3E(1, m+1)` member that carries the hypergeometric-Bessel function
/// at `−u²`.
pub fn bessel_spec(a1: f64, a2: f64, b1: f64, m: u32) -> Result<HmlfSpec> {
    let mf = f64::from(m);
    HmlfSpec::new(
        vec![
            (a1 + mf) / 2.0,
            (a1 + mf + 1.0) / 2.0,
            (a2 + mf) / 2.0,
            (a2 + mf + 1.0) / 2.0,
        ],
        vec![1.0, (b1 + mf) / 2.0, (b1 + mf + 1.0) / 2.0],
        1.0,
        mf + 1.0,
    )
}

/// Hypergeometric-Bessel function
/// `Σ (−1)^r (a1)_{m+2r} (a2)_{m+2r} / (r! Γ(m+r+1) (b1)_{m+2r}) (u/2)^{m+2r}`.
///
/// The series converges for `|u| < 1`.
pub fn hyp_bessel(a1: f64, a2: f64, b1: f64, m: u32, u: f64) -> Result<f64> {
    let n = m as usize;
    let scale = pochhammer(a1, n)? * pochhammer(a2, n)? / pochhammer(b1, n)?;
    let series = value(&bessel_spec(a1, a2, b1, m)?, -u * u)?;
    Ok((0.5 * u).powi(m as i32) * scale * series)
}

pub fn fox_wright_spec(a1: f64, a2: f64, alpha: f64, beta: f64) -> Result<HmlfSpec> {
    HmlfSpec::new(vec![a1, a2], vec![1.0], alpha, beta)
}

/// Fox–Wright `2ψ1` with unit-weight Gamma arguments:
/// `Σ Γ(a1+r) Γ(a2+r) / (Γ(αr+β) r!) u^r = Γ(a1) Γ(a2) · 2F1E(α,β)(a1, a2; 1; u)`.
pub fn fox_wright_2psi1(a1: f64, a2: f64, alpha: f64, beta: f64, u: f64) -> Result<f64> {
    let weight = gamma(a1)? * gamma(a2)?;
    Ok(weight * value(&fox_wright_spec(a1, a2, alpha, beta)?, u)?)
}

/// Gauss hypergeometric function `2F1(a1, a2; b1; u)`, `|u| < 1`.
pub fn classical_2f1(a1: f64, a2: f64, b1: f64, u: f64) -> Result<f64> {
    if !(u.abs() < 1.0) {
        return Err(HmlfError::Domain {
            function: "classical_2f1",
            value: u,
        });
    }
    value(&HmlfSpec::new(vec![a1, a2], vec![b1], 1.0, 1.0)?, u)
}

/// `(u√π/2) · 0F1E(1, 3/2)(−; 1; −u²/4)`, which is `sin u`.
pub fn sin_via_hmlf(u: f64) -> Result<f64> {
    let spec = HmlfSpec::new(vec![], vec![1.0], 1.0, 1.5)?;
    Ok(0.5 * u * PI.sqrt() * value(&spec, -0.25 * u * u)?)
}

/// `√π · 0F1E(1, 1/2)(−; 1; −u²/4)`, which is `cos u`.
pub fn cos_via_hmlf(u: f64) -> Result<f64> {
    let spec = HmlfSpec::new(vec![], vec![1.0], 1.0, 0.5)?;
    Ok(PI.sqrt() * value(&spec, -0.25 * u * u)?)
}

/// `∫_ℝ e^{−δu²} cos√u du = (π/√δ) · 0F1E(2, 1/2)(−; 1; 1/(64δ))`, where
/// `cos√u` continues to `cosh√|u|` for `u < 0`.
pub fn cos_sqrt_gaussian(delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(HmlfError::InvalidDelta(delta));
    }
    let spec = HmlfSpec::new(vec![], vec![1.0], 2.0, 0.5)?;
    Ok(PI / delta.sqrt() * value(&spec, 1.0 / (64.0 * delta))?)
}
