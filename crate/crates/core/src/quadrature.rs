//! Numerical integration used to check the closed forms independently.
//!
//! Nothing in the closed-form modules calls into this one.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HmlfError, Result};
use crate::sum::CompensatedSum;

/// Kronrod nodes of the 21-point rule on [−1, 1]; odd indices are the
/// 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_466_660_111,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for `XGK[1], XGK[3], …, XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const RULE_POINTS: usize = 21;

/// Cap on the number of intervals held by the adaptive integrator.
pub const MAX_SUBDIVISIONS: usize = 2000;

/// Half-period intervals summed before the oscillatory integrator gives up.
pub const MAX_OSCILLATION_INTERVALS: usize = 400;

/// Relative weight below which the Gaussian and exponential tails are cut.
const WEIGHT_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kernel {
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn sample<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(HmlfError::Domain {
            function: "integrand",
            value: x,
        })
    }
}

/// Gauss–Kronrod 21/10 on `[a, b]`.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = sample(f, center)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = sample(f, center - dx)?;
        let f2 = sample(f, center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let diff = ((kronrod - gauss) * half).abs();
    let rounding = 50.0 * f64::EPSILON * resabs * half.abs();
    Ok(Segment {
        a,
        b,
        value,
        error: diff.max(rounding),
    })
}

/// Adaptive Gauss–Kronrod integration over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the total
/// estimate is at most `tol · max(1, |value|)`.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    integrate_with_breaks(&f, &[a, b], tol)
}

/// As [`integrate_finite`] with the initial partition given by `breaks`,
/// which must be strictly increasing.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], tol: f64) -> Result<QuadResult> {
    if breaks.len() < 2
        || breaks.iter().any(|x| !x.is_finite())
        || breaks.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(HmlfError::InvalidArgument(
            "integration limits must be finite and strictly increasing".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(HmlfError::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        heap.push(gk21(f, w[0], w[1])?);
    }
    let mut evaluations = RULE_POINTS * heap.len();
    loop {
        let value: CompensatedSum = heap.iter().map(|s| s.value).collect();
        let value = value.total();
        let error: f64 = heap.iter().map(|s| s.error).sum();
        if error <= tol * value.abs().max(1.0) {
            return Ok(QuadResult {
                value,
                est_abs_error: error,
                evaluations,
            });
        }
        if heap.len() >= MAX_SUBDIVISIONS {
            return Err(HmlfError::MaxSubdivisions {
                limit: MAX_SUBDIVISIONS,
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // interval cannot be split further in f64
            return Err(HmlfError::MaxSubdivisions {
                limit: heap.len() + 1,
                estimate: value,
                error,
            });
        }
        heap.push(gk21(f, worst.a, mid)?);
        heap.push(gk21(f, mid, worst.b)?);
        evaluations += 2 * RULE_POINTS;
    }
}

fn cutoff_exponent(tol: f64) -> f64 {
    -(WEIGHT_CUTOFF * tol.min(1.0)).ln()
}

/// `∫_ℝ e^{−δu²} f(u) du`, truncated to `[−L, L]` where the weighted
/// integrand has fallen below `1e-18 · tol` of its size at the origin.
pub fn integrate_gaussian<F: Fn(f64) -> f64>(f: F, delta: f64, tol: f64) -> Result<QuadResult> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(HmlfError::InvalidDelta(delta));
    }
    let g = |u: f64| (-delta * u * u).exp() * f(u);
    let threshold = WEIGHT_CUTOFF * tol.min(1.0) * sample(&f, 0.0)?.abs().max(1.0);
    let mut l = (cutoff_exponent(tol) / delta).sqrt();
    // widen for integrands that grow fast enough to offset the weight
    let mut widenings = 0;
    while g(l).abs().max(g(-l).abs()) > threshold {
        widenings += 1;
        if widenings > 60 {
            return Err(HmlfError::InvalidArgument(
                "integrand is not dominated by the Gaussian weight".into(),
            ));
        }
        l *= 1.25;
    }
    let breaks = [-l, -0.5 * l, 0.0, 0.5 * l, l];
    integrate_with_breaks(&g, &breaks, tol)
}

/// `∫_0^∞ e^{−st} f(t) dt`, integrated on `[0, T]` with `e^{−sT} < 1e-18·tol`
/// plus the bound `|f(T)| e^{−sT} / s` on the remainder.
pub fn integrate_exp_halfline<F: Fn(f64) -> f64>(f: F, s: f64, tol: f64) -> Result<QuadResult> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(HmlfError::InvalidS(s));
    }
    let t_max = cutoff_exponent(tol) / s;
    let g = |t: f64| (-s * t).exp() * f(t);
    // geometric partition resolves the decay scale 1/s near the origin
    let mut breaks = vec![0.0];
    let mut x = 0.25 / s;
    while x < t_max {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(t_max);
    let mut res = integrate_with_breaks(&g, &breaks, tol)?;
    res.est_abs_error += sample(&g, t_max)?.abs() / s;
    res.evaluations += 1;
    Ok(res)
}

/// Last entry of the highest even column of Wynn's epsilon table.
fn wynn_epsilon(seq: &[f64]) -> f64 {
    let n = seq.len();
    if n < 3 {
        return *seq.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut curr: Vec<f64> = seq.to_vec();
    let mut best = curr[n - 1];
    for k in 1..n {
        let len = n - k;
        let mut next = Vec::with_capacity(len);
        for j in 0..len {
            let d = curr[j + 1] - curr[j];
            if d == 0.0 {
                // the column has converged exactly
                return if k % 2 == 1 { curr[j + 1] } else { best };
            }
            next.push(prev[j + 1] + d.recip());
        }
        prev = curr;
        curr = next;
        if k % 2 == 0 {
            best = curr[len - 1];
        }
    }
    best
}

/// `∫_0^∞ f(u) sin u du` or `∫_0^∞ f(u) cos u du` for eventually monotone
/// decaying `f`.
///
/// Integrates over the half periods `[kπ, (k+1)π]` and extrapolates the
/// partial sums with Wynn's epsilon algorithm. The error estimate combines
/// the last two changes of the extrapolated value; two consecutive estimates
/// under tolerance are required.
pub fn integrate_oscillatory_halfline<F: Fn(f64) -> f64>(
    f: F,
    kernel: Kernel,
    tol: f64,
) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(HmlfError::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let g = |u: f64| {
        f(u) * match kernel {
            Kernel::Sin => u.sin(),
            Kernel::Cos => u.cos(),
        }
    };
    let inner_tol = (tol * 1e-3).max(1e-14);
    // the recent tail of partial sums is enough to extrapolate
    const WINDOW: usize = 40;
    let mut partial = CompensatedSum::new();
    let mut sums = Vec::new();
    let mut estimates: Vec<f64> = Vec::new();
    let mut evaluations = 0;
    let mut inner_error = 0.0;
    let mut passes = 0;
    for k in 0..MAX_OSCILLATION_INTERVALS {
        let a = k as f64 * PI;
        let piece = integrate_finite(g, a, a + PI, inner_tol)?;
        evaluations += piece.evaluations;
        inner_error += piece.est_abs_error;
        partial.add(piece.value);
        sums.push(partial.total());
        let start = sums.len().saturating_sub(WINDOW);
        estimates.push(wynn_epsilon(&sums[start..]));
        let n = estimates.len();
        if n < 3 {
            continue;
        }
        let e = estimates[n - 1];
        let err = (e - estimates[n - 2]).abs() + (e - estimates[n - 3]).abs();
        if err <= tol * e.abs().max(1.0) {
            passes += 1;
        } else {
            passes = 0;
        }
        if passes >= 2 && n >= 6 {
            return Ok(QuadResult {
                value: e,
                est_abs_error: err + inner_error,
                evaluations,
            });
        }
    }
    Err(HmlfError::AccelerationFailure {
        intervals: MAX_OSCILLATION_INTERVALS,
        estimate: *estimates.last().unwrap_or(&0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn honest(res: &QuadResult, truth: f64) -> bool {
        (res.value - truth).abs() <= 10.0 * res.est_abs_error.max(f64::EPSILON * truth.abs())
    }

    #[test]
    fn rule_weights_and_exactness() {
        let kronrod: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let gauss: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((kronrod - 2.0).abs() < 1e-15);
        assert!((gauss - 2.0).abs() < 1e-15);
        // Kronrod is exact through degree 31, Gauss through 19
        for deg in [2, 10, 18, 30] {
            let f = |x: f64| x.powi(deg);
            let exact = 2.0 / (deg as f64 + 1.0);
            let s = gk21(&f, -1.0, 1.0).unwrap();
            assert!((s.value - exact).abs() < 1e-14, "degree {deg}");
        }
        let s = gk21(&|x: f64| x.powi(18), -1.0, 1.0).unwrap();
        assert!(s.error < 1e-14);
    }

    #[test]
    fn finite_examples() {
        let r = integrate_finite(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        let r = integrate_finite(|u| u, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        let r = integrate_finite(|u| 1.0 / (1.0 - u), 0.0, 0.5, 1e-12).unwrap();
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-14);
        assert!(honest(&r, std::f64::consts::LN_2));
        assert!(r.evaluations > 0);
    }

    #[test]
    fn finite_reports_unreachable_tolerance() {
        // below the rounding floor of the rule
        let r = integrate_finite(f64::exp, -1.0, 1.0, 1e-18);
        assert!(matches!(r, Err(HmlfError::MaxSubdivisions { .. })));
    }

    #[test]
    fn gaussian_examples() {
        let sqrt_pi = PI.sqrt();
        let r = integrate_gaussian(|_| 1.0, 1.0, 1e-12).unwrap();
        assert!((r.value - sqrt_pi).abs() < 1e-13);
        let r = integrate_gaussian(|u| u, 2.0, 1e-12).unwrap();
        assert!(r.value.abs() < 1e-14);
        let r = integrate_gaussian(f64::exp, 1.0, 1e-12).unwrap();
        let truth = sqrt_pi * 0.25f64.exp();
        assert!((r.value - truth).abs() < 1e-12 * truth);
        assert!(matches!(
            integrate_gaussian(|_| 1.0, 0.0, 1e-12),
            Err(HmlfError::InvalidDelta(_))
        ));
    }

    #[test]
    fn exp_halfline_examples() {
        let r = integrate_exp_halfline(|_| 1.0, 2.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        let r = integrate_exp_halfline(|t| t, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
        let r = integrate_exp_halfline(|t: f64| (-t).exp(), 1.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        assert!(matches!(
            integrate_exp_halfline(|_| 1.0, -1.0, 1e-12),
            Err(HmlfError::InvalidS(_))
        ));
    }

    #[test]
    fn oscillatory_examples() {
        let r = integrate_oscillatory_halfline(|u: f64| (-u).exp(), Kernel::Sin, 1e-10).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10, "{}", r.value);
        assert!(honest(&r, 0.5));
        let r = integrate_oscillatory_halfline(|u: f64| (-u).exp(), Kernel::Cos, 1e-10).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10, "{}", r.value);
        let r = integrate_oscillatory_halfline(|_| 0.0, Kernel::Sin, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn oscillatory_accelerates_slow_decay() {
        // ∫_0^∞ sin u / (1 + u) du = Ci(1) sin 1 + (π/2 − Si(1)) cos 1
        let truth = 0.621_449_624_235_813_3;
        let r = integrate_oscillatory_halfline(|u| 1.0 / (1.0 + u), Kernel::Sin, 1e-10).unwrap();
        assert!((r.value - truth).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn wynn_sums_alternating_harmonic() {
        let mut s = 0.0;
        let seq: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        assert!((wynn_epsilon(&seq) - std::f64::consts::LN_2).abs() < 1e-12);
    }
}
