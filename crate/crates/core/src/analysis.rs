//! Grid sampling and real-zero localization.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HmlfError, Result};
use crate::series::{EvalOptions, EvalStatus, HmlfSpec};

/// Outcome of evaluating one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Converged,
    Terminated,
    TruncatedAsymptotic,
    DivergenceDetected,
    /// The sum met its stopping rule but cancellation left an error estimate
    /// beyond `PRECISION_LOSS_FACTOR · tol` relative to the value.
    PrecisionLoss,
    /// The point lies outside the convergence domain.
    DivergenceRejected,
    NonConvergence,
    Overflow,
    Failed,
}

impl SampleStatus {
    /// Whether the value is a trustworthy convergent sum.
    pub fn is_exact(self) -> bool {
        matches!(self, SampleStatus::Converged | SampleStatus::Terminated)
    }

    fn from_eval(status: EvalStatus) -> Self {
        match status {
            EvalStatus::Converged => SampleStatus::Converged,
            EvalStatus::Terminated => SampleStatus::Terminated,
            EvalStatus::TruncatedAsymptotic => SampleStatus::TruncatedAsymptotic,
            EvalStatus::DivergenceDetected => SampleStatus::DivergenceDetected,
        }
    }

    fn from_error(err: &HmlfError) -> Self {
        match err {
            HmlfError::DivergenceRejected { .. } => SampleStatus::DivergenceRejected,
            HmlfError::NonConvergence { .. } => SampleStatus::NonConvergence,
            HmlfError::Overflow { .. } => SampleStatus::Overflow,
            _ => SampleStatus::Failed,
        }
    }
}

impl fmt::Display for SampleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SampleStatus::Converged => "converged",
            SampleStatus::Terminated => "terminated",
            SampleStatus::TruncatedAsymptotic => "truncated_asymptotic",
            SampleStatus::DivergenceDetected => "divergence_detected",
            SampleStatus::PrecisionLoss => "precision_loss",
            SampleStatus::DivergenceRejected => "divergence_rejected",
            SampleStatus::NonConvergence => "non_convergence",
            SampleStatus::Overflow => "overflow",
            SampleStatus::Failed => "failed",
        };
        f.write_str(s)
    }
}

/// One grid row; `value` is NaN when the point could not be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub u: f64,
    pub value: f64,
    pub status: SampleStatus,
}

const PRECISION_LOSS_FACTOR: f64 = 1e3;

fn sample_point(spec: &HmlfSpec, u: f64, opts: &EvalOptions) -> GridSample {
    match spec.eval_with(u, opts) {
        Ok(r) => {
            let lossy = r.est_abs_error > PRECISION_LOSS_FACTOR * opts.tol * r.value.abs().max(1.0);
            let status = match SampleStatus::from_eval(r.status) {
                s if s.is_exact() && lossy => SampleStatus::PrecisionLoss,
                s => s,
            };
            GridSample {
                u,
                value: r.value,
                status,
            }
        }
        Err(e) => GridSample {
            u,
            value: f64::NAN,
            status: SampleStatus::from_error(&e),
        },
    }
}

fn grid_points(u_min: f64, u_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(u_min.is_finite() && u_max.is_finite() && u_min < u_max) {
        return Err(HmlfError::InvalidArgument(format!(
            "grid range [{u_min}, {u_max}] must be finite and increasing"
        )));
    }
    if n < 2 {
        return Err(HmlfError::InvalidArgument(format!("grid needs at least 2 points, got {n}")));
    }
    let step = (u_max - u_min) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { u_max } else { u_min + step * i as f64 })
        .collect())
}

/// `n` equally spaced samples over `[u_min, u_max]`, endpoints included.
///
/// Points are evaluated in parallel on at most `threads` workers (all cores
/// when `None` or `Some(0)`) and returned in grid order. Failures are
/// recorded per point.
pub fn sample_grid(
    spec: &HmlfSpec,
    u_min: f64,
    u_max: f64,
    n: usize,
    opts: &EvalOptions,
    threads: Option<usize>,
) -> Result<Vec<GridSample>> {
    let points = grid_points(u_min, u_max, n)?;
    let run = || {
        points
            .par_iter()
            .map(|&u| sample_point(spec, u, opts))
            .collect::<Vec<_>>()
    };
    match threads {
        Some(t) if t > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| HmlfError::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(run))
        }
        _ => Ok(run()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealZero {
    pub location: f64,
    /// Endpoints at which `f` has opposite signs (or vanishes at `lo`).
    pub bracket: (f64, f64),
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    /// Ascending.
    pub zeros: Vec<RealZero>,
    pub scan_range: (f64, f64),
    pub scan_points: usize,
    /// Scan points without a convergent value; no zero is claimed across them.
    pub skipped_points: usize,
    /// Sign changes whose refinement could not reach the residual tolerance.
    pub unresolved_brackets: usize,
}

const MIN_SCAN_POINTS: usize = 16;
const MAX_REFINE_ITERATIONS: usize = 200;

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Brent's method on a bracket with `f(a)·f(b) < 0`; returns the best point.
fn brent<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, ftol: f64) -> Result<(f64, f64)> {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..MAX_REFINE_ITERATIONS {
        if fb.abs() <= ftol || fb == 0.0 {
            return Ok((b, fb));
        }
        let xtol = 2.0 * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE);
        if (b - a).abs() <= xtol {
            break;
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected {
            (s - b).abs() >= (b - c).abs() / 2.0 || (b - c).abs() < xtol
        } else {
            (s - b).abs() >= (c - d).abs() / 2.0 || (c - d).abs() < xtol
        };
        if outside || slow {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if sign(fa) * sign(fs) < 0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok((b, fb))
}

/// Sign-change scan over `scan_points` grid points followed by Brent
/// refinement to `|f| ≤ refine_tol`.
///
/// Only adjacent pairs of convergent samples are examined, so a zero is never
/// claimed across a point outside the convergence domain. Zeros of even
/// multiplicity, which do not change sign, are not found. Fails with
/// `DomainOutsideConvergence` when no scan point converges.
pub fn find_real_zeros(
    spec: &HmlfSpec,
    u_min: f64,
    u_max: f64,
    scan_points: usize,
    refine_tol: f64,
    opts: &EvalOptions,
) -> Result<ZeroReport> {
    if scan_points < MIN_SCAN_POINTS {
        return Err(HmlfError::InvalidArgument(format!(
            "scan needs at least {MIN_SCAN_POINTS} points, got {scan_points}"
        )));
    }
    if !(refine_tol > 0.0) {
        return Err(HmlfError::InvalidArgument(format!(
            "refine_tol must be positive, got {refine_tol}"
        )));
    }
    let grid = sample_grid(spec, u_min, u_max, scan_points, opts, None)?;
    let skipped_points = grid.iter().filter(|s| !s.status.is_exact()).count();
    if skipped_points == grid.len() {
        return Err(HmlfError::DomainOutsideConvergence { u_min, u_max });
    }
    let f = |u: f64| -> Result<f64> {
        let r = spec.eval_with(u, opts)?;
        Ok(r.value)
    };
    let mut zeros = Vec::new();
    let mut unresolved_brackets = 0;
    let last = grid.len() - 1;
    for (i, pair) in grid.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        if !(lo.status.is_exact() && hi.status.is_exact()) {
            continue;
        }
        let (slo, shi) = (sign(lo.value), sign(hi.value));
        if slo == 0 {
            zeros.push(RealZero {
                location: lo.u,
                bracket: (lo.u, hi.u),
                residual: 0.0,
            });
            continue;
        }
        if shi == 0 {
            if i + 1 == last {
                zeros.push(RealZero {
                    location: hi.u,
                    bracket: (lo.u, hi.u),
                    residual: 0.0,
                });
            }
            continue;
        }
        if slo == shi {
            continue;
        }
        let (x, fx) = brent(&f, lo.u, hi.u, lo.value, hi.value, refine_tol)?;
        if fx.abs() <= refine_tol {
            zeros.push(RealZero {
                location: x,
                bracket: (lo.u, hi.u),
                residual: fx,
            });
        } else {
            unresolved_brackets += 1;
        }
    }
    Ok(ZeroReport {
        zeros,
        scan_range: (u_min, u_max),
        scan_points,
        skipped_points,
        unresolved_brackets,
    })
}
