//! Self-checks comparing closed forms with independent computations.
//!
//! Each suite yields one [`Check`] per comparison. A check passes when
//! `|computed − reference| ≤ tolerance · max(1, |reference|)`, where the
//! tolerance is the caller's, raised to the intrinsic accuracy of the
//! reference method (finite differences, for instance, cannot reach 1e-12).

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::find_real_zeros;
use crate::calculus::{
    beta_downshift, derivative_closed_form, derivative_step, series_numerical_derivative,
};
use crate::error::{HmlfError, Result};
use crate::integrals::{
    cosine_integral_rhs, gaussian_closed_form, gaussian_integral, laplace_transform,
    moment_integral, sine_integral_rhs, sumudu_transform,
};
use crate::quadrature::{
    integrate_exp_halfline, integrate_finite, integrate_gaussian, integrate_oscillatory_halfline,
    Kernel,
};
use crate::series::{EvalOptions, HmlfSpec};
use crate::special::{gamma, log_gamma, pochhammer, reciprocal_gamma};
use crate::special_cases::{
    classical_2f1, cos_sqrt_gaussian, cos_via_hmlf, fox_wright_2psi1, hyp_bessel, hyp_tricomi,
    mittag_leffler, prabhakar, sin_via_hmlf,
};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Special,
    Series,
    Calculus,
    Integrals,
    Transforms,
    Reductions,
    Zeros,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = [
        "special",
        "series",
        "calculus",
        "integrals",
        "transforms",
        "reductions",
        "zeros",
        "all",
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Series => "series",
            Suite::Calculus => "calculus",
            Suite::Integrals => "integrals",
            Suite::Transforms => "transforms",
            Suite::Reductions => "reductions",
            Suite::Zeros => "zeros",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = HmlfError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "special" => Suite::Special,
            "series" => Suite::Series,
            "calculus" => Suite::Calculus,
            "integrals" => Suite::Integrals,
            "transforms" => Suite::Transforms,
            "reductions" => Suite::Reductions,
            "zeros" => Suite::Zeros,
            "all" => Suite::All,
            other => {
                return Err(HmlfError::InvalidArgument(format!(
                    "unknown suite '{other}', expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    /// `|computed − reference| / max(1, |reference|)`.
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Set when either side failed to evaluate.
    pub note: Option<String>,
}

struct Recorder {
    suite: &'static str,
    tol: f64,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: &'static str, tol: f64) -> Self {
        Recorder {
            suite,
            tol,
            checks: Vec::new(),
        }
    }

    /// Records a comparison whose reference method is accurate to `floor`.
    fn compare(&mut self, name: impl Into<String>, computed: Result<f64>, reference: Result<f64>, floor: f64) {
        let tolerance = self.tol.max(floor);
        let check = match (computed, reference) {
            (Ok(c), Ok(r)) => {
                let error = (c - r).abs() / r.abs().max(1.0);
                Check {
                    suite: self.suite,
                    name: name.into(),
                    computed: c,
                    reference: r,
                    error,
                    tolerance,
                    passed: error <= tolerance,
                    note: None,
                }
            }
            (c, r) => {
                let note = [c.as_ref().err(), r.as_ref().err()]
                    .into_iter()
                    .flatten()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join("; ");
                Check {
                    suite: self.suite,
                    name: name.into(),
                    computed: c.unwrap_or(f64::NAN),
                    reference: r.unwrap_or(f64::NAN),
                    error: f64::NAN,
                    tolerance,
                    passed: false,
                    note: Some(note),
                }
            }
        };
        self.checks.push(check);
    }

    /// Records a pass/fail property with no numeric comparison.
    fn require(&mut self, name: impl Into<String>, ok: Result<bool>) {
        let (passed, note) = match ok {
            Ok(p) => (p, None),
            Err(e) => (false, Some(e.to_string())),
        };
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            computed: if passed { 1.0 } else { 0.0 },
            reference: 1.0,
            error: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed,
            note,
        });
    }
}

fn spec(upper: &[f64], lower: &[f64], alpha: f64, beta: f64) -> HmlfSpec {
    HmlfSpec::new(upper.to_vec(), lower.to_vec(), alpha, beta).expect("built-in spec is valid")
}

fn value_at(spec: &HmlfSpec, u: f64, opts: &EvalOptions) -> f64 {
    spec.eval_with(u, opts).map_or(f64::NAN, |r| r.value)
}

fn quad_tol(tol: f64) -> f64 {
    (tol * 1e-2).clamp(1e-13, 1e-8)
}

/// Runs a suite; `All` runs every suite in order.
pub fn run_suite(suite: Suite, tol: f64) -> Vec<Check> {
    match suite {
        Suite::Special => special(tol),
        Suite::Series => series(tol),
        Suite::Calculus => calculus(tol),
        Suite::Integrals => integrals(tol),
        Suite::Transforms => transforms(tol),
        Suite::Reductions => reductions(tol),
        Suite::Zeros => zeros(tol),
        Suite::All => [
            Suite::Special,
            Suite::Series,
            Suite::Calculus,
            Suite::Integrals,
            Suite::Transforms,
            Suite::Reductions,
            Suite::Zeros,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, tol))
        .collect(),
    }
}

fn special(tol: f64) -> Vec<Check> {
    let mut rec = Recorder::new("special", tol);
    let mut factorial = 1.0;
    for n in 1..=20u32 {
        rec.compare(format!("gamma({n}) = ({n}-1)!"), gamma(f64::from(n)), Ok(factorial), 0.0);
        factorial *= f64::from(n);
    }
    rec.compare("gamma(1/2) = sqrt(pi)", gamma(0.5), Ok(PI.sqrt()), 0.0);
    rec.compare("gamma(-1/2) = -2 sqrt(pi)", gamma(-0.5), Ok(-2.0 * PI.sqrt()), 0.0);
    for x in [0.3, 2.7, 15.5, 120.25] {
        let product = log_gamma(x).map(|l| reciprocal_gamma(x) * l.exp());
        rec.compare(format!("rgamma({x}) exp(lgamma({x})) = 1"), product, Ok(1.0), 0.0);
    }
    for (a, n, m) in [(0.7, 5, 9), (-2.5, 3, 4), (3.25, 12, 20)] {
        let lhs = pochhammer(a, n + m);
        let rhs = pochhammer(a, n).and_then(|x| Ok(x * pochhammer(a + n as f64, m)?));
        rec.compare(format!("({a})_{{{n}+{m}}} = ({a})_{n} ({a}+{n})_{m}"), lhs, rhs, 0.0);
    }
    for (a, r) in [(0.7, 6), (2.5, 10), (-1.3, 7)] {
        let lhs = pochhammer(a, 2 * r);
        let rhs = pochhammer(a / 2.0, r)
            .and_then(|x| Ok(4f64.powi(r as i32) * x * pochhammer((a + 1.0) / 2.0, r)?));
        rec.compare(format!("({a})_{{2*{r}}} duplication"), lhs, rhs, 0.0);
    }
    let mut f = 1.0;
    for r in 1..=30usize {
        f *= (2 * r - 1) as f64 * (2 * r) as f64;
        if r % 5 == 0 {
            let rhs = pochhammer(0.5, r).and_then(|x| Ok(4f64.powi(r as i32) * x * pochhammer(1.0, r)?));
            rec.compare(format!("(2*{r})! = 4^{r} (1/2)_{r} {r}!"), rhs, Ok(f), 0.0);
        }
    }
    rec.checks
}

fn series(tol: f64) -> Vec<Check> {
    let mut rec = Recorder::new("series", tol);
    let opts = EvalOptions::default();
    let exp_spec = spec(&[], &[], 1.0, 1.0);
    let cos_spec = spec(&[], &[], 2.0, 1.0);
    for i in 0..=10 {
        let u = -5.0 + i as f64;
        rec.compare(format!("E(1,1)({u}) = exp"), exp_spec.eval(u).map(|r| r.value), Ok(u.exp()), 0.0);
        rec.compare(
            format!("E(2,1)(-{u}^2) = cos"),
            cos_spec.eval(-u * u).map(|r| r.value),
            Ok(u.cos()),
            0.0,
        );
    }
    let geometric = spec(&[1.0, 1.0], &[1.0], 1.0, 1.0);
    for u in [-0.9, -0.3, 0.4, 0.8] {
        rec.compare(
            format!("(1,1;1) at {u} = 1/(1-u)"),
            geometric.eval(u).map(|r| r.value),
            Ok(1.0 / (1.0 - u)),
            0.0,
        );
    }
    // (−3)_r terminates after four terms
    let poly = spec(&[-3.0, 1.5], &[2.0], 1.2, 0.8);
    for u in [-4.0f64, 2.5] {
        let direct: Result<f64> = (0..4)
            .map(|r| Ok(poly.coefficient(r)? * u.powi(r as i32)))
            .collect::<Result<CompensatedSum>>()
            .map(|s| s.total());
        rec.compare(format!("terminating series at {u}"), poly.eval(u).map(|r| r.value), direct, 0.0);
    }
    let at_zero = spec(&[0.4, 3.0], &[1.7], 0.6, 2.2);
    rec.compare(
        "F(0) = 1/gamma(beta)",
        at_zero.eval_with(0.0, &opts).map(|r| r.value),
        Ok(reciprocal_gamma(2.2)),
        0.0,
    );
    let divergent = spec(&[1.0, 1.0, 1.0], &[1.0], 1.0, 1.0);
    rec.require(
        "divergent series rejected without asymptotic mode",
        Ok(matches!(divergent.eval(0.1), Err(HmlfError::DivergenceRejected { .. }))),
    );
    rec.checks
}

fn calculus(tol: f64) -> Vec<Check> {
    let mut rec = Recorder::new("calculus", tol);
    let opts = EvalOptions::default();
    for (n, s) in [
        (1, spec(&[1.5, 0.5], &[2.5], 1.2, 3.0)),
        (2, spec(&[0.7, 2.0], &[1.3], 1.5, 4.0)),
        (3, spec(&[1.1, 0.9], &[3.2], 1.1, 3.5)),
    ] {
        for u in [-1.5, 0.6] {
            rec.compare(
                format!("beta downshift n={n} at {u}"),
                beta_downshift(&s, n, u, &opts),
                s.with_alpha_beta(s.alpha(), s.beta() - f64::from(n) * s.alpha())
                    .and_then(|d| d.eval_with(u, &opts))
                    .map(|r| r.value),
                1e-12,
            );
        }
    }
    let s = spec(&[1.5, 0.7], &[2.5], 2.0, 1.3);
    for u in [-2.0, 0.5] {
        for (m, floor) in [(1, 1e-6), (2, 1e-4)] {
            let closed = derivative_closed_form(&s, m).and_then(|f| f.evaluate(u, &opts));
            rec.compare(
                format!("derivative m={m} at {u} vs finite differences"),
                closed,
                series_numerical_derivative(&s, u, m, &opts),
                floor,
            );
        }
        let twice = derivative_closed_form(&s, 1)
            .and_then(|f| derivative_step(&f))
            .and_then(|f| f.evaluate(u, &opts));
        rec.compare(
            format!("derivative step twice at {u} = m=2"),
            twice,
            derivative_closed_form(&s, 2).and_then(|f| f.evaluate(u, &opts)),
            1e-12,
        );
    }
    rec.checks
}

fn integrals(tol: f64) -> Vec<Check> {
    let mut rec = Recorder::new("integrals", tol);
    let opts = EvalOptions::default();
    let qt = quad_tol(tol);
    let s = spec(&[1.5, 0.7], &[2.5], 1.3, 1.1);
    for delta in [0.0, 1.0, 2.5] {
        let reference =
            integrate_finite(|t| t.powf(delta) * value_at(&s, t, &opts), 0.0, 0.5, qt).map(|q| q.value);
        rec.compare(
            format!("moment delta={delta} on [0, 0.5]"),
            moment_integral(&s, delta, 0.5, &opts).map(|r| r.value),
            reference,
            1e-12,
        );
    }
    for (upper, lower, alpha) in [
        (vec![1.5, 0.7], vec![2.5], 2.5),
        (vec![1.5], vec![2.5], 1.5),
        (vec![1.5], vec![2.5, 0.8], 1.0),
    ] {
        let s = spec(&upper, &lower, alpha, 1.3);
        let excess = s.p() as i32 - s.q() as i32;
        for delta in [0.5, 1.0, 4.0] {
            let reference =
                integrate_gaussian(|u| value_at(&s, u, &opts), delta, qt).map(|q| q.value);
            rec.compare(
                format!("gaussian p-q={excess} delta={delta}"),
                gaussian_integral(&s, delta, &opts).map(|r| r.value),
                reference,
                1e-12,
            );
            let argument = gaussian_closed_form(&s, delta).map(|f| f.argument);
            rec.compare(
                format!("gaussian argument p-q={excess} delta={delta}"),
                argument,
                Ok(4f64.powi(excess) / delta),
                0.0,
            );
        }
    }
    for beta in [1.0, 2.0] {
        let s = spec(&[1.0, 1.0], &[2.0], 3.0, beta);
        let f = |u: f64| value_at(&s, -u, &opts);
        rec.compare(
            format!("sine integral alpha=3 beta={beta}"),
            sine_integral_rhs(&s, &opts).map(|r| r.value),
            integrate_oscillatory_halfline(f, Kernel::Sin, qt).map(|q| q.value),
            1e-10,
        );
        rec.compare(
            format!("cosine integral alpha=3 beta={beta}"),
            cosine_integral_rhs(&s, &opts).map(|r| r.value),
            integrate_oscillatory_halfline(f, Kernel::Cos, qt).map(|q| q.value),
            1e-10,
        );
    }
    for delta in [0.5, 1.0, 4.0] {
        let continued = |u: f64| {
            if u >= 0.0 {
                u.sqrt().cos()
            } else {
                (-u).sqrt().cosh()
            }
        };
        rec.compare(
            format!("cos sqrt gaussian delta={delta}"),
            cos_sqrt_gaussian(delta),
            integrate_gaussian(continued, delta, qt).map(|q| q.value),
            1e-12,
        );
    }
    rec.checks
}

fn transforms(tol: f64) -> Vec<Check> {
    let mut rec = Recorder::new("transforms", tol);
    let opts = EvalOptions::default();
    let qt = quad_tol(tol);
    for beta in [1.0, 2.5] {
        let s = spec(&[1.0, 1.5], &[2.0], 3.0, beta);
        for sv in [1.0, 2.0, 5.0] {
            rec.compare(
                format!("laplace alpha=3 beta={beta} s={sv}"),
                laplace_transform(&s, sv, &opts).map(|r| r.value),
                integrate_exp_halfline(|t| value_at(&s, -t, &opts), sv, qt).map(|q| q.value),
                1e-12,
            );
        }
        for u in [0.25, 0.5] {
            rec.compare(
                format!("sumudu alpha=3 beta={beta} u={u}"),
                sumudu_transform(&s, u, &opts).map(|r| r.value),
                integrate_exp_halfline(|t| value_at(&s, -u * t, &opts), 1.0, qt).map(|q| q.value),
                1e-12,
            );
            rec.compare(
                format!("sumudu(u) = laplace(1/u)/u, beta={beta} u={u}"),
                sumudu_transform(&s, u, &opts).map(|r| r.value),
                laplace_transform(&s, 1.0 / u, &opts).map(|r| r.value / u),
                1e-14,
            );
        }
    }
    rec.checks
}

fn reductions(tol: f64) -> Vec<Check> {
    let mut rec = Recorder::new("reductions", tol);
    rec.compare("2F1(1,1;2;1/2) = 2 ln 2", classical_2f1(1.0, 1.0, 2.0, 0.5), Ok(2.0 * LN_2), 0.0);
    rec.compare("2F1(2,b;b;1/4) = 16/9", classical_2f1(2.0, 0.7, 0.7, 0.25), Ok(16.0 / 9.0), 0.0);
    for u in [-10.0, -2.5, 0.5, 3.0, 10.0] {
        rec.compare(format!("sin({u})"), sin_via_hmlf(u), Ok(u.sin()), 0.0);
        rec.compare(format!("cos({u})"), cos_via_hmlf(u), Ok(u.cos()), 0.0);
    }
    for u in [-1.0, 0.5, 2.0] {
        rec.compare(
            format!("prabhakar(1) = mittag-leffler at {u}"),
            prabhakar(1.0, 1.3, 0.9, u),
            mittag_leffler(1.3, 0.9, u),
            0.0,
        );
    }
    rec.compare("prabhakar(2,1,1,1/2) = (3/2) e^(1/2)", prabhakar(2.0, 1.0, 1.0, 0.5), Ok(1.5 * 0.5f64.exp()), 0.0);
    let tricomi_direct = |u: f64| -> Result<f64> {
        let mut sum = CompensatedSum::new();
        for r in 0..80usize {
            let term = (-u).powi(r as i32) * pochhammer(1.2, r)? * pochhammer(0.4, r)?
                / (gamma(r as f64 + 3.0)? * gamma(r as f64 + 1.0)? * pochhammer(2.0, r)?);
            sum.add(term);
        }
        Ok(sum.total())
    };
    for u in [-1.5, 0.7, 3.0] {
        rec.compare(format!("tricomi m=2 at {u}"), hyp_tricomi(1.2, 0.4, 2.0, 2, u), tricomi_direct(u), 0.0);
    }
    rec.compare("bessel(1,1,1;0) at 1/2 = 1/sqrt(5/4)", hyp_bessel(1.0, 1.0, 1.0, 0, 0.5), Ok(1.25f64.sqrt().recip()), 0.0);
    rec.compare("fox-wright(1,1;1,1) at 1/2 = 2", fox_wright_2psi1(1.0, 1.0, 1.0, 1.0, 0.5), Ok(2.0), 0.0);
    rec.checks
}

fn zeros(tol: f64) -> Vec<Check> {
    let mut rec = Recorder::new("zeros", tol);
    let opts = EvalOptions::default();
    let cos_spec = spec(&[], &[], 2.0, 1.0);
    match find_real_zeros(&cos_spec, -70.0, -0.1, 200, 1e-12, &opts) {
        Ok(report) => {
            rec.require("three zeros of E(2,1) on [-70, -0.1]", Ok(report.zeros.len() == 3));
            for (k, z) in report.zeros.iter().rev().enumerate() {
                let expected: f64 = -((k as f64 + 0.5) * PI).powi(2);
                rec.compare(format!("zero {k} of E(2,1)"), Ok(z.location), Ok(expected), 1e-10);
            }
        }
        Err(e) => rec.require("three zeros of E(2,1) on [-70, -0.1]", Err(e)),
    }
    let figure = spec(&[1.5, 2.0], &[1.5], 1.0, 3.0);
    let verified = find_real_zeros(&figure, -40.0, -0.1, 400, 1e-12, &opts).and_then(|report| {
        for z in &report.zeros {
            let lo = figure.eval_with(z.bracket.0, &opts)?.value;
            let hi = figure.eval_with(z.bracket.1, &opts)?.value;
            let at = figure.eval_with(z.location, &opts)?.value;
            if !(lo.signum() != hi.signum() || lo == 0.0) || at.abs() >= 1e-10 {
                return Ok(false);
            }
        }
        Ok(true)
    });
    rec.require("(1.5,2;1.5) alpha=1 beta=3 zeros self-verify", verified);
    let positive = spec(&[1.5, 2.0], &[3.0], 2.0, 1.0);
    rec.require(
        "positive series has no zeros on [0.1, 5]",
        find_real_zeros(&positive, 0.1, 5.0, 64, 1e-12, &opts).map(|r| r.zeros.is_empty()),
    );
    let geometric = spec(&[1.0, 1.0], &[1.0], 1.0, 1.0);
    rec.require(
        "1/(1-u) has no zeros on [-0.9, 0.9]",
        find_real_zeros(&geometric, -0.9, 0.9, 64, 1e-12, &opts).map(|r| r.zeros.is_empty()),
    );
    rec.checks
}
