//! Numerical verification: finite-difference ODE residuals in `l'` and in the
//! Nordheim variable `y = √l'`, the small-`l'` limits of `K` and `dv/dl'`,
//! and grid error scans of approximation formulae against a reference.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::elliptic::{cayley_k, ellip_k_of_lp};
use crate::vfunction::dv_closed;
use crate::{Error, Result};

/// ODE index for `v`.
pub const V_INDEX: f64 = 3.0 / 16.0;

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Default number of grid points for error scans, endpoints included.
pub const DEFAULT_SCAN_GRID: usize = 100_001;

/// `lim_{l'→0} [dv/dl' - (3/16) ln l'] = -(9/8) ln 2`.
pub fn dv_limit() -> f64 {
    -9.0 / 8.0 * LN_2
}

/// Step actually used at `x`: `min(h, min(x, 1 - x) / 4)`.
pub fn effective_step(x: f64, h: f64) -> f64 {
    h.min(x.min(1.0 - x) / 4.0)
}

fn check_stencil(name: &'static str, x: f64, h: f64) -> Result<()> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {h}"
        )));
    }
    if !(x - h > 0.0 && x + h < 1.0) {
        return Err(Error::domain(name, x, "stencil inside (0, 1)"));
    }
    Ok(())
}

fn eval_at<F>(f: &F, lp: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    f(lp).map_err(|e| Error::EvaluationFailed {
        lp,
        source: Box::new(e),
    })
}

/// `l'(1 - l') W'' - (3/16) W` with a central second difference of step `h`.
pub fn ode_residual_lp<F>(evaluator: &F, lp: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    check_stencil("lp", lp, h)?;
    let lo = eval_at(evaluator, lp - h)?;
    let mid = eval_at(evaluator, lp)?;
    let hi = eval_at(evaluator, lp + h)?;
    let second = (hi - 2.0 * mid + lo) / (h * h);
    Ok(lp * (1.0 - lp) * second - V_INDEX * mid)
}

/// Residual of the same ODE written in `y = √l'`, with `W(y) = evaluator(y²)`:
/// `(1 - y²) W'' - ((1 - y²)/y) W' - (3/4) W`.
///
/// From `d/dl' = (1/2y) d/dy` and `d²/dl'² = (1/4y²)(d²/dy² - (1/y) d/dy)`.
pub fn ode_residual_y<F>(evaluator: &F, y: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    check_stencil("y", y, h)?;
    let w = |t: f64| eval_at(evaluator, t * t);
    let lo = w(y - h)?;
    let mid = w(y)?;
    let hi = w(y + h)?;
    let first = (hi - lo) / (2.0 * h);
    let second = (hi - 2.0 * mid + lo) / (h * h);
    let one_minus = 1.0 - y * y;
    Ok(one_minus * second - one_minus / y * first - 0.75 * mid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Lp,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub variable: Variable,
    /// Requested step; each point uses [`effective_step`] of it.
    pub step: f64,
    pub points: Vec<f64>,
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl ResidualReport {
    pub fn max_abs(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Residuals at each point, shrinking the step near the interval edges.
pub fn residual_report<F>(
    evaluator: &F,
    points: &[f64],
    h: f64,
    variable: Variable,
) -> Result<ResidualReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut steps = Vec::with_capacity(points.len());
    let mut residuals = Vec::with_capacity(points.len());
    for &x in points {
        let step = effective_step(x, h);
        let r = match variable {
            Variable::Lp => ode_residual_lp(evaluator, x, step)?,
            Variable::Y => ode_residual_y(evaluator, x, step)?,
        };
        steps.push(step);
        residuals.push(r);
    }
    Ok(ResidualReport {
        variable,
        step: h,
        points: points.to_vec(),
        steps,
        residuals,
    })
}

fn check_positive_decreasing(seq: &[f64]) -> Result<()> {
    for (i, &lp) in seq.iter().enumerate() {
        if !(lp > 0.0 && lp <= 1.0) {
            return Err(Error::domain("lp", lp, "(0, 1]"));
        }
        if i > 0 && lp >= seq[i - 1] {
            return Err(Error::InvalidArgument(format!(
                "lp sequence must be strictly decreasing, got {} then {lp}",
                seq[i - 1]
            )));
        }
    }
    Ok(())
}

/// `dv/dl' - (3/16) ln l'` along a sequence decreasing to 0; tends to [`dv_limit`].
pub fn check_limit_dv(lp_sequence: &[f64]) -> Result<Vec<f64>> {
    check_positive_decreasing(lp_sequence)?;
    lp_sequence
        .iter()
        .map(|&lp| Ok(dv_closed(lp)? - 3.0 / 16.0 * lp.ln()))
        .collect()
}

/// Leading remainder of [`check_limit_dv`] from the series expansion of `v`:
/// `(2 r₂ + q₂) l' + 2 q₂ l' ln l'` with `r₂ = 51/1024 - (27/256) ln 2` and
/// `q₂ = 9/512`. The `√l'` terms of `K` and of `(1 + √l')^(-1/2)` cancel.
pub fn limit_dv_leading_remainder(lp: f64) -> f64 {
    let r2 = 51.0 / 1024.0 - 27.0 / 256.0 * LN_2;
    let q2 = 9.0 / 512.0;
    (2.0 * r2 + q2) * lp + 2.0 * q2 * lp * lp.ln()
}

/// Leading behaviour of [`check_cayley`]: with `k'² = 1 - m = 2√l'/(1 + √l')`
/// and `L = ln(4/k')`, `K - cayley ≈ ½ ln(1 + √l') + (k'²/4)(L - 1)`.
pub fn cayley_leading_remainder(lp: f64) -> f64 {
    let s = lp.sqrt();
    let m1 = 2.0 * s / (1.0 + s);
    let big_l = (4.0 / m1.sqrt()).ln();
    0.5 * s.ln_1p() + 0.25 * m1 * (big_l - 1.0)
}

/// `K(m(l')) - [(3/2) ln 2 - (1/4) ln l']` for each `l'` in `(0, 1)`.
pub fn check_cayley(lp_sequence: &[f64]) -> Result<Vec<f64>> {
    lp_sequence
        .iter()
        .map(|&lp| {
            if !(lp > 0.0 && lp < 1.0) {
                return Err(Error::domain("lp", lp, "(0, 1)"));
            }
            Ok(ellip_k_of_lp(lp)? - cayley_k(lp)?)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub lp: f64,
    pub value: f64,
    pub reference: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub formula_id: String,
    pub grid_size: usize,
    pub max_abs_err: f64,
    /// Smallest `l'` attaining `max_abs_err`.
    pub argmax_lp: f64,
    pub mean_abs_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<Vec<ScanRecord>>,
}

/// `i / (grid_size - 1)` for `i = 0..grid_size`; the last point is exactly 1.
pub fn uniform_grid(grid_size: usize) -> Vec<f64> {
    let last = (grid_size - 1) as f64;
    (0..grid_size).map(|i| i as f64 / last).collect()
}

/// Absolute deviation of `formula` from `oracle` on a uniform grid over `[0, 1]`.
pub fn error_scan<F, G>(
    formula_id: &str,
    formula: &F,
    oracle: &G,
    grid_size: usize,
    keep_records: bool,
) -> Result<ScanReport>
where
    F: Fn(f64) -> Result<f64>,
    G: Fn(f64) -> Result<f64>,
{
    if grid_size < 2 {
        return Err(Error::InvalidArgument(format!(
            "scan grid needs at least 2 points, got {grid_size}"
        )));
    }
    let mut max_abs_err = 0.0f64;
    let mut argmax_lp = 0.0;
    let mut total = 0.0;
    let mut records = keep_records.then(|| Vec::with_capacity(grid_size));
    for lp in uniform_grid(grid_size) {
        let value = eval_at(formula, lp)?;
        let reference = eval_at(oracle, lp)?;
        let abs_err = (value - reference).abs();
        if abs_err > max_abs_err {
            max_abs_err = abs_err;
            argmax_lp = lp;
        }
        total += abs_err;
        if let Some(r) = records.as_mut() {
            r.push(ScanRecord {
                lp,
                value,
                reference,
                abs_err,
            });
        }
    }
    Ok(ScanReport {
        formula_id: formula_id.to_string(),
        grid_size,
        max_abs_err,
        argmax_lp,
        mean_abs_err: total / grid_size as f64,
        records,
    })
}
