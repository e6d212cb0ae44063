//! Evaluation of `v(l')` and `dv/dl'`.
//!
//! Four routes are provided:
//!
//! | method        | formula                                                         |
//! |---------------|-----------------------------------------------------------------|
//! | `ClosedForm`  | `(1 + √l')^(1/2) [E(m) - √l' K(m)]`, `m = (1 - √l')/(1 + √l')`  |
//! | `Series`      | truncated Frobenius expansion with an `l' ln l'` part           |
//! | `Factored`    | `(1 - l') P(l') + l' ln l' Q(l')`, exact at both endpoints      |
//! | `ThreeTerm`   | `1 - l' + (1/6) l' ln l'`                                       |
//!
//! The factored form is the one to use near `l' = 1`. Series coefficients are
//! converted from their exact values once per order and cached.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::coeffcore::{v_series_coefficients, LogTwoNumber, VSeries};
use crate::elliptic::{ellip_ke_complementary, ComplementaryL};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Series,
    Factored,
    ThreeTerm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Series => "series",
            Method::Factored => "factored",
            Method::ThreeTerm => "three_term",
        }
    }

    pub fn uses_order(self) -> bool {
        matches!(self, Method::Series | Method::Factored)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_form" | "closed" => Ok(Method::ClosedForm),
            "series" => Ok(Method::Series),
            "factored" => Ok(Method::Factored),
            "three_term" | "three-term" => Ok(Method::ThreeTerm),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VEvaluation {
    pub lp: f64,
    pub value: f64,
    pub method: Method,
    pub order: Option<usize>,
}

fn check_lp(lp: f64) -> Result<f64> {
    ComplementaryL::new(lp).map(ComplementaryL::get)
}

fn check_order(order: usize) -> Result<usize> {
    if order == 0 {
        Err(Error::InvalidArgument(
            "series order must be at least 1".into(),
        ))
    } else {
        Ok(order)
    }
}

/// `l' ln l'`, with its limit 0 at `l' = 0` and the exact 0 at `l' = 1`.
fn xlogx(lp: f64) -> f64 {
    if lp == 0.0 || lp == 1.0 {
        0.0
    } else {
        lp * lp.ln()
    }
}

/// Horner evaluation of `Σ c[k] x^k`.
fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Horner evaluation of `Σ k c[k] x^(k-1)`.
fn horner_derivative(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c)
}

// Closed form

pub fn v_closed(lp: f64) -> Result<f64> {
    let lp = ComplementaryL::new(lp)?;
    if lp.get() == 0.0 {
        return Ok(1.0);
    }
    if lp.get() == 1.0 {
        return Ok(0.0);
    }
    let s = lp.get().sqrt();
    let (k, e) = ellip_ke_complementary(lp.complementary_m())?;
    let v = (1.0 + s).sqrt() * (e - s * k);
    // rounding can push the last few ulps below 0 just short of l' = 1
    Ok(v.clamp(0.0, 1.0))
}

/// `dv/dl' = -3 K(m(l')) / (4 (1 + √l')^(1/2))`; diverges logarithmically at 0.
pub fn dv_closed(lp: f64) -> Result<f64> {
    let lp = ComplementaryL::new(lp)?;
    if lp.get() == 0.0 {
        return Err(Error::Divergent {
            what: "dv/dlp",
            name: "lp",
            value: 0.0,
        });
    }
    let s = lp.get().sqrt();
    let (k, _) = ellip_ke_complementary(lp.complementary_m())?;
    Ok(-0.75 * k / (1.0 + s).sqrt())
}

// Series

/// Binary64 copy of a [`VSeries`].
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    pub order: usize,
    /// Coefficients of `l'^i`, `i = 0..=order`.
    pub regular: Vec<f64>,
    /// Coefficients of `l' ln l' · l'^k`, `k = 0..order`.
    pub log: Vec<f64>,
}

impl SeriesCoefficients {
    pub fn from_exact(series: &VSeries) -> Self {
        Self {
            order: series.order,
            regular: series.regular.iter().map(LogTwoNumber::to_f64).collect(),
            log: series
                .log_coefficients()
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }

    pub fn eval(&self, lp: f64) -> f64 {
        horner(&self.regular, lp) + xlogx(lp) * horner(&self.log, lp)
    }

    /// Term-by-term derivative; `lp` must be positive.
    pub fn eval_derivative(&self, lp: f64) -> f64 {
        let log_sum = horner(&self.log, lp);
        let log_slope = horner_derivative(&self.log, lp);
        horner_derivative(&self.regular, lp) + (lp.ln() + 1.0) * log_sum + xlogx(lp) * log_slope
    }
}

/// Coefficients of `v = (1 - l') P(l') + l' ln l' Q(l')`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredSeries {
    pub order: usize,
    /// `p[k]` multiplies `(1 - l') l'^k`, `k = 0..=order`; running sums of the
    /// regular series coefficients.
    pub p: Vec<f64>,
    /// `q[k]` multiplies `l' ln l' · l'^k`, `k = 0..order`.
    pub q: Vec<f64>,
}

impl FactoredSeries {
    pub fn from_exact(series: &VSeries) -> Self {
        let mut running = LogTwoNumber::zero();
        let p = series
            .regular
            .iter()
            .map(|r| {
                running = &running + r;
                running.to_f64()
            })
            .collect();
        let q = series
            .log_coefficients()
            .iter()
            .map(|c: &BigRational| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        Self {
            order: series.order,
            p,
            q,
        }
    }

    pub fn eval(&self, lp: f64) -> f64 {
        (1.0 - lp) * horner(&self.p, lp) + xlogx(lp) * horner(&self.q, lp)
    }
}

struct CachedOrder {
    series: SeriesCoefficients,
    factored: FactoredSeries,
}

fn cached(order: usize) -> Result<Arc<CachedOrder>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CachedOrder>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache
        .lock()
        .expect("coefficient cache poisoned")
        .get(&order)
    {
        return Ok(Arc::clone(hit));
    }
    let exact = v_series_coefficients(order)?;
    let entry = Arc::new(CachedOrder {
        series: SeriesCoefficients::from_exact(&exact),
        factored: FactoredSeries::from_exact(&exact),
    });
    let mut guard = cache.lock().expect("coefficient cache poisoned");
    Ok(Arc::clone(guard.entry(order).or_insert(entry)))
}

/// The binary64 series coefficients for `order`, shared across calls.
pub fn series_coeffs(order: usize) -> Result<SeriesCoefficients> {
    Ok(cached(check_order(order)?)?.series.clone())
}

pub fn factored_coeffs(order: usize) -> Result<FactoredSeries> {
    Ok(cached(check_order(order)?)?.factored.clone())
}

pub fn v_series_eval(lp: f64, order: usize) -> Result<f64> {
    let lp = check_lp(lp)?;
    Ok(cached(check_order(order)?)?.series.eval(lp))
}

pub fn dv_series_eval(lp: f64, order: usize) -> Result<f64> {
    let lp = check_lp(lp)?;
    if lp == 0.0 {
        return Err(Error::Divergent {
            what: "dv/dlp",
            name: "lp",
            value: 0.0,
        });
    }
    Ok(cached(check_order(order)?)?.series.eval_derivative(lp))
}

pub fn v_factored_eval(lp: f64, order: usize) -> Result<f64> {
    let lp = check_lp(lp)?;
    Ok(cached(check_order(order)?)?.factored.eval(lp))
}

pub fn v_three_term(lp: f64) -> Result<f64> {
    let lp = check_lp(lp)?;
    Ok(1.0 - lp + xlogx(lp) / 6.0)
}

/// `d/dl'` of the three-term formula: `-5/6 + (1/6) ln l'`.
pub fn dv_three_term(lp: f64) -> Result<f64> {
    let lp = check_lp(lp)?;
    if lp == 0.0 {
        return Err(Error::Divergent {
            what: "dv/dlp",
            name: "lp",
            value: 0.0,
        });
    }
    Ok(-5.0 / 6.0 + lp.ln() / 6.0)
}

/// `v(l')` by `method`; `order` is used by the series-based methods only.
pub fn evaluate(lp: f64, method: Method, order: usize) -> Result<VEvaluation> {
    let value = match method {
        Method::ClosedForm => v_closed(lp)?,
        Method::Series => v_series_eval(lp, order)?,
        Method::Factored => v_factored_eval(lp, order)?,
        Method::ThreeTerm => v_three_term(lp)?,
    };
    Ok(VEvaluation {
        lp,
        value,
        method,
        order: method.uses_order().then_some(order),
    })
}

/// `dv/dl'` by `method`. The factored form shares the series derivative.
pub fn evaluate_derivative(lp: f64, method: Method, order: usize) -> Result<f64> {
    match method {
        Method::ClosedForm => dv_closed(lp),
        Method::Series | Method::Factored => dv_series_eval(lp, order),
        Method::ThreeTerm => dv_three_term(lp),
    }
}
