//! Command implementations behind the `fe-vfunc` binary. Each command returns
//! an [`OutputRecord`]; argument parsing and process exit codes live in the
//! binary itself.

use std::path::PathBuf;

use serde_json::json;

use crate::coeffcore::{
    rational_to_decimal, v_index, v_series_coefficients, FrobeniusTables, LogTwoNumber,
};
use crate::emission::{current_density, EmissionConstants, EmissionInput};
use crate::output::{format_sig, Cell, OutputRecord};
use crate::verify::{
    check_cayley, check_limit_dv, dv_limit, error_scan, ode_residual_lp, ode_residual_y,
    DEFAULT_SCAN_GRID, DEFAULT_STEP,
};
use crate::vfunction::{
    evaluate, evaluate_derivative, v_closed, v_factored_eval, v_series_eval, v_three_term, Method,
};
use crate::{Error, Result};

pub const DIVERGENT: &str = "divergent (-inf)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffMode {
    Exact,
    /// Fixed number of decimal places.
    Decimal(u32),
}

pub fn cmd_coeffs(order: usize, mode: CoeffMode) -> Result<OutputRecord> {
    if order == 0 {
        return Err(Error::InvalidArgument("--order must be at least 1".into()));
    }
    if mode == CoeffMode::Decimal(0) {
        return Err(Error::InvalidArgument(
            "--decimals must be at least 1".into(),
        ));
    }
    let tables = FrobeniusTables::new(v_index(), order)?;
    let series = v_series_coefficients(order)?;

    let mut rec = OutputRecord::new(
        "coeffs",
        &["i", "a_i", "b_i", "regular_i", "logpart_i", "p_i"],
    );
    rec.meta("order", order);
    rec.meta("n", v_index().to_string());
    match mode {
        CoeffMode::Exact => rec.meta("format", "exact"),
        CoeffMode::Decimal(d) => rec.meta("format", format!("decimal({d})")),
    }

    let mut running = LogTwoNumber::zero();
    for i in 0..=order {
        running = &running + &series.regular[i];
        let cells = match mode {
            CoeffMode::Exact => [
                Cell::Text(tables.a[i].to_string()),
                Cell::Text(tables.b[i].to_string()),
                Cell::Text(series.regular[i].to_string()),
                if i == 0 {
                    Cell::Empty
                } else {
                    Cell::Text(series.logpart[i].to_string())
                },
                Cell::Text(running.to_string()),
            ],
            CoeffMode::Decimal(d) => [
                Cell::Fixed(rational_to_decimal(&tables.a[i], d)),
                Cell::Fixed(rational_to_decimal(&tables.b[i], d)),
                Cell::Fixed(series.regular[i].to_decimal(d)),
                if i == 0 {
                    Cell::Empty
                } else {
                    Cell::Fixed(rational_to_decimal(&series.logpart[i], d))
                },
                Cell::Fixed(running.to_decimal(d)),
            ],
        };
        let mut row = vec![Cell::Int(i as i64)];
        row.extend(cells);
        rec.push_row(row);
    }
    Ok(rec)
}

/// `(lp, v, dv)` for one point; `divergent` is what the `dv` cell holds at `lp = 0`.
fn eval_row(lp: f64, method: Method, order: usize, divergent: Cell) -> Result<Vec<Cell>> {
    let v = evaluate(lp, method, order)?;
    let dv = match evaluate_derivative(lp, method, order) {
        Ok(d) => Cell::Num(d),
        Err(Error::Divergent { .. }) => divergent,
        Err(e) => return Err(e),
    };
    Ok(vec![Cell::Num(lp), Cell::Num(v.value), dv])
}

fn method_meta(rec: &mut OutputRecord, method: Method, order: usize) {
    rec.meta("method", method.as_str());
    if method.uses_order() {
        rec.meta("order", order);
    }
}

pub fn cmd_eval(lp: f64, method: Method, order: usize) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("eval", &["lp", "v", "dv"]);
    method_meta(&mut rec, method, order);
    rec.push_row(eval_row(lp, method, order, Cell::Text(DIVERGENT.into()))?);
    Ok(rec)
}

pub fn cmd_table(
    lp_min: f64,
    lp_max: f64,
    steps: usize,
    method: Method,
    order: usize,
) -> Result<OutputRecord> {
    if !(0.0 <= lp_min && lp_min < lp_max && lp_max <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= lp-min < lp-max <= 1, got [{lp_min}, {lp_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "--grid must be at least 2, got {steps}"
        )));
    }
    let mut rec = OutputRecord::new("table", &["lp", "v", "dv"]);
    method_meta(&mut rec, method, order);
    rec.meta(
        "grid",
        json!({ "lp_min": lp_min, "lp_max": lp_max, "points": steps }),
    );
    let last = (steps - 1) as f64;
    for i in 0..steps {
        let lp = if i == steps - 1 {
            lp_max
        } else {
            lp_min + (lp_max - lp_min) * (i as f64 / last)
        };
        rec.push_row(eval_row(lp, method, order, Cell::Empty)?);
    }
    Ok(rec)
}

pub fn cmd_scan(method: Method, order: usize, grid: usize, records: bool) -> Result<OutputRecord> {
    let formula = |lp: f64| evaluate(lp, method, order).map(|e| e.value);
    let id = if method.uses_order() {
        format!("{}({order})", method.as_str())
    } else {
        method.as_str().to_string()
    };
    let report = error_scan(&id, &formula, &v_closed, grid, records)?;
    let mut rec;
    if let Some(points) = &report.records {
        rec = OutputRecord::new("scan", &["lp", "value", "reference", "abs_err"]);
        for p in points {
            rec.push_row(vec![
                Cell::Num(p.lp),
                Cell::Num(p.value),
                Cell::Num(p.reference),
                Cell::Num(p.abs_err),
            ]);
        }
    } else {
        rec = OutputRecord::new(
            "scan",
            &[
                "formula",
                "grid_size",
                "max_abs_err",
                "argmax_lp",
                "mean_abs_err",
            ],
        );
        rec.push_row(vec![
            Cell::Text(report.formula_id.clone()),
            Cell::Int(report.grid_size as i64),
            Cell::Num(report.max_abs_err),
            Cell::Num(report.argmax_lp),
            Cell::Num(report.mean_abs_err),
        ]);
    }
    method_meta(&mut rec, method, order);
    rec.meta("oracle", "closed_form");
    rec.meta("grid", grid);
    rec.meta("max_abs_err", format_sig(report.max_abs_err, 15));
    rec.meta("argmax_lp", format_sig(report.argmax_lp, 15));
    Ok(rec)
}

// Verification suites

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ode,
    Limits,
    Cayley,
    Scan,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ode" => Ok(Suite::Ode),
            "limits" => Ok(Suite::Limits),
            "cayley" => Ok(Suite::Cayley),
            "scan" => Ok(Suite::Scan),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!("unknown suite '{other}'"))),
        }
    }
}

/// One verification check: `measured <relation> threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub relation: String,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn below(suite: &'static str, name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            measured,
            relation: "<=".into(),
            threshold,
            pass: measured <= threshold,
        }
    }

    fn strictly_below(
        suite: &'static str,
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
    ) -> Self {
        Self {
            relation: "<".into(),
            pass: measured < threshold,
            ..Self::below(suite, name, measured, threshold)
        }
    }

    fn equals(suite: &'static str, name: impl Into<String>, measured: f64, expected: f64) -> Self {
        Self {
            relation: "==".into(),
            pass: measured == expected,
            ..Self::below(suite, name, measured, expected)
        }
    }

    fn within(
        suite: &'static str,
        name: impl Into<String>,
        measured: f64,
        (lo, hi): (f64, f64),
    ) -> Self {
        Self {
            relation: format!("in [{lo}, {hi}]"),
            pass: lo <= measured && measured <= hi,
            ..Self::below(suite, name, measured, hi)
        }
    }

    /// `flag` recorded as 1 (true) against a threshold of 1.
    fn holds(suite: &'static str, name: impl Into<String>, flag: bool) -> Self {
        let measured = if flag { 1.0 } else { 0.0 };
        Self::equals(suite, name, measured, 1.0)
    }
}

/// Lp points of the residual checks.
pub const ODE_LP_POINTS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
/// Y points of the residual checks.
pub const ODE_Y_POINTS: [f64; 3] = [0.3, 0.6, 0.9];
/// Residual bound in `l'` at `h = 1e-4`.
pub const ODE_LP_TOL: f64 = 1e-6;
/// Residual bound in `y` at `h = 1e-4`.
pub const ODE_Y_TOL: f64 = 1e-6;
/// Accepted range of `r(h/2) / r(h)` for O(h²) decay (ideal 0.25).
pub const RICHARDSON_RATIO_RANGE: (f64, f64) = (0.2, 0.3);
/// `l'` sequence approaching 0 for the limit checks.
pub const LIMIT_SEQUENCE: [f64; 4] = [1e-4, 1e-6, 1e-8, 1e-10];
pub const THREE_TERM_BOUND: f64 = 0.0025;

/// `r(h/2) / r(h)`; 0.25 when the residual is truncation-dominated O(h²).
pub fn richardson_ratio<F>(residual: F, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(residual(h / 2.0)? / residual(h)?)
}

fn ode_checks() -> Result<Vec<Check>> {
    const S: &str = "ode";
    let mut out = Vec::new();
    let h = DEFAULT_STEP;
    for &lp in &ODE_LP_POINTS {
        let r = ode_residual_lp(&v_closed, lp, h)?;
        out.push(Check::below(
            S,
            format!("lp_residual(lp={lp})"),
            r.abs(),
            ODE_LP_TOL,
        ));
    }
    for &lp in &ODE_LP_POINTS {
        let ratio = richardson_ratio(|hh| ode_residual_lp(&v_closed, lp, hh), RICHARDSON_STEP)?;
        out.push(Check::within(
            S,
            format!("lp_richardson_ratio(lp={lp})"),
            ratio,
            RICHARDSON_RATIO_RANGE,
        ));
    }
    for &y in &ODE_Y_POINTS {
        let r = ode_residual_y(&v_closed, y, h)?;
        out.push(Check::below(
            S,
            format!("y_residual(y={y})"),
            r.abs(),
            ODE_Y_TOL,
        ));
    }
    for &y in &ODE_Y_POINTS {
        let ratio = richardson_ratio(|hh| ode_residual_y(&v_closed, y, hh), RICHARDSON_STEP)?;
        out.push(Check::within(
            S,
            format!("y_richardson_ratio(y={y})"),
            ratio,
            RICHARDSON_RATIO_RANGE,
        ));
    }
    for &lp in &[0.1, 0.3, 0.5] {
        let series = ode_residual_lp(&|x| v_series_eval(x, 40), lp, h)?;
        let closed = ode_residual_lp(&v_closed, lp, h)?;
        out.push(Check::below(
            S,
            format!("series_vs_closed_residual(lp={lp})"),
            (series - closed).abs(),
            ODE_LP_TOL,
        ));
    }
    Ok(out)
}

/// Step at which the Richardson halving is run. At `h = 1e-4` the residual
/// is rounding noise (~1e-8) over a ~1e-10 truncation term, so the O(h²)
/// decay only shows at a coarser step.
pub const RICHARDSON_STEP: f64 = 1e-2;

fn limit_checks() -> Result<Vec<Check>> {
    const S: &str = "limits";
    let mut out = vec![
        Check::equals(S, "v_closed(0)", v_closed(0.0)?, 1.0),
        Check::equals(S, "v_closed(1)", v_closed(1.0)?, 0.0),
        Check::equals(S, "v_series(0, N=40)", v_series_eval(0.0, 40)?, 1.0),
    ];
    for n in [1usize, 2, 5, 40] {
        out.push(Check::equals(
            S,
            format!("v_factored(0, N={n})"),
            v_factored_eval(0.0, n)?,
            1.0,
        ));
        out.push(Check::equals(
            S,
            format!("v_factored(1, N={n})"),
            v_factored_eval(1.0, n)?,
            0.0,
        ));
    }
    let dev = check_limit_dv(&LIMIT_SEQUENCE)?;
    let target = dv_limit();
    let last = *dev.last().expect("nonempty sequence");
    out.push(Check::below(
        S,
        "|dv - (3/16) ln lp + (9/8) ln 2| at lp=1e-10",
        (last - target).abs(),
        1e-4,
    ));
    let gaps: Vec<f64> = dev.iter().map(|d| (d - target).abs()).collect();
    out.push(Check::holds(
        S,
        "dv limit deviation decreasing along lp=1e-4..1e-10",
        gaps.windows(2).all(|w| w[1] < w[0]),
    ));
    Ok(out)
}

fn cayley_checks() -> Result<Vec<Check>> {
    const S: &str = "cayley";
    let dev = check_cayley(&LIMIT_SEQUENCE)?;
    let at_1e8 = check_cayley(&[1e-8])?[0];
    let abs: Vec<f64> = dev.iter().map(|d| d.abs()).collect();
    Ok(vec![
        Check::strictly_below(S, "|K - cayley| at lp=1e-8", at_1e8.abs(), 1e-3),
        Check::holds(
            S,
            "|K - cayley| decreasing along lp=1e-4..1e-10",
            abs.windows(2).all(|w| w[1] < w[0]),
        ),
    ])
}

fn scan_checks() -> Result<Vec<Check>> {
    const S: &str = "scan";
    let three = error_scan(
        "three_term",
        &v_three_term,
        &v_closed,
        DEFAULT_SCAN_GRID,
        false,
    )?;
    let factored = error_scan(
        "factored(3)",
        &|lp| v_factored_eval(lp, 3),
        &v_closed,
        DEFAULT_SCAN_GRID,
        false,
    )?;
    Ok(vec![
        Check::strictly_below(
            S,
            "three_term max|err|",
            three.max_abs_err,
            THREE_TERM_BOUND,
        ),
        Check::strictly_below(
            S,
            "factored(3) max|err| below three_term",
            factored.max_abs_err,
            three.max_abs_err,
        ),
    ])
}

pub fn run_checks(suite: Suite) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Ode | Suite::All) {
        checks.extend(ode_checks()?);
    }
    if matches!(suite, Suite::Limits | Suite::All) {
        checks.extend(limit_checks()?);
    }
    if matches!(suite, Suite::Cayley | Suite::All) {
        checks.extend(cayley_checks()?);
    }
    if matches!(suite, Suite::Scan | Suite::All) {
        checks.extend(scan_checks()?);
    }
    Ok(checks)
}

/// Runs `suite`; the flag is true iff every check passed.
pub fn cmd_verify(suite: Suite) -> Result<(bool, OutputRecord)> {
    let checks = run_checks(suite)?;
    let mut rec = OutputRecord::new(
        "verify",
        &[
            "suite",
            "check",
            "measured",
            "relation",
            "threshold",
            "pass",
        ],
    );
    let all = checks.iter().all(|c| c.pass);
    for c in &checks {
        rec.push_row(vec![
            Cell::Text(c.suite.into()),
            Cell::Text(c.name.clone()),
            Cell::Num(c.measured),
            Cell::Text(c.relation.clone()),
            Cell::Num(c.threshold),
            Cell::Text(if c.pass { "pass" } else { "FAIL" }.into()),
        ]);
    }
    rec.meta("checks", checks.len());
    rec.meta("failed", checks.iter().filter(|c| !c.pass).count());
    rec.meta("step", DEFAULT_STEP);
    rec.meta("scan_grid", DEFAULT_SCAN_GRID);
    Ok((all, rec))
}

// Emission

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurrentArgs {
    pub phi: f64,
    pub field: f64,
    pub f: f64,
    pub lambda: Option<f64>,
    pub a_const: Option<f64>,
    pub b_const: Option<f64>,
    pub config: Option<PathBuf>,
}

fn pick(flag: Option<f64>, config: Option<f64>) -> Option<(f64, &'static str)> {
    flag.map(|v| (v, "flag")).or(config.map(|v| (v, "config")))
}

pub fn cmd_current(args: &CurrentArgs) -> Result<OutputRecord> {
    let config = match &args.config {
        Some(path) => EmissionConstants::load(path)?,
        None => EmissionConstants::default(),
    };
    let (a_const, a_src) = pick(args.a_const, config.a_const).ok_or_else(|| {
        Error::InvalidArgument(
            "First FN Constant missing: pass --a or set a_const in --config".into(),
        )
    })?;
    let (b_const, b_src) = pick(args.b_const, config.b_const).ok_or_else(|| {
        Error::InvalidArgument(
            "Second FN Constant missing: pass --b or set b_const in --config".into(),
        )
    })?;
    let (lambda, lambda_src) = pick(args.lambda, config.lambda).unwrap_or((1.0, "default"));

    let input = EmissionInput {
        phi: args.phi,
        field: args.field,
        lambda,
        a_const,
        b_const,
        f: args.f,
    };
    let result = current_density(&input)?;

    let mut rec = OutputRecord::new("current", &["phi", "F", "f", "lambda", "a", "b", "mu", "J"]);
    rec.push_row(vec![
        Cell::Num(input.phi),
        Cell::Num(input.field),
        Cell::Num(input.f),
        Cell::Num(lambda),
        Cell::Num(a_const),
        Cell::Num(b_const),
        Cell::Num(result.mu),
        Cell::Num(result.current_density),
    ]);
    rec.meta("a_source", a_src);
    rec.meta("b_source", b_src);
    rec.meta("lambda_source", lambda_src);
    if let Some(path) = &args.config {
        rec.meta("config", path.display().to_string());
    }
    rec.meta("method", "closed_form");
    Ok(rec)
}
