use fe_vfunc::cli::{run_checks, Suite, LIMIT_SEQUENCE};
use fe_vfunc::verify::{
    cayley_leading_remainder, check_cayley, check_limit_dv, dv_limit, error_scan,
    limit_dv_leading_remainder, ode_residual_lp, ode_residual_y, residual_report, Variable,
    DEFAULT_STEP,
};
use fe_vfunc::vfunction::{v_closed, v_factored_eval, v_three_term};

#[test]
fn closed_form_satisfies_both_ode_forms() {
    let lp_points: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let rep = residual_report(&v_closed, &lp_points, DEFAULT_STEP, Variable::Lp).unwrap();
    assert!(rep.max_abs() <= 1e-6, "{:?}", rep.residuals);
    let rep = residual_report(&v_closed, &[0.3, 0.6, 0.9], DEFAULT_STEP, Variable::Y).unwrap();
    assert!(rep.max_abs() <= 1e-6, "{:?}", rep.residuals);
}

#[test]
fn approximations_fail_the_ode() {
    let r = ode_residual_lp(&v_three_term, 0.5, 1e-3).unwrap();
    assert!(r.abs() > 1e-4);
    let r = ode_residual_y(&v_three_term, 0.7, 1e-3).unwrap();
    assert!(r.abs() > 1e-5);
}

#[test]
fn residual_decays_quadratically_in_step() {
    for lp in [0.2, 0.5, 0.8] {
        let r1 = ode_residual_lp(&v_closed, lp, 1e-2).unwrap();
        let r2 = ode_residual_lp(&v_closed, lp, 5e-3).unwrap();
        let ratio = r2 / r1;
        assert!((0.2..0.3).contains(&ratio), "lp = {lp}: {ratio}");
    }
}

#[test]
fn limit_dv_follows_leading_remainder() {
    let dev: Vec<f64> = check_limit_dv(&LIMIT_SEQUENCE)
        .unwrap()
        .into_iter()
        .map(|g| g - dv_limit())
        .collect();
    assert!(dev[3].abs() <= 1e-4);
    for (&lp, d) in LIMIT_SEQUENCE.iter().zip(&dev) {
        let pred = limit_dv_leading_remainder(lp);
        assert!(
            (d - pred).abs() <= 0.05 * pred.abs(),
            "lp = {lp}: {d:e} vs {pred:e}"
        );
    }
}

#[test]
fn limit_dv_deviation_monotone_below_threshold() {
    let seq: Vec<f64> = (3..=12).map(|k| 10f64.powi(-k)).collect();
    let dev: Vec<f64> = check_limit_dv(&seq)
        .unwrap()
        .iter()
        .map(|g| (g - dv_limit()).abs())
        .collect();
    assert!(dev.windows(2).all(|w| w[1] < w[0]), "{dev:?}");
}

#[test]
fn cayley_follows_leading_remainder() {
    let seq = [1e-2, 1e-3, 1e-4, 1e-6, 1e-8];
    let dev = check_cayley(&seq).unwrap();
    assert!(dev[4].abs() < 1e-3);
    assert!(dev.windows(2).all(|w| w[1].abs() < w[0].abs()));
    // relative gap to the leading term shrinks with l' (measured 5.5% at 1e-2)
    let gap: Vec<f64> = seq
        .iter()
        .zip(&dev)
        .map(|(&lp, d)| (d / cayley_leading_remainder(lp) - 1.0).abs())
        .collect();
    assert!(gap.windows(2).all(|w| w[1] < w[0]), "{gap:?}");
    assert!(gap[2..].iter().all(|&g| g < 0.01), "{gap:?}");
    let ratio = dev[2] / dev[3];
    let pred = cayley_leading_remainder(1e-4) / cayley_leading_remainder(1e-6);
    assert!((ratio / pred - 1.0).abs() < 0.01);
}

#[test]
fn sequences_validated() {
    assert!(check_limit_dv(&[1e-4, 1e-3]).is_err());
    assert!(check_limit_dv(&[0.0]).is_err());
    assert!(check_cayley(&[1.0]).is_err());
}

#[test]
fn scan_is_grid_stable_and_deterministic() {
    let formula = |lp: f64| v_factored_eval(lp, 3);
    let a = error_scan("factored3", &formula, &v_closed, 20_001, false).unwrap();
    let b = error_scan("factored3", &formula, &v_closed, 40_001, false).unwrap();
    assert!((a.max_abs_err - b.max_abs_err).abs() < 0.01 * a.max_abs_err);
    let again = error_scan("factored3", &formula, &v_closed, 20_001, false).unwrap();
    assert_eq!(a, again);
    assert!(a.max_abs_err < 2e-4);
}

#[test]
fn scan_records_and_argmax() {
    let rep = error_scan("three_term", &v_three_term, &v_closed, 1001, true).unwrap();
    let recs = rep.records.as_ref().unwrap();
    assert_eq!(recs.len(), 1001);
    let best = recs.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    assert_eq!(best, rep.max_abs_err);
    let first = recs.iter().find(|r| r.abs_err == best).unwrap();
    assert_eq!(first.lp, rep.argmax_lp);
    assert!((0.15..0.2).contains(&rep.argmax_lp));
}

#[test]
fn scan_propagates_evaluator_failure() {
    let bad = |lp: f64| {
        if lp > 0.5 {
            v_closed(2.0)
        } else {
            v_closed(lp)
        }
    };
    assert!(error_scan("bad", &bad, &v_closed, 11, false).is_err());
    assert!(error_scan("tiny", &v_closed, &v_closed, 1, false).is_err());
}

#[test]
fn every_suite_passes() {
    for suite in [Suite::Ode, Suite::Limits, Suite::Cayley] {
        let checks = run_checks(suite).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(
                c.pass,
                "{} failed: {} {} {}",
                c.name, c.measured, c.relation, c.threshold
            );
        }
    }
}
