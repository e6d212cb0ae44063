//! Direct substitution of truncated solutions into `l'(1 - l') W'' - n W`.
//!
//! Differentiation is done symbolically on `P(l') + ln(l') Q(l')` with exact
//! coefficients, so a zero residual is an independent confirmation of the
//! recurrences rather than a restatement of them.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::FrobeniusTables;
use crate::Result;

/// `Σ plain[k] l'^k + ln(l') Σ log[k] l'^k` over integer (possibly negative) powers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LogSeries {
    pub plain: BTreeMap<i64, BigRational>,
    pub log: BTreeMap<i64, BigRational>,
}

fn accumulate(map: &mut BTreeMap<i64, BigRational>, power: i64, value: BigRational) {
    if value.is_zero() {
        return;
    }
    let slot = map.entry(power).or_insert_with(BigRational::zero);
    *slot += value;
    if slot.is_zero() {
        map.remove(&power);
    }
}

fn power_factor(k: i64) -> BigRational {
    BigRational::from_integer(k.into())
}

impl LogSeries {
    /// `Σ coeffs[i] l'^(i + shift)`, optionally multiplied by `ln l'`.
    pub fn from_slice(coeffs: &[BigRational], shift: i64, with_log: bool) -> Self {
        let mut out = Self::default();
        let target = if with_log {
            &mut out.log
        } else {
            &mut out.plain
        };
        for (i, c) in coeffs.iter().enumerate() {
            accumulate(target, i as i64 + shift, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, v) in &other.plain {
            accumulate(&mut out.plain, k, v.clone());
        }
        for (&k, v) in &other.log {
            accumulate(&mut out.log, k, v.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::default();
        for (&k, v) in &self.plain {
            accumulate(&mut out.plain, k, v * s);
        }
        for (&k, v) in &self.log {
            accumulate(&mut out.log, k, v * s);
        }
        out
    }

    /// `d/dl'`, using `d(l'^k ln l') = k l'^(k-1) ln l' + l'^(k-1)`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::default();
        for (&k, v) in &self.plain {
            accumulate(&mut out.plain, k - 1, v * power_factor(k));
        }
        for (&k, v) in &self.log {
            accumulate(&mut out.log, k - 1, v * power_factor(k));
            accumulate(&mut out.plain, k - 1, v.clone());
        }
        out
    }

    /// Multiply by `l'(1 - l')`.
    pub fn times_l_one_minus_l(&self) -> Self {
        let mut out = Self::default();
        for (&k, v) in &self.plain {
            accumulate(&mut out.plain, k + 1, v.clone());
            accumulate(&mut out.plain, k + 2, -v.clone());
        }
        for (&k, v) in &self.log {
            accumulate(&mut out.log, k + 1, v.clone());
            accumulate(&mut out.log, k + 2, -v.clone());
        }
        out
    }

    /// `l'(1 - l') W'' - n W`.
    pub fn apply_ode(&self, n: &BigRational) -> Self {
        let curvature = self.derivative().derivative().times_l_one_minus_l();
        curvature.add(&self.scale(&-n.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.plain.is_empty() && self.log.is_empty()
    }

    /// Lowest power carrying a nonzero coefficient in either part.
    pub fn lowest_power(&self) -> Option<i64> {
        let p = self.plain.keys().next().copied();
        let l = self.log.keys().next().copied();
        match (p, l) {
            (Some(p), Some(l)) => Some(p.min(l)),
            (p, l) => p.or(l),
        }
    }

    fn dense(map: &BTreeMap<i64, BigRational>, len: usize) -> Vec<BigRational> {
        (0..len as i64)
            .map(|k| map.get(&k).cloned().unwrap_or_else(BigRational::zero))
            .collect()
    }
}

/// Residual of both truncated Frobenius solutions of order `order`, as
/// dense coefficient vectors indexed by power of `l'` from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionResidual {
    pub order: usize,
    /// Residual of `W_A = Σ_{i<=N} a_i l'^(i+1)`.
    pub w_a: Vec<BigRational>,
    /// Non-logarithmic part of the residual of `W_C = n [Σ b_i l'^i + l' ln l' Σ a_i l'^i]`.
    pub w_c_plain: Vec<BigRational>,
    /// Coefficients of `ln l'` in the residual of `W_C`.
    pub w_c_log: Vec<BigRational>,
    /// Set when a negative power survived; never expected.
    pub negative_powers: bool,
}

impl SubstitutionResidual {
    /// True when every coefficient of power `< below` vanishes.
    pub fn zero_below(&self, below: usize) -> bool {
        !self.negative_powers
            && [&self.w_a, &self.w_c_plain, &self.w_c_log]
                .iter()
                .all(|v| v.iter().take(below).all(Zero::is_zero))
    }

    /// Lowest power at which any of the three residual parts is nonzero.
    pub fn first_nonzero(&self) -> Option<usize> {
        [&self.w_a, &self.w_c_plain, &self.w_c_log]
            .iter()
            .filter_map(|v| v.iter().position(|c| !c.is_zero()))
            .min()
    }
}

/// Substitute the order-`order` truncations of `W_A` and `W_C` into the ODE.
///
/// Coefficients of power below `order` vanish exactly; the truncation
/// boundary shows up from power `order` on.
pub fn ode_substitution_residual(n: &BigRational, order: usize) -> Result<SubstitutionResidual> {
    let tables = FrobeniusTables::new(n.clone(), order)?;
    let w_a = LogSeries::from_slice(&tables.a, 1, false);
    let w_c = LogSeries::from_slice(&tables.b, 0, false)
        .add(&LogSeries::from_slice(&tables.a, 1, true))
        .scale(n);
    let res_a = w_a.apply_ode(n);
    let res_c = w_c.apply_ode(n);

    let negative_powers = [&res_a, &res_c]
        .iter()
        .any(|r| r.lowest_power().is_some_and(|p| p < 0));
    let len = order + 3;
    Ok(SubstitutionResidual {
        order,
        w_a: LogSeries::dense(&res_a.plain, len),
        w_c_plain: LogSeries::dense(&res_c.plain, len),
        w_c_log: LogSeries::dense(&res_c.log, len),
        negative_powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffcore::{rat, v_index};

    #[test]
    fn derivative_of_log_term() {
        // d/dl (l ln l) = ln l + 1
        let s = LogSeries::from_slice(&[rat(1, 1)], 1, true);
        let d = s.derivative();
        assert_eq!(d.log.get(&0), Some(&rat(1, 1)));
        assert_eq!(d.plain.get(&0), Some(&rat(1, 1)));
        // d²/dl² (l ln l) = 1/l
        let dd = d.derivative();
        assert!(dd.log.is_empty());
        assert_eq!(dd.plain.get(&-1), Some(&rat(1, 1)));
    }

    #[test]
    fn zero_below_order_for_v_index() {
        let r = ode_substitution_residual(&v_index(), 10).unwrap();
        assert!(r.zero_below(10));
        assert!(!r.negative_powers);
        assert_eq!(r.first_nonzero(), Some(10));
    }

    #[test]
    fn zero_below_order_for_other_index() {
        let r = ode_substitution_residual(&rat(1, 4), 10).unwrap();
        assert!(r.zero_below(10));
    }

    #[test]
    fn boundary_terms_at_order_four() {
        // Hand expansion of the truncation boundary with tables a[0..=N], b[0..=N]:
        //   W_C plain at l'^N:     -n ([N(N-1) + n] b_N + c_N)
        //   W_C log at l'^(N+1):   -n [N(N+1) + n] a_N
        //   W_A at l'^(N+1):       -[N(N+1) + n] a_N
        let n = v_index();
        let order = 4usize;
        let t = FrobeniusTables::new(n.clone(), order).unwrap();
        let c = t.c();
        let nn = rat(order as i64, 1);
        let r = ode_substitution_residual(&n, order).unwrap();

        let tail_a = -((&nn * (&nn + rat(1, 1))) + &n) * &t.a[order];
        assert_eq!(r.w_a[order + 1], tail_a);
        assert_eq!(r.w_c_log[order + 1], &n * &tail_a);

        let plain = -(((&nn * (&nn - rat(1, 1))) + &n) * &t.b[order] + &c[order]) * &n;
        assert_eq!(r.w_c_plain[order], plain);
        assert!(!r.w_c_plain[order].is_zero());
        assert!(r.w_a[order].is_zero());
        assert!(r.w_c_log[order].is_zero());
    }

    #[test]
    fn zero_index_is_rejected() {
        assert!(ode_substitution_residual(&rat(0, 1), 5).is_err());
    }
}
