//! Exact coefficient generation for the Frobenius solutions of
//! `l'(1 - l') W'' = n W` and the resulting expansion of `v(l')`.
//!
//! Everything here is exact: coefficients are [`BigRational`], and the few
//! that carry a `ln 2` factor are [`LogTwoNumber`]s. Conversion to binary64
//! happens downstream in [`crate::vfunction`].

mod frobenius;
mod logtwo;
mod substitution;

pub use frobenius::{
    a_coefficients, a_coefficients_from, b_coefficients, c_coefficients, v_series_coefficients,
    FrobeniusTables, VSeries, DEFAULT_ORDER,
};
pub use logtwo::{ln2_approx, rational_to_decimal, LogTwoNumber, LN2_DIGITS};
pub use num_rational::BigRational;
pub use substitution::{ode_substitution_residual, LogSeries, SubstitutionResidual};

use num_bigint::BigInt;

/// `p/q` as a reduced [`BigRational`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// The ODE index for which `v` is a particular solution.
pub fn v_index() -> BigRational {
    rat(3, 16)
}

/// `A = -(9/8) ln 2`, the `W_A` weight fixed by the `dv/dl'` boundary behaviour.
pub fn v_weight_a() -> LogTwoNumber {
    LogTwoNumber::new(rat(0, 1), rat(-9, 8))
}

/// Exact division, failing on a zero denominator instead of panicking.
pub(crate) fn checked_div(num: &BigRational, den: &BigRational) -> crate::Result<BigRational> {
    use num_traits::Zero;
    if den.is_zero() {
        return Err(crate::Error::DivisionByZero);
    }
    Ok(num / den)
}
