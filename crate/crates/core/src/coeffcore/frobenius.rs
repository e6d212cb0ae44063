use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{checked_div, rat, v_index, v_weight_a, LogTwoNumber};
use crate::{Error, Result};

/// Truncation order used by downstream evaluation unless overridden.
pub const DEFAULT_ORDER: usize = 40;

fn int(i: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

/// Coefficients of the `r = 1` solution `W_A = Σ a_i l'^(i+1)`, with `a_0 = 1`.
///
/// Returns `a[0..=order]`, built from
/// `a_{i+1} (i+1)(i+2) = (i(i+1) + n) a_i`.
pub fn a_coefficients(n: &BigRational, order: usize) -> Vec<BigRational> {
    a_coefficients_from(n, BigRational::one(), order)
}

/// As [`a_coefficients`] with an arbitrary leading coefficient `a_0`.
pub fn a_coefficients_from(n: &BigRational, a0: BigRational, order: usize) -> Vec<BigRational> {
    let mut a = Vec::with_capacity(order + 1);
    a.push(a0);
    for i in 0..order {
        let num = int(i * (i + 1)) + n;
        let den = int((i + 1) * (i + 2));
        let next = &a[i] * num / den;
        a.push(next);
    }
    a
}

/// The `c_i` of the `W_C` substitution identity:
/// `c_0 = -a_0`, `c_i = (2i - 1) a_{i-1} - (2i + 1) a_i`.
pub fn c_coefficients(a: &[BigRational]) -> Vec<BigRational> {
    let mut c = Vec::with_capacity(a.len());
    if let Some(a0) = a.first() {
        c.push(-a0.clone());
    }
    for i in 1..a.len() {
        c.push(&a[i - 1] * int(2 * i - 1) - &a[i] * int(2 * i + 1));
    }
    c
}

/// Coefficients of the regular part `W_2 = Σ b_i l'^i` of the logarithmic
/// solution, for the `a` table produced by [`a_coefficients_from`].
///
/// `b_0 = a_0 / n`, `b_1 = -a_0`, and for `i >= 1`
/// `b_{i+1} i(i+1) = (2i-1) a_{i-1} - (2i+1) a_i + ((i-1)i + n) b_i`.
/// The returned table has the same length as `a`.
pub fn b_coefficients(n: &BigRational, a: &[BigRational]) -> Result<Vec<BigRational>> {
    if n.is_zero() {
        return Err(Error::ZeroIndex);
    }
    let Some(a0) = a.first() else {
        return Ok(Vec::new());
    };
    let mut b = Vec::with_capacity(a.len());
    b.push(checked_div(a0, n)?);
    if a.len() > 1 {
        b.push(-a0.clone());
    }
    for i in 1..a.len().saturating_sub(1) {
        let num =
            &a[i - 1] * int(2 * i - 1) - &a[i] * int(2 * i + 1) + (int((i - 1) * i) + n) * &b[i];
        b.push(num / int(i * (i + 1)));
    }
    Ok(b)
}

/// The two Frobenius coefficient tables for index `n`, truncated at `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusTables {
    pub n: BigRational,
    pub order: usize,
    pub a: Vec<BigRational>,
    pub b: Vec<BigRational>,
}

impl FrobeniusTables {
    /// Canonical tables: `a_0 = 1`, `b_1 = -1`.
    pub fn new(n: BigRational, order: usize) -> Result<Self> {
        Self::with_leading(n, order, BigRational::one())
    }

    /// Tables scaled by `a0`; every `a_i`, `b_i` is proportional to it.
    pub fn with_leading(n: BigRational, order: usize, a0: BigRational) -> Result<Self> {
        let a = a_coefficients_from(&n, a0, order);
        let b = b_coefficients(&n, &a)?;
        Ok(Self { n, order, a, b })
    }

    pub fn c(&self) -> Vec<BigRational> {
        c_coefficients(&self.a)
    }
}

/// Exact expansion of `v` about `l' = 0`:
///
/// ```text
/// v(l') = Σ_{i=0..=N} regular[i] l'^i  +  l' ln l' Σ_{i=1..=N} logpart[i] l'^(i-1)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct VSeries {
    pub order: usize,
    /// `regular[i]` multiplies `l'^i`; `regular[0] = 1`.
    pub regular: Vec<LogTwoNumber>,
    /// `logpart[i]` multiplies `l'^i ln l'`; `logpart[0]` is always zero.
    pub logpart: Vec<BigRational>,
}

impl VSeries {
    /// `logpart[1..=order]`, the coefficients of the `l' ln l'` factor.
    pub fn log_coefficients(&self) -> &[BigRational] {
        &self.logpart[1..]
    }
}

/// Expansion of `v` to `order` terms at `n = 3/16`, `A = -(9/8) ln 2`, `C = 1`.
///
/// `regular[i+1] = A a_i + n b_{i+1}` and `logpart[i+1] = n a_i`.
pub fn v_series_coefficients(order: usize) -> Result<VSeries> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "series order must be at least 1".into(),
        ));
    }
    let n = v_index();
    let tables = FrobeniusTables::new(n.clone(), order)?;
    let weight = v_weight_a();

    let mut regular = Vec::with_capacity(order + 1);
    let mut logpart = Vec::with_capacity(order + 1);
    regular.push(LogTwoNumber::from_rational(&n * &tables.b[0]));
    logpart.push(rat(0, 1));
    for i in 0..order {
        let from_a = &weight * &tables.a[i];
        let from_b = LogTwoNumber::from_rational(&n * &tables.b[i + 1]);
        regular.push(from_a + from_b);
        logpart.push(&n * &tables.a[i]);
    }
    Ok(VSeries {
        order,
        regular,
        logpart,
    })
}
