use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Decimal digits of `ln 2` used by [`LogTwoNumber::to_f64`].
pub const LN2_DIGITS: u32 = 40;

/// An exact number of the form `rat + log2coef * ln 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogTwoNumber {
    pub rat: BigRational,
    pub log2coef: BigRational,
}

impl LogTwoNumber {
    pub fn new(rat: BigRational, log2coef: BigRational) -> Self {
        Self { rat, log2coef }
    }

    pub fn from_rational(rat: BigRational) -> Self {
        Self {
            rat,
            log2coef: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.log2coef.is_zero()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(&self.rat * s, &self.log2coef * s)
    }

    /// Rational approximation with `ln 2` taken to at least `digits` decimal digits.
    pub fn approximate(&self, digits: u32) -> BigRational {
        if self.log2coef.is_zero() {
            return self.rat.clone();
        }
        &self.rat + &self.log2coef * ln2_approx(digits)
    }

    /// Value in binary64 computed from a `digits`-digit `ln 2`.
    pub fn to_f64_with(&self, digits: u32) -> f64 {
        self.approximate(digits).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_with(LN2_DIGITS)
    }

    /// Rounded to `places` decimal places, half away from zero.
    pub fn to_decimal(&self, places: u32) -> String {
        rational_to_decimal(&self.approximate(places + 20), places)
    }
}

impl fmt::Display for LogTwoNumber {
    /// `p/q + r/s·ln2`, omitting a zero part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coef = &self.log2coef;
        if coef.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if !self.rat.is_zero() {
            write!(f, "{}", self.rat)?;
            let sign = if coef.is_negative() { " - " } else { " + " };
            f.write_str(sign)?;
        } else if coef.is_negative() {
            f.write_str("-")?;
        }
        let mag = coef.abs();
        if mag.is_one() {
            f.write_str("ln2")
        } else {
            write!(f, "{}·ln2", mag)
        }
    }
}

impl Add for &LogTwoNumber {
    type Output = LogTwoNumber;
    fn add(self, rhs: Self) -> LogTwoNumber {
        LogTwoNumber::new(&self.rat + &rhs.rat, &self.log2coef + &rhs.log2coef)
    }
}

impl Add for LogTwoNumber {
    type Output = LogTwoNumber;
    fn add(self, rhs: Self) -> LogTwoNumber {
        &self + &rhs
    }
}

impl Sub for &LogTwoNumber {
    type Output = LogTwoNumber;
    fn sub(self, rhs: Self) -> LogTwoNumber {
        LogTwoNumber::new(&self.rat - &rhs.rat, &self.log2coef - &rhs.log2coef)
    }
}

impl Sub for LogTwoNumber {
    type Output = LogTwoNumber;
    fn sub(self, rhs: Self) -> LogTwoNumber {
        &self - &rhs
    }
}

impl Neg for LogTwoNumber {
    type Output = LogTwoNumber;
    fn neg(self) -> LogTwoNumber {
        LogTwoNumber::new(-self.rat, -self.log2coef)
    }
}

impl Mul<&BigRational> for &LogTwoNumber {
    type Output = LogTwoNumber;
    fn mul(self, rhs: &BigRational) -> LogTwoNumber {
        self.scale(rhs)
    }
}

/// Rational approximation of `ln 2` with absolute error below `10^-(digits+2)`.
///
/// Uses `ln 2 = 2 atanh(1/3) = 2 Σ 1 / ((2k+1) 3^(2k+1))`; the tail after `K`
/// terms is bounded by `3^(-2K)`.
pub fn ln2_approx(digits: u32) -> BigRational {
    let terms =
        ((f64::from(digits) + 2.0) * std::f64::consts::LN_10 / (2.0 * 3f64.ln())).ceil() as u32 + 1;
    let nine = BigInt::from(9);
    let mut pow = BigInt::from(3);
    let mut sum = BigRational::zero();
    for k in 0..terms {
        let den = BigInt::from(2 * k + 1) * &pow;
        sum += BigRational::new(BigInt::one(), den);
        pow *= &nine;
    }
    sum * BigRational::from_integer(BigInt::from(2))
}

/// Fixed-point rendering of an exact rational, rounded half away from zero.
pub fn rational_to_decimal(value: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10).pow(places);
    let scaled = (value * BigRational::from_integer(scale.clone())).round();
    let int = scaled.to_integer();
    let neg = int.is_negative();
    let digits = int.abs().to_string();
    let places = places as usize;
    let body = if places == 0 {
        digits
    } else if digits.len() <= places {
        format!("0.{}{}", "0".repeat(places - digits.len()), digits)
    } else {
        let (head, tail) = digits.split_at(digits.len() - places);
        format!("{head}.{tail}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffcore::rat;

    #[test]
    fn ln2_to_forty_digits() {
        // 0.6931471805599453094172321214581765680755...
        let ln2 = ln2_approx(40);
        assert_eq!(
            rational_to_decimal(&ln2, 40),
            "0.6931471805599453094172321214581765680755"
        );
        assert_eq!(ln2.to_f64().unwrap(), std::f64::consts::LN_2);
    }

    #[test]
    fn display_forms() {
        let x = LogTwoNumber::new(rat(-3, 16), rat(-9, 8));
        assert_eq!(x.to_string(), "-3/16 - 9/8·ln2");
        let y = LogTwoNumber::new(rat(51, 1024), rat(-27, 256));
        assert_eq!(y.to_string(), "51/1024 - 27/256·ln2");
        assert_eq!(LogTwoNumber::from_rational(rat(1, 1)).to_string(), "1");
        assert_eq!(LogTwoNumber::new(rat(0, 1), rat(-1, 1)).to_string(), "-ln2");
        assert_eq!(
            LogTwoNumber::new(rat(1, 2), rat(3, 4)).to_string(),
            "1/2 + 3/4·ln2"
        );
    }

    #[test]
    fn componentwise_arithmetic() {
        let x = LogTwoNumber::new(rat(1, 3), rat(2, 5));
        let y = LogTwoNumber::new(rat(-1, 6), rat(1, 10));
        assert_eq!(&x + &y, LogTwoNumber::new(rat(1, 6), rat(1, 2)));
        assert_eq!(&x - &y, LogTwoNumber::new(rat(1, 2), rat(3, 10)));
        assert_eq!(&x * &rat(3, 2), LogTwoNumber::new(rat(1, 2), rat(3, 5)));
        assert!((x.clone() - x).is_zero());
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(rational_to_decimal(&rat(-1, 3), 5), "-0.33333");
        assert_eq!(rational_to_decimal(&rat(2, 3), 5), "0.66667");
        assert_eq!(rational_to_decimal(&rat(1, 200), 2), "0.01");
        assert_eq!(rational_to_decimal(&rat(-1, 200), 2), "-0.01");
        assert_eq!(rational_to_decimal(&rat(7, 1), 0), "7");
        assert_eq!(rational_to_decimal(&rat(3, 16), 5), "0.18750");
    }

    #[test]
    fn to_f64_is_correctly_rounded_against_f64_formula() {
        let x = LogTwoNumber::new(rat(-3, 16), rat(-9, 8));
        let naive = -3.0 / 16.0 - 9.0 / 8.0 * std::f64::consts::LN_2;
        assert!((x.to_f64() - naive).abs() <= 2.0 * f64::EPSILON);
        assert_eq!(x.to_decimal(5), "-0.96729");
    }
}
