//! Complete elliptic integrals K(m), E(m) by the arithmetic-geometric mean,
//! in the parameter convention `m = k²`.
//!
//! ```text
//! K(m) = ∫₀^(π/2) dφ / √(1 - m sin²φ)
//! E(m) = ∫₀^(π/2) √(1 - m sin²φ) dφ
//! ```
//!
//! Near `m = 1` the accuracy of [`ellip_k`] is limited by the rounding of
//! `1 - m` itself: an input `m` carries an absolute error of `ε/2`, so the
//! relative error of `1 - m` is about `ε / (1 - m)` and K inherits roughly
//! `ε / (4 (1 - m) K)` of it. Callers that know `1 - m` exactly (as the
//! `l'` parametrisation does) should use [`ellip_ke_complementary`].

use std::f64::consts::{LN_2, PI};

use crate::{Error, Result};

const MAX_ITER: usize = 64;

/// Elliptic parameter `m` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticParameterM(f64);

impl EllipticParameterM {
    pub fn new(m: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&m) {
            Ok(Self(m))
        } else {
            Err(Error::domain("m", m, "[0, 1]"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Complementary elliptic variable `l' = [(1 - m)/(1 + m)]²` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ComplementaryL(f64);

impl ComplementaryL {
    pub fn new(lp: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&lp) {
            Ok(Self(lp))
        } else {
            Err(Error::domain("lp", lp, "[0, 1]"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - m(l') = 2√l' / (1 + √l')`, without cancellation.
    pub fn complementary_m(self) -> f64 {
        let s = self.0.sqrt();
        2.0 * s / (1.0 + s)
    }
}

pub fn lp_from_m(m: f64) -> Result<f64> {
    let m = EllipticParameterM::new(m)?.get();
    let r = (1.0 - m) / (1.0 + m);
    Ok(r * r)
}

pub fn m_from_lp(lp: f64) -> Result<f64> {
    let s = ComplementaryL::new(lp)?.get().sqrt();
    Ok((1.0 - s) / (1.0 + s))
}

/// Runs the AGM from `(1, √(1-m))` and returns `(K, E)`.
///
/// `c_0² = m`, `c_{j+1} = c_j² / (4 a_{j+1})`, and
/// `E = K (1 - Σ 2^(j-1) c_j²)`.
fn agm_ke(m: f64, m1: f64) -> (f64, f64) {
    let mut a = 1.0f64;
    let mut b = m1.sqrt();
    let mut c = m.sqrt();
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..MAX_ITER {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c = c * c / (4.0 * a_next);
        weight *= 2.0;
        sum += weight * c * c;
        a = a_next;
        b = b_next;
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - sum))
}

/// K and E from the complementary parameter `m1 = 1 - m` in `(0, 1]`.
pub fn ellip_ke_complementary(m1: f64) -> Result<(f64, f64)> {
    if m1 == 0.0 {
        return Err(Error::Divergent {
            what: "K(m)",
            name: "m",
            value: 1.0,
        });
    }
    if !(0.0..=1.0).contains(&m1) {
        return Err(Error::domain("1 - m", m1, "(0, 1]"));
    }
    Ok(agm_ke(1.0 - m1, m1))
}

/// Complete elliptic integral of the first kind. Diverges at `m = 1`.
pub fn ellip_k(m: f64) -> Result<f64> {
    let m = EllipticParameterM::new(m)?.get();
    if m == 1.0 {
        return Err(Error::Divergent {
            what: "K(m)",
            name: "m",
            value: m,
        });
    }
    Ok(agm_ke(m, 1.0 - m).0)
}

/// Complete elliptic integral of the second kind; `E(1) = 1`.
pub fn ellip_e(m: f64) -> Result<f64> {
    let m = EllipticParameterM::new(m)?.get();
    if m == 1.0 {
        return Ok(1.0);
    }
    Ok(agm_ke(m, 1.0 - m).1)
}

/// Leading small-`l'` behaviour of `K(m(l'))`: `(3/2) ln 2 - (1/4) ln l'`.
pub fn cayley_k(lp: f64) -> Result<f64> {
    if !(lp > 0.0 && lp <= 1.0) {
        return Err(Error::domain("lp", lp, "(0, 1]"));
    }
    Ok(1.5 * LN_2 - 0.25 * lp.ln())
}

/// `K(m(l'))` evaluated through the exact complementary parameter.
pub fn ellip_k_of_lp(lp: f64) -> Result<f64> {
    let lp = ComplementaryL::new(lp)?;
    Ok(ellip_ke_complementary(lp.complementary_m())
        .map_err(|_| Error::Divergent {
            what: "K(m(lp))",
            name: "lp",
            value: 0.0,
        })?
        .0)
}
