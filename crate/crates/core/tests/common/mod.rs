//! Reference implementations used only by the tests. None of them share code
//! with the library's evaluation paths.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }

    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 40)
}

/// K(m) by direct quadrature of its defining integral.
pub fn quad_k(m: f64) -> f64 {
    adaptive_simpson(
        &|phi: f64| 1.0 / (1.0 - m * phi.sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        1e-15,
    )
}

/// E(m) by direct quadrature of its defining integral.
pub fn quad_e(m: f64) -> f64 {
    adaptive_simpson(
        &|phi: f64| (1.0 - m * phi.sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        1e-15,
    )
}

/// v(l') composed from the quadrature K and E.
pub fn quad_v(lp: f64) -> f64 {
    let s = lp.sqrt();
    let m = (1.0 - s) / (1.0 + s);
    (1.0 + s).sqrt() * (quad_e(m) - s * quad_k(m))
}

/// Minimal exact fraction over i128, for small-order recurrence oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0);
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Self {
            num: s * num / g,
            den: s * den / g,
        }
    }
    pub fn int(n: i128) -> Self {
        Self::new(n, 1)
    }
    pub fn add(self, o: Self) -> Self {
        Self::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }
    pub fn sub(self, o: Self) -> Self {
        Self::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }
    pub fn mul(self, o: Self) -> Self {
        Self::new(self.num * o.num, self.den * o.den)
    }
    pub fn div(self, o: Self) -> Self {
        Self::new(self.num * o.den, self.den * o.num)
    }
}

/// a_{i+1} = (i(i+1)+n)/((i+1)(i+2)) a_i, a_0 = 1.
pub fn oracle_a(n: Frac, order: usize) -> Vec<Frac> {
    let mut a = vec![Frac::int(1)];
    for i in 0..order as i128 {
        let next = a[i as usize]
            .mul(Frac::int(i * (i + 1)).add(n))
            .div(Frac::int((i + 1) * (i + 2)));
        a.push(next);
    }
    a
}

/// b_0 = 1/n, b_1 = -1, then the general b recurrence for i >= 1.
pub fn oracle_b(n: Frac, a: &[Frac]) -> Vec<Frac> {
    let mut b = vec![Frac::int(1).div(n), Frac::int(-1)];
    for i in 1..(a.len() - 1) as i128 {
        let iu = i as usize;
        let num = Frac::int(2 * i - 1)
            .mul(a[iu - 1])
            .sub(Frac::int(2 * i + 1).mul(a[iu]))
            .add(Frac::int((i - 1) * i).add(n).mul(b[iu]));
        b.push(num.div(Frac::int(i * (i + 1))));
    }
    b
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
