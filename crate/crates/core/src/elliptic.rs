//! Legendre incomplete elliptic integrals of the first and third kind via
//! Carlson's symmetric forms and the duplication theorem.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};

const RTOL: f64 = 1e-16;

/// Validated argument triple for the Legendre forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArgs {
    pub phi: f64,
    pub k: f64,
    pub n: f64,
}

impl EllipticArgs {
    pub fn new(phi: f64, k: f64, n: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2 + 1e-15).contains(&phi) {
            return domain(format!("amplitude {phi} outside [0, pi/2]"));
        }
        if !(0.0..1.0).contains(&k) {
            return domain(format!("modulus {k} outside [0, 1)"));
        }
        if !(n < 1.0) || !n.is_finite() {
            return domain(format!("characteristic {n} must be finite and below 1"));
        }
        Ok(Self { phi: phi.min(FRAC_PI_2), k, n })
    }
}

/// Carlson's `R_F(x, y, z)`; at most one argument may vanish.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || [x + y, x + z, y + z].iter().any(|&s| s == 0.0) {
        return domain(format!("R_F({x}, {y}, {z}) undefined"));
    }
    let (x0, y0) = (x, y);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * RTOL).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let (mut x, mut y, mut z, mut a) = (x, y, z, a0);
    let mut pow4 = 1.0;
    while pow4 * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        a = 0.25 * (a + lam);
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = -xx - yy;
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt())
}

/// `R_C(1, 1 + e)` for `e > -1`.
fn rc_one(e: f64) -> f64 {
    if e.abs() < 1e-4 {
        1.0 - e / 3.0 + e * e / 5.0 - e * e * e / 7.0
    } else if e > 0.0 {
        let s = e.sqrt();
        s.atan() / s
    } else {
        let s = (-e).sqrt();
        s.atanh() / s
    }
}

/// Carlson's `R_C(x, y)` for `x >= 0`, `y > 0`.
pub fn carlson_rc(x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y <= 0.0 {
        return domain(format!("R_C({x}, {y}) undefined"));
    }
    if x == 0.0 {
        return Ok(FRAC_PI_2 / y.sqrt());
    }
    Ok(rc_one(y / x - 1.0) / x.sqrt())
}

/// Carlson's `R_J(x, y, z, p)` for `p > 0`.
pub fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || p <= 0.0 || [x + y, x + z, y + z].iter().any(|&s| s == 0.0) {
        return domain(format!("R_J({x}, {y}, {z}, {p}) undefined"));
    }
    let (x0, y0, z0, p0) = (x, y, z, p);
    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (0.25 * RTOL).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs()).max((a0 - p).abs());
    let (mut x, mut y, mut z, mut p, mut a) = (x, y, z, p, a0);
    let mut pow4 = 1.0;
    let mut pow64 = 1.0;
    let mut sum = 0.0;
    while pow4 * q >= a.abs() {
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = pow64 * delta / (d * d);
        sum += pow4 / d * rc_one(e);
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        a = 0.25 * (a + lam);
        pow4 *= 0.25;
        pow64 /= 64.0;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = (a0 - z0) * pow4 / a;
    let pp = -(xx + yy + zz) / 2.0;
    let _ = p0;
    let e2 = xx * yy + xx * zz + yy * zz - 3.0 * pp * pp;
    let xyz = xx * yy * zz;
    let e3 = xyz + 2.0 * e2 * pp + 4.0 * pp * pp * pp;
    let e4 = (2.0 * xyz + e2 * pp + 3.0 * pp * pp * pp) * pp;
    let e5 = xyz * pp * pp;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    Ok(pow4 * series / (a * a.sqrt()) + 6.0 * sum)
}

/// `F(phi, k) = int_0^phi dtheta / sqrt(1 - k^2 sin^2 theta)`.
pub fn ellint_f(phi: f64, k: f64) -> Result<f64> {
    let a = EllipticArgs::new(phi, k, 0.0)?;
    if a.phi == 0.0 {
        return Ok(0.0);
    }
    let (s, c) = a.phi.sin_cos();
    Ok(s * carlson_rf(c * c, 1.0 - a.k * a.k * s * s, 1.0)?)
}

/// `Pi(n; phi, k) = int_0^phi dtheta / ((1 - n sin^2 theta) sqrt(1 - k^2 sin^2 theta))`.
pub fn ellint_pi(n: f64, phi: f64, k: f64) -> Result<f64> {
    let a = EllipticArgs::new(phi, k, n)?;
    if a.phi == 0.0 {
        return Ok(0.0);
    }
    let (s, c) = a.phi.sin_cos();
    let (c2, d2) = (c * c, 1.0 - a.k * a.k * s * s);
    let f = s * carlson_rf(c2, d2, 1.0)?;
    if a.n == 0.0 {
        return Ok(f);
    }
    Ok(f + a.n / 3.0 * s * s * s * carlson_rj(c2, d2, 1.0, 1.0 - a.n * s * s)?)
}

/// Complete integral of the first kind `K(k)`.
pub fn ellint_k(k: f64) -> Result<f64> {
    ellint_f(FRAC_PI_2, k)
}

/// Complete integral of the third kind `Pi(n; k)`.
pub fn ellint_pi_complete(n: f64, k: f64) -> Result<f64> {
    ellint_pi(n, FRAC_PI_2, k)
}
