//! Scalar root bracketing and one-dimensional minimisation.

use crate::error::{Error, Result};

/// Root of `f` on `[a, b]` given a sign change. Illinois-modified secant
/// steps, with a bisection step whenever the bracket fails to halve.
pub fn bracketed_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Root(format!("no sign change on [{a}, {b}]: f = ({fa:e}, {fb:e})")));
    }
    let mut side = 0i8;
    let mut width = b - a;
    for _ in 0..400 {
        if b - a <= xtol {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        let bisect = (b - a) > 0.5 * width;
        width = b - a;
        if bisect || !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if !fx.is_finite() {
            return Err(Error::Root(format!("non-finite function value at {x}")));
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let fa = f(a);
    let fb = f(b);
    [(a, fa), (c, fc), (d, fd), (b, fb)]
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |best, p| if p.1 < best.1 { p } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_of_two() {
        let r = bracketed_root(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn steep_root() {
        let r = bracketed_root(|x| (50.0 * (x - 0.3)).tanh(), -1.0, 1.0, 1e-13).unwrap();
        assert!((r - 0.3).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_error() {
        assert!(bracketed_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn golden_parabola() {
        let (x, v) = golden_min(|x| (x - 0.25).powi(2) + 1.0, -1.0, 1.0, 1e-10);
        assert!((x - 0.25).abs() < 1e-7 && (v - 1.0).abs() < 1e-14);
    }
}
