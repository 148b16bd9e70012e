//! Dormand–Prince 5(4) with PI step-size control, cubic Hermite dense output
//! and terminal event location.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_init: None, h_max: f64::INFINITY, h_min: 1e-14, max_steps: 2_000_000 }
    }
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Reached,
    Event,
    StepUnderflow,
}

/// Accepted steps of an integration together with their derivatives.
#[derive(Debug, Clone)]
pub struct Solution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub dy: Vec<Vec<f64>>,
    pub termination: Termination,
}

impl Solution {
    pub fn last_t(&self) -> f64 {
        *self.t.last().expect("solution has at least the initial point")
    }

    pub fn last(&self) -> &[f64] {
        self.y.last().expect("solution has at least the initial point")
    }

    pub fn steps(&self) -> usize {
        self.t.len() - 1
    }

    /// Cubic Hermite interpolation between accepted steps.
    pub fn sample(&self, t: f64) -> Vec<f64> {
        let n = self.t.len();
        if n == 1 || t <= self.t[0] {
            return self.y[0].clone();
        }
        if t >= self.t[n - 1] {
            return self.y[n - 1].clone();
        }
        let i = self.t.partition_point(|&s| s <= t).saturating_sub(1).min(n - 2);
        hermite(self.t[i], self.t[i + 1], &self.y[i], &self.y[i + 1], &self.dy[i], &self.dy[i + 1], t)
    }
}

fn hermite(t0: f64, t1: f64, y0: &[f64], y1: &[f64], d0: &[f64], d1: &[f64], t: f64) -> Vec<f64> {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    (0..y0.len()).map(|k| h00 * y0[k] + h10 * h * d0[k] + h01 * y1[k] + h11 * h * d1[k]).collect()
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end`.
pub fn solve<F>(f: F, t0: f64, y0: &[f64], t_end: f64, opts: OdeOptions) -> Result<Solution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    solve_with_event(f, t0, y0, t_end, opts, |_, _| 1.0)
}

/// Integrate until `t_end` or until `event(t, y)` changes sign relative to
/// its initial value. The crossing is located by bisection on the dense
/// interpolant and becomes the final point of the solution.
pub fn solve_with_event<F, G>(mut f: F, t0: f64, y0: &[f64], t_end: f64, opts: OdeOptions, mut event: G) -> Result<Solution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    G: FnMut(f64, &[f64]) -> f64,
{
    if !(t_end >= t0) {
        return Err(Error::Domain(format!("integration interval [{t0}, {t_end}] is empty or reversed")));
    }
    let n = y0.len();
    let mut k1 = vec![0.0; n];
    f(t0, y0, &mut k1);
    if !all_finite(&k1) {
        return Err(Error::Integrator { t: t0, reason: "non-finite derivative at initial point".into() });
    }
    let mut sol = Solution { t: vec![t0], y: vec![y0.to_vec()], dy: vec![k1.clone()], termination: Termination::Reached };
    if t_end == t0 {
        return Ok(sol);
    }
    let g0 = event(t0, y0);
    let g_sign = if g0 < 0.0 { -1.0 } else { 1.0 };

    let mut t = t0;
    let mut y = y0.to_vec();
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut ys = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut h = opts.h_init.unwrap_or_else(|| initial_step(&y, &k1, t_end - t0, opts));
    h = h.min(opts.h_max);
    let mut err_prev: f64 = 1e-4;
    let mut steps = 0usize;

    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::Integrator { t, reason: format!("exceeded {} steps", opts.max_steps) });
        }
        steps += 1;
        let mut last = false;
        if t + h >= t_end {
            h = t_end - t;
            last = true;
        }
        if h < opts.h_min && !last {
            sol.termination = Termination::StepUnderflow;
            return Ok(sol);
        }

        for i in 0..n {
            ys[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &ys, &mut k2);
        for i in 0..n {
            ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &ys, &mut k3);
        for i in 0..n {
            ys[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &ys, &mut k4);
        for i in 0..n {
            ys[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &ys, &mut k5);
        for i in 0..n {
            ys[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + h, &ys, &mut k6);
        for i in 0..n {
            ynew[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        let tnew = if last { t_end } else { t + h };
        f(tnew, &ynew, &mut k7);

        let mut err = 0.0;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / n as f64).sqrt();
        if !err.is_finite() || !all_finite(&ynew) || !all_finite(&k7) {
            h *= 0.25;
            if h < opts.h_min {
                sol.termination = Termination::StepUnderflow;
                return Ok(sol);
            }
            continue;
        }

        if err <= 1.0 {
            let g1 = event(tnew, &ynew);
            if g_sign * g1 < 0.0 {
                let (te, ye) = locate(&mut event, g_sign, t, tnew, &y, &ynew, &k1, &k7);
                let mut de = vec![0.0; n];
                f(te, &ye, &mut de);
                sol.t.push(te);
                sol.y.push(ye);
                sol.dy.push(de);
                sol.termination = Termination::Event;
                return Ok(sol);
            }
            t = tnew;
            y.copy_from_slice(&ynew);
            k1.copy_from_slice(&k7);
            sol.t.push(t);
            sol.y.push(y.clone());
            sol.dy.push(k1.clone());
            let fac = 0.9 * err.max(1e-10).powf(-0.17) * err_prev.powf(0.04);
            h *= fac.clamp(0.2, 10.0);
            h = h.min(opts.h_max);
            err_prev = err.max(1e-4);
        } else {
            let fac = 0.9 * err.powf(-0.2);
            h *= fac.clamp(0.2, 1.0);
        }
    }
    Ok(sol)
}

#[allow(clippy::too_many_arguments)]
fn locate<G>(event: &mut G, g_sign: f64, t0: f64, t1: f64, y0: &[f64], y1: &[f64], d0: &[f64], d1: &[f64]) -> (f64, Vec<f64>)
where
    G: FnMut(f64, &[f64]) -> f64,
{
    let (mut a, mut b) = (t0, t1);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let ym = hermite(t0, t1, y0, y1, d0, d1, m);
        if g_sign * event(m, &ym) < 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    (b, hermite(t0, t1, y0, y1, d0, d1, b))
}

fn initial_step(y: &[f64], d: &[f64], span: f64, opts: OdeOptions) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..y.len() {
        let sc = opts.atol + opts.rtol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (d[i] / sc).powi(2);
    }
    let n = y.len().max(1) as f64;
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).min(opts.h_max).max(1e-12_f64.min(span))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let sol = solve(|_, y, d| d[0] = -y[0], 0.0, &[1.0], 2.0, OdeOptions::with_tol(1e-12)).unwrap();
        assert!((sol.last()[0] - (-2.0f64).exp()).abs() < 1e-11);
        assert_eq!(sol.termination, Termination::Reached);
    }

    #[test]
    fn harmonic_dense_output() {
        let sol = solve(|_, y, d| { d[0] = y[1]; d[1] = -y[0]; }, 0.0, &[0.0, 1.0], 10.0, OdeOptions::with_tol(1e-11)).unwrap();
        for k in 0..50 {
            let t = 0.2 * k as f64 + 0.013;
            let y = sol.sample(t);
            assert!((y[0] - t.sin()).abs() < 1e-6, "t={t}");
        }
        assert!((sol.last()[0] - 10f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn event_stops_integration() {
        // y' = 1, stop when y = 0.5
        let sol = solve_with_event(|_, _, d| d[0] = 1.0, 0.0, &[0.0], 3.0, OdeOptions::default(), |_, y| y[0] - 0.5).unwrap();
        assert_eq!(sol.termination, Termination::Event);
        assert!((sol.last_t() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn blow_up_is_bracketed() {
        // y' = y^2, y(0) = 1 diverges at t = 1
        let sol = solve_with_event(|_, y, d| d[0] = y[0] * y[0], 0.0, &[1.0], 2.0, OdeOptions::with_tol(1e-12), |_, y| 1e6 - y[0].abs()).unwrap();
        assert_eq!(sol.termination, Termination::Event);
        assert!((sol.last_t() - (1.0 - 1e-6)).abs() < 1e-9);
    }
}
