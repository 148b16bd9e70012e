//! Front kinematics over still water, first-order slope laws and shock
//! prediction.
//!
//! A front entering quiescent water moves with `X'^2 + b(X) = 0`, so
//! `X'' = -b_x(X)/2`. Along it the leading elevation slope solves a
//! Riccati equation whose quadrature reads
//! `zeta_1(t) = (X'(0)/X'(t))^{3/2} / (1/zeta_1(0) + 3/2 X'(0)^{3/2} int_0^t X'^{-5/2})`.

use crate::bathymetry::BottomProfile;
use crate::error::{domain, Error, Result};
use crate::numerics::ode::{self, OdeOptions, Solution, Termination};
use crate::numerics::quad::{quad, quad_to_infinity};
use crate::numerics::roots::bracketed_root;

use super::front_speed;

#[derive(Debug, Clone)]
enum PathForm {
    Uniform { speed: f64 },
    /// `X = a sin(theta0 + dir * w t)` for `b = c0 + c2 x^2`.
    Sine { a: f64, theta0: f64, w: f64 },
    Numeric(Solution),
}

/// Path of a front advancing into still water from `x0`.
#[derive(Debug, Clone)]
pub struct StillFrontPath {
    pub x0: f64,
    pub direction: f64,
    horizon: f64,
    form: PathForm,
}

impl StillFrontPath {
    /// Closed forms cover flat bottoms and `b = c0 + c2 x^2` with `c2 > 0`;
    /// other profiles are integrated up to `t_max` or the shoreline.
    pub fn new(profile: &BottomProfile, x0: f64, direction: f64, t_max: f64) -> Result<Self> {
        let b0 = profile.eval(x0);
        let v0 = front_speed(b0, direction)?;
        let dir = direction.signum();
        let c = profile.coefficients();
        let (form, horizon) = if c.len() == 1 {
            (PathForm::Uniform { speed: v0 }, f64::INFINITY)
        } else if c.len() == 3 && c[1] == 0.0 && c[2] > 0.0 {
            let a = (-c[0] / c[2]).sqrt();
            let w = c[2].sqrt();
            let theta0 = (x0 / a).clamp(-1.0, 1.0).asin();
            let horizon = (std::f64::consts::FRAC_PI_2 - dir * theta0) / w;
            (PathForm::Sine { a, theta0, w }, horizon)
        } else {
            let p = profile.clone();
            let q = profile.clone();
            let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, h_max: 0.01, ..OdeOptions::default() };
            let sol = ode::solve_with_event(
                move |_, y, d| {
                    d[0] = y[1];
                    d[1] = -0.5 * p.slope(y[0]);
                },
                0.0,
                &[x0, v0],
                t_max,
                opts,
                move |_, y| -q.eval(y[0]),
            )?;
            let horizon = sol.last_t();
            if sol.termination == Termination::StepUnderflow {
                return Err(Error::Integrator { t: horizon, reason: "step underflow on front path".into() });
            }
            (PathForm::Numeric(sol), horizon)
        };
        Ok(Self { x0, direction: dir, horizon, form })
    }

    /// Last time at which the path is defined (shoreline arrival or the
    /// integration limit).
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn position(&self, t: f64) -> f64 {
        match &self.form {
            PathForm::Uniform { speed } => self.x0 + speed * t,
            PathForm::Sine { a, theta0, w } => a * (theta0 + self.direction * w * t).sin(),
            PathForm::Numeric(sol) => sol.sample(t)[0],
        }
    }

    pub fn speed(&self, t: f64) -> f64 {
        match &self.form {
            PathForm::Uniform { speed } => *speed,
            PathForm::Sine { a, theta0, w } => self.direction * a * w * (theta0 + self.direction * w * t).cos(),
            PathForm::Numeric(sol) => sol.sample(t)[1],
        }
    }

    /// Time at which the front reaches `x`.
    pub fn time_at(&self, x: f64) -> Result<f64> {
        let t = match &self.form {
            PathForm::Uniform { speed } => (x - self.x0) / speed,
            PathForm::Sine { a, theta0, w } => {
                if x.abs() > *a {
                    return domain(format!("x = {x} lies beyond the shoreline"));
                }
                self.direction * ((x / a).asin() - theta0) / w
            }
            PathForm::Numeric(_) => {
                let end = self.position(self.horizon);
                if (x - self.x0) * (end - x) < 0.0 {
                    return domain(format!("x = {x} not reached within t <= {}", self.horizon));
                }
                bracketed_root(|t| self.position(t) - x, 0.0, self.horizon, 1e-13)?
            }
        };
        if !(t >= 0.0 && t <= self.horizon) {
            return domain(format!("x = {x} not reached by the front"));
        }
        Ok(t)
    }
}

/// Quadrature solution of the leading slope along a still-water front.
/// A vanishing denominator before `t` is reported as
/// [`Error::GradientCatastrophe`] carrying the time of the root.
pub fn riccati_slope_time(path: &StillFrontPath, zeta1_0: f64, t: f64) -> Result<f64> {
    if zeta1_0 == 0.0 {
        return Ok(0.0);
    }
    if !(t >= 0.0 && t <= path.horizon()) {
        return domain(format!("t = {t} outside the front path [0, {}]", path.horizon()));
    }
    let v0 = path.speed(0.0);
    let a0 = v0.abs().powf(1.5);
    let g = |s: f64| {
        let v = path.speed(s);
        v.signum() * v.abs().powf(-2.5)
    };
    let denom = |s: f64| -> f64 {
        if s == 0.0 {
            return 1.0 / zeta1_0;
        }
        1.0 / zeta1_0 + 1.5 * a0 * quad(g, 0.0, s).unwrap_or(f64::NAN)
    };
    let mut d_end = denom(t);
    if !d_end.is_finite() && zeta1_0.signum() != v0.signum() {
        // near the shoreline the integral diverges; back off to a resolvable end
        let mut gap = t * 1e-12;
        while gap < t {
            let d = denom(t - gap);
            if d.is_finite() {
                if d.signum() != zeta1_0.signum() {
                    let root = bracketed_root(denom, 0.0, t - gap, 1e-13)?;
                    return Err(Error::GradientCatastrophe { at: root });
                }
                break;
            }
            gap *= 4.0;
        }
        d_end = f64::NAN;
    }
    if !d_end.is_finite() {
        return Err(Error::Root(format!("slope quadrature failed on [0, {t}]")));
    }
    if d_end.signum() != zeta1_0.signum() || d_end == 0.0 {
        let root = bracketed_root(denom, 0.0, t, 1e-13)?;
        return Err(Error::GradientCatastrophe { at: root });
    }
    let vt = path.speed(t).abs();
    Ok((v0.abs() / vt).powf(1.5) / d_end)
}

fn shoreline_right(profile: &BottomProfile, x0: f64) -> Result<Option<f64>> {
    let mut dx = 1e-3 * x0.abs().max(1.0);
    let mut a = x0;
    while a - x0 < 1e6 {
        let b = a + dx;
        if profile.eval(b) >= 0.0 {
            return bracketed_root(|x| profile.eval(x), a, b, 1e-15).map(Some);
        }
        a = b;
        dx *= 1.01;
    }
    Ok(None)
}

/// Position where a right-going front from `x0` with slope `zeta1_0 < 0`
/// steepens into a shock, from the root of
/// `1/zeta1_0 + 3/2 (-b(x0))^{3/4} int_{x0}^{x} (-b)^{-7/4} dx'`.
pub fn shock_position(profile: &BottomProfile, x0: f64, zeta1_0: f64) -> Result<f64> {
    if !(zeta1_0 < 0.0) {
        return Err(Error::NoCatastrophe(format!("zeta_1(0) = {zeta1_0} does not steepen")));
    }
    let b0 = profile.eval(x0);
    if !(b0 < 0.0) {
        return domain(format!("front at or beyond the shoreline: b(x0) = {b0}"));
    }
    let c = profile.coefficients();
    let depth0 = -b0;
    if c.len() == 1 {
        return Ok(x0 - 2.0 * depth0 / (3.0 * zeta1_0));
    }
    let k = 1.5 * depth0.powf(0.75);
    let target = -1.0 / (zeta1_0 * k);
    match shoreline_right(profile, x0)? {
        Some(xs) => {
            // w = (xs - x')^{-3/4} removes the endpoint singularity
            let g = |w: f64| {
                let x = xs - w.powf(-4.0 / 3.0);
                let ratio = (xs - x) / -profile.eval(x);
                (4.0 / 3.0) * ratio.powf(1.75)
            };
            let w0 = (xs - x0).powf(-0.75);
            let excess = |w: f64| quad(g, w0, w).unwrap_or(f64::NAN) - target;
            let mut hi = 2.0 * w0;
            while excess(hi) < 0.0 {
                hi *= 2.0;
                if hi > 1e12 * w0 {
                    return Err(Error::Root("shock position bracket not found".into()));
                }
            }
            let w = bracketed_root(excess, w0, hi, 1e-14 * hi)?;
            Ok(xs - w.powf(-4.0 / 3.0))
        }
        None => {
            let g = |x: f64| (-profile.eval(x)).powf(-1.75);
            let total = quad_to_infinity(g, x0)?;
            if total <= target {
                return Err(Error::NoCatastrophe("slope decays before steepening".into()));
            }
            let excess = |x: f64| quad(g, x0, x).unwrap_or(f64::NAN) - target;
            let mut hi = x0 + 1.0;
            while excess(hi) < 0.0 {
                hi = x0 + 2.0 * (hi - x0);
            }
            bracketed_root(excess, x0, hi, 1e-12)
        }
    }
}

/// Leading slopes of the shoulder born at a corner whose incoming
/// elevation slope is `zeta_in_slope`: half the neighbouring slope.
pub fn shoulder_initial_slope(zeta_in_slope: f64, b0: f64) -> Result<(f64, f64)> {
    let c = front_speed(b0, 1.0)?;
    Ok((0.5 * zeta_in_slope, 0.5 * zeta_in_slope / c))
}

/// Left- and right-going characteristics leaving a wet corner at `x0` in
/// quiescent water, each defined up to `t_max` or the shoreline.
pub fn corner_split_fronts(profile: &BottomProfile, x0: f64, t_max: f64) -> Result<(StillFrontPath, StillFrontPath)> {
    let b0 = profile.eval(x0);
    if !(b0 < 0.0) {
        return domain(format!("corner at x0 = {x0} is dry"));
    }
    Ok((StillFrontPath::new(profile, x0, -1.0, t_max)?, StillFrontPath::new(profile, x0, 1.0, t_max)?))
}
