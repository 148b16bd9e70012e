//! Fronts advancing into still water (`u = zeta = 0` ahead of the front).
//!
//! The coefficient rows couple order `n` to order `n + 1`, but the
//! velocity row of order `n - 1` fixes
//! `zeta_n = X' u_n - (u_{n-1}' + sum_k k u_k u_{n-k}) / n`,
//! and the combination of the order-`n` rows free of order `n + 1` then
//! gives a closed equation for `u_n`. The resulting system for
//! `(X, u_1, ..., u_N)` is triangular: truncating at `N` leaves the lower
//! orders untouched. The time derivatives of lower-order coefficients that
//! appear in `zeta_n` are supplied by truncated Taylor jets in time.

use crate::bathymetry::BottomProfile;
use crate::error::{domain, Error, Result};
use crate::numerics::jet::Jet;
use crate::numerics::ode::{self, OdeOptions, Solution, Termination};

use super::{front_speed, FrontKind, FrontSeriesState};

/// Time derivatives at a still-water front together with the slaved
/// elevation coefficients. Index 0 entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StillRates {
    pub xdot: f64,
    pub xddot: f64,
    pub zeta: Vec<f64>,
    pub zeta_dot: Vec<f64>,
    pub u_dot: Vec<f64>,
}

struct StillJets {
    xd: Jet,
    xdd: Jet,
    u: Vec<Jet>,
    zeta: Vec<Jet>,
}

fn still_jets(profile: &BottomProfile, x: f64, dir: f64, u: &[f64]) -> Result<StillJets> {
    let n_ord = u.len() - 1;
    let len = n_ord + 2;
    let b0 = profile.eval(x);
    let xdot = front_speed(b0, dir)?;

    let b1_poly = profile.taylor_poly(1);
    let mut xj = Jet::zeros(len + 1);
    xj.0[0] = x;
    xj.0[1] = xdot;
    for m in 0..len - 1 {
        let acc = xj.compose_poly(&b1_poly).scale(-0.5);
        xj.0[m + 2] = acc.0[m] / ((m + 1) * (m + 2)) as f64;
    }
    let xd = Jet(xj.derivative().0[..len].to_vec());
    let xt = Jet(xj.0[..len].to_vec());
    let xdd = xt.compose_poly(&b1_poly).scale(-0.5);
    let bj: Vec<Jet> = (0..=n_ord).map(|k| xt.compose_poly(&profile.taylor_poly(k))).collect();
    let inv = xd.scale(2.0).recip();

    let mut uj = vec![Jet::zeros(len); n_ord + 1];
    let mut zj = vec![Jet::zeros(len); n_ord + 1];
    let conv = |uj: &[Jet], n: usize| -> Jet {
        // sum_{k=1}^{n} k u_k u_{n+1-k}
        let mut s = Jet::zeros(len);
        for k in 1..=n {
            s = &s + &(&uj[k] * &uj[n + 1 - k]).scale(k as f64);
        }
        s
    };
    for n in 1..=n_ord {
        let w = if n == 1 {
            Jet::zeros(len)
        } else {
            (&uj[n - 1].derivative() + &conv(&uj, n - 1)).scale(-1.0 / n as f64)
        };
        let wdot = w.derivative();
        uj[n] = Jet::constant(u[n], len);
        for m in 0..len - 1 {
            zj[n] = &(&xd * &uj[n]) + &w;
            let mut sum = Jet::zeros(len);
            for k in 1..=n {
                sum = &sum + &(&(&zj[k] - &bj[k]) * &uj[n + 1 - k]);
            }
            let s = &sum.scale(-((n + 1) as f64)) - &(&xd * &conv(&uj, n));
            let f = &(&(&s - &(&xdd * &uj[n])) - &wdot) * &inv;
            uj[n].0[m + 1] = f.0[m] / (m + 1) as f64;
        }
        zj[n] = &(&xd * &uj[n]) + &w;
    }
    Ok(StillJets { xd, xdd, u: uj, zeta: zj })
}

/// Rates of the still-water hierarchy for orders `1..=N`.
///
/// Only `X`, the sign of `X'` and `u_1..u_N` are read from `s`; the
/// elevation coefficients are recomputed from the constraint and returned
/// in [`StillRates::zeta`].
pub fn hierarchy_rhs_still(s: &FrontSeriesState, profile: &BottomProfile) -> Result<StillRates> {
    if s.kind != FrontKind::StillWaterFront {
        return domain("still-water rates need a still-water front");
    }
    if s.order < 1 || s.u.len() < s.order + 1 {
        return domain("still-water hierarchy needs order >= 1 and u[0..=N]");
    }
    let dir = if s.xdot < 0.0 { -1.0 } else { 1.0 };
    let mut u = s.u[..=s.order].to_vec();
    u[0] = 0.0;
    let j = still_jets(profile, s.x, dir, &u)?;
    Ok(StillRates {
        xdot: j.xd.0[0],
        xddot: j.xdd.0[0],
        zeta: j.zeta.iter().map(|z| z.0[0]).collect(),
        zeta_dot: j.zeta.iter().map(|z| z.0[1]).collect(),
        u_dot: j.u.iter().map(|z| z.0[1]).collect(),
    })
}

impl FrontSeriesState {
    /// Still-water front at `x0` moving in `direction` with velocity
    /// coefficients `u[1..=N]` (`u[0]` is ignored); `zeta` follows from the
    /// constraint.
    pub fn still(profile: &BottomProfile, x0: f64, direction: f64, u: &[f64]) -> Result<Self> {
        if u.len() < 2 {
            return domain("still-water front needs at least u_1");
        }
        let order = u.len() - 1;
        let xdot = front_speed(profile.eval(x0), direction)?;
        let mut uu = u.to_vec();
        uu[0] = 0.0;
        let mut s = FrontSeriesState {
            kind: FrontKind::StillWaterFront,
            x: x0,
            xdot,
            order,
            u: uu,
            h: vec![0.0; order + 1],
            t: 0.0,
            u_dry: Vec::new(),
        };
        s.h = hierarchy_rhs_still(&s, profile)?.zeta;
        Ok(s)
    }
}

/// Threshold on `|u_1|` taken as a gradient catastrophe.
pub const CATASTROPHE_SLOPE: f64 = 1e10;

#[derive(Debug, Clone)]
pub struct StillTrajectory {
    pub solution: Solution,
    pub direction: f64,
    pub profile: BottomProfile,
}

impl StillTrajectory {
    pub fn state_at(&self, t: f64) -> Result<FrontSeriesState> {
        let y = self.solution.sample(t);
        self.assemble(&y, t)
    }

    pub fn states(&self) -> Result<Vec<FrontSeriesState>> {
        self.solution.t.iter().zip(&self.solution.y).map(|(&t, y)| self.assemble(y, t)).collect()
    }

    fn assemble(&self, y: &[f64], t: f64) -> Result<FrontSeriesState> {
        let mut u = vec![0.0];
        u.extend_from_slice(&y[1..]);
        let mut s = FrontSeriesState::still(&self.profile, y[0], self.direction, &u)?;
        s.t = t;
        Ok(s)
    }
}

/// Integrate the still-water hierarchy. A diverging `u_1` is reported as
/// [`Error::GradientCatastrophe`] at the time it crosses
/// [`CATASTROPHE_SLOPE`]; reaching the shoreline is a domain error.
pub fn integrate_still(s0: &FrontSeriesState, profile: &BottomProfile, t_end: f64, tol: f64) -> Result<StillTrajectory> {
    if s0.kind != FrontKind::StillWaterFront {
        return domain("integrate_still needs a still-water front");
    }
    let dir = if s0.xdot < 0.0 { -1.0 } else { 1.0 };
    let mut y0 = vec![s0.x];
    y0.extend_from_slice(&s0.u[1..=s0.order]);
    let rhs = |_t: f64, y: &[f64], d: &mut [f64]| {
        let mut u = vec![0.0];
        u.extend_from_slice(&y[1..]);
        match still_jets(profile, y[0], dir, &u) {
            Ok(j) => {
                d[0] = j.xd.0[0];
                for n in 1..u.len() {
                    d[n] = j.u[n].0[1];
                }
            }
            Err(_) => d.iter_mut().for_each(|v| *v = f64::NAN),
        }
    };
    let event = |_t: f64, y: &[f64]| (CATASTROPHE_SLOPE - y[1].abs()).min(-profile.eval(y[0]));
    let sol = ode::solve_with_event(rhs, s0.t, &y0, t_end, OdeOptions::with_tol(tol), event)?;
    match sol.termination {
        Termination::Reached => Ok(StillTrajectory { solution: sol, direction: dir, profile: profile.clone() }),
        Termination::Event | Termination::StepUnderflow => {
            let y = sol.last();
            if -profile.eval(y[0]) <= 1e-12 {
                Err(Error::Domain(format!("front reached the shoreline at t = {}", sol.last_t())))
            } else {
                Err(Error::GradientCatastrophe { at: sol.last_t() })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quiescent_state_is_stationary() {
        let p = BottomProfile::Flat { depth: 1.0 };
        let s = FrontSeriesState::still(&p, 0.0, 1.0, &[0.0; 5]).unwrap();
        let r = hierarchy_rhs_still(&s, &p).unwrap();
        assert!(r.u_dot.iter().chain(&r.zeta_dot).chain(&r.zeta).all(|v| *v == 0.0));
        assert_eq!(r.xdot, 1.0);
    }

    #[test]
    fn first_order_is_the_riccati_pair() {
        let p = BottomProfile::Polynomial(vec![-1.2, 0.3, 0.4, -0.1]);
        for (x, u1) in [(0.1, -0.3), (-0.4, 0.7), (0.5, 1.3)] {
            let s = FrontSeriesState::still(&p, x, 1.0, &[0.0, u1]).unwrap();
            let r = hierarchy_rhs_still(&s, &p).unwrap();
            let xd = (-p.eval(x)).sqrt();
            let xdd = -0.5 * p.slope(x);
            let z1 = s.h[1];
            assert!((z1 - xd * u1).abs() < 1e-15);
            let ru = r.u_dot[1] + 1.5 * u1 * u1 + 2.5 * xdd / xd * u1;
            let rz = r.zeta_dot[1] + 1.5 / xd * z1 * z1 + 1.5 * xdd / xd * z1;
            assert!(ru.abs() < 1e-14 && rz.abs() < 1e-14, "{ru} {rz}");
        }
    }

    #[test]
    fn wrong_kind_rejected() {
        let p = BottomProfile::parabolic();
        let s = FrontSeriesState::vacuum(1.0, 2, &[0.0], &[0.0, -2.0, -1.0]).unwrap();
        assert!(hierarchy_rhs_still(&s, &p).is_err());
    }
}
