//! Vacuum points: the front is where the layer thickness vanishes.
//!
//! With `X' = u_0` the wet-side rows read
//!
//! * `u_0' = -b_1 - eta_1`
//! * `eta_n' = -(n+1) sum_{k=1}^{n} u_k eta_{n+1-k}`
//! * `u_n' = -(n+1)(eta_{n+1} + b_{n+1}) - sum_{k=1}^{n} k u_k u_{n+1-k}`
//!
//! closed at order `N` by `eta_{N+1} = 0`. Physical vacua also carry
//! dry-side velocity coefficients `u'_n` obeying
//! `u'_n' = -(n+1) b_{n+1} - sum_{k=1}^{n} k u'_k u'_{n+1-k}`.

use crate::bathymetry::BottomProfile;
use crate::error::{domain, Error, Result};
use crate::numerics::ode::{self, OdeOptions, Solution, Termination};
use crate::numerics::quad::quad;

use super::{FrontKind, FrontSeriesState};

/// Coefficient magnitude treated as divergence.
pub const DIVERGENCE: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct VacuumRates {
    pub xdot: f64,
    pub xddot: f64,
    pub u_dot: Vec<f64>,
    pub h_dot: Vec<f64>,
    pub u_dry_dot: Vec<f64>,
}

fn wet_rates(b: &[f64], u: &[f64], eta: &[f64], u_dot: &mut [f64], h_dot: &mut [f64]) {
    let n_ord = u.len() - 1;
    let e = |k: usize| if k <= n_ord { eta[k] } else { 0.0 };
    u_dot[0] = -b[1] - eta[1];
    h_dot[0] = 0.0;
    for n in 1..=n_ord {
        let mut se = 0.0;
        let mut su = 0.0;
        for k in 1..=n {
            se += u[k] * eta[n + 1 - k];
            su += k as f64 * u[k] * u[n + 1 - k];
        }
        h_dot[n] = -((n + 1) as f64) * se;
        u_dot[n] = -((n + 1) as f64) * (e(n + 1) + b[n + 1]) - su;
    }
}

fn dry_rates(b: &[f64], ud: &[f64], out: &mut [f64]) {
    let n_ord = ud.len() - 1;
    out[0] = -b[1];
    for n in 1..=n_ord {
        let mut su = 0.0;
        for k in 1..=n {
            su += k as f64 * ud[k] * ud[n + 1 - k];
        }
        out[n] = -((n + 1) as f64) * b[n + 1] - su;
    }
}

pub fn hierarchy_rhs_vacuum(s: &FrontSeriesState, profile: &BottomProfile) -> Result<VacuumRates> {
    if s.kind == FrontKind::StillWaterFront {
        return domain("vacuum rates need a vacuum front");
    }
    let n = s.order;
    if n < 1 || s.u.len() < n + 1 || s.h.len() < n + 1 {
        return domain("vacuum hierarchy needs order >= 1 with u[0..=N] and eta[0..=N]");
    }
    let b = profile.taylor_coeffs(s.x, n + 1);
    let mut eta = s.h[..=n].to_vec();
    eta[0] = 0.0;
    let mut u_dot = vec![0.0; n + 1];
    let mut h_dot = vec![0.0; n + 1];
    wet_rates(&b, &s.u[..=n], &eta, &mut u_dot, &mut h_dot);
    let mut u_dry_dot = Vec::new();
    if s.kind == FrontKind::PhysicalVacuum && s.u_dry.len() > n {
        u_dry_dot = vec![0.0; n + 1];
        dry_rates(&b, &s.u_dry[..=n], &mut u_dry_dot);
    }
    Ok(VacuumRates { xdot: s.u[0], xddot: u_dot[0], u_dot, h_dot, u_dry_dot })
}

/// Layout of the packed state `[X, u_0..u_N, eta_1..eta_N, u'_0..u'_N]`.
#[derive(Debug, Clone, Copy)]
struct Layout {
    order: usize,
    dry: bool,
}

impl Layout {
    fn len(&self) -> usize {
        1 + (self.order + 1) + self.order + if self.dry { self.order + 1 } else { 0 }
    }

    fn pack(&self, s: &FrontSeriesState) -> Vec<f64> {
        let n = self.order;
        let mut y = Vec::with_capacity(self.len());
        y.push(s.x);
        y.extend_from_slice(&s.u[..=n]);
        y.extend_from_slice(&s.h[1..=n]);
        if self.dry {
            y.extend_from_slice(&s.u_dry[..=n]);
        }
        y
    }

    fn unpack(&self, y: &[f64], kind: FrontKind, t: f64) -> FrontSeriesState {
        let n = self.order;
        let u = y[1..n + 2].to_vec();
        let mut h = vec![0.0];
        h.extend_from_slice(&y[n + 2..2 * n + 2]);
        let u_dry = if self.dry { y[2 * n + 2..3 * n + 3].to_vec() } else { Vec::new() };
        FrontSeriesState { kind, x: y[0], xdot: u[0], order: n, u, h, t, u_dry }
    }
}

#[derive(Debug, Clone)]
pub struct VacuumTrajectory {
    pub solution: Solution,
    pub kind: FrontKind,
    layout_order: usize,
    dry: bool,
}

impl VacuumTrajectory {
    fn layout(&self) -> Layout {
        Layout { order: self.layout_order, dry: self.dry }
    }

    pub fn state_at(&self, t: f64) -> FrontSeriesState {
        self.layout().unpack(&self.solution.sample(t), self.kind, t)
    }

    pub fn states(&self) -> Vec<FrontSeriesState> {
        let l = self.layout();
        self.solution.t.iter().zip(&self.solution.y).map(|(&t, y)| l.unpack(y, self.kind, t)).collect()
    }

    /// Packed derivatives at each accepted step, unpacked like the states.
    pub fn rates(&self) -> Vec<FrontSeriesState> {
        let l = self.layout();
        self.solution.t.iter().zip(&self.solution.dy).map(|(&t, y)| l.unpack(y, self.kind, t)).collect()
    }
}

/// Integrate a vacuum-point hierarchy. Divergence of any coefficient past
/// [`DIVERGENCE`] is reported as [`Error::BlowUp`].
pub fn integrate_vacuum(s0: &FrontSeriesState, profile: &BottomProfile, t_end: f64, tol: f64) -> Result<VacuumTrajectory> {
    if s0.kind == FrontKind::StillWaterFront {
        return domain("integrate_vacuum needs a vacuum front");
    }
    let n = s0.order;
    let dry = s0.kind == FrontKind::PhysicalVacuum && s0.u_dry.len() > n;
    let layout = Layout { order: n, dry };
    let y0 = layout.pack(s0);
    let rhs = |_t: f64, y: &[f64], d: &mut [f64]| {
        let b = profile.taylor_coeffs(y[0], n + 1);
        let u = &y[1..n + 2];
        let mut eta = vec![0.0];
        eta.extend_from_slice(&y[n + 2..2 * n + 2]);
        let mut ud = vec![0.0; n + 1];
        let mut hd = vec![0.0; n + 1];
        wet_rates(&b, u, &eta, &mut ud, &mut hd);
        d[0] = u[0];
        d[1..n + 2].copy_from_slice(&ud);
        d[n + 2..2 * n + 2].copy_from_slice(&hd[1..]);
        if dry {
            dry_rates(&b, &y[2 * n + 2..3 * n + 3], &mut d[2 * n + 2..3 * n + 3]);
        }
    };
    let event = |_t: f64, y: &[f64]| DIVERGENCE - y[1..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sol = ode::solve_with_event(rhs, s0.t, &y0, t_end, OdeOptions::with_tol(tol), event)?;
    match sol.termination {
        Termination::Reached => Ok(VacuumTrajectory { solution: sol, kind: s0.kind, layout_order: n, dry }),
        _ => Err(Error::BlowUp { time: sol.last_t() }),
    }
}

/// Path of a front obeying `X'' + b_x(X) = 0`.
#[derive(Debug, Clone)]
pub struct FrontPath {
    profile: BottomProfile,
    x0: f64,
    v0: f64,
    numeric: Option<Solution>,
}

impl FrontPath {
    /// Path from `(x0, v0)`; bottoms above quadratic degree are integrated
    /// numerically on `[0, t_end]`.
    pub fn nonphysical(profile: &BottomProfile, x0: f64, v0: f64, t_end: f64) -> Result<Self> {
        let numeric = if profile.degree() > 2 {
            let p = profile.clone();
            let opts = OdeOptions { rtol: 1e-13, atol: 1e-14, h_max: 0.01, ..OdeOptions::default() };
            Some(ode::solve(
                move |_, y, d| {
                    d[0] = y[1];
                    d[1] = -p.slope(y[0]);
                },
                0.0,
                &[x0, v0],
                t_end,
                opts,
            )?)
        } else {
            None
        };
        Ok(Self { profile: profile.clone(), x0, v0, numeric })
    }

    /// `(X, X')` at time `t`.
    pub fn state(&self, t: f64) -> (f64, f64) {
        if let Some(sol) = &self.numeric {
            let y = sol.sample(t);
            return (y[0], y[1]);
        }
        let c = self.profile.coefficients();
        let a1 = c.get(1).copied().unwrap_or(0.0);
        let a2 = c.get(2).copied().unwrap_or(0.0);
        let (x0, v0) = (self.x0, self.v0);
        if a2 == 0.0 {
            return (x0 + v0 * t - 0.5 * a1 * t * t, v0 - a1 * t);
        }
        let xc = -a1 / (2.0 * a2);
        if a2 > 0.0 {
            let w = (2.0 * a2).sqrt();
            let (s, co) = (w * t).sin_cos();
            (xc + (x0 - xc) * co + v0 / w * s, -(x0 - xc) * w * s + v0 * co)
        } else {
            let l = (-2.0 * a2).sqrt();
            let (s, co) = ((l * t).sinh(), (l * t).cosh());
            (xc + (x0 - xc) * co + v0 / l * s, (x0 - xc) * l * s + v0 * co)
        }
    }

    pub fn position(&self, t: f64) -> f64 {
        self.state(t).0
    }

    /// `b_2(t) = b_xx(X(t)) / 2`.
    pub fn b2(&self, t: f64) -> f64 {
        self.profile.taylor_coeffs(self.position(t), 2)[2]
    }

    pub fn energy(&self, t: f64) -> f64 {
        let (x, v) = self.state(t);
        0.5 * v * v + self.profile.eval(x)
    }

    pub fn numeric_solution(&self) -> Option<&Solution> {
        self.numeric.as_ref()
    }
}

/// Position at time `t` of a nonphysical vacuum point released at `x0`
/// with speed `v0`.
pub fn nonphysical_front_motion(profile: &BottomProfile, x0: f64, v0: f64, t: f64) -> Result<f64> {
    Ok(FrontPath::nonphysical(profile, x0, v0, t.max(0.0))?.position(t))
}

#[derive(Debug, Clone)]
enum ReducedForm {
    Direct,
    Phi { c: f64 },
}

/// Trajectory of the leading pair `(u_1, eta_2)` at a nonphysical vacuum.
#[derive(Debug, Clone)]
pub struct ReducedTrajectory {
    pub solution: Solution,
    form: ReducedForm,
}

impl ReducedTrajectory {
    /// `(u_1, eta_2)` at `t`.
    pub fn at(&self, t: f64) -> (f64, f64) {
        self.map(&self.solution.sample(t))
    }

    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        self.solution.t.iter().zip(&self.solution.y).map(|(&t, y)| { let (a, b) = self.map(y); (t, a, b) }).collect()
    }

    fn map(&self, y: &[f64]) -> (f64, f64) {
        match self.form {
            ReducedForm::Direct => (y[0], y[1]),
            ReducedForm::Phi { c } => (y[1] / y[0], c / (y[0] * y[0] * y[0])),
        }
    }
}

/// Integrate `u_1' = -u_1^2 - 2 eta_2 - 2 b_2(t)`, `eta_2' = -3 u_1 eta_2`.
pub fn reduced_u1eta2_step<B: Fn(f64) -> f64>(u1: f64, eta2: f64, b2_of_t: B, t_end: f64, tol: f64) -> Result<ReducedTrajectory> {
    let rhs = |t: f64, y: &[f64], d: &mut [f64]| {
        d[0] = -y[0] * y[0] - 2.0 * y[1] - 2.0 * b2_of_t(t);
        d[1] = -3.0 * y[0] * y[1];
    };
    let sol = ode::solve_with_event(rhs, 0.0, &[u1, eta2], t_end, OdeOptions::with_tol(tol), |_, y| DIVERGENCE - y[0].abs())?;
    match sol.termination {
        Termination::Reached => Ok(ReducedTrajectory { solution: sol, form: ReducedForm::Direct }),
        _ => Err(Error::BlowUp { time: sol.last_t() }),
    }
}

/// Same system through `u_1 = phi'/phi`, `eta_2 = C/phi^3`:
/// `phi'' + 2C/phi^2 + 2 b_2 phi = 0` with `phi(0) = 1`.
pub fn reduced_phi_form<B: Fn(f64) -> f64>(u1: f64, eta2: f64, b2_of_t: B, t_end: f64, tol: f64) -> Result<ReducedTrajectory> {
    let c = eta2;
    let rhs = |t: f64, y: &[f64], d: &mut [f64]| {
        d[0] = y[1];
        d[1] = -2.0 * c / (y[0] * y[0]) - 2.0 * b2_of_t(t) * y[0];
    };
    let sol = ode::solve_with_event(rhs, 0.0, &[1.0, u1], t_end, OdeOptions::with_tol(tol), |_, y| y[0].abs() - 1.0 / DIVERGENCE)?;
    match sol.termination {
        Termination::Reached => Ok(ReducedTrajectory { solution: sol, form: ReducedForm::Phi { c } }),
        _ => Err(Error::BlowUp { time: sol.last_t() }),
    }
}

/// Jump `u'_0 - u_0` across a physical vacuum point and its rate `eta_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityJump {
    pub t: f64,
    pub jump: f64,
    pub rate: f64,
}

/// `[[u]](t) = [[u]](0) + int_0^t eta_1(s) ds` at the requested times
/// (ascending, starting at or after 0).
pub fn velocity_jump_evolution<F: Fn(f64) -> f64>(eta1: F, jump0: f64, times: &[f64]) -> Result<Vec<VelocityJump>> {
    let mut out = Vec::with_capacity(times.len());
    let mut acc = jump0;
    let mut prev = 0.0;
    for &t in times {
        if t < prev {
            return domain("velocity-jump sample times must be ascending and nonnegative");
        }
        acc += quad(&eta1, prev, t)?;
        prev = t;
        out.push(VelocityJump { t, jump: acc, rate: eta1(t) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_examples() {
        let p = BottomProfile::Flat { depth: 1.0 };
        let s = FrontSeriesState::vacuum(0.0, 3, &[0.0, 1.0], &[0.0, 2.0 * 0.0 - 2.0]).unwrap();
        let r = hierarchy_rhs_vacuum(&s, &p).unwrap();
        // eta_1' + 2 u_1 eta_1 = 0 with u_1 = 1, eta_1 = -2
        assert_eq!(r.h_dot[1], 4.0);
        let s = FrontSeriesState::vacuum(0.0, 3, &[0.0, 1.0, 1.0], &[0.0]).unwrap();
        let r = hierarchy_rhs_vacuum(&s, &p).unwrap();
        assert_eq!(r.u_dot[2], -3.0);
    }

    #[test]
    fn harmonic_front_returns() {
        let t = std::f64::consts::PI * std::f64::consts::SQRT_2;
        let x = nonphysical_front_motion(&BottomProfile::parabolic(), 0.5, 0.0, t).unwrap();
        assert!((x - 0.5).abs() < 1e-14);
    }

    #[test]
    fn linear_bottom_uniform_acceleration() {
        let p = BottomProfile::Linear { c0: 0.0, c1: 0.4 };
        let x = nonphysical_front_motion(&p, 1.0, 0.5, 2.0).unwrap();
        assert!((x - (1.0 + 1.0 - 0.2 * 4.0)).abs() < 1e-15);
    }

    #[test]
    fn constant_rate_jump() {
        let j = velocity_jump_evolution(|_| -2.0, 0.0, &[0.25, 0.5]).unwrap();
        assert!((j[1].jump + 1.0).abs() < 1e-15);
        assert_eq!(j[1].rate, -2.0);
    }

    #[test]
    fn reduced_fixed_point() {
        let tr = reduced_u1eta2_step(0.0, -1.0, |_| 1.0, 5.0, 1e-12).unwrap();
        let (u1, e2) = tr.at(5.0);
        assert_eq!((u1, e2), (0.0, -1.0));
    }
}
