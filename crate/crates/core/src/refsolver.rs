//! Finite-volume reference solver for the shallow water equations with
//! bottom topography, used as an oracle for the closed forms.
//!
//! Rusanov fluxes on hydrostatically reconstructed interface states,
//! MUSCL-minmod reconstruction of `(eta, u, zeta)` away from dry cells,
//! SSP-RK2 in time. Walls at both ends are reflective.

use std::io::{self, Write};

use crate::bathymetry::BottomProfile;
use crate::error::{domain, Error, Result};
use crate::selfsim::ParabolicState;
use crate::shoulder::PiecewiseParabolaScenario;

/// Thickness below which a cell is treated as dry.
pub const DRY_TOL: f64 = 1e-10;
pub const DEFAULT_CFL: f64 = 0.45;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Piecewise-constant states, forward Euler.
    First,
    /// Minmod reconstruction, SSP-RK2.
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub x: Vec<f64>,
    pub eta: Vec<f64>,
    /// Discharge `eta u`.
    pub q: Vec<f64>,
    pub b: Vec<f64>,
    pub t: f64,
    pub dx: f64,
}

impl GridState {
    /// Uniform grid on `[a, b]` with fields sampled at cell centres.
    pub fn new<E, U>(profile: &BottomProfile, range: (f64, f64), cells: usize, eta0: E, u0: U) -> Result<Self>
    where
        E: Fn(f64) -> f64,
        U: Fn(f64) -> f64,
    {
        let (a, b) = range;
        if !(b > a) || cells < 4 {
            return domain(format!("grid needs b > a and at least 4 cells, got [{a}, {b}] with {cells}"));
        }
        let dx = (b - a) / cells as f64;
        let x: Vec<f64> = (0..cells).map(|i| a + (i as f64 + 0.5) * dx).collect();
        let eta: Vec<f64> = x.iter().map(|&x| eta0(x).max(0.0)).collect();
        let q = x.iter().zip(&eta).map(|(&x, &h)| if h > DRY_TOL { h * u0(x) } else { 0.0 }).collect();
        let bb = x.iter().map(|&x| profile.eval(x)).collect();
        Ok(Self { x, eta, q, b: bb, t: 0.0, dx })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn velocity(&self) -> Vec<f64> {
        self.eta.iter().zip(&self.q).map(|(&h, &q)| vel(h, q)).collect()
    }

    pub fn mass(&self) -> f64 {
        self.eta.iter().sum::<f64>() * self.dx
    }

    pub fn max_speed(&self) -> f64 {
        self.eta.iter().zip(&self.q).fold(0.0, |m, (&h, &q)| m.max(vel(h, q).abs() + h.max(0.0).sqrt()))
    }

    /// Largest surface slope between neighbouring wet cells.
    pub fn max_surface_slope(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.len() - 1 {
            if self.eta[i] > DRY_TOL && self.eta[i + 1] > DRY_TOL {
                let dz = self.eta[i + 1] + self.b[i + 1] - self.eta[i] - self.b[i];
                m = m.max(dz.abs() / self.dx);
            }
        }
        m
    }

    /// Linear interpolation of `eta` at `x`.
    pub fn eta_at(&self, x: f64) -> f64 {
        interp(&self.x, &self.eta, x)
    }

    pub fn velocity_at(&self, x: f64) -> f64 {
        interp(&self.x, &self.velocity(), x)
    }

    /// Tab-separated snapshot with columns `x, eta, u, b, zeta`.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x\teta\tu\tb\tzeta")?;
        for i in 0..self.len() {
            let u = vel(self.eta[i], self.q[i]);
            writeln!(
                w,
                "{:.16e}\t{:.16e}\t{:.16e}\t{:.16e}\t{:.16e}",
                self.x[i],
                self.eta[i],
                u,
                self.b[i],
                self.eta[i] + self.b[i]
            )?;
        }
        Ok(())
    }
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let dx = xs[1] - xs[0];
    let i = (((x - xs[0]) / dx).floor() as usize).min(n - 2);
    let w = (x - xs[i]) / dx;
    (1.0 - w) * ys[i] + w * ys[i + 1]
}

fn vel(h: f64, q: f64) -> f64 {
    if h > DRY_TOL {
        q / h
    } else {
        0.0
    }
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Interface state `(h, u, b)`.
#[derive(Clone, Copy, Default)]
struct Face {
    h: f64,
    u: f64,
    b: f64,
}

/// Left/right face states of every cell.
fn reconstruct(s: &GridState, order: Order) -> (Vec<Face>, Vec<Face>) {
    let n = s.len();
    let u = s.velocity();
    let mut west = vec![Face::default(); n];
    let mut east = vec![Face::default(); n];
    for i in 0..n {
        let c = Face { h: s.eta[i], u: u[i], b: s.b[i] };
        let dry_near = s.eta[i] <= DRY_TOL
            || (i > 0 && s.eta[i - 1] <= DRY_TOL)
            || (i + 1 < n && s.eta[i + 1] <= DRY_TOL);
        if order == Order::First || dry_near {
            west[i] = c;
            east[i] = c;
            continue;
        }
        // mirrored ghosts at the walls
        let (hl, ul, zl) = if i > 0 { (s.eta[i - 1], u[i - 1], s.eta[i - 1] + s.b[i - 1]) } else { (c.h, -c.u, c.h + c.b) };
        let (hr, ur, zr) =
            if i + 1 < n { (s.eta[i + 1], u[i + 1], s.eta[i + 1] + s.b[i + 1]) } else { (c.h, -c.u, c.h + c.b) };
        let z = c.h + c.b;
        let dh = minmod(c.h - hl, hr - c.h);
        let du = minmod(c.u - ul, ur - c.u);
        let dz = minmod(z - zl, zr - z);
        let hw = c.h - 0.5 * dh;
        let he = c.h + 0.5 * dh;
        west[i] = Face { h: hw, u: c.u - 0.5 * du, b: z - 0.5 * dz - hw };
        east[i] = Face { h: he, u: c.u + 0.5 * du, b: z + 0.5 * dz - he };
    }
    (west, east)
}

fn rusanov(hl: f64, ul: f64, hr: f64, ur: f64) -> (f64, f64, f64) {
    let a = (ul.abs() + hl.sqrt()).max(ur.abs() + hr.sqrt());
    let fl = (hl * ul, hl * ul * ul + 0.5 * hl * hl);
    let fr = (hr * ur, hr * ur * ur + 0.5 * hr * hr);
    (0.5 * (fl.0 + fr.0) - 0.5 * a * (hr - hl), 0.5 * (fl.1 + fr.1) - 0.5 * a * (hr * ur - hl * ul), a)
}

/// Semi-discrete right-hand side and the largest interface wave speed.
fn rhs(s: &GridState, order: Order) -> (Vec<f64>, Vec<f64>, f64) {
    let n = s.len();
    let (west, east) = reconstruct(s, order);
    // flux into the east face of cell i-1 (fm) and west face of cell i (fp)
    let mut fm_mass = vec![0.0; n + 1];
    let mut fm_mom = vec![0.0; n + 1];
    let mut fp_mom = vec![0.0; n + 1];
    let mut amax = 0.0f64;
    for k in 0..=n {
        let l = if k > 0 { east[k - 1] } else { Face { u: -west[0].u, ..west[0] } };
        let r = if k < n { west[k] } else { Face { u: -east[n - 1].u, ..east[n - 1] } };
        let bs = l.b.max(r.b);
        let hl = (l.h + l.b - bs).max(0.0);
        let hr = (r.h + r.b - bs).max(0.0);
        let ul = if hl > DRY_TOL { l.u } else { 0.0 };
        let ur = if hr > DRY_TOL { r.u } else { 0.0 };
        let (fm, fq, a) = rusanov(hl, ul, hr, ur);
        amax = amax.max(a);
        fm_mass[k] = fm;
        fm_mom[k] = fq + 0.5 * (l.h * l.h - hl * hl);
        fp_mom[k] = fq + 0.5 * (r.h * r.h - hr * hr);
    }
    let mut dh = vec![0.0; n];
    let mut dq = vec![0.0; n];
    for i in 0..n {
        let sc = -0.5 * (west[i].h + east[i].h) * (east[i].b - west[i].b);
        dh[i] = -(fm_mass[i + 1] - fm_mass[i]) / s.dx;
        dq[i] = -(fm_mom[i + 1] - fp_mom[i] - sc) / s.dx;
    }
    (dh, dq, amax)
}

fn finish(s: &mut GridState) -> Result<()> {
    for i in 0..s.len() {
        let h = s.eta[i];
        if !h.is_finite() || !s.q[i].is_finite() || h < -1e-12 {
            return Err(Error::SolverFailure { t: s.t, reason: format!("invalid depth {h} at x = {}", s.x[i]) });
        }
        if h <= DRY_TOL {
            s.eta[i] = h.max(0.0);
            s.q[i] = 0.0;
        }
    }
    Ok(())
}

/// Largest stable step for the current state.
pub fn stable_dt(s: &GridState, order: Order, cfl: f64) -> f64 {
    let (_, _, a) = rhs(s, order);
    let a = a.max(s.max_speed());
    if a > 0.0 {
        cfl * s.dx / a
    } else {
        f64::INFINITY
    }
}

/// One time step of at most `dt_max`; returns the step taken.
pub fn step_limited(s: &mut GridState, order: Order, cfl: f64, dt_max: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return domain(format!("cfl = {cfl} outside (0, 1]"));
    }
    let (dh, dq, a) = rhs(s, order);
    let a = a.max(s.max_speed());
    let dt = if a > 0.0 { (cfl * s.dx / a).min(dt_max) } else { dt_max };
    if !dt.is_finite() {
        return Err(Error::SolverFailure { t: s.t, reason: "unbounded time step".into() });
    }
    let n = s.len();
    match order {
        Order::First => {
            for i in 0..n {
                s.eta[i] += dt * dh[i];
                s.q[i] += dt * dq[i];
            }
            s.t += dt;
            finish(s)?;
        }
        Order::Second => {
            let (h0, q0) = (s.eta.clone(), s.q.clone());
            for i in 0..n {
                s.eta[i] += dt * dh[i];
                s.q[i] += dt * dq[i];
            }
            finish(s)?;
            let (dh1, dq1, _) = rhs(s, order);
            for i in 0..n {
                s.eta[i] = 0.5 * (h0[i] + s.eta[i] + dt * dh1[i]);
                s.q[i] = 0.5 * (q0[i] + s.q[i] + dt * dq1[i]);
            }
            s.t += dt;
            finish(s)?;
        }
    }
    Ok(dt)
}

/// One step at the CFL limit.
pub fn step(s: &GridState, cfl: f64) -> Result<GridState> {
    let mut next = s.clone();
    step_limited(&mut next, Order::Second, cfl, f64::INFINITY)?;
    Ok(next)
}

/// Initial value problem for the oracle.
pub struct Scenario {
    pub name: String,
    pub profile: BottomProfile,
    pub range: (f64, f64),
    pub eta0: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub u0: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario").field("name", &self.name).field("profile", &self.profile).field("range", &self.range).finish()
    }
}

impl Scenario {
    pub fn initial_grid(&self, cells: usize) -> Result<GridState> {
        GridState::new(&self.profile, self.range, cells, &self.eta0, &self.u0)
    }

    /// Still water at surface level `level`.
    pub fn lake_at_rest(profile: BottomProfile, level: f64, range: (f64, f64)) -> Self {
        let p = profile.clone();
        Self {
            name: "lake-at-rest".into(),
            profile,
            range,
            eta0: Box::new(move |x| (level - p.eval(x)).max(0.0)),
            u0: Box::new(|_| 0.0),
        }
    }

    /// Dam break at `x_dam` over a flat bottom.
    pub fn dam_break(h_left: f64, h_right: f64, x_dam: f64, range: (f64, f64)) -> Self {
        Self {
            name: "dam-break".into(),
            profile: BottomProfile::Flat { depth: h_left },
            range,
            eta0: Box::new(move |x| if x < x_dam { h_left } else { h_right }),
            u0: Box::new(|_| 0.0),
        }
    }

    /// Parabolic drop `eta = mu + gamma (x - beta)^2` over `b = x^2 - 1`.
    pub fn sloshing_drop(s: &ParabolicState, range: (f64, f64)) -> Self {
        let s = *s;
        Self {
            name: "sloshing-drop".into(),
            profile: BottomProfile::parabolic(),
            range,
            eta0: Box::new(move |x| (s.mu + s.gamma * (x - s.beta).powi(2)).max(0.0)),
            u0: Box::new(move |x| s.delta + s.alpha * (x - s.beta)),
        }
    }

    /// Parabolic core on a flat background of depth `Q`, at rest.
    pub fn piecewise_parabola(sc: &PiecewiseParabolaScenario, range: (f64, f64)) -> Self {
        let sc = *sc;
        Self {
            name: "pw-parabola-flat".into(),
            profile: BottomProfile::Flat { depth: sc.q },
            range,
            eta0: Box::new(move |x| sc.initial_eta(x)),
            u0: Box::new(|_| 0.0),
        }
    }
}

/// Ritter solution of a dam break into a dry bed at `x = 0`.
pub fn ritter_eta(h_left: f64, x: f64, t: f64) -> f64 {
    let c = h_left.sqrt();
    if t <= 0.0 {
        return if x < 0.0 { h_left } else { 0.0 };
    }
    if x <= -c * t {
        h_left
    } else if x >= 2.0 * c * t {
        0.0
    } else {
        (2.0 * c - x / t).powi(2) / 9.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub order: Order,
    pub cfl: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { order: Order::Second, cfl: DEFAULT_CFL }
    }
}

#[derive(Debug, Clone)]
pub struct RunTrajectory {
    pub snapshots: Vec<GridState>,
    /// `(t, max surface slope)` after every step, starting at `t = 0`.
    pub slopes: Vec<(f64, f64)>,
    pub steps: usize,
    /// Set when the run stopped early.
    pub failure: Option<Error>,
}

impl RunTrajectory {
    pub fn last(&self) -> Option<&GridState> {
        self.snapshots.last()
    }
}

/// Run to `t_end`, snapshotting at each of `output_times` (sorted, within
/// `[0, t_end]`). A solver failure ends the run and is kept in `failure`.
pub fn run(sc: &Scenario, t_end: f64, cells: usize, output_times: &[f64], opts: RunOptions) -> Result<RunTrajectory> {
    let mut g = sc.initial_grid(cells)?;
    let mut times: Vec<f64> = output_times.iter().copied().filter(|&t| t >= 0.0 && t <= t_end).collect();
    times.sort_by(f64::total_cmp);
    let mut out = RunTrajectory { snapshots: Vec::new(), slopes: vec![(0.0, g.max_surface_slope())], steps: 0, failure: None };
    let mut next = 0;
    while next < times.len() && times[next] <= 0.0 {
        out.snapshots.push(g.clone());
        next += 1;
    }
    while g.t < t_end {
        let target = times.get(next).copied().unwrap_or(t_end).min(t_end);
        let remaining = target - g.t;
        if let Err(e) = step_limited(&mut g, opts.order, opts.cfl, remaining) {
            out.failure = Some(e);
            break;
        }
        out.steps += 1;
        if (target - g.t).abs() <= 1e-12 * target.abs().max(1.0) {
            g.t = target;
        }
        out.slopes.push((g.t, g.max_surface_slope()));
        while next < times.len() && g.t >= times[next] {
            out.snapshots.push(g.clone());
            next += 1;
        }
    }
    Ok(out)
}

/// First time at which the surface slope exceeds `threshold` times its
/// initial value, interpolated between steps. `None` when never reached.
pub fn detect_gradient_blowup(traj: &RunTrajectory, threshold: f64) -> Option<f64> {
    let s0 = traj.slopes.first()?.1;
    if !(s0 > 0.0) || !(threshold > 0.0) {
        return None;
    }
    let level = threshold * s0;
    traj.slopes.windows(2).find(|w| w[1].1 > level).map(|w| {
        let ((t0, a), (t1, b)) = (w[0], w[1]);
        if b > a {
            t0 + (t1 - t0) * ((level - a) / (b - a)).clamp(0.0, 1.0)
        } else {
            t1
        }
    })
}

/// Blow-up estimates at two resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupEstimate {
    pub coarse: f64,
    pub fine: f64,
}

impl BlowupEstimate {
    /// Relative gap between the two resolutions.
    pub fn spread(&self) -> f64 {
        (self.fine - self.coarse).abs() / self.fine
    }

    /// First-order Richardson extrapolation `2 fine - coarse`; the raw
    /// crossing times approach the continuum value at first order.
    pub fn extrapolated(&self) -> f64 {
        2.0 * self.fine - self.coarse
    }

    /// The steepening is resolved rather than a grid artefact when the
    /// resolutions agree within `tol`.
    pub fn confirmed(&self, tol: f64) -> bool {
        self.spread() <= tol
    }
}

/// Run at `cells` and `2 cells` and locate the slope blow-up in each.
pub fn blowup_two_resolutions(sc: &Scenario, t_end: f64, cells: usize, threshold: f64) -> Result<Option<BlowupEstimate>> {
    let coarse = run(sc, t_end, cells, &[], RunOptions::default())?;
    let fine = run(sc, t_end, 2 * cells, &[], RunOptions::default())?;
    Ok(match (detect_gradient_blowup(&coarse, threshold), detect_gradient_blowup(&fine, threshold)) {
        (Some(c), Some(f)) => Some(BlowupEstimate { coarse: c, fine: f }),
        _ => None,
    })
}

/// Discrete L1 and L-infinity distances of `eta` from `exact` over the grid.
pub fn eta_errors<F: Fn(f64) -> f64>(g: &GridState, exact: F) -> (f64, f64) {
    let mut l1 = 0.0;
    let mut linf = 0.0f64;
    for (x, h) in g.x.iter().zip(&g.eta) {
        let e = (h - exact(*x)).abs();
        l1 += e * g.dx;
        linf = linf.max(e);
    }
    (l1, linf)
}
