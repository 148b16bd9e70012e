//! Exact parabolic solutions over the bottom `b = x^2 - 1`:
//!
//! `eta = mu + gamma (x - beta)^2`, `u = delta + alpha (x - beta)`.
//!
//! The curvature pair `(alpha, gamma)` maps to a one-degree-of-freedom
//! mechanical system `q = gamma^{-1/3}`, `p = alpha q` with potential
//! `U(q) = q^2 - 2/q`. The centre of mass `(beta, delta)` is a harmonic
//! oscillator of period `pi sqrt 2`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::elliptic::{ellint_f, ellint_pi};
use crate::error::{domain, Error, Result};
use crate::hierarchy::{FrontKind, FrontSeriesState};
use crate::numerics::ode::{self, OdeOptions, Solution, Termination};
use crate::numerics::quad::{integrate, quad, quad_to_infinity, QuadOptions};

/// Curvature magnitude at which an integration is declared divergent.
pub const BLOWUP_GAMMA: f64 = 1e12;
const FIXED_POINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolicState {
    pub alpha: f64,
    pub gamma: f64,
    pub mu: f64,
    pub beta: f64,
    pub delta: f64,
    pub t: f64,
}

impl ParabolicState {
    pub fn new(alpha: f64, gamma: f64, mu: f64, beta: f64, delta: f64) -> Self {
        Self { alpha, gamma, mu, beta, delta, t: 0.0 }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.alpha, self.gamma, self.mu, self.beta, self.delta]
    }

    pub fn from_slice(y: &[f64], t: f64) -> Self {
        Self { alpha: y[0], gamma: y[1], mu: y[2], beta: y[3], delta: y[4], t }
    }
}

/// `(alpha', gamma', mu', beta', delta')`.
pub fn parabolic_rhs(s: &ParabolicState) -> [f64; 5] {
    let a = s.alpha;
    [-a * a - 2.0 * s.gamma - 2.0, -3.0 * a * s.gamma, -a * s.mu, s.delta, -2.0 * s.beta]
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma == 0.0 || !gamma.is_finite() {
        return domain(format!("curvature must be nonzero and finite, got {gamma}"));
    }
    Ok(())
}

/// Conserved quantity `(alpha^2 - 4 gamma + 2) / (2 gamma^{2/3})`.
pub fn invariant_h(alpha: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let g23 = gamma.cbrt().powi(2);
    Ok((alpha * alpha - 4.0 * gamma + 2.0) / (2.0 * g23))
}

/// Potential of the canonical system.
pub fn potential(q: f64) -> f64 {
    q * q - 2.0 / q
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPoint {
    pub q: f64,
    pub p: f64,
    pub e: f64,
}

pub fn to_canonical(alpha: f64, gamma: f64) -> Result<CanonicalPoint> {
    check_gamma(gamma)?;
    let q = 1.0 / gamma.cbrt();
    let p = alpha * q;
    Ok(CanonicalPoint { q, p, e: 0.5 * p * p + potential(q) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    FixedPoint,
    Sloshing { period: f64, energy: f64 },
    BlowUp { time: f64 },
}

pub fn classify(gamma0: f64, alpha0: f64) -> Result<Regime> {
    check_gamma(gamma0)?;
    if gamma0 < 0.0 {
        if (gamma0 + 1.0).abs() <= FIXED_POINT_TOL && alpha0.abs() <= FIXED_POINT_TOL {
            return Ok(Regime::FixedPoint);
        }
        let energy = invariant_h(alpha0, gamma0)?;
        Ok(Regime::Sloshing { period: period_of_energy(energy)?, energy })
    } else {
        Ok(Regime::BlowUp { time: blowup_time_general(alpha0, gamma0)? })
    }
}

/// Roots `(sigma_+, sigma_-)` of `2 gamma0 s^2 + s + 1`, real when `gamma0 < 1/8`.
pub fn sigma_roots(gamma0: f64) -> Result<(f64, f64)> {
    let disc = 1.0 - 8.0 * gamma0;
    if disc < 0.0 {
        return domain(format!("complex roots for gamma0 = {gamma0}"));
    }
    let r = disc.sqrt();
    Ok(((-1.0 + r) / (4.0 * gamma0), (-1.0 - r) / (4.0 * gamma0)))
}

fn check_sloshing_gamma0(gamma0: f64) -> Result<()> {
    if !(gamma0 > -1.0 && gamma0 < 0.0) {
        return domain(format!("gamma0 = {gamma0} outside (-1, 0)"));
    }
    Ok(())
}

/// Elliptic-integral time from `sigma = 1` to `sigma` on the first half of a
/// sloshing orbit; `sigma` ranges over `[1, sigma_-]`.
fn sloshing_half_time(gamma0: f64, sigma: f64) -> Result<f64> {
    let (sp, sm) = sigma_roots(gamma0)?;
    let k2 = (sm - 1.0) / (sm - sp);
    let k = k2.sqrt();
    let n = sp * k2;
    // tan^2 phi = (sigma - 1)(sigma_- - sigma_+) / ((sigma_- - sigma)(1 - sigma_+))
    let num = ((sigma - 1.0) * (sm - sp)).max(0.0).sqrt();
    let den = ((sm - sigma) * (1.0 - sp)).max(0.0).sqrt();
    let phi = num.atan2(den);
    let pre = 1.0 / (gamma0.abs().sqrt() * (sm - sp).sqrt());
    Ok(pre * (ellint_f(phi, k)? / sp + (1.0 - 1.0 / sp) * ellint_pi(n, phi, k)?))
}

/// Curvature period `T'` for an orbit started at rest with `gamma0 in (-1, 0)`.
pub fn period(gamma0: f64) -> Result<f64> {
    check_sloshing_gamma0(gamma0)?;
    Ok(2.0 * sloshing_half_time(gamma0, sigma_roots(gamma0)?.1)?)
}

/// Energy of the orbit started at rest with curvature `gamma0`.
pub fn energy_at_rest(gamma0: f64) -> Result<f64> {
    invariant_h(0.0, gamma0)
}

/// The three real roots of `q^3 - E q - 2 = 0` for `E >= 3`, ascending.
pub fn turning_points(energy: f64) -> Result<[f64; 3]> {
    if !(energy >= 3.0) {
        return domain(format!("energy {energy} below the equilibrium level 3"));
    }
    let r = 2.0 * (energy / 3.0).sqrt();
    let th = ((3.0 / energy).powf(1.5)).min(1.0).acos() / 3.0;
    let mut q = [r * th.cos(), r * (th - 2.0 * PI / 3.0).cos(), r * (th - 4.0 * PI / 3.0).cos()];
    q.sort_by(|a, b| a.total_cmp(b));
    Ok(q)
}

/// Period of the closed orbit with energy `E > 3`, evaluated through the
/// rest curvature `q_-^{-3} in (-1, 0)` of the same orbit.
pub fn period_of_energy(energy: f64) -> Result<f64> {
    let [qm, _, _] = turning_points(energy)?;
    if energy - 3.0 <= 1e-14 {
        return Ok(PI * (2.0f64 / 3.0).sqrt());
    }
    period(1.0 / (qm * qm * qm))
}

/// `T' = 2 int dq / sqrt(2 (E - U(q)))` between the negative turning points,
/// with `q = q_c - r cos(theta)` absorbing both endpoint singularities.
pub fn period_quadrature(gamma0: f64) -> Result<f64> {
    check_sloshing_gamma0(gamma0)?;
    let [qm, qp, q3] = turning_points(energy_at_rest(gamma0)?)?;
    let (qc, r) = (0.5 * (qm + qp), 0.5 * (qp - qm));
    let f = |th: f64| {
        let q = qc - r * th.cos();
        1.0 / (2.0 * (q - q3) / q).sqrt()
    };
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-14, ..QuadOptions::default() };
    Ok(2.0 * integrate(f, 0.0, PI, opts)?.value)
}

/// Blow-up time from rest with `gamma0 > 0`:
/// `int_1^inf ds / (s sqrt(2 (s - 1)(2 gamma0 s^2 + s + 1)))`, evaluated with
/// `s = 1 + v^2`.
pub fn blowup_time(gamma0: f64) -> Result<f64> {
    if !(gamma0 > 0.0 && gamma0.is_finite()) {
        return domain(format!("blow-up time needs gamma0 > 0, got {gamma0}"));
    }
    // split near the scale where the curvature term dominates
    let v_split = gamma0.powf(-0.25).min(1.0);
    let f = |v: f64| {
        let s = 1.0 + v * v;
        SQRT_2 / (s * (2.0 * gamma0 * s * s + s + 1.0).sqrt())
    };
    Ok(quad(f, 0.0, v_split)? + quad_to_infinity(f, v_split)?)
}

/// Closed form of [`blowup_time`] for `0 < gamma0 < 1/8`, where both roots
/// are real and negative.
pub fn blowup_time_elliptic(gamma0: f64) -> Result<f64> {
    if !(gamma0 > 0.0 && gamma0 < 0.125) {
        return domain(format!("real-root blow-up form needs gamma0 in (0, 1/8), got {gamma0}"));
    }
    let (sp, sm) = sigma_roots(gamma0)?;
    let k = ((sp - sm) / (1.0 - sm)).sqrt();
    let pre = 1.0 / (gamma0.sqrt() * (1.0 - sm).sqrt());
    Ok(pre * (ellint_f(FRAC_PI_2, k)? / sp + (1.0 - 1.0 / sp) * ellint_pi(sp, FRAC_PI_2, k)?))
}

/// Time for `q` to reach `0+` from `(alpha0, gamma0)` with `gamma0 > 0`.
pub fn blowup_time_general(alpha0: f64, gamma0: f64) -> Result<f64> {
    if !(gamma0 > 0.0) {
        return domain(format!("blow-up needs gamma0 > 0, got {gamma0}"));
    }
    if alpha0 == 0.0 {
        return blowup_time(gamma0);
    }
    let c = to_canonical(alpha0, gamma0)?;
    // outer turning point: q^3 - E q - 2 = 0 with q > q0
    let qmax = crate::numerics::roots::bracketed_root(
        |q| q * q * q - c.e * q - 2.0,
        c.q,
        c.q.max(1.0) * 2.0 + c.e.abs().sqrt() * 2.0,
        1e-15,
    )?;
    // q = qmax (1 - w^2), and E - U(q) = qmax w^2 (qmax + q + 2/(q qmax))
    // since E = U(qmax); the factor w cancels against dq = -2 qmax w dw
    let integrand = |w: f64| {
        let q = qmax * (1.0 - w * w);
        if q <= 0.0 {
            return 0.0;
        }
        2.0 * qmax / (2.0 * qmax * (qmax + q + 2.0 / (q * qmax))).sqrt()
    };
    let w0 = (1.0 - c.q / qmax).max(0.0).sqrt();
    let to_zero = quad(integrand, 0.0, 1.0)?;
    let from_start = quad(integrand, 0.0, w0)?;
    Ok(if c.p < 0.0 { to_zero - from_start } else { to_zero + from_start })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Time at which `(gamma/gamma0)^{1/3}` reaches `sigma` for an orbit from
/// rest. `Plus` is the first passage; `Minus` is the return passage for
/// sloshing orbits and the time-reversed passage for blow-up orbits.
pub fn time_of_sigma(gamma0: f64, sigma: f64, branch: Branch) -> Result<f64> {
    if gamma0 < 0.0 {
        check_sloshing_gamma0(gamma0)?;
        let sm = sigma_roots(gamma0)?.1;
        if !(sigma >= 1.0 && sigma <= sm * (1.0 + 1e-14)) {
            return domain(format!("sigma = {sigma} outside the orbit range [1, {sm}]"));
        }
        let t = sloshing_half_time(gamma0, sigma.min(sm))?;
        Ok(match branch {
            Branch::Plus => t,
            Branch::Minus => 2.0 * sloshing_half_time(gamma0, sm)? - t,
        })
    } else if gamma0 > 0.0 {
        if !(sigma >= 1.0 && sigma.is_finite()) {
            return domain(format!("sigma = {sigma} outside [1, inf)"));
        }
        let f = |v: f64| {
            let s = 1.0 + v * v;
            SQRT_2 / (s * (2.0 * gamma0 * s * s + s + 1.0).sqrt())
        };
        let t = quad(f, 0.0, (sigma - 1.0).sqrt())?;
        Ok(match branch {
            Branch::Plus => t,
            Branch::Minus => -t,
        })
    } else {
        domain("curvature must be nonzero")
    }
}

/// Pointwise `(eta, u)` of the parabolic ansatz, unclamped.
pub fn reconstruct_fields(s: &ParabolicState, x: f64) -> (f64, f64) {
    let d = x - s.beta;
    (s.mu + s.gamma * d * d, s.delta + s.alpha * d)
}

/// Points where `eta` vanishes, `beta -+ sqrt(-mu/gamma)`, or `None` when the
/// surface does not meet the bottom.
pub fn vacuum_points(s: &ParabolicState) -> Option<(f64, f64)> {
    if s.gamma == 0.0 {
        return None;
    }
    let r2 = -s.mu / s.gamma;
    if !(r2 > 0.0) || (s.gamma > 0.0 && s.mu >= 0.0) {
        return None;
    }
    let r = r2.sqrt();
    Some((s.beta - r, s.beta + r))
}

/// Vacuum-point series at the right edge of a sloshing drop, order 2.
pub fn selfsim_to_series(s: &ParabolicState) -> Result<FrontSeriesState> {
    selfsim_to_series_order(s, 2)
}

/// As [`selfsim_to_series`] padded with exact zeros up to `order`.
pub fn selfsim_to_series_order(s: &ParabolicState, order: usize) -> Result<FrontSeriesState> {
    if !(s.gamma < 0.0 && s.mu > 0.0) {
        return domain(format!("no physical vacuum point for gamma = {}, mu = {}", s.gamma, s.mu));
    }
    let order = order.max(2);
    let d = (s.mu / s.gamma.abs()).sqrt();
    let mut u = vec![0.0; order + 1];
    let mut h = vec![0.0; order + 1];
    u[0] = s.delta + s.alpha * d;
    u[1] = s.alpha;
    h[1] = -2.0 * (s.gamma.abs() * s.mu).sqrt();
    h[2] = s.gamma;
    let u_dry = u.clone();
    Ok(FrontSeriesState { kind: FrontKind::PhysicalVacuum, x: s.beta + d, xdot: u[0], order, u, h, t: s.t, u_dry })
}

/// Dense trajectory of the five-field system.
#[derive(Debug, Clone)]
pub struct ParabolicTrajectory {
    pub solution: Solution,
}

impl ParabolicTrajectory {
    pub fn state_at(&self, t: f64) -> ParabolicState {
        ParabolicState::from_slice(&self.solution.sample(t), t)
    }

    pub fn states(&self) -> impl Iterator<Item = ParabolicState> + '_ {
        self.solution.t.iter().zip(&self.solution.y).map(|(&t, y)| ParabolicState::from_slice(y, t))
    }

    pub fn last(&self) -> ParabolicState {
        ParabolicState::from_slice(self.solution.last(), self.solution.last_t())
    }

    /// Largest deviation of `H` from its initial value over accepted steps.
    pub fn h_drift(&self) -> f64 {
        let mut it = self.states();
        let s0 = it.next().expect("trajectory has an initial point");
        let h0 = invariant_h(s0.alpha, s0.gamma).unwrap_or(f64::NAN);
        it.map(|s| (invariant_h(s.alpha, s.gamma).unwrap_or(f64::NAN) - h0).abs()).fold(0.0, f64::max)
    }
}

fn rhs_slice(y: &[f64], d: &mut [f64]) {
    let r = parabolic_rhs(&ParabolicState::from_slice(y, 0.0));
    d.copy_from_slice(&r);
}

/// Integrate from `s0` to `t_end` with relative/absolute tolerance `tol`.
/// Reaching `|gamma| > 1e12` or step-size underflow before `t_end` yields
/// [`Error::BlowUp`] with the extrapolated divergence time.
pub fn integrate_parabolic(s0: &ParabolicState, t_end: f64, tol: f64) -> Result<ParabolicTrajectory> {
    check_gamma(s0.gamma)?;
    let sign0 = s0.gamma.signum();
    let opts = OdeOptions::with_tol(tol);
    let sol = ode::solve_with_event(
        |_, y, d| rhs_slice(y, d),
        s0.t,
        &s0.to_array(),
        t_end,
        opts,
        |_, y| BLOWUP_GAMMA - y[1].abs(),
    )?;
    if let Some((i, _)) = sol.y.iter().enumerate().find(|(_, y)| y[1].signum() != sign0) {
        return Err(Error::Integrator { t: sol.t[i], reason: "curvature changed sign".into() });
    }
    match sol.termination {
        Termination::Reached => Ok(ParabolicTrajectory { solution: sol }),
        Termination::Event | Termination::StepUnderflow => {
            let g = sol.last()[1].abs();
            Err(Error::BlowUp { time: sol.last_t() + 1.0 / (3.0 * g.sqrt()) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_examples() {
        assert_eq!(parabolic_rhs(&ParabolicState::new(0.0, -1.0, 1.0, 0.0, 0.0)), [0.0; 5]);
        assert_eq!(parabolic_rhs(&ParabolicState::new(0.0, -7.0, 1.0, -1.0, 0.0)), [12.0, 0.0, 0.0, 0.0, 2.0]);
        assert_eq!(parabolic_rhs(&ParabolicState::new(1.0, 2.0, 1.0, 0.0, 0.0)), [-7.0, -6.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn invariant_examples() {
        assert!((invariant_h(0.0, -1.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((invariant_h(0.0, 1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(invariant_h(0.0, 0.0).is_err());
    }

    #[test]
    fn canonical_examples() {
        let c = to_canonical(0.0, -1.0).unwrap();
        assert_eq!((c.q, c.p), (-1.0, 0.0));
        assert!((c.e - 3.0).abs() < 1e-15);
        let c = to_canonical(0.0, 1.0).unwrap();
        assert_eq!((c.q, c.p, c.e), (1.0, 0.0, -1.0));
        assert!(to_canonical(1.0, 0.0).is_err());
    }

    #[test]
    fn classify_examples() {
        assert!(matches!(classify(-0.5, 0.0).unwrap(), Regime::Sloshing { .. }));
        assert!(matches!(classify(2.0, 0.0).unwrap(), Regime::BlowUp { .. }));
        assert_eq!(classify(-1.0, 0.0).unwrap(), Regime::FixedPoint);
        assert!(classify(0.0, 0.0).is_err());
    }

    #[test]
    fn period_domain() {
        assert!(period(-1.0).is_err());
        assert!(period(0.0).is_err());
        assert!(period(0.3).is_err());
    }

    #[test]
    fn field_examples() {
        let s = ParabolicState::new(0.0, -1.0, 1.0, 0.0, 0.0);
        assert_eq!(reconstruct_fields(&s, 0.0), (1.0, 0.0));
        assert_eq!(reconstruct_fields(&s, 1.0), (0.0, 0.0));
        let s = ParabolicState::new(0.0, -7.0, 1.0, -1.0, 0.0);
        assert_eq!(reconstruct_fields(&s, -1.0), (1.0, 0.0));
    }

    #[test]
    fn vacuum_point_examples() {
        assert_eq!(vacuum_points(&ParabolicState::new(0.0, -1.0, 1.0, 0.0, 0.0)), Some((-1.0, 1.0)));
        let (a, b) = vacuum_points(&ParabolicState::new(0.0, -7.0, 1.0, -1.0, 0.0)).unwrap();
        let r = 1.0 / 7f64.sqrt();
        assert!((a - (-1.0 - r)).abs() < 1e-15 && (b - (-1.0 + r)).abs() < 1e-15);
        assert_eq!(vacuum_points(&ParabolicState::new(0.0, -4.0, 1.0, 0.5, 0.0)), Some((0.0, 1.0)));
        assert_eq!(vacuum_points(&ParabolicState::new(0.0, 1.0, 1.0, 0.0, 0.0)), None);
    }

    #[test]
    fn series_examples() {
        let f = selfsim_to_series(&ParabolicState::new(0.0, -1.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!((f.x, f.h[1], f.h[2], f.u[0], f.u[1]), (1.0, -2.0, -1.0, 0.0, 0.0));
        let f = selfsim_to_series(&ParabolicState::new(0.0, -4.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!((f.x, f.h[1], f.h[2], f.u[0], f.u[1]), (0.5, -4.0, -4.0, 0.0, 0.0));
        assert!(selfsim_to_series(&ParabolicState::new(0.0, 1.0, 1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn time_of_sigma_start() {
        assert_eq!(time_of_sigma(-0.5, 1.0, Branch::Plus).unwrap(), 0.0);
        assert_eq!(time_of_sigma(2.0, 1.0, Branch::Plus).unwrap(), 0.0);
        assert!(time_of_sigma(-0.5, 0.9, Branch::Plus).is_err());
        assert!(time_of_sigma(-0.5, 10.0, Branch::Plus).is_err());
    }

    #[test]
    fn fixed_point_is_stationary() {
        let s0 = ParabolicState::new(0.0, -1.0, 1.0, 0.0, 0.0);
        let tr = integrate_parabolic(&s0, 7.3, 1e-12).unwrap();
        let s = tr.last();
        assert_eq!((s.alpha, s.gamma, s.mu), (0.0, -1.0, 1.0));
    }
}
