//! Simple-wave shoulders over a flat bottom of depth `Q`.
//!
//! A corner in still-water data splits into two characteristics. Between
//! them the backward Riemann invariant keeps its background value
//! `u - 2 sqrt(eta) = -2 sqrt(Q)`, so the forward characteristics are
//! straight lines
//! `x = X_l(t0) + (3 sqrt(N(t0)) - 2 sqrt(Q)) (tau - t0)`, labelled by the
//! time `t0` at which they leave the left boundary carrying `(N, V)`.
//!
//! The piecewise-parabola scenario has a parabolic core
//! `eta = gamma x^2 + mu`, `u = alpha x` that is solved in closed form
//! through `sigma = (gamma/gamma0)^{1/3}`.

use crate::error::{domain, Result};
use crate::numerics::roots::{bracketed_root, golden_min};

/// Default number of chart labels.
pub const CHART_LABELS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseParabolaScenario {
    pub q: f64,
    pub gamma0: f64,
    pub mu0: f64,
}

impl PiecewiseParabolaScenario {
    pub fn new(q: f64, gamma0: f64, mu0: f64) -> Result<Self> {
        let mut bad = Vec::new();
        if !(q > 0.0) {
            bad.push(format!("background depth Q = {q} must be positive"));
        }
        if !(gamma0 < 0.0) {
            bad.push(format!("core curvature gamma0 = {gamma0} must be negative"));
        }
        if !(mu0 > q) {
            bad.push(format!("corner must be wet: mu0 = {mu0} must exceed Q = {q}"));
        }
        if !bad.is_empty() {
            return domain(bad.join("; "));
        }
        Ok(Self { q, gamma0, mu0 })
    }

    /// Corner position `sqrt((mu0 - Q)/|gamma0|)`.
    pub fn x0(&self) -> f64 {
        ((self.mu0 - self.q) / self.gamma0.abs()).sqrt()
    }

    pub fn sigma_c(&self) -> f64 {
        self.q / self.mu0
    }

    /// Initial elevation.
    pub fn initial_eta(&self, x: f64) -> f64 {
        let x0 = self.x0();
        if x.abs() <= x0 {
            self.gamma0 * (x * x - x0 * x0) + self.q
        } else {
            self.q
        }
    }

    /// Coalescence time of the two inner characteristics.
    pub fn coalescence_time(&self) -> f64 {
        pp_time_of_sigma(self.gamma0, self.sigma_c()).expect("sigma_c lies in (0, 1)")
    }

    /// Closed-form shock time of the first shoulder characteristic.
    pub fn shock_time(&self) -> f64 {
        let r = self.sigma_c();
        2.0 / 3.0 * (r / (self.gamma0.abs() * (1.0 - r))).sqrt()
    }
}

fn artanh_clamped(v: f64) -> f64 {
    let v = v.min(1.0 - 1e-15);
    0.5 * ((1.0 + v) / (1.0 - v)).ln()
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return domain(format!("sigma = {sigma} outside (0, 1]"));
    }
    Ok(())
}

/// Time at which the core reaches `sigma`.
pub fn pp_time_of_sigma(gamma0: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(gamma0 < 0.0) {
        return domain(format!("gamma0 = {gamma0} must be negative"));
    }
    let s = (1.0 - sigma).sqrt();
    Ok((s + sigma * artanh_clamped(s)) / (2.0 * gamma0.abs().sqrt() * sigma))
}

/// Inverse of [`pp_time_of_sigma`].
pub fn pp_sigma_of_time(gamma0: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("t = {t} must be nonnegative"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let mut lo = 0.5;
    while pp_time_of_sigma(gamma0, lo)? < t {
        lo *= 0.5;
        if lo < 1e-300 {
            return domain(format!("t = {t} too large"));
        }
    }
    bracketed_root(|s| pp_time_of_sigma(gamma0, s).unwrap() - t, lo, 1.0, 1e-16)
}

/// `sigma' = -2 sqrt|gamma0| sigma^2 sqrt(1 - sigma)`.
pub fn pp_sigma_rate(gamma0: f64, sigma: f64) -> f64 {
    -2.0 * gamma0.abs().sqrt() * sigma * sigma * (1.0 - sigma).max(0.0).sqrt()
}

/// Core coefficients `(alpha, gamma, mu)` at `sigma`.
pub fn pp_core_state(gamma0: f64, mu0: f64, sigma: f64) -> Result<(f64, f64, f64)> {
    check_sigma(sigma)?;
    let g = gamma0.abs().sqrt();
    Ok((2.0 * g * sigma * (1.0 - sigma).sqrt(), gamma0 * sigma.powi(3), mu0 * sigma))
}

/// Left shoulder boundary while the core exists.
pub fn pp_left_front(sc: &PiecewiseParabolaScenario, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if sigma < sc.sigma_c() {
        return domain(format!("sigma = {sigma} below sigma_c = {}: front past the origin", sc.sigma_c()));
    }
    Ok(left_front_raw(sc, sigma))
}

fn left_front_raw(sc: &PiecewiseParabolaScenario, sigma: f64) -> f64 {
    let num = ((sc.mu0 - sc.q) * sigma).sqrt() - (sc.q * (1.0 - sigma)).sqrt();
    num / (sc.gamma0.abs().sqrt() * sigma)
}

/// `dX_l/dt` at `sigma`.
fn left_front_speed(sc: &PiecewiseParabolaScenario, sigma: f64) -> f64 {
    let s = (1.0 - sigma).max(0.0).sqrt();
    let a = (sc.mu0 - sc.q).sqrt();
    let b = sc.q.sqrt();
    a * sigma.sqrt() * s - b * sigma - 2.0 * b * s * s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpRegimeKind {
    ShockBeforeCoalescence,
    CoalescenceBeforeShock,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpRegime {
    pub kind: PpRegimeKind,
    pub t_sh: f64,
    pub t_c: f64,
    /// Critical ratio `Q/mu0` separating the regimes.
    pub rho: f64,
}

/// Critical `Q/mu0` at which shock and coalescence coincide. Both times
/// scale with `|gamma0|^{-1/2}`, so the ratio is universal.
pub fn critical_ratio() -> Result<f64> {
    let gap = |r: f64| {
        let t_sh = 2.0 / 3.0 * (r / (1.0 - r)).sqrt();
        t_sh - pp_time_of_sigma(-1.0, r).unwrap()
    };
    bracketed_root(gap, 0.05, 0.95, 1e-15)
}

pub fn pp_regime(sc: &PiecewiseParabolaScenario) -> Result<PpRegime> {
    let r = sc.sigma_c();
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("Q/mu0 = {r} outside (0, 1)"));
    }
    let rho = critical_ratio()?;
    let (t_sh, t_c) = (sc.shock_time(), sc.coalescence_time());
    let kind = if r <= rho { PpRegimeKind::ShockBeforeCoalescence } else { PpRegimeKind::CoalescenceBeforeShock };
    Ok(PpRegime { kind, t_sh, t_c, rho })
}

/// Data carried by one shoulder label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartLabel {
    /// Core parameter; `NaN` for labels without a core.
    pub sigma: f64,
    pub t0: f64,
    pub x_left: f64,
    pub x_left_dot: f64,
    pub n: f64,
    pub v: f64,
    /// `d sqrt(N) / d t0`.
    pub dsqrt_n: f64,
}

impl ChartLabel {
    /// Speed `3 sqrt(N) - 2 sqrt(Q)` of the forward characteristic.
    pub fn speed(&self, q: f64) -> f64 {
        3.0 * self.n.sqrt() - 2.0 * q.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ChartSource {
    /// Constant background ahead of a left boundary moving at `-sqrt Q`.
    Quiescent { x0: f64 },
    Parabola(PiecewiseParabolaScenario),
}

/// Right-hand shoulder between `X_l` and `X_r = x0 + sqrt(Q) t`.
#[derive(Debug, Clone)]
pub struct ShoulderChart {
    pub q: f64,
    pub x0: f64,
    /// Labels ordered by increasing `t0`.
    pub labels: Vec<ChartLabel>,
    /// Coalescence time, infinite when no core.
    pub t_c: f64,
    source: ChartSource,
}

impl ShoulderChart {
    /// Chart of a corner with no wave at all.
    pub fn quiescent(q: f64, x0: f64, t_max: f64, count: usize) -> Result<Self> {
        if !(q > 0.0) {
            return domain(format!("background depth Q = {q} must be positive"));
        }
        let source = ChartSource::Quiescent { x0 };
        let mut chart = Self { q, x0, labels: Vec::new(), t_c: f64::INFINITY, source };
        let n = count.max(2);
        chart.labels = (0..n).map(|i| chart.label_at_time(t_max * i as f64 / (n - 1) as f64)).collect::<Result<_>>()?;
        Ok(chart)
    }

    pub fn right_boundary(&self, t: f64) -> f64 {
        self.x0 + self.q.sqrt() * t
    }

    /// Left boundary, continued past coalescence by `sqrt(Q)(t - t_c)`.
    pub fn left_boundary(&self, t: f64) -> Result<f64> {
        Ok(self.label_at_time(t)?.x_left)
    }

    fn label_from_sigma(&self, sc: &PiecewiseParabolaScenario, sigma: f64) -> Result<ChartLabel> {
        let t0 = pp_time_of_sigma(sc.gamma0, sigma)?;
        let (alpha, gamma, mu) = pp_core_state(sc.gamma0, sc.mu0, sigma)?;
        let x = if sigma <= sc.sigma_c() { 0.0 } else { left_front_raw(sc, sigma) };
        let xd = left_front_speed(sc, sigma);
        let n = gamma * x * x + mu;
        let v = alpha * x;
        // flat-bottom core: gamma' = -3 alpha gamma, mu' = -alpha mu
        let ndot = -3.0 * alpha * gamma * x * x + 2.0 * gamma * x * xd - alpha * mu;
        Ok(ChartLabel { sigma, t0, x_left: x, x_left_dot: xd, n, v, dsqrt_n: ndot / (2.0 * n.sqrt()) })
    }

    /// Label leaving the left boundary at time `t0`.
    pub fn label_at_time(&self, t0: f64) -> Result<ChartLabel> {
        if !(t0 >= 0.0) {
            return domain(format!("label t0 = {t0} must be nonnegative"));
        }
        let b = self.q.sqrt();
        match self.source {
            ChartSource::Quiescent { x0 } => {
                Ok(ChartLabel { sigma: f64::NAN, t0, x_left: x0 - b * t0, x_left_dot: -b, n: self.q, v: 0.0, dsqrt_n: 0.0 })
            }
            ChartSource::Parabola(sc) => {
                if t0 >= self.t_c {
                    return Ok(ChartLabel {
                        sigma: f64::NAN,
                        t0,
                        x_left: b * (t0 - self.t_c),
                        x_left_dot: b,
                        n: self.q,
                        v: 0.0,
                        dsqrt_n: 0.0,
                    });
                }
                let sigma = pp_sigma_of_time(sc.gamma0, t0)?;
                self.label_from_sigma(&sc, sigma.max(sc.sigma_c()))
            }
        }
    }

    /// Position at time `tau` of the characteristic labelled `t0`.
    pub fn char_map(&self, t0: f64, tau: f64) -> Result<f64> {
        if !(t0 <= tau) {
            return domain(format!("label t0 = {t0} is born after tau = {tau}"));
        }
        let l = self.label_at_time(t0)?;
        Ok(l.x_left + l.speed(self.q) * (tau - t0))
    }

    /// Surface slope `N_x` inside the shoulder at `(label t0, tau)`.
    pub fn slope_at(&self, t0: f64, tau: f64) -> Result<f64> {
        let l = self.label_at_time(t0)?;
        let dxdt0 = l.x_left_dot - l.speed(self.q) + 3.0 * l.dsqrt_n * (tau - t0);
        Ok(2.0 * l.n.sqrt() * l.dsqrt_n / dxdt0)
    }

    /// `(eta, u)` at `(x, tau)` for `x >= 0`, valid before the first shock.
    pub fn fields_at(&self, x: f64, tau: f64) -> Result<(f64, f64)> {
        if x >= self.right_boundary(tau) {
            return Ok((self.q, 0.0));
        }
        let left = self.label_at_time(tau)?;
        if x <= left.x_left {
            return match self.source {
                ChartSource::Parabola(sc) if tau < self.t_c => {
                    let sigma = pp_sigma_of_time(sc.gamma0, tau)?;
                    let (a, g, m) = pp_core_state(sc.gamma0, sc.mu0, sigma)?;
                    Ok((g * x * x + m, a * x))
                }
                _ => Ok((self.q, 0.0)),
            };
        }
        let t_hi = tau.min(self.t_c);
        let t0 = if self.char_map(t_hi, tau)? <= x {
            bracketed_root(|s| self.char_map(s, tau).unwrap_or(f64::NAN) - x, 0.0, t_hi, 1e-14)?
        } else {
            t_hi
        };
        let l = self.label_at_time(t0)?;
        Ok((l.n, l.v))
    }
}

/// Closed-form chart of the piecewise-parabola scenario on
/// [`CHART_LABELS`] labels clustered towards `sigma0 = 1`.
pub fn build_chart(sc: &PiecewiseParabolaScenario) -> Result<ShoulderChart> {
    build_chart_with(sc, CHART_LABELS)
}

pub fn build_chart_with(sc: &PiecewiseParabolaScenario, count: usize) -> Result<ShoulderChart> {
    let sc = PiecewiseParabolaScenario::new(sc.q, sc.gamma0, sc.mu0)?;
    let t_c = sc.coalescence_time();
    let mut chart = ShoulderChart { q: sc.q, x0: sc.x0(), labels: Vec::new(), t_c, source: ChartSource::Parabola(sc) };
    let n = count.max(2);
    let sc_c = sc.sigma_c();
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let c = 1.0 - (0.5 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos();
        let sigma = if i == n - 1 { sc_c } else { 1.0 - (1.0 - sc_c) * c };
        let mut l = chart.label_from_sigma(&sc, sigma)?;
        if i == n - 1 {
            l.x_left = 0.0;
            l.n = sc.q;
            l.v = 0.0;
        }
        labels.push(l);
    }
    chart.labels = labels;
    Ok(chart)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShockTime {
    At(f64),
    /// No crossing from the given labels.
    Open,
}

impl ShockTime {
    pub fn time(&self) -> Option<f64> {
        match self {
            ShockTime::At(t) => Some(*t),
            ShockTime::Open => None,
        }
    }
}

fn label_shock(l: &ChartLabel, q: f64) -> ShockTime {
    if !(l.dsqrt_n > 0.0) {
        return ShockTime::Open;
    }
    let tau = l.t0 + (l.speed(q) - l.x_left_dot) / (3.0 * l.dsqrt_n);
    if tau.is_finite() && tau > l.t0 {
        ShockTime::At(tau)
    } else {
        ShockTime::Open
    }
}

/// Time at which the label-`t0` characteristic meets its neighbours.
pub fn shock_time_of_char(chart: &ShoulderChart, t0: f64) -> Result<ShockTime> {
    Ok(label_shock(&chart.label_at_time(t0)?, chart.q))
}

/// Infimum of the admissible label shock times: grid minimum, then a
/// golden-section refinement between the neighbouring labels.
pub fn earliest_shock(chart: &ShoulderChart) -> Result<ShockTime> {
    let times: Vec<f64> = chart.labels.iter().map(|l| label_shock(l, chart.q).time().unwrap_or(f64::INFINITY)).collect();
    let Some((i, &best)) = times.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)) else {
        return Ok(ShockTime::Open);
    };
    if !best.is_finite() {
        return Ok(ShockTime::Open);
    }
    let lo = chart.labels[i.saturating_sub(1)];
    let hi = chart.labels[(i + 1).min(chart.labels.len() - 1)];
    let refined = match chart.source {
        ChartSource::Parabola(sc) if lo.sigma.is_finite() && hi.sigma.is_finite() => {
            let f = |s: f64| {
                chart.label_from_sigma(&sc, s).map(|l| label_shock(&l, chart.q).time().unwrap_or(f64::INFINITY)).unwrap_or(f64::INFINITY)
            };
            let (a, b) = (lo.sigma.min(hi.sigma), lo.sigma.max(hi.sigma));
            golden_min(f, a, b, 1e-14).1
        }
        _ => {
            let f = |t: f64| shock_time_of_char(chart, t).ok().and_then(|s| s.time()).unwrap_or(f64::INFINITY);
            golden_min(f, lo.t0, hi.t0, 1e-14).1
        }
    };
    Ok(ShockTime::At(best.min(refined)))
}
