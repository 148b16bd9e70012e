//! Scenario configuration files.
//!
//! Configs are TOML with a top-level `kind` and four optional tables:
//!
//! ```toml
//! kind = "slosh"
//!
//! [bottom]            # variant = flat | linear | quadratic | quartic | polynomial
//! variant = "quadratic"
//! coefficients = [-1.0, 0.0, 1.0]
//!
//! [initial]
//! gamma0 = -7.0
//! mu0 = 1.0
//! beta0 = -1.0
//!
//! [numerics]
//! t_end = 2.5
//! output_times = [0.0, 0.3, 0.6]
//!
//! [output]
//! dir = "out/slosh"
//! ```
//!
//! Unknown keys are rejected. Semantic checks run after parsing and report
//! every violation with its key path.

use serde::{Deserialize, Serialize};
use swe_fronts::bathymetry::BottomProfile;
use swe_fronts::hierarchy::FrontSeriesState;
use swe_fronts::refsolver::{Order, DEFAULT_CFL};
use swe_fronts::selfsim::{self, ParabolicState};
use swe_fronts::shoulder::PiecewiseParabolaScenario;

use crate::CliError;

/// Snapshot times of the oscillating-drop reproduction.
pub const SLOSH_TIMES: [f64; 8] = [0.0, 0.30, 0.60, 1.11, 1.60, 2.00, 2.22, 2.50];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Slosh,
    Blowup,
    PwParabolaFlat,
    PwParabolaParabolic,
    VacuumHierarchy,
    PeriodCurve,
    BlowupCurve,
    Validate,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Slosh => "slosh",
            Kind::Blowup => "blowup",
            Kind::PwParabolaFlat => "pw-parabola-flat",
            Kind::PwParabolaParabolic => "pw-parabola-parabolic",
            Kind::VacuumHierarchy => "vacuum-hierarchy",
            Kind::PeriodCurve => "period-curve",
            Kind::BlowupCurve => "blowup-curve",
            Kind::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottomSpec {
    pub variant: String,
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    pub alpha0: Option<f64>,
    pub gamma0: Option<f64>,
    pub mu0: Option<f64>,
    pub beta0: Option<f64>,
    pub delta0: Option<f64>,
    pub q: Option<f64>,
    pub x0: Option<f64>,
    pub zeta1_0: Option<f64>,
    pub order: Option<usize>,
    pub u: Option<Vec<f64>>,
    pub eta: Option<Vec<f64>>,
    pub u_dry: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    pub tol: Option<f64>,
    pub t_end: Option<f64>,
    pub output_times: Option<Vec<f64>>,
    /// Sample count for curves and profile snapshots.
    pub points: Option<usize>,
    /// Parameter interval for curves.
    pub range: Option<[f64; 2]>,
    /// Finite-volume cells; the oracle runs only when set.
    pub cells: Option<usize>,
    pub domain: Option<[f64; 2]>,
    pub scheme: Option<String>,
    pub cfl: Option<f64>,
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<String>,
    #[serde(default)]
    pub svg: bool,
}

/// Raw config as written in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub kind: Kind,
    pub bottom: Option<BottomSpec>,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Finite-volume oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvSpec {
    pub cells: usize,
    pub domain: (f64, f64),
    pub order: Order,
    pub cfl: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone)]
pub enum Plan {
    Slosh { state: ParabolicState, t_end: f64, times: Vec<f64>, tol: f64, points: usize, window: (f64, f64), fv: Option<FvSpec> },
    Blowup { state: ParabolicState, t_end: f64, times: Vec<f64>, tol: f64, points: usize, window: (f64, f64) },
    PwFlat { scenario: PiecewiseParabolaScenario, times: Vec<f64>, points: usize, fv: Option<FvSpec> },
    PwParabolic { x0: f64, zeta1_0: f64, points: usize },
    Vacuum { profile: BottomProfile, state: FrontSeriesState, t_end: f64, tol: f64, points: usize },
    PeriodCurve { range: (f64, f64), points: usize },
    BlowupCurve { range: (f64, f64), points: usize },
    Validate,
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub raw: RawConfig,
    pub plan: Plan,
    pub out_dir: String,
}

/// Parse and validate a config text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(vec![e.to_string().trim().to_string()]))?;
    validate(raw)
}

pub fn parse_value(value: toml::Value) -> Result<ScenarioConfig, CliError> {
    let raw: RawConfig = value.try_into().map_err(|e: toml::de::Error| CliError::Config(vec![e.to_string().trim().to_string()]))?;
    validate(raw)
}

struct Checker {
    bad: Vec<String>,
}

impl Checker {
    fn push(&mut self, key: &str, msg: impl AsRef<str>) {
        self.bad.push(format!("{key}: {}", msg.as_ref()));
    }

    fn require(&mut self, key: &str, v: Option<f64>) -> f64 {
        match v {
            Some(x) if x.is_finite() => x,
            Some(x) => {
                self.push(key, format!("must be finite, got {x}"));
                f64::NAN
            }
            None => {
                self.push(key, "required for this scenario kind");
                f64::NAN
            }
        }
    }

    fn optional(&mut self, key: &str, v: Option<f64>, default: f64) -> f64 {
        match v {
            None => default,
            v => self.require(key, v),
        }
    }

    fn positive(&mut self, key: &str, v: f64) {
        if !(v > 0.0) && !v.is_nan() {
            self.push(key, format!("must be positive, got {v}"));
        }
    }

    fn curvature(&mut self, v: f64) {
        if v == 0.0 {
            self.push("initial.gamma0", "curvature must be nonzero");
        }
    }
}

fn bottom_profile(spec: &BottomSpec) -> Result<BottomProfile, String> {
    let c = &spec.coefficients;
    let want = |n: usize| if c.len() == n { Ok(()) } else { Err(format!("variant {} takes {n} coefficients, got {}", spec.variant, c.len())) };
    let p = match spec.variant.as_str() {
        "flat" => {
            want(1)?;
            BottomProfile::Flat { depth: c[0] }
        }
        "linear" => {
            want(2)?;
            BottomProfile::Linear { c0: c[0], c1: c[1] }
        }
        "quadratic" => {
            want(3)?;
            BottomProfile::Quadratic { c0: c[0], c1: c[1], c2: c[2] }
        }
        "quartic" => {
            want(3)?;
            BottomProfile::Quartic { c0: c[0], c2: c[1], c4: c[2] }
        }
        "polynomial" => BottomProfile::Polynomial(c.clone()),
        other => return Err(format!("unknown variant {other:?} (flat, linear, quadratic, quartic, polynomial)")),
    };
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

fn times_in(ck: &mut Checker, times: &[f64], t_end: f64) {
    for (i, &t) in times.iter().enumerate() {
        if !(t >= 0.0 && t <= t_end) {
            ck.push(&format!("numerics.output_times[{i}]"), format!("{t} outside [0, {t_end}]"));
        }
    }
}

fn fv_spec(ck: &mut Checker, n: &Numerics, default_domain: (f64, f64)) -> Option<FvSpec> {
    let cells = n.cells?;
    if cells < 10 {
        ck.push("numerics.cells", format!("need at least 10 cells, got {cells}"));
    }
    let domain = n.domain.map(|d| (d[0], d[1])).unwrap_or(default_domain);
    if !(domain.0 < domain.1) {
        ck.push("numerics.domain", "lower end must be below upper end");
    }
    let order = match n.scheme.as_deref() {
        None | Some("second") => Order::Second,
        Some("first") => Order::First,
        Some(s) => {
            ck.push("numerics.scheme", format!("unknown scheme {s:?} (first, second)"));
            Order::Second
        }
    };
    let cfl = ck.optional("numerics.cfl", n.cfl, DEFAULT_CFL);
    if !(cfl > 0.0 && cfl <= 1.0) {
        ck.push("numerics.cfl", format!("must lie in (0, 1], got {cfl}"));
    }
    let threshold = ck.optional("numerics.threshold", n.threshold, 10.0);
    ck.positive("numerics.threshold", threshold);
    Some(FvSpec { cells, domain, order, cfl, threshold })
}

fn check_parabolic_bottom(ck: &mut Checker, raw: &RawConfig) {
    if let Some(b) = &raw.bottom {
        match bottom_profile(b) {
            Ok(p) if p.coefficients() == BottomProfile::parabolic().coefficients() => {}
            Ok(_) => ck.push("bottom", format!("{} scenarios are defined over b = x^2 - 1 only", raw.kind.name())),
            Err(e) => ck.push("bottom", e),
        }
    }
}

fn validate(raw: RawConfig) -> Result<ScenarioConfig, CliError> {
    let mut ck = Checker { bad: Vec::new() };
    let ini = &raw.initial;
    let num = &raw.numerics;
    let tol = ck.optional("numerics.tol", num.tol, 1e-12);
    if !(tol > 0.0 && tol < 1e-3) && !tol.is_nan() {
        ck.push("numerics.tol", format!("must lie in (0, 1e-3), got {tol}"));
    }
    let points = num.points.unwrap_or(401);
    if points < 2 {
        ck.push("numerics.points", "need at least 2 points");
    }
    let plan = match raw.kind {
        Kind::Slosh | Kind::Blowup => {
            check_parabolic_bottom(&mut ck, &raw);
            let gamma0 = ck.require("initial.gamma0", ini.gamma0);
            let mu0 = ck.require("initial.mu0", ini.mu0);
            let alpha0 = ck.optional("initial.alpha0", ini.alpha0, 0.0);
            let beta0 = ck.optional("initial.beta0", ini.beta0, 0.0);
            let delta0 = ck.optional("initial.delta0", ini.delta0, 0.0);
            ck.curvature(gamma0);
            let state = ParabolicState::new(alpha0, gamma0, mu0, beta0, delta0);
            let window = |half: f64| num.domain.map(|d| (d[0], d[1])).unwrap_or((beta0 - half, beta0 + half));
            if raw.kind == Kind::Slosh {
                if gamma0 > 0.0 {
                    ck.push("initial.gamma0", "a sloshing drop needs gamma0 < 0 (use kind = \"blowup\")");
                }
                if !(mu0 > 0.0) && !mu0.is_nan() {
                    ck.push("initial.mu0", format!("apex thickness must be positive, got {mu0}"));
                }
                let t_end = ck.optional("numerics.t_end", num.t_end, 2.5);
                ck.positive("numerics.t_end", t_end);
                let times = num.output_times.clone().unwrap_or_else(|| SLOSH_TIMES.iter().copied().filter(|&t| t <= t_end).collect());
                times_in(&mut ck, &times, t_end);
                let half = 1.5 * (mu0 / gamma0.abs()).sqrt().max(0.5) + beta0.abs() + delta0.abs();
                let fv = fv_spec(&mut ck, num, (-2.5, 2.5));
                Plan::Slosh { state, t_end, times, tol, points, window: window(half), fv }
            } else {
                if gamma0 < 0.0 {
                    ck.push("initial.gamma0", "blow-up needs gamma0 > 0 (use kind = \"slosh\")");
                }
                let t_bu = if gamma0 > 0.0 { selfsim::blowup_time_general(alpha0, gamma0).ok() } else { None };
                let t_end = match (num.t_end, t_bu) {
                    (Some(t), Some(tb)) if t >= tb => {
                        ck.push("numerics.t_end", format!("{t} is not below the blow-up time {tb}"));
                        t
                    }
                    (Some(t), _) => t,
                    (None, Some(tb)) => 0.99 * tb,
                    (None, None) => f64::NAN,
                };
                if !t_end.is_nan() {
                    ck.positive("numerics.t_end", t_end);
                }
                let times =
                    num.output_times.clone().unwrap_or_else(|| (0..8).map(|i| t_end * i as f64 / 7.0).collect());
                times_in(&mut ck, &times, t_end);
                Plan::Blowup { state, t_end, times, tol, points, window: window(2.0) }
            }
        }
        Kind::PwParabolaFlat => {
            if let Some(b) = &raw.bottom {
                match bottom_profile(b) {
                    Ok(BottomProfile::Flat { depth }) if Some(depth) == ini.q || ini.q.is_none() => {}
                    Ok(BottomProfile::Flat { .. }) => ck.push("bottom", "flat depth must equal initial.q"),
                    Ok(_) => ck.push("bottom", "pw-parabola-flat needs a flat bottom"),
                    Err(e) => ck.push("bottom", e),
                }
            }
            let depth = raw.bottom.as_ref().and_then(|b| (b.variant == "flat").then(|| b.coefficients.first().copied()).flatten());
            let q = ck.require("initial.q", ini.q.or(depth));
            let gamma0 = ck.require("initial.gamma0", ini.gamma0);
            let mu0 = ck.require("initial.mu0", ini.mu0);
            ck.positive("initial.q", q);
            ck.curvature(gamma0);
            if gamma0 > 0.0 {
                ck.push("initial.gamma0", "the core must be a drop, gamma0 < 0");
            }
            if !(mu0 > q) && !mu0.is_nan() && !q.is_nan() {
                ck.push("initial.mu0", format!("corner must be wet: mu0 = {mu0} must exceed Q = {q}"));
            }
            let times = num.output_times.clone().unwrap_or_else(|| vec![0.0, 0.2, 0.4, 0.6]);
            for (i, &t) in times.iter().enumerate() {
                if !(t >= 0.0) {
                    ck.push(&format!("numerics.output_times[{i}]"), format!("{t} must be nonnegative"));
                }
            }
            let fv = fv_spec(&mut ck, num, (-4.0, 4.0));
            let scenario = PiecewiseParabolaScenario { q, gamma0, mu0 };
            Plan::PwFlat { scenario, times, points, fv }
        }
        Kind::PwParabolaParabolic => {
            check_parabolic_bottom(&mut ck, &raw);
            let x0 = ck.require("initial.x0", ini.x0);
            let zeta1_0 = ck.require("initial.zeta1_0", ini.zeta1_0);
            if !(x0.abs() < 1.0) && !x0.is_nan() {
                ck.push("initial.x0", format!("corner must be wet: |x0| = {} must be below 1", x0.abs()));
            }
            Plan::PwParabolic { x0, zeta1_0, points }
        }
        Kind::VacuumHierarchy => {
            let profile = match &raw.bottom {
                Some(b) => bottom_profile(b).unwrap_or_else(|e| {
                    ck.push("bottom", e);
                    BottomProfile::parabolic()
                }),
                None => BottomProfile::parabolic(),
            };
            let x0 = ck.require("initial.x0", ini.x0);
            let u = ini.u.clone().unwrap_or_else(|| vec![0.0]);
            let eta = ini.eta.clone().unwrap_or_default();
            let order = ini.order.unwrap_or_else(|| u.len().max(eta.len()).saturating_sub(1).max(1));
            if order == 0 {
                ck.push("initial.order", "truncation order must be at least 1");
            }
            if u.len() > order + 1 || eta.len() > order + 1 {
                ck.push("initial.order", format!("order {order} is shorter than the supplied coefficients"));
            }
            if let Some(&e0) = eta.first() {
                if e0 != 0.0 {
                    ck.push("initial.eta[0]", "thickness vanishes at a vacuum point; eta[0] must be 0");
                }
            }
            if eta.get(1).is_some_and(|&e1| e1 > 0.0) {
                ck.push("initial.eta[1]", "a right vacuum boundary needs eta[1] <= 0");
            }
            let t_end = ck.optional("numerics.t_end", num.t_end, 1.0);
            ck.positive("numerics.t_end", t_end);
            let state = FrontSeriesState::vacuum(if x0.is_nan() { 0.0 } else { x0 }, order.max(1), &u, &eta);
            let state = match state {
                Ok(mut s) => {
                    if let Some(ud) = &ini.u_dry {
                        if s.kind != swe_fronts::hierarchy::FrontKind::PhysicalVacuum {
                            ck.push("initial.u_dry", "dry-side velocity only applies to a physical vacuum (eta[1] < 0)");
                        }
                        let mut v = vec![0.0; s.order + 1];
                        v.iter_mut().zip(ud).for_each(|(d, s)| *d = *s);
                        s.u_dry = if ud.is_empty() { Vec::new() } else { v };
                    }
                    Some(s)
                }
                Err(e) => {
                    ck.push("initial", e.to_string());
                    None
                }
            };
            match state {
                Some(state) => Plan::Vacuum { profile, state, t_end, tol, points },
                None => Plan::Validate,
            }
        }
        Kind::PeriodCurve | Kind::BlowupCurve => {
            let sloshing = raw.kind == Kind::PeriodCurve;
            let default = if sloshing { [-0.999, -0.001] } else { [1e-3, 1e3] };
            let [a, b] = num.range.unwrap_or(default);
            if !(a < b) {
                ck.push("numerics.range", "lower end must be below upper end");
            }
            if sloshing && !(a > -1.0 && b < 0.0) {
                ck.push("numerics.range", format!("sloshing curvatures must lie in (-1, 0), got [{a}, {b}]"));
            }
            if !sloshing && !(a > 0.0) {
                ck.push("numerics.range", format!("blow-up curvatures must be positive, got [{a}, {b}]"));
            }
            let points = num.points.unwrap_or(200);
            if sloshing {
                Plan::PeriodCurve { range: (a, b), points }
            } else {
                Plan::BlowupCurve { range: (a, b), points }
            }
        }
        Kind::Validate => Plan::Validate,
    };
    if !ck.bad.is_empty() {
        return Err(CliError::Config(ck.bad));
    }
    let out_dir = raw.output.dir.clone().unwrap_or_else(|| format!("out/{}", raw.kind.name()));
    Ok(ScenarioConfig { raw, plan, out_dir })
}
