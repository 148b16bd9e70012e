//! Scenario runners. Each turns a validated plan into [`Artifacts`].

use std::time::Instant;

use rayon::prelude::*;
use swe_fronts::bathymetry::BottomProfile;
use swe_fronts::hierarchy::{corner_split_fronts, integrate_vacuum, riccati_slope_time, shock_position, FrontKind, FrontSeriesState};
use swe_fronts::refsolver::{self, detect_gradient_blowup, BlowupEstimate, eta_errors, RunOptions, Scenario};
use swe_fronts::selfsim::{self, integrate_parabolic, invariant_h, reconstruct_fields, ParabolicState, Regime};
use swe_fronts::shoulder::{build_chart, earliest_shock, pp_regime, PiecewiseParabolaScenario, PpRegimeKind};
use swe_fronts::validate::{self, CriterionReport};
use swe_fronts::Error;

use crate::config::{FvSpec, Plan};
use crate::output::{svg_plot, Artifacts, Series, Table};
use crate::CliError;

fn numerical(e: Error) -> CliError {
    CliError::Numerical(e.to_string())
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn timed<T>(a: &mut Artifacts, key: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let r = f();
    a.timings.insert(key.to_string(), start.elapsed().as_secs_f64());
    r
}

pub fn run_plan(plan: &Plan) -> Result<Artifacts, CliError> {
    let mut a = Artifacts::default();
    match plan {
        Plan::Slosh { state, t_end, times, tol, points, window, fv } => {
            parabolic(&mut a, state, *t_end, times, *tol, *points, *window)?;
            if let Some(fv) = fv {
                oracle_drop(&mut a, state, *t_end, times, *tol, fv)?;
            }
        }
        Plan::Blowup { state, t_end, times, tol, points, window } => parabolic(&mut a, state, *t_end, times, *tol, *points, *window)?,
        Plan::PwFlat { scenario, times, points, fv } => pw_flat(&mut a, scenario, times, *points, fv.as_ref())?,
        Plan::PwParabolic { x0, zeta1_0, points } => pw_parabolic(&mut a, *x0, *zeta1_0, *points)?,
        Plan::Vacuum { profile, state, t_end, tol, points } => vacuum(&mut a, profile, state, *t_end, *tol, *points)?,
        Plan::PeriodCurve { range, points } => period_curve(&mut a, *range, *points)?,
        Plan::BlowupCurve { range, points } => blowup_curve(&mut a, *range, *points)?,
        Plan::Validate => {
            let reports = validate_all(&mut a);
            a.table("criteria", criteria_table(&reports));
        }
    }
    Ok(a)
}

fn profile_table(s: &ParabolicState, window: (f64, f64), points: usize) -> Table {
    let bottom = BottomProfile::parabolic();
    let mut t = Table::new(&["x", "b", "zeta", "eta", "u"]);
    for x in linspace(window.0, window.1, points) {
        let (eta, u) = reconstruct_fields(s, x);
        let b = bottom.eval(x);
        if eta > 0.0 {
            t.push(vec![x, b, eta + b, eta, u]);
        } else {
            t.push(vec![x, b, f64::NAN, 0.0, f64::NAN]);
        }
    }
    t
}

fn parabolic(a: &mut Artifacts, s0: &ParabolicState, t_end: f64, times: &[f64], tol: f64, points: usize, window: (f64, f64)) -> Result<(), CliError> {
    let regime = selfsim::classify(s0.gamma, s0.alpha).map_err(numerical)?;
    match regime {
        Regime::FixedPoint => a.notes.push("fixed point: the drop is stationary".into()),
        Regime::Sloshing { period, energy } => {
            a.set("period", period);
            a.set("energy", energy);
        }
        Regime::BlowUp { time } => a.set("t_bu", time),
    }
    a.set("h_invariant", invariant_h(s0.alpha, s0.gamma).map_err(numerical)?);
    let traj = timed(a, "integrate", || integrate_parabolic(s0, t_end, tol)).map_err(numerical)?;
    a.set("h_drift", traj.h_drift());

    let mut tr = Table::new(&["t", "alpha", "gamma", "mu", "beta", "delta", "H"]);
    for t in linspace(0.0, t_end, points) {
        let s = traj.state_at(t);
        tr.push(vec![t, s.alpha, s.gamma, s.mu, s.beta, s.delta, invariant_h(s.alpha, s.gamma).unwrap_or(f64::NAN)]);
    }
    let fig = svg_plot(
        "parameters",
        "t",
        "value",
        &["alpha", "gamma", "mu", "beta"].map(|c| Series::from_table(&tr, "t", c, c)),
    );
    a.figure("trajectory", fig);
    a.table("trajectory", tr);

    let bottom = BottomProfile::parabolic();
    let mut series = vec![Series { label: "bottom".into(), points: linspace(window.0, window.1, points).into_iter().map(|x| (x, bottom.eval(x))).collect() }];
    for (i, &t) in times.iter().enumerate() {
        let s = traj.state_at(t);
        let p = profile_table(&s, window, points);
        series.push(Series::from_table(&p, "x", "zeta", format!("t = {t:.2}")));
        a.table(format!("profile_{i:02}"), p);
    }
    a.figure("profiles", svg_plot("free surface", "x", "zeta", &series));
    Ok(())
}

fn fv_options(fv: &FvSpec) -> RunOptions {
    RunOptions { order: fv.order, cfl: fv.cfl }
}

fn oracle_drop(a: &mut Artifacts, s0: &ParabolicState, t_end: f64, times: &[f64], tol: f64, fv: &FvSpec) -> Result<(), CliError> {
    let sc = Scenario::sloshing_drop(s0, fv.domain);
    let traj = integrate_parabolic(s0, t_end, tol).map_err(numerical)?;
    let run = timed(a, "oracle", || refsolver::run(&sc, t_end, fv.cells, times, fv_options(fv))).map_err(numerical)?;
    if let Some(e) = &run.failure {
        return Err(CliError::Numerical(format!("oracle stopped early: {e}")));
    }
    let mut err = Table::new(&["t", "l1", "linf"]);
    for (i, g) in run.snapshots.iter().enumerate() {
        let exact = traj.state_at(g.t);
        let (l1, linf) = eta_errors(g, |x| reconstruct_fields(&exact, x).0.max(0.0));
        err.push(vec![g.t, l1, linf]);
        a.table(format!("oracle_{i:02}"), grid_table(g));
    }
    if let Some(worst) = err.column("linf").and_then(|c| c.into_iter().reduce(f64::max)) {
        a.set("oracle_linf_max", worst);
    }
    a.set("oracle_steps", run.steps as f64);
    a.table("oracle_errors", err);
    Ok(())
}

fn grid_table(g: &refsolver::GridState) -> Table {
    let mut t = Table::new(&["x", "eta", "u", "b", "zeta"]);
    for (i, u) in g.velocity().into_iter().enumerate() {
        t.push(vec![g.x[i], g.eta[i], u, g.b[i], g.eta[i] + g.b[i]]);
    }
    t
}

fn pw_flat(a: &mut Artifacts, sc: &PiecewiseParabolaScenario, times: &[f64], points: usize, fv: Option<&FvSpec>) -> Result<(), CliError> {
    let sc = PiecewiseParabolaScenario::new(sc.q, sc.gamma0, sc.mu0).map_err(numerical)?;
    let regime = pp_regime(&sc).map_err(numerical)?;
    a.set("x0", sc.x0());
    a.set("sigma_c", sc.sigma_c());
    a.set("t_sh", regime.t_sh);
    a.set("t_c", regime.t_c);
    a.set("critical_ratio", regime.rho);
    a.notes.push(match regime.kind {
        PpRegimeKind::ShockBeforeCoalescence => "regime: shock before coalescence".into(),
        PpRegimeKind::CoalescenceBeforeShock => "regime: coalescence before shock".into(),
    });
    let chart = timed(a, "chart", || build_chart(&sc)).map_err(numerical)?;
    let first = earliest_shock(&chart).map_err(numerical)?.time().unwrap_or(f64::INFINITY);
    if first.is_finite() {
        a.set("t_shock_chart", first);
    }

    let t_last = times.iter().copied().filter(|&t| t < first).fold(0.0, f64::max);
    let half = sc.x0() + sc.q.sqrt() * t_last + 0.5;
    let mut series = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        if t >= first {
            a.notes.push(format!("t = {t} skipped: past the first shock at {first:.6}"));
            continue;
        }
        let mut p = Table::new(&["x", "eta", "u"]);
        for x in linspace(-half, half, points) {
            let (eta, u) = chart.fields_at(x.abs(), t).map_err(numerical)?;
            p.push(vec![x, eta, u * x.signum()]);
        }
        series.push(Series::from_table(&p, "x", "eta", format!("t = {t:.2}")));
        a.table(format!("profile_{i:02}"), p);
    }
    a.figure("profiles", svg_plot("elevation", "x", "eta", &series));

    if let Some(fv) = fv {
        let scen = Scenario::piecewise_parabola(&sc, fv.domain);
        let t_end = 1.5 * regime.t_sh.max(regime.t_c);
        let (coarse, fine) = timed(a, "oracle", || {
            rayon::join(
                || refsolver::run(&scen, t_end, fv.cells, &[], fv_options(fv)),
                || refsolver::run(&scen, t_end, 2 * fv.cells, &[], fv_options(fv)),
            )
        });
        let (coarse, fine) = (coarse.map_err(numerical)?, fine.map_err(numerical)?);
        let mut slopes = Table::new(&["t", "max_slope"]);
        fine.slopes.iter().for_each(|&(t, s)| slopes.push(vec![t, s]));
        a.figure("oracle_slopes", svg_plot("max surface slope", "t", "slope", &[Series::from_table(&slopes, "t", "max_slope", "oracle")]));
        a.table("oracle_slopes", slopes);
        match (detect_gradient_blowup(&coarse, fv.threshold), detect_gradient_blowup(&fine, fv.threshold)) {
            (Some(c), Some(f)) => {
                let est = BlowupEstimate { coarse: c, fine: f };
                a.set("oracle_t_steep_coarse", c);
                a.set("oracle_t_steep_fine", f);
                a.set("oracle_t_steep", est.extrapolated());
            }
            _ => a.notes.push(format!("oracle: slope never exceeded {} times its initial value at both resolutions", fv.threshold)),
        }
    }
    Ok(())
}

fn pw_parabolic(a: &mut Artifacts, x0: f64, zeta1_0: f64, points: usize) -> Result<(), CliError> {
    let p = BottomProfile::parabolic();
    let (left, right) = corner_split_fronts(&p, x0, 10.0).map_err(numerical)?;
    let t_max = match shock_position(&p, x0, zeta1_0) {
        Ok(xs) => {
            let t_sh = right.time_at(xs).map_err(numerical)?;
            a.set("x_sh", xs);
            a.set("t_sh", t_sh);
            t_sh
        }
        Err(Error::NoCatastrophe(why)) => {
            a.notes.push(format!("no shock: {why}"));
            right.horizon()
        }
        Err(e) => return Err(numerical(e)),
    };
    a.set("t_shoreline", right.horizon());
    let mut t = Table::new(&["t", "x_right", "x_left", "zeta1"]);
    for s in linspace(0.0, t_max * (1.0 - 1e-6), points) {
        let z = match riccati_slope_time(&right, zeta1_0, s) {
            Ok(z) => z,
            Err(Error::GradientCatastrophe { .. }) => f64::NAN,
            Err(e) => return Err(numerical(e)),
        };
        let xl = if s <= left.horizon() { left.position(s) } else { f64::NAN };
        t.push(vec![s, right.position(s), xl, z]);
    }
    a.figure(
        "fronts",
        svg_plot("front paths", "t", "x", &[Series::from_table(&t, "t", "x_right", "right"), Series::from_table(&t, "t", "x_left", "left")]),
    );
    a.figure("slope", svg_plot("surface slope at the right front", "t", "zeta_x", &[Series::from_table(&t, "t", "zeta1", "zeta1")]));
    a.table("fronts", t);
    Ok(())
}

fn vacuum(a: &mut Artifacts, profile: &BottomProfile, s0: &FrontSeriesState, t_end: f64, tol: f64, points: usize) -> Result<(), CliError> {
    let (traj, t_stop) = match timed(a, "integrate", || integrate_vacuum(s0, profile, t_end, tol)) {
        Ok(tr) => (tr, t_end),
        Err(Error::BlowUp { time }) => {
            a.set("t_bu", time);
            a.notes.push(format!("hierarchy diverges at t = {time:.6}; trajectory shown up to 0.99 of that"));
            let t = 0.99 * time;
            (integrate_vacuum(s0, profile, t, tol).map_err(numerical)?, t)
        }
        Err(e) => return Err(numerical(e)),
    };
    let n = s0.order;
    let mut cols: Vec<String> = vec!["t".into(), "x".into()];
    cols.extend((0..=n).map(|k| format!("u{k}")));
    cols.extend((1..=n).map(|k| format!("eta{k}")));
    let physical = s0.kind == FrontKind::PhysicalVacuum && !s0.u_dry.is_empty();
    if physical {
        cols.push("jump".into());
    }
    let mut t = Table { columns: cols, rows: Vec::new() };
    for s in linspace(0.0, t_stop, points) {
        let st = traj.state_at(s);
        let mut row = vec![s, st.x];
        row.extend_from_slice(&st.u);
        row.extend_from_slice(&st.h[1..]);
        if physical {
            row.push(st.velocity_jump().unwrap_or(f64::NAN));
        }
        t.push(row);
    }
    let last = traj.state_at(t_stop);
    a.set("x_final", last.x);
    a.set("eta1_final", last.h[1]);
    a.figure("front", svg_plot("vacuum point", "t", "x", &[Series::from_table(&t, "t", "x", "x")]));
    let mut lead = vec![Series::from_table(&t, "t", "u1", "u1")];
    if n >= 2 {
        lead.push(Series::from_table(&t, "t", "eta2", "eta2"));
    }
    a.figure("leading", svg_plot("leading coefficients", "t", "value", &lead));
    a.table("series", t);
    Ok(())
}

fn period_curve(a: &mut Artifacts, range: (f64, f64), points: usize) -> Result<(), CliError> {
    let grid = linspace(range.0, range.1, points);
    let rows: Vec<Vec<f64>> = timed(a, "curve", || {
        grid.par_iter()
            .map(|&g| Ok(vec![g, selfsim::period(g)?, selfsim::energy_at_rest(g)?]))
            .collect::<Result<_, Error>>()
    })
    .map_err(numerical)?;
    let t = Table { columns: vec!["gamma0".into(), "period".into(), "energy".into()], rows };
    a.set("period_at_lo", t.rows[0][1]);
    a.set("period_at_hi", t.rows[t.rows.len() - 1][1]);
    a.figure("period", svg_plot("sloshing period", "gamma0", "T'", &[Series::from_table(&t, "gamma0", "period", "T'")]));
    a.table("period", t);
    Ok(())
}

fn blowup_curve(a: &mut Artifacts, range: (f64, f64), points: usize) -> Result<(), CliError> {
    let (l0, l1) = (range.0.ln(), range.1.ln());
    let grid: Vec<f64> = linspace(l0, l1, points).into_iter().map(f64::exp).collect();
    let rows: Vec<Vec<f64>> = timed(a, "curve", || {
        grid.par_iter()
            .map(|&g| Ok(vec![g, selfsim::blowup_time(g)?, std::f64::consts::PI / (4.0 * g.sqrt())]))
            .collect::<Result<_, Error>>()
    })
    .map_err(numerical)?;
    let t = Table { columns: vec!["gamma0".into(), "t_bu".into(), "large_gamma".into()], rows };
    let series: Vec<Series> = ["t_bu", "large_gamma"]
        .iter()
        .map(|c| Series { label: c.to_string(), points: t.rows.iter().map(|r| (r[0].log10(), r[if *c == "t_bu" { 1 } else { 2 }].log10())).collect() })
        .collect();
    a.figure("blowup", svg_plot("blow-up time", "log10 gamma0", "log10 t_bu", &series));
    a.table("blowup", t);
    Ok(())
}

/// Run every acceptance criterion in parallel; reports come back in order.
pub fn validate_all(a: &mut Artifacts) -> Vec<CriterionReport> {
    let reports: Vec<CriterionReport> = timed(a, "criteria", || {
        validate::CRITERIA.par_iter().filter_map(|c| validate::run_criterion(c.0)).collect()
    });
    for r in &reports {
        a.set(&format!("criterion_{:02}", r.id), if r.passed { 1.0 } else { 0.0 });
        a.notes.push(r.line());
    }
    reports
}

fn criteria_table(reports: &[CriterionReport]) -> Table {
    let mut t = Table::new(&["id", "passed"]);
    for r in reports {
        t.push(vec![r.id as f64, if r.passed { 1.0 } else { 0.0 }]);
    }
    t
}

/// Parse a sweep grid: `a:b:n` for `n` evenly spaced values or a comma list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: String| CliError::Config(vec![format!("--grid: {m}")]);
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("not a number: {s:?}")));
    let parts: Vec<&str> = spec.split(':').collect();
    let v = match parts.as_slice() {
        [lo, hi, n] => {
            let n: usize = n.trim().parse().map_err(|_| bad(format!("bad count {n:?}")))?;
            if n < 2 {
                return Err(bad("need at least 2 grid points".into()));
            }
            linspace(num(lo)?, num(hi)?, n)
        }
        [list] => list.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err(bad(format!("expected lo:hi:n or a comma list, got {spec:?}"))),
    };
    if v.iter().any(|x| !x.is_finite()) {
        return Err(bad("values must be finite".into()));
    }
    Ok(v)
}
