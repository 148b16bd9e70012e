use proptest::prelude::*;
use swe_fronts::shoulder::*;

fn scenario(q: f64, g: f64, m: f64) -> PiecewiseParabolaScenario {
    PiecewiseParabolaScenario::new(q, g, m).unwrap()
}

#[test]
fn earliest_shock_matches_closed_form() {
    for (q, g, m, expect) in [(1.0, -1.0, 2.0, 2.0 / 3.0), (1.0, -1.0, 1.4, 1.05409)] {
        let sc = scenario(q, g, m);
        let chart = build_chart(&sc).unwrap();
        let t = earliest_shock(&chart).unwrap().time().unwrap();
        assert!((t - sc.shock_time()).abs() < 1e-10, "{t} vs {}", sc.shock_time());
        assert!((t - expect).abs() < 5e-5);
    }
}

#[test]
fn label_one_shock_time() {
    let sc = scenario(1.0, -1.0, 2.0);
    let chart = build_chart(&sc).unwrap();
    let t = shock_time_of_char(&chart, 0.0).unwrap().time().unwrap();
    assert!((t - 2.0 / 3.0).abs() < 1e-14);
}

#[test]
fn neighbouring_characteristics_cross_at_label_shock_time() {
    // two characteristics a small label distance apart meet near tau_bar
    let sc = scenario(1.0, -1.0, 1.4);
    let chart = build_chart(&sc).unwrap();
    let t0 = 0.2;
    let tau = shock_time_of_char(&chart, t0).unwrap().time().unwrap();
    let mut prev = f64::INFINITY;
    for h in [1e-3, 1e-4, 1e-5, 1e-6] {
        let a = chart.label_at_time(t0).unwrap();
        let b = chart.label_at_time(t0 + h).unwrap();
        let (sa, sb) = (a.speed(1.0), b.speed(1.0));
        // x_a + s_a (t - t0) = x_b + s_b (t - t0 - h)
        let cross = (b.x_left - a.x_left + sa * a.t0 - sb * b.t0) / (sa - sb);
        let err = (cross - tau).abs();
        assert!(err < prev);
        prev = err;
    }
    assert!(prev < 1e-4);
}

#[test]
fn critical_ratio_value() {
    assert!((critical_ratio().unwrap() - 0.6213).abs() < 5e-4);
}

#[test]
fn half_slope_at_corner() {
    let sc = scenario(1.0, -1.0, 2.0);
    let chart = build_chart(&sc).unwrap();
    let tau = 1e-7;
    let s = chart.slope_at(0.0, tau).unwrap();
    let eta_in = 2.0 * sc.gamma0 * sc.x0();
    assert!((s - 0.5 * eta_in).abs() < 1e-6);
}

#[test]
fn core_residual() {
    // parametric core satisfies the flat-bottom parabolic equations
    let (g0, m0) = (-1.3, 2.2);
    for &sigma in &[0.95, 0.8, 0.6, 0.3] {
        let h = 1e-5;
        let t = |s: f64| pp_time_of_sigma(g0, s).unwrap();
        let st = |s: f64| pp_core_state(g0, m0, s).unwrap();
        let dt = t(sigma - h) - t(sigma + h);
        let (a1, g1, m1) = st(sigma + h);
        let (a2, g2, m2) = st(sigma - h);
        let (a, g, m) = st(sigma);
        let rate = |x1: f64, x2: f64| (x2 - x1) / dt;
        assert!((rate(a1, a2) + a * a + 2.0 * g).abs() < 1e-8);
        assert!((rate(g1, g2) + 3.0 * a * g).abs() < 1e-8);
        assert!((rate(m1, m2) + a * m).abs() < 1e-8);
        assert!((-2.0 * h / dt - pp_sigma_rate(g0, sigma)).abs() < 1e-6);
    }
}

#[test]
fn chart_fields_continuous_across_boundaries() {
    let sc = scenario(1.0, -1.0, 2.0);
    let chart = build_chart(&sc).unwrap();
    let tau = 0.4;
    let xl = chart.left_boundary(tau).unwrap();
    let xr = chart.right_boundary(tau);
    let (a, _) = chart.fields_at(xl - 1e-9, tau).unwrap();
    let (b, _) = chart.fields_at(xl + 1e-9, tau).unwrap();
    assert!((a - b).abs() < 1e-6);
    let (c, _) = chart.fields_at(xr - 1e-9, tau).unwrap();
    assert!((c - 1.0).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn shock_infimum_closed_form(q in 0.2f64..3.0, g in -4.0f64..-0.1, excess in 0.05f64..3.0) {
        let sc = scenario(q, g, q + excess);
        let chart = build_chart(&sc).unwrap();
        let t = earliest_shock(&chart).unwrap().time().unwrap();
        prop_assert!((t - sc.shock_time()).abs() < 1e-10);
    }

    #[test]
    fn riemann_invariant_constant(q in 0.2f64..3.0, g in -4.0f64..-0.1, excess in 0.05f64..3.0) {
        let chart = build_chart_with(&scenario(q, g, q + excess), 128).unwrap();
        for l in &chart.labels {
            prop_assert!((l.v - 2.0 * l.n.sqrt() + 2.0 * q.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn time_of_sigma_round_trip(g in -4.0f64..-0.1, s in 0.01f64..1.0) {
        let t = pp_time_of_sigma(g, s).unwrap();
        prop_assert!((pp_sigma_of_time(g, t).unwrap() - s).abs() < 1e-12);
        prop_assert!(pp_time_of_sigma(g, s * 0.99).unwrap() > t);
    }

    #[test]
    fn left_front_decreasing(q in 0.2f64..3.0, g in -4.0f64..-0.1, excess in 0.05f64..3.0, s in 0.0f64..1.0) {
        let sc = scenario(q, g, q + excess);
        let sig = sc.sigma_c() + (1.0 - sc.sigma_c()) * s;
        let sig2 = sc.sigma_c() + (1.0 - sc.sigma_c()) * s * 0.9;
        prop_assert!(pp_left_front(&sc, sig2).unwrap() < pp_left_front(&sc, sig).unwrap());
    }
}
