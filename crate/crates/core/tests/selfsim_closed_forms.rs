use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use proptest::prelude::*;
use swe_fronts::hierarchy::integrate_vacuum;
use swe_fronts::numerics::quad::{quad, quad_to_infinity};
use swe_fronts::selfsim::*;
use swe_fronts::Error;

/// Period from the canonical energy, with turning points found by deflating
/// the cubic at the known rest point and `q = c + r sin(theta)`.
fn period_oracle(gamma0: f64) -> f64 {
    let q0 = 1.0 / gamma0.cbrt();
    let e = q0 * q0 - 2.0 / q0;
    // q^3 - E q - 2 = (q - q0)(q^2 + q0 q + q0^2 - E)
    let disc = (q0 * q0 - 4.0 * (q0 * q0 - e)).sqrt();
    let (ra, rb) = ((-q0 - disc) / 2.0, (-q0 + disc) / 2.0);
    let mut neg = [q0, ra, rb];
    neg.sort_by(|a, b| a.total_cmp(b));
    let (lo, hi, third) = (neg[0], neg[1], neg[2]);
    let (c, r) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    2.0 * quad(|th: f64| 1.0 / (2.0 * (c + r * th.sin() - third) / (c + r * th.sin())).sqrt(), -FRAC_PI_2, FRAC_PI_2)
        .unwrap()
}

fn sigma_time_oracle(gamma0: f64, sigma: f64) -> f64 {
    let disc = (1.0 - 8.0 * gamma0).sqrt();
    let (sp, sm) = ((-1.0 + disc) / (4.0 * gamma0), (-1.0 - disc) / (4.0 * gamma0));
    let f = |v: f64| {
        let s = 1.0 + v * v;
        2.0 / (s * (4.0 * gamma0 * (s - sp) * (s - sm)).sqrt())
    };
    quad(f, 0.0, (sigma - 1.0).sqrt()).unwrap()
}

#[test]
fn period_matches_energy_quadrature() {
    for g in [-0.9, -0.5, -0.2, -0.05] {
        let t = period(g).unwrap();
        assert!((t - period_oracle(g)).abs() < 1e-10, "gamma0 = {g}: {t} vs {}", period_oracle(g));
        assert!(t > PI / SQRT_2 && t < PI * (2.0f64 / 3.0).sqrt());
    }
}

#[test]
fn period_limits() {
    assert!((period(-1.0 + 1e-9).unwrap() - PI * (2.0f64 / 3.0).sqrt()).abs() < 1e-6);
    assert!((period(-1e-9).unwrap() - PI / SQRT_2).abs() < 1e-3);
    assert!((period(-1e-4).unwrap() / (PI * SQRT_2) - 0.5).abs() < 1e-3);
}

#[test]
fn period_strictly_decreasing() {
    let ts: Vec<f64> = (1..20).map(|i| period(-1.0 + 0.05 * i as f64).unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn blowup_time_matches_defining_integral() {
    let g = 1.0;
    let f = |v: f64| {
        let s = 1.0 + v * v;
        2.0 * v / (s * (2.0 * v * v * (2.0 * g * s * s + s + 1.0)).sqrt())
    };
    let oracle = quad(f, 1e-300, 1.0).unwrap() + quad_to_infinity(f, 1.0).unwrap();
    assert!((blowup_time(g).unwrap() - oracle).abs() < 1e-8);
}

#[test]
fn blowup_time_asymptotics() {
    assert!((blowup_time(1e-6).unwrap() - PI / 2f64.powf(1.5)).abs() < 1e-3);
    let t = blowup_time(1e6).unwrap();
    assert!((t / (PI / 4e3) - 1.0).abs() < 1e-2);
}

#[test]
fn blowup_elliptic_and_quadrature_agree() {
    for g in [0.01, 0.05, 0.1, 0.12] {
        assert!((blowup_time_elliptic(g).unwrap() - blowup_time(g).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn time_of_sigma_values() {
    assert!((time_of_sigma(-0.5, 1.2, Branch::Plus).unwrap() - sigma_time_oracle(-0.5, 1.2)).abs() < 1e-8);
    let (_, sm) = sigma_roots(-0.5).unwrap();
    let half = time_of_sigma(-0.5, sm, Branch::Plus).unwrap();
    assert!((half - period(-0.5).unwrap() / 2.0).abs() < 1e-12);
    let back = time_of_sigma(-0.5, 1.2, Branch::Minus).unwrap();
    assert!((back - (period(-0.5).unwrap() - sigma_time_oracle(-0.5, 1.2))).abs() < 1e-8);
    assert!(time_of_sigma(-0.5, sm + 0.1, Branch::Plus).is_err());
    assert!(time_of_sigma(-0.5, 0.9, Branch::Plus).is_err());
}

#[test]
fn time_of_sigma_tracks_integration() {
    let g0 = -0.3;
    let tr = integrate_parabolic(&ParabolicState::new(0.0, g0, 1.0, 0.0, 0.0), 1.0, 1e-12).unwrap();
    for sigma in [1.05, 1.2, 1.4] {
        let t = time_of_sigma(g0, sigma, Branch::Plus).unwrap();
        let g = tr.state_at(t).gamma;
        assert!(((g / g0).cbrt() - sigma).abs() < 1e-8, "sigma {sigma}: {}", (g / g0).cbrt());
    }
}

#[test]
fn orbits_close_after_one_period() {
    for i in 0..20 {
        let g0 = -0.97 + 0.048 * i as f64;
        let t = period(g0).unwrap();
        let s = integrate_parabolic(&ParabolicState::new(0.0, g0, 0.5, 0.0, 0.0), t, 1e-12).unwrap().last();
        assert!(s.alpha.abs() < 1e-7 && (s.gamma - g0).abs() < 1e-7 && (s.mu - 0.5).abs() < 1e-7, "gamma0 {g0}: {s:?}");
    }
}

#[test]
fn oscillating_drop_returns_with_harmonic_centre() {
    let s0 = ParabolicState::new(0.0, -7.0, 1.0, -1.0, 0.0);
    let Regime::Sloshing { period: t, .. } = classify(-7.0, 0.0).unwrap() else { panic!("expected sloshing") };
    let s = integrate_parabolic(&s0, t, 1e-12).unwrap().last();
    assert!(s.alpha.abs() < 1e-8 && (s.gamma + 7.0).abs() < 1e-8 && (s.mu - 1.0).abs() < 1e-8);
    let w = SQRT_2;
    assert!((s.beta + (w * t).cos()).abs() < 1e-9);
    assert!((s.delta - w * (w * t).sin()).abs() < 1e-9);
}

#[test]
fn fixed_point_trajectory_is_constant() {
    let s0 = ParabolicState::new(0.0, -1.0, 1.0, 0.0, 0.0);
    let tr = integrate_parabolic(&s0, 7.3, 1e-12).unwrap();
    assert!(tr.states().all(|s| s.alpha == 0.0 && s.gamma == -1.0 && s.mu == 1.0));
}

#[test]
fn integrator_blowup_matches_closed_form() {
    let err = integrate_parabolic(&ParabolicState::new(0.0, 2.0, -0.5, 0.0, 0.0), 5.0, 1e-12).unwrap_err();
    let Error::BlowUp { time } = err else { panic!("expected blow-up, got {err:?}") };
    assert!((time - blowup_time(2.0).unwrap()).abs() < 1e-6);
    for g in [0.1, 1.0, 10.0] {
        let Err(Error::BlowUp { time }) = integrate_parabolic(&ParabolicState::new(0.0, g, -1.0, 0.0, 0.0), 10.0, 1e-12)
        else {
            panic!("no blow-up for gamma0 = {g}")
        };
        assert!((time - blowup_time(g).unwrap()).abs() < 1e-6, "gamma0 {g}: {time}");
    }
}

#[test]
fn moving_start_blowup_matches_integrator() {
    for (a, g) in [(-0.19176895952591413, 0.1), (0.5, 0.1), (-1.5, 3.0), (2.0, 0.02)] {
        let Err(Error::BlowUp { time }) = integrate_parabolic(&ParabolicState::new(a, g, -1.0, 0.0, 0.0), 50.0, 1e-12) else {
            panic!("no blow-up for ({a}, {g})")
        };
        let closed = blowup_time_general(a, g).unwrap();
        assert!((time - closed).abs() < 1e-6, "({a}, {g}): {time} vs {closed}");
    }
}

#[test]
fn hierarchy_reproduces_selfsim_edge() {
    let s0 = ParabolicState::new(0.3, -2.0, 1.0, 0.1, 0.2);
    let tr = integrate_parabolic(&s0, 2.0, 1e-13).unwrap();
    let mut f0 = selfsim_to_series_order(&s0, 3).unwrap();
    f0.u_dry.clear();
    let h = integrate_vacuum(&f0, &swe_fronts::bathymetry::BottomProfile::parabolic(), 2.0, 1e-13).unwrap();
    for t in [0.5, 1.0, 2.0] {
        let a = selfsim_to_series_order(&tr.state_at(t), 3).unwrap();
        let b = h.state_at(t);
        assert!((a.x - b.x).abs() < 1e-8, "t = {t}: X {} vs {}", a.x, b.x);
        for k in 0..=3 {
            assert!((a.u[k] - b.u[k]).abs() < 1e-8 && (a.h[k] - b.h[k]).abs() < 1e-8, "t = {t}, k = {k}");
        }
    }
}

proptest! {
    #[test]
    fn hamiltonian_equals_canonical_energy(alpha in -5.0f64..5.0, gamma in -10.0f64..-1e-3) {
        let h = invariant_h(alpha, gamma).unwrap();
        let c = to_canonical(alpha, gamma).unwrap();
        prop_assert!((h - c.e).abs() <= 1e-12 * h.abs().max(1.0));
        prop_assert!((c.e - (c.p * c.p / 2.0 + potential(c.q))).abs() <= 1e-12 * c.e.abs().max(1.0));
        prop_assert!(c.q < 0.0);
    }

    #[test]
    fn curvature_sign_and_centre_of_mass(
        alpha in -2.0f64..2.0, gamma in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
        beta in -1.0f64..1.0, delta in -1.0f64..1.0,
    ) {
        let s0 = ParabolicState::new(alpha, gamma, 1.0, beta, delta);
        let t_end = match classify(gamma, alpha).unwrap() {
            Regime::BlowUp { time } => 0.8 * time,
            _ => 6.0,
        };
        let tr = integrate_parabolic(&s0, t_end, 1e-11).unwrap();
        let w = SQRT_2;
        for s in tr.states() {
            prop_assert_eq!(s.gamma.signum(), gamma.signum());
            let exact = beta * (w * s.t).cos() + delta / w * (w * s.t).sin();
            prop_assert!((s.beta - exact).abs() < 1e-8);
        }
        prop_assert!(tr.h_drift() < 1e-8);
    }
}
