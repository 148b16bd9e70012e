use std::f64::consts::SQRT_2;

use proptest::prelude::*;
use swe_fronts::bathymetry::BottomProfile;
use swe_fronts::hierarchy::*;
use swe_fronts::Error;

fn duffing() -> BottomProfile {
    BottomProfile::Quartic { c0: 0.0, c2: 1.0, c4: 1.0 }
}

#[test]
fn harmonic_vacuum_point_returns() {
    let p = BottomProfile::parabolic();
    let x = nonphysical_front_motion(&p, 0.5, 0.0, std::f64::consts::PI * SQRT_2).unwrap();
    assert!((x - 0.5).abs() < 1e-14);
    let s0 = FrontSeriesState::vacuum(0.5, 3, &[0.0, 0.2], &[0.0, 0.0, -0.5]).unwrap();
    let tr = integrate_vacuum(&s0, &p, 2.0, 1e-12).unwrap();
    for t in [0.5, 1.0, 2.0] {
        assert!((tr.state_at(t).x - 0.5 * (SQRT_2 * t).cos()).abs() < 1e-9);
    }
}

#[test]
fn linear_bottom_accelerates_uniformly() {
    let p = BottomProfile::Linear { c0: -1.0, c1: 0.3 };
    for t in [0.0, 0.7, 2.0] {
        let x = nonphysical_front_motion(&p, 0.1, 0.5, t).unwrap();
        assert!((x - (0.1 + 0.5 * t - 0.15 * t * t)).abs() < 1e-14);
    }
}

#[test]
fn duffing_energy_is_conserved() {
    let path = FrontPath::nonphysical(&duffing(), 0.3, 0.0, 50.0).unwrap();
    let e0 = path.energy(0.0);
    let sol = path.numeric_solution().unwrap();
    let worst = sol.t.iter().map(|&t| (path.energy(t) - e0).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "energy drift {worst:e}");
}

#[test]
fn duffing_leading_pair_stays_bounded() {
    let path = FrontPath::nonphysical(&duffing(), 0.3, 0.0, 10.0).unwrap();
    let tr = reduced_u1eta2_step(0.01, -0.99, |t| path.b2(t), 10.0, 1e-12).unwrap();
    assert!(tr.points().iter().all(|&(_, u1, e2)| u1.is_finite() && e2 < 0.0));
}

#[test]
fn phi_form_matches_direct_pair() {
    let path = FrontPath::nonphysical(&duffing(), 0.3, 0.0, 10.0).unwrap();
    for (u1, e2) in [(0.01, -0.99), (0.3, -0.5), (-0.2, -2.0)] {
        let a = reduced_u1eta2_step(u1, e2, |t| path.b2(t), 5.0, 1e-12).unwrap();
        let b = reduced_phi_form(u1, e2, |t| path.b2(t), 5.0, 1e-12).unwrap();
        for i in 1..=50 {
            let t = 0.1 * i as f64;
            let (p, q) = (a.at(t), b.at(t));
            assert!((p.0 - q.0).abs() < 1e-8 && (p.1 - q.1).abs() < 1e-8, "t = {t}: {p:?} vs {q:?}");
        }
    }
}

#[test]
fn reduced_pair_fixed_point() {
    let tr = reduced_u1eta2_step(0.0, -1.0, |_| 1.0, 3.0, 1e-12).unwrap();
    assert_eq!(tr.at(3.0), (0.0, -1.0));
}

#[test]
fn flat_focusing_blows_up() {
    // u_1' = -u_1^2 - 2 eta_2 with eta_2 = 0 diverges at t = 1/|u_1(0)|
    let r = reduced_u1eta2_step(-2.0, 0.0, |_| 0.0, 5.0, 1e-12);
    let Err(Error::BlowUp { time }) = r else { panic!("expected blow-up") };
    assert!((time - 0.5).abs() < 1e-6);
}

#[test]
fn quadratic_bottom_tail_rates_vanish() {
    let p = BottomProfile::Quadratic { c0: -1.0, c1: 0.1, c2: 1.0 };
    let s = FrontSeriesState::vacuum(0.3, 6, &[0.2, -0.4], &[0.0, -0.5, -0.8]).unwrap();
    let r = hierarchy_rhs_vacuum(&s, &p).unwrap();
    assert!(r.u_dot[2..].iter().all(|v| *v == 0.0));
    assert!(r.h_dot[3..].iter().all(|v| *v == 0.0));
}

#[test]
fn shared_orders_agree_across_truncations() {
    let p = duffing();
    let data_u = [0.1, 0.2, -0.1, 0.05];
    let data_e = [0.0, 0.0, -1.0, 0.2, 0.1];
    let lo = FrontSeriesState::vacuum(0.3, 4, &data_u, &data_e).unwrap();
    let hi = FrontSeriesState::vacuum(0.3, 6, &data_u, &data_e).unwrap();
    let (a, b) = (integrate_vacuum(&lo, &p, 1.0, 1e-13).unwrap(), integrate_vacuum(&hi, &p, 1.0, 1e-13).unwrap());
    for t in [0.25, 0.5, 1.0] {
        let (sa, sb) = (a.state_at(t), b.state_at(t));
        assert!((sa.x - sb.x).abs() < 1e-8);
        for k in 0..4 {
            assert!((sa.u[k] - sb.u[k]).abs() < 1e-8, "t = {t}, u_{k}");
            assert!((sa.h[k + 1] - sb.h[k + 1]).abs() < 1e-8, "t = {t}, eta_{}", k + 1);
        }
    }
}

#[test]
fn jump_grows_at_rate_eta1() {
    let p = BottomProfile::Flat { depth: 1.0 };
    let s0 = FrontSeriesState::vacuum(0.0, 3, &[0.0, 0.3], &[0.0, -2.0, -0.5]).unwrap();
    let tr = integrate_vacuum(&s0, &p, 1.0, 1e-12).unwrap();
    let times = [0.25, 0.5, 0.75, 1.0];
    let law = velocity_jump_evolution(|t| tr.state_at(t).h[1], 0.0, &times).unwrap();
    for (j, &t) in law.iter().zip(&times) {
        let s = tr.state_at(t);
        assert!((s.velocity_jump().unwrap() - j.jump).abs() < 1e-8, "t = {t}");
        assert!(j.jump < 0.0);
    }
}

#[test]
fn selfsim_drop_jump_slope() {
    let s = swe_fronts::selfsim::selfsim_to_series(&swe_fronts::selfsim::ParabolicState::new(0.0, -1.0, 1.0, 0.0, 0.0)).unwrap();
    let j = velocity_jump_evolution(|_| s.h[1], 0.0, &[0.5]).unwrap();
    assert_eq!(s.h[1], -2.0);
    assert!((j[0].jump + 1.0).abs() < 1e-14 && j[0].rate == -2.0);
}

proptest! {
    #[test]
    fn nonphysical_slope_stays_zero(
        c in prop::collection::vec(-0.5f64..0.5, 2..5),
        u in prop::collection::vec(-0.5f64..0.5, 1..4),
        e2 in -2.0f64..-0.1,
    ) {
        let mut coeffs = vec![-1.0];
        coeffs.extend(c);
        let p = BottomProfile::Polynomial(coeffs);
        let s0 = FrontSeriesState::vacuum(0.0, 4, &u, &[0.0, 0.0, e2]).unwrap();
        let states = match integrate_vacuum(&s0, &p, 1.0, 1e-10) {
            Ok(tr) => tr.states(),
            Err(Error::BlowUp { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for s in states {
            prop_assert!(s.h[1].abs() <= 1e-12);
        }
    }

    #[test]
    fn jump_vanishes_at_most_once(a in 0.1f64..2.0, b in 0.0f64..2.0, w in 0.1f64..5.0, jump0 in -1.0f64..1.0) {
        let times: Vec<f64> = (1..=60).map(|i| 0.05 * i as f64).collect();
        let path = velocity_jump_evolution(|t: f64| -(a + b * (w * t).sin().powi(2)), jump0, &times).unwrap();
        let mut vals = vec![jump0];
        vals.extend(path.iter().map(|j| j.jump));
        let changes = vals.windows(2).filter(|p| p[0] * p[1] < 0.0).count();
        prop_assert!(changes <= 1);
        prop_assert!(vals.windows(2).all(|p| p[1] < p[0]));
    }
}
