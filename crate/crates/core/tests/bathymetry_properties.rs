use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swe_fronts::bathymetry::{nondimensionalize, BottomProfile};

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 1..7).prop_map(|mut c| {
        let last = c.len() - 1;
        if c[last].abs() < 0.1 {
            c[last] = 1.0;
        }
        c
    })
}

fn naive_derivative(c: &[f64], k: usize, x: f64) -> f64 {
    c.iter()
        .enumerate()
        .skip(k)
        .map(|(i, &a)| a * ((i - k + 1)..=i).map(|m| m as f64).product::<f64>() * x.powi((i - k) as i32))
        .sum()
}

#[test]
fn scaled_parabola_is_canonical() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sc = nondimensionalize(0.37, 9.8, 9.8).unwrap();
    let p = BottomProfile::parabolic();
    for _ in 0..100 {
        let x: f64 = rng.gen_range(-1.0..1.0);
        assert!((sc.scaled_bottom(x) - (x * x - 1.0)).abs() < 1e-14);
        assert_eq!(p.eval(x), x * x - 1.0);
    }
}

#[test]
fn gravity_scaled_record() {
    let sc = nondimensionalize(1.0, 9.8, 9.8).unwrap();
    assert!((sc.length - 9.8f64.sqrt()).abs() < 1e-15);
    assert!((sc.time - 1.0 / 9.8f64.sqrt()).abs() < 1e-15);
    for x in [-1.0, -0.3, 0.0, 0.8] {
        assert!((sc.scaled_bottom(x) - (x * x - 1.0)).abs() < 1e-14);
    }
    assert!(nondimensionalize(0.0, 1.0, 1.0).is_err());
    assert!(nondimensionalize(1.0, -1.0, 1.0).is_err());
}

proptest! {
    #[test]
    fn coefficients_beyond_degree_vanish(c in coeffs(), x in -2.0f64..2.0) {
        let p = BottomProfile::Polynomial(c.clone());
        let t = p.taylor_coeffs(x, c.len() + 3);
        prop_assert!(t[c.len()..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn leading_coefficient_is_the_value(c in coeffs(), x in -2.0f64..2.0) {
        let p = BottomProfile::Polynomial(c);
        prop_assert_eq!(p.taylor_coeffs(x, 4)[0], p.eval(x));
    }

    #[test]
    fn taylor_coefficients_are_scaled_derivatives(c in coeffs(), x in -2.0f64..2.0) {
        let p = BottomProfile::Polynomial(c.clone());
        let t = p.taylor_coeffs(x, c.len() - 1);
        let mut fact = 1.0;
        for (k, &tk) in t.iter().enumerate() {
            if k > 0 { fact *= k as f64; }
            let d = naive_derivative(&c, k, x) / fact;
            prop_assert!((tk - d).abs() <= 1e-11 * d.abs().max(1.0));
        }
    }

    #[test]
    fn named_variants_agree_with_coefficient_lists(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in 0.1f64..2.0, x in -2.0f64..2.0) {
        let q = BottomProfile::Quadratic { c0, c1, c2 };
        let direct = c0 + c1 * x + c2 * x * x;
        prop_assert!((q.eval(x) - direct).abs() <= 1e-13 * direct.abs().max(1.0));
        let r = BottomProfile::Quartic { c0, c2, c4: c1 };
        let quartic = c0 + c2 * x * x / 2.0 + c1 * x.powi(4) / 4.0;
        prop_assert!((r.eval(x) - quartic).abs() <= 1e-13 * quartic.abs().max(1.0));
    }
}
