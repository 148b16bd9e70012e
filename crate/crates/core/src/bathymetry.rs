//! Closed-form bottom profiles and the parabolic-bottom scaling.
//!
//! Bottoms are polynomials, so Taylor coefficients at a moving front are
//! exact. Conventions:
//!
//! * `Flat { depth }` is `b = -depth`.
//! * `Linear { c0, c1 }` is `b = c0 + c1 x`.
//! * `Quadratic { c0, c1, c2 }` is `b = c0 + c1 x + c2 x^2`.
//! * `Quartic { c0, c2, c4 }` is `b = c0 + c2 x^2 / 2 + c4 x^4 / 4`
//!   (Duffing form, the restoring force is `-c2 x - c4 x^3`).
//! * `Polynomial(c)` is `b = sum c[k] x^k`.

use crate::error::{domain, Result};

/// Default cap on the polynomial degree accepted by [`BottomProfile::validate`].
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum BottomProfile {
    Flat { depth: f64 },
    Linear { c0: f64, c1: f64 },
    Quadratic { c0: f64, c1: f64, c2: f64 },
    Quartic { c0: f64, c2: f64, c4: f64 },
    Polynomial(Vec<f64>),
}

impl BottomProfile {
    /// The canonical scaled parabola `x^2 - 1`.
    pub fn parabolic() -> Self {
        BottomProfile::Quadratic { c0: -1.0, c1: 0.0, c2: 1.0 }
    }

    pub fn flat(depth: f64) -> Result<Self> {
        let p = BottomProfile::Flat { depth };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with_cap(MAX_DEGREE)
    }

    pub fn validate_with_cap(&self, cap: usize) -> Result<()> {
        let coeffs = self.coefficients();
        if coeffs.iter().any(|c| !c.is_finite()) {
            return domain("bottom coefficients must be finite");
        }
        match self {
            BottomProfile::Flat { depth } if *depth <= 0.0 => domain(format!("flat bottom depth must be positive, got {depth}")),
            BottomProfile::Polynomial(c) if c.is_empty() => domain("polynomial bottom needs at least one coefficient"),
            BottomProfile::Polynomial(c) if *c.last().unwrap() == 0.0 && c.len() > 1 => {
                domain("polynomial bottom trailing coefficient must be nonzero")
            }
            _ if coeffs.len().saturating_sub(1) > cap => {
                domain(format!("bottom degree {} exceeds cap {cap}", coeffs.len() - 1))
            }
            _ => Ok(()),
        }
    }

    /// Power-basis coefficients `[a0, a1, ...]`, trailing zeros removed
    /// (a constant profile keeps one entry).
    pub fn coefficients(&self) -> Vec<f64> {
        let mut c = match self {
            BottomProfile::Flat { depth } => vec![-depth],
            BottomProfile::Linear { c0, c1 } => vec![*c0, *c1],
            BottomProfile::Quadratic { c0, c1, c2 } => vec![*c0, *c1, *c2],
            BottomProfile::Quartic { c0, c2, c4 } => vec![*c0, 0.0, 0.5 * c2, 0.0, 0.25 * c4],
            BottomProfile::Polynomial(c) => c.clone(),
        };
        while c.len() > 1 && *c.last().unwrap() == 0.0 {
            c.pop();
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.coefficients().len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coefficients(), x)
    }

    /// First derivative `b_x`.
    pub fn slope(&self, x: f64) -> f64 {
        let t = self.taylor_coeffs(x, 1);
        t[1]
    }

    /// `b_k = b^{(k)}(x) / k!` for `k = 0..=n`, computed by repeated
    /// synthetic division. Entries above the degree are exactly zero.
    pub fn taylor_coeffs(&self, x: f64, n: usize) -> Vec<f64> {
        let mut work = self.coefficients();
        let d = work.len();
        let mut out = vec![0.0; n + 1];
        for (k, slot) in out.iter_mut().enumerate().take(d.min(n + 1)) {
            // after pass k, work[k] holds the k-th Taylor coefficient
            for j in (k..d - 1).rev() {
                work[j] += x * work[j + 1];
            }
            *slot = work[k];
        }
        out
    }

    /// Power-basis coefficients of the polynomial `x -> b_k(x)`.
    pub fn taylor_poly(&self, k: usize) -> Vec<f64> {
        let c = self.coefficients();
        if k >= c.len() {
            return vec![0.0];
        }
        (k..c.len()).map(|j| c[j] * binomial(j, k)).collect()
    }
}

pub(crate) fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Reference scales turning `b* = kappa x*^2 - Q` into `b = x^2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRecord {
    pub kappa: f64,
    pub depth: f64,
    pub g: f64,
    pub length: f64,
    pub time: f64,
    pub velocity: f64,
    pub height: f64,
}

pub fn nondimensionalize(kappa: f64, depth: f64, g: f64) -> Result<ScalingRecord> {
    for (name, v) in [("curvature", kappa), ("depth", depth), ("gravity", g)] {
        if !(v > 0.0 && v.is_finite()) {
            return domain(format!("{name} must be positive and finite, got {v}"));
        }
    }
    let length = (depth / kappa).sqrt();
    Ok(ScalingRecord {
        kappa,
        depth,
        g,
        length,
        time: 1.0 / (g * kappa).sqrt(),
        velocity: length * (g * kappa).sqrt(),
        height: kappa * length * length,
    })
}

impl ScalingRecord {
    /// Dimensional bottom `kappa x*^2 - Q`.
    pub fn dimensional_bottom(&self, x_dim: f64) -> f64 {
        self.kappa * x_dim * x_dim - self.depth
    }

    /// Scaled bottom at dimensionless position `x`.
    pub fn scaled_bottom(&self, x: f64) -> f64 {
        self.dimensional_bottom(x * self.length) / self.height
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let p = BottomProfile::parabolic();
        assert_eq!(p.eval(0.0), -1.0);
        assert_eq!(p.eval(1.0), 0.0);
        assert_eq!(BottomProfile::Flat { depth: 1.0 }.eval(5.0), -1.0);
    }

    #[test]
    fn taylor_examples() {
        assert_eq!(BottomProfile::parabolic().taylor_coeffs(0.5, 3), vec![-0.75, 1.0, 1.0, 0.0]);
        let q = BottomProfile::Quartic { c0: 0.0, c2: 1.0, c4: -1.0 };
        assert_eq!(q.taylor_coeffs(0.0, 4), vec![0.0, 0.0, 0.5, 0.0, -0.25]);
        assert_eq!(BottomProfile::Flat { depth: 1.0 }.taylor_coeffs(3.0, 2), vec![-1.0, 0.0, 0.0]);
    }

    #[test]
    fn taylor_poly_matches_taylor_coeffs() {
        let p = BottomProfile::Polynomial(vec![0.3, -1.0, 0.5, 2.0, -0.7]);
        let x = 0.37;
        let t = p.taylor_coeffs(x, 6);
        for (k, tk) in t.iter().enumerate() {
            assert!((horner(&p.taylor_poly(k), x) - tk).abs() < 1e-14);
        }
    }

    #[test]
    fn validation() {
        assert!(BottomProfile::flat(0.0).is_err());
        assert!(BottomProfile::Polynomial(vec![1.0, 0.0]).validate().is_err());
        assert!(BottomProfile::Polynomial(vec![0.0; 10].into_iter().chain([1.0]).collect()).validate().is_err());
        assert!(BottomProfile::Linear { c0: f64::NAN, c1: 0.0 }.validate().is_err());
        assert!(BottomProfile::parabolic().validate().is_ok());
    }

    #[test]
    fn scaling_examples() {
        let s = nondimensionalize(1.0, 1.0, 1.0).unwrap();
        assert_eq!((s.length, s.time, s.velocity, s.height), (1.0, 1.0, 1.0, 1.0));
        assert_eq!(nondimensionalize(4.0, 1.0, 1.0).unwrap().length, 0.5);
        let s = nondimensionalize(1.0, 9.8, 9.8).unwrap();
        assert!((s.length - 9.8f64.sqrt()).abs() < 1e-15);
        assert!((s.time - 1.0 / 9.8f64.sqrt()).abs() < 1e-15);
        for x in [-1.0, -0.3, 0.0, 0.6, 1.0] {
            assert!((s.scaled_bottom(x) - (x * x - 1.0)).abs() < 1e-14);
        }
        assert!(nondimensionalize(0.0, 1.0, 1.0).is_err());
        assert!(nondimensionalize(1.0, -1.0, 1.0).is_err());
    }
}
