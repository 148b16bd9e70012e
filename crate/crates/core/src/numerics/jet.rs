//! Truncated Taylor series in one variable: `c[0] + c[1] t + c[2] t^2 + ...`.
//!
//! Every operation keeps the length of its operands; coefficients beyond the
//! truncation order are discarded.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn zeros(len: usize) -> Self {
        Jet(vec![0.0; len])
    }

    pub fn constant(c: f64, len: usize) -> Self {
        let mut j = Self::zeros(len);
        if len > 0 {
            j.0[0] = c;
        }
        j
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add_const(&self, c: f64) -> Jet {
        let mut j = self.clone();
        if !j.0.is_empty() {
            j.0[0] += c;
        }
        j
    }

    /// Time derivative; the top coefficient becomes zero.
    pub fn derivative(&self) -> Jet {
        let n = self.len();
        let mut out = vec![0.0; n];
        for k in 0..n.saturating_sub(1) {
            out[k] = (k + 1) as f64 * self.0[k + 1];
        }
        Jet(out)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Jet {
        let n = self.len();
        let mut r = vec![0.0; n];
        if n == 0 {
            return Jet(r);
        }
        let a0 = self.0[0];
        r[0] = 1.0 / a0;
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.0[j] * r[k - j];
            }
            r[k] = -s / a0;
        }
        Jet(r)
    }

    /// Evaluate a polynomial with power-basis coefficients `p` at this jet.
    pub fn compose_poly(&self, p: &[f64]) -> Jet {
        let mut acc = Jet::zeros(self.len());
        for &c in p.iter().rev() {
            acc = (&acc * self).add_const(c);
        }
        acc
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.len().min(o.len());
        let mut out = vec![0.0; n];
        for i in 0..n {
            let a = self.0[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += a * o.0[j];
            }
        }
        Jet(out)
    }
}
