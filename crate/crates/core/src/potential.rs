//! Polynomial potentials V(z) = v_1 z + … + v_p z^p and the deformation toward the Gaussian.
//!
//! The constant term is pinned to zero. Adding a constant to V only rescales
//! every norm h_n by a common factor, so nothing downstream depends on it.

use crate::error::{Error, Result};
use crate::poly::Poly;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Potential {
    /// `coeffs[j - 1]` is the coefficient of z^j.
    coeffs: Vec<f64>,
}

impl Potential {
    /// Builds a potential from v_1..v_p. Trailing zeros are trimmed before the
    /// degree is checked.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let p = coeffs.len();
        if p == 0 || p % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "degree must be a positive even integer, got {p}"
            )));
        }
        if coeffs[p - 1] <= 0.0 {
            return Err(Error::InvalidInput(
                "leading coefficient must be positive".into(),
            ));
        }
        Ok(Potential { coeffs })
    }

    /// V(z) = z².
    pub fn gaussian() -> Self {
        Potential {
            coeffs: vec![0.0, 1.0],
        }
    }

    /// V(z) = t z²/2 + g z⁴/4.
    pub fn quartic(t: f64, g: f64) -> Result<Self> {
        Potential::new(vec![0.0, 0.5 * t, 0.0, 0.25 * g])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of z^j (zero for j = 0 and j > p).
    pub fn coeff(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.coeffs.get(j - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Returns a copy with the z^j coefficient shifted by `delta`.
    /// Fails if the shift breaks the degree or sign requirements.
    pub fn perturbed(&self, j: usize, delta: f64) -> Result<Self> {
        assert!(j >= 1);
        let mut c = self.coeffs.clone();
        if c.len() < j {
            c.resize(j, 0.0);
        }
        c[j - 1] += delta;
        Potential::new(c)
    }

    pub fn as_poly(&self) -> Poly {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend_from_slice(&self.coeffs);
        Poly::new(c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| (acc + c) * x)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| (acc + c) * z)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i + 1) as f64 * c)
                .collect(),
        )
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|&c| c == 0.0)
    }

    /// τ_t V(z) = (1 − 1/t) z² + V(t^{−1/2} z), defined for t ≥ 1.
    pub fn deform(&self, t: f64) -> Result<Self> {
        if !(t >= 1.0) || !t.is_finite() {
            return Err(Error::InvalidInput(format!("deformation needs t >= 1, got {t}")));
        }
        if t == 1.0 {
            return Ok(self.clone());
        }
        let s = t.sqrt().recip();
        let mut c: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &v)| v * scaled_power(s, t, i + 1))
            .collect();
        c[1] += 1.0 - 1.0 / t;
        Potential::new(c)
    }
}

/// t^{-j/2}, with even powers taken as exact reciprocal powers of t.
fn scaled_power(s: f64, t: f64, j: usize) -> f64 {
    if j % 2 == 0 {
        t.powi(-((j / 2) as i32))
    } else {
        s * t.powi(-((j / 2) as i32))
    }
}

impl TryFrom<Vec<f64>> for Potential {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Potential::new(v)
    }
}

impl From<Potential> for Vec<f64> {
    fn from(p: Potential) -> Vec<f64> {
        p.coeffs
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// Parses `"v1,v2,...,vp"`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("bad coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Potential::new(coeffs)
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| format!("{c}")).collect();
        write!(f, "{}", parts.join(","))
    }
}
