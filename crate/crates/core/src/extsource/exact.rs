//! Exact rational helpers: Bareiss elimination, polynomials over a common
//! denominator and logarithms of big rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Solve A x = b over the rationals by fraction-free (Bareiss) elimination.
/// Returns None for a singular matrix.
pub fn bareiss_solve(mut a: Vec<Vec<BigInt>>, mut b: Vec<BigInt>) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero())?;
        if pivot != k {
            a.swap(pivot, k);
            b.swap(pivot, k);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            b[i] = (&b[i] * &a[k][k] - &a[i][k] * &b[k]) / &prev;
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(b[i].clone());
        for j in i + 1..n {
            acc -= &x[j] * BigRational::from_integer(a[i][j].clone());
        }
        x[i] = acc / BigRational::from_integer(a[i][i].clone());
    }
    Some(x)
}

/// Polynomial Σ num_i x^i / den with integer numerators.
#[derive(Debug, Clone)]
pub struct IntPoly {
    num: Vec<BigInt>,
    den: BigInt,
}

impl IntPoly {
    pub fn from_rationals(c: &[BigRational]) -> Self {
        let den = c.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let num = c.iter().map(|r| r.numer() * (&den / r.denom())).collect();
        IntPoly { num, den }
    }

    pub fn derivative(&self) -> Self {
        let num = if self.num.len() <= 1 {
            vec![BigInt::zero()]
        } else {
            self.num
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect()
        };
        IntPoly { num, den: self.den.clone() }
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let (p, q) = (x.numer(), x.denom());
        let d = self.num.len();
        if d == 0 {
            return BigRational::zero();
        }
        // Σ c_i p^i q^{d−1−i} / (den q^{d−1})
        let mut acc = self.num[d - 1].clone();
        let mut qpow = BigInt::one();
        for i in (0..d - 1).rev() {
            qpow *= q;
            acc = acc * p + &self.num[i] * &qpow;
        }
        BigRational::new(acc, &self.den * qpow)
    }
}

fn ln_abs_int(b: &BigInt) -> f64 {
    let bits = b.bits();
    if bits <= 1000 {
        return b.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = b.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// (sign, ln|r|) without overflow; sign 0 for r = 0.
pub fn sign_ln(r: &BigRational) -> (f64, f64) {
    if r.is_zero() {
        return (0.0, f64::NEG_INFINITY);
    }
    let s = if r.is_negative() { -1.0 } else { 1.0 };
    (s, ln_abs_int(r.numer()) - ln_abs_int(r.denom()))
}

pub fn to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
