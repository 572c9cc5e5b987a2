//! Multiple Hermite polynomials for the weights w₁,₂(x) = e^{−n(x²/2 ∓ ax)}
//! and the Christoffel–Darboux kernel of the external-source model.
//!
//! Moments are normalised by C = e^{na²/2}√(2π/n), so that
//! M_k = a M_{k−1} + (k − 1)/n M_{k−2} for w₁ and the w₂ moments are (−1)^k M_k.
//! The kernel is assembled in exact rational arithmetic; only the final
//! exponentials are taken in floating point.

use super::exact::{bareiss_solve, sign_ln, to_rational, IntPoly};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::f64::consts::PI;

/// How the type II polynomial is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhpRoute {
    /// Linear moment system, solved with full pivoting.
    Determinant,
    /// Nearest-neighbour recurrences with the Gaussian coefficients.
    Recurrence,
}

/// Normalised w₁ moments M_0..M_{count−1} in floating point.
pub fn moments(a: f64, n: f64, count: usize) -> Vec<f64> {
    let mut m = vec![1.0, a];
    for k in 2..count {
        m.push(a * m[k - 1] + (k as f64 - 1.0) / n * m[k - 2]);
    }
    m.truncate(count);
    m
}

fn signed(k: usize, j: usize) -> f64 {
    if j == 2 && k % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// P_{n₁,n₂} in floating point, together with h^{(1)}, h^{(2)}.
#[derive(Debug, Clone)]
pub struct MhpState {
    pub n1: usize,
    pub n2: usize,
    pub a: f64,
    pub n: f64,
    /// Monomial coefficients, lowest degree first; the last is 1.
    pub coeffs: Vec<f64>,
    pub h1: f64,
    pub h2: f64,
    /// Condition estimate of the moment system (1 for the recurrence route).
    pub condition: f64,
}

impl MhpState {
    pub fn build(n1: usize, n2: usize, a: f64, n: f64, route: MhpRoute) -> Result<Self> {
        if !(n > 0.0) || !a.is_finite() {
            return Err(Error::InvalidInput(format!("mhp_build(a = {a}, n = {n})")));
        }
        let k = n1 + n2;
        let (coeffs, condition) = match route {
            MhpRoute::Recurrence => (recurrence_coeffs(n1, n2, a, n), 1.0),
            MhpRoute::Determinant => determinant_coeffs(n1, n2, a, n)?,
        };
        let m = moments(a, n, 2 * k + 2);
        let h = |mj: usize, j: usize| -> f64 {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * signed(i + mj, j) * m[i + mj])
                .sum()
        };
        let (h1, h2) = (h(n1, 1), h(n2, 2));
        Ok(MhpState { n1, n2, a, n, coeffs, h1, h2, condition })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// ∫ P x^l w_j / C for l < n_j; zero up to rounding.
    pub fn orthogonality_residuals(&self) -> Vec<f64> {
        let m = moments(self.a, self.n, 2 * (self.n1 + self.n2) + 2);
        let mut out = Vec::new();
        for (j, nj) in [(1, self.n1), (2, self.n2)] {
            for l in 0..nj {
                out.push(
                    self.coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c * signed(i + l, j) * m[i + l])
                        .sum(),
                );
            }
        }
        out
    }
}

fn determinant_coeffs(n1: usize, n2: usize, a: f64, n: f64) -> Result<(Vec<f64>, f64)> {
    let k = n1 + n2;
    if k == 0 {
        return Ok((vec![1.0], 1.0));
    }
    let m = moments(a, n, 2 * k + 2);
    let rows: Vec<(usize, usize)> = (0..n1).map(|l| (1, l)).chain((0..n2).map(|l| (2, l))).collect();
    let mat = DMatrix::from_fn(k, k, |r, i| {
        let (j, l) = rows[r];
        signed(i + l, j) * m[i + l]
    });
    let rhs = nalgebra::DVector::from_fn(k, |r, _| {
        let (j, l) = rows[r];
        -signed(k + l, j) * m[k + l]
    });
    let sv = mat.clone().singular_values();
    let cond = sv.max() / sv.min();
    if !cond.is_finite() || cond > 1e14 {
        return Err(Error::IllConditioned(cond));
    }
    let sol = mat
        .full_piv_lu()
        .solve(&rhs)
        .ok_or(Error::IllConditioned(f64::INFINITY))?;
    let mut c: Vec<f64> = sol.iter().copied().collect();
    c.push(1.0);
    Ok((c, cond))
}

/// Lattice of P_{k,l} built from
/// P_{k+1,l} = (x − a)P_{k,l} − (k/n)P_{k−1,l} − (l/n)P_{k,l−1}  (with l = 0)
/// P_{k,l+1} = P_{k+1,l} + 2a P_{k,l}.
fn lattice<T, F>(n1: usize, n2: usize, a: T, inv_n: T, from_usize: F) -> Vec<Vec<Vec<T>>>
where
    T: Clone + Zero + One + std::ops::Mul<Output = T> + std::ops::Sub<Output = T> + std::ops::Add<Output = T>,
    F: Fn(usize) -> T,
{
    let top = n1 + n2;
    let shift = |p: &Vec<T>| -> Vec<T> {
        let mut out = vec![T::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            out[i + 1] = out[i + 1].clone() + c.clone();
            out[i] = out[i].clone() - a.clone() * c.clone();
        }
        out
    };
    let axpy = |y: &Vec<T>, s: T, x: &Vec<T>| -> Vec<T> {
        let mut out = y.clone();
        for (i, c) in x.iter().enumerate() {
            out[i] = out[i].clone() + s.clone() * c.clone();
        }
        out
    };
    let zero = T::zero();
    let two_a = a.clone() + a.clone();
    let mut rows: Vec<Vec<Vec<T>>> = Vec::with_capacity(n2 + 1);
    let mut row0 = vec![vec![T::one()]];
    for k in 0..top {
        let mut next = shift(&row0[k]);
        if k > 0 {
            next = axpy(&next, zero.clone() - from_usize(k) * inv_n.clone(), &row0[k - 1]);
        }
        row0.push(next);
    }
    rows.push(row0);
    for l in 0..n2 {
        let prev = &rows[l];
        let row: Vec<Vec<T>> = (0..prev.len() - 1)
            .map(|k| {
                let mut up = prev[k + 1].clone();
                for (i, c) in prev[k].iter().enumerate() {
                    up[i] = up[i].clone() + two_a.clone() * c.clone();
                }
                up
            })
            .collect();
        rows.push(row);
    }
    rows
}

fn recurrence_coeffs(n1: usize, n2: usize, a: f64, n: f64) -> Vec<f64> {
    lattice(n1, n2, a, 1.0 / n, |k| k as f64)[n2][n1].clone()
}

/// Exact normalised moments as integers N_k = M_k D^k with D = n·q, a = p/q.
struct ScaledMoments {
    ints: Vec<BigInt>,
    d: BigInt,
}

impl ScaledMoments {
    fn new(a: &BigRational, n: u64, count: usize) -> Self {
        let (p, q) = (a.numer().clone(), a.denom().clone());
        let nn = BigInt::from(n);
        let pn = &p * &nn;
        let nq2 = &nn * &q * &q;
        let mut ints = vec![BigInt::one(), pn.clone()];
        for k in 2..count {
            let v = &pn * &ints[k - 1] + BigInt::from(k - 1) * &nq2 * &ints[k - 2];
            ints.push(v);
        }
        ints.truncate(count);
        ScaledMoments { ints, d: nn * q }
    }

    fn get(&self, k: usize, j: usize) -> BigInt {
        if j == 2 && k % 2 == 1 {
            -self.ints[k].clone()
        } else {
            self.ints[k].clone()
        }
    }

    fn rational(&self, k: usize, j: usize) -> BigRational {
        BigRational::new(self.get(k, j), self.d.pow(k as u32))
    }
}

/// Exact type II polynomial by the moment system.
fn exact_type2_moments(sm: &ScaledMoments, n1: usize, n2: usize) -> Option<Vec<BigRational>> {
    let k = n1 + n2;
    let rows: Vec<(usize, usize)> = (0..n1).map(|l| (1, l)).chain((0..n2).map(|l| (2, l))).collect();
    let a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|&(j, l)| (0..k).map(|i| sm.get(i + l, j)).collect())
        .collect();
    let b: Vec<BigInt> = rows.iter().map(|&(j, l)| -sm.get(k + l, j)).collect();
    let sol = bareiss_solve(a, b)?;
    let mut c: Vec<BigRational> = sol
        .into_iter()
        .enumerate()
        .map(|(i, v)| v / BigRational::from_integer(sm.d.pow((k - i) as u32)))
        .collect();
    c.push(BigRational::one());
    Some(c)
}

/// Exact type I function: polynomials (A, B) of degrees < m1, < m2 with
/// ∫ x^i (A w₁ + B w₂)/C = 0 for i < m1 + m2 − 1 and = 1 at i = m1 + m2 − 1.
fn exact_type1(sm: &ScaledMoments, m1: usize, m2: usize) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
    let k = m1 + m2;
    let a: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..m1)
                .map(|l| sm.get(i + l, 1))
                .chain((0..m2).map(|l| sm.get(i + l, 2)))
                .collect()
        })
        .collect();
    let mut b = vec![BigInt::zero(); k];
    b[k - 1] = sm.d.pow((k - 1) as u32);
    let sol = bareiss_solve(a, b)?;
    let scale = |l: usize, v: &BigRational| v * BigRational::from_integer(sm.d.pow(l as u32));
    let aa = (0..m1).map(|l| scale(l, &sol[l])).collect();
    let bb = (0..m2).map(|l| scale(l, &sol[m1 + l])).collect();
    Some((aa, bb))
}

fn exact_h(sm: &ScaledMoments, p: &[BigRational], mj: usize, j: usize) -> BigRational {
    p.iter()
        .enumerate()
        .map(|(i, c)| c * sm.rational(i + mj, j))
        .fold(BigRational::zero(), |acc, v| acc + v)
}

/// Exact P_{n₁,n₂} by either route.
pub fn exact_type2(n1: usize, n2: usize, a: f64, n: u64, route: MhpRoute) -> Result<Vec<BigRational>> {
    let ar = to_rational(a).ok_or_else(|| Error::InvalidInput(format!("a = {a}")))?;
    match route {
        MhpRoute::Recurrence => {
            let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
            Ok(lattice(n1, n2, ar, inv_n, |k| BigRational::from_integer(BigInt::from(k)))[n2][n1].clone())
        }
        MhpRoute::Determinant => {
            let sm = ScaledMoments::new(&ar, n, 2 * (n1 + n2) + 2);
            exact_type2_moments(&sm, n1, n2).ok_or(Error::IllConditioned(f64::INFINITY))
        }
    }
}

/// Christoffel–Darboux kernel of the external-source model with n₁ = n₂ = n/2,
/// conjugated by e^{−n(x² − y²)/4} so that it is symmetric in form:
///
/// (x − y) K_n(x, y) = e^{−n(x² + y²)/4}/C · Σ_{j=1,2} e^{±nay} S_j(x, y)
///
/// with S_j built from P_{n₁,n₂}, P_{n₁−1,n₂}, P_{n₁,n₂−1}, the type I functions
/// with indices (n₁,n₂), (n₁+1,n₂), (n₁,n₂+1) and the ratios of h constants.
#[derive(Debug, Clone)]
pub struct MhpKernel {
    pub n: u64,
    pub a: f64,
    p: [IntPoly; 3],
    dp: [IntPoly; 3],
    qa: [IntPoly; 3],
    qb: [IntPoly; 3],
    r: [BigRational; 2],
    ln_c: f64,
}

impl MhpKernel {
    pub fn new(n: u64, a: f64) -> Result<Self> {
        if n < 2 || n % 2 == 1 {
            return Err(Error::InvalidInput(format!("external-source kernel needs even n >= 2, got {n}")));
        }
        if !a.is_finite() {
            return Err(Error::InvalidInput(format!("a = {a}")));
        }
        let ar = to_rational(a).unwrap();
        let half = (n / 2) as usize;
        let (n1, n2) = (half, half);
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
        let lat = lattice(n1, n2, ar.clone(), inv_n, |k| BigRational::from_integer(BigInt::from(k)));
        let p0 = lat[n2][n1].clone();
        let p1 = lat[n2][n1 - 1].clone();
        let p2 = lat[n2 - 1][n1].clone();
        let sm = ScaledMoments::new(&ar, n, 2 * (n1 + n2) + 4);
        let ill = || Error::IllConditioned(f64::INFINITY);
        let q0 = exact_type1(&sm, n1, n2).ok_or_else(ill)?;
        let q1 = exact_type1(&sm, n1 + 1, n2).ok_or_else(ill)?;
        let q2 = exact_type1(&sm, n1, n2 + 1).ok_or_else(ill)?;
        let h1 = exact_h(&sm, &p0, n1, 1);
        let h1m = exact_h(&sm, &p1, n1 - 1, 1);
        let h2 = exact_h(&sm, &p2, n2 - 1, 2);
        let h2_top = exact_h(&sm, &p0, n2, 2);
        if h1m.is_zero() || h2.is_zero() {
            return Err(ill());
        }
        let r = [h1 / h1m, h2_top / h2];
        let p = [p0, p1, p2].map(|c| IntPoly::from_rationals(&c));
        let dp = [p[0].derivative(), p[1].derivative(), p[2].derivative()];
        let qa = [&q0.0, &q1.0, &q2.0].map(|c| IntPoly::from_rationals(c));
        let qb = [&q0.1, &q1.1, &q2.1].map(|c| IntPoly::from_rationals(c));
        let nf = n as f64;
        let ln_c = nf * a * a / 2.0 + 0.5 * (2.0 * PI / nf).ln();
        Ok(MhpKernel { n, a, p, dp, qa, qb, r, ln_c })
    }

    /// The ratios h^{(1)}_{n₁,n₂}/h^{(1)}_{n₁−1,n₂} and h^{(2)}_{n₁,n₂}/h^{(2)}_{n₁,n₂−1}.
    pub fn h_ratios(&self) -> (BigRational, BigRational) {
        (self.r[0].clone(), self.r[1].clone())
    }

    fn combine(&self, pv: [BigRational; 3], y: &BigRational) -> (BigRational, BigRational) {
        let qa: Vec<BigRational> = self.qa.iter().map(|q| q.eval(y)).collect();
        let qb: Vec<BigRational> = self.qb.iter().map(|q| q.eval(y)).collect();
        let s1 = &pv[0] * &qa[0] - &self.r[0] * &pv[1] * &qa[1] - &self.r[1] * &pv[2] * &qa[2];
        let s2 = &pv[0] * &qb[0] - &self.r[0] * &pv[1] * &qb[1] - &self.r[1] * &pv[2] * &qb[2];
        (s1, s2)
    }

    fn assemble(&self, s1: &BigRational, s2: &BigRational, x: f64, y: f64) -> f64 {
        let nf = self.n as f64;
        let base = -nf * (x * x + y * y) / 4.0 - self.ln_c;
        let (g1, l1) = sign_ln(s1);
        let (g2, l2) = sign_ln(s2);
        g1 * (l1 + nf * self.a * y + base).exp() + g2 * (l2 - nf * self.a * y + base).exp()
    }

    fn point(v: f64) -> Result<BigRational> {
        to_rational(v).ok_or_else(|| Error::InvalidInput(format!("non-finite point {v}")))
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if x == y {
            return self.diagonal(x);
        }
        let (xr, yr) = (Self::point(x)?, Self::point(y)?);
        let pv = [0, 1, 2].map(|k| self.p[k].eval(&xr));
        let (s1, s2) = self.combine(pv, &yr);
        let dxy = &xr - &yr;
        Ok(self.assemble(&(s1 / &dxy), &(s2 / &dxy), x, y))
    }

    /// Confluent limit: S_j(x, x) vanishes identically, so K(x, x) uses ∂ₓS_j.
    pub fn diagonal(&self, x: f64) -> Result<f64> {
        let xr = Self::point(x)?;
        let pv = [0, 1, 2].map(|k| self.dp[k].eval(&xr));
        let (s1, s2) = self.combine(pv, &xr);
        Ok(self.assemble(&s1, &s2, x, x))
    }

    /// Values of S₁, S₂ on the diagonal; both vanish exactly.
    pub fn diagonal_numerators(&self, x: f64) -> Result<(BigRational, BigRational)> {
        let xr = Self::point(x)?;
        let pv = [0, 1, 2].map(|k| self.p[k].eval(&xr));
        Ok(self.combine(pv, &xr))
    }

    /// K_n(x, x)/n, which tends to the Pastur density.
    pub fn density(&self, x: f64) -> Result<f64> {
        Ok(self.diagonal(x)? / self.n as f64)
    }
}

/// Convenience wrapper matching the other kernel entry points.
pub fn mhp_kernel(n: u64, a: f64, x: f64, y: f64) -> Result<f64> {
    MhpKernel::new(n, a)?.eval(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_polynomial() {
        let s = MhpState::build(0, 0, 1.0, 4.0, MhpRoute::Determinant).unwrap();
        assert_eq!(s.coeffs, vec![1.0]);
    }

    #[test]
    fn routes_agree_exactly() {
        for (n1, n2) in [(1, 0), (2, 3), (4, 4)] {
            for a in [0.5, 1.0, 2.0] {
                let r = exact_type2(n1, n2, a, 8, MhpRoute::Recurrence).unwrap();
                let d = exact_type2(n1, n2, a, 8, MhpRoute::Determinant).unwrap();
                assert_eq!(r, d);
            }
        }
    }

    #[test]
    fn h_ratios_match_gaussian_coefficients() {
        let k = MhpKernel::new(8, 1.0).unwrap();
        let (r1, r2) = k.h_ratios();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(r1, half);
        assert_eq!(r2, half);
    }

    #[test]
    fn numerators_vanish_on_diagonal() {
        let k = MhpKernel::new(6, 0.75).unwrap();
        for x in [-1.25, 0.0, 0.5] {
            let (s1, s2) = k.diagonal_numerators(x).unwrap();
            assert!(s1.is_zero() && s2.is_zero());
        }
    }

    #[test]
    fn reference_values() {
        // frozen from an independent extended-precision evaluation
        let k = MhpKernel::new(8, 1.0).unwrap();
        let v = k.eval(0.3, -0.2).unwrap();
        assert!((v - 0.233592981020965).abs() < 1e-12 * v.abs().max(1.0));
    }
}
