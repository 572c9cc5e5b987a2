//! Equilibrium measures of polynomial potentials.
//!
//! The density on the support J = [a_1,b_1] ∪ … ∪ [a_q,b_q] is
//! h(x)·√|R(x)|/(2π) up to a sign fixed per interval, with
//! R(x) = Π(x − a_j)(x − b_j) and h the polynomial part of V′/R^{1/2}.
//!
//! Sign convention: R^{1/2} is the branch behaving like z^q at infinity. On the
//! j-th interval (counted from the left, 1-based) its boundary value from above
//! is i·(−1)^{q−j}·√|R|, so the density there is (−1)^{q−j} h(x) √|R(x)| / (2π).
//!
//! Logarithmic potentials, the g-function, resolvent and energy all go through a
//! cosine expansion of the density on each interval, x = m + r cos φ, which
//! turns the logarithmic kernel into a diagonal series.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::potential::Potential;
use crate::quad::{chebyshev_angles, GaussLegendre};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// Ordered endpoints a_1 < b_1 < … < a_q < b_q.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportIntervals {
    endpoints: Vec<f64>,
}

impl SupportIntervals {
    pub fn new(endpoints: Vec<f64>) -> Result<Self> {
        if endpoints.is_empty() || endpoints.len() % 2 == 1 {
            return Err(Error::InvalidInput(
                "support needs an even, nonzero number of endpoints".into(),
            ));
        }
        if !endpoints.iter().all(|e| e.is_finite()) || !endpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "endpoints must be finite and strictly increasing: {endpoints:?}"
            )));
        }
        Ok(SupportIntervals { endpoints })
    }

    pub fn q(&self) -> usize {
        self.endpoints.len() / 2
    }

    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.endpoints.chunks(2).map(|c| (c[0], c[1]))
    }

    /// 0-based index of the interval containing x.
    pub fn locate(&self, x: f64) -> Option<usize> {
        self.intervals().position(|(a, b)| a <= x && x <= b)
    }

    pub fn left(&self) -> f64 {
        self.endpoints[0]
    }

    pub fn right(&self) -> f64 {
        *self.endpoints.last().unwrap()
    }

    fn r_poly(&self) -> Poly {
        Poly::from_roots(&self.endpoints)
    }

    /// (−1)^{q−j} for the 0-based interval index `i` (j = i + 1).
    fn interval_sign(&self, i: usize) -> f64 {
        if (self.q() - 1 - i) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Coefficients of Π_k (1 − e_k u)^{−1/2} up to u^{order}.
fn inverse_sqrt_series(endpoints: &[f64], order: usize) -> Vec<f64> {
    let mut binom = vec![1.0; order + 1];
    for n in 1..=order {
        binom[n] = binom[n - 1] * (2 * n - 1) as f64 / (2 * n) as f64;
    }
    let mut s = vec![0.0; order + 1];
    s[0] = 1.0;
    for &e in endpoints {
        let factor: Vec<f64> = (0..=order).map(|n| binom[n] * e.powi(n as i32)).collect();
        let mut next = vec![0.0; order + 1];
        for i in 0..=order {
            if s[i] == 0.0 {
                continue;
            }
            for j in 0..=(order - i) {
                next[i + j] += s[i] * factor[j];
            }
        }
        s = next;
    }
    s
}

/// Laurent data of V′(z)·R(z)^{−1/2} at infinity: the polynomial part h and the
/// coefficients of z^{−1}, …, z^{−(q+1)}.
fn laurent(v: &Potential, endpoints: &[f64]) -> (Poly, Vec<f64>) {
    let q = endpoints.len() / 2;
    let d = v.derivative().coeffs;
    let p = d.len(); // V′ has degree p − 1
    let s = inverse_sqrt_series(endpoints, p + 2);
    let dcoef = |i: isize| -> f64 {
        if i < 0 || i as usize >= p {
            0.0
        } else {
            d[i as usize]
        }
    };
    let hdeg = p as isize - 1 - q as isize;
    let mut h = Vec::new();
    for j in 0..=hdeg.max(-1) {
        let mut acc = 0.0;
        for (m, &sm) in s.iter().enumerate() {
            acc += dcoef(j + q as isize + m as isize) * sm;
        }
        h.push(acc);
    }
    let tail = (1..=q + 1)
        .map(|k| {
            s.iter()
                .enumerate()
                .map(|(m, &sm)| dcoef(q as isize + m as isize - k as isize) * sm)
                .sum()
        })
        .collect();
    (Poly::new(h), tail)
}

/// Polynomial part of V′/R^{1/2} at infinity.
pub fn h_from_endpoints(v: &Potential, support: &SupportIntervals) -> Poly {
    laurent(v, support.endpoints()).0
}

/// ∫ over the gap (b, a′) of h(x)·√R(x) dx, via x = m + r cos θ.
fn gap_integral(h: &Poly, endpoints: &[f64], gap: usize, nodes: usize) -> f64 {
    let b = endpoints[2 * gap + 1];
    let a = endpoints[2 * gap + 2];
    let m = 0.5 * (a + b);
    let r = 0.5 * (a - b);
    let others: Vec<f64> = endpoints
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != 2 * gap + 1 && k != 2 * gap + 2)
        .map(|(_, &e)| e)
        .collect();
    let w = PI / nodes as f64;
    chebyshev_angles(nodes)
        .into_iter()
        .map(|th| {
            let x = m + r * th.cos();
            let s = th.sin();
            let rest: f64 = others.iter().map(|&e| (x - e).abs()).product();
            h.eval(x) * r * r * s * s * rest.sqrt()
        })
        .sum::<f64>()
        * w
}

/// The 2q endpoint conditions: vanishing Laurent coefficients at z^{−1..−q},
/// the normalization at z^{−(q+1)}, and the q − 1 gap conditions.
pub fn endpoint_residuals(v: &Potential, endpoints: &[f64]) -> Vec<f64> {
    let q = endpoints.len() / 2;
    let (h, tail) = laurent(v, endpoints);
    let mut res: Vec<f64> = tail[..q].to_vec();
    res.push(tail[q] - 2.0);
    for gap in 0..q.saturating_sub(1) {
        res.push(gap_integral(&h, endpoints, gap, 256));
    }
    res
}

/// Default starting support for Newton: the Gaussian interval rescaled by
/// the leading coefficient, split symmetrically for q ≥ 2.
pub fn default_guess(v: &Potential, q: usize) -> SupportIntervals {
    guess(v, q, 1.0, 0.5)
}

/// Starting support of radius `outer` times the Gaussian scale, with inner
/// gaps opened to a fraction `inner` of that radius.
fn guess(v: &Potential, q: usize, outer: f64, inner: f64) -> SupportIntervals {
    let p = v.degree() as f64;
    let vp = v.coeff(v.degree());
    let a = 2f64.sqrt() * (1.0 / vp).powf(1.0 / p) * outer;
    let shift = -v.coeff(v.degree() - 1) / (p * vp);
    let e: Vec<f64> = match q {
        1 => vec![-a, a],
        2 => vec![-a, -inner * a, inner * a, a],
        _ => {
            let len = 2.0 * a / (2 * q - 1) as f64;
            (0..2 * q).map(|k| -a + len * k as f64).collect()
        }
    };
    SupportIntervals::new(e.into_iter().map(|x| x + shift).collect()).unwrap()
}

/// Alternative starting points tried by [`EquilibriumMeasure::solve`] after
/// the default one fails.
pub fn fallback_guesses(v: &Potential, q: usize) -> Vec<SupportIntervals> {
    let mut out = Vec::new();
    for outer in [1.0, 1.6, 2.5, 0.7, 4.0] {
        for inner in [0.5, 0.25, 0.1, 0.75] {
            if q == 1 && inner != 0.5 {
                continue;
            }
            out.push(guess(v, q, outer, inner));
        }
    }
    out.remove(0);
    out
}

const ENDPOINT_TOL: f64 = 1e-12;

/// Newton iteration on the endpoint conditions.
///
/// Returns `NonConvergence` if the iteration stalls and `WrongCutCount` if
/// it converges to endpoints whose density is negative somewhere on J.
pub fn solve_endpoints(v: &Potential, q: usize, guess: &SupportIntervals) -> Result<SupportIntervals> {
    if q == 0 || guess.q() != q {
        return Err(Error::InvalidInput(format!(
            "guess has {} cuts but q = {q}",
            guess.q()
        )));
    }
    let n = 2 * q;
    let mut e = guess.endpoints().to_vec();
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut res = endpoint_residuals(v, &e);
    let max_iter = 200;
    for it in 0..max_iter {
        if norm(&res) < ENDPOINT_TOL {
            let support = SupportIntervals::new(e)?;
            check_density_sign(v, &support)?;
            return Ok(support);
        }
        let scale = e.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let step = 1e-7 * scale;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let mut ep = e.clone();
            let mut em = e.clone();
            ep[k] += step;
            em[k] -= step;
            let rp = endpoint_residuals(v, &ep);
            let rm = endpoint_residuals(v, &em);
            for i in 0..n {
                jac[(i, k)] = (rp[i] - rm[i]) / (2.0 * step);
            }
        }
        let rhs = DVector::from_iterator(n, res.iter().map(|x| -x));
        let dx = jac
            .lu()
            .solve(&rhs)
            .filter(|d| d.iter().all(|x| x.is_finite()))
            .ok_or(Error::NonConvergence {
                what: "endpoint Newton (singular Jacobian)",
                iterations: it,
                residual: norm(&res),
            })?;
        let r0 = norm(&res);
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-6 {
            let trial: Vec<f64> = e.iter().zip(dx.iter()).map(|(a, d)| a + lambda * d).collect();
            if trial.windows(2).all(|w| w[0] < w[1]) {
                let rt = endpoint_residuals(v, &trial);
                if norm(&rt) < r0 || norm(&rt) < ENDPOINT_TOL {
                    e = trial;
                    res = rt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NonConvergence {
                what: "endpoint Newton (line search)",
                iterations: it,
                residual: r0,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "endpoint Newton",
        iterations: max_iter,
        residual: norm(&res),
    })
}

fn check_density_sign(v: &Potential, support: &SupportIntervals) -> Result<()> {
    let h = h_from_endpoints(v, support);
    let hmax = support
        .intervals()
        .flat_map(|(a, b)| [h.eval(a).abs(), h.eval(b).abs(), h.eval(0.5 * (a + b)).abs()])
        .fold(1e-300, f64::max);
    for (i, (a, b)) in support.intervals().enumerate() {
        let s = support.interval_sign(i);
        for k in 0..=400 {
            let x = a + (b - a) * k as f64 / 400.0;
            if s * h.eval(x) < -1e-9 * hmax {
                return Err(Error::WrongCutCount { q: support.q(), x });
            }
        }
    }
    Ok(())
}

/// Cosine expansion of a density restricted to one interval.
#[derive(Debug, Clone)]
struct IntervalExpansion {
    mid: f64,
    rad: f64,
    /// c_k = ∫_0^π p(m + r cos φ) r sin φ cos kφ dφ
    c: Vec<f64>,
    /// Angular nodes and the weighted samples f(φ_j)·π/M, kept for cross terms.
    samples: Vec<(f64, f64)>,
}

impl IntervalExpansion {
    fn build(a: f64, b: f64, density: &dyn Fn(f64) -> f64, nodes: usize) -> Self {
        let mid = 0.5 * (a + b);
        let rad = 0.5 * (b - a);
        let w = PI / nodes as f64;
        let samples: Vec<(f64, f64)> = chebyshev_angles(nodes)
            .into_iter()
            .map(|phi| {
                let x = mid + rad * phi.cos();
                (x, density(x) * rad * phi.sin() * w)
            })
            .collect();
        let kmax = nodes / 2;
        let mut c = vec![0.0; kmax + 1];
        for (j, &(_, fw)) in samples.iter().enumerate() {
            let phi = PI * (j as f64 + 0.5) / nodes as f64;
            let cphi = phi.cos();
            // cos kφ by the Chebyshev recurrence
            let (mut t0, mut t1) = (1.0, cphi);
            c[0] += fw;
            for ck in c.iter_mut().skip(1) {
                *ck += fw * t1;
                let t2 = 2.0 * cphi * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
        }
        IntervalExpansion { mid, rad, c, samples }
    }

    fn mass(&self) -> f64 {
        self.c[0]
    }

    /// ∫ log|x − y| over this interval's share of the measure.
    fn log_potential(&self, x: f64) -> f64 {
        let xx = (x - self.mid) / self.rad;
        let c0 = self.c[0];
        if xx.abs() <= 1.0 {
            let th = xx.acos();
            let mut s = 0.0;
            for (k, &ck) in self.c.iter().enumerate().skip(1) {
                s += 2.0 / k as f64 * ck * (k as f64 * th).cos();
            }
            c0 * (self.rad.ln() - LN_2) - s
        } else {
            let w = xx + xx.signum() * (xx * xx - 1.0).sqrt();
            let winv = 1.0 / w;
            let mut pw = 1.0;
            let mut s = 0.0;
            for (k, &ck) in self.c.iter().enumerate().skip(1) {
                pw *= winv;
                let term = 2.0 / k as f64 * ck * pw;
                s += term;
                if pw.abs() < 1e-18 {
                    break;
                }
            }
            c0 * (self.rad.ln() + (0.5 * w.abs()).ln()) - s
        }
    }

    /// Joukowski variable w with |w| > 1 and √(Z² − 1) on the same branch.
    fn joukowski(&self, z: Complex64) -> (Complex64, Complex64) {
        let zz = (z - self.mid) / self.rad;
        let root = (zz - 1.0).sqrt() * (zz + 1.0).sqrt();
        let mut w = zz + root;
        let mut root = root;
        if w.norm() < 1.0 {
            w = zz - root;
            root = -root;
        }
        (w, root)
    }

    fn g(&self, z: Complex64) -> Complex64 {
        let (w, _) = self.joukowski(z);
        let c0 = self.c[0];
        let winv = w.inv();
        let mut pw = Complex64::new(1.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        for (k, &ck) in self.c.iter().enumerate().skip(1) {
            pw *= winv;
            s += pw * (2.0 / k as f64 * ck);
            if pw.norm() < 1e-18 {
                break;
            }
        }
        let raw = c0 * (Complex64::new(self.rad.ln(), 0.0) + (w * 0.5).ln()) - s;
        // choose the sheet whose imaginary part tracks c0·arg(z − m)
        let target = c0 * (z - self.mid).arg();
        let shift = if c0 > 0.0 {
            ((target - raw.im) / (2.0 * PI * c0)).round()
        } else {
            0.0
        };
        raw + Complex64::new(0.0, 2.0 * PI * c0 * shift)
    }

    fn resolvent(&self, z: Complex64) -> Complex64 {
        let (w, root) = self.joukowski(z);
        let winv = w.inv();
        let mut pw = Complex64::new(1.0, 0.0);
        let mut s = Complex64::new(self.c[0], 0.0);
        for &ck in self.c.iter().skip(1) {
            pw *= winv;
            s += pw * (2.0 * ck);
            if pw.norm() < 1e-18 {
                break;
            }
        }
        s / (root * self.rad)
    }

    /// Self-interaction ∬ log|x − y| over this interval.
    fn self_energy(&self) -> f64 {
        let c0 = self.c[0];
        let mut s = 0.0;
        for (k, &ck) in self.c.iter().enumerate().skip(1) {
            s += 2.0 / k as f64 * ck * ck;
        }
        (self.rad.ln() - LN_2) * c0 * c0 - s
    }
}

/// A measure with a density on finitely many intervals, expanded for
/// logarithmic-potential computations.
#[derive(Debug, Clone)]
pub struct LogMeasure {
    parts: Vec<IntervalExpansion>,
}

impl LogMeasure {
    pub fn new(support: &SupportIntervals, density: &dyn Fn(f64) -> f64, nodes: usize) -> Self {
        let parts = support
            .intervals()
            .map(|(a, b)| IntervalExpansion::build(a, b, density, nodes))
            .collect();
        LogMeasure { parts }
    }

    /// Doubles the angular resolution until the cosine coefficients settle.
    pub fn converged(support: &SupportIntervals, density: &dyn Fn(f64) -> f64) -> Self {
        let mut nodes = 128;
        let mut cur = LogMeasure::new(support, density, nodes);
        while nodes < 16384 {
            nodes *= 2;
            let next = LogMeasure::new(support, density, nodes);
            let diff = cur
                .parts
                .iter()
                .zip(&next.parts)
                .flat_map(|(a, b)| a.c.iter().zip(&b.c).map(|(x, y)| (x - y).abs()))
                .fold(0.0, f64::max);
            cur = next;
            if diff < 1e-14 {
                break;
            }
        }
        cur
    }

    pub fn mass(&self) -> f64 {
        self.parts.iter().map(|p| p.mass()).sum()
    }

    /// ∫ x^k dν.
    pub fn moment(&self, k: i32) -> f64 {
        self.integrate(|x| x.powi(k))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.parts
            .iter()
            .flat_map(|p| p.samples.iter())
            .map(|&(x, fw)| fw * f(x))
            .sum()
    }

    /// U(x) = ∫ log|x − y| dν(y).
    pub fn log_potential(&self, x: f64) -> f64 {
        self.parts.iter().map(|p| p.log_potential(x)).sum()
    }

    /// g(z) = ∫ log(z − y) dν(y) with the principal logarithm.
    pub fn g(&self, z: Complex64) -> Complex64 {
        self.parts.iter().map(|p| p.g(z)).sum()
    }

    /// ω(z) = ∫ dν(y)/(z − y).
    pub fn resolvent(&self, z: Complex64) -> Complex64 {
        self.parts.iter().map(|p| p.resolvent(z)).sum()
    }

    /// ∬ log|x − y| dν dν.
    pub fn log_energy(&self) -> f64 {
        let mut total = 0.0;
        for (i, pi) in self.parts.iter().enumerate() {
            total += pi.self_energy();
            for (j, pj) in self.parts.iter().enumerate() {
                if i != j {
                    total += pj.samples.iter().map(|&(x, fw)| fw * pi.log_potential(x)).sum::<f64>();
                }
            }
        }
        total
    }

    /// I_V(ν) = −∬ log|x − y| dν dν + ∫ V dν.
    pub fn energy(&self, v: &Potential) -> f64 {
        -self.log_energy() + self.integrate(|x| v.eval(x))
    }
}

/// I_V(ν) for an arbitrary density supported on the given intervals.
pub fn energy_of_density(v: &Potential, support: &SupportIntervals, density: &dyn Fn(f64) -> f64) -> f64 {
    LogMeasure::converged(support, density).energy(v)
}

/// The equilibrium measure of a potential together with its expansion data.
#[derive(Debug, Clone)]
pub struct EquilibriumMeasure {
    pub support: SupportIntervals,
    pub h: Poly,
    pub lagrange_l: f64,
    pub potential: Potential,
    expansion: LogMeasure,
}

impl EquilibriumMeasure {
    /// Assembles the measure from endpoints; h is recomputed from the Laurent expansion.
    pub fn from_support(v: &Potential, support: SupportIntervals) -> Self {
        let h = h_from_endpoints(v, &support);
        Self::with_h(v, support, h)
    }

    fn with_h(v: &Potential, support: SupportIntervals, h: Poly) -> Self {
        let r = support.r_poly();
        let sup = support.clone();
        let hh = h.clone();
        let dens = move |x: f64| density_raw(&sup, &hh, &r, x);
        let expansion = LogMeasure::converged(&support, &dens);
        let (a, b) = support.intervals().next().unwrap();
        let mut m = EquilibriumMeasure {
            support,
            h,
            lagrange_l: 0.0,
            potential: v.clone(),
            expansion,
        };
        let x0 = 0.5 * (a + b);
        m.lagrange_l = 2.0 * m.expansion.log_potential(x0) - v.eval(x0);
        m
    }

    /// Solves for the q-cut measure starting from `default_guess`.
    pub fn solve(v: &Potential, q: usize) -> Result<Self> {
        let first = Self::solve_from(v, &default_guess(v, q));
        if first.is_ok() {
            return first;
        }
        let mut wrong_cut = first.as_ref().err().filter(|e| matches!(e, Error::WrongCutCount { .. })).cloned();
        let mut last = first;
        for g in fallback_guesses(v, q) {
            match Self::solve_from(v, &g) {
                Ok(m) => return Ok(m),
                Err(e @ Error::WrongCutCount { .. }) => wrong_cut = Some(e.clone()),
                Err(e) => last = Err(e),
            }
        }
        match wrong_cut {
            Some(e) => Err(e),
            None => last,
        }
    }

    pub fn solve_from(v: &Potential, guess: &SupportIntervals) -> Result<Self> {
        let support = solve_endpoints(v, guess.q(), guess)?;
        Ok(Self::from_support(v, support))
    }

    pub fn density(&self, x: f64) -> f64 {
        density_raw(&self.support, &self.h, &self.support.r_poly(), x)
    }

    pub fn expansion(&self) -> &LogMeasure {
        &self.expansion
    }

    pub fn mass(&self) -> f64 {
        self.expansion.mass()
    }

    /// m_k = ∫ x^k dν.
    pub fn moment(&self, k: i32) -> f64 {
        self.expansion.moment(k)
    }

    pub fn log_potential(&self, x: f64) -> f64 {
        self.expansion.log_potential(x)
    }

    /// 2∫ log|x − y| dν(y) − V(x); equals l on J.
    pub fn effective_potential(&self, x: f64) -> f64 {
        2.0 * self.log_potential(x) - self.potential.eval(x)
    }

    /// g(z) = ∫ log(z − x) dν(x), principal branch, for z off (−∞, b_q].
    pub fn g_function(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 && z.re <= self.support.right() {
            return Err(Error::BranchCut(z));
        }
        Ok(self.expansion.g(z))
    }

    /// ω(z) = ∫ dν(x)/(z − x) by expansion of the density.
    pub fn resolvent(&self, z: Complex64) -> Complex64 {
        self.expansion.resolvent(z)
    }

    /// ω(z) = V′(z)/2 − h(z) R^{1/2}(z)/2 with R^{1/2} ~ z^q at infinity.
    pub fn resolvent_algebraic(&self, z: Complex64) -> Complex64 {
        let root: Complex64 = self
            .support
            .endpoints()
            .iter()
            .map(|&e| (z - e).sqrt())
            .product();
        0.5 * self.potential.derivative().eval_complex(z) - 0.5 * self.h.eval_complex(z) * root
    }

    pub fn energy(&self) -> f64 {
        self.expansion.energy(&self.potential)
    }

    /// q(x) = −(V′(x)/2)² + ∫ (V′(x) − V′(y))/(x − y) dν(y), a polynomial.
    pub fn q_polynomial(&self) -> Poly {
        let d = self.potential.derivative();
        let half = Poly::new(d.coeffs.iter().map(|c| 0.5 * c).collect());
        let mut q = half.mul(&half);
        for c in q.coeffs.iter_mut() {
            *c = -*c;
        }
        // (x^i − y^i)/(x − y) = Σ_{j<i} x^j y^{i−1−j}
        for (i, &di) in d.coeffs.iter().enumerate() {
            for j in 0..i {
                let mom = self.moment((i - 1 - j) as i32);
                if q.coeffs.len() <= j {
                    q.coeffs.resize(j + 1, 0.0);
                }
                q.coeffs[j] += di * mom;
            }
        }
        q
    }
}

fn density_raw(support: &SupportIntervals, h: &Poly, r: &Poly, x: f64) -> f64 {
    match support.locate(x) {
        Some(i) => {
            let v = support.interval_sign(i) * h.eval(x) * r.eval(x).abs().sqrt() / (2.0 * PI);
            v.max(0.0)
        }
        None => 0.0,
    }
}

/// Closed-form equilibrium measure of V = t x²/2 + x⁴/4.
pub fn quartic_closed_form(t: f64) -> EquilibriumMeasure {
    let v = Potential::quartic(t, 1.0).unwrap();
    if t >= -2.0 {
        let a = ((-2.0 * t + 2.0 * (t * t + 12.0).sqrt()) / 3.0).sqrt();
        let c = (t + (t * t / 4.0 + 3.0).sqrt()) / 3.0;
        let s = SupportIntervals::new(vec![-a, a]).unwrap();
        EquilibriumMeasure::with_h(&v, s, Poly::new(vec![2.0 * c, 0.0, 1.0]))
    } else {
        let a = (2.0 - t).sqrt();
        let b = (-2.0 - t).sqrt();
        let s = SupportIntervals::new(vec![-a, -b, b, a]).unwrap();
        EquilibriumMeasure::with_h(&v, s, Poly::new(vec![0.0, 1.0]))
    }
}

/// Outcome of checking the Euler–Lagrange conditions on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct VariationalReport {
    /// max over grid ∩ J of |2U(x) − V(x) − l|
    pub on_support_deviation: f64,
    /// min over grid \ J of l − (2U(x) − V(x)); +∞ if no grid point lies off J
    pub off_support_margin: f64,
    /// min of |h| over J (sampled, endpoints included)
    pub min_abs_h: f64,
    pub regular: bool,
}

pub fn variational_check(m: &EquilibriumMeasure, grid: &[f64]) -> VariationalReport {
    let mut dev: f64 = 0.0;
    let mut margin = f64::INFINITY;
    for &x in grid {
        let e = m.effective_potential(x);
        if m.support.locate(x).is_some() {
            dev = dev.max((e - m.lagrange_l).abs());
        } else {
            margin = margin.min(m.lagrange_l - e);
        }
    }
    let mut min_h = f64::INFINITY;
    let mut hscale: f64 = 0.0;
    for (a, b) in m.support.intervals() {
        for k in 0..=1000 {
            let x = a + (b - a) * k as f64 / 1000.0;
            let hv = m.h.eval(x).abs();
            min_h = min_h.min(hv);
            hscale = hscale.max(hv);
        }
    }
    let regular = dev < 1e-6 && margin > 0.0 && min_h > 1e-8 * hscale.max(1.0);
    VariationalReport {
        on_support_deviation: dev,
        off_support_margin: margin,
        min_abs_h: min_h,
        regular,
    }
}

/// Gauss–Legendre integral of the density over J (independent of the expansion).
pub fn total_mass_gl(m: &EquilibriumMeasure, order: usize) -> f64 {
    let g = GaussLegendre::cached(order);
    m.support
        .intervals()
        .map(|(a, b)| {
            // x = mid + rad cos φ on [0, π], so the √ endpoint factors become smooth
            let mid = 0.5 * (a + b);
            let rad = 0.5 * (b - a);
            g.integrate(0.0, PI, |phi| m.density(mid + rad * phi.cos()) * rad * phi.sin())
        })
        .sum()
}
