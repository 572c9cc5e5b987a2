//! Orthogonal polynomials for the weight e^{−N V(x)} on the real line.
//!
//! Recurrence coefficients come from a discretized Stieltjes procedure on
//! composite Gauss–Legendre panels. Norms h_n are kept as logarithms since they
//! under- or overflow long before the coefficients become interesting.

use crate::band::Band;
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::quad::composite_nodes;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// γ_n, β_n and ln h_n for n = 0..=nmax. `gamma[0]` is 0.
#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceTable {
    pub n_weight: f64,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub ln_h: Vec<f64>,
}

impl RecurrenceTable {
    pub fn nmax(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn h(&self, n: usize) -> f64 {
        self.ln_h[n].exp()
    }

    /// Leading `size × size` block of the Jacobi matrix.
    pub fn jacobi(&self, size: usize) -> Band {
        assert!(size <= self.gamma.len(), "table too short for requested size");
        Band::tridiagonal(&self.beta[..size], &self.gamma[..size])
    }

    /// Table with the exact Gaussian coefficients γ_n² = n/(2N), h_0 = √(π/N).
    pub fn gaussian(n_weight: f64, nmax: usize) -> Self {
        let gamma: Vec<f64> = (0..=nmax).map(|n| (n as f64 / (2.0 * n_weight)).sqrt()).collect();
        let mut ln_h = vec![0.5 * (std::f64::consts::PI / n_weight).ln()];
        for n in 1..=nmax {
            ln_h.push(ln_h[n - 1] + (gamma[n] * gamma[n]).ln());
        }
        RecurrenceTable {
            n_weight,
            gamma,
            beta: vec![0.0; nmax + 1],
            ln_h,
        }
    }
}

/// Interval outside which x^{2n} e^{−N V(x)} is below e^{−75} of its peak.
fn weight_window(v: &Potential, n_weight: f64, nmax: usize) -> (f64, f64) {
    let f = |x: f64| 2.0 * (nmax as f64 + 1.0) * (1.0 + x.abs()).ln() - n_weight * v.eval(x);
    let mut x_hi = 1.0;
    loop {
        let grid = 4000;
        let xs: Vec<f64> = (0..=grid)
            .map(|i| -x_hi + 2.0 * x_hi * i as f64 / grid as f64)
            .collect();
        let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let fmax = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let cut = fmax - 75.0;
        if vals[0] < cut && vals[grid] < cut {
            let first = vals.iter().position(|&y| y >= cut).unwrap();
            let last = vals.iter().rposition(|&y| y >= cut).unwrap();
            let step = 2.0 * x_hi / grid as f64;
            return (xs[first] - 2.0 * step, xs[last] + 2.0 * step);
        }
        x_hi *= 2.0;
        assert!(x_hi < 1e8, "weight is not confining");
    }
}

fn stieltjes(
    v: &Potential,
    n_weight: f64,
    nmax: usize,
    xs: &[f64],
    ws: &[f64],
) -> Result<(RecurrenceTable, f64)> {
    let vmin = xs.iter().map(|&x| v.eval(x)).fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = xs
        .iter()
        .zip(ws)
        .map(|(&x, &wq)| wq * (-n_weight * (v.eval(x) - vmin)).exp())
        .collect();
    let h0: f64 = w.iter().sum();
    let mut gamma = vec![0.0; nmax + 1];
    let mut beta = vec![0.0; nmax + 1];
    let mut ln_h = vec![0.0; nmax + 1];
    ln_h[0] = h0.ln() - n_weight * vmin;
    // orthonormal vectors φ_n sampled at the nodes
    let mut prev = vec![0.0; xs.len()];
    let mut cur = vec![1.0 / h0.sqrt(); xs.len()];
    let mut next = vec![0.0; xs.len()];
    // largest normalized density φ_n² e^{−N(V − vmin)} seen at either window end
    let last = xs.len() - 1;
    let mut edge: f64 = 0.0;
    for n in 0..=nmax {
        edge = edge
            .max(w[0] / ws[0] * cur[0] * cur[0])
            .max(w[last] / ws[last] * cur[last] * cur[last]);
        let b: f64 = (0..xs.len()).map(|i| w[i] * xs[i] * cur[i] * cur[i]).sum();
        beta[n] = b;
        if n == nmax {
            break;
        }
        let g = gamma[n];
        for i in 0..xs.len() {
            next[i] = (xs[i] - b) * cur[i] - g * prev[i];
        }
        // one step of reorthogonalization against φ_n and φ_{n−1}
        for vecref in [&cur, &prev] {
            let c: f64 = (0..xs.len()).map(|i| w[i] * next[i] * vecref[i]).sum();
            for i in 0..xs.len() {
                next[i] -= c * vecref[i];
            }
        }
        let g2: f64 = (0..xs.len()).map(|i| w[i] * next[i] * next[i]).sum();
        if n >= 1 && g2 < 1e-13 * gamma[1] * gamma[1] || !(g2 > 0.0) {
            return Err(Error::PrecisionLoss {
                n: n + 1,
                ratio: g2,
            });
        }
        let gn = g2.sqrt();
        gamma[n + 1] = gn;
        ln_h[n + 1] = ln_h[n] + g2.ln();
        for i in 0..xs.len() {
            next[i] /= gn;
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok((
        RecurrenceTable {
            n_weight,
            gamma,
            beta,
            ln_h,
        },
        edge,
    ))
}

/// Edge density below which the window is taken to hold the whole measure.
const EDGE_DENSITY: f64 = 1e-30;

/// Recurrence coefficients of the weight e^{−N V} up to index `nmax`.
///
/// Panels are doubled until two successive tables agree to 1e−12.
pub fn recurrence_from_weight(v: &Potential, n_weight: f64, nmax: usize) -> Result<RecurrenceTable> {
    let (mut lo, mut hi) = weight_window(v, n_weight, nmax);
    // symmetric windows keep β exactly antisymmetric for even V
    if v.is_even() {
        let m = lo.abs().max(hi.abs());
        (lo, hi) = (-m, m);
    }
    // the envelope behind `weight_window` can undershoot where P_n² lives; widen until
    // every φ_n² e^{−NV} is negligible at both ends
    let order = 32;
    let base_panels = ((nmax + 1) / 8).max(8);
    loop {
        let (xs, ws) = composite_nodes(lo, hi, base_panels, order);
        let (_, edge) = stieltjes(v, n_weight, nmax, &xs, &ws)?;
        if edge < EDGE_DENSITY {
            break;
        }
        let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        (lo, hi) = (c - 1.2 * r, c + 1.2 * r);
        if r > 1e8 {
            return Err(Error::InvalidInput("weight is not confining".into()));
        }
    }
    let mut panels = base_panels;
    let (xs, ws) = composite_nodes(lo, hi, panels, order);
    let (mut table, _) = stieltjes(v, n_weight, nmax, &xs, &ws)?;
    let mut diff = f64::INFINITY;
    for _ in 0..6 {
        panels *= 2;
        let (xs, ws) = composite_nodes(lo, hi, panels, order);
        let (next, _) = stieltjes(v, n_weight, nmax, &xs, &ws)?;
        diff = table_difference(&table, &next);
        table = next;
        if diff < 1e-12 {
            return Ok(table);
        }
    }
    if diff < 1e-10 {
        // rounding floor of the recursion itself
        return Ok(table);
    }
    Err(Error::NonConvergence {
        what: "Stieltjes quadrature refinement",
        iterations: 6,
        residual: diff,
    })
}

fn table_difference(a: &RecurrenceTable, b: &RecurrenceTable) -> f64 {
    let scale = a.gamma.iter().cloned().fold(1.0, f64::max);
    let mut d: f64 = 0.0;
    for n in 0..a.gamma.len() {
        d = d.max((a.gamma[n] - b.gamma[n]).abs() / scale);
        d = d.max((a.beta[n] - b.beta[n]).abs() / scale);
        d = d.max((a.ln_h[n] - b.ln_h[n]).abs() / (1.0 + a.ln_h[n].abs()));
    }
    d
}

/// V′(Q) for the leading `size × size` Jacobi block. Entries more than p − 1
/// rows away from the truncation edge coincide with the infinite matrix.
pub fn vprime_of_q(v: &Potential, table: &RecurrenceTable, size: usize) -> Band {
    table.jacobi(size).poly_eval(&v.derivative().coeffs)
}

/// (γ_n [V′(Q)]_{n,n−1} − n/N, [V′(Q)]_{nn}).
pub fn string_residual(v: &Potential, table: &RecurrenceTable, n: usize) -> (f64, f64) {
    let size = (n + v.degree() + 1).min(table.gamma.len());
    let b = vprime_of_q(v, table, size);
    let first = if n == 0 {
        0.0
    } else {
        table.gamma[n] * b.get(n, n - 1) - n as f64 / table.n_weight
    };
    (first, b.get(n, n))
}

/// Truncated Jacobi matrix of the Hamiltonian: indices 0..=M with γ_M = boundary, β_M = 0.
fn hamiltonian_matrix(gamma: &[f64], beta: &[f64], boundary: f64) -> Band {
    let m = gamma.len() + 1;
    let mut off = vec![0.0; m + 1];
    off[1..m].copy_from_slice(gamma);
    off[m] = boundary;
    let mut diag = vec![0.0; m + 1];
    diag[..beta.len()].copy_from_slice(beta);
    Band::tridiagonal(&diag, &off)
}

/// H = N Tr V(Q) − Σ_{n=1}^{M−1} n ln γ_n² with `gamma` = (γ_1..γ_{M−1}) and
/// `beta` = (β_0..β_{M−1}).
pub fn hamiltonian(v: &Potential, gamma: &[f64], beta: &[f64], n_weight: f64, boundary: f64) -> Result<f64> {
    if let Some((i, &g)) = gamma.iter().enumerate().find(|(_, &g)| !(g > 0.0)) {
        return Err(Error::NonPositiveGamma { n: i + 1, value: g });
    }
    let q = hamiltonian_matrix(gamma, beta, boundary);
    let tr = q.poly_eval(&v.as_poly().coeffs).trace();
    let logs: f64 = gamma
        .iter()
        .enumerate()
        .map(|(i, &g)| (i + 1) as f64 * (g * g).ln())
        .sum();
    Ok(n_weight * tr - logs)
}

/// (∂H/∂γ_n, ∂H/∂β_n) = (2N[V′(Q)]_{n,n−1} − 2n/γ_n, N[V′(Q)]_{nn}).
pub fn hamiltonian_gradient(
    v: &Potential,
    gamma: &[f64],
    beta: &[f64],
    n_weight: f64,
    boundary: f64,
) -> (Vec<f64>, Vec<f64>) {
    let q = hamiltonian_matrix(gamma, beta, boundary);
    let d = q.poly_eval(&v.derivative().coeffs);
    let dg = gamma
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let n = i + 1;
            2.0 * n_weight * d.get(n, n - 1) - 2.0 * n as f64 / g
        })
        .collect();
    let db = (0..beta.len()).map(|n| n_weight * d.get(n, n)).collect();
    (dg, db)
}

/// Solution of the even-potential minimization: γ_0..γ_M with γ_0 = 0 and γ_M = boundary.
#[derive(Debug, Clone, Serialize)]
pub struct StringSolution {
    pub n_weight: f64,
    pub gamma: Vec<f64>,
    pub max_gradient: f64,
    pub cg_iterations: usize,
    pub newton_iterations: usize,
}

impl StringSolution {
    pub fn gamma_sq(&self, n: usize) -> f64 {
        self.gamma[n] * self.gamma[n]
    }

    /// First string residual γ_n[V′(Q)]_{n,n−1} − n/N at interior n.
    pub fn residual(&self, v: &Potential, n: usize) -> f64 {
        let m = self.gamma.len() - 1;
        let inner = &self.gamma[1..m];
        let (g, _) = hamiltonian_gradient(v, inner, &vec![0.0; m], self.n_weight, self.gamma[m]);
        self.gamma[n] / (2.0 * self.n_weight) * g[n - 1]
    }
}

/// Uniform solution R(λ) of the string equation with constant γ² = R and β = 0:
/// Σ_k d_{2k+1} C(2k+1, k) R^{k+1} = λ.
fn uniform_profile(v: &Potential, lambda: f64) -> f64 {
    let d = v.derivative().coeffs;
    let f = |r: f64| -> f64 {
        let mut s = 0.0;
        let mut binom = 1.0; // C(2k+1, k)
        for k in 0..d.len() / 2 {
            if k > 0 {
                let kk = k as f64;
                binom *= (2.0 * kk + 1.0) * (2.0 * kk) / ((kk + 1.0) * kk);
            }
            s += d.get(2 * k + 1).copied().unwrap_or(0.0) * binom * r.powi(k as i32 + 1);
        }
        s - lambda
    };
    // largest root by bisection from above
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = hi;
    while lo > 1e-12 && f(lo) >= 0.0 {
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Starting γ_n² from the scaling profile: for the even quartic with t < 0 the
/// period-two pair (R, L) below λ_c = t²/(4g), otherwise the uniform solution.
fn initial_profile(v: &Potential, n_weight: f64, m: usize) -> Vec<f64> {
    let quartic = v.degree() == 4 && v.is_even();
    let t = 2.0 * v.coeff(2);
    let g = 4.0 * v.coeff(4);
    (1..m)
        .map(|n| {
            let lambda = n as f64 / n_weight;
            if quartic && t < 0.0 && lambda < t * t / (4.0 * g) {
                let disc = (t * t - 4.0 * g * lambda).max(0.0).sqrt();
                let r = (-t + disc) / (2.0 * g);
                let l = (-t - disc) / (2.0 * g);
                if n % 2 == 1 {
                    r
                } else {
                    l.max(1e-3 * r)
                }
            } else {
                uniform_profile(v, lambda)
            }
        })
        .collect()
}

/// Minimizes H over γ_1..γ_{M−1} (β ≡ 0) with γ_0 = 0 and γ_M = `boundary`.
///
/// Nonlinear conjugate gradients from the scaling profile, then Newton steps
/// with a finite-difference Hessian to drive the gradient to round-off.
pub fn minimize_hamiltonian(v: &Potential, n_weight: f64, m: usize, boundary: f64) -> Result<StringSolution> {
    if !v.is_even() {
        return Err(Error::InvalidInput("minimizer expects an even potential".into()));
    }
    if m < 2 {
        return Err(Error::InvalidInput("need M >= 2".into()));
    }
    let beta = vec![0.0; m];
    let energy = |g: &[f64]| hamiltonian(v, g, &beta, n_weight, boundary).unwrap_or(f64::INFINITY);
    let grad = |g: &[f64]| hamiltonian_gradient(v, g, &beta, n_weight, boundary).0;
    let mut x: Vec<f64> = initial_profile(v, n_weight, m).iter().map(|r| r.sqrt()).collect();
    let scaled_norm = |x: &[f64], g: &[f64]| {
        x.iter()
            .zip(g)
            .map(|(xi, gi)| (xi * gi / (2.0 * n_weight)).abs())
            .fold(0.0, f64::max)
    };

    // Polak–Ribière conjugate gradients with backtracking
    let mut g = grad(&x);
    let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut e = energy(&x);
    let mut cg_iterations = 0;
    for it in 0..5000 {
        cg_iterations = it;
        if scaled_norm(&x, &g) < 1e-7 {
            break;
        }
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        if slope >= 0.0 {
            d = g.iter().map(|v| -v).collect();
        }
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        // largest step keeping γ positive, then Armijo backtracking
        let mut step = d
            .iter()
            .zip(&x)
            .filter(|(di, _)| **di < 0.0)
            .map(|(di, xi)| -0.9 * xi / di)
            .fold(1.0f64, f64::min);
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let et = energy(&trial);
            if et <= e + 1e-4 * step * slope {
                accepted = Some((trial, et));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, en)) = accepted else {
            if it == 0 {
                return Err(Error::LineSearchFailure(it));
            }
            break;
        };
        let gn = grad(&xn);
        let num: f64 = gn.iter().zip(&g).map(|(a, b)| a * (a - b)).sum();
        let den: f64 = g.iter().map(|a| a * a).sum();
        let beta_pr = (num / den).max(0.0);
        d = gn.iter().zip(&d).map(|(a, b)| -a + beta_pr * b).collect();
        x = xn;
        g = gn;
        e = en;
    }

    // Newton polishing
    let n = x.len();
    let mut newton_iterations = 0;
    for it in 0..30 {
        newton_iterations = it;
        if scaled_norm(&x, &g) < 1e-13 {
            break;
        }
        let mut hess = DMatrix::<f64>::zeros(n, n);
        let bw = v.degree();
        // the Hessian is banded; perturb columns that share no rows together
        for start in 0..(2 * bw + 1) {
            let cols: Vec<usize> = (start..n).step_by(2 * bw + 1).collect();
            let mut xp = x.clone();
            let mut xm = x.clone();
            for &c in &cols {
                let h = 1e-6 * x[c];
                xp[c] += h;
                xm[c] -= h;
            }
            let gp = grad(&xp);
            let gm = grad(&xm);
            for &c in &cols {
                let h = 1e-6 * x[c];
                let lo = c.saturating_sub(bw);
                let hi = (c + bw).min(n - 1);
                for r in lo..=hi {
                    hess[(r, c)] = (gp[r] - gm[r]) / (2.0 * h);
                }
            }
        }
        let rhs = DVector::from_iterator(n, g.iter().map(|v| -v));
        let Some(dx) = hess.lu().solve(&rhs) else {
            break;
        };
        let mut step = 1.0;
        let mut improved = false;
        let g0 = scaled_norm(&x, &g);
        for _ in 0..30 {
            let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(xi, di)| xi + step * di).collect();
            if trial.iter().all(|&t| t > 0.0) {
                let gt = grad(&trial);
                if scaled_norm(&trial, &gt) < g0 {
                    x = trial;
                    g = gt;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let max_gradient = scaled_norm(&x, &g);
    let mut gamma = Vec::with_capacity(m + 1);
    gamma.push(0.0);
    gamma.extend_from_slice(&x);
    gamma.push(boundary);
    Ok(StringSolution {
        n_weight,
        gamma,
        max_gradient,
        cg_iterations,
        newton_iterations,
    })
}

/// Evaluates φ_k(x) = P_k(x)/√h_k for k = 0..=n and their x-derivatives,
/// returned as (mantissa, log-scale) so that nothing overflows.
fn orthonormal_values(table: &RecurrenceTable, n: usize, x: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut val = vec![0.0; n + 1];
    let mut der = vec![0.0; n + 1];
    let mut logscale = vec![0.0; n + 1];
    let mut scale = -0.5 * table.ln_h[0];
    val[0] = 1.0;
    der[0] = 0.0;
    logscale[0] = scale;
    let (mut p_prev, mut d_prev) = (0.0, 0.0);
    let (mut p_cur, mut d_cur) = (1.0, 0.0);
    for k in 0..n {
        let g = table.gamma[k];
        let gn = table.gamma[k + 1];
        let b = table.beta[k];
        let mut p_next = ((x - b) * p_cur - g * p_prev) / gn;
        let mut d_next = ((x - b) * d_cur + p_cur - g * d_prev) / gn;
        let mag = p_next.abs().max(d_next.abs());
        if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
            let s = mag.ln();
            p_next /= mag;
            d_next /= mag;
            p_cur /= mag;
            d_cur /= mag;
            scale += s;
        }
        p_prev = p_cur;
        d_prev = d_cur;
        p_cur = p_next;
        d_cur = d_next;
        val[k + 1] = p_cur;
        der[k + 1] = d_cur;
        logscale[k + 1] = scale;
    }
    (val, der, logscale)
}

/// ψ_n(x) = h_n^{−1/2} P_n(x) e^{−N V(x)/2}, by the three-term recurrence.
pub fn psi(table: &RecurrenceTable, v: &Potential, n: usize, x: f64) -> f64 {
    psi_all(table, v, n, x)[n]
}

/// ψ_0(x), …, ψ_n(x).
pub fn psi_all(table: &RecurrenceTable, v: &Potential, n: usize, x: f64) -> Vec<f64> {
    let (val, _, ls) = orthonormal_values(table, n, x);
    let e = -0.5 * table.n_weight * v.eval(x);
    val.iter().zip(&ls).map(|(p, s)| p * (s + e).exp()).collect()
}

/// The finite-N Christoffel–Darboux kernel built from a recurrence table.
#[derive(Debug, Clone)]
pub struct CdKernel {
    pub table: RecurrenceTable,
    pub potential: Potential,
    pub size: usize,
    /// |x − y| below which the confluent form is used
    pub switch: f64,
}

impl CdKernel {
    pub fn new(table: RecurrenceTable, potential: Potential, size: usize) -> Self {
        assert!(size >= 1 && size <= table.nmax(), "table must reach index `size`");
        CdKernel {
            table,
            potential,
            size,
            switch: 1e-6,
        }
    }

    /// (ψ_N, ψ_{N−1}) at x together with the φ-derivatives, sharing one exponent.
    fn edge_pair(&self, x: f64) -> (f64, f64, f64, f64, f64) {
        let n = self.size;
        let (val, der, ls) = orthonormal_values(&self.table, n, x);
        // bring both to the scale of index n
        let rel = (ls[n - 1] - ls[n]).exp();
        let e = ls[n] - 0.5 * self.table.n_weight * self.potential.eval(x);
        (val[n], val[n - 1] * rel, der[n], der[n - 1] * rel, e)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let scale = 1.0 + x.abs().max(y.abs());
        if (x - y).abs() < self.switch * scale {
            return self.diagonal(0.5 * (x + y));
        }
        let (pn_x, pm_x, _, _, ex) = self.edge_pair(x);
        let (pn_y, pm_y, _, _, ey) = self.edge_pair(y);
        self.table.gamma[self.size] * (pn_x * pm_y - pm_x * pn_y) * (ex + ey).exp() / (x - y)
    }

    /// K_N(x, x) = γ_N (ψ_N′ψ_{N−1} − ψ_{N−1}′ψ_N)(x).
    pub fn diagonal(&self, x: f64) -> f64 {
        let (pn, pm, dn, dm, e) = self.edge_pair(x);
        self.table.gamma[self.size] * (dn * pm - dm * pn) * (2.0 * e).exp()
    }

    /// Σ_{n<N} ψ_n(x) ψ_n(y), the defining sum.
    pub fn eval_sum(&self, x: f64, y: f64) -> f64 {
        let a = psi_all(&self.table, &self.potential, self.size - 1, x);
        let b = psi_all(&self.table, &self.potential, self.size - 1, y);
        a.iter().zip(&b).map(|(p, q)| p * q).sum()
    }
}

/// Bulk rescaling (1/(Nρ)) K_N(x₀ + u/(Nρ), x₀ + v/(Nρ)) with ρ the limiting density at x₀.
pub fn bulk_scaled(kernel: &CdKernel, x0: f64, rho: f64, u: f64, v: f64) -> f64 {
    let s = 1.0 / (kernel.size as f64 * rho);
    s * kernel.eval(x0 + u * s, x0 + v * s)
}

/// Edge rescaling s K_N(b + u s, b + v s) with s = (Nρ₁)^{−2/3}, ρ₁ the square-root
/// edge coefficient. Positive u points out of the support at a right edge.
pub fn edge_scaled(kernel: &CdKernel, edge: f64, rho1: f64, u: f64, v: f64) -> f64 {
    let s = (kernel.size as f64 * rho1).powf(-2.0 / 3.0);
    s * kernel.eval(edge + u * s, edge + v * s)
}

/// det(K_N(x_k, x_l)), the m-point correlation function.
pub fn correlation_function(kernel: &CdKernel, points: &[f64]) -> f64 {
    let m = points.len();
    let mat = DMatrix::from_fn(m, m, |i, j| kernel.eval(points[i], points[j]));
    mat.determinant()
}

/// Right-hand sides of the v_k-deformation equations at index n:
/// ((1/N)∂ln h_n/∂v_k, (1/N)∂γ_n/∂v_k, (1/N)∂β_n/∂v_k).
pub fn dv_derivatives(table: &RecurrenceTable, k: usize, n: usize) -> (f64, f64, f64) {
    let size = (n + k + 2).min(table.gamma.len());
    let qk = table.jacobi(size).pow(k);
    let dlnh = -qk.get(n, n);
    let (dg, db) = if n == 0 {
        (0.0, -table.gamma[1] * qk.get(1, 0))
    } else {
        (
            0.5 * table.gamma[n] * (qk.get(n - 1, n - 1) - qk.get(n, n)),
            table.gamma[n] * qk.get(n, n - 1) - table.gamma[n + 1] * qk.get(n + 1, n),
        )
    };
    (dlnh, dg, db)
}

/// ρ₁ in p_V(x) ≈ (ρ₁/π)|x − b|^{1/2} at the right edge b of a one-cut measure.
pub fn right_edge_constant(m: &crate::equilibrium::EquilibriumMeasure) -> f64 {
    let b = m.support.right();
    let others: f64 = m.support.endpoints()[..m.support.endpoints().len() - 1]
        .iter()
        .map(|&e| (b - e).abs())
        .product();
    0.5 * m.h.eval(b).abs() * others.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_table_matches_closed_form() {
        let t = recurrence_from_weight(&Potential::gaussian(), 10.0, 60).unwrap();
        let exact = RecurrenceTable::gaussian(10.0, 60);
        for n in 1..=50 {
            assert!((t.gamma[n].powi(2) - n as f64 / 20.0).abs() < 1e-10, "n={n}");
            assert!(t.beta[n].abs() < 1e-13);
            assert!((t.ln_h[n] - exact.ln_h[n]).abs() < 1e-10 * (1.0 + exact.ln_h[n].abs()));
        }
        let t1 = recurrence_from_weight(&Potential::gaussian(), 1.0, 4).unwrap();
        assert!((t1.h(0) - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn gradient_identity_in_gamma_and_beta() {
        let v = Potential::new(vec![0.3, -0.5, 0.2, 0.25]).unwrap();
        let gamma = vec![0.6, 0.8, 0.9, 1.0, 0.95, 1.1];
        let beta = vec![0.1, -0.2, 0.05, 0.0, 0.3, -0.1, 0.2];
        let nw = 5.0;
        let (dg, db) = hamiltonian_gradient(&v, &gamma, &beta, nw, 0.4);
        for i in 0..gamma.len() {
            let h = 1e-6;
            let mut gp = gamma.clone();
            let mut gm = gamma.clone();
            gp[i] += h;
            gm[i] -= h;
            let fd = (hamiltonian(&v, &gp, &beta, nw, 0.4).unwrap()
                - hamiltonian(&v, &gm, &beta, nw, 0.4).unwrap())
                / (2.0 * h);
            assert!((fd - dg[i]).abs() < 1e-6 * (1.0 + dg[i].abs()), "γ_{}", i + 1);
        }
        for i in 0..beta.len() {
            let h = 1e-6;
            let mut bp = beta.clone();
            let mut bm = beta.clone();
            bp[i] += h;
            bm[i] -= h;
            let fd = (hamiltonian(&v, &gamma, &bp, nw, 0.4).unwrap()
                - hamiltonian(&v, &gamma, &bm, nw, 0.4).unwrap())
                / (2.0 * h);
            assert!((fd - db[i]).abs() < 1e-6 * (1.0 + db[i].abs()), "β_{i}");
        }
    }

    #[test]
    fn nonpositive_gamma_rejected() {
        let v = Potential::gaussian();
        let e = hamiltonian(&v, &[0.5, 0.0], &[0.0; 3], 1.0, 0.0).unwrap_err();
        assert_eq!(e, Error::NonPositiveGamma { n: 2, value: 0.0 });
    }

    #[test]
    fn uniform_profile_quartic() {
        let v = Potential::quartic(-1.0, 1.0).unwrap();
        let r = uniform_profile(&v, 1.0);
        assert!((r - (1.0 + 13f64.sqrt()) / 6.0).abs() < 1e-12);
    }
}
