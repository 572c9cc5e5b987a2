//! Partition functions and free energies of the eigenvalue gas
//! Z_N = ∫ Π_{j<k}(z_j − z_k)² e^{−N Σ V(z_j)} dz.

use crate::equilibrium::{default_guess, fallback_guesses, quartic_closed_form, solve_endpoints};
use crate::error::{Error, Result};
use crate::orthopoly::{dv_derivatives, recurrence_from_weight, RecurrenceTable};
use crate::potential::Potential;
use crate::quad::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// How a free energy was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeEnergyMethod {
    /// N! Π h_n from the recurrence table.
    Product,
    /// Integration of the v₂-deformation identity from the Gaussian end.
    Integral,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeEnergyReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "lnZ")]
    pub ln_z: f64,
    #[serde(rename = "F_N")]
    pub f_n: f64,
    #[serde(rename = "F_N_minus_gauss")]
    pub f_n_minus_gauss: f64,
    pub method: FreeEnergyMethod,
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// ln Z_N = ln N! + Σ_{n<N} ln h_n.
pub fn partition_ln(v: &Potential, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let table = recurrence_from_weight(v, n as f64, n)?;
    Ok(partition_ln_from_table(&table, n))
}

pub fn partition_ln_from_table(table: &RecurrenceTable, n: usize) -> f64 {
    ln_factorial(n) + table.ln_h[..n].iter().sum::<f64>()
}

/// ln of (2π)^{N/2}(2N)^{−N²/2} Π_{n=1}^N n!, the Gaussian partition function.
pub fn gauss_ln_partition(n: usize) -> f64 {
    let nf = n as f64;
    0.5 * nf * (2.0 * PI).ln() - 0.5 * nf * nf * (2.0 * nf).ln()
        + (1..=n).map(ln_factorial).sum::<f64>()
}

pub fn gauss_free_energy(n: usize) -> f64 {
    -gauss_ln_partition(n) / (n as f64 * n as f64)
}

/// F_N = −N^{−2} ln Z_N from the product formula.
pub fn free_energy_product(v: &Potential, n: usize) -> Result<FreeEnergyReport> {
    let ln_z = partition_ln(v, n)?;
    let f_n = -ln_z / (n as f64 * n as f64);
    Ok(FreeEnergyReport {
        n,
        ln_z,
        f_n,
        f_n_minus_gauss: f_n - gauss_free_energy(n),
        method: FreeEnergyMethod::Product,
    })
}

/// γ_N²(γ_{N−1}² + γ_{N+1}² + β_N² + 2β_Nβ_{N−1} + β_{N−1}²).
pub fn d2_rhs(table: &RecurrenceTable, n: usize) -> f64 {
    let g = |k: usize| table.gamma[k] * table.gamma[k];
    let b = |k: usize| table.beta[k];
    g(n) * (g(n - 1) + g(n + 1) + b(n) * b(n) + 2.0 * b(n) * b(n - 1) + b(n - 1) * b(n - 1))
}

/// |N^{−2}∂²ln Z_N/∂v₂² − γ_N²(…)|, relative to the right-hand side, with the
/// second derivative by central differences of step `eps`.
pub fn d2_identity_residual(v: &Potential, n: usize, eps: f64) -> Result<f64> {
    let lnz = |d: f64| -> Result<f64> {
        let w = if d == 0.0 { v.clone() } else { v.perturbed(2, d)? };
        partition_ln(&w, n)
    };
    let (lp, l0, lm) = (lnz(eps)?, lnz(0.0)?, lnz(-eps)?);
    let lhs = (lp - 2.0 * l0 + lm) / (eps * eps) / (n as f64 * n as f64);
    let table = recurrence_from_weight(v, n as f64, n + 1)?;
    let rhs = d2_rhs(&table, n);
    Ok((lhs - rhs).abs() / rhs.abs())
}

/// Relative residuals of the v_k-deformation equations for ln h_n, γ_n and β_n
/// (central differences of step `eps`) for n = 0..=nmax. Entries with a
/// vanishing right-hand side are reported as absolute residuals.
pub fn d1_identity_residuals(
    v: &Potential,
    n_weight: f64,
    k: usize,
    nmax: usize,
    eps: f64,
) -> Result<Vec<[f64; 3]>> {
    let top = nmax + k + 3;
    let t0 = recurrence_from_weight(v, n_weight, top)?;
    let tp = recurrence_from_weight(&v.perturbed(k, eps)?, n_weight, top)?;
    let tm = recurrence_from_weight(&v.perturbed(k, -eps)?, n_weight, top)?;
    let rel = |num: f64, rhs: f64| {
        if rhs.abs() > 1e-12 {
            (num - rhs).abs() / rhs.abs()
        } else {
            (num - rhs).abs()
        }
    };
    Ok((0..=nmax)
        .map(|n| {
            let (dl, dg, db) = dv_derivatives(&t0, k, n);
            let c = 2.0 * eps * n_weight;
            [
                rel((tp.ln_h[n] - tm.ln_h[n]) / c, dl),
                rel((tp.gamma[n] - tm.gamma[n]) / c, dg),
                rel((tp.beta[n] - tm.beta[n]) / c, db),
            ]
        })
        .collect())
}

/// ∫_0^{1/√t} 2(ts − 1/s) f(s^{−2}) ds, which is ∫_t^∞ (t − τ)/τ² f(τ) dτ
/// after τ = s^{−2}. Gauss–Legendre order is doubled until the change is
/// below `tol`.
fn tau_integral<F>(t: f64, tol: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let smax = 1.0 / t.sqrt();
    let run = |order: usize| -> Result<f64> {
        let rule = GaussLegendre::cached(order);
        let pts: Vec<(f64, f64)> = rule.on(0.0, smax).collect();
        let vals: Result<Vec<f64>> = pts
            .par_iter()
            .map(|&(s, w)| Ok(w * 2.0 * (t * s - 1.0 / s) * f(1.0 / (s * s))?))
            .collect();
        Ok(vals?.iter().sum())
    };
    let mut order = 12;
    let mut prev = run(order)?;
    let mut change = f64::INFINITY;
    for _ in 0..4 {
        order *= 2;
        let cur = run(order)?;
        change = (cur - prev).abs();
        if change < tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence { what: "tau quadrature", iterations: order, residual: change })
}

/// F_N(τ_t V) = F_N^Gauss + ∫_t^∞ (t − τ)/τ² {γ_N²(…)(τ) − 1/2} dτ with the
/// recurrence coefficients of e^{−N τ_τ V}.
pub fn free_energy_via_deformation(v: &Potential, n: usize, t: f64) -> Result<FreeEnergyReport> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    let integrand = |tau: f64| -> Result<f64> {
        let w = v.deform(tau)?;
        let table = recurrence_from_weight(&w, n as f64, n + 1)?;
        Ok(d2_rhs(&table, n) - 0.5)
    };
    // the bracket must have decayed toward the Gaussian end of the path
    let far = integrand(1e8)?;
    if far.abs() > 1e-3 {
        return Err(Error::IntegrandTail(far));
    }
    let integral = tau_integral(t, 1e-10, integrand)?;
    let g = gauss_free_energy(n);
    let f_n = g + integral;
    Ok(FreeEnergyReport {
        n,
        ln_z: -f_n * (n as f64 * n as f64),
        f_n,
        f_n_minus_gauss: integral,
        method: FreeEnergyMethod::Integral,
    })
}

/// Endpoints of the one-cut support of `v`.
fn one_cut_endpoints(v: &Potential) -> Result<(f64, f64)> {
    let mut last = None;
    for guess in std::iter::once(default_guess(v, 1)).chain(fallback_guesses(v, 1)) {
        match solve_endpoints(v, 1, &guess) {
            Ok(s) => return Ok((s.left(), s.right())),
            Err(e @ Error::WrongCutCount { .. }) => return Err(e),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// Leading free energy F = ∫_1^∞ (1 − τ)/τ² [2γ⁴ + 4γ²β² − 1/2] dτ with
/// γ = (b − a)/4, β = (a + b)/2 from the one-cut support [a, b] of τ_τ V.
pub fn leading_free_energy(v: &Potential) -> Result<f64> {
    tau_integral(1.0, 1e-11, |tau| {
        let w = v.deform(tau)?;
        let (a, b) = one_cut_endpoints(&w)?;
        let g = (b - a) / 4.0;
        let beta = (a + b) / 2.0;
        Ok(2.0 * g.powi(4) + 4.0 * g * g * beta * beta - 0.5)
    })
}

/// Energy of the Gaussian equilibrium measure, 3/4 + ln 2/2.
pub const GAUSSIAN_ENERGY: f64 = 0.75 + 0.5 * LN_2;

/// Energy F(t) of the even quartic t x²/2 + x⁴/4 and its one-sided derivatives.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionReport {
    pub t_c: f64,
    pub h: f64,
    /// F(t_c) and one-sided derivatives of orders 1..3 from the left and from the right.
    pub value: f64,
    pub left: [f64; 3],
    pub right: [f64; 3],
}

impl TransitionReport {
    pub fn third_derivative_gap(&self) -> f64 {
        self.right[2] - self.left[2]
    }
}

pub fn quartic_energy(t: f64) -> f64 {
    quartic_closed_form(t).energy()
}

/// One-sided derivatives from 5-point stencils t_c ± kh, k = 0..4, each exact
/// for quartic polynomials.
pub fn phase_transition_probe(t_c: f64, h: f64) -> TransitionReport {
    let f = |k: i32| quartic_energy(t_c + k as f64 * h);
    let fr: Vec<f64> = (0..5).map(f).collect();
    let fl: Vec<f64> = (0..5).map(|k| f(-k)).collect();
    const D1: [f64; 5] = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25];
    const D2: [f64; 5] = [35.0 / 12.0, -26.0 / 3.0, 9.5, -14.0 / 3.0, 11.0 / 12.0];
    const D3: [f64; 5] = [-2.5, 9.0, -12.0, 7.0, -1.5];
    let apply = |c: &[f64; 5], vals: &[f64], step: f64, p: i32| -> f64 {
        c.iter().zip(vals).map(|(a, b)| a * b).sum::<f64>() / step.powi(p)
    };
    TransitionReport {
        t_c,
        h,
        value: fr[0],
        right: [apply(&D1, &fr, h, 1), apply(&D2, &fr, h, 2), apply(&D3, &fr, h, 3)],
        left: [apply(&D1, &fl, -h, 1), apply(&D2, &fl, -h, 2), apply(&D3, &fl, -h, 3)],
    }
}

/// (t, F, F′, F″) on a grid by central differences of spacing `h`, for the
/// smoothness control away from the transition.
pub fn energy_table(ts: &[f64], h: f64) -> Vec<[f64; 4]> {
    ts.par_iter()
        .map(|&t| {
            let f = |k: f64| quartic_energy(t + k * h);
            let (fm, f0, fp) = (f(-1.0), f(0.0), f(1.0));
            [t, f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)]
        })
        .collect()
}
