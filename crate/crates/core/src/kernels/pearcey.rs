//! Pearcey integrals and the Pearcey kernel.
//!
//! p(x) = (1/2π) ∫_ℝ exp(−s⁴/4 − b s²/2 + i s x) ds
//! q(y) = (1/2π) ∫_Σ exp(t⁴/4 + b t²/2 + i t y) dt
//!
//! Σ runs in from ∞·e^{iπ/4} and ∞·e^{−3iπ/4} to the origin and out from it
//! to ∞·e^{−iπ/4} and ∞·e^{3iπ/4}. q is real only if the rays at θ and π − θ
//! carry opposite orientations. Rays at θ and θ + π with equal orientation
//! make q odd, which the kernel needs to satisfy K(−x, −y) = K(x, y) with an
//! even p. The remaining overall sign is the one for which K(x, x) > 0 and the
//! kernel matches the scaled external-source kernel near its cusp.

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

/// Values and first three derivatives of a Pearcey integral at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// Radius beyond which e^{−r⁴/4 + |b| r²/2 + |y| r} < 1e−20.
fn cutoff(b: f64, y: f64) -> f64 {
    let mut r: f64 = 2.0;
    while -r.powi(4) / 4.0 + b.abs() * r * r / 2.0 + y.abs() * r + 4.0 * r.ln() > -46.0 {
        r += 0.25;
    }
    r
}

fn integrate_radial<F: Fn(f64) -> [Complex64; 4]>(rmax: f64, f: F) -> Result<[Complex64; 4]> {
    let rule = GaussLegendre::cached(24);
    let run = |panels: usize| {
        let h = rmax / panels as f64;
        let mut acc = [Complex64::new(0.0, 0.0); 4];
        for p in 0..panels {
            for (r, w) in rule.on(h * p as f64, h * (p + 1) as f64) {
                let v = f(r);
                for k in 0..4 {
                    acc[k] += v[k] * w;
                }
            }
        }
        acc
    };
    let mut panels = 8;
    let mut prev = run(panels);
    for _ in 0..8 {
        panels *= 2;
        let cur = run(panels);
        let diff = (0..4).map(|k| (cur[k] - prev[k]).norm()).fold(0.0, f64::max);
        let scale = (0..4).map(|k| cur[k].norm()).fold(1e-300, f64::max);
        if diff < 1e-14 * scale.max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence(format!(
        "Pearcey radial integral up to r = {rmax}"
    )))
}

/// p and its first three x-derivatives.
pub fn pearcey_p_jet(x: f64, b: f64) -> Result<Jet> {
    let rmax = cutoff(b, 0.0);
    // even integrand: (1/π) ∫_0^∞ e^{−s⁴/4 − b s²/2} (i s)^k e^{i s x} folded onto s > 0
    let v = integrate_radial(rmax, |s| {
        let w = (-s.powi(4) / 4.0 - b * s * s / 2.0).exp();
        let (sn, cs) = (s * x).sin_cos();
        [
            Complex64::new(w * cs, 0.0),
            Complex64::new(-w * s * sn, 0.0),
            Complex64::new(-w * s * s * cs, 0.0),
            Complex64::new(w * s * s * s * sn, 0.0),
        ]
    })?;
    Ok(Jet {
        f: v[0].re / PI,
        d1: v[1].re / PI,
        d2: v[2].re / PI,
        d3: v[3].re / PI,
    })
}

/// Orientation of each ray: +1 away from the origin, −1 toward it.
const RAYS: [(f64, f64); 4] = [
    (FRAC_PI_4, -1.0),
    (-FRAC_PI_4, 1.0),
    (3.0 * FRAC_PI_4, 1.0),
    (-3.0 * FRAC_PI_4, -1.0),
];

/// q and its first three y-derivatives.
pub fn pearcey_q_jet(y: f64, b: f64) -> Result<Jet> {
    let rmax = cutoff(b, y / 2f64.sqrt());
    let mut acc = [Complex64::new(0.0, 0.0); 4];
    for &(theta, orient) in &RAYS {
        let dir = Complex64::from_polar(1.0, theta);
        let v = integrate_radial(rmax, |r| {
            let t = dir * r;
            let e = (t.powi(4) / 4.0 + b * t * t / 2.0 + Complex64::i() * t * y).exp() * dir * orient;
            let it = Complex64::i() * t;
            [e, e * it, e * it * it, e * it * it * it]
        })?;
        for k in 0..4 {
            acc[k] += v[k];
        }
    }
    let scale = acc.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if acc.iter().any(|c| c.im.abs() > 1e-10 * scale) {
        return Err(Error::QuadratureNonConvergence(format!(
            "q({y}) has imaginary residue {:e}",
            acc[0].im
        )));
    }
    let c = 1.0 / (2.0 * PI);
    Ok(Jet {
        f: acc[0].re * c,
        d1: acc[1].re * c,
        d2: acc[2].re * c,
        d3: acc[3].re * c,
    })
}

pub fn pearcey_p(x: f64, b: f64) -> Result<f64> {
    Ok(pearcey_p_jet(x, b)?.f)
}

pub fn pearcey_q(y: f64, b: f64) -> Result<f64> {
    Ok(pearcey_q_jet(y, b)?.f)
}

/// K(x, y; b) = (p(x)q″(y) − p′(x)q′(y) + p″(x)q(y) − b p(x)q(y))/(x − y).
pub fn pearcey_kernel(x: f64, y: f64, b: f64) -> Result<f64> {
    if (x - y).abs() < 1e-7 * (1.0 + x.abs()) {
        return pearcey_kernel_diagonal(0.5 * (x + y), b);
    }
    let p = pearcey_p_jet(x, b)?;
    let q = pearcey_q_jet(y, b)?;
    Ok((p.f * q.d2 - p.d1 * q.d1 + p.d2 * q.f - b * p.f * q.f) / (x - y))
}

/// The confluent limit p′q″ − p″q′ + p‴q − b p′q at y = x.
pub fn pearcey_kernel_diagonal(x: f64, b: f64) -> Result<f64> {
    let p = pearcey_p_jet(x, b)?;
    let q = pearcey_q_jet(x, b)?;
    Ok(p.d1 * q.d2 - p.d2 * q.d1 + p.d3 * q.f - b * p.d1 * q.f)
}
