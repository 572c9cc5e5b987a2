//! Nyström approximation of Fredholm determinants det(I − K) on an interval.

use super::{Kernel, KernelEvaluator};
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use nalgebra::DMatrix;

/// Length kept of a semi-infinite interval (x, ∞) for the Airy kernel. The
/// kernel diagonal at x + 12 is already below double precision.
pub const AIRY_TAIL: f64 = 12.0;

const MAX_ORDER: usize = 1024;

/// det(I − √w_i K(x_i, x_j) √w_j) on `order` Gauss–Legendre nodes.
pub fn nystrom_det<K: Kernel + ?Sized>(k: &K, a: f64, b: f64, order: usize) -> Result<f64> {
    let rule = GaussLegendre::cached(order);
    let (nodes, weights): (Vec<f64>, Vec<f64>) = rule.on(a, b).unzip();
    let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let km = k.matrix(&nodes)?;
    let m = DMatrix::from_fn(order, order, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        d - sw[i] * km[(i, j)] * sw[j]
    });
    Ok(m.lu().determinant())
}

/// Fredholm determinant of `k` restricted to `interval`, doubling the order
/// until two successive values agree to 1e−8. An infinite right endpoint is
/// accepted for the Airy kernel only.
pub fn fredholm_det(k: &KernelEvaluator, interval: (f64, f64), order: usize) -> Result<f64> {
    if order < 4 {
        return Err(Error::InvalidInput(format!("quadrature order {order} < 4")));
    }
    let (a, mut b) = interval;
    if a.is_nan() || b.is_nan() || a == f64::INFINITY {
        return Err(Error::InvalidInput(format!("interval ({a}, {b})")));
    }
    if b == f64::INFINITY {
        match k {
            KernelEvaluator::Airy => b = a + AIRY_TAIL,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "{} kernel on a semi-infinite interval",
                    k.name()
                )))
            }
        }
    }
    if b <= a {
        return Ok(1.0);
    }
    let mut n = order;
    let mut prev = nystrom_det(k, a, b, n)?;
    let mut last_change = f64::INFINITY;
    while n < MAX_ORDER {
        n *= 2;
        let cur = nystrom_det(k, a, b, n)?;
        last_change = (cur - prev).abs();
        if last_change < 1e-8 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "Fredholm determinant",
        iterations: n,
        residual: last_change,
    })
}
