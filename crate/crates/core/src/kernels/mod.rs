//! Special functions, universal limit kernels and Fredholm determinants.

pub mod airy;
pub mod fredholm;
pub mod pearcey;

use crate::error::Result;
use crate::extsource::MhpKernel;
use crate::orthopoly::CdKernel;
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

pub use airy::{ai, airy};
pub use fredholm::fredholm_det;
pub use pearcey::{pearcey_kernel, pearcey_p, pearcey_q};

/// sin π(u − v) / π(u − v), equal to 1 on the diagonal.
pub fn sine_kernel(u: f64, v: f64) -> f64 {
    let d = PI * (u - v);
    if d.abs() < 1e-4 {
        // Taylor series; the cutoff keeps the truncation below 1e-17
        1.0 - d * d / 6.0 + d.powi(4) / 120.0
    } else {
        d.sin() / d
    }
}

fn airy_from_values(u: f64, au: (f64, f64), v: f64, av: (f64, f64)) -> f64 {
    if (u - v).abs() < 1e-7 * (1.0 + u.abs()) {
        let m = 0.5 * (u + v);
        let (a, ap) = airy(m);
        return ap * ap - m * a * a;
    }
    (au.0 * av.1 - au.1 * av.0) / (u - v)
}

/// (Ai(u)Ai′(v) − Ai′(u)Ai(v)) / (u − v), with diagonal Ai′(u)² − u Ai(u)².
pub fn airy_kernel(u: f64, v: f64) -> f64 {
    airy_from_values(u, airy(u), v, airy(v))
}

pub fn airy_kernel_diagonal(u: f64) -> f64 {
    let (a, ap) = airy(u);
    ap * ap - u * a * a
}

/// A positional kernel K(x, y).
pub trait Kernel: Sync {
    fn eval(&self, x: f64, y: f64) -> Result<f64>;

    /// K(x_i, x_j) over a node set.
    fn matrix(&self, nodes: &[f64]) -> Result<DMatrix<f64>> {
        let n = nodes.len();
        let vals: Result<Vec<f64>> = (0..n * n)
            .into_par_iter()
            .map(|k| self.eval(nodes[k / n], nodes[k % n]))
            .collect();
        Ok(DMatrix::from_row_slice(n, n, &vals?))
    }
}

/// The kernels the library knows how to evaluate.
#[derive(Debug, Clone)]
pub enum KernelEvaluator {
    Sine,
    Airy,
    Pearcey { b: f64 },
    FiniteN(Arc<CdKernel>),
    ExtSource(Arc<MhpKernel>),
}

impl KernelEvaluator {
    pub fn name(&self) -> &'static str {
        match self {
            KernelEvaluator::Sine => "sine",
            KernelEvaluator::Airy => "airy",
            KernelEvaluator::Pearcey { .. } => "pearcey",
            KernelEvaluator::FiniteN(_) => "finite-N",
            KernelEvaluator::ExtSource(_) => "extsource",
        }
    }

    pub fn diagonal(&self, x: f64) -> Result<f64> {
        match self {
            KernelEvaluator::Sine => Ok(1.0),
            KernelEvaluator::Airy => Ok(airy_kernel_diagonal(x)),
            KernelEvaluator::Pearcey { b } => pearcey::pearcey_kernel_diagonal(x, *b),
            KernelEvaluator::FiniteN(k) => Ok(k.diagonal(x)),
            KernelEvaluator::ExtSource(k) => k.diagonal(x),
        }
    }
}

impl Kernel for KernelEvaluator {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match self {
            KernelEvaluator::Sine => Ok(sine_kernel(x, y)),
            KernelEvaluator::Airy => Ok(airy_kernel(x, y)),
            KernelEvaluator::Pearcey { b } => pearcey_kernel(x, y, *b),
            KernelEvaluator::FiniteN(k) => Ok(k.eval(x, y)),
            KernelEvaluator::ExtSource(k) => k.eval(x, y),
        }
    }

    fn matrix(&self, nodes: &[f64]) -> Result<DMatrix<f64>> {
        let n = nodes.len();
        match self {
            KernelEvaluator::Airy => {
                let vals: Vec<(f64, f64)> = nodes.par_iter().map(|&x| airy(x)).collect();
                Ok(DMatrix::from_fn(n, n, |i, j| {
                    airy_from_values(nodes[i], vals[i], nodes[j], vals[j])
                }))
            }
            KernelEvaluator::Pearcey { b } => {
                let jets: Result<Vec<_>> = nodes
                    .par_iter()
                    .map(|&x| Ok((pearcey::pearcey_p_jet(x, *b)?, pearcey::pearcey_q_jet(x, *b)?)))
                    .collect();
                let jets = jets?;
                let mut m = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = if i == j || (nodes[i] - nodes[j]).abs() < 1e-7 {
                            self.diagonal(0.5 * (nodes[i] + nodes[j]))?
                        } else {
                            let (p, _) = jets[i];
                            let (_, q) = jets[j];
                            (p.f * q.d2 - p.d1 * q.d1 + p.d2 * q.f - b * p.f * q.f)
                                / (nodes[i] - nodes[j])
                        };
                    }
                }
                Ok(m)
            }
            _ => {
                let vals: Result<Vec<f64>> = (0..n * n)
                    .into_par_iter()
                    .map(|k| self.eval(nodes[k / n], nodes[k % n]))
                    .collect();
                Ok(DMatrix::from_row_slice(n, n, &vals?))
            }
        }
    }
}
