//! Pearcey integrals, kernel values and a gap probability.
use rmtlab::kernels::{fredholm_det, pearcey_kernel, pearcey_p, pearcey_q, KernelEvaluator};

fn main() -> rmtlab::Result<()> {
    for b in [-1.0, 0.0, 1.0] {
        println!(
            "b = {b:>4}: p(0.5) = {:.10}, q(0.5) = {:.10}, K(0.5, -0.3) = {:.10}",
            pearcey_p(0.5, b)?,
            pearcey_q(0.5, b)?,
            pearcey_kernel(0.5, -0.3, b)?
        );
    }
    for s in [0.25, 0.5, 1.0] {
        let det = fredholm_det(&KernelEvaluator::Pearcey { b: 0.0 }, (-s, s), 16)?;
        println!("P(no points in (-{s}, {s})) = {det:.10}");
    }
    Ok(())
}
