//! Tracy–Widom distribution two ways: Painlevé II and the Airy Fredholm determinant.
use rmtlab::kernels::{fredholm_det, KernelEvaluator};
use rmtlab::painleve::{tracy_widom_cdf, tracy_widom_pdf, PainleveSolution};

fn main() -> rmtlab::Result<()> {
    let sol = PainleveSolution::standard()?;
    println!("u(0) = {:.15}, residual {:.1e}", sol.u_at(0.0)?, sol.max_node_residual());
    for x in [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0] {
        let f = tracy_widom_cdf(&sol, x)?;
        let d = fredholm_det(&KernelEvaluator::Airy, (x, f64::INFINITY), 16)?;
        println!("x = {x:>4}: F = {f:.12}  det = {d:.12}  pdf = {:.6}", tracy_widom_pdf(&sol, x)?);
    }
    Ok(())
}
