//! Finite-N GUE kernels rescaled at the centre and at the edge.
use rmtlab::equilibrium::EquilibriumMeasure;
use rmtlab::kernels::{airy_kernel, sine_kernel};
use rmtlab::orthopoly::{bulk_scaled, edge_scaled, recurrence_from_weight, right_edge_constant, CdKernel};
use rmtlab::potential::Potential;

fn main() -> rmtlab::Result<()> {
    let v = Potential::gaussian();
    let m = EquilibriumMeasure::solve(&v, 1)?;
    let rho1 = right_edge_constant(&m);
    let edge = m.support.right();
    for n in [25, 50, 100, 200] {
        let k = CdKernel::new(recurrence_from_weight(&v, n as f64, n + 1)?, v.clone(), n);
        let (mut bulk, mut tail) = (0.0f64, 0.0f64);
        for i in 0..=20 {
            for j in 0..=20 {
                let (u, w) = (-2.0 + 0.2 * i as f64, -2.0 + 0.2 * j as f64);
                bulk = bulk.max((bulk_scaled(&k, 0.0, m.density(0.0), u, w) - sine_kernel(u, w)).abs());
                tail = tail.max((edge_scaled(&k, edge, rho1, u, w) - airy_kernel(u, w)).abs());
            }
        }
        println!("N = {n:>3}: sup error bulk {bulk:.2e}, edge {tail:.2e}");
    }
    Ok(())
}
