//! Equilibrium measures of the quartic family on both sides of the two-cut transition.
use rmtlab::equilibrium::{variational_check, EquilibriumMeasure};
use rmtlab::potential::Potential;

fn main() -> rmtlab::Result<()> {
    for (t, q) in [(-1.0, 1), (-3.0, 2)] {
        let v = Potential::quartic(t, 1.0)?;
        let m = EquilibriumMeasure::solve(&v, q)?;
        let grid: Vec<f64> = (0..=200).map(|i| -3.0 + 0.03 * i as f64).collect();
        let report = variational_check(&m, &grid);
        println!("t = {t}: support {:?}, energy {:.12}", m.support.endpoints(), m.energy());
        println!("  density at 0: {:.6}, regular: {}", m.density(0.0), report.regular);
    }
    // just past t = −2 the one-cut ansatz produces a negative density
    let v = Potential::quartic(-2.1, 1.0)?;
    match EquilibriumMeasure::solve(&v, 1) {
        Err(e) => println!("t = -2.1, one cut: {e}"),
        Ok(_) => println!("t = -2.1 unexpectedly one-cut"),
    }
    Ok(())
}
