//! Recurrence coefficients from the weight and the string equations they satisfy.
use rmtlab::orthopoly::{recurrence_from_weight, string_residual};
use rmtlab::potential::Potential;

fn main() -> rmtlab::Result<()> {
    let v = Potential::quartic(-1.0, 1.0)?;
    let n_weight = 30.0;
    let table = recurrence_from_weight(&v, n_weight, 40)?;
    println!("{:>3} {:>20} {:>12}", "n", "gamma_n^2", "residual");
    for n in (1..=36).step_by(5) {
        let (r1, r2) = string_residual(&v, &table, n);
        println!("{n:>3} {:>20.15} {:>12.2e}", table.gamma[n].powi(2), r1.abs().max(r2.abs()));
    }
    Ok(())
}
