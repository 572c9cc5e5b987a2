//! Metropolis sampling of the two-cut quartic eigenvalue gas.
use rmtlab::equilibrium::quartic_closed_form;
use rmtlab::potential::Potential;
use rmtlab::sampler::{histogram, metropolis_run, LogGasChain};

fn main() -> rmtlab::Result<()> {
    let v = Potential::quartic(-3.0, 1.0)?;
    let mut chain = LogGasChain::new(v, 40, 7)?;
    let set = metropolis_run(&mut chain, 20_000, 10);
    println!("acceptance {:.3}, step {:.4}", set.acceptance_rate, set.step);
    let m = quartic_closed_form(-3.0);
    let (lo, hi) = (-2.5, 2.5);
    let bins = 20;
    let hist = histogram(set.positions(), lo, hi, bins);
    for (i, h) in hist.iter().enumerate() {
        let x = lo + (i as f64 + 0.5) * (hi - lo) / bins as f64;
        println!("{x:>6.3} {h:.4} {:.4} {}", m.density(x), "#".repeat((h * 60.0) as usize));
    }
    Ok(())
}
