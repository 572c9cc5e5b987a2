//! Period-two and one-cut regimes of γ_n² from minimizing the string Hamiltonian.
use rmtlab::orthopoly::minimize_hamiltonian;
use rmtlab::potential::Potential;

fn main() -> rmtlab::Result<()> {
    let big_n = 400;
    let v = Potential::quartic(-1.0, 1.0)?;
    let sol = minimize_hamiltonian(&v, big_n as f64, big_n, 0.0)?;
    println!("max |grad H| = {:.1e}", sol.max_gradient);
    for n in [40, 41, 75, 76, 100, 101, 200, 300, 380] {
        println!("n/N = {:.4}  gamma^2 = {:.6}", n as f64 / big_n as f64, sol.gamma_sq(n));
    }
    // below λ_c = 1/4 the two subsequences approach (1 ± √(1 − 4λ))/2
    let l: f64 = 75.0 / 400.0;
    println!("expected pair at n/N = {l}: {:.6}, {:.6}", (1.0 + (1.0 - 4.0 * l).sqrt()) / 2.0, (1.0 - (1.0 - 4.0 * l).sqrt()) / 2.0);
    Ok(())
}
