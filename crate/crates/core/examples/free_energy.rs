//! Free energy of the quartic along the deformation path, and the third-order transition.
use rmtlab::partition::{free_energy_product, free_energy_via_deformation, leading_free_energy, phase_transition_probe};
use rmtlab::potential::Potential;

fn main() -> rmtlab::Result<()> {
    let v = Potential::new(vec![0.0, -1.0, 0.0, 0.25])?;
    let t = 2.0;
    let f = leading_free_energy(&v.deform(t)?)?;
    println!("leading term F = {f:.13}");
    for n in [8, 16, 32] {
        let p = free_energy_product(&v.deform(t)?, n)?;
        let i = free_energy_via_deformation(&v, n, t)?;
        println!(
            "N = {n:>2}: product {:.12}, integral {:.12}, N²·|F_N − F_N^G − F| = {:.6}",
            p.f_n,
            i.f_n,
            (n * n) as f64 * (p.f_n_minus_gauss - f).abs()
        );
    }
    for h in [1e-2, 5e-3] {
        let r = phase_transition_probe(-2.0, h);
        println!("h = {h}: F''' left {:.6}, right {:.6}", r.left[2], r.right[2]);
    }
    Ok(())
}
