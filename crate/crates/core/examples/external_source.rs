//! Gaussian model with external source ±a: Pastur densities and the finite-n kernel.
use rmtlab::extsource::{branch_points, pastur_density, pastur_support, MhpKernel};

fn main() -> rmtlab::Result<()> {
    for a in [0.5, 1.0, 2.0] {
        let bp = branch_points(a)?;
        println!("a = {a}: support {:?}, branch point z1 = {:.6}", pastur_support(a), bp.z1);
    }
    let a = 2.0;
    for n in [8, 16, 32] {
        let k = MhpKernel::new(n, a)?;
        let mut err = 0.0f64;
        for i in 0..=60 {
            let x = -3.0 + 0.1 * i as f64;
            err = err.max((k.density(x)? - pastur_density(x, a)).abs());
        }
        println!("n = {n:>2}: sup |K_n(x,x)/n − density| = {err:.4}");
    }
    Ok(())
}
