//! The Pastur cubic, its branch points and the limiting eigenvalue density of
//! the Gaussian model with external source ±a.

use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Roots of the monic cubic ξ³ + c2 ξ² + c1 ξ + c0, polished by Newton.
pub fn cubic_roots(c2: Complex64, c1: Complex64, c0: Complex64) -> [Complex64; 3] {
    // depressed form t³ + p t + q with ξ = t − c2/3
    let s = c2 / 3.0;
    let p = c1 - c2 * s;
    let q = c0 - c1 * s + 2.0 * s * s * s;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    if u3.norm() < (-q / 2.0 - disc).norm() {
        u3 = -q / 2.0 - disc;
    }
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    if u3.norm() == 0.0 {
        roots = [-s; 3];
    } else {
        let u = u3.cbrt();
        let mut uk = u;
        for r in roots.iter_mut() {
            *r = uk - p / (3.0 * uk) - s;
            uk *= omega;
        }
    }
    let f = |r: Complex64| ((r + c2) * r + c1) * r + c0;
    let df = |r: Complex64| (3.0 * r + 2.0 * c2) * r + c1;
    // polish the best-separated root, then deflate: a near-double pair is
    // resolved far more accurately by the quadratic formula than by Newton
    let k = (0..3).max_by(|&i, &j| df(roots[i]).norm().total_cmp(&df(roots[j]).norm())).unwrap();
    let mut r0 = roots[k];
    for _ in 0..3 {
        let d = df(r0);
        if d.norm() == 0.0 {
            break;
        }
        let step = f(r0) / d;
        if !step.is_finite() {
            break;
        }
        r0 -= step;
    }
    let b1 = c2 + r0;
    let b0 = c1 + r0 * b1;
    let sq = (b1 * b1 - 4.0 * b0).sqrt();
    let qa = -0.5 * (b1 + sq);
    let qb = -0.5 * (b1 - sq);
    let q = if qa.norm() >= qb.norm() { qa } else { qb };
    let (r1, r2) = if q.norm() == 0.0 { (q, q) } else { (q, b0 / q) };
    let mut out = [Complex64::new(0.0, 0.0); 3];
    out[k] = r0;
    // keep the other two in the closed-form order so callers see a stable layout
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    if (roots[others[0]] - r1).norm() + (roots[others[1]] - r2).norm()
        <= (roots[others[0]] - r2).norm() + (roots[others[1]] - r1).norm()
    {
        out[others[0]] = r1;
        out[others[1]] = r2;
    } else {
        out[others[0]] = r2;
        out[others[1]] = r1;
    }
    out
}

/// Assign roots to labels by the permutation closest to `reference`.
fn match_roots(reference: &[Complex64; 3], roots: [Complex64; 3]) -> [Complex64; 3] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let best = PERMS
        .iter()
        .min_by(|p, q| {
            let cost = |perm: &[usize; 3]| -> f64 {
                (0..3).map(|k| (roots[perm[k]] - reference[k]).norm_sqr()).sum()
            };
            cost(p).total_cmp(&cost(q))
        })
        .unwrap();
    [roots[best[0]], roots[best[1]], roots[best[2]]]
}

/// Follow labelled roots from far up the vertical line through `x` down to the
/// real axis, approached from above.
fn track<R, A>(x: f64, roots_at: R, asymptotic: A) -> [Complex64; 3]
where
    R: Fn(Complex64) -> [Complex64; 3],
    A: Fn(Complex64) -> [Complex64; 3],
{
    let top: f64 = 1e6;
    let bottom: f64 = 1e-13 * (1.0 + x.abs());
    let steps = 600;
    let z0 = Complex64::new(x, top);
    let mut cur = match_roots(&asymptotic(z0), roots_at(z0));
    for j in 1..=steps {
        let y = top * (bottom / top).powf(j as f64 / steps as f64);
        cur = match_roots(&cur, roots_at(Complex64::new(x, y)));
    }
    match_roots(&cur, roots_at(Complex64::new(x, 0.0)))
}

fn pastur_cubic(z: Complex64, a: f64) -> [Complex64; 3] {
    cubic_roots(-z, Complex64::new(1.0 - a * a, 0.0), z * (a * a))
}

/// The three solutions of ξ³ − xξ² − (a² − 1)ξ + xa² = 0, labelled so that at
/// infinity ξ₁ ~ x − 1/x and ξ₂,₃ ~ ±a + 1/(2x). On the real line each value
/// is the boundary value from the upper half-plane.
pub fn pastur_roots(x: f64, a: f64) -> Result<[Complex64; 3]> {
    if !(a >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!("pastur_roots(x = {x}, a = {a})")));
    }
    Ok(track(
        x,
        |z| pastur_cubic(z, a),
        |z| [z - 1.0 / z, a + 0.5 / z, -a + 0.5 / z],
    ))
}

/// z(ξ) = ξ(ξ² + 1 − a²)/(ξ² − a²), the inverse of the cubic.
pub fn z_of_xi(xi: Complex64, a: f64) -> Complex64 {
    xi * (xi * xi + 1.0 - a * a) / (xi * xi - a * a)
}

/// Branch points of the Pastur surface: ±z1 on the real line and ±z2, which
/// is real for a ≥ 1 (zero at a = 1) and purely imaginary for a < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoints {
    pub z1: f64,
    pub z2: Complex64,
}

/// Critical points of z(ξ) solve ξ⁴ − (1 + 2a²)ξ² + a⁴ − a² = 0.
pub fn branch_points(a: f64) -> Result<BranchPoints> {
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("branch points need a > 0, got {a}")));
    }
    let s = 1.0 + 2.0 * a * a;
    let d = (1.0 + 8.0 * a * a).sqrt();
    let plus = 0.5 * (s + d);
    // s − d loses digits when a is small; use the product of roots instead
    let minus = (a.powi(4) - a * a) / plus;
    let z1 = z_of_xi(Complex64::new(plus.sqrt(), 0.0), a).re.abs();
    let z2 = if minus > 0.0 {
        Complex64::new(z_of_xi(Complex64::new(minus.sqrt(), 0.0), a).re.abs(), 0.0)
    } else if minus < 0.0 {
        Complex64::new(0.0, z_of_xi(Complex64::new(0.0, (-minus).sqrt()), a).im.abs())
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(BranchPoints { z1, z2 })
}

/// Limiting density (1/π)|Im ξ₁₊(x)|. On the real line at most one conjugate
/// pair of roots exists and ξ₁₊ belongs to it whenever x is in the support, so
/// the labelled continuation is not needed here.
pub fn pastur_density(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        return if x.abs() < 2.0 { (4.0 - x * x).sqrt() / (2.0 * PI) } else { 0.0 };
    }
    let r = pastur_cubic(Complex64::new(x, 0.0), a);
    let scale = r.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let im = r.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if im < 1e-12 * scale {
        0.0
    } else {
        im / PI
    }
}

/// Support of the limiting density as a list of intervals.
pub fn pastur_support(a: f64) -> Vec<(f64, f64)> {
    if a == 0.0 {
        return vec![(-2.0, 2.0)];
    }
    let bp = branch_points(a).expect("a > 0");
    if a > 1.0 {
        vec![(-bp.z1, -bp.z2.re), (bp.z2.re, bp.z1)]
    } else {
        vec![(-bp.z1, bp.z1)]
    }
}

/// ∫ρ over the support, by tanh-sinh on each half interval so that the
/// square-root edges and the cube-root cusp at a = 1 sit at endpoints.
pub fn pastur_mass(a: f64) -> Result<f64> {
    let mut total = 0.0;
    for (lo, hi) in pastur_support(a) {
        let mut cuts = vec![lo, hi];
        if lo < 0.0 && hi > 0.0 {
            cuts.insert(1, 0.0);
        }
        for w in cuts.windows(2) {
            total += tanh_sinh(w[0], w[1], 1e-13, |x| pastur_density(x, a))
                .ok_or_else(|| Error::QuadratureNonConvergence("Pastur density".into()))?;
        }
    }
    Ok(total)
}

/// Labelled solutions of the modified equation near a = 1:
/// z = w³/(w² − c²), ξ_k = w_k + p/w_k with c = (a + √(a² + 8))/4, p = c² − 1.
pub fn modified_pastur(x: f64, a: f64) -> Result<[Complex64; 3]> {
    if !(a > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!("modified_pastur(x = {x}, a = {a})")));
    }
    let (c, p) = modified_constants(a);
    let w = track(
        x,
        |z| cubic_roots(-z, Complex64::new(0.0, 0.0), z * (c * c)),
        |z| [z - c * c / z, c + c * c / (2.0 * z), -c + c * c / (2.0 * z)],
    );
    Ok([w[0] + p / w[0], w[1] + p / w[1], w[2] + p / w[2]])
}

pub fn modified_constants(a: f64) -> (f64, f64) {
    let c = (a + (a * a + 8.0).sqrt()) / 4.0;
    (c, c * c - 1.0)
}

/// Non-intersecting Brownian bridges at time t map to the external-source
/// model with a = √(t/(1 − t)) after scaling positions by 1/√(t(1 − t)).
pub fn bridge_map(t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidInput(format!("bridge time {t} not in (0, 1)")));
    }
    Ok(((t / (1.0 - t)).sqrt(), 1.0 / (t * (1.0 - t)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vieta_and_inversion() {
        for a in [0.5, 1.0, 2.0] {
            for x in [-3.0, -0.4, 0.7, 1.9, 5.0] {
                let r = pastur_roots(x, a).unwrap();
                let sum: Complex64 = r.iter().sum();
                let prod = r[0] * r[1] * r[2];
                assert!((sum - x).norm() < 1e-12);
                assert!((prod + x * a * a).norm() < 1e-12);
                for xi in r {
                    assert!((z_of_xi(xi, a) - x).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn labels_follow_asymptotics() {
        let r = pastur_roots(50.0, 2.0).unwrap();
        assert!((r[0].re - (50.0 - 1.0 / 50.0)).abs() < 1e-4);
        assert!((r[1].re - 2.01).abs() < 1e-3);
        assert!((r[2].re + 1.99).abs() < 1e-3);
        // inside the support ξ₁₊ has positive imaginary part
        let r = pastur_roots(0.3, 0.5).unwrap();
        assert!(r[0].im > 0.0);
    }

    #[test]
    fn branch_points_at_criticality() {
        let b = branch_points(1.0).unwrap();
        assert!((b.z1 - 1.5 * 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(b.z2.norm(), 0.0);
        let b = branch_points(0.5).unwrap();
        assert!(b.z2.re == 0.0 && b.z2.im > 0.0);
        let b = branch_points(2.0).unwrap();
        assert!(b.z2.im == 0.0 && b.z2.re > 0.0);
    }

    #[test]
    fn semicircle_at_zero_source() {
        for x in [-1.9f64, -0.5, 0.0, 1.2] {
            let want = (4.0 - x * x).sqrt() / (2.0 * PI);
            assert!((pastur_density(x, 1e-9) - want).abs() < 1e-8);
        }
    }

    #[test]
    fn modified_equation_reduces_at_critical_source() {
        for x in [-2.0, -0.3, 0.4, 1.0, 3.0] {
            let m = modified_pastur(x, 1.0).unwrap();
            let r = pastur_roots(x, 1.0).unwrap();
            for k in 0..3 {
                assert!((m[k] - r[k]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn bridge_examples() {
        let (a, s) = bridge_map(0.5).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (s - 2.0).abs() < 1e-15);
        let (a, s) = bridge_map(0.8).unwrap();
        assert!((a - 2.0).abs() < 1e-12 && (s - 2.5).abs() < 1e-12);
        assert!(bridge_map(1.0).is_err());
    }
}
