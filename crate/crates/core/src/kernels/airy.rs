//! The Airy function Ai and its derivative.
//!
//! Maclaurin series in double-double arithmetic on [−10, 6], where plain f64
//! would lose up to nine digits to cancellation; asymptotic expansions outside.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Ai(0) and −Ai′(0), each split into a leading double and a correction.
const AI0: (f64, f64) = (0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: (f64, f64) = (0.2588194037928068, -2.522243111610832e-17);

const SERIES_LO: f64 = -10.0;
const SERIES_HI: f64 = 6.0;

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }

    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (o.hi - bb);
        Dd::new(s, err + self.lo + o.lo)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::new(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q = self.hi / d;
        let r = self.add(Dd::from(q).mul(Dd::from(d)).neg());
        Dd::new(q, r.hi / d)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// (Ai(x), Ai′(x)).
pub fn airy(x: f64) -> (f64, f64) {
    if (SERIES_LO..=SERIES_HI).contains(&x) {
        airy_series(x)
    } else if x > 0.0 {
        airy_asymptotic_pos(x)
    } else {
        airy_asymptotic_neg(-x)
    }
}

pub fn ai(x: f64) -> f64 {
    airy(x).0
}

fn airy_series(x: f64) -> (f64, f64) {
    let xd = Dd::from(x);
    let x3 = xd.mul(xd).mul(xd);
    // f = Σ a_k x^{3k}, g = Σ b_k x^{3k+1} and their derivatives
    let mut f = Dd::from(1.0);
    let mut g = xd;
    let mut tf = Dd::from(1.0);
    let mut tg = xd;
    let mut fp = Dd::from(0.0);
    let mut gp = Dd::from(1.0);
    let mut tfp = Dd::from(0.5).mul(xd).mul(xd);
    let mut tgp = Dd::from(1.0);
    fp = fp.add(tfp);
    for k in 1..200 {
        let kf = k as f64;
        tf = tf.mul(x3).div_f64((3.0 * kf - 1.0) * 3.0 * kf);
        tg = tg.mul(x3).div_f64(3.0 * kf * (3.0 * kf + 1.0));
        tgp = tgp.mul(x3).div_f64((3.0 * kf - 2.0) * 3.0 * kf);
        if k >= 2 {
            tfp = tfp.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fp = fp.add(tfp);
        }
        f = f.add(tf);
        g = g.add(tg);
        gp = gp.add(tgp);
        let small = tf.hi.abs() + tg.hi.abs() + tfp.hi.abs() + tgp.hi.abs();
        if small < 1e-34 * (1.0 + f.hi.abs() + g.hi.abs()) {
            break;
        }
    }
    let c1 = Dd::new(AI0.0, AI0.1);
    let c2 = Dd::new(MINUS_AIP0.0, MINUS_AIP0.1);
    let ai = c1.mul(f).add(c2.mul(g).neg());
    let aip = c1.mul(fp).add(c2.mul(gp).neg());
    (ai.value(), aip.value())
}

/// u_k and v_k of the standard Airy asymptotic series.
fn asymptotic_coeffs(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0; n];
    let mut v = vec![1.0; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        v[k] = -u[k] * (6.0 * kf + 1.0) / (6.0 * kf - 1.0);
    }
    (u, v)
}

fn airy_asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = asymptotic_coeffs(60);
    let (mut su, mut sv) = (0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut zp = 1.0;
    for k in 0..u.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let tu = sign * u[k] / zp;
        if tu.abs() > last {
            break;
        }
        last = tu.abs();
        su += tu;
        sv += sign * v[k] / zp;
        zp *= zeta;
    }
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    (pre * su / x.powf(0.25), -pre * x.powf(0.25) * sv)
}

fn airy_asymptotic_neg(y: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * y.powf(1.5);
    let (u, v) = asymptotic_coeffs(80);
    let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
    let mut zp = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..u.len() {
        let t = u[k].abs().max(v[k].abs()) / zp;
        if t > last {
            break;
        }
        last = t;
        // (−1)^j on the even/odd subsequences
        let j = k / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * u[k] / zp;
            ve += sign * v[k] / zp;
        } else {
            uo += sign * u[k] / zp;
            vo += sign * v[k] / zp;
        }
        zp *= zeta;
    }
    let phase = zeta - PI / 4.0;
    let (s, c) = phase.sin_cos();
    let ai = (c * ue + s * uo) / (PI.sqrt() * y.powf(0.25));
    let aip = y.powf(0.25) / PI.sqrt() * (s * ve - c * vo);
    (ai, aip)
}

/// Ai(z) for complex z by the Maclaurin series in f64 (moderate |z| only).
pub fn ai_complex(z: Complex64) -> Complex64 {
    let z3 = z * z * z;
    let mut f = Complex64::new(1.0, 0.0);
    let mut g = z;
    let mut tf = f;
    let mut tg = g;
    for k in 1..300 {
        let kf = k as f64;
        tf = tf * z3 / ((3.0 * kf - 1.0) * 3.0 * kf);
        tg = tg * z3 / (3.0 * kf * (3.0 * kf + 1.0));
        f += tf;
        g += tg;
        if tf.norm() + tg.norm() < 1e-18 * (f.norm() + g.norm()) {
            break;
        }
    }
    AI0.0 * f - MINUS_AIP0.0 * g
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath reference values (50 digits, truncated)
    const REF: &[(f64, f64, f64)] = &[
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (2.5, 0.015725923380470489995, -0.026250881035903230365),
        (-2.5, -0.11232506769296608919, 0.67885273426479436337),
        (5.0, 0.00010834442813607441735, -0.000247413890868462476),
        (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
        (6.01, 9.7030036853748269443e-6, -0.000024175219750645092949),
        (-6.0, -0.32914517362982310523, 0.34593548728134289493),
        (-3.3, -0.41718093737455014137, -0.070963617177835884113),
        (-9.99, 0.050182117162139800517, 0.99174584335548624677),
        (-10.01, 0.030260123585861049748, 0.99979208566788307433),
        (-15.0, 0.27821749087082892953, 0.27237420430864202083),
        (8.0, 4.6922076160992316256e-8, -1.3414392979067865743e-7),
        (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, a, ap) in REF {
            let (ga, gap) = airy(x);
            assert!((ga - a).abs() < 1e-13, "Ai({x}) = {ga}, want {a}");
            assert!((gap - ap).abs() < 1e-12, "Ai'({x}) = {gap}, want {ap}");
        }
    }

    #[test]
    fn branches_agree_at_switch_points() {
        for x in [SERIES_HI, SERIES_LO] {
            let s = airy_series(x);
            let a = if x > 0.0 { airy_asymptotic_pos(x) } else { airy_asymptotic_neg(-x) };
            assert!((s.0 - a.0).abs() < 1e-13);
            assert!((s.1 - a.1).abs() < 1e-12);
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        // Ai″ = x Ai by a five-point stencil
        for x in [-12.0, -7.5, -2.0, 0.3, 4.0, 7.0] {
            let h = 1e-3;
            let f = |t: f64| airy(t).0;
            let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
                / (12.0 * h * h);
            assert!((d2 - x * f(x)).abs() < 1e-7, "x={x}");
        }
    }
}
