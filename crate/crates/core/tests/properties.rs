//! Property tests for structural invariants.

use proptest::prelude::*;
use rmtlab::cli::fmt_f64;
use rmtlab::equilibrium::EquilibriumMeasure;
use rmtlab::extsource::pastur_roots;
use rmtlab::kernels::{airy_kernel, pearcey_kernel, sine_kernel};
use rmtlab::orthopoly::{recurrence_from_weight, CdKernel};
use rmtlab::potential::Potential;
use rmtlab::sampler::{histogram, log_density};
use std::sync::OnceLock;

fn cd_kernel() -> &'static CdKernel {
    static K: OnceLock<CdKernel> = OnceLock::new();
    K.get_or_init(|| {
        let v = Potential::quartic(-1.0, 1.0).unwrap();
        let table = recurrence_from_weight(&v, 12.0, 13).unwrap();
        CdKernel::new(table, v, 12)
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn potential_strategy() -> impl Strategy<Value = Potential> {
    (1usize..=3, prop::collection::vec(-2.0f64..2.0, 6), 0.1f64..2.0).prop_map(|(half, lower, lead)| {
        let p = 2 * half;
        let mut c: Vec<f64> = lower[..p - 1].to_vec();
        c.push(lead);
        Potential::new(c).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pastur_roots_satisfy_vieta(x in -4.0f64..4.0, a in 0.0f64..3.0) {
        let r = pastur_roots(x, a).unwrap();
        let sum = r[0] + r[1] + r[2];
        let pairs = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let prod = r[0] * r[1] * r[2];
        let scale = 1.0 + x.abs() + a * a;
        prop_assert!((sum.re - x).abs() + sum.im.abs() < 1e-10 * scale);
        prop_assert!((pairs.re + (a * a - 1.0)).abs() + pairs.im.abs() < 1e-10 * scale * scale);
        prop_assert!((prod.re + x * a * a).abs() + prod.im.abs() < 1e-10 * scale * scale * scale);
    }

    #[test]
    fn sine_and_airy_kernels_are_symmetric(u in -8.0f64..8.0, v in -8.0f64..8.0) {
        prop_assert!(close(sine_kernel(u, v), sine_kernel(v, u), 1e-13));
        prop_assert!(close(airy_kernel(u, v), airy_kernel(v, u), 1e-12));
    }

    #[test]
    fn cd_kernel_is_symmetric(x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let k = cd_kernel();
        prop_assert!(close(k.eval(x, y), k.eval(y, x), 1e-10));
        prop_assert!(close(k.eval_sum(x, y), k.eval(x, y), 1e-8));
    }

    #[test]
    fn deformation_is_a_semigroup(v in potential_strategy(), s in 1.0f64..4.0, t in 1.0f64..4.0) {
        let lhs = v.deform(t).unwrap().deform(s).unwrap();
        let rhs = v.deform(s * t).unwrap();
        for j in 1..=v.degree() {
            prop_assert!(close(lhs.coeff(j), rhs.coeff(j), 1e-13), "z^{}: {} vs {}", j, lhs.coeff(j), rhs.coeff(j));
        }
    }

    #[test]
    fn potential_string_round_trips(v in potential_strategy()) {
        let back: Potential = v.to_string().parse().unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn log_density_is_permutation_invariant(
        xs in prop::collection::vec(-3.0f64..3.0, 2..8),
        seed in any::<u64>(),
    ) {
        let v = Potential::quartic(-1.0, 1.0).unwrap();
        let n = xs.len();
        let mut ys = xs.clone();
        // deterministic Fisher-Yates driven by the seed
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            ys.swap(i, (state % (i as u64 + 1)) as usize);
        }
        match (log_density(&v, n, &xs), log_density(&v, n, &ys)) {
            (Ok(a), Ok(b)) => prop_assert!(close(a, b, 1e-12)),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "only one ordering reported coincident points"),
        }
    }

    #[test]
    fn histogram_integrates_to_in_range_fraction(
        xs in prop::collection::vec(-3.0f64..3.0, 1..200),
        bins in 1usize..40,
    ) {
        let h = histogram(xs.iter().copied(), -2.0, 2.0, bins);
        let w = 4.0 / bins as f64;
        let inside = xs.iter().filter(|&&x| (-2.0..2.0).contains(&x)).count() as f64 / xs.len() as f64;
        prop_assert!((h.iter().sum::<f64>() * w - inside).abs() < 1e-12);
        prop_assert!(h.iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn numeric_output_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let back: f64 = fmt_f64(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn one_cut_quartic_density_is_a_probability(t in -1.9f64..3.0) {
        let m = EquilibriumMeasure::solve(&Potential::quartic(t, 1.0).unwrap(), 1).unwrap();
        prop_assert!((m.mass() - 1.0).abs() < 1e-10);
        let (a, b) = (m.support.left(), m.support.right());
        for i in 0..=50 {
            let x = a + (b - a) * i as f64 / 50.0;
            prop_assert!(m.density(x) >= -1e-12, "density {} at {}", m.density(x), x);
        }
    }

    #[test]
    fn pearcey_kernel_is_even(x in -3.0f64..3.0, y in -3.0f64..3.0, b in -1.0f64..1.0) {
        prop_assume!((x - y).abs() > 1e-3);
        let k = pearcey_kernel(x, y, b).unwrap();
        let m = pearcey_kernel(-x, -y, b).unwrap();
        prop_assert!(close(k, m, 1e-9), "{} vs {}", k, m);
    }
}
