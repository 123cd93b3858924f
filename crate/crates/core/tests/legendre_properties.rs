use proptest::prelude::*;
use schurcert::legendre::{
    legendre, partial_power_sum, real_decay_certificate, tail_power_bound, tdelta_diff_norm, SeriesOptions,
};
use schurcert::schatten::SchattenExponent;
use schurcert::Complex64;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn legendre_is_bounded(n in 0u64..2000, x in -1.0f64..=1.0) {
        prop_assert!(legendre(n, x).unwrap().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn partial_sums_grow_and_tails_dominate(a in complex(), b in complex(), delta in -0.95f64..0.95, p in 4.2f64..12.0, k in 4u32..10) {
        let n = 1u64 << k;
        let s1 = partial_power_sum(a, b, delta, p, n).unwrap();
        let s2 = partial_power_sum(a, b, delta, p, 2 * n).unwrap();
        let s4 = partial_power_sum(a, b, delta, p, 4 * n).unwrap();
        prop_assert!(s1 <= s2 && s2 <= s4);
        prop_assert!(s4 - s1 <= tail_power_bound(a, b, delta, p, n).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn norm_is_at_least_the_zeroth_term(a in complex(), b in complex(), delta in -0.99f64..0.99, p in 4.5f64..12.0) {
        let opts = SeriesOptions { tol: 1e-6, max_octaves: 14 };
        let v = tdelta_diff_norm(a, b, delta, SchattenExponent::new(p).unwrap(), &opts).unwrap();
        let v = v.converged().unwrap();
        prop_assert!(v.value >= (a - b).norm() - opts.tol);
        prop_assert!(v.extrapolated >= v.value && v.extrapolated <= v.value + v.tail_bound + 1e-15);
    }

    #[test]
    fn decay_bound_shrinks_along_rays(v in 0.5f64..50.0, ratio in 1.01f64..1.99, p in 4.1f64..20.0, c1 in 0.0f64..5.0) {
        let p = SchattenExponent::new(p).unwrap();
        let near = real_decay_certificate(ratio * v, v, p, c1).unwrap();
        let far = real_decay_certificate(2.0 * ratio * v, 2.0 * v, p, c1).unwrap();
        prop_assert!(far.bound <= near.bound);
        let a = near.rate.a;
        let direct = c1 * ((-a * ratio * v).exp() + (-a * (2.0 - ratio) * v).exp());
        prop_assert!((near.bound - direct).abs() <= 1e-12 * direct.max(1.0));
    }
}
