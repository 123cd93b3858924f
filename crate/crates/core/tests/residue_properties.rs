use proptest::prelude::*;
use schurcert::residue::{additive_characters, build_tk_real, ResidueRing, TkParams};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn tk_is_doubly_stochastic(q in prop_oneof![Just(2u64), Just(3u64)], m in 1u32..=2, n in 1u32..=2, k_frac in 0.0f64..=1.0) {
        let k = (k_frac * m as f64).round() as u32;
        let params = TkParams::with_cap(q, m, n, k, 729).unwrap();
        let t = build_tk_real(&params).unwrap();
        for row in t.row_iter() {
            prop_assert!((row.sum() - 1.0).abs() < 1e-12);
        }
        for col in t.column_iter() {
            prop_assert!((col.sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nondegenerate_characters_give_unitary_fourier_matrices(q in prop_oneof![Just(2u64), Just(3u64), Just(5u64), Just(7u64)], m in 1u32..=2) {
        let ring = ResidueRing::new(q, m).unwrap();
        for chi in additive_characters(ring, 4096).unwrap().into_iter().filter(|c| c.is_nondegenerate()) {
            let f = chi.fourier_matrix();
            let gram = f.adjoint().matmul(&f).unwrap();
            let id = schurcert::schatten::ComplexMatrix::identity(f.rows());
            prop_assert!(gram.max_abs_diff(&id) < 1e-10);
        }
    }
}
