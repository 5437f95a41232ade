use proptest::prelude::*;
use psystem::constitutive::{q_value, stress_antiderivative, stress_at};
use psystem::{ModelKind, ModelSpec64 as ModelSpec};

fn any_model() -> impl Strategy<Value = ModelSpec> {
    (0usize..5, 0.3f64..3.0, 0.3f64..3.0, 0.1f64..6.0, 0.05f64..0.95).prop_map(
        |(k, rho0, mu, lambda, f)| {
            let kind = ModelKind::ALL[k];
            let f = (kind == ModelKind::BlatzKoOgden).then_some(f);
            ModelSpec::new(kind, rho0, mu, lambda, f).unwrap()
        },
    )
}

const H: f64 = 1e-6;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn first_derivative_matches_differences(m in any_model(), g in -0.9f64..2.0) {
        let p = |x: f64| stress_at(&m, x).unwrap().p;
        let fd = (p(g + H) - p(g - H)) / (2.0 * H);
        let dp = stress_at(&m, g).unwrap().dp;
        prop_assert!(close(fd, dp, 1e-6), "{fd} vs {dp}");
    }

    #[test]
    fn second_derivative_matches_differences(m in any_model(), g in -0.9f64..2.0) {
        let dp = |x: f64| stress_at(&m, x).unwrap().dp;
        let fd = (dp(g + H) - dp(g - H)) / (2.0 * H);
        let d2p = stress_at(&m, g).unwrap().d2p;
        prop_assert!(close(fd, d2p, 1e-5), "{fd} vs {d2p}");
    }

    #[test]
    fn antiderivative_differentiates_to_stress(m in any_model(), g in -0.9f64..2.0) {
        let w = |x: f64| stress_antiderivative(&m, x).unwrap();
        let fd = (w(g + H) - w(g - H)) / (2.0 * H);
        let p = stress_at(&m, g).unwrap().p;
        prop_assert!(close(fd, p, 1e-6), "{fd} vs {p}");
    }

    #[test]
    fn zero_strain_is_stress_free(m in any_model()) {
        let e = stress_at(&m, 0.0).unwrap();
        prop_assert!(e.p.abs() <= 1e-15);
        prop_assert_eq!(stress_antiderivative(&m, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn q_is_scaled_stress(m in any_model(), g in -0.9f64..2.0) {
        prop_assume!(matches!(
            m.kind(),
            ModelKind::KirchhoffModified | ModelKind::Ogden | ModelKind::BlatzKoOgden
        ));
        let expected = m.rho0() * g * stress_at(&m, g).unwrap().p / m.mu();
        let q = q_value(&m, g).unwrap();
        prop_assert!((q - expected).abs() <= 1e-12 * expected.abs().max(1e-300), "{q} vs {expected}");
    }

    #[test]
    fn stress_is_scale_invariant(m in any_model(), c in 0.1f64..10.0, g in -0.9f64..2.0) {
        let scaled = m.scaled(c).unwrap();
        let a = stress_at(&m, g).unwrap();
        let b = stress_at(&scaled, g).unwrap();
        prop_assert!(close(b.p, a.p, 1e-12));
        prop_assert!(close(b.dp, a.dp, 1e-12));
        prop_assert!(close(b.d2p, a.d2p, 1e-12));
    }
}
