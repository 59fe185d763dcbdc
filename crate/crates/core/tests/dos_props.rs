mod common;

use herglotz_core::dos::{dos_measure, lyapunov, moment_residual, thouless_rhs, w_pair};
use herglotz_core::herglotz::is_reflectionless;
use herglotz_core::jacobi::{CoeffModel, GreenAverage};
use herglotz_core::{Schedule, SetUnion};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn finite_thouless_identity(seed in any::<u64>(), n in 1usize..=2000, re in -4.0f64..4.0, im in 0.1f64..3.0) {
        let model = common::random_model(seed);
        let d = dos_measure(&model, n).unwrap();
        let z = Complex64::new(re, im);
        let lhs = lyapunov(&model, z, n).unwrap();
        let rhs = thouless_rhs(&d, z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs(), "{} vs {}", lhs, rhs);
        prop_assert!(lhs >= -5.0 / n as f64);
    }

    #[test]
    fn dos_is_probability_with_bounded_mean(seed in any::<u64>(), n in 1usize..=500) {
        let model = common::random_model(seed);
        let d = dos_measure(&model, n).unwrap();
        prop_assert!((d.dk().total_mass() - 1.0).abs() <= 1e-14);
        prop_assert_eq!(d.dk().atoms().len(), n);
        let c = model.bound();
        prop_assert!(d.a_mean() >= 1.0 / (c + 1.0) && d.a_mean() <= c + 1.0);
        let mut prev = 0.0;
        for k in 0..=200 {
            let v = d.k(-4.0 + 8.0 * k as f64 / 200.0);
            prop_assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn moments_match_traces(seed in any::<u64>(), n in 1usize..=300) {
        let model = common::random_model(seed);
        let d = dos_measure(&model, n).unwrap();
        prop_assert!(moment_residual(&model, &d).unwrap() <= 1e-8);
    }

    #[test]
    fn w_averages_have_imaginary_parts_in_range(seed in any::<u64>(), n in 1usize..=300, re in -4.0f64..4.0, im in 0.1f64..3.0) {
        let model = common::random_model(seed);
        let p = w_pair(&model, Complex64::new(re, im), n, 1 << 12).unwrap();
        prop_assert!(p.w_plus.im > 0.0 && p.w_plus.im < std::f64::consts::PI);
        prop_assert!(p.w_minus.im > 0.0 && p.w_minus.im < std::f64::consts::PI);
    }
}

#[test]
fn green_average_limit_is_reflectionless_on_bands() {
    let schedule = Schedule::default().with_floor(1e-3).with_tol(1e-6);
    let s5 = 5f64.sqrt();
    let cases = [
        (CoeffModel::free(), SetUnion::from_pairs(&[(-2.0, 2.0)]).unwrap()),
        (
            CoeffModel::periodic(vec![1.0, 1.0], vec![1.0, -1.0]).unwrap(),
            SetUnion::from_pairs(&[(-s5, -1.0), (1.0, s5)]).unwrap(),
        ),
    ];
    for (model, bands) in cases {
        let g = GreenAverage { model: &model, n: 1 << 15, depth: 1 << 16 };
        let grid = bands.interior_grid(6, 0.1);
        let r = is_reflectionless(&g, &grid, 1e-3, &schedule);
        assert!(r.pass, "{r:?}");
    }
}
