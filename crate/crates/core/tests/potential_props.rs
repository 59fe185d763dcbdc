mod common;

use herglotz_core::dos::dos_measure;
use herglotz_core::herglotz::is_reflectionless;
use herglotz_core::jacobi::CoeffModel;
use herglotz_core::measures::kolmogorov;
use herglotz_core::potential::{capacity, equilibrium, DEFAULT_NODES};
use herglotz_core::{Schedule, SetUnion};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn capacity_is_affine_covariant(e in common::interval_union(), s in 0.2f64..3.0, flip in any::<bool>(), c in -2.0f64..2.0) {
        let s = if flip { -s } else { s };
        let moved = e.affine(s, c).unwrap();
        let r = equilibrium(&e, DEFAULT_NODES).unwrap();
        let rm = equilibrium(&moved, DEFAULT_NODES).unwrap();
        prop_assert!((rm.capacity() - s.abs() * r.capacity()).abs() <= 1e-9 * r.capacity());
        for t in e.interior_grid(5, 0.05) {
            let want = r.omega.density(t) / s.abs();
            let got = rm.omega.density(s * t + c);
            prop_assert!((got - want).abs() <= 1e-8 * want, "{} vs {}", got, want);
        }
    }

    #[test]
    fn capacity_is_monotone(e in common::interval_union(), grow in prop::collection::vec(0.0f64..0.05, 6), extra in 3.2f64..4.0) {
        let mut pairs: Vec<(f64, f64)> = e.intervals().iter().enumerate()
            .map(|(k, i)| (i.lo - grow[2 * k], i.hi + grow[2 * k + 1]))
            .collect();
        let bigger = SetUnion::from_pairs(&pairs).unwrap();
        pairs.push((extra, extra + 0.1));
        let biggest = SetUnion::from_pairs(&pairs).unwrap();
        let (c0, c1, c2) = (capacity(&e).unwrap(), capacity(&bigger).unwrap(), capacity(&biggest).unwrap());
        prop_assert!(c0 <= c1 * (1.0 + 1e-12) && c1 <= c2 * (1.0 + 1e-12), "{} {} {}", c0, c1, c2);
    }

    #[test]
    fn equilibrium_energy_is_robin_constant(e in common::interval_union()) {
        let r = equilibrium(&e, DEFAULT_NODES).unwrap();
        prop_assert!((r.omega.total_mass() - 1.0).abs() <= 1e-12);
        prop_assert!(r.residual <= 1e-8);
        prop_assert!((r.omega.energy().unwrap() - r.robin).abs() <= 1e-6);
    }

    #[test]
    fn equilibrium_measure_is_reflectionless(e in common::interval_union()) {
        let r = equilibrium(&e, DEFAULT_NODES).unwrap();
        let rep = is_reflectionless(&r.omega, &e.interior_grid(8, 0.05), 1e-4, &Schedule::default());
        prop_assert!(rep.pass, "{:?}", rep);
    }
}

#[test]
fn dos_approaches_equilibrium_as_n_doubles() {
    let s5 = 5f64.sqrt();
    let cases = [
        (CoeffModel::free(), SetUnion::from_pairs(&[(-2.0, 2.0)]).unwrap()),
        (
            CoeffModel::periodic(vec![1.0, 1.0], vec![1.0, -1.0]).unwrap(),
            SetUnion::from_pairs(&[(-s5, -1.0), (1.0, s5)]).unwrap(),
        ),
    ];
    for (model, k) in cases {
        let omega = equilibrium(&k, DEFAULT_NODES).unwrap().omega;
        let dists: Vec<f64> = [250, 500, 1000]
            .iter()
            .map(|&n| kolmogorov(dos_measure(&model, n).unwrap().dk(), &omega))
            .collect();
        assert!(dists.windows(2).all(|w| w[1] < w[0]), "{dists:?}");
        assert!(dists[2] <= 0.01, "{dists:?}");
    }
}
