use nodal_theta::curve::{canonical_rep, lattice_coords, lattice_distance, PeriodGroup};
use nodal_theta::theta::{big_theta, e_func, theta_char, translation_factor, Characteristic, ModularParameter, SeriesPolicy};
use nodal_theta::Complex64;
use proptest::prelude::*;

fn taus() -> impl Strategy<Value = Complex64> {
    prop_oneof![Just(Complex64::new(0.0, 1.0)), Just(Complex64::new(0.3, 0.8)), (-0.5..0.5f64, 0.7..1.5f64).prop_map(|(a, b)| Complex64::new(a, b))]
}

fn points(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_translates_by_its_factor(
        tau in taus(),
        z in points(1.0),
        a in -1.0..1.0f64,
        b in -1.0..1.0f64,
        p in -3i64..=3,
        q in -3i64..=3,
    ) {
        let tau = ModularParameter::new(tau).unwrap();
        let ch = Characteristic::new(a, b);
        let pol = SeriesPolicy::default();
        let base = theta_char(ch, z, tau, &pol).unwrap();
        let moved = theta_char(ch, z + p as f64 + tau.value() * q as f64, tau, &pol).unwrap();
        prop_assert!(rel(moved, translation_factor(ch, p, q, z, tau) * base) < 1e-10);
    }

    #[test]
    fn shifting_the_characteristic_by_integers(tau in taus(), z in points(1.0), a in -1.0..1.0f64, b in -1.0..1.0f64, m in -2i64..=2, n in -2i64..=2) {
        // θ[a+m; b+n] = e(a·n) θ[a;b]
        let tau = ModularParameter::new(tau).unwrap();
        let pol = SeriesPolicy::default();
        let base = theta_char(Characteristic::new(a, b), z, tau, &pol).unwrap();
        let shifted = theta_char(Characteristic::new(a + m as f64, b + n as f64), z, tau, &pol).unwrap();
        prop_assert!(rel(shifted, e_func(Complex64::new(a * n as f64, 0.0)) * base) < 1e-10);
    }

    #[test]
    fn big_theta_is_automorphic_on_gamma(
        tau in taus(),
        z in points(0.8),
        w in points(0.5),
        r1 in -0.5..0.5f64,
        r2 in -0.5..0.5f64,
        m in -2i64..=2,
        p in -2i64..=2,
        q in -2i64..=2,
    ) {
        let mt = ModularParameter::new(tau).unwrap();
        let pol = SeriesPolicy::default();
        let g = PeriodGroup::new(r1, r2, tau).unwrap().element(m, p, q);
        let base = big_theta(z, w, mt, r1, r2, &pol).unwrap();
        let moved = big_theta(z + g.0, w + g.1, mt, r1, r2, &pol).unwrap();
        let factor = e_func(-0.5 * (q * q) as f64 * tau - q as f64 * z);
        prop_assert!((moved - factor * base).norm() < 1e-10 * (factor * base).norm().max(1.0));
    }

    #[test]
    fn gamma_elements_decompose_exactly(tau in taus(), r1 in -0.5..0.5f64, r2 in -0.5..0.5f64, m in -4i64..=4, p in -4i64..=4, q in -4i64..=4) {
        let pg = PeriodGroup::new(r1, r2, tau).unwrap();
        let d = pg.decompose(pg.element(m, p, q));
        prop_assert_eq!((d.m, d.p, d.q), (m, p, q));
        prop_assert!(d.residual_norm() < 1e-12);
    }

    #[test]
    fn canonical_rep_lands_in_the_parallelogram(tau in taus(), z in points(5.0), q0 in points(0.3)) {
        let r = canonical_rep(z, q0, tau);
        let (s, t) = lattice_coords(r, q0, tau);
        prop_assert!((-1e-12..1.0 + 1e-12).contains(&s) && (-1e-12..1.0 + 1e-12).contains(&t));
        prop_assert!(lattice_distance(r, z, tau) < 1e-9);
    }

    #[test]
    fn lattice_distance_is_lattice_invariant(tau in taus(), z in points(1.0), w in points(1.0), p in -3i64..=3, q in -3i64..=3) {
        let moved = z + p as f64 + tau * q as f64;
        prop_assert!((lattice_distance(moved, w, tau) - lattice_distance(z, w, tau)).abs() < 1e-9);
        prop_assert!((lattice_distance(z, w, tau) - lattice_distance(w, z, tau)).abs() < 1e-9);
    }
}
