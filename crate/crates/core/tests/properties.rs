use cone_rcb::bergman::khs_expansion_check;
use cone_rcb::jordan::{det_b_residual, Algebra, ComplexElement};
use cone_rcb::rcb::{covariance_residual, ratio_test, Moebius, TestFunction};
use cone_rcb::rng;
use cone_rcb::sharp::{a_mu_eigenvalue, c_mu, cross_ratio, projective_action, xi_invariance_check, GroupElement};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;

fn algebra() -> impl Strategy<Value = Algebra> {
    (0usize..13).prop_map(|i| Algebra::catalogue()[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jordan_product_is_commutative_and_jordan(alg in algebra(), seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let x = alg.random_element(&mut r);
        let y = alg.random_element(&mut r);
        let d = x.product(&y).unwrap().sub(&y.product(&x).unwrap()).unwrap().norm();
        prop_assert!(d <= 1e-12 * (1.0 + x.norm() * y.norm()));
        let x2 = x.square();
        let lhs = x.product(&x2.product(&y).unwrap()).unwrap();
        let rhs = x2.product(&x.product(&y).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-10 * (1.0 + x.norm().powi(3) * y.norm()));
    }

    #[test]
    fn quadratic_representation_is_2l2_minus_lx2(alg in algebra(), seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let x = alg.random_element(&mut r);
        let l = x.lmap();
        let p = &l * &l * 2.0 - x.square().lmap();
        prop_assert!((p - x.pmap()).norm() <= 1e-11 * (1.0 + x.norm().powi(2)));
    }

    #[test]
    fn det_b_is_a_power_of_h(alg in algebra(), seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let z = ComplexElement::random_in_ball(alg, 0.9, &mut r);
        let w = ComplexElement::random_in_ball(alg, 0.9, &mut r);
        prop_assert!(det_b_residual(&z, &w).unwrap() < 1e-8);
    }

    #[test]
    fn ratio_is_constant(k1 in 1i64..14, k2 in 1i64..14, j in 0u32..8) {
        let t = ratio_test(k1, k2, j).unwrap();
        prop_assert!(t.constant && t.matches_expected);
    }

    #[test]
    fn rcb_covariance(seed in any::<u64>(), j in 0u32..5, k1 in 1i64..8, k2 in 1i64..8, a in 0.3f64..2.0) {
        let mut r = rng::seeded(seed);
        let g = Moebius::random(&mut r);
        let f = TestFunction::exp(a).unwrap();
        let h = TestFunction::pole(C::new(0.3, -0.8), 2).unwrap();
        let pts = [C::new(0.1, 0.7), C::new(-0.9, 1.3)];
        prop_assert!(covariance_residual(&f, &h, k1, k2, j, &g, &pts).unwrap() < 1e-9);
    }

    #[test]
    fn khs_partial_sums_within_bound(nu in 0.1f64..12.0, r1 in 0.0f64..0.7, r2 in 0.0f64..0.7, t1 in 0.0f64..6.3, t2 in 0.0f64..6.3) {
        prop_assume!(r1 * r2 <= 0.5);
        let rep = khs_expansion_check(nu, C::from_polar(r1, t1), C::from_polar(r2, t2), 40).unwrap();
        prop_assert!(rep.within, "{rep:?}");
    }

    #[test]
    fn c_is_symmetric_and_eigenvalue_product(re in -3.5f64..1.5, im in -2.0f64..2.0, n in 0i64..9) {
        let mu = C::new(re, im);
        prop_assume!((mu + 1.0).norm() > 1e-3 && (mu.re.fract()).abs() > 1e-3);
        if let (Ok(c), Ok(l1), Ok(l2)) = (c_mu(mu), a_mu_eigenvalue(n, mu), a_mu_eigenvalue(n, -mu - 2.0)) {
            prop_assert!((c - c_mu(-mu - 2.0).unwrap()).norm() <= 1e-13 * c.norm());
            prop_assert!((l1 * l2 - c).norm() <= 1e-9 * c.norm().max(1e-300) + 1e-300, "{} {}", l1 * l2, c);
            prop_assert_eq!(l1, a_mu_eigenvalue(-n, mu).unwrap());
        }
    }

    #[test]
    fn cross_ratio_is_invariant(seed in any::<u64>(), pts in proptest::array::uniform4(0.0f64..PI)) {
        let mut r = rng::seeded(seed);
        let g = GroupElement::random(1.2, &mut r);
        let th = g.theta();
        let [u, y, x, v] = pts;
        let a = cross_ratio(u, y, x, v);
        prop_assume!(a.is_finite() && a.abs() < 1e6);
        let b = cross_ratio(projective_action(&g, u).0, projective_action(&g, y).0, projective_action(&th, x).0, projective_action(&th, v).0);
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn xi_is_h_invariant(k in 0i64..6, a in 0.05f64..20.0, x in -5.0f64..5.0, y in 0.01f64..5.0) {
        prop_assert!(xi_invariance_check(2 * k, a, C::new(x, y)).unwrap() < 1e-12);
        prop_assert!(xi_invariance_check(2 * k + 1, a, C::new(x, y)).is_err());
    }
}
