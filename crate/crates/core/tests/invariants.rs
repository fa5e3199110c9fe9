use nalgebra::DVector;
use proptest::prelude::*;

use certhom::linalg::random_unitary;
use certhom::newton::condition_mu;
use certhom::sampling::{gaussian_vector, random_phase, stream_rng};
use certhom::start::{random_initial_pair, random_system_on_sphere};
use certhom::{
    bw_inner, bw_norm, riemann_distance, unitary_compose, Complex64, DegreeVector, PolySystem, ProjectivePoint,
};

fn degree_vector() -> impl Strategy<Value = DegreeVector> {
    prop::collection::vec(1u32..=3, 1..=3).prop_map(|d| DegreeVector::new(d).unwrap())
}

fn system(dv: &DegreeVector, seed: u64, stream: u64) -> PolySystem {
    random_system_on_sphere(dv, &mut stream_rng(seed, stream)).into_system()
}

fn point(nvars: usize, seed: u64, stream: u64) -> DVector<Complex64> {
    gaussian_vector(nvars, &mut stream_rng(seed, stream))
}

fn close(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_homogeneous(dv in degree_vector(), seed in any::<u64>(), lr in -1.0f64..1.0, li in -1.0f64..1.0) {
        let h = system(&dv, seed, 0);
        let z = point(dv.nvars(), seed, 1);
        let lambda = Complex64::new(lr, li) + Complex64::new(0.5, 0.0);
        let scaled = h.evaluate(&z.map(|c| c * lambda)).unwrap();
        let plain = h.evaluate(&z).unwrap();
        for (i, &d) in dv.degrees().iter().enumerate() {
            let expected = plain[i] * lambda.powu(d);
            prop_assert!(close(scaled[i], expected, expected.norm()));
        }
    }

    #[test]
    fn euler_identity(dv in degree_vector(), seed in any::<u64>()) {
        let h = system(&dv, seed, 0);
        let z = point(dv.nvars(), seed, 1);
        let (value, jac) = h.evaluate_with_jacobian(&z).unwrap();
        let lhs = &jac * &z;
        for (i, &d) in dv.degrees().iter().enumerate() {
            let expected = value[i] * f64::from(d);
            prop_assert!(close(lhs[i], expected, z.norm().powi(d as i32)));
        }
    }

    #[test]
    fn inner_product_is_hermitian_and_bounded(dv in degree_vector(), seed in any::<u64>()) {
        let f = system(&dv, seed, 0);
        let g = system(&dv, seed, 1).scale(Complex64::new(2.0, -1.0));
        let fg = bw_inner(&f, &g).unwrap();
        let gf = bw_inner(&g, &f).unwrap();
        prop_assert!(close(fg, gf.conj(), 1.0));
        prop_assert!(fg.norm() <= bw_norm(&f) * bw_norm(&g) * (1.0 + 1e-12));
        prop_assert!((bw_inner(&f, &f).unwrap().re - bw_norm(&f).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn norm_is_unitarily_invariant(dv in degree_vector(), seed in any::<u64>()) {
        let h = system(&dv, seed, 0);
        let u = random_unitary(dv.nvars(), &mut stream_rng(seed, 1));
        let moved = unitary_compose(&h, &u).unwrap();
        prop_assert!((bw_norm(&moved) - bw_norm(&h)).abs() < 1e-10);
    }

    #[test]
    fn riemann_distance_is_a_metric(nvars in 2usize..=5, seed in any::<u64>()) {
        let p = |s| ProjectivePoint::new(point(nvars, seed, s)).unwrap();
        let (x, y, z) = (p(0), p(1), p(2));
        let phase = random_phase(&mut stream_rng(seed, 3));
        prop_assert!(riemann_distance(&x, &x.with_phase(phase)) < 1e-7);
        prop_assert!((riemann_distance(&x, &y) - riemann_distance(&y, &x)).abs() < 1e-12);
        prop_assert!(riemann_distance(&x, &z) <= riemann_distance(&x, &y) + riemann_distance(&y, &z) + 1e-12);
        prop_assert!(riemann_distance(&x, &y) <= std::f64::consts::FRAC_PI_2 + 1e-12);
    }

    #[test]
    fn mu_is_invariant_under_scaling(dv in degree_vector(), seed in any::<u64>(), r in 0.1f64..10.0) {
        let h = system(&dv, seed, 0);
        let z = ProjectivePoint::new(point(dv.nvars(), seed, 1)).unwrap();
        let mu = condition_mu(&h, &z);
        let scaled = condition_mu(&h.scale(Complex64::new(r, 0.0)), &z.with_phase(random_phase(&mut stream_rng(seed, 2))));
        prop_assume!(mu.is_finite() && mu < 1e6);
        prop_assert!((mu - scaled).abs() <= 1e-8 * mu);
        prop_assert!(mu >= 1.0 - 1e-12);
    }

    #[test]
    fn random_pairs_lie_on_the_sphere_with_their_zero(dv in degree_vector(), seed in any::<u64>()) {
        let pair = random_initial_pair(&dv, &mut stream_rng(seed, 0)).unwrap();
        prop_assert!((bw_norm(&pair.g) - 1.0).abs() < 1e-12);
        let residual = pair.g.evaluate(pair.zeta0.coords()).unwrap().norm();
        prop_assert!(residual < 1e-10, "residual {residual}");
    }
}
