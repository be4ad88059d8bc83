use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use qhr_core::cartan::{
    angle_of_triple, hermitian_triple_of_lifts, interchanging_skew_involution, verify_interchange,
};
use qhr_core::experiments::{
    genericity_experiment, sample_compact, sample_sp1, sample_sp11, trial_rng, GroupTag,
};
use qhr_core::reversers::{
    family_member, hyperbolic_normal, reverser_coset_check, reverser_space, sdr_sp1, sdr_sp11,
    sdr_vs_standard_predicate, so4_factor, so4_from_pair, ReverserWitness, SdrVerdict,
};
use qhr_core::spectral::{classify, hyperbolic_normal_form};
use qhr_core::{BoundaryPoint, FormTag, HermitianSpace, QMatrix, Quaternion, Tolerance};
use rand::Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn conj(space: &HermitianSpace, g: &QMatrix, x: &QMatrix) -> QMatrix {
    &(g * x) * &space.group_inverse(g, 1e-6).unwrap()
}

fn finite_point(space: &HermitianSpace, seed: u64, k: u64) -> BoundaryPoint {
    let mut rng = trial_rng(seed, k);
    let v: [f64; 3] = [
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
    ];
    BoundaryPoint::finite(space, Quaternion::pure(v), 1e-9).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn products_stay_in_the_group(seed in any::<u64>()) {
        let space = HermitianSpace::h1(1);
        let mut rng = trial_rng(seed, 0);
        let m = sample_sp11(&mut rng);
        let n = sample_sp11(&mut rng);
        let mn = &m * &n;
        prop_assert!(space.check_member_scaled(&mn, 1e-9).is_ok());
        let inv = space.group_inverse(&mn, 1e-6).unwrap();
        let expected = &space.group_inverse(&n, 1e-6).unwrap() * &space.group_inverse(&m, 1e-6).unwrap();
        prop_assert!(inv.dist(&expected) <= 1e-9 * expected.max_norm().max(1.0));
    }

    #[test]
    fn complex_adjoint_respects_adj(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1);
        let m = QMatrix::from_fn(2, 3, |_, _| sample_sp1(&mut rng) * rng.random_range(0.1..3.0));
        let lhs = m.adj().complex_adjoint();
        let rhs = m.complex_adjoint().adjoint();
        prop_assert!((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn classification_is_conjugation_invariant(seed in any::<u64>()) {
        let space = HermitianSpace::h1(1);
        let mut rng = trial_rng(seed, 2);
        let m = sample_sp11(&mut rng);
        let g = sample_sp11(&mut rng);
        let first = classify(&space, &m, &tol()).unwrap();
        let second = classify(&space, &conj(&space, &g, &m), &tol()).unwrap();
        prop_assert_eq!(first.verdict.name(), second.verdict.name());
    }

    #[test]
    fn normal_form_reconstructs(seed in any::<u64>()) {
        let space = HermitianSpace::h1(1);
        let mut rng = trial_rng(seed, 3);
        let g = sample_sp11(&mut rng);
        let a = conj(&space, &g, &hyperbolic_normal(rng.random_range(0.2..0.9), rng.random_range(0.0..PI)));
        let h = hyperbolic_normal_form(&space, &a, &tol()).unwrap();
        let back = conj(&space, &h.c_a, &h.e_a);
        prop_assert!(back.dist(&a) < 1e-8 * a.max_norm().max(1.0));
        let pairing = space.hermitian_product(&h.attracting_lift(), &h.repelling_lift()).unwrap();
        prop_assert!((pairing - Quaternion::ONE).norm() < 1e-9);
    }

    #[test]
    fn cartan_angle_in_range_and_lift_free(seed in any::<u64>()) {
        let space = HermitianSpace::h1(2);
        let mut rng = trial_rng(seed, 4);
        let lifts: Vec<QMatrix> = (0..3)
            .map(|_| {
                let y = sample_sp1(&mut rng) * rng.random_range(0.0..1.5);
                let x = Quaternion::pure(sample_sp1(&mut rng).vector());
                QMatrix::column(&[x - Quaternion::real(y.norm_sqr() / 2.0), y, Quaternion::ONE])
            })
            .collect();
        let angle = |z: &[QMatrix]| {
            angle_of_triple(hermitian_triple_of_lifts(&space, &z[0], &z[1], &z[2]).unwrap()).unwrap().angle
        };
        let base = angle(&lifts);
        prop_assert!((0.0..=FRAC_PI_2 + 1e-12).contains(&base));
        let scaled: Vec<QMatrix> = lifts
            .iter()
            .map(|z| z.right_scale(sample_sp1(&mut rng) * rng.random_range(0.2..5.0)))
            .collect();
        prop_assert!((angle(&scaled) - base).abs() < 1e-9);
    }

    #[test]
    fn interchanging_involution_verifies(seed in any::<u64>()) {
        let space = HermitianSpace::h1(1);
        let pts: Vec<BoundaryPoint> = (0..4).map(|k| finite_point(&space, seed, 10 + k)).collect();
        let c = interchanging_skew_involution(&space, &pts[0], &pts[1], &pts[2], &pts[3], &tol()).unwrap();
        prop_assert!(space.check_member_scaled(&c, 1e-9).is_ok());
        prop_assert!((&c * &c).dist(&-&QMatrix::identity(2)) < 1e-9 * c.max_norm().powi(2).max(1.0));
        prop_assert!(verify_interchange(&space, &c, [&pts[0], &pts[1], &pts[2], &pts[3]], &tol()).is_ok());
    }

    #[test]
    fn sp1_witnesses_verify(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 5);
        let (p1, p2) = (sample_sp1(&mut rng), sample_sp1(&mut rng));
        let w = sdr_sp1(p1, p2, &tol()).unwrap();
        let q = w.c.get(0, 0);
        prop_assert_eq!(w.square_sign, -1);
        prop_assert!((q * q + Quaternion::ONE).norm() < 1e-9);
        prop_assert!(w.residual_conj < 1e-9 && w.residual_group < 1e-9);
    }

    #[test]
    fn so4_factorization_round_trips(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 6);
        let r = so4_from_pair(sample_sp1(&mut rng), sample_sp1(&mut rng));
        let (p, q) = so4_factor(&r).unwrap();
        prop_assert!((so4_from_pair(p, q) - r).amax() < 1e-12);
    }

    #[test]
    fn reversers_of_one_tuple_form_a_coset(seed in any::<u64>()) {
        let space = HermitianSpace::h1(1);
        let mut rng = trial_rng(seed, 7);
        let g = sample_sp11(&mut rng);
        let a = conj(&space, &g, &hyperbolic_normal(rng.random_range(0.2..0.9), rng.random_range(0.1..3.0)));
        let mut member = || {
            let b = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI));
            conj(&space, &g, &family_member(b).unwrap())
        };
        let (h1, h2) = (member(), member());
        prop_assert_eq!(reverser_coset_check(&[a], &h1, &h2, &tol()), Ok(true));
    }

    #[test]
    fn predicate_yes_carries_a_skew_witness(seed in any::<u64>()) {
        let space = HermitianSpace::h1(1);
        let mut rng = trial_rng(seed, 8);
        let t = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI));
        let u = Quaternion::pure(sample_sp1(&mut rng).vector()).normalized().unwrap();
        let k = conj(&space, &sample_sp11(&mut rng), &QMatrix::diag(&[u, u]));
        let b = &family_member(t).unwrap() * &k;
        let (r, theta) = (rng.random_range(0.2..0.9), rng.random_range(0.1..3.0));
        let rep = sdr_vs_standard_predicate(&space, &b, r, theta, &tol()).unwrap();
        let w = rep.verdict.witness().expect("constructed positive");
        prop_assert_eq!(w.square_sign, -1);
        prop_assert!(ReverserWitness::verify(&space, &[hyperbolic_normal(r, theta), b], &w.c, 1e-9).is_ok());
    }

    #[test]
    fn sp11_yes_verdicts_reverify(seed in any::<u64>()) {
        let space = HermitianSpace::h1(1);
        let mut rng = trial_rng(seed, 9);
        let g = sample_sp11(&mut rng);
        let a = conj(&space, &g, &hyperbolic_normal(rng.random_range(0.2..0.9), rng.random_range(0.1..3.0)));
        let b = conj(&space, &g, &family_member(Complex64::from_polar(1.0, rng.random_range(0.0..6.0))).unwrap());
        if let SdrVerdict::Yes { witness } = sdr_sp11(&space, &a, &b, &tol()).unwrap() {
            prop_assert!(ReverserWitness::verify(&space, &[a, b], &witness.c, 1e-9).is_ok());
        }
    }
}

#[test]
fn lie_algebra_sizes() {
    for n in 1..=3 {
        assert_eq!(
            HermitianSpace::h1(n).lie_algebra_basis().len(),
            (n + 1) * (2 * n + 3)
        );
    }
}

#[test]
fn ad_dims_add_up() {
    let mut rng = trial_rng(11, 0);
    for n in 1..=2 {
        let compact = HermitianSpace::new(n, FormTag::Compact).unwrap();
        for _ in 0..5 {
            let g = sample_compact(n, &mut rng).unwrap();
            let s = &(&g * &compact.canonical_skew_involution()) * &g.adj();
            let d = compact.ad_eigenspace_dims(&s, &tol()).unwrap();
            assert_eq!(d.plus_one + d.minus_one, d.total);
        }
    }
}

#[test]
fn attracting_point_attracts() {
    let space = HermitianSpace::h1(1);
    for trial in 0..10 {
        let mut rng = trial_rng(12, trial);
        let g = sample_sp11(&mut rng);
        let a = conj(
            &space,
            &g,
            &hyperbolic_normal(rng.random_range(0.3..0.8), rng.random_range(0.0..PI)),
        );
        let h = hyperbolic_normal_form(&space, &a, &tol()).unwrap();
        // lift(a_A) is an eigenvector with |lambda| > 1.
        let image = &a * &h.attracting_lift();
        let lambda = h.attracting_lift().euclidean_inner(&image)
            * h.attracting_lift()
                .euclidean_inner(&h.attracting_lift())
                .inverse()
                .unwrap();
        assert!(lambda.norm() > 1.0);
        assert!(image.dist(&h.attracting_lift().right_scale(lambda)) < 1e-8 * image.max_norm());
        let mut p = finite_point(&space, 13, trial);
        for _ in 0..200 {
            p = p.apply(&space, &a, 1e-6).unwrap();
        }
        assert!(p.distance(&h.attracting, &space) < 1e-6, "trial {trial}");
    }
}

#[test]
fn normal_form_reverser_space_contains_family_tangents() {
    let a = hyperbolic_normal(0.4, 1.1);
    let rs = reverser_space(&[a], &tol()).unwrap();
    let basis: Vec<_> = rs.basis.iter().map(|x| x.to_real()).collect();
    for b in [Complex64::new(1.0, 0.0), Complex64::new(0.3, -1.2)] {
        for dir in [Complex64::new(1.0, 0.0), Complex64::i()] {
            let h = 1e-6;
            let tangent = (&family_member(b + dir * h).unwrap()
                - &family_member(b - dir * h).unwrap())
                .scale(0.5 / h);
            let mut v = tangent.to_real();
            for e in &basis {
                v -= e * e.dot(&v);
            }
            assert!(
                v.norm() < 1e-8 * tangent.frobenius(),
                "residual {}",
                v.norm()
            );
        }
    }
}

#[test]
fn experiment_reports_are_reproducible() {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    for group in [GroupTag::Sp1, GroupTag::Sp2, GroupTag::So4, GroupTag::Sp11] {
        let a = genericity_experiment(group, 60, 99, &tol()).unwrap();
        let b = pool.install(|| genericity_experiment(group, 60, 99, &tol()).unwrap());
        assert_eq!(a, b);
        let counts = a.outcomes.yes + a.outcomes.no + a.outcomes.inconclusive;
        assert_eq!(counts, 60);
        assert_eq!(a.dim_histogram.values().sum::<usize>(), 60);
        assert_eq!(a.fraction_sdr, a.outcomes.yes as f64 / 60.0);
    }
}
