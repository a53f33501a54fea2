use proptest::prelude::*;
use ratdyn::chaos::{box_counting_dimension, default_scales, lyapunov_exponent};
use ratdyn::cycles::verify_cycle;
use ratdyn::ext::{chordal_distance, ZERO};
use ratdyn::fixed_points::fixed_points;
use ratdyn::plane_map::{
    compare_moduli, condition_signature, eval_derivative, eval_map, singular_points, Cmp, DEFAULT_EQ_TOL,
};
use ratdyn::sampling::{sample_params, sample_z0};
use ratdyn::{ExtComplex, MapParams, C64};

fn c64(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(re, im)| C64::new(re, im))
}

fn params() -> impl Strategy<Value = MapParams> {
    (c64(2.0), c64(2.0), c64(2.0), c64(2.0))
        .prop_filter("gamma away from zero", |(_, _, g, _)| g.norm() > 1e-3)
        .prop_filter_map("valid map", |(a, b, g, d)| MapParams::new(a, b, g, d).ok())
}

fn ext() -> impl Strategy<Value = ExtComplex> {
    prop_oneof![1 => Just(ExtComplex::Infinity), 9 => c64(5.0).prop_map(ExtComplex::Finite)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn derivative_matches_central_difference(p in params(), z in c64(2.0)) {
        let poles = [C64::new(0.0, 0.0), -p.delta / p.gamma];
        prop_assume!(poles.iter().all(|q| (z - q).norm() > 0.05));
        let f = |w: C64| eval_map(&p, ExtComplex::Finite(w)).unwrap().finite().unwrap();
        let h = 1e-5 * (1.0 + z.norm());
        let fd = (f(z + h) - f(z - h)) / (2.0 * h);
        let d = eval_derivative(&p, ExtComplex::Finite(z)).unwrap();
        prop_assert!((fd - d).norm() <= 1e-5 * d.norm(), "fd {fd} vs {d}");
    }

    #[test]
    fn vieta_identities(p in params()) {
        let r = fixed_points(&p).unwrap().points();
        prop_assume!(r.len() == 3);
        let e1 = r[0] + r[1] + r[2];
        let e2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let e3 = r[0] * r[1] * r[2];
        for (got, want) in [(e1, -p.delta / p.gamma), (e2, -p.alpha / p.gamma), (e3, p.beta / p.gamma)] {
            prop_assert!((got - want).norm() <= 1e-8 * (1.0 + want.norm()));
        }
    }
}

proptest! {
    #[test]
    fn poles_map_to_infinity_and_back(p in params()) {
        prop_assume!(p.reduction() == ratdyn::plane_map::Reduction::None);
        prop_assert_eq!(eval_map(&p, ZERO).unwrap(), ExtComplex::Infinity);
        prop_assert_eq!(eval_map(&p, ExtComplex::Infinity).unwrap(), ZERO);
        // −δ/γ is only known to rounding, so its image is ∞ or very large
        for pole in singular_points(&p).unwrap() {
            let w = eval_map(&p, pole).unwrap();
            prop_assert!(chordal_distance(&w, &ExtComplex::Infinity) < 1e-9, "{w}");
        }
    }

    #[test]
    fn case_c_is_an_involution(a in c64(2.0), b in c64(2.0), z in ext()) {
        prop_assume!(a.norm() > 1e-3);
        let p = MapParams::new(a, b, a, b).unwrap();
        let w = eval_map(&p, eval_map(&p, z).unwrap()).unwrap();
        prop_assert!(chordal_distance(&w, &z) < 1e-12);
    }

    #[test]
    fn scaling_leaves_the_map_unchanged(p in params(), s in c64(3.0), z in c64(2.0)) {
        prop_assume!(s.norm() > 0.1);
        let q = p.scaled(s).unwrap();
        let (fp, fq) = (eval_map(&p, ExtComplex::Finite(z)).unwrap(), eval_map(&q, ExtComplex::Finite(z)).unwrap());
        prop_assert!(chordal_distance(&fp, &fq) < 1e-12);
        prop_assert_eq!(condition_signature(&p, DEFAULT_EQ_TOL).triple(), condition_signature(&q, DEFAULT_EQ_TOL).triple());
        let (mp, mq) = (fixed_points(&p).unwrap(), fixed_points(&q).unwrap());
        prop_assert_eq!(mp.records.len(), mq.records.len());
        for r in &mp.records {
            let nearest = mq.records.iter().min_by(|x, y| (x.z_bar - r.z_bar).norm().total_cmp(&(y.z_bar - r.z_bar).norm())).unwrap();
            prop_assert!((nearest.multiplier_abs - r.multiplier_abs).abs() <= 1e-7 * (1.0 + r.multiplier_abs));
        }
    }

    #[test]
    fn chordal_metric_axioms(a in ext(), b in ext(), c in ext()) {
        let (ab, ba, bc, ac) = (chordal_distance(&a, &b), chordal_distance(&b, &a), chordal_distance(&b, &c), chordal_distance(&a, &c));
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=2.0).contains(&ab));
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert_eq!(chordal_distance(&a, &a), 0.0);
    }

    #[test]
    fn modulus_comparison_is_antisymmetric(x in 0.0..10.0f64, y in 0.0..10.0f64) {
        let flip = |c: Cmp| match c { Cmp::LT => Cmp::GT, Cmp::GT => Cmp::LT, Cmp::EQ => Cmp::EQ };
        prop_assert_eq!(compare_moduli(x, y, DEFAULT_EQ_TOL), flip(compare_moduli(y, x, DEFAULT_EQ_TOL)));
    }

    #[test]
    fn samplers_are_prefix_stable(seed in any::<u64>(), n in 1usize..40, k in 0usize..40) {
        let k = k.min(n);
        prop_assert_eq!(&sample_z0(seed, n)[..k], &sample_z0(seed, k)[..]);
        prop_assert_eq!(&sample_params(seed, n)[..k], &sample_params(seed, k)[..]);
    }

    #[test]
    fn cycle_listing_is_rotation_invariant(shift in 0usize..5) {
        let p = ratdyn::presets::period_5();
        let base: Vec<ExtComplex> = ratdyn::presets::PERIOD_5_POINTS
            .iter()
            .map(|&(re, im)| ExtComplex::Finite(C64::new(re, im)))
            .collect();
        let mut rotated = base.clone();
        rotated.rotate_left(shift);
        let a = verify_cycle(&p, &base, 1e-3).unwrap();
        let b = verify_cycle(&p, &rotated, 1e-3).unwrap();
        prop_assert_eq!(a.points, b.points);
        prop_assert_eq!(a.prime_period, 5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn box_dimension_is_similarity_invariant(s in c64(4.0), t in c64(10.0)) {
        prop_assume!(s.norm() > 0.01);
        let seg: Vec<C64> = (0..20_000).map(|k| C64::new(k as f64 / 19_999.0, (k as f64 * 0.37).sin() * 0.3)).collect();
        let moved: Vec<C64> = seg.iter().map(|z| z * s + t).collect();
        let (d0, _) = box_counting_dimension(&seg, &default_scales()).unwrap();
        let (d1, _) = box_counting_dimension(&moved, &default_scales()).unwrap();
        prop_assert!((d0 - d1).abs() < 0.1, "{d0} vs {d1}");
    }

    #[test]
    fn sink_lyapunov_is_scale_invariant(s in c64(3.0)) {
        prop_assume!(s.norm() > 0.1);
        let p = ratdyn::presets::fast_convergence();
        let z0 = ExtComplex::Finite(C64::new(1.0, 1.0));
        let l0 = lyapunov_exponent(&p, z0, 10_000, 2_000).unwrap();
        let l1 = lyapunov_exponent(&p.scaled(s).unwrap(), z0, 10_000, 2_000).unwrap();
        prop_assert!((l0 - l1).abs() < 1e-9);
    }
}
