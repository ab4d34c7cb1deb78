mod common;

use krflow::cohomology::{
    class_at, collapse_exponent, nef_check, singularity_time, time_rescale, time_unscale,
    unnormalized_class, volume_poly, CohClass, CohomologySetup, ConeSpec, IntersectionTensor,
};
use krflow::models::{CalabiModel, CurveKind, ProductModel};
use krflow::FlowError;
use proptest::prelude::*;

use common::*;

fn f1(a: f64, b: f64) -> CohomologySetup {
    CalabiModel::with_defaults(a, b).unwrap().setup().unwrap()
}

fn kinds(codes: &[u8]) -> Vec<CurveKind> {
    codes
        .iter()
        .map(|c| match c % 3 {
            0 => CurveKind::ProjectiveLine,
            1 => CurveKind::Torus,
            _ => CurveKind::Genus2,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn class_at_zero_is_initial_class(a in 0.1f64..5.0, gap in 0.1f64..5.0) {
        let setup = f1(a, a + gap);
        let c = class_at(&setup, 0.0).unwrap();
        prop_assert_eq!(c.0, vec![a + gap, -a]);
    }

    #[test]
    fn f1_volume_matches_expanded_polynomial(a in 0.1f64..5.0, gap in 0.1f64..5.0, u in 0.0f64..1.0) {
        let b = a + gap;
        let setup = f1(a, b);
        let t_sing = f1_singular_time(a, b);
        for i in 0..100 {
            let t = t_sing * (u + i as f64) / 100.0;
            let x = (-t).exp();
            // (b_t² - a_t²) expanded in x = e^{-t}.
            let poly = ((b + 3.0).powi(2) - (a + 1.0).powi(2)) * x * x
                - 2.0 * (3.0 * (b + 3.0) - (a + 1.0)) * x
                + 8.0;
            let v = volume_poly(&setup, t).unwrap();
            prop_assert!((v - poly).abs() <= 1e-12 * (1.0 + poly.abs()), "t = {}: {} vs {}", t, v, poly);
        }
    }

    #[test]
    fn product_volume_is_factorial_times_product(codes in proptest::collection::vec(0u8..3, 2..4),
                                                 c0 in proptest::collection::vec(0.2f64..4.0, 3),
                                                 frac in 0.0f64..0.99) {
        let n = codes.len();
        let model = ProductModel::from_kinds(&kinds(&codes), &c0[..n]).unwrap();
        let setup = model.setup().unwrap();
        let kap: Vec<f64> = kinds(&codes).iter().map(|k| k.kappa()).collect();
        let t_sing = product_singular_time(&c0[..n], &kap);
        let t = if t_sing.is_finite() { frac * t_sing } else { 10.0 * frac };
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let prod: f64 = (0..n).map(|i| product_coeff(c0[i], kap[i], t)).product();
        let v = volume_poly(&setup, t).unwrap();
        prop_assert!((v - fact * prod).abs() <= 1e-12 * (1.0 + v.abs()));
        let sing = singularity_time(&setup).unwrap();
        if t_sing.is_finite() {
            prop_assert!((sing.time - t_sing).abs() <= 1e-12);
        } else {
            prop_assert!(sing.time.is_infinite());
        }
        prop_assert_eq!(
            collapse_exponent(&setup, &sing).unwrap().k,
            product_collapse_exponent(&c0[..n], &kap)
        );
    }

    #[test]
    fn rescale_round_trip(t in 0.0f64..20.0) {
        let s = time_rescale(t).unwrap();
        prop_assert!((time_unscale(s).unwrap() - t).abs() <= 1e-14 * (1.0 + t));
        prop_assert!((s - (t.exp() - 1.0) / 2.0).abs() <= 1e-12 * (1.0 + s));
    }

    #[test]
    fn unnormalized_class_is_affine_in_s(a in 0.1f64..5.0, gap in 0.1f64..5.0, frac in 0.0f64..1.0) {
        let setup = f1(a, a + gap);
        let t = frac * f1_singular_time(a, a + gap);
        let s = time_rescale(t).unwrap();
        let un = unnormalized_class(&setup, t).unwrap();
        let affine = &setup.omega0 - &setup.c1.scale(2.0 * s);
        for (x, y) in un.0.iter().zip(&affine.0) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn facets_positive_before_singular_time(a in 0.1f64..5.0, gap in 0.1f64..5.0, frac in 0.0f64..0.999) {
        let setup = f1(a, a + gap);
        let sing = singularity_time(&setup).unwrap();
        prop_assert!((sing.time - f1_singular_time(a, a + gap)).abs() <= 1e-12);
        let c = class_at(&setup, frac * sing.time).unwrap();
        prop_assert!(setup.cone.min_facet_value(&c) > 0.0);
        prop_assert!(nef_check(&setup, &sing.limit_class).nef);
    }
}

/// `d log V / d log(T - t)` between `τ = 10^{-j}` and `10^{-j-1}`.
fn volume_slopes(setup: &CohomologySetup, t_sing: f64) -> Vec<f64> {
    (3..6)
        .map(|j| {
            let (t1, t2) = (10f64.powi(-j), 10f64.powi(-j - 1));
            let v1 = volume_poly(setup, t_sing - t1).unwrap();
            let v2 = volume_poly(setup, t_sing - t2).unwrap();
            (v1 / v2).ln() / (t1 / t2).ln()
        })
        .collect()
}

#[test]
fn volume_vanishes_to_order_k() {
    for (a, b) in [(1.0, 4.0), (2.0, 5.0), (0.5, 2.5), (3.0, 5.0)] {
        let setup = f1(a, b);
        let t = f1_singular_time(a, b);
        let k = f1_collapse_exponent(a, b) as f64;
        for slope in volume_slopes(&setup, t) {
            assert!((slope - k).abs() <= 0.05, "a = {a}, b = {b}: slope {slope}, K = {k}");
        }
    }
    let model = ProductModel::from_kinds(&[CurveKind::ProjectiveLine; 2], &[1.0, 1.0]).unwrap();
    let setup = model.setup().unwrap();
    for slope in volume_slopes(&setup, 1.5f64.ln()) {
        assert!((slope - 2.0).abs() <= 0.05);
    }
}

#[test]
fn regime_boundary_b_equals_3a_collapses_to_a_point() {
    let setup = f1(1.0, 3.0);
    let sing = singularity_time(&setup).unwrap();
    assert_eq!(sing.active_facets.len(), 2);
    assert!(sing.limit_class.is_zero(1e-12));
    assert_eq!(collapse_exponent(&setup, &sing).unwrap().k, 2);
}

#[test]
fn invalid_inputs_are_rejected() {
    let setup = f1(1.0, 4.0);
    assert!(matches!(class_at(&setup, -1.0), Err(FlowError::NegativeTime(_))));
    assert!(matches!(class_at(&setup, f64::NAN), Err(FlowError::NegativeTime(_))));
    assert!(time_unscale(-0.1).is_err());

    let tensor = IntersectionTensor::from_entries(2, 2, &[(vec![0, 1], 1.0)]).unwrap();
    let cone = ConeSpec::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let outside = CohomologySetup::new(
        vec!["x".into(), "y".into()],
        tensor.clone(),
        cone.clone(),
        CohClass::new(vec![2.0, 2.0]),
        CohClass::new(vec![1.0, -1.0]),
    );
    assert!(matches!(outside, Err(FlowError::DegenerateSetup(_))));
    let wrong_dim = CohomologySetup::new(
        vec!["x".into(), "y".into()],
        tensor,
        cone,
        CohClass::new(vec![2.0, 2.0]),
        CohClass::new(vec![1.0]),
    );
    assert!(matches!(wrong_dim, Err(FlowError::DimensionMismatch { .. })));
}

#[test]
fn infinite_time_limit_is_minus_c1() {
    let model =
        ProductModel::from_kinds(&[CurveKind::Genus2, CurveKind::Torus], &[3.0, 1.0]).unwrap();
    let setup = model.setup().unwrap();
    let sing = singularity_time(&setup).unwrap();
    assert!(sing.time.is_infinite());
    assert_eq!(sing.limit_class, -&setup.c1);
    assert_eq!(class_at(&setup, f64::INFINITY).unwrap(), -&setup.c1);
}
