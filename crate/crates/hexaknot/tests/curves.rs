use hexaknot::curves::*;
use nalgebra::{Vector3, Vector4};
use proptest::prelude::*;

#[test]
fn catalog_curves_load_and_validate() {
    for name in CATALOG {
        let c = builtin_curve(name).unwrap();
        c.validate().unwrap();
        assert_eq!(c.label, name);
    }
    assert!(matches!(builtin_curve("torus-4-6"), Err(hexaknot::Error::UnknownCurve(_))));
}

#[test]
fn paper_trefoil_lies_on_the_sphere() {
    let g = builtin_curve("paper-trefoil").unwrap();
    assert_eq!(g.ambient, Ambient::S3);
    for k in 0..100 {
        let x = g.eval4(k as f64 / 100.0);
        assert!((x.norm() - 1.0).abs() < 1e-12);
        // Clifford torus: both coordinate pairs have radius 1/√2.
        assert!((x.x.hypot(x.y) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }
}

#[test]
fn derivative_matches_central_difference() {
    for name in CATALOG {
        let c = builtin_curve(name).unwrap();
        for &t in &[0.03, 0.41, 0.77] {
            let h = 1e-6;
            let fd = (c.eval(t + h) - c.eval(t - h)) / (2.0 * h);
            assert!((&fd - c.derivative(t)).norm() < 1e-5 * (1.0 + fd.norm()), "{name} at {t}");
        }
    }
}

#[test]
fn json_round_trip() {
    let c = builtin_curve("figure-eight").unwrap();
    let back = PeriodicCurve::from_json(&c.to_json()).unwrap();
    assert_eq!(c, back);
}

#[test]
fn projection_near_pole_is_rejected() {
    let inv = InversionPoint::default();
    assert!(stereographic_project(&Vector4::new(0.0, 0.0, 0.0, 1.0), &inv).is_err());
}

proptest! {
    #[test]
    fn stereographic_round_trip(x in -5.0..5.0f64, y in -5.0..5.0f64, z in -5.0..5.0f64,
                                p in prop::array::uniform4(-1.0..1.0f64)) {
        prop_assume!(Vector4::from(p).norm() > 0.1);
        let inv = InversionPoint::new(Vector4::from(p)).unwrap();
        let u = Vector3::new(x, y, z);
        let s = stereographic_unproject(&u, &inv);
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        let back = stereographic_project(&s, &inv).unwrap();
        prop_assert!((back - u).norm() < 1e-9 * (1.0 + u.norm_squared()));
    }

    #[test]
    fn curves_are_periodic(t in 0.0..1.0f64, k in 0usize..6) {
        let c = builtin_curve(CATALOG[k]).unwrap();
        prop_assert!((c.eval(t) - c.eval(t + 1.0)).norm() < 1e-9);
    }
}

#[test]
fn equally_spaced_paper_trefoil_hexagon_is_singular() {
    // Points 1, 2, 4, 5 are concyclic in S³, so edges 1 and 4 meet after
    // any stereographic projection.
    let g = builtin_curve("paper-trefoil").unwrap();
    let ts: Vec<f64> = (0..6).map(|k| 0.03 + k as f64 / 6.0).collect();
    for pole in [Vector4::new(0.0, 0.0, 0.0, 1.0), Vector4::new(0.3, -0.5, 0.2, 0.7)] {
        let inv = InversionPoint::new(pole).unwrap();
        assert!(matches!(inscribed_polygon(&g, &ts, Some(&inv)), Err(hexaknot::Error::DegeneratePolygon(_))));
    }
}
