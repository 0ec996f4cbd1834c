mod common;

use hexaknot::config_geometry::synth::hexagram_points;
use hexaknot::config_geometry::{construct_case_heights, lift_configuration, CaseParams, PlanarConfiguration};
use hexaknot::diagram::*;
use hexaknot::invariants::classify_polygon;
use nalgebra::{Vector2, Vector3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_hexagon, segment_cross_2d};

fn trefoil_hexagon() -> ClosedPolygon {
    let cfg = PlanarConfiguration::from_points(hexagram_points(&[0.0; 6], false)).unwrap();
    let h = construct_case_heights(&cfg, &[], &CaseParams::default()).unwrap();
    lift_configuration(&cfg, &h.f).unwrap()
}

#[test]
fn crossings_match_the_segment_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let poly = random_hexagon(&mut rng);
        let d = random_generic_diagram(&poly, &mut rng).unwrap();
        let q: Vec<Vector2<f64>> = d.projected_vertices().iter().map(|p| Vector2::new(p[0], p[1])).collect();
        let n = q.len();
        let mut expected = 0;
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if let Some((s, u)) = segment_cross_2d(q[i], q[(i + 1) % n], q[j], q[(j + 1) % n]) {
                    expected += 1;
                    let c = d
                        .crossings
                        .iter()
                        .find(|c| (c.over_edge, c.under_edge) == (i, j) || (c.over_edge, c.under_edge) == (j, i))
                        .expect("crossing reported");
                    let (pi, pj) = if c.over_edge == i { (c.over_param, c.under_param) } else { (c.under_param, c.over_param) };
                    assert!((pi - s).abs() < 1e-12 && (pj - u).abs() < 1e-12);
                    // The over strand is the higher one.
                    let lift = |e: usize, t: f64| d.direction.dot(&(poly.vertices()[e] * (1.0 - t) + poly.vertices()[(e + 1) % n] * t));
                    assert!(lift(c.over_edge, c.over_param) > lift(c.under_edge, c.under_param));
                }
            }
        }
        assert_eq!(d.crossing_count(), expected);
    }
}

#[test]
fn trefoil_hexagon_is_stable_over_twenty_directions() {
    let poly = trefoil_hexagon();
    let c = classify_polygon(&poly, 20, 5).unwrap();
    assert!(c.class.is_trefoil());
    assert!(c.directions.iter().all(|d| d.crossings >= 3));
}

#[test]
fn polygon_io() {
    let p = ClosedPolygon::from_csv("0,0,0\n1,0,0\n0,1,0.5\n").unwrap();
    assert_eq!(p.len(), 3);
    let back = ClosedPolygon::from_json(&p.to_json()).unwrap();
    assert_eq!(p, back);
    assert!(ClosedPolygon::from_csv("0,0,0\n1,0,0\n").is_err());
}

#[test]
fn gauss_code_parse_round_trip() {
    let c = GaussCode::parse("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
    assert_eq!(c.to_string(), "O1+ U2+ O3+ U1+ O2+ U3+");
    assert_eq!(writhe(&c), 3);
    assert!(GaussCode::parse("O1+ U1-").is_err());
    assert!(GaussCode::parse("O1+ O1+").is_err());
}

proptest! {
    #[test]
    fn gauss_code_is_well_formed(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = random_hexagon(&mut rng);
        let d = random_generic_diagram(&poly, &mut rng).unwrap();
        let code = gauss_code(&d);
        prop_assert_eq!(code.symbols().len(), 2 * d.crossing_count());
        let w: i32 = d.crossings.iter().map(|c| c.sign as i32).sum();
        prop_assert_eq!(writhe(&code), w);
        let m = code.mirror();
        prop_assert_eq!(writhe(&m), -w);
        prop_assert_eq!(m.mirror(), code.clone());
        for k in 0..code.symbols().len() {
            prop_assert_eq!(writhe(&code.rotate(k)), w);
        }
    }

    #[test]
    fn mirror_polygon_flips_every_sign(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = random_hexagon(&mut rng);
        let d = random_generic_diagram(&poly, &mut rng).unwrap();
        let dm = project_diagram(&poly.mirror(), &Vector3::new(d.direction.x, d.direction.y, -d.direction.z)).unwrap();
        prop_assert_eq!(dm.crossing_count(), d.crossing_count());
        prop_assert_eq!(writhe(&gauss_code(&dm)), -writhe(&gauss_code(&d)));
    }
}
