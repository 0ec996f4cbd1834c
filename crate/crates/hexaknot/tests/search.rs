mod common;

use hexaknot::config_geometry::synth::nested_points;
use hexaknot::config_geometry::{distance_to_equally_spaced, PrismProblem, SixTuple};
use hexaknot::curves::builtin_curve;
use hexaknot::search::*;
use nalgebra::{DVector, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

use common::concurrency_oracle;

#[test]
fn order_statistic_marginals_are_uniform_on_the_simplex() {
    const N: usize = 100_000;
    const BINS: usize = 12;
    let mut counts = [[0usize; BINS]; 6];
    let betas: Vec<Beta> = (1..=6).map(|k| Beta::new(k as f64, (7 - k) as f64).unwrap()).collect();
    let mut drawn = 0;
    let mut batch = 0;
    while drawn < N {
        let mut rng = batch_rng(12345, batch);
        for _ in 0..BATCH_SIZE.min((N - drawn) as u64) {
            let t = sample_tuple(&mut rng);
            for k in 0..6 {
                let u = betas[k].cdf(t[k]);
                counts[k][((u * BINS as f64) as usize).min(BINS - 1)] += 1;
            }
            drawn += 1;
        }
        batch += 1;
    }
    let chi = ChiSquared::new((BINS - 1) as f64).unwrap();
    let expected = N as f64 / BINS as f64;
    for (k, c) in counts.iter().enumerate() {
        let stat: f64 = c.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        let p = 1.0 - chi.cdf(stat);
        assert!(p > 0.01, "t{} marginal: chi2 {stat:.2}, p {p:.4}", k + 1);
    }
}

#[test]
fn search_is_independent_of_thread_count() {
    let g = builtin_curve("paper-trefoil").unwrap();
    let budget = SearchBudget { refinement_steps: 3, ..SearchBudget::new(10_000, 9, Target::Both) };
    let run = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(|| find_inscribed_trefoils(&g, &budget).unwrap());
    let (a, b) = (run(1), run(3));
    assert_eq!(a, b);
    assert!(a.target_met && !a.budget_exhausted);
    assert!(a.finds.iter().any(|f| f.origin == FindOrigin::Refined));
}

#[test]
fn exhausted_budget_is_reported_as_inconclusive() {
    let g = builtin_curve("round-unknot").unwrap();
    let r = find_inscribed_trefoils(&g, &SearchBudget::new(2_000, 1, Target::Any)).unwrap();
    assert!(r.finds.is_empty());
    assert!(!r.target_met && r.budget_exhausted);
    assert_eq!(r.stats.samples, 2_000);
}

#[test]
fn targets_parse_and_combine() {
    assert_eq!("both".parse::<Target>().unwrap(), Target::Both);
    assert!("all".parse::<Target>().is_err());
    assert!(Target::Any.met(1, 0) && !Target::Both.met(1, 0) && Target::Left.met(1, 0) && !Target::Right.met(1, 0));
}

#[test]
fn round_unknot_solutions_are_degenerate_or_genuine() {
    let g = builtin_curve("round-unknot").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut successes = 0;
    for _ in 0..100 {
        let Ok(seed) = SixTuple::new(sample_tuple(&mut rng)) else { continue };
        if let Ok(c) = solve_prism(&g, &seed, 1e-10) {
            successes += 1;
            let pts: Vec<DVector<f64>> = c.points.iter().map(|p| DVector::from_vec(p.clone())).collect();
            assert!(c.degenerate || concurrency_oracle(&pts) < 1e-6, "{:?}", c.tuple);
        }
    }
    assert!(successes > 0);
}

#[test]
fn paper_trefoil_trace_closes_with_one_planar_event() {
    let g = builtin_curve("paper-trefoil").unwrap();
    let problem = PrismProblem::ambient(&g);
    let seed = [0.01, 0.18, 0.33, 0.52, 0.66, 0.84];
    let (start, _) = solve_prism_in(&problem, &seed, &SolveOptions::default()).unwrap();
    let tr = trace_prism_manifold(&problem, &start.tuple.t, &TraceOptions::default()).unwrap();
    assert!(tr.closed);
    assert_eq!(tr.stop, TraceStop::Closed);
    for p in &tr.points {
        assert!(p.residual < 1e-8);
        assert!(distance_to_equally_spaced(&p.tuple) < 1e-6);
    }
    // The class can only change where the hexagon degenerates.
    for w in tr.points.windows(2) {
        if w[0].class != w[1].class {
            assert!(w.iter().any(|p| p.near_planar || p.near_singular || p.located));
        }
    }
    let scan = scan_planar_events(&tr, 1e-6);
    assert_eq!(scan.events.len(), 1);
    assert!(tr.points[scan.events[0].index].located);
    assert!(!scan.two_plane_condition);
}

fn synthetic_point(points: [Vector3<f64>; 6], index: usize) -> TracePoint {
    TracePoint {
        window: [0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
        tuple: SixTuple::new([0.0, 0.1, 0.2, 0.3, 0.4, 0.5]).unwrap(),
        residual: 0.0,
        arc: index as f64,
        step: 1.0,
        points: points.map(|p| [p.x, p.y, p.z]),
        class: None,
        coplanarity: 0.0,
        edge_clearance: 1.0,
        planarity_sign: 0.0,
        near_planar: false,
        near_singular: false,
        located: false,
    }
}

fn lifted(mut pts: [Vector3<f64>; 6], z: f64) -> [Vector3<f64>; 6] {
    for (k, p) in pts.iter_mut().enumerate() {
        p.z += if k % 2 == 0 { z } else { -z };
    }
    pts
}

fn tilted(pts: [Vector3<f64>; 6], angle: f64) -> [Vector3<f64>; 6] {
    let r = nalgebra::Rotation3::from_axis_angle(&Vector3::x_axis(), angle);
    pts.map(|p| r * p)
}

#[test]
fn synthetic_scan_finds_exactly_the_planar_points() {
    let base = nested_points(0.6, 0.05, 0.2);
    let trace = |pts: Vec<[Vector3<f64>; 6]>| TraceResult {
        points: pts.into_iter().enumerate().map(|(i, p)| synthetic_point(p, i)).collect(),
        closed: false,
        stop: TraceStop::MaxSteps,
        inversion: [0.0, 0.0, 0.0, 1.0],
    };
    let one = trace(vec![lifted(base, 0.2), lifted(base, 0.1), base, lifted(base, -0.1)]);
    let scan = scan_planar_events(&one, 1e-6);
    assert_eq!(scan.events.len(), 1);
    assert_eq!(scan.events[0].index, 2);
    assert_eq!(scan.events[0].config_type.map(|t| t.number()), Some(1));
    assert_eq!(scan.events[0].bad, Some(false));
    assert!(!scan.two_plane_condition);

    let two = trace(vec![base, lifted(base, 0.1), tilted(base, 0.3)]);
    let scan = scan_planar_events(&two, 1e-6);
    assert_eq!(scan.events.len(), 2);
    assert!((scan.events[1].theta - 0.3).abs() < 1e-9);
    assert!(scan.two_plane_condition);
    assert!(!scan_planar_events(&two, 0.5).two_plane_condition);
}

/// An S³ curve through six sphere points whose diagonals meet at a common
/// interior point, by trigonometric interpolation at `t = k/6`.
fn curve_through_prism(seed: u64) -> hexaknot::curves::PeriodicCurve {
    use hexaknot::curves::{FourierTerm, PeriodicCurve};
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let apex = nalgebra::Vector4::from_fn(|_, _| rng.random_range(-0.3..0.3));
    let mut nodes = [nalgebra::Vector4::zeros(); 6];
    for i in 0..3 {
        let u = nalgebra::Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0f64)).normalize();
        // |apex + s u| = 1 has one positive and one negative root.
        let (b, c) = (apex.dot(&u), apex.norm_squared() - 1.0);
        let disc = (b * b - c).sqrt();
        nodes[i] = apex + u * (-b + disc);
        nodes[i + 3] = apex + u * (-b - disc);
    }
    let coords = (0..4)
        .map(|d| {
            let y: Vec<f64> = nodes.iter().map(|n| n[d]).collect();
            let tau = std::f64::consts::TAU;
            let proj = |m: f64, f: fn(f64) -> f64| y.iter().enumerate().map(|(k, v)| v * f(tau * m * k as f64 / 6.0)).sum::<f64>();
            vec![
                FourierTerm::new(0, proj(0.0, f64::cos) / 6.0, 0.0),
                FourierTerm::new(1, proj(1.0, f64::cos) / 3.0, proj(1.0, f64::sin) / 3.0),
                FourierTerm::new(2, proj(2.0, f64::cos) / 3.0, proj(2.0, f64::sin) / 3.0),
                FourierTerm::new(3, proj(3.0, f64::cos) / 6.0, 0.0),
            ]
        })
        .collect();
    PeriodicCurve::normalized_s3("prism-interpolant", coords).unwrap()
}

#[test]
fn trace_from_a_synthetic_prism_keeps_the_residual_small() {
    let nodes = [0.0, 1.0 / 6.0, 2.0 / 6.0, 0.5, 4.0 / 6.0, 5.0 / 6.0];
    let mut traced = 0;
    for seed in 0..5 {
        let g = curve_through_prism(seed);
        let problem = PrismProblem::ambient(&g);
        assert!(problem.residual(&nodes).unwrap().norm < 1e-12);
        let opts = TraceOptions { max_steps: 60, classify: false, ..TraceOptions::default() };
        match trace_prism_manifold(&problem, &nodes, &opts) {
            Ok(tr) => {
                traced += 1;
                assert!(tr.points.len() > 1);
                let last = tr.points.last().unwrap();
                assert!(last.arc > 0.0);
                assert!(tr.points.iter().all(|p| p.residual < 1e-8));
            }
            Err(e) => assert!(matches!(e, hexaknot::Error::TangentDegenerate(_) | hexaknot::Error::OrderingCollapse(..)), "{e}"),
        }
    }
    assert!(traced >= 3);
}
