//! Synthetic planar configurations for tests, examples and benchmarks.

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Rotation3, Unit, Vector2, Vector3};
use rand::Rng;

use super::planar::{segment_data, CrossingPattern, PlanarConfiguration};
use crate::diagram::random_unit_vector;
use crate::error::{Error, Result};

fn polar(r: f64, a: f64) -> Vector3<f64> {
    Vector3::new(r * a.cos(), r * a.sin(), 0.0)
}

/// `{1,3,5}` on a circle of radius `ratio`, `{2,4,6}` on the unit circle,
/// each outer point offset by `twist` from its diagonal partner. The whole
/// picture is rotated by `rotation`.
pub fn nested_points(ratio: f64, twist: f64, rotation: f64) -> [Vector3<f64>; 6] {
    let step = TAU / 3.0;
    let a = |k: f64| rotation + k * step;
    [
        polar(ratio, a(0.0)),
        polar(1.0, a(2.0) + twist),
        polar(ratio, a(1.0)),
        polar(1.0, a(0.0) + twist),
        polar(ratio, a(2.0)),
        polar(1.0, a(1.0) + twist),
    ]
}

/// Points on the unit circle in the order `(1,4,2,6,3,5)` (or the reverse),
/// with per-slot angular jitter.
pub fn hexagram_points(jitter: &[f64; 6], reversed: bool) -> [Vector3<f64>; 6] {
    let order = if reversed { [1, 5, 3, 6, 2, 4] } else { [1, 4, 2, 6, 3, 5] };
    let mut out = [Vector3::zeros(); 6];
    for (slot, &label) in order.iter().enumerate() {
        out[label - 1] = polar(1.0, slot as f64 * TAU / 6.0 + jitter[slot]);
    }
    out
}

/// Moves a planar configuration into a random plane of ℝ³.
pub fn random_placement<R: Rng + ?Sized>(points: &[Vector3<f64>; 6], rng: &mut R) -> [Vector3<f64>; 6] {
    let axis = Unit::new_normalize(random_unit_vector(rng));
    let rot = Rotation3::from_axis_angle(&axis, rng.random_range(0.0..TAU));
    let shift = random_unit_vector(rng) * rng.random_range(0.0..2.0);
    let scale = rng.random_range(0.5..3.0);
    points.map(|p| rot * p * scale + shift)
}

/// A jittered configuration with the nested crossing pattern.
pub fn random_nested<R: Rng + ?Sized>(rng: &mut R) -> [Vector3<f64>; 6] {
    loop {
        let ratio = rng.random_range(0.45..0.7);
        let twist = rng.random_range(-0.2..0.2);
        let mut pts = nested_points(ratio, twist, rng.random_range(0.0..TAU));
        for p in pts.iter_mut() {
            let r = Vector2::new(p.x, p.y).norm() * rng.random_range(0.95..1.05);
            let a = p.y.atan2(p.x) + rng.random_range(-0.05..0.05);
            *p = polar(r, a);
        }
        let pts = random_placement(&pts, rng);
        if matches!(PlanarConfiguration::from_points(pts), Ok(c) if c.pattern == CrossingPattern::Nested) {
            return pts;
        }
    }
}

pub fn random_hexagram<R: Rng + ?Sized>(rng: &mut R) -> [Vector3<f64>; 6] {
    let jitter: [f64; 6] = std::array::from_fn(|_| rng.random_range(-0.25..0.25));
    let pts = hexagram_points(&jitter, rng.random_bool(0.5));
    random_placement(&pts, rng)
}

/// Moves `p₅` within the plane until both bad-configuration ratio
/// equalities hold (Newton iteration on the two defects).
pub fn make_bad(points: [Vector3<f64>; 6]) -> Result<PlanarConfiguration> {
    let base = PlanarConfiguration::from_points(points)?;
    let (e1, e2) = (base.frame[0], base.frame[1]);
    let defects = |pts: &[Vector3<f64>; 6]| -> Result<Vector2<f64>> {
        let cfg = PlanarConfiguration::from_points(*pts)?;
        if cfg.pattern != CrossingPattern::Nested {
            return Err(Error::MissingCrossing("nested pattern lost while moving p5".into()));
        }
        let d = segment_data(&cfg)?.lengths.expect("nested").ratio_defects();
        Ok(Vector2::new(d[0], d[1]))
    };
    let mut pts = points;
    let h = 1e-7 * base.diameter;
    for _ in 0..60 {
        let r = defects(&pts)?;
        if r.norm() < 1e-13 {
            return PlanarConfiguration::from_points(pts);
        }
        let mut jac = Matrix2::zeros();
        for (k, dir) in [e1, e2].iter().enumerate() {
            let mut plus = pts;
            let mut minus = pts;
            plus[4] += dir * h;
            minus[4] -= dir * h;
            let col = (defects(&plus)? - defects(&minus)?) / (2.0 * h);
            jac.set_column(k, &col);
        }
        let step = jac.lu().solve(&(-r)).ok_or_else(|| Error::NoConvergence { iterations: 0, residual: r.norm() })?;
        // Damp long steps to stay inside the nested pattern.
        let len = step.norm();
        let cap = 0.05 * base.diameter;
        let step = if len > cap { step * (cap / len) } else { step };
        pts[4] += e1 * step.x + e2 * step.y;
    }
    Err(Error::NoConvergence { iterations: 60, residual: defects(&pts)?.norm() })
}
