//! Coplanar six-point configurations.
//!
//! Two crossing patterns of the planar hexagon `p₁…p₆` are recognized:
//!
//! * `Hexagram`: points on a circle in the order `(1,4,2,6,3,5)` or its
//!   reverse, with the seven edge crossings
//!   `{1,3},{1,4},{2,5},{2,6},{3,5},{3,6},{4,6}`.
//! * `Nested`: `{1,3,5}` and `{2,4,6}` on nested circles, with the three
//!   crossings `{1,4},{2,5},{3,6}`.
//!
//! Edge `i` runs from `pᵢ` to `pᵢ₊₁`. The plane normal is oriented so that
//! the first crossing rule of the pattern has a positive crossing sign.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::curves::{point_in_r3, stereographic_unproject, InversionPoint, PeriodicCurve};
use crate::diagram::view_frame;
use crate::error::{Error, Result};

/// Coplanarity tolerance after scaling the configuration to unit diameter.
pub const COPLANARITY_TOL: f64 = 1e-8;
/// Relative tolerance of the bad-configuration ratio equalities.
pub const BAD_RATIO_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

impl Plane {
    pub fn new(normal: Vector3<f64>, point: &Vector3<f64>) -> Self {
        let normal = normal.normalize();
        Plane { normal, offset: normal.dot(point) }
    }

    pub fn signed_distance(&self, x: &Vector3<f64>) -> f64 {
        self.normal.dot(x) - self.offset
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sidedness {
    OneSided,
    TwoSided,
    /// The curve stays in the plane near `t`; treated as one-sided.
    Flat,
}

impl Sidedness {
    pub fn is_one_sided(self) -> bool {
        !matches!(self, Sidedness::TwoSided)
    }
}

/// Whether the curve crosses `plane` at parameter `t` (two-sided) or only
/// touches it (one-sided). `others` are the remaining configuration
/// parameters, none of which may lie in the window `(t − h, t + h)`.
pub fn one_sidedness(
    curve: &PeriodicCurve,
    inv: Option<&InversionPoint>,
    t: f64,
    others: &[f64],
    plane: &Plane,
    h: f64,
) -> Result<Sidedness> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::InvalidArgument(format!("window {h} must lie in (0, 1/2)")));
    }
    for &s in others {
        let d = s - t;
        let d = (d - d.round()).abs();
        if d > 0.0 && d < h {
            return Err(Error::WindowTooLarge);
        }
    }
    let sigma = |s: f64| -> Result<f64> { Ok(plane.signed_distance(&point_in_r3(curve, s, inv)?)) };
    let s0 = sigma(t)?;
    let scale = point_in_r3(curve, t, inv)?.norm().max(1.0);
    if s0.abs() > COPLANARITY_TOL * scale {
        return Err(Error::InvalidArgument(format!("curve point at t = {t} is {s0:e} off the plane")));
    }
    // Side of the plane just left and right of t: the closest offset whose
    // distance clearly dominates the residual distance at t.
    let floor = (100.0 * s0.abs()).max(1e-12 * scale);
    let side = |dir: f64| -> Result<Option<f64>> {
        let mut found = None;
        for k in (0..=40).rev() {
            let delta = h * 0.5f64.powi(k);
            let v = sigma(t + dir * delta)?;
            if v.abs() > floor {
                found = Some(v.signum());
                break;
            }
        }
        Ok(found)
    };
    match (side(-1.0)?, side(1.0)?) {
        (Some(a), Some(b)) if a != b => Ok(Sidedness::TwoSided),
        (None, None) => Ok(Sidedness::Flat),
        _ => Ok(Sidedness::OneSided),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingPattern {
    Hexagram,
    Nested,
    /// Any other set of crossing edge pairs (1-based).
    Other(Vec<(usize, usize)>),
}

const HEXAGRAM_PAIRS: [(usize, usize); 7] = [(1, 3), (1, 4), (2, 5), (2, 6), (3, 5), (3, 6), (4, 6)];
const NESTED_PAIRS: [(usize, usize); 3] = [(1, 4), (2, 5), (3, 6)];

/// A crossing of two hexagon edges in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarCrossing {
    /// 1-based edge indices, `edges.0 < edges.1`.
    pub edges: (usize, usize),
    /// Fractional positions along each edge, measured from its start vertex.
    pub params: (f64, f64),
    pub point: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfigType {
    Type1,
    Type2,
    Type3,
    Type4,
    Type5,
}

impl ConfigType {
    pub fn number(self) -> u8 {
        match self {
            ConfigType::Type1 => 1,
            ConfigType::Type2 => 2,
            ConfigType::Type3 => 3,
            ConfigType::Type4 => 4,
            ConfigType::Type5 => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarConfiguration {
    pub points: [Vector3<f64>; 6],
    pub plane: Plane,
    /// In-plane frame with `e1 × e2 = plane.normal`.
    pub frame: [Vector3<f64>; 2],
    /// Max distance to the plane divided by the diameter.
    pub coplanarity: f64,
    pub diameter: f64,
    pub pattern: CrossingPattern,
    pub crossings: Vec<PlanarCrossing>,
    pub sidedness: Option<[Sidedness; 6]>,
    pub config_type: Option<ConfigType>,
}

fn cross2(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

fn planar_crossings(q: &[Vector2<f64>; 6]) -> Vec<PlanarCrossing> {
    let mut out = Vec::new();
    for i in 0..6 {
        for j in i + 2..6 {
            if i == 0 && j == 5 {
                continue;
            }
            let (a0, a1, b0, b1) = (q[i], q[(i + 1) % 6], q[j], q[(j + 1) % 6]);
            let d1 = a1 - a0;
            let d2 = b1 - b0;
            let den = cross2(&d1, &d2);
            if den.abs() < 1e-14 * d1.norm() * d2.norm() {
                continue;
            }
            let w = b0 - a0;
            let s = cross2(&w, &d2) / den;
            let u = cross2(&w, &d1) / den;
            if s > 0.0 && s < 1.0 && u > 0.0 && u < 1.0 {
                let p = a0 + d1 * s;
                out.push(PlanarCrossing { edges: (i + 1, j + 1), params: (s, u), point: [p.x, p.y] });
            }
        }
    }
    out
}

fn pattern_of(crossings: &[PlanarCrossing]) -> CrossingPattern {
    let mut pairs: Vec<(usize, usize)> = crossings.iter().map(|c| c.edges).collect();
    pairs.sort_unstable();
    if pairs == HEXAGRAM_PAIRS {
        CrossingPattern::Hexagram
    } else if pairs == NESTED_PAIRS {
        CrossingPattern::Nested
    } else {
        CrossingPattern::Other(pairs)
    }
}

impl PlanarConfiguration {
    /// Fits the plane, checks coplanarity and extracts the crossing pattern.
    pub fn from_points(points: [Vector3<f64>; 6]) -> Result<Self> {
        let centroid = points.iter().sum::<Vector3<f64>>() / 6.0;
        let mut diameter: f64 = 0.0;
        for a in &points {
            for b in &points {
                diameter = diameter.max((a - b).norm());
            }
        }
        if !(diameter > 1e-12) {
            return Err(Error::InvalidArgument("configuration has zero size".into()));
        }
        let mut cov = Matrix3::zeros();
        for p in &points {
            let d = (p - centroid) / diameter;
            cov += d * d.transpose();
        }
        let eig = cov.symmetric_eigen();
        let k = eig.eigenvalues.imin();
        let mut normal: Vector3<f64> = eig.eigenvectors.column(k).into_owned().normalize();
        let coplanarity = points.iter().map(|p| normal.dot(&(p - centroid)).abs()).fold(0.0, f64::max) / diameter;
        if coplanarity > COPLANARITY_TOL {
            return Err(Error::NotCoplanar(coplanarity));
        }
        // Deterministic sign before pattern-based orientation.
        if normal[normal.iamax()] < 0.0 {
            normal = -normal;
        }
        let mut cfg = Self::assemble(points, centroid, normal, diameter, coplanarity);
        let flip = match cfg.pattern {
            CrossingPattern::Hexagram => cfg.crossing_orientation(4, 1) < 0.0,
            CrossingPattern::Nested => cfg.crossing_orientation(1, 4) < 0.0,
            CrossingPattern::Other(_) => false,
        };
        if flip {
            cfg = Self::assemble(points, centroid, -normal, diameter, coplanarity);
        }
        Ok(cfg)
    }

    fn assemble(points: [Vector3<f64>; 6], centroid: Vector3<f64>, normal: Vector3<f64>, diameter: f64, coplanarity: f64) -> Self {
        let frame = view_frame(&normal);
        // Same coordinates as `planar_points`, so crossing points and
        // vertices can be compared directly.
        let q: [Vector2<f64>; 6] = std::array::from_fn(|i| Vector2::new(frame[0].dot(&points[i]), frame[1].dot(&points[i])));
        let crossings = planar_crossings(&q);
        PlanarConfiguration {
            points,
            plane: Plane::new(normal, &centroid),
            frame,
            coplanarity,
            diameter,
            pattern: pattern_of(&crossings),
            crossings,
            sidedness: None,
            config_type: None,
        }
    }

    /// Configuration of six curve points, with one-sidedness labels.
    pub fn from_curve(curve: &PeriodicCurve, inv: Option<&InversionPoint>, t: &[f64; 6], window: f64) -> Result<Self> {
        let pts: Vec<Vector3<f64>> = t.iter().map(|&s| point_in_r3(curve, s, inv)).collect::<Result<_>>()?;
        let mut cfg = Self::from_points([pts[0], pts[1], pts[2], pts[3], pts[4], pts[5]])?;
        let mut labels = [Sidedness::TwoSided; 6];
        for i in 0..6 {
            let others: Vec<f64> = (0..6).filter(|&j| j != i).map(|j| t[j]).collect();
            labels[i] = one_sidedness(curve, inv, t[i], &others, &cfg.plane, window)?;
        }
        cfg.sidedness = Some(labels);
        Ok(cfg)
    }

    /// Points in the in-plane frame, relative to the plane's foot of the origin.
    pub fn planar_points(&self) -> [Vector2<f64>; 6] {
        std::array::from_fn(|i| Vector2::new(self.frame[0].dot(&self.points[i]), self.frame[1].dot(&self.points[i])))
    }

    /// Edge direction in the plane (1-based edge index).
    fn edge_vector(&self, e: usize) -> Vector2<f64> {
        let q = self.planar_points();
        q[e % 6] - q[e - 1]
    }

    /// `det[d_over, d_under, n]` for two crossing edges.
    pub fn crossing_orientation(&self, over: usize, under: usize) -> f64 {
        cross2(&self.edge_vector(over), &self.edge_vector(under))
    }

    pub fn crossing(&self, e1: usize, e2: usize) -> Option<&PlanarCrossing> {
        let key = (e1.min(e2), e1.max(e2));
        self.crossings.iter().find(|c| c.edges == key)
    }

    /// Fractional position along edge `e` of its crossing with edge `other`.
    pub fn crossing_param(&self, e: usize, other: usize) -> Option<f64> {
        self.crossing(e, other).map(|c| if c.edges.0 == e { c.params.0 } else { c.params.1 })
    }

    /// Indices (1-based) of one-sided points, if labels are known.
    pub fn one_sided_set(&self) -> Vec<usize> {
        match &self.sidedness {
            Some(l) => (0..6).filter(|&i| l[i].is_one_sided()).map(|i| i + 1).collect(),
            None => Vec::new(),
        }
    }
}

/// Lengths from the three crossings of the nested pattern to the endpoints
/// of the crossing edges, labelled as in the bad-configuration condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedLengths {
    /// At `X = e₁ ∩ e₄`: `(|Xp₂|, |Xp₁|, |Xp₅|, |Xp₄|)`.
    pub a: [f64; 4],
    /// At `X = e₃ ∩ e₆`: `(|Xp₁|, |Xp₆|, |Xp₃|, |Xp₄|)`.
    pub b: [f64; 4],
    /// At `X = e₂ ∩ e₅`: `(|Xp₆|, |Xp₅|, |Xp₃|, |Xp₂|)`.
    pub l: [f64; 4],
}

fn tilde(x: &[f64; 4]) -> [f64; 4] {
    let s1 = x[0] + x[1];
    let s2 = x[2] + x[3];
    [x[0] / s1, x[1] / s1, x[2] / s2, x[3] / s2]
}

impl NestedLengths {
    pub fn a_tilde(&self) -> [f64; 4] {
        tilde(&self.a)
    }

    pub fn b_tilde(&self) -> [f64; 4] {
        tilde(&self.b)
    }

    pub fn l_tilde(&self) -> [f64; 4] {
        tilde(&self.l)
    }

    /// `(ã₄/ã₂ − l̃₁/l̃₃, ã₃/ã₁ − b̃₃/b̃₂)`, zero on bad configurations.
    pub fn ratio_defects(&self) -> [f64; 2] {
        let (a, b, l) = (self.a_tilde(), self.b_tilde(), self.l_tilde());
        [a[3] / a[1] - l[0] / l[2], a[2] / a[0] - b[2] / b[1]]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentData {
    pub pattern: CrossingPattern,
    /// `alpha[i][j]`: fractional position of the j-th crossing along edge
    /// `i + 1`, ordered from its start vertex.
    pub alpha: [Vec<f64>; 6],
    pub lengths: Option<NestedLengths>,
}

pub fn segment_data(cfg: &PlanarConfiguration) -> Result<SegmentData> {
    if let CrossingPattern::Other(pairs) = &cfg.pattern {
        return Err(Error::MissingCrossing(format!("crossing pairs {pairs:?} match no known pattern")));
    }
    let mut alpha: [Vec<f64>; 6] = Default::default();
    for c in &cfg.crossings {
        alpha[c.edges.0 - 1].push(c.params.0);
        alpha[c.edges.1 - 1].push(c.params.1);
    }
    for a in alpha.iter_mut() {
        a.sort_by(f64::total_cmp);
    }
    let lengths = if cfg.pattern == CrossingPattern::Nested {
        let q = cfg.planar_points();
        let at = |e1: usize, e2: usize, idx: [usize; 4]| -> [f64; 4] {
            let x = Vector2::from(cfg.crossing(e1, e2).expect("nested crossing").point);
            idx.map(|i| (q[i - 1] - x).norm())
        };
        Some(NestedLengths { a: at(1, 4, [2, 1, 5, 4]), b: at(3, 6, [1, 6, 3, 4]), l: at(2, 5, [6, 5, 3, 2]) })
    } else {
        None
    };
    Ok(SegmentData { pattern: cfg.pattern.clone(), alpha, lengths })
}

fn rel_eq(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs())
}

/// True iff both ratio equalities `ã₄/ã₂ = l̃₁/l̃₃` and `ã₃/ã₁ = b̃₃/b̃₂`
/// hold, in which case no linear lift with `f₃ = f₆ = 0` is a trefoil.
pub fn is_bad_configuration(cfg: &PlanarConfiguration) -> Result<bool> {
    let data = segment_data(cfg)?;
    let n = data
        .lengths
        .ok_or_else(|| Error::MissingCrossing("bad-configuration test needs the nested pattern".into()))?;
    let (a, b, l) = (n.a_tilde(), n.b_tilde(), n.l_tilde());
    Ok(rel_eq(a[3] / a[1], l[0] / l[2], BAD_RATIO_TOL) && rel_eq(a[2] / a[0], b[2] / b[1], BAD_RATIO_TOL))
}

fn circumcircle(a: &Vector2<f64>, b: &Vector2<f64>, c: &Vector2<f64>) -> Option<(Vector2<f64>, f64)> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-300 {
        return None;
    }
    let (a2, b2, c2) = (a.norm_squared(), b.norm_squared(), c.norm_squared());
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let center = Vector2::new(ux, uy);
    Some((center, (a - center).norm()))
}

/// Distance from `p` to the circle through three points of ℝ⁴.
fn distance_to_circle4(p: &nalgebra::Vector4<f64>, x: [nalgebra::Vector4<f64>; 3]) -> f64 {
    let u = x[1] - x[0];
    let e1 = u.normalize();
    let w = x[2] - x[0];
    let w_perp = w - e1 * e1.dot(&w);
    if w_perp.norm() < 1e-14 {
        return f64::INFINITY;
    }
    let e2 = w_perp.normalize();
    let to2 = |v: &nalgebra::Vector4<f64>| Vector2::new(e1.dot(&(v - x[0])), e2.dot(&(v - x[0])));
    let Some((c, r)) = circumcircle(&to2(&x[0]), &to2(&x[1]), &to2(&x[2])) else {
        return f64::INFINITY;
    };
    let rel = p - x[0];
    let in_plane = Vector2::new(e1.dot(&rel), e2.dot(&rel));
    let out_of_plane = (rel - e1 * in_plane.x - e2 * in_plane.y).norm();
    (out_of_plane.powi(2) + ((in_plane - c).norm() - r).powi(2)).sqrt()
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Configuration type, tested in order: (3) a consecutive colinear triple,
/// (2) the inversion point on the circle through an alternating triple
/// lifted to S³, then the nested-circle types (1), (4), (5).
pub fn classify_planar_config(cfg: &PlanarConfiguration, inv: &InversionPoint) -> Result<ConfigType> {
    let q = cfg.planar_points();
    let tol = COPLANARITY_TOL * cfg.diameter;
    for i in 0..6 {
        let (a, b, c) = (q[i], q[(i + 1) % 6], q[(i + 2) % 6]);
        let base = c - a;
        if base.norm() > 0.0 && cross2(&base, &(b - a)).abs() / base.norm() < tol {
            return Ok(ConfigType::Type3);
        }
    }
    let ip = inv.point();
    for triple in [[0, 2, 4], [1, 3, 5]] {
        let lifted = triple.map(|i| stereographic_unproject(&cfg.points[i], inv));
        if distance_to_circle4(&ip, lifted) < COPLANARITY_TOL {
            return Ok(ConfigType::Type2);
        }
    }
    let odd = circumcircle(&q[0], &q[2], &q[4]).ok_or_else(|| Error::UnclassifiableConfig("degenerate triple {1,3,5}".into()))?;
    let even = circumcircle(&q[1], &q[3], &q[5]).ok_or_else(|| Error::UnclassifiableConfig("degenerate triple {2,4,6}".into()))?;
    let ((ci, ri), (co, ro), inner_is_odd) = if odd.1 < even.1 { (odd, even, true) } else { (even, odd, false) };
    if (ci - co).norm() + ri >= ro {
        return Err(Error::UnclassifiableConfig("circles of the alternating triples are not nested".into()));
    }
    let area = |i: usize, j: usize, k: usize| cross2(&(q[j] - q[i]), &(q[k] - q[i]));
    if area(0, 2, 4).signum() != area(1, 3, 5).signum() {
        return Ok(ConfigType::Type5);
    }
    // Mean angular offset of each inner point from its diagonal partner.
    let (mut sx, mut sy) = (0.0, 0.0);
    for k in 0..3 {
        let (inner, outer) = if inner_is_odd { (2 * k, (2 * k + 3) % 6) } else { ((2 * k + 3) % 6, 2 * k) };
        let ai = (q[inner] - ci).y.atan2((q[inner] - ci).x);
        let ao = (q[outer] - ci).y.atan2((q[outer] - ci).x);
        let d = wrap_angle(ao - ai);
        sx += d.cos();
        sy += d.sin();
    }
    let twist = sy.atan2(sx);
    if twist.abs() < PI / 3.0 {
        Ok(ConfigType::Type1)
    } else {
        Ok(ConfigType::Type4)
    }
}

/// Rotates all six points by `eps` about the line through `point` with
/// direction `dir`, which must lie in the configuration plane.
pub fn epsilon_rotate(cfg: &PlanarConfiguration, point: &Vector3<f64>, dir: &Vector3<f64>, eps: f64) -> Result<[Vector3<f64>; 6]> {
    let axis = dir.normalize();
    let tol = 1e-8;
    if axis.dot(&cfg.plane.normal).abs() > tol || cfg.plane.signed_distance(point).abs() > tol * cfg.diameter.max(1.0) {
        return Err(Error::InvalidArgument("rotation axis must lie in the configuration plane".into()));
    }
    let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_unchecked(axis), eps);
    Ok(cfg.points.map(|p| point + rot * (p - point)))
}

/// Dihedral angle between the configuration plane and `reference`, in `[0, π/2]`.
pub fn config_theta(cfg: &PlanarConfiguration, reference: &Plane) -> f64 {
    let (a, b) = (cfg.plane.normal, reference.normal);
    a.cross(&b).norm().atan2(a.dot(&b).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config_geometry::synth;

    #[test]
    fn nested_synthetic_is_type1() {
        let cfg = PlanarConfiguration::from_points(synth::nested_points(0.6, 0.0, 0.1)).unwrap();
        assert_eq!(cfg.pattern, CrossingPattern::Nested);
        assert_eq!(classify_planar_config(&cfg, &InversionPoint::default()).unwrap(), ConfigType::Type1);
    }

    #[test]
    fn hexagram_synthetic_pattern() {
        let cfg = PlanarConfiguration::from_points(synth::hexagram_points(&[0.0; 6], false)).unwrap();
        assert_eq!(cfg.pattern, CrossingPattern::Hexagram);
        assert!(cfg.crossing_orientation(4, 1) > 0.0);
        let cfg = PlanarConfiguration::from_points(synth::hexagram_points(&[0.0; 6], true)).unwrap();
        assert_eq!(cfg.pattern, CrossingPattern::Hexagram);
        assert!(cfg.crossing_orientation(4, 1) > 0.0);
    }

    #[test]
    fn convex_hexagon_has_no_crossings() {
        let pts = std::array::from_fn(|k| {
            let a = k as f64 * PI / 3.0;
            Vector3::new(a.cos(), a.sin(), 0.0)
        });
        let cfg = PlanarConfiguration::from_points(pts).unwrap();
        assert!(cfg.crossings.is_empty());
        assert!(matches!(segment_data(&cfg), Err(Error::MissingCrossing(_))));
    }

    #[test]
    fn non_coplanar_rejected() {
        let mut pts = synth::nested_points(0.5, 0.0, 0.0);
        pts[2].z += 1e-3;
        assert!(matches!(PlanarConfiguration::from_points(pts), Err(Error::NotCoplanar(_))));
    }

    #[test]
    fn theta_of_rotated_plane() {
        let cfg = PlanarConfiguration::from_points(synth::nested_points(0.6, 0.1, 0.0)).unwrap();
        let reference = cfg.plane;
        assert!(config_theta(&cfg, &reference).abs() < 1e-12);
        let axis_pt = cfg.points[0];
        let dir = cfg.frame[0];
        for eps in [0.1, 0.7, 1.3] {
            let rotated = PlanarConfiguration::from_points(epsilon_rotate(&cfg, &axis_pt, &dir, eps).unwrap()).unwrap();
            assert!((config_theta(&rotated, &reference) - eps).abs() < 1e-12);
        }
    }
}
