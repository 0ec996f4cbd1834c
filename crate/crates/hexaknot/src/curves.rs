//! Periodic Fourier curves in ℝ³ or on S³, and stereographic projection.
//!
//! A curve is a finite Fourier sum per coordinate, parametrized by `t` in
//! periods, so `eval(t) == eval(t + 1)`.

use std::f64::consts::TAU;

use nalgebra::{DVector, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::diagram::ClosedPolygon;
use crate::error::{Error, Result};

/// Default distance an inversion point must keep from the curve.
pub const DEFAULT_CLEARANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    R3,
    S3,
}

impl Ambient {
    pub fn dim(self) -> usize {
        match self {
            Ambient::R3 => 3,
            Ambient::S3 => 4,
        }
    }
}

/// `cos * cos(2π·freq·t) + sin * sin(2π·freq·t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub freq: i32,
    pub cos: f64,
    pub sin: f64,
}

impl FourierTerm {
    pub fn new(freq: i32, cos: f64, sin: f64) -> Self {
        // Keep frequencies nonnegative: cos is even, sin is odd.
        if freq < 0 {
            FourierTerm { freq: -freq, cos, sin: -sin }
        } else {
            FourierTerm { freq, cos, sin }
        }
    }

    fn value(&self, t: f64) -> f64 {
        let w = TAU * self.freq as f64;
        let (s, c) = (w * t).sin_cos();
        self.cos * c + self.sin * s
    }

    fn slope(&self, t: f64) -> f64 {
        let w = TAU * self.freq as f64;
        let (s, c) = (w * t).sin_cos();
        w * (self.sin * c - self.cos * s)
    }
}

/// A ℤ-periodic parametric knot.
///
/// S³ curves with `normalized` set are radially projected onto the sphere
/// after summation, which allows perturbed versions of sphere curves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicCurve {
    pub ambient: Ambient,
    pub label: String,
    pub coords: Vec<Vec<FourierTerm>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalized: bool,
}

impl PeriodicCurve {
    /// Builds a curve and checks the type invariants (dimension, S³
    /// membership, nonvanishing derivative).
    pub fn new(ambient: Ambient, label: impl Into<String>, coords: Vec<Vec<FourierTerm>>) -> Result<Self> {
        Self::build(ambient, label.into(), coords, false)
    }

    /// An S³ curve whose Fourier sum is divided by its norm at every `t`.
    pub fn normalized_s3(label: impl Into<String>, coords: Vec<Vec<FourierTerm>>) -> Result<Self> {
        Self::build(Ambient::S3, label.into(), coords, true)
    }

    fn build(ambient: Ambient, label: String, coords: Vec<Vec<FourierTerm>>, normalized: bool) -> Result<Self> {
        let coords = coords
            .into_iter()
            .map(|c| c.into_iter().map(|t| FourierTerm::new(t.freq, t.cos, t.sin)).collect())
            .collect();
        let curve = PeriodicCurve { ambient, label, coords, normalized };
        curve.validate()?;
        Ok(curve)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PeriodicCurve = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::build(raw.ambient, raw.label, raw.coords, raw.normalized)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.ambient.dim();
        if self.coords.len() != dim {
            return Err(Error::InvalidCurve(format!(
                "{:?} curve needs {} coordinate lists, got {}",
                self.ambient,
                dim,
                self.coords.len()
            )));
        }
        if self.normalized && self.ambient != Ambient::S3 {
            return Err(Error::InvalidCurve("only S3 curves can be normalized".into()));
        }
        let grid = 10_000;
        let mut min_speed = f64::INFINITY;
        for k in 0..grid {
            let t = k as f64 / grid as f64;
            if self.ambient == Ambient::S3 {
                let r = self.eval4(t).norm();
                if (r - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidCurve(format!("|eval({t})| = {r}, not on S3")));
                }
            }
            min_speed = min_speed.min(self.derivative(t).norm());
        }
        if min_speed <= 1e-9 {
            return Err(Error::InvalidCurve(format!("derivative vanishes (min speed {min_speed:e})")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    fn raw(&self, t: f64, out: &mut [f64]) {
        for (o, terms) in out.iter_mut().zip(&self.coords) {
            *o = terms.iter().map(|term| term.value(t)).sum();
        }
    }

    fn raw_slope(&self, t: f64, out: &mut [f64]) {
        for (o, terms) in out.iter_mut().zip(&self.coords) {
            *o = terms.iter().map(|term| term.slope(t)).sum();
        }
    }

    /// Point in the ambient space.
    pub fn eval(&self, t: f64) -> DVector<f64> {
        match self.ambient {
            Ambient::R3 => DVector::from_column_slice(self.eval3(t).as_slice()),
            Ambient::S3 => DVector::from_column_slice(self.eval4(t).as_slice()),
        }
    }

    /// Exact derivative with respect to `t`.
    pub fn derivative(&self, t: f64) -> DVector<f64> {
        match self.ambient {
            Ambient::R3 => {
                let mut d = [0.0; 3];
                self.raw_slope(t, &mut d);
                DVector::from_column_slice(&d)
            }
            Ambient::S3 => DVector::from_column_slice(self.derivative4(t).as_slice()),
        }
    }

    /// ℝ³ evaluation; panics for S³ curves.
    pub fn eval3(&self, t: f64) -> Vector3<f64> {
        assert_eq!(self.ambient, Ambient::R3, "eval3 on an S3 curve");
        let mut p = [0.0; 3];
        self.raw(t, &mut p);
        Vector3::from(p)
    }

    /// S³ evaluation; panics for ℝ³ curves.
    pub fn eval4(&self, t: f64) -> Vector4<f64> {
        assert_eq!(self.ambient, Ambient::S3, "eval4 on an R3 curve");
        let mut p = [0.0; 4];
        self.raw(t, &mut p);
        let v = Vector4::from(p);
        if self.normalized {
            v / v.norm()
        } else {
            v
        }
    }

    fn derivative4(&self, t: f64) -> Vector4<f64> {
        let mut p = [0.0; 4];
        let mut d = [0.0; 4];
        self.raw_slope(t, &mut d);
        let d = Vector4::from(d);
        if !self.normalized {
            return d;
        }
        self.raw(t, &mut p);
        let v = Vector4::from(p);
        let r = v.norm();
        let u = v / r;
        (d - u * u.dot(&d)) / r
    }

    /// Largest frequency appearing in any coordinate.
    pub fn max_frequency(&self) -> i32 {
        self.coords.iter().flatten().map(|t| t.freq).max().unwrap_or(0)
    }
}

/// Point of S³ used as the pole of a stereographic projection.
#[derive(Clone, Debug, PartialEq)]
pub struct InversionPoint {
    point: Vector4<f64>,
    /// Orthonormal basis of the hyperplane orthogonal to `point`, stored as
    /// the first three rows of an orthogonal matrix.
    basis: [Vector4<f64>; 3],
    pub clearance: f64,
}

impl Default for InversionPoint {
    fn default() -> Self {
        InversionPoint::new(Vector4::new(0.0, 0.0, 0.0, 1.0)).expect("unit pole")
    }
}

impl InversionPoint {
    pub fn new(v: Vector4<f64>) -> Result<Self> {
        let n = v.norm();
        if !(n > 1e-12) || !n.is_finite() {
            return Err(Error::InvalidInversionPoint("zero vector".into()));
        }
        let point = v / n;
        // Gram-Schmidt on the standard basis, skipping the axis closest to I.
        let skip = point.iamax();
        let mut basis: Vec<Vector4<f64>> = Vec::with_capacity(3);
        for axis in 0..4 {
            if axis == skip {
                continue;
            }
            let mut e = Vector4::zeros();
            e[axis] = 1.0;
            e -= point * point.dot(&e);
            for b in &basis {
                e -= b * b.dot(&e);
            }
            basis.push(e / e.norm());
        }
        let mut basis = [basis[0], basis[1], basis[2]];
        // Right-handed: det[b0, b1, b2, I] > 0, so the default pole gives
        // the identity frame.
        let m = Matrix4::from_columns(&[basis[0], basis[1], basis[2], point]);
        if m.determinant() < 0.0 {
            basis.swap(0, 1);
        }
        Ok(InversionPoint { point, basis, clearance: DEFAULT_CLEARANCE })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() != 4 {
            return Err(Error::InvalidInversionPoint(format!("expected 4 coordinates, got {}", v.len())));
        }
        Self::new(Vector4::new(v[0], v[1], v[2], v[3]))
    }

    pub fn with_clearance(mut self, clearance: f64) -> Self {
        self.clearance = clearance;
        self
    }

    pub fn point(&self) -> Vector4<f64> {
        self.point
    }

    /// Embeds a vector of the hyperplane `I^⊥` (in basis coordinates) into ℝ⁴.
    pub fn embed(&self, u: &Vector3<f64>) -> Vector4<f64> {
        self.basis[0] * u.x + self.basis[1] * u.y + self.basis[2] * u.z
    }

    fn coordinates(&self, x: &Vector4<f64>) -> Vector3<f64> {
        Vector3::new(self.basis[0].dot(x), self.basis[1].dot(x), self.basis[2].dot(x))
    }

    /// Checks that the pole keeps the configured clearance from an S³ curve.
    pub fn check_clearance(&self, curve: &PeriodicCurve) -> Result<()> {
        let grid = 10_000;
        for k in 0..grid {
            let t = k as f64 / grid as f64;
            if (curve.eval4(t) - self.point).norm() <= self.clearance {
                return Err(Error::PointAtInfinity { t: Some(t) });
            }
        }
        Ok(())
    }
}

/// Stereographic projection S_I: S³ ∖ {I} → ℝ³ ≅ I^⊥.
pub fn stereographic_project(x: &Vector4<f64>, inv: &InversionPoint) -> Result<Vector3<f64>> {
    if (x - inv.point).norm() < inv.clearance {
        return Err(Error::PointAtInfinity { t: None });
    }
    let h = x.dot(&inv.point);
    Ok(inv.coordinates(x) / (1.0 - h))
}

/// Inverse of [`stereographic_project`].
pub fn stereographic_unproject(u: &Vector3<f64>, inv: &InversionPoint) -> Vector4<f64> {
    let r2 = u.norm_squared();
    (inv.embed(u) * 2.0 + inv.point * (r2 - 1.0)) / (r2 + 1.0)
}

/// Names accepted by [`builtin_curve`].
pub const CATALOG: [&str; 6] = ["paper-trefoil", "torus-2-3", "torus-2-5", "torus-2-7", "figure-eight", "round-unknot"];

pub fn builtin_curve(name: &str) -> Result<PeriodicCurve> {
    let c = |f, a, b| FourierTerm::new(f, a, b);
    match name {
        "paper-trefoil" => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            PeriodicCurve::new(
                Ambient::S3,
                name,
                vec![vec![c(2, s, 0.0)], vec![c(2, 0.0, s)], vec![c(3, s, 0.0)], vec![c(3, 0.0, s)]],
            )
        }
        "round-unknot" => PeriodicCurve::new(
            Ambient::R3,
            name,
            vec![vec![c(1, 1.0, 0.0)], vec![c(1, 0.0, 1.0)], vec![]],
        ),
        "figure-eight" => {
            // ((2 + cos 2u) cos 3u, (2 + cos 2u) sin 3u, sin 4u), u = 2πt
            PeriodicCurve::new(
                Ambient::R3,
                name,
                vec![
                    vec![c(3, 2.0, 0.0), c(5, 0.5, 0.0), c(1, 0.5, 0.0)],
                    vec![c(3, 0.0, 2.0), c(5, 0.0, 0.5), c(1, 0.0, 0.5)],
                    vec![c(4, 0.0, 1.0)],
                ],
            )
        }
        _ => match name.strip_prefix("torus-").and_then(parse_pair) {
            Some((p, q)) if p > 0 && q > 0 && gcd(p, q) == 1 && name_in_catalog(name) => torus_knot(p, q),
            _ => Err(Error::UnknownCurve(name.to_string())),
        },
    }
}

fn name_in_catalog(name: &str) -> bool {
    CATALOG.contains(&name)
}

fn parse_pair(s: &str) -> Option<(i32, i32)> {
    let (a, b) = s.split_once('-')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Torus knot T(p, q) on the standard torus of radii 2 and 1:
/// `((2 + cos qu) cos pu, (2 + cos qu) sin pu, −sin qu)`.
pub fn torus_knot(p: i32, q: i32) -> Result<PeriodicCurve> {
    let c = |f, a, b| FourierTerm::new(f, a, b);
    PeriodicCurve::new(
        Ambient::R3,
        format!("torus-{p}-{q}"),
        vec![
            vec![c(p, 2.0, 0.0), c(p + q, 0.5, 0.0), c(p - q, 0.5, 0.0)],
            vec![c(p, 0.0, 2.0), c(p + q, 0.0, 0.5), c(p - q, 0.0, 0.5)],
            vec![c(q, 0.0, -1.0)],
        ],
    )
}

/// Evaluates a curve in ℝ³, projecting S³ curves through `inv`.
pub fn point_in_r3(curve: &PeriodicCurve, t: f64, inv: Option<&InversionPoint>) -> Result<Vector3<f64>> {
    match curve.ambient {
        Ambient::R3 => Ok(curve.eval3(t)),
        Ambient::S3 => {
            let inv = inv.ok_or(Error::MissingInversionPoint)?;
            stereographic_project(&curve.eval4(t), inv).map_err(|_| Error::PointAtInfinity { t: Some(t) })
        }
    }
}

/// Closed polygon through `eval(k/n)`, `k = 0..n`.
pub fn polygonalize(curve: &PeriodicCurve, n: usize, inv: Option<&InversionPoint>) -> Result<ClosedPolygon> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let pts = (0..n)
        .map(|k| point_in_r3(curve, k as f64 / n as f64, inv))
        .collect::<Result<Vec<_>>>()?;
    ClosedPolygon::new(pts)
}

/// Polygon through the curve points at the given parameters.
pub fn inscribed_polygon(curve: &PeriodicCurve, ts: &[f64], inv: Option<&InversionPoint>) -> Result<ClosedPolygon> {
    let pts = ts.iter().map(|&t| point_in_r3(curve, t, inv)).collect::<Result<Vec<_>>>()?;
    ClosedPolygon::new(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_trefoil_values() {
        let g = builtin_curve("paper-trefoil").unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.eval4(0.0) - Vector4::new(s, 0.0, s, 0.0)).norm() < 1e-15);
        assert!((g.eval4(0.5) - Vector4::new(s, 0.0, -s, 0.0)).norm() < 1e-14);
        let d = g.derivative(0.0);
        let want = DVector::from_vec(vec![0.0, 4.0 * std::f64::consts::PI * s, 0.0, 6.0 * std::f64::consts::PI * s]);
        assert!((d - want).norm() < 1e-12);
    }

    #[test]
    fn catalog_builds() {
        for name in CATALOG {
            builtin_curve(name).unwrap();
        }
        assert!(matches!(builtin_curve("torus-3-5"), Err(Error::UnknownCurve(_))));
        assert!(matches!(builtin_curve("nope"), Err(Error::UnknownCurve(_))));
    }

    #[test]
    fn constant_curve_has_zero_derivative() {
        let c = PeriodicCurve {
            ambient: Ambient::R3,
            label: "pt".into(),
            coords: vec![vec![FourierTerm::new(0, 1.0, 0.0)], vec![], vec![]],
            normalized: false,
        };
        assert_eq!(c.derivative(0.3).norm(), 0.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn antipode_projects_to_origin() {
        let inv = InversionPoint::default();
        let x = -inv.point();
        assert!(stereographic_project(&x, &inv).unwrap().norm() < 1e-15);
        assert!(stereographic_project(&inv.point(), &inv).is_err());
    }

    #[test]
    fn default_pole_is_coordinate_projection() {
        let inv = InversionPoint::default();
        let x = Vector4::new(0.6, 0.0, 0.0, 0.8);
        let u = stereographic_project(&x, &inv).unwrap();
        assert!((u - Vector3::new(3.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn polygonalize_rejects_two_vertices() {
        let c = builtin_curve("round-unknot").unwrap();
        assert!(matches!(polygonalize(&c, 2, None), Err(Error::TooFewVertices(2))));
        let g = builtin_curve("paper-trefoil").unwrap();
        assert!(matches!(polygonalize(&g, 12, None), Err(Error::MissingInversionPoint)));
    }

    #[test]
    fn curve_json_round_trip() {
        let g = builtin_curve("figure-eight").unwrap();
        let back = PeriodicCurve::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        assert!(PeriodicCurve::from_json(r#"{"ambient":"S3","label":"x","coords":[[],[],[]]}"#).is_err());
    }
}
