//! Planar projections of closed polygons, crossing extraction and Gauss codes.
//!
//! Near-degenerate projections are rejected with
//! [`Error::NonGenericDirection`] rather than repaired; callers resample the
//! direction.

use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of direction draws before [`Error::GenericityExhausted`].
pub const MAX_DIRECTION_DRAWS: usize = 64;

/// Genericity thresholds, in diagram coordinates normalized to unit size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub vertex_clearance: f64,
    pub min_angle_sine: f64,
    pub min_depth_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { vertex_clearance: 1e-9, min_angle_sine: 1e-6, min_depth_gap: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedPolygon {
    vertices: Vec<Vector3<f64>>,
}

impl ClosedPolygon {
    /// Checks that edges are nondegenerate and that non-adjacent edges are
    /// disjoint in ℝ³.
    pub fn new(vertices: Vec<Vector3<f64>>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        if vertices.iter().any(|v| !v.iter().all(|x| x.is_finite())) {
            return Err(Error::DegeneratePolygon("non-finite vertex".into()));
        }
        for i in 0..n {
            let len = (vertices[(i + 1) % n] - vertices[i]).norm();
            if len <= 1e-12 {
                return Err(Error::DegeneratePolygon(format!("edge {i} has length {len:e}")));
            }
        }
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let d = segment_distance(&vertices[i], &vertices[(i + 1) % n], &vertices[j], &vertices[(j + 1) % n]);
                if d <= 1e-12 {
                    return Err(Error::DegeneratePolygon(format!("edges {i} and {j} touch")));
                }
            }
        }
        Ok(ClosedPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Reflection through the plane `z = 0`.
    pub fn mirror(&self) -> ClosedPolygon {
        ClosedPolygon { vertices: self.vertices.iter().map(|v| Vector3::new(v.x, v.y, -v.z)).collect() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<[f64; 3]> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ClosedPolygon::new(raw.into_iter().map(Vector3::from).collect())
    }

    /// One `x,y,z` triple per line; blank lines and `#` comments are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let vals: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", line_no + 1)))?;
            if vals.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 values, got {}", line_no + 1, vals.len())));
            }
            pts.push(Vector3::new(vals[0], vals[1], vals[2]));
        }
        ClosedPolygon::new(pts)
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<[f64; 3]> = self.vertices.iter().map(|v| [v.x, v.y, v.z]).collect();
        serde_json::to_string(&raw).expect("polygon serializes")
    }
}

/// Minimal distance between segments `[p0, p1]` and `[q0, q1]` in ℝ³.
pub fn segment_distance(p0: &Vector3<f64>, p1: &Vector3<f64>, q0: &Vector3<f64>, q1: &Vector3<f64>) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);
    let c = d1.dot(&r);
    let b = d1.dot(&d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-300 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

fn point_segment_distance_2d(p: &Vector2<f64>, a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    let s = if len2 > 0.0 { ((p - a).dot(&d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (a + d * s - p).norm()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub over_edge: usize,
    pub under_edge: usize,
    pub over_param: f64,
    pub under_param: f64,
    /// `sign(det[d_over, d_under, view])`.
    pub sign: i8,
    /// Crossing location in diagram coordinates.
    pub point: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotDiagram {
    pub vertices: Vec<Vector3<f64>>,
    /// Unit vector pointing from the diagram toward the eye.
    pub direction: Vector3<f64>,
    /// In-plane frame; `(e1, e2, direction)` is right-handed.
    pub frame: [Vector3<f64>; 2],
    pub crossings: Vec<Crossing>,
}

impl KnotDiagram {
    pub fn projected_vertices(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|v| [self.frame[0].dot(v), self.frame[1].dot(v)]).collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }
}

/// Right-handed frame `(e1, e2)` with `e1 × e2 = view`.
pub fn view_frame(view: &Vector3<f64>) -> [Vector3<f64>; 2] {
    let a = if view.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = a.cross(view).normalize();
    let e2 = view.cross(&e1);
    [e1, e2]
}

/// Projects `poly` along `direction` and extracts all crossings.
pub fn project_diagram(poly: &ClosedPolygon, direction: &Vector3<f64>) -> Result<KnotDiagram> {
    project_diagram_with(poly, direction, &Tolerances::default())
}

pub fn project_diagram_with(poly: &ClosedPolygon, direction: &Vector3<f64>, tol: &Tolerances) -> Result<KnotDiagram> {
    let norm = direction.norm();
    if !((norm - 1.0).abs() < 1e-9) {
        return Err(Error::NonGenericDirection(format!("direction has length {norm}")));
    }
    let view = direction / norm;
    let frame = view_frame(&view);
    let v = poly.vertices();
    let n = v.len();

    let mut min = Vector2::repeat(f64::INFINITY);
    let mut max = Vector2::repeat(f64::NEG_INFINITY);
    let raw: Vec<Vector2<f64>> = v
        .iter()
        .map(|p| {
            let q = Vector2::new(frame[0].dot(p), frame[1].dot(p));
            min = min.inf(&q);
            max = max.sup(&q);
            q
        })
        .collect();
    let scale = (max - min).norm().max(1e-300);
    let p2: Vec<Vector2<f64>> = raw.iter().map(|q| (q - min) / scale).collect();
    let depth: Vec<f64> = v.iter().map(|p| view.dot(p) / scale).collect();

    for i in 0..n {
        let len = (p2[(i + 1) % n] - p2[i]).norm();
        if len <= tol.vertex_clearance {
            return Err(Error::NonGenericDirection(format!("edge {i} projects to a point")));
        }
        let a = p2[(i + n - 1) % n] - p2[i];
        let b = p2[(i + 1) % n] - p2[i];
        let sine = (a.x * b.y - a.y * b.x).abs() / (a.norm() * b.norm());
        if sine <= tol.min_angle_sine && a.dot(&b) > 0.0 {
            return Err(Error::NonGenericDirection(format!("edges at vertex {i} fold onto each other")));
        }
    }
    if n > 3 {
        for k in 0..n {
            for e in 0..n {
                if e == k || (e + 1) % n == k {
                    continue;
                }
                if point_segment_distance_2d(&p2[k], &p2[e], &p2[(e + 1) % n]) <= tol.vertex_clearance {
                    return Err(Error::NonGenericDirection(format!("vertex {k} projects onto edge {e}")));
                }
            }
        }
    }

    let mut crossings = Vec::new();
    for i in 0..n {
        let (a0, a1) = (p2[i], p2[(i + 1) % n]);
        let d1 = a1 - a0;
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (b0, b1) = (p2[j], p2[(j + 1) % n]);
            if a0.x.max(a1.x) < b0.x.min(b1.x)
                || b0.x.max(b1.x) < a0.x.min(a1.x)
                || a0.y.max(a1.y) < b0.y.min(b1.y)
                || b0.y.max(b1.y) < a0.y.min(a1.y)
            {
                continue;
            }
            let d2 = b1 - b0;
            let den = d1.x * d2.y - d1.y * d2.x;
            let w = b0 - a0;
            if den.abs() <= tol.min_angle_sine * d1.norm() * d2.norm() {
                // Parallel: vertex clearance already excludes overlaps.
                continue;
            }
            let s = (w.x * d2.y - w.y * d2.x) / den;
            let u = (w.x * d1.y - w.y * d1.x) / den;
            if !(s > 0.0 && s < 1.0 && u > 0.0 && u < 1.0) {
                continue;
            }
            let zi = depth[i] * (1.0 - s) + depth[(i + 1) % n] * s;
            let zj = depth[j] * (1.0 - u) + depth[(j + 1) % n] * u;
            if (zi - zj).abs() <= tol.min_depth_gap {
                return Err(Error::NonGenericDirection(format!("edges {i} and {j} meet at equal depth")));
            }
            let di = v[(i + 1) % n] - v[i];
            let dj = v[(j + 1) % n] - v[j];
            let (over_edge, under_edge, over_param, under_param, dov, dun) =
                if zi > zj { (i, j, s, u, di, dj) } else { (j, i, u, s, dj, di) };
            let det = dov.cross(&dun).dot(&view);
            let at = raw[i] + (raw[(i + 1) % n] - raw[i]) * s;
            crossings.push(Crossing {
                over_edge,
                under_edge,
                over_param,
                under_param,
                sign: if det > 0.0 { 1 } else { -1 },
                point: [at.x, at.y],
            });
        }
    }
    for a in 0..crossings.len() {
        for b in a + 1..crossings.len() {
            let pa = Vector2::from(crossings[a].point);
            let pb = Vector2::from(crossings[b].point);
            if (pa - pb).norm() / scale <= tol.vertex_clearance {
                return Err(Error::NonGenericDirection("three edges project through one point".into()));
            }
        }
    }
    Ok(KnotDiagram { vertices: v.to_vec(), direction: view, frame, crossings })
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let n: f64 = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Draws directions from `rng` until one projects generically.
pub fn random_generic_diagram<R: Rng + ?Sized>(poly: &ClosedPolygon, rng: &mut R) -> Result<KnotDiagram> {
    for _ in 0..MAX_DIRECTION_DRAWS {
        let dir = random_unit_vector(rng);
        if let Ok(d) = project_diagram(poly, &dir) {
            return Ok(d);
        }
    }
    Err(Error::GenericityExhausted(MAX_DIRECTION_DRAWS))
}

/// A generic projection direction drawn deterministically from `seed`.
pub fn random_generic_direction(poly: &ClosedPolygon, seed: u64) -> Result<Vector3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_generic_diagram(poly, &mut rng).map(|d| d.direction)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussSymbol {
    pub crossing: usize,
    pub over: bool,
    pub sign: i8,
}

/// Crossing visits in traversal order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussCode {
    symbols: Vec<GaussSymbol>,
}

impl GaussCode {
    /// Validates that every crossing id appears once over and once under
    /// with a consistent sign. Ids are renumbered by first appearance.
    pub fn new(symbols: Vec<GaussSymbol>) -> Result<Self> {
        use std::collections::HashMap;
        let mut seen: HashMap<usize, (usize, usize, i8)> = HashMap::new();
        for s in &symbols {
            if s.sign != 1 && s.sign != -1 {
                return Err(Error::InvalidGaussCode(format!("sign {} on crossing {}", s.sign, s.crossing)));
            }
            let e = seen.entry(s.crossing).or_insert((0, 0, s.sign));
            if s.over {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
            if e.2 != s.sign {
                return Err(Error::InvalidGaussCode(format!("inconsistent sign on crossing {}", s.crossing)));
            }
        }
        if let Some((id, _)) = seen.iter().find(|(_, &(o, u, _))| o != 1 || u != 1) {
            return Err(Error::InvalidGaussCode(format!("crossing {id} must appear once over and once under")));
        }
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        let symbols = symbols
            .into_iter()
            .map(|s| {
                let next = relabel.len();
                let id = *relabel.entry(s.crossing).or_insert(next);
                GaussSymbol { crossing: id, ..s }
            })
            .collect();
        Ok(GaussCode { symbols })
    }

    /// Parses compact notation such as `"O1+ U2+ O3+ U1+ O2+ U3+"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        for tok in text.split_whitespace() {
            let bad = || Error::InvalidGaussCode(format!("bad symbol `{tok}`"));
            let over = match tok.chars().next() {
                Some('O') | Some('o') => true,
                Some('U') | Some('u') => false,
                _ => return Err(bad()),
            };
            let sign = match tok.chars().last() {
                Some('+') => 1,
                Some('-') => -1,
                _ => return Err(bad()),
            };
            let crossing = tok[1..tok.len() - 1].parse().map_err(|_| bad())?;
            symbols.push(GaussSymbol { crossing, over, sign });
        }
        GaussCode::new(symbols)
    }

    pub fn symbols(&self) -> &[GaussSymbol] {
        &self.symbols
    }

    pub fn crossing_count(&self) -> usize {
        self.symbols.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Same closed code read from symbol `k` onward.
    pub fn rotate(&self, k: usize) -> GaussCode {
        if self.symbols.is_empty() {
            return self.clone();
        }
        let k = k % self.symbols.len();
        let mut s = self.symbols[k..].to_vec();
        s.extend_from_slice(&self.symbols[..k]);
        GaussCode::new(s).expect("rotation preserves validity")
    }

    /// Code of the mirror image: over/under swapped, signs negated.
    pub fn mirror(&self) -> GaussCode {
        GaussCode {
            symbols: self.symbols.iter().map(|s| GaussSymbol { crossing: s.crossing, over: !s.over, sign: -s.sign }).collect(),
        }
    }

    /// Sign of each crossing, indexed by id.
    pub fn signs(&self) -> Vec<i8> {
        let mut out = vec![0; self.crossing_count()];
        for s in &self.symbols {
            out[s.crossing] = s.sign;
        }
        out
    }
}

impl std::fmt::Display for GaussCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}{}{}", if s.over { 'O' } else { 'U' }, s.crossing + 1, if s.sign > 0 { '+' } else { '-' }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Crossing visits sorted by traversal position (edge, then parameter).
pub fn gauss_code(diagram: &KnotDiagram) -> GaussCode {
    let mut visits: Vec<(f64, GaussSymbol)> = Vec::with_capacity(2 * diagram.crossings.len());
    for (id, c) in diagram.crossings.iter().enumerate() {
        visits.push((c.over_edge as f64 + c.over_param, GaussSymbol { crossing: id, over: true, sign: c.sign }));
        visits.push((c.under_edge as f64 + c.under_param, GaussSymbol { crossing: id, over: false, sign: c.sign }));
    }
    visits.sort_by(|a, b| a.0.total_cmp(&b.0));
    GaussCode::new(visits.into_iter().map(|(_, s)| s).collect()).expect("diagram crossings form a valid code")
}

/// Sum of crossing signs.
pub fn writhe(code: &GaussCode) -> i32 {
    code.symbols.iter().filter(|s| s.over).map(|s| s.sign as i32).sum()
}
