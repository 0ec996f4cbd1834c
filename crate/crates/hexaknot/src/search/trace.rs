//! Predictor–corrector continuation along the prism solution curve.
//!
//! In ℝ⁴ the concurrency conditions have codimension 5, so the solutions in
//! the six-parameter space form curves. Each step predicts along the null
//! vector of the residual Jacobian and corrects with the damped solver
//! restricted to the hyperplane orthogonal to the prediction.

use nalgebra::{DVector, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use super::solve::{solve_window, SolveOptions};
use crate::config_geometry::{
    classify_planar_config, config_theta, is_bad_configuration, ConfigType, CrossingPattern, PlanarConfiguration, Plane, PrismProblem,
    PrismSpace, SixTuple,
};
use crate::curves::{point_in_r3, Ambient, InversionPoint};
use crate::diagram::{segment_distance, ClosedPolygon};
use crate::error::{Error, Result};
use crate::invariants::{classify_hexagon, KnotClass};

/// Relative edge clearance below which a hexagon counts as singular.
pub const SINGULAR_CLEARANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    pub step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
    pub tol: f64,
    /// Singular values below `null_tol · σ_max` count as null directions.
    pub null_tol: f64,
    /// Coplanarity and edge clearance below this mark a point non-generic.
    pub flag_tol: f64,
    /// Sign of the initial direction.
    pub forward: bool,
    /// Locate planar configurations between steps by bisection.
    pub locate_planar: bool,
    /// Classify the hexagon at every point.
    pub classify: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 1e-3,
            min_step: 1e-5,
            max_step: 1e-2,
            max_steps: 2000,
            tol: 1e-10,
            null_tol: 1e-6,
            flag_tol: 1e-2,
            forward: true,
            locate_planar: true,
            classify: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Parameters, continuous along the trace (not reduced mod 1).
    pub window: [f64; 6],
    pub tuple: SixTuple,
    pub residual: f64,
    pub arc: f64,
    pub step: f64,
    /// Hexagon vertices in ℝ³.
    pub points: [[f64; 3]; 6],
    pub class: Option<KnotClass>,
    /// Max distance to the best-fit plane over the diameter.
    pub coplanarity: f64,
    /// Min distance between non-adjacent hexagon edges over the diameter.
    pub edge_clearance: f64,
    /// Signed distance of the inversion point from the affine span of the
    /// lifted points; zero exactly when the ℝ³ hexagon is planar.
    pub planarity_sign: f64,
    pub near_planar: bool,
    pub near_singular: bool,
    /// Inserted by bisection on `planarity_sign`.
    pub located: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStop {
    Closed,
    MaxSteps,
    OrderingCollapse(usize, usize),
    StepUnderflow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceResult {
    pub points: Vec<TracePoint>,
    pub closed: bool,
    pub stop: TraceStop,
    /// Inversion point relating the ℝ³ hexagons to the traced points.
    pub inversion: [f64; 4],
}

fn hexagon_points(problem: &PrismProblem, w: &[f64; 6], proj: Option<&InversionPoint>) -> Result<[Vector3<f64>; 6]> {
    let mut out = [Vector3::zeros(); 6];
    for (k, &t) in w.iter().enumerate() {
        out[k] = point_in_r3(problem.curve, t.rem_euclid(1.0), proj)?;
    }
    Ok(out)
}

/// Coplanarity measure of six points (0 for planar).
pub(crate) fn coplanarity(points: &[Vector3<f64>; 6]) -> f64 {
    match PlanarConfiguration::from_points(*points) {
        Ok(c) => c.coplanarity,
        Err(Error::NotCoplanar(v)) => v,
        Err(_) => f64::NAN,
    }
}

fn diameter(points: &[Vector3<f64>; 6]) -> f64 {
    let mut d: f64 = 0.0;
    for a in points {
        for b in points {
            d = d.max((a - b).norm());
        }
    }
    d
}

fn edge_clearance(points: &[Vector3<f64>; 6]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..6 {
        for j in i + 2..6 {
            if i == 0 && j == 5 {
                continue;
            }
            best = best.min(segment_distance(&points[i], &points[(i + 1) % 6], &points[j], &points[(j + 1) % 6]));
        }
    }
    best / diameter(points)
}

fn planarity_sign(problem: &PrismProblem, w: &[f64; 6], inv: &InversionPoint) -> f64 {
    let ip = inv.point();
    let x: Vec<DVector<f64>> = problem.points(w);
    let cols: Vec<_> = [0, 1, 2, 3].iter().map(|&k| nalgebra::Vector4::from_iterator(x[k].iter().copied()) - ip).collect();
    let m = Matrix4::from_columns(&cols);
    let scale: f64 = cols.iter().map(|c| c.norm()).product();
    m.determinant() / scale
}

struct Context<'a, 'b> {
    problem: &'a PrismProblem<'b>,
    /// Projection for S³ curves; `None` for ℝ³ curves.
    proj: Option<InversionPoint>,
    inv: InversionPoint,
    opts: TraceOptions,
}

impl Context<'_, '_> {
    fn point(&self, w: [f64; 6], residual: f64, arc: f64, step: f64, sigma_ratio: f64, index: u64) -> Result<TracePoint> {
        let pts = hexagon_points(self.problem, &w, self.proj.as_ref())?;
        let (tuple, _) = SixTuple::from_window(&w)?;
        let copl = coplanarity(&pts);
        let clear = edge_clearance(&pts);
        // Hexagons whose non-adjacent edges meet are not knots.
        let class = if self.opts.classify && clear > SINGULAR_CLEARANCE {
            ClosedPolygon::new(pts.to_vec()).and_then(|p| classify_hexagon(&p, index)).ok()
        } else {
            None
        };
        Ok(TracePoint {
            window: w,
            tuple,
            residual,
            arc,
            step,
            points: pts.map(|p| [p.x, p.y, p.z]),
            class,
            coplanarity: copl,
            edge_clearance: clear,
            planarity_sign: planarity_sign(self.problem, &w, &self.inv),
            near_planar: copl < self.opts.flag_tol,
            near_singular: clear < self.opts.flag_tol || sigma_ratio < self.opts.null_tol.sqrt(),
            located: false,
        })
    }

    /// Unit null vector of the Jacobian and the ratio of its smallest
    /// non-null singular value to the largest.
    fn tangent(&self, w: &[f64; 6]) -> Result<(DVector<f64>, f64)> {
        let (_, jac) = self.problem.residual_and_jacobian(w)?;
        let svd = jac.svd(false, true);
        let s = &svd.singular_values;
        let smax = s.max();
        let null = s.iter().filter(|&&x| x < self.opts.null_tol * smax).count();
        if null != 1 {
            return Err(Error::TangentDegenerate(null));
        }
        let k = s.imin();
        let next = s.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).fold(f64::INFINITY, f64::min);
        let vt = svd.v_t.expect("requested V");
        Ok((vt.row(k).transpose().normalize(), next / smax))
    }

    fn correct(&self, y: &[f64; 6], tau: &DVector<f64>) -> Result<([f64; 6], usize, f64)> {
        let opts = SolveOptions { tol: self.opts.tol, max_iterations: 25, lambda0: 1e-6 };
        let (w, stats) = solve_window(self.problem, y, &opts, Some((tau, y)))?;
        Ok((w, stats.iterations, *stats.history.last().expect("history starts with the seed")))
    }
}

/// Closest approach of the segment `a → b` to any cyclic relabeling of
/// `start`, measured in parameter space.
fn closure_distance(start: &[f64; 6], a: &[f64; 6], b: &[f64; 6]) -> f64 {
    let mut best = f64::INFINITY;
    for k in 0..6 {
        let s: [f64; 6] = std::array::from_fn(|i| start[(i + k) % 6] + if i + k >= 6 { 1.0 } else { 0.0 });
        let mean: f64 = (0..6).map(|i| a[i] - s[i]).sum::<f64>() / 6.0;
        let shift = mean.round();
        let e0: [f64; 6] = std::array::from_fn(|i| a[i] - s[i] - shift);
        let d: [f64; 6] = std::array::from_fn(|i| b[i] - a[i]);
        let dd: f64 = d.iter().map(|x| x * x).sum();
        let u = if dd > 0.0 { (-(0..6).map(|i| e0[i] * d[i]).sum::<f64>() / dd).clamp(0.0, 1.0) } else { 0.0 };
        let dist = (0..6).map(|i| (e0[i] + u * d[i]).powi(2)).sum::<f64>().sqrt();
        best = best.min(dist);
    }
    best
}

fn param_dist(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    (0..6).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

/// Follows the solution curve through `start` (a window with residual
/// below `opts.tol`, or close enough for the corrector to reach it).
pub fn trace_prism_manifold(problem: &PrismProblem, start: &[f64; 6], opts: &TraceOptions) -> Result<TraceResult> {
    let inv = match &problem.space {
        PrismSpace::Lifted(i) => i.clone(),
        PrismSpace::Ambient => InversionPoint::default(),
    };
    let proj = match problem.curve.ambient {
        Ambient::S3 => Some(inv.clone()),
        Ambient::R3 => None,
    };
    let ctx = Context { problem, proj, inv, opts: *opts };
    let polish = SolveOptions { tol: opts.tol, ..SolveOptions::default() };
    let (x0, stats) = solve_window(problem, start, &polish, None)?;
    let (mut tau, ratio) = ctx.tangent(&x0)?;
    let sum: f64 = tau.iter().sum();
    if (sum < 0.0) == opts.forward {
        tau = -tau;
    }
    let mut x = x0;
    let mut points = vec![ctx.point(x0, *stats.history.last().unwrap(), 0.0, 0.0, ratio, 0)?];
    let mut h = opts.step;
    let mut arc = 0.0;
    let mut departed = false;
    let mut stop = TraceStop::MaxSteps;

    'steps: for n in 1..=opts.max_steps {
        let (next, res, ratio) = loop {
            let y: [f64; 6] = std::array::from_fn(|k| x[k] + h * tau[k]);
            if y.windows(2).any(|p| p[1] - p[0] < super::solve::MERGE_GAP) || y[0] + 1.0 - y[5] < super::solve::MERGE_GAP {
                let k = (0..5).find(|&k| y[k + 1] - y[k] < super::solve::MERGE_GAP).map(|k| (k + 1, k + 2)).unwrap_or((6, 1));
                stop = TraceStop::OrderingCollapse(k.0, k.1);
                break 'steps;
            }
            match ctx.correct(&y, &tau) {
                Ok((w, iters, res)) => {
                    let (t_new, ratio) = match ctx.tangent(&w) {
                        Ok(t) => t,
                        Err(Error::TangentDegenerate(_)) if h > opts.min_step => {
                            h *= 0.5;
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    let t_new = if t_new.dot(&tau) < 0.0 { -t_new } else { t_new };
                    // A sharp turn means the corrector jumped branches.
                    if t_new.dot(&tau) < 0.9 && h > opts.min_step {
                        h *= 0.5;
                        continue;
                    }
                    tau = t_new;
                    let taken = h;
                    if iters <= 3 {
                        h = (h * 1.5).min(opts.max_step);
                    } else if iters >= 8 {
                        h = (h * 0.5).max(opts.min_step);
                    }
                    break (w, res, (ratio, taken));
                }
                Err(Error::OrderingCollapse(i, j)) => {
                    stop = TraceStop::OrderingCollapse(i, j);
                    break 'steps;
                }
                Err(_) => {
                    h *= 0.5;
                    if h < opts.min_step {
                        stop = TraceStop::StepUnderflow;
                        break 'steps;
                    }
                }
            }
        };
        let (ratio, taken) = ratio;
        let prev = x;
        arc += param_dist(&prev, &next);
        let mut point = ctx.point(next, res, arc, taken, ratio, n as u64)?;
        if opts.locate_planar {
            let last = points.last().expect("trace starts with one point");
            if last.planarity_sign * point.planarity_sign < 0.0 {
                if let Ok(ev) = locate_planar(&ctx, &prev, &next, last.planarity_sign, last.arc, n as u64) {
                    points.push(ev);
                }
            }
        }
        x = next;
        point.arc = arc;
        points.push(point);
        let d = closure_distance(&x0, &prev, &next);
        if !departed {
            departed = closure_distance(&x0, &next, &next) > 2.0 * opts.max_step;
        } else if d < 0.5 * taken.max(opts.step) {
            stop = TraceStop::Closed;
            break;
        }
    }
    let ip = ctx.inv.point();
    Ok(TraceResult { closed: stop == TraceStop::Closed, points, stop, inversion: [ip[0], ip[1], ip[2], ip[3]] })
}

/// Bisection on the signed planarity along the chord `a → b`, correcting
/// every trial point back onto the solution curve.
fn locate_planar(ctx: &Context, a: &[f64; 6], b: &[f64; 6], sign_a: f64, arc_a: f64, index: u64) -> Result<TracePoint> {
    let d: [f64; 6] = std::array::from_fn(|k| b[k] - a[k]);
    let len = param_dist(a, b);
    let tau = DVector::from_iterator(6, d.iter().map(|x| x / len));
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = None;
    for _ in 0..60 {
        let u = 0.5 * (lo + hi);
        let y: [f64; 6] = std::array::from_fn(|k| a[k] + u * d[k]);
        let (w, _, res) = ctx.correct(&y, &tau)?;
        let s = planarity_sign(ctx.problem, &w, &ctx.inv);
        best = Some((w, res));
        if s == 0.0 || hi - lo < 1e-14 {
            break;
        }
        if (s < 0.0) == (sign_a < 0.0) {
            lo = u;
        } else {
            hi = u;
        }
    }
    let (w, res) = best.expect("at least one bisection step");
    let ratio = ctx.tangent(&w).map(|t| t.1).unwrap_or(0.0);
    let mut p = ctx.point(w, res, arc_a + param_dist(a, &w), param_dist(a, &w), ratio, index)?;
    p.located = true;
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarEvent {
    pub index: usize,
    pub config: PlanarConfiguration,
    pub config_type: Option<ConfigType>,
    /// Why the type could not be determined.
    pub type_error: Option<String>,
    /// Bad-configuration predicate, for types 1, 4, 5 with the nested pattern.
    pub bad: Option<bool>,
    /// Dihedral angle to the first event's plane.
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarScan {
    pub events: Vec<PlanarEvent>,
    /// Two events lie in planes at an angle above `angle_tol`.
    pub two_plane_condition: bool,
}

/// Trace points whose hexagons are coplanar within tolerance, with their
/// configuration types, bad-configuration status and plane angles.
pub fn scan_planar_events(trace: &TraceResult, angle_tol: f64) -> PlanarScan {
    let inv = InversionPoint::new(trace.inversion.into()).unwrap_or_default();
    let mut events: Vec<PlanarEvent> = Vec::new();
    let mut reference: Option<Plane> = None;
    for (index, p) in trace.points.iter().enumerate() {
        let pts = p.points.map(|q| Vector3::new(q[0], q[1], q[2]));
        let Ok(config) = PlanarConfiguration::from_points(pts) else { continue };
        let (config_type, type_error) = match classify_planar_config(&config, &inv) {
            Ok(t) => (Some(t), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let bad = match (config_type, &config.pattern) {
            (Some(ConfigType::Type1 | ConfigType::Type4 | ConfigType::Type5), CrossingPattern::Nested) => is_bad_configuration(&config).ok(),
            _ => None,
        };
        let plane = reference.get_or_insert(config.plane);
        let theta = config_theta(&config, plane);
        events.push(PlanarEvent { index, config: PlanarConfiguration { config_type, ..config }, config_type, type_error, bad, theta });
    }
    let two_plane_condition = events.iter().any(|e| e.theta > angle_tol);
    PlanarScan { events, two_plane_condition }
}
