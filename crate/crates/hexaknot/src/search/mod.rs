//! Searching curves for inscribed trefoils and prism configurations.

mod solve;
mod trace;

pub use solve::{default_space, solve_prism, solve_prism_in, SolveOptions, SolveStats};
pub use trace::{scan_planar_events, SINGULAR_CLEARANCE, trace_prism_manifold, PlanarEvent, PlanarScan, TraceOptions, TracePoint, TraceResult, TraceStop};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config_geometry::{prism_residual, SixTuple};
use crate::curves::{inscribed_polygon, Ambient, InversionPoint, PeriodicCurve};
use crate::diagram::{gauss_code, random_generic_diagram, ClosedPolygon};
use crate::error::{Error, Result};
use crate::invariants::{classify_polygon, v2, KnotClass, CLASSIFY_DIRECTIONS};

/// Samples per deterministic RNG stream.
pub const BATCH_SIZE: u64 = 4096;
/// Directions used to re-verify every find.
pub const VERIFY_DIRECTIONS: usize = 10;
/// Standard deviation of the local refinement around finds.
pub const REFINE_SIGMA: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Any,
    Left,
    Right,
    Both,
}

impl Target {
    pub fn met(self, left: usize, right: usize) -> bool {
        match self {
            Target::Any => left + right > 0,
            Target::Left => left > 0,
            Target::Right => right > 0,
            Target::Both => left > 0 && right > 0,
        }
    }
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(Target::Any),
            "left" => Ok(Target::Left),
            "right" => Ok(Target::Right),
            "both" => Ok(Target::Both),
            _ => Err(Error::InvalidArgument(format!("unknown target `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_samples: u64,
    pub seed: u64,
    /// Gaussian neighbours drawn around each sampled find.
    pub refinement_steps: usize,
    pub target: Target,
}

impl SearchBudget {
    pub fn new(max_samples: u64, seed: u64, target: Target) -> Self {
        SearchBudget { max_samples, seed, refinement_steps: 0, target }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FindOrigin {
    Sampled,
    Refined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrefoilFind {
    /// Sample index; refined finds carry the index of their parent.
    pub index: u64,
    pub origin: FindOrigin,
    pub t: [f64; 6],
    pub class: KnotClass,
    pub verification_directions: Vec<[f64; 3]>,
    /// Prism residual of the tuple in the curve's own space.
    pub prism_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub samples: u64,
    /// Tuples whose hexagon could not be built or projected.
    pub skipped: u64,
    pub prescreen_hits: u64,
    /// Prescreen hits that failed full classification or re-verification.
    pub rejected: u64,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub finds: Vec<TrefoilFind>,
    pub stats: SearchStats,
    pub target_met: bool,
    /// The budget ran out before the target was met; results are partial
    /// and inconclusive, never a counterexample.
    pub budget_exhausted: bool,
}

/// Six sorted uniforms: a uniform point of the ordered simplex.
pub fn sample_tuple<R: Rng + ?Sized>(rng: &mut R) -> [f64; 6] {
    let mut t: [f64; 6] = std::array::from_fn(|_| rng.random::<f64>());
    t.sort_by(f64::total_cmp);
    t
}

/// RNG for batch `batch`: one ChaCha stream per batch, so results do not
/// depend on how batches are spread over threads.
pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// Inversion point used to bring S³ curves to ℝ³ (the default `e₄`).
fn projection_for(curve: &PeriodicCurve) -> Option<InversionPoint> {
    match curve.ambient {
        Ambient::S3 => Some(InversionPoint::default()),
        Ambient::R3 => None,
    }
}

fn hexagon(curve: &PeriodicCurve, t: &[f64; 6], inv: Option<&InversionPoint>) -> Result<ClosedPolygon> {
    inscribed_polygon(curve, t, inv)
}

enum Outcome {
    Skip,
    Miss,
    Rejected,
    Hit(TrefoilFind),
}

fn examine<R: Rng + ?Sized>(curve: &PeriodicCurve, inv: Option<&InversionPoint>, t: [f64; 6], index: u64, origin: FindOrigin, seed: u64, rng: &mut R) -> Outcome {
    if t.windows(2).any(|w| w[0] >= w[1]) {
        return Outcome::Skip;
    }
    let Ok(poly) = hexagon(curve, &t, inv) else { return Outcome::Skip };
    let Ok(diagram) = random_generic_diagram(&poly, rng) else { return Outcome::Skip };
    // v₂ of a hexagon is 0 (unknot) or 1 (trefoil).
    if v2(&gauss_code(&diagram)) != 1 {
        return Outcome::Miss;
    }
    let sub = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let class = match classify_polygon(&poly, CLASSIFY_DIRECTIONS, sub) {
        Ok(c) if c.class.is_trefoil() => c.class,
        _ => return Outcome::Rejected,
    };
    let verify = match classify_polygon(&poly, VERIFY_DIRECTIONS, sub.rotate_left(17) ^ 0x5151) {
        Ok(v) if v.class == class => v,
        _ => return Outcome::Rejected,
    };
    let residual = SixTuple::new(t).and_then(|tt| prism_residual(curve, &tt)).map(|r| r.norm).unwrap_or(f64::NAN);
    Outcome::Hit(TrefoilFind {
        index,
        origin,
        t,
        class,
        verification_directions: verify.directions.iter().map(|d| d.direction).collect(),
        prism_residual: residual,
    })
}

struct BatchResult {
    samples: u64,
    skipped: u64,
    hits: u64,
    rejected: u64,
    finds: Vec<TrefoilFind>,
}

fn run_batch(curve: &PeriodicCurve, inv: Option<&InversionPoint>, budget: &SearchBudget, batch: u64) -> BatchResult {
    let mut rng = batch_rng(budget.seed, batch);
    let start = batch * BATCH_SIZE;
    let end = (start + BATCH_SIZE).min(budget.max_samples);
    let mut out = BatchResult { samples: 0, skipped: 0, hits: 0, rejected: 0, finds: Vec::new() };
    for index in start..end {
        let t = sample_tuple(&mut rng);
        out.samples += 1;
        match examine(curve, inv, t, index, FindOrigin::Sampled, budget.seed, &mut rng) {
            Outcome::Skip => out.skipped += 1,
            Outcome::Miss => {}
            Outcome::Rejected => {
                out.hits += 1;
                out.rejected += 1;
            }
            Outcome::Hit(f) => {
                out.hits += 1;
                out.finds.push(f);
            }
        }
    }
    out
}

fn refine(curve: &PeriodicCurve, inv: Option<&InversionPoint>, budget: &SearchBudget, parent: &TrefoilFind) -> Vec<TrefoilFind> {
    let mut rng = batch_rng(budget.seed ^ 0xa5a5_a5a5, parent.index);
    let normal = Normal::new(0.0, REFINE_SIGMA).expect("positive sigma");
    let mut out = Vec::new();
    for _ in 0..budget.refinement_steps {
        let w: [f64; 6] = std::array::from_fn(|k| parent.t[k] + normal.sample(&mut rng));
        let Ok((tuple, _)) = SixTuple::from_window(&w) else { continue };
        if let Outcome::Hit(f) = examine(curve, inv, tuple.t, parent.index, FindOrigin::Refined, budget.seed, &mut rng) {
            out.push(f);
        }
    }
    out
}

/// Random search for inscribed trefoil hexagons.
///
/// Batches run in parallel but are merged in index order, and the search
/// stops at the first sample index where the target is met, so the report
/// is a function of the seed alone.
pub fn find_inscribed_trefoils(curve: &PeriodicCurve, budget: &SearchBudget) -> Result<SearchReport> {
    if budget.max_samples == 0 {
        return Err(Error::InvalidArgument("budget must allow at least one sample".into()));
    }
    curve.validate()?;
    let inv = projection_for(curve);
    let inv = inv.as_ref();
    let batches = budget.max_samples.div_ceil(BATCH_SIZE);
    let round = (rayon::current_num_threads() as u64 * 2).max(4);

    let mut stats = SearchStats::default();
    let mut finds = Vec::new();
    let mut met = false;
    let mut next = 0;
    'rounds: while next < batches {
        let upper = (next + round).min(batches);
        let results: Vec<BatchResult> = (next..upper).into_par_iter().map(|b| run_batch(curve, inv, budget, b)).collect();
        for (b, res) in (next..upper).zip(results) {
            for f in &res.finds {
                match f.class {
                    KnotClass::TrefoilLeft => stats.left += 1,
                    KnotClass::TrefoilRight => stats.right += 1,
                    _ => {}
                }
                finds.push(f.clone());
                if budget.target.met(stats.left, stats.right) {
                    met = true;
                    // Count samples up to and including the stopping one.
                    let within = f.index - b * BATCH_SIZE + 1;
                    stats.samples += within;
                    let (hits, rejected, skipped) = recount(curve, inv, budget, b, within);
                    stats.prescreen_hits += hits;
                    stats.rejected += rejected;
                    stats.skipped += skipped;
                    break 'rounds;
                }
            }
            stats.samples += res.samples;
            stats.skipped += res.skipped;
            stats.prescreen_hits += res.hits;
            stats.rejected += res.rejected;
        }
        next = upper;
    }

    if budget.refinement_steps > 0 {
        let extra: Vec<Vec<TrefoilFind>> = finds.par_iter().map(|f| refine(curve, inv, budget, f)).collect();
        finds.extend(extra.into_iter().flatten());
    }
    Ok(SearchReport { finds, stats, target_met: met, budget_exhausted: !met })
}

/// Statistics for the first `within` samples of a batch.
fn recount(curve: &PeriodicCurve, inv: Option<&InversionPoint>, budget: &SearchBudget, batch: u64, within: u64) -> (u64, u64, u64) {
    let truncated = SearchBudget { max_samples: batch * BATCH_SIZE + within, ..*budget };
    let r = run_batch(curve, inv, &truncated, batch);
    (r.hits, r.rejected, r.skipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::builtin_curve;

    #[test]
    fn sampled_tuples_are_ordered() {
        let mut rng = batch_rng(3, 0);
        for _ in 0..1000 {
            let t = sample_tuple(&mut rng);
            assert!(t.windows(2).all(|w| w[0] <= w[1]) && t[0] >= 0.0 && t[5] < 1.0);
        }
    }

    #[test]
    fn batch_streams_differ() {
        let a = sample_tuple(&mut batch_rng(0, 0));
        let b = sample_tuple(&mut batch_rng(0, 1));
        assert_ne!(a, b);
    }

    #[test]
    fn round_unknot_has_no_finds() {
        let c = builtin_curve("round-unknot").unwrap();
        let r = find_inscribed_trefoils(&c, &SearchBudget::new(5000, 1, Target::Any)).unwrap();
        assert!(r.finds.is_empty() && r.budget_exhausted && !r.target_met);
        assert_eq!(r.stats.samples, 5000);
    }

    #[test]
    fn zero_budget_is_rejected() {
        let c = builtin_curve("round-unknot").unwrap();
        assert!(find_inscribed_trefoils(&c, &SearchBudget::new(0, 1, Target::Any)).is_err());
    }
}
