use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config_geometry::{PrismConfiguration, PrismProblem, PrismSpace, SixTuple};
use crate::curves::{Ambient, InversionPoint, PeriodicCurve};
use crate::error::{Error, Result};

/// Parameters closer than this count as merged.
pub const MERGE_GAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub lambda0: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-10, max_iterations: 200, lambda0: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub iterations: usize,
    /// Residual norm after each accepted step, starting with the seed.
    pub history: Vec<f64>,
}

/// S³ curves are solved in ℝ⁴; ℝ³ curves are lifted to S³ through `e₄`,
/// where the solution set is a curve rather than a 3-fold.
pub fn default_space(curve: &PeriodicCurve) -> PrismSpace {
    match curve.ambient {
        Ambient::S3 => PrismSpace::Ambient,
        Ambient::R3 => PrismSpace::Lifted(InversionPoint::default()),
    }
}

fn ordering_violation(w: &[f64; 6]) -> Option<(usize, usize)> {
    for k in 0..5 {
        if w[k + 1] - w[k] < MERGE_GAP {
            return Some((k + 1, k + 2));
        }
    }
    if w[0] + 1.0 - w[5] < MERGE_GAP {
        return Some((6, 1));
    }
    None
}

pub fn solve_prism(curve: &PeriodicCurve, seed: &SixTuple, tol: f64) -> Result<PrismConfiguration> {
    let problem = PrismProblem { curve, space: default_space(curve) };
    let opts = SolveOptions { tol, ..SolveOptions::default() };
    solve_prism_in(&problem, &seed.t, &opts).map(|(c, _)| c)
}

/// Levenberg–Marquardt on the concurrency residual over a parameter window.
/// Steps that break the cyclic ordering are rejected like steps that
/// increase the residual.
pub fn solve_prism_in(problem: &PrismProblem, window: &[f64; 6], opts: &SolveOptions) -> Result<(PrismConfiguration, SolveStats)> {
    let (w, stats) = solve_window(problem, window, opts, None)?;
    Ok((problem.configuration(&w)?, stats))
}

/// Core iteration. With `constraint = Some((tau, y))` every step also keeps
/// `tau · (w − y) = 0`, which the continuation corrector uses.
pub(crate) fn solve_window(
    problem: &PrismProblem,
    window: &[f64; 6],
    opts: &SolveOptions,
    constraint: Option<(&DVector<f64>, &[f64; 6])>,
) -> Result<([f64; 6], SolveStats)> {
    if window.windows(2).any(|p| p[0] >= p[1]) || window[5] >= window[0] + 1.0 {
        return Err(Error::InvalidTuple(format!("seed is not an ordered window: {window:?}")));
    }
    let mut w = *window;
    let mut lambda = opts.lambda0;
    let (mut res, mut jac) = problem.residual_and_jacobian(&w)?;
    let mut stats = SolveStats { iterations: 0, history: vec![res.norm] };
    while res.norm >= opts.tol {
        if stats.iterations >= opts.max_iterations || lambda > 1e16 {
            return Err(Error::NoConvergence { iterations: stats.iterations, residual: res.norm });
        }
        stats.iterations += 1;
        let r = DVector::from_column_slice(&res.components);
        let (a, g) = match constraint {
            Some((tau, y)) => {
                let mut jj = DMatrix::zeros(jac.nrows() + 1, 6);
                jj.rows_mut(0, jac.nrows()).copy_from(&jac);
                jj.row_mut(jac.nrows()).copy_from(&tau.transpose());
                let mut rr = DVector::zeros(r.len() + 1);
                rr.rows_mut(0, r.len()).copy_from(&r);
                rr[r.len()] = (0..6).map(|k| tau[k] * (w[k] - y[k])).sum();
                (jj.transpose() * &jj, jj.transpose() * rr)
            }
            None => (jac.transpose() * &jac, jac.transpose() * &r),
        };
        let step = (&a + DMatrix::identity(6, 6) * lambda).lu().solve(&(-g));
        let Some(step) = step else {
            lambda *= 10.0;
            continue;
        };
        let trial: [f64; 6] = std::array::from_fn(|k| w[k] + step[k]);
        let ordered = trial.windows(2).all(|p| p[0] < p[1]) && trial[5] < trial[0] + 1.0;
        if !ordered {
            lambda *= 10.0;
            continue;
        }
        match problem.residual(&trial) {
            Ok(t) if t.norm < res.norm => {
                if let Some((i, j)) = ordering_violation(&trial) {
                    return Err(Error::OrderingCollapse(i, j));
                }
                w = trial;
                lambda = (lambda / 10.0).max(1e-15);
                (res, jac) = problem.residual_and_jacobian(&w)?;
                stats.history.push(res.norm);
            }
            _ => lambda *= 10.0,
        }
    }
    Ok((w, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config_geometry::{distance_to_equally_spaced, equally_spaced};
    use crate::curves::builtin_curve;

    #[test]
    fn seed_at_solution_is_a_fixed_point() {
        let g = builtin_curve("paper-trefoil").unwrap();
        let p = PrismProblem::ambient(&g);
        let t = equally_spaced(0.0);
        let (c, stats) = solve_prism_in(&p, &t.t, &SolveOptions::default()).unwrap();
        assert!(stats.iterations <= 1);
        assert!(distance_to_equally_spaced(&c.tuple) < 1e-12);
    }

    #[test]
    fn paper_seed_converges() {
        let g = builtin_curve("paper-trefoil").unwrap();
        let seed = SixTuple::new([0.01, 0.18, 0.33, 0.52, 0.66, 0.84]).unwrap();
        let c = solve_prism(&g, &seed, 1e-10).unwrap();
        assert!(c.residual < 1e-10);
        assert!(distance_to_equally_spaced(&c.tuple) < 1e-8, "{:?}", c.tuple);
    }

    #[test]
    fn accepted_steps_decrease_the_residual() {
        let g = builtin_curve("paper-trefoil").unwrap();
        let p = PrismProblem::ambient(&g);
        let (_, stats) = solve_prism_in(&p, &[0.02, 0.15, 0.35, 0.5, 0.69, 0.81], &SolveOptions::default()).unwrap();
        assert!(stats.history.windows(2).all(|h| h[1] < h[0]));
    }

    #[test]
    fn unordered_seed_is_rejected() {
        let g = builtin_curve("paper-trefoil").unwrap();
        let p = PrismProblem::ambient(&g);
        assert!(solve_prism_in(&p, &[0.2, 0.1, 0.3, 0.4, 0.5, 0.6], &SolveOptions::default()).is_err());
    }
}
