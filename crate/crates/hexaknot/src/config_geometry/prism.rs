//! Projective concurrency of the diagonals `(x₁,x₄)`, `(x₂,x₅)`, `(x₃,x₆)`.
//!
//! Each point is lifted to normalized homogeneous coordinates
//! `X = (x, 1)/|(x, 1)|`. The diagonals concur (possibly at infinity) iff
//!
//! ```text
//! B = [ X₁ X₄ −X₂ −X₅  0   0  ]
//!     [ X₁ X₄  0   0  −X₃ −X₆ ]
//! ```
//!
//! has a kernel. The residual vector is `B v` for the right singular vector
//! `v` of the smallest singular value, so its norm is `σ_min(B)`.

use nalgebra::{DMatrix, DVector, Vector4};
use serde::{Deserialize, Serialize};

use super::SixTuple;
use crate::curves::{stereographic_unproject, Ambient, InversionPoint, PeriodicCurve};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Apex {
    Finite(Vec<f64>),
    /// Diagonals are parallel to this unit direction.
    AtInfinity(Vec<f64>),
}

impl Apex {
    /// `Some(true)` when a finite apex lies strictly inside the unit ball.
    pub fn inside_unit_ball(&self) -> Option<bool> {
        match self {
            Apex::Finite(p) => Some(p.iter().map(|x| x * x).sum::<f64>() < 1.0),
            Apex::AtInfinity(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrencyResidual {
    pub components: Vec<f64>,
    pub norm: f64,
    pub apex: Apex,
    /// Kernel vector of `B`, sign-fixed.
    pub kernel: DVector<f64>,
}

fn homogeneous(x: &DVector<f64>) -> DVector<f64> {
    let mut h = DVector::zeros(x.len() + 1);
    h.rows_mut(0, x.len()).copy_from(x);
    h[x.len()] = 1.0;
    let n = h.norm();
    h / n
}

/// Residual of the six points `x₁..x₆` (any common dimension).
pub fn concurrency_residual(points: &[DVector<f64>]) -> Result<ConcurrencyResidual> {
    concurrency_residual_aligned(points, None)
}

/// As [`concurrency_residual`], with the kernel sign aligned to `reference`.
pub fn concurrency_residual_aligned(points: &[DVector<f64>], reference: Option<&DVector<f64>>) -> Result<ConcurrencyResidual> {
    assert_eq!(points.len(), 6, "six points expected");
    for i in 0..3 {
        if (&points[i] - &points[i + 3]).norm() < 1e-12 {
            return Err(Error::DegenerateChord(i + 1, i + 4));
        }
    }
    let h: Vec<DVector<f64>> = points.iter().map(homogeneous).collect();
    let m = h[0].len();
    let mut b = DMatrix::zeros(2 * m, 6);
    for r in 0..2 {
        b.view_mut((r * m, 0), (m, 1)).copy_from(&h[0]);
        b.view_mut((r * m, 1), (m, 1)).copy_from(&h[3]);
    }
    b.view_mut((0, 2), (m, 1)).copy_from(&(-&h[1]));
    b.view_mut((0, 3), (m, 1)).copy_from(&(-&h[4]));
    b.view_mut((m, 4), (m, 1)).copy_from(&(-&h[2]));
    b.view_mut((m, 5), (m, 1)).copy_from(&(-&h[5]));

    let svd = b.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let k = svd.singular_values.imin();
    let mut v: DVector<f64> = vt.row(k).transpose();
    let flip = match reference {
        Some(r) => v.dot(r) < 0.0,
        None => v[v.iamax()] < 0.0,
    };
    if flip {
        v = -v;
    }
    let r = &b * &v;
    let p = &h[0] * v[0] + &h[3] * v[1];
    let d = m - 1;
    let w = p[d];
    let apex = if w.abs() > 1e-9 * p.norm() {
        Apex::Finite(p.rows(0, d).iter().map(|x| x / w).collect())
    } else {
        let dir = p.rows(0, d).into_owned();
        let n = dir.norm();
        Apex::AtInfinity(dir.iter().map(|x| x / n).collect())
    };
    Ok(ConcurrencyResidual { norm: r.norm(), components: r.iter().copied().collect(), apex, kernel: v })
}

/// Where the six points live while measuring concurrency.
#[derive(Clone, Debug, PartialEq)]
pub enum PrismSpace {
    /// The curve's own ambient space (ℝ³ or ℝ⁴).
    Ambient,
    /// ℝ³ curves lifted to S³ by inverse stereographic projection.
    Lifted(InversionPoint),
}

#[derive(Clone, Debug)]
pub struct PrismProblem<'a> {
    pub curve: &'a PeriodicCurve,
    pub space: PrismSpace,
}

impl<'a> PrismProblem<'a> {
    pub fn ambient(curve: &'a PeriodicCurve) -> Self {
        PrismProblem { curve, space: PrismSpace::Ambient }
    }

    pub fn lifted(curve: &'a PeriodicCurve, inv: InversionPoint) -> Self {
        PrismProblem { curve, space: PrismSpace::Lifted(inv) }
    }

    pub fn dim(&self) -> usize {
        match (&self.space, self.curve.ambient) {
            (PrismSpace::Lifted(_), Ambient::R3) => 4,
            (_, a) => a.dim(),
        }
    }

    /// Residual codimension: `2(d+1) − 5`.
    pub fn codim(&self) -> usize {
        2 * (self.dim() + 1) - 5
    }

    pub fn point(&self, t: f64) -> DVector<f64> {
        match (&self.space, self.curve.ambient) {
            (PrismSpace::Lifted(inv), Ambient::R3) => {
                let x: Vector4<f64> = stereographic_unproject(&self.curve.eval3(t), inv);
                DVector::from_column_slice(x.as_slice())
            }
            _ => self.curve.eval(t),
        }
    }

    pub fn points(&self, t: &[f64; 6]) -> Vec<DVector<f64>> {
        t.iter().map(|&s| self.point(s)).collect()
    }

    pub fn residual(&self, t: &[f64; 6]) -> Result<ConcurrencyResidual> {
        concurrency_residual(&self.points(t))
    }

    pub fn residual_aligned(&self, t: &[f64; 6], reference: Option<&DVector<f64>>) -> Result<ConcurrencyResidual> {
        concurrency_residual_aligned(&self.points(t), reference)
    }

    /// Residual and central-difference Jacobian (columns per parameter).
    pub fn residual_and_jacobian(&self, t: &[f64; 6]) -> Result<(ConcurrencyResidual, DMatrix<f64>)> {
        let base = self.residual(t)?;
        let h = 1e-7;
        let mut jac = DMatrix::zeros(base.components.len(), 6);
        for k in 0..6 {
            let mut tp = *t;
            let mut tm = *t;
            tp[k] += h;
            tm[k] -= h;
            let rp = self.residual_aligned(&tp, Some(&base.kernel))?;
            let rm = self.residual_aligned(&tm, Some(&base.kernel))?;
            for (i, (a, b)) in rp.components.iter().zip(&rm.components).enumerate() {
                jac[(i, k)] = (a - b) / (2.0 * h);
            }
        }
        Ok((base, jac))
    }

    /// Packages a solution as a configuration with canonical labels.
    pub fn configuration(&self, window: &[f64; 6]) -> Result<PrismConfiguration> {
        let (tuple, shift) = SixTuple::from_window(window)?;
        let res = self.residual(&tuple.t)?;
        let points = self.points(&tuple.t);
        Ok(PrismConfiguration {
            tuple,
            shift,
            lines: [(0, 3), (1, 4), (2, 5)],
            points: points.iter().map(|p| p.iter().copied().collect()).collect(),
            residual: res.norm,
            apex: res.apex,
            degenerate: affine_rank(&points) < 3,
        })
    }
}

/// Dimension of the affine span of `points`, relative tolerance 1e-9.
pub fn affine_rank(points: &[DVector<f64>]) -> usize {
    let n = points.len();
    let d = points[0].len();
    let mean = points.iter().fold(DVector::zeros(d), |a, p| a + p) / n as f64;
    let m = DMatrix::from_fn(n, d, |i, j| points[i][j] - mean[j]);
    let s = m.svd(false, false).singular_values;
    let smax = s.max();
    s.iter().filter(|&&x| x > 1e-9 * smax.max(1e-300)).count()
}

/// Residual of a tuple on a curve in its ambient space.
pub fn prism_residual(curve: &PeriodicCurve, tuple: &SixTuple) -> Result<ConcurrencyResidual> {
    PrismProblem::ambient(curve).residual(&tuple.t)
}

/// Six points whose diagonals concur.
///
/// Labels are canonical (sorted parameters in `[0, 1)`), so configurations
/// related by the cyclic relabeling `k ↦ k + 1` compare equal; `shift`
/// records how many relabelings were undone to reach the canonical form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrismConfiguration {
    pub tuple: SixTuple,
    pub shift: usize,
    pub lines: [(usize, usize); 3],
    pub points: Vec<Vec<f64>>,
    pub residual: f64,
    pub apex: Apex,
    /// The six points span less than three dimensions (e.g. a planar
    /// circle), where concurrency is not a codimension-5 condition.
    #[serde(default)]
    pub degenerate: bool,
}

impl PrismConfiguration {
    /// Same cyclic-shift class: equal canonical tuples within `tol`.
    pub fn same_class(&self, other: &PrismConfiguration, tol: f64) -> bool {
        self.tuple.t.iter().zip(&other.tuple.t).all(|(a, b)| {
            let d = a - b;
            (d - d.round()).abs() <= tol
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::builtin_curve;
    use crate::config_geometry::equally_spaced;

    #[test]
    fn paper_trefoil_equally_spaced_is_concurrent_at_infinity() {
        let g = builtin_curve("paper-trefoil").unwrap();
        let r = prism_residual(&g, &equally_spaced(0.0)).unwrap();
        assert!(r.norm < 1e-12, "{}", r.norm);
        assert!(matches!(r.apex, Apex::AtInfinity(_)));
        assert_eq!(r.components.len(), 10);
    }

    #[test]
    fn perturbed_tuple_is_not_concurrent() {
        let g = builtin_curve("paper-trefoil").unwrap();
        let t = SixTuple::new([0.0, 1.0 / 6.0 + 0.03, 2.0 / 6.0, 3.0 / 6.0, 4.0 / 6.0, 5.0 / 6.0]).unwrap();
        assert!(prism_residual(&g, &t).unwrap().norm > 1e-4);
    }

    #[test]
    fn finite_apex_is_recovered() {
        let p = DVector::from_vec(vec![0.3, -0.2, 1.5]);
        let dirs = [[1.0, 0.0, 0.2], [0.0, 1.0, -0.4], [0.5, 0.5, 1.0]];
        let mut pts = vec![DVector::zeros(3); 6];
        for (i, d) in dirs.iter().enumerate() {
            let d = DVector::from_column_slice(d);
            pts[i] = &p + &d * 1.0;
            pts[i + 3] = &p + &d * 2.5;
        }
        let r = concurrency_residual(&pts).unwrap();
        assert!(r.norm < 1e-12);
        match r.apex {
            Apex::Finite(a) => assert!((DVector::from_vec(a) - p).norm() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coincident_chord_endpoints() {
        let pts = vec![DVector::zeros(3); 6];
        assert!(matches!(concurrency_residual(&pts), Err(Error::DegenerateChord(1, 4))));
    }
}
