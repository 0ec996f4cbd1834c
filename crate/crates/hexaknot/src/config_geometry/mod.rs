//! Configurations of six points on a curve: the prism concurrency residual,
//! planar configurations with their crossing data, and height assignments
//! that lift a planar hexagon to a trefoil.

mod planar;
mod prism;
mod rules;
pub mod synth;

pub use planar::{
    classify_planar_config, config_theta, epsilon_rotate, is_bad_configuration, one_sidedness, segment_data,
    ConfigType, CrossingPattern, NestedLengths, PlanarConfiguration, PlanarCrossing, Plane, SegmentData, Sidedness,
};
pub use prism::{affine_rank, concurrency_residual, prism_residual, Apex, ConcurrencyResidual, PrismConfiguration, PrismProblem, PrismSpace};
pub use rules::{
    apply_symmetry, check_crossing_rules, construct_case_heights, lift_configuration, rules_hold, CaseParams, HeightAssignment,
    HeightCase, HeightVariant, Rule, Symmetry, HEXAGRAM_REFLECTED_RULES, HEXAGRAM_RULES, NESTED_RULES,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered parameters `0 ≤ t₁ < … < t₆ < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SixTuple {
    pub t: [f64; 6],
}

impl SixTuple {
    pub fn new(t: [f64; 6]) -> Result<Self> {
        if !t.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidTuple("non-finite parameter".into()));
        }
        if t[0] < 0.0 || t[5] >= 1.0 {
            return Err(Error::InvalidTuple(format!("parameters must lie in [0, 1): {t:?}")));
        }
        if t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTuple(format!("parameters must increase strictly: {t:?}")));
        }
        Ok(SixTuple { t })
    }

    /// Normalizes a window `t₁ < … < t₆ < t₁ + 1` of arbitrary offset:
    /// reduces mod 1 and rotates the labels so the result is sorted.
    /// Returns the tuple and the number of label shifts applied.
    pub fn from_window(w: &[f64; 6]) -> Result<(Self, usize)> {
        if w.windows(2).any(|p| p[0] >= p[1]) || w[5] >= w[0] + 1.0 {
            return Err(Error::InvalidTuple(format!("not an ordered window: {w:?}")));
        }
        let reduced: Vec<f64> = w.iter().map(|x| x.rem_euclid(1.0)).collect();
        let start = (0..6).min_by(|&a, &b| reduced[a].total_cmp(&reduced[b])).unwrap();
        let mut t = [0.0; 6];
        for (k, slot) in t.iter_mut().enumerate() {
            *slot = reduced[(start + k) % 6];
        }
        // Rounding can push a value up to exactly 1.0.
        for x in t.iter_mut() {
            if *x >= 1.0 {
                *x -= 1.0;
            }
        }
        Ok((SixTuple::new(t)?, start))
    }

    /// Relabels `(t₁, …, t₆) → (t₂, …, t₆, t₁ + 1)` as a window.
    pub fn shifted_window(&self) -> [f64; 6] {
        let t = self.t;
        [t[1], t[2], t[3], t[4], t[5], t[0] + 1.0]
    }

    pub fn min_gap(&self) -> f64 {
        let t = self.t;
        let mut g = t[0] + 1.0 - t[5];
        for k in 0..5 {
            g = g.min(t[k + 1] - t[k]);
        }
        g
    }
}

/// Equally spaced tuple `(s, s + 1/6, …, s + 5/6)` reduced to `[0, 1)`.
pub fn equally_spaced(s: f64) -> SixTuple {
    let w: [f64; 6] = std::array::from_fn(|k| s + k as f64 / 6.0);
    SixTuple::from_window(&w).expect("equally spaced window").0
}

/// Max parameter deviation between `t` and the nearest equally spaced tuple,
/// after removing the common offset (mod 1/6).
pub fn distance_to_equally_spaced(t: &SixTuple) -> f64 {
    // Circular mean of 6t on the unit circle gives the offset.
    let (mut sx, mut sy) = (0.0, 0.0);
    for (k, x) in t.t.iter().enumerate() {
        let phase = std::f64::consts::TAU * 6.0 * (x - k as f64 / 6.0);
        sx += phase.cos();
        sy += phase.sin();
    }
    let s = sy.atan2(sx) / (std::f64::consts::TAU * 6.0);
    let reference = equally_spaced(s);
    let mut best = f64::INFINITY;
    for rot in 0..6 {
        let mut worst: f64 = 0.0;
        for k in 0..6 {
            let d = t.t[k] - reference.t[(k + rot) % 6];
            let d = d - d.round();
            worst = worst.max(d.abs());
        }
        best = best.min(worst);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_validation() {
        assert!(SixTuple::new([0.0, 0.1, 0.2, 0.3, 0.4, 0.5]).is_ok());
        assert!(SixTuple::new([0.0, 0.1, 0.1, 0.3, 0.4, 0.5]).is_err());
        assert!(SixTuple::new([0.0, 0.1, 0.2, 0.3, 0.4, 1.0]).is_err());
    }

    #[test]
    fn window_normalization() {
        let (t, shift) = SixTuple::from_window(&[0.5, 0.6, 0.7, 0.9, 1.1, 1.2]).unwrap();
        assert_eq!(shift, 4);
        assert!((t.t[0] - 0.1).abs() < 1e-12 && (t.t[5] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn equally_spaced_distance() {
        let t = equally_spaced(0.03);
        assert!(distance_to_equally_spaced(&t) < 1e-12);
        let mut p = t;
        p.t[2] += 0.01;
        assert!((distance_to_equally_spaced(&p) - 0.01).abs() < 3e-3);
    }
}
