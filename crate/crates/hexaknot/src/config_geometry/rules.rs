//! Crossing rules on planar configurations and the height assignments that
//! satisfy them.
//!
//! A height assignment `f` lifts `pᵢ` to `pᵢ + fᵢ n`. At a crossing of edges
//! `e` and `e'` the lifted height on edge `e` is `(1 − α) f(e) + α f(e + 1)`
//! with `α` the crossing's fractional position along `e`. A rule `u < o`
//! requires the lift of edge `u` to pass below edge `o` there.

use serde::{Deserialize, Serialize};

use super::planar::{CrossingPattern, PlanarConfiguration};
use crate::diagram::ClosedPolygon;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub under: usize,
    pub over: usize,
}

const fn r(under: usize, over: usize) -> Rule {
    Rule { under, over }
}

/// Seven rules on the hexagram pattern.
pub const HEXAGRAM_RULES: [Rule; 7] = [r(1, 4), r(3, 1), r(6, 4), r(6, 3), r(3, 5), r(5, 2), r(6, 2)];
/// Rules satisfied by `−f ∘ σ_f` when `f` satisfies [`HEXAGRAM_RULES`].
pub const HEXAGRAM_REFLECTED_RULES: [Rule; 7] = [r(5, 2), r(2, 6), r(5, 3), r(6, 3), r(4, 6), r(1, 4), r(1, 3)];
/// Three rules on the nested pattern: edges 1, 5, 3 over edges 4, 2, 6.
pub const NESTED_RULES: [Rule; 3] = [r(4, 1), r(2, 5), r(6, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeightVariant {
    Direct,
    Reflected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    Identity,
    /// `f ∘ σ_r` with `σ_r = (16)(25)(34)`.
    Rotation,
    /// `−f ∘ σ_f` with `σ_f = (13)(46)`.
    Flip,
    /// Flip followed by rotation.
    FlipRotation,
}

impl Symmetry {
    pub fn variant(self) -> HeightVariant {
        match self {
            Symmetry::Identity | Symmetry::Rotation => HeightVariant::Direct,
            Symmetry::Flip | Symmetry::FlipRotation => HeightVariant::Reflected,
        }
    }
}

pub fn apply_symmetry(f: &[f64; 6], sym: Symmetry) -> [f64; 6] {
    let rot = |g: &[f64; 6]| -> [f64; 6] { std::array::from_fn(|i| g[5 - i]) };
    let flip = |g: &[f64; 6]| -> [f64; 6] {
        const SIGMA_F: [usize; 6] = [2, 1, 0, 5, 4, 3];
        std::array::from_fn(|i| -g[SIGMA_F[i]])
    };
    match sym {
        Symmetry::Identity => *f,
        Symmetry::Rotation => rot(f),
        Symmetry::Flip => flip(f),
        Symmetry::FlipRotation => rot(&flip(f)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum HeightCase {
    Case1,
    Case2,
    Case3,
    /// Linear lift vanishing on the given pair of diagonal points.
    Nested { zero_pair: (usize, usize) },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightAssignment {
    pub f: [f64; 6],
    pub epsilon: f64,
    pub epsilon_prime: f64,
    pub epsilon_double_prime: f64,
    /// Ratio realizing each "much smaller than" relation.
    pub rho: f64,
    pub case: HeightCase,
    pub symmetry: Symmetry,
    pub variant: HeightVariant,
}

impl HeightAssignment {
    /// Negated heights, which satisfy the mirrored rules.
    pub fn negated(&self) -> HeightAssignment {
        HeightAssignment { f: self.f.map(|x| -x), ..*self }
    }

    pub fn zero_set(&self) -> Vec<usize> {
        (0..6).filter(|&i| self.f[i] == 0.0).map(|i| i + 1).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.f.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

fn edge_height(f: &[f64; 6], e: usize, s: f64) -> f64 {
    (1.0 - s) * f[e - 1] + s * f[e % 6]
}

/// Whether every rule holds strictly; `mirrored` reverses all inequalities.
pub fn rules_hold(f: &[f64; 6], cfg: &PlanarConfiguration, rules: &[Rule], mirrored: bool) -> bool {
    rules.iter().all(|rule| {
        let (Some(su), Some(so)) = (cfg.crossing_param(rule.under, rule.over), cfg.crossing_param(rule.over, rule.under)) else {
            return false;
        };
        let hu = edge_height(f, rule.under, su);
        let ho = edge_height(f, rule.over, so);
        if mirrored {
            hu > ho
        } else {
            hu < ho
        }
    })
}

fn rules_for(pattern: &CrossingPattern, variant: HeightVariant) -> &'static [Rule] {
    match (pattern, variant) {
        (CrossingPattern::Hexagram, HeightVariant::Direct) => &HEXAGRAM_RULES,
        (CrossingPattern::Hexagram, HeightVariant::Reflected) => &HEXAGRAM_REFLECTED_RULES,
        (CrossingPattern::Nested, _) => &NESTED_RULES,
        (CrossingPattern::Other(_), _) => &[],
    }
}

/// Checks the rule set matching the configuration's pattern and the
/// assignment's variant. Configurations without a known pattern fail.
pub fn check_crossing_rules(f: &HeightAssignment, cfg: &PlanarConfiguration, mirrored: bool) -> bool {
    let rules = rules_for(&cfg.pattern, f.variant);
    !rules.is_empty() && rules_hold(&f.f, cfg, rules, mirrored)
}

/// Lifts `pᵢ` to `pᵢ + fᵢ n`.
pub fn lift_configuration(cfg: &PlanarConfiguration, f: &[f64; 6]) -> Result<ClosedPolygon> {
    ClosedPolygon::new((0..6).map(|i| cfg.points[i] + cfg.plane.normal * f[i]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaseParams {
    /// Largest height, relative to the configuration diameter.
    pub epsilon: f64,
    pub rho: f64,
    pub rho_max: f64,
}

impl Default for CaseParams {
    fn default() -> Self {
        CaseParams { epsilon: 0.05, rho: 100.0, rho_max: 1e6 }
    }
}

fn case_heights(case: HeightCase, ratio: f64, rho: f64) -> ([f64; 6], [f64; 3]) {
    match case {
        // (−ε′, +ε, 0, 0, +ε″, 0) with ε″ = ε/ρ
        HeightCase::Case1 => {
            let (e, e2) = (1.0, 1.0 / rho);
            let e1 = ratio;
            ([-e1, e, 0.0, 0.0, e2, 0.0], [e, e1, e2])
        }
        // (0, 0, −ε, 0, +ε′, −ε″) with ε = ε″/ρ
        HeightCase::Case2 => {
            let (e2, e) = (1.0, 1.0 / rho);
            let e1 = ratio;
            ([0.0, 0.0, -e, 0.0, e1, -e2], [e, e1, e2])
        }
        // (−ε′, 0, −ε, −ε, 0, −ε′) with ε < ε′
        HeightCase::Case3 => {
            let e = 1.0;
            let e1 = ratio;
            ([-e1, 0.0, -e, -e, 0.0, -e1], [e, e1, 0.0])
        }
        HeightCase::Nested { .. } => unreachable!("nested heights are solved, not tabulated"),
    }
}

fn zero_set_of(f: &[f64; 6]) -> Vec<usize> {
    (0..6).filter(|&i| f[i] == 0.0).map(|i| i + 1).collect()
}

/// Heights lifting the configuration to a trefoil while vanishing on the
/// one-sided set `u` (1-based indices). The result satisfies the
/// non-mirrored rules; negate it for the other chirality.
pub fn construct_case_heights(cfg: &PlanarConfiguration, u: &[usize], params: &CaseParams) -> Result<HeightAssignment> {
    if u.len() > 3 || u.iter().any(|&i| !(1..=6).contains(&i)) {
        return Err(Error::InvalidArgument(format!("one-sided set {u:?} must hold at most 3 indices in 1..=6")));
    }
    match cfg.pattern {
        CrossingPattern::Hexagram => hexagram_heights(cfg, u, params),
        CrossingPattern::Nested => nested_heights(cfg, u, params),
        CrossingPattern::Other(ref pairs) => Err(Error::MissingCrossing(format!("no rule set for crossing pairs {pairs:?}"))),
    }
}

fn hexagram_heights(cfg: &PlanarConfiguration, u: &[usize], params: &CaseParams) -> Result<HeightAssignment> {
    let syms = [Symmetry::Identity, Symmetry::Rotation, Symmetry::Flip, Symmetry::FlipRotation];
    let wide: Vec<f64> = (0..=40).map(|k| 10f64.powf(-2.0 + k as f64 * 0.1)).collect();
    let narrow: Vec<f64> = (1..=60).map(|k| 1.0 + k as f64 * 0.05).collect();
    let scale = params.epsilon * cfg.diameter;
    let mut orbit = Vec::new();
    for case in [HeightCase::Case1, HeightCase::Case2, HeightCase::Case3] {
        for sym in syms {
            let (f, _) = case_heights(case, 1.0, params.rho);
            let zeros = zero_set_of(&apply_symmetry(&f, sym));
            orbit.push(format!("{case:?}/{sym:?}: zeros {zeros:?}"));
            if !u.iter().all(|i| zeros.contains(i)) {
                continue;
            }
            let ratios = if case == HeightCase::Case3 { &narrow } else { &wide };
            let mut rho = params.rho;
            while rho <= params.rho_max {
                for &ratio in ratios {
                    let (base, eps) = case_heights(case, ratio, rho);
                    let g = apply_symmetry(&base, sym);
                    let norm = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    let g = g.map(|x| x * scale / norm);
                    let h = HeightAssignment {
                        f: g,
                        epsilon: eps[0] * scale / norm,
                        epsilon_prime: eps[1] * scale / norm,
                        epsilon_double_prime: eps[2] * scale / norm,
                        rho,
                        case,
                        symmetry: sym,
                        variant: sym.variant(),
                    };
                    if check_crossing_rules(&h, cfg, false) {
                        return Ok(h);
                    }
                }
                if case == HeightCase::Case3 {
                    break;
                }
                rho *= 2.0;
            }
        }
    }
    Err(Error::UncoveredCase(format!("U = {u:?}; orbit of the case zero sets: {}", orbit.join("; "))))
}

fn nested_heights(cfg: &PlanarConfiguration, u: &[usize], params: &CaseParams) -> Result<HeightAssignment> {
    let pairs = [(3, 6), (1, 4), (2, 5)];
    let Some(&pair) = pairs.iter().find(|(a, b)| u.iter().all(|i| i == a || i == b)) else {
        return Err(Error::UncoveredCase(format!("U = {u:?} is not inside a diagonal pair {pairs:?}")));
    };
    let free: Vec<usize> = (1..=6).filter(|&i| i != pair.0 && i != pair.1).collect();
    // Row per rule: coefficients of (lift of over edge − lift of under edge).
    let mut a = nalgebra::DMatrix::<f64>::zeros(NESTED_RULES.len(), free.len());
    for (row, rule) in NESTED_RULES.iter().enumerate() {
        let so = cfg.crossing_param(rule.over, rule.under).expect("nested crossing");
        let su = cfg.crossing_param(rule.under, rule.over).expect("nested crossing");
        for (e, s, sign) in [(rule.over, so, 1.0), (rule.under, su, -1.0)] {
            for (vertex, w) in [(e, 1.0 - s), (e % 6 + 1, s)] {
                if let Some(col) = free.iter().position(|&i| i == vertex) {
                    a[(row, col)] += sign * w;
                }
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let (smin, smax) = (svd.singular_values.min(), svd.singular_values.max());
    if smin <= 1e-10 * smax {
        return Err(Error::UncoveredCase(format!(
            "rules are degenerate with f{} = f{} = 0 (bad configuration)",
            pair.0, pair.1
        )));
    }
    // Minimum-norm solution of A x = 1, so every rule holds with margin 1.
    let ones = nalgebra::DVector::from_element(NESTED_RULES.len(), 1.0);
    let x = svd.solve(&ones, 1e-14).map_err(|e| Error::UncoveredCase(e.to_string()))?;
    let mut f = [0.0; 6];
    for (k, &i) in free.iter().enumerate() {
        f[i - 1] = x[k];
    }
    let norm = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = params.epsilon * cfg.diameter / norm;
    let f = f.map(|v| v * scale);
    Ok(HeightAssignment {
        f,
        epsilon: params.epsilon * cfg.diameter,
        epsilon_prime: 0.0,
        epsilon_double_prime: 0.0,
        rho: params.rho,
        case: HeightCase::Nested { zero_pair: pair },
        symmetry: Symmetry::Identity,
        variant: HeightVariant::Direct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config_geometry::synth;

    #[test]
    fn zero_heights_fail() {
        let cfg = PlanarConfiguration::from_points(synth::hexagram_points(&[0.0; 6], false)).unwrap();
        let h = HeightAssignment {
            f: [0.0; 6],
            epsilon: 0.0,
            epsilon_prime: 0.0,
            epsilon_double_prime: 0.0,
            rho: 100.0,
            case: HeightCase::Case1,
            symmetry: Symmetry::Identity,
            variant: HeightVariant::Direct,
        };
        assert!(!check_crossing_rules(&h, &cfg, false));
        assert!(!check_crossing_rules(&h, &cfg, true));
    }

    #[test]
    fn symmetries_are_involutions() {
        let f = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        for s in [Symmetry::Rotation, Symmetry::Flip] {
            assert_eq!(apply_symmetry(&apply_symmetry(&f, s), s), f);
        }
        assert_eq!(apply_symmetry(&f, Symmetry::Rotation), [6.0, 5.0, 4.0, 3.0, 2.0, 1.0]);
        assert_eq!(apply_symmetry(&f, Symmetry::Flip), [-3.0, -2.0, -1.0, -6.0, -5.0, -4.0]);
    }

    #[test]
    fn case_zero_sets() {
        let zs = |c| zero_set_of(&case_heights(c, 1.0, 100.0).0);
        assert_eq!(zs(HeightCase::Case1), vec![3, 4, 6]);
        assert_eq!(zs(HeightCase::Case2), vec![1, 2, 4]);
        assert_eq!(zs(HeightCase::Case3), vec![2, 5]);
    }
}
