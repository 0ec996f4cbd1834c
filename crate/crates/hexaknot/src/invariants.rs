//! Knot invariants of diagrams: Kauffman bracket, normalized Jones
//! polynomial and the Gauss-diagram invariants v₂ and v₃.
//!
//! The chirality references are the Jones polynomials of the right trefoil
//! (the standard 3-crossing diagram with writhe +3 under the sign rule of
//! [`crate::diagram`]) and of its mirror, stored in `fixtures/`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{polygonalize, Ambient, InversionPoint, PeriodicCurve};
use crate::diagram::{gauss_code, random_generic_diagram, writhe, ClosedPolygon, GaussCode, KnotDiagram};
use crate::error::{Error, Result};
use crate::poly::LaurentPoly;

/// State sums run over `2^c` states.
pub const MAX_BRACKET_CROSSINGS: usize = 20;
/// Directions used by [`classify_hexagon`].
pub const CLASSIFY_DIRECTIONS: usize = 5;
/// Directions used by [`a2_of_curve`] by default.
pub const A2_DIRECTIONS: usize = 7;

const RIGHT_TREFOIL_JSON: &str = include_str!("../fixtures/jones_trefoil_right.json");
const LEFT_TREFOIL_JSON: &str = include_str!("../fixtures/jones_trefoil_left.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KnotClass {
    Unknot,
    TrefoilLeft,
    TrefoilRight,
    Other,
}

impl KnotClass {
    pub fn is_trefoil(self) -> bool {
        matches!(self, KnotClass::TrefoilLeft | KnotClass::TrefoilRight)
    }

    pub fn mirror(self) -> KnotClass {
        match self {
            KnotClass::TrefoilLeft => KnotClass::TrefoilRight,
            KnotClass::TrefoilRight => KnotClass::TrefoilLeft,
            k => k,
        }
    }
}

impl fmt::Display for KnotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnotClass::Unknot => "Unknot",
            KnotClass::TrefoilLeft => "Trefoil(Left)",
            KnotClass::TrefoilRight => "Trefoil(Right)",
            KnotClass::Other => "Other",
        })
    }
}

/// Pinned Jones polynomial of the right trefoil, in the variable `A`.
pub fn right_trefoil_jones() -> &'static LaurentPoly {
    static CELL: OnceLock<LaurentPoly> = OnceLock::new();
    CELL.get_or_init(|| LaurentPoly::from_json('A', RIGHT_TREFOIL_JSON).expect("fixture parses"))
}

pub fn left_trefoil_jones() -> &'static LaurentPoly {
    static CELL: OnceLock<LaurentPoly> = OnceLock::new();
    CELL.get_or_init(|| LaurentPoly::from_json('A', LEFT_TREFOIL_JSON).expect("fixture parses"))
}

/// Class of a normalized Jones polynomial against the pinned references.
pub fn class_of_jones(j: &LaurentPoly) -> KnotClass {
    if j.is_one() {
        KnotClass::Unknot
    } else if j == right_trefoil_jones() {
        KnotClass::TrefoilRight
    } else if j == left_trefoil_jones() {
        KnotClass::TrefoilLeft
    } else {
        KnotClass::Other
    }
}

/// Planar-diagram crossings `[a, b, c, d]` over arcs, counterclockwise from
/// the incoming under-arc. Arc `k` runs from visit `k` to visit `k + 1`.
fn pd_crossings(code: &GaussCode) -> Vec<[usize; 4]> {
    let m = code.symbols().len();
    let c = code.crossing_count();
    let mut over = vec![0; c];
    let mut under = vec![0; c];
    for (k, s) in code.symbols().iter().enumerate() {
        if s.over {
            over[s.crossing] = k;
        } else {
            under[s.crossing] = k;
        }
    }
    let signs = code.signs();
    (0..c)
        .map(|i| {
            let (u, o) = (under[i], over[i]);
            let (u_in, u_out, o_in, o_out) = ((u + m - 1) % m, u, (o + m - 1) % m, o);
            if signs[i] > 0 {
                [u_in, o_out, u_out, o_in]
            } else {
                [u_in, o_in, u_out, o_out]
            }
        })
        .collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Kauffman bracket `⟨D⟩` in `A`, with `⟨O⟩ = 1`.
pub fn kauffman_bracket_code(code: &GaussCode) -> Result<LaurentPoly> {
    let c = code.crossing_count();
    if c > MAX_BRACKET_CROSSINGS {
        return Err(Error::TooManyCrossings(c));
    }
    if c == 0 {
        return Ok(LaurentPoly::one('A'));
    }
    let m = 2 * c;
    let xs = pd_crossings(code);
    // tally[a][loops]: number of states with `a` A-smoothings and that many loops.
    let mut tally = vec![vec![0i64; m + 1]; c + 1];
    let mut parent = vec![0usize; m];
    for state in 0u32..(1u32 << c) {
        for (k, p) in parent.iter_mut().enumerate() {
            *p = k;
        }
        let mut loops = m;
        let mut join = |parent: &mut [usize], a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra] = rb;
                loops -= 1;
            }
        };
        for (k, &[a, b, cc, d]) in xs.iter().enumerate() {
            if state >> k & 1 == 1 {
                join(&mut parent, a, b);
                join(&mut parent, cc, d);
            } else {
                join(&mut parent, a, d);
                join(&mut parent, b, cc);
            }
        }
        tally[state.count_ones() as usize][loops] += 1;
    }
    let delta = LaurentPoly::from_terms('A', [(2, -1), (-2, -1)]);
    let mut powers = vec![LaurentPoly::one('A')];
    for k in 1..=m {
        let next = &powers[k - 1] * &delta;
        powers.push(next);
    }
    let mut out = LaurentPoly::zero('A');
    for (a, row) in tally.iter().enumerate() {
        for (loops, &count) in row.iter().enumerate() {
            if count != 0 {
                let exp = 2 * a as i32 - c as i32;
                let term = powers[loops - 1].shift(exp);
                out = &out + &(&term * &LaurentPoly::monomial('A', 0, count));
            }
        }
    }
    Ok(out)
}

pub fn kauffman_bracket(diagram: &KnotDiagram) -> Result<LaurentPoly> {
    kauffman_bracket_code(&gauss_code(diagram))
}

/// `(−A)^(−3w) ⟨D⟩`, an ambient isotopy invariant.
pub fn jones_normalized_code(code: &GaussCode) -> Result<LaurentPoly> {
    let w = writhe(code);
    let bracket = kauffman_bracket_code(code)?;
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(&bracket * &LaurentPoly::monomial('A', -3 * w, sign))
}

pub fn jones_normalized(diagram: &KnotDiagram) -> Result<LaurentPoly> {
    jones_normalized_code(&gauss_code(diagram))
}

/// Gauss-diagram pattern such as `"0O1U0U1O"`: crossing labels by first
/// appearance with over/under flags, read from the basepoint.
struct ChordPattern {
    size: usize,
    key: u64,
}

impl ChordPattern {
    fn parse(s: &str) -> ChordPattern {
        let b = s.as_bytes();
        let mut key = 0u64;
        let mut size = 0;
        for pair in b.chunks(2) {
            let label = (pair[0] - b'0') as u64;
            size = size.max(label as usize + 1);
            key = key * 8 + label * 2 + u64::from(pair[1] == b'O');
        }
        ChordPattern { size, key }
    }
}

const V2_PATTERNS: [&str; 1] = ["0O1U0U1O"];
const V3_PATTERNS: [&str; 5] = ["0O1O0U2O1U2U", "0O1U2O0U1O2U", "0U1U2O0O2U1O", "0U1O2U0O1U2O", "0U1O2O1U0O2U"];

/// Sum over `size`-subsets of crossings whose restricted code matches one of
/// the patterns, weighted by the product of their signs.
fn chord_pattern_sum(code: &GaussCode, patterns: &[&str]) -> i64 {
    let pats: Vec<ChordPattern> = patterns.iter().map(|p| ChordPattern::parse(p)).collect();
    let size = pats[0].size;
    debug_assert!(pats.iter().all(|p| p.size == size));
    let c = code.crossing_count();
    if c < size {
        return 0;
    }
    let mut pos = vec![[0usize; 2]; c];
    for (k, s) in code.symbols().iter().enumerate() {
        pos[s.crossing][usize::from(s.over)] = k;
    }
    let signs = code.signs();
    let mut total = 0i64;
    let mut subset: Vec<usize> = (0..size).collect();
    let mut visits: Vec<(usize, usize, bool)> = Vec::with_capacity(2 * size);
    loop {
        visits.clear();
        for &id in &subset {
            visits.push((pos[id][1], id, true));
            visits.push((pos[id][0], id, false));
        }
        visits.sort_unstable();
        let mut labels = [usize::MAX; 3];
        let mut next = 0;
        let mut key = 0u64;
        for &(_, id, over) in &visits {
            let slot = subset.iter().position(|&s| s == id).unwrap();
            if labels[slot] == usize::MAX {
                labels[slot] = next;
                next += 1;
            }
            key = key * 8 + labels[slot] as u64 * 2 + u64::from(over);
        }
        if pats.iter().any(|p| p.key == key) {
            total += subset.iter().map(|&id| signs[id] as i64).product::<i64>();
        }
        // Next subset in lexicographic order.
        let mut i = size;
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            if subset[i] < c - size + i {
                subset[i] += 1;
                for j in i + 1..size {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Degree-2 invariant; equals the z² coefficient of the Conway polynomial.
pub fn v2(code: &GaussCode) -> i64 {
    chord_pattern_sum(code, &V2_PATTERNS)
}

/// Degree-3 invariant; +1 on the right trefoil and antisymmetric under
/// mirroring.
pub fn v3(code: &GaussCode) -> i64 {
    chord_pattern_sum(code, &V3_PATTERNS)
}

/// Invariants read off one projection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub direction: [f64; 3],
    pub crossings: usize,
    pub writhe: i32,
    pub jones: String,
    pub v2: i64,
    pub v3: i64,
    pub class: KnotClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: KnotClass,
    pub directions: Vec<DirectionReport>,
}

pub fn direction_report(diagram: &KnotDiagram) -> Result<DirectionReport> {
    let code = gauss_code(diagram);
    let jones = jones_normalized_code(&code)?;
    Ok(DirectionReport {
        direction: [diagram.direction.x, diagram.direction.y, diagram.direction.z],
        crossings: code.crossing_count(),
        writhe: writhe(&code),
        jones: jones.to_string(),
        v2: v2(&code),
        v3: v3(&code),
        class: class_of_jones(&jones),
    })
}

/// Classifies a polygon by unanimous vote over `k` generic directions drawn
/// from `seed`.
pub fn classify_polygon(poly: &ClosedPolygon, k: usize, seed: u64) -> Result<Classification> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut directions = Vec::with_capacity(k);
    for _ in 0..k {
        let d = random_generic_diagram(poly, &mut rng)?;
        directions.push(direction_report(&d)?);
    }
    let class = directions[0].class;
    if let Some(bad) = directions.iter().find(|r| r.class != class) {
        return Err(Error::InconsistentProjections(format!("{} vs {}", class, bad.class)));
    }
    Ok(Classification { class, directions })
}

pub fn classify_hexagon_report(poly: &ClosedPolygon, seed: u64) -> Result<Classification> {
    if poly.len() != 6 {
        return Err(Error::NotAHexagon(poly.len()));
    }
    classify_polygon(poly, CLASSIFY_DIRECTIONS, seed)
}

/// Unknot or trefoil with handedness; stick number 6 rules out anything else.
pub fn classify_hexagon(poly: &ClosedPolygon, seed: u64) -> Result<KnotClass> {
    classify_hexagon_report(poly, seed).map(|c| c.class)
}

/// Most frequent v₂ over `directions` generic projections; ties are errors.
pub fn modal_v2(poly: &ClosedPolygon, directions: usize, seed: u64) -> Result<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for _ in 0..directions.max(1) {
        let d = random_generic_diagram(poly, &mut rng)?;
        *counts.entry(v2(&gauss_code(&d))).or_default() += 1;
    }
    let best = counts.values().copied().max().unwrap_or(0);
    let mut modes: Vec<i64> = counts.iter().filter(|(_, &n)| n == best).map(|(&v, _)| v).collect();
    modes.sort_unstable();
    if modes.len() > 1 {
        return Err(Error::UnstableInvariant(format!("tied v2 values {modes:?} across directions")));
    }
    Ok(modes[0])
}

/// Quadratic Conway coefficient of a smooth curve, from polygonal
/// approximations at `resolution` and `2 * resolution` vertices.
pub fn a2_of_curve(
    curve: &PeriodicCurve,
    resolution: usize,
    inv: Option<&InversionPoint>,
    directions: usize,
    seed: u64,
) -> Result<i64> {
    if resolution < 24 {
        return Err(Error::InvalidArgument(format!("resolution {resolution} is below 24")));
    }
    let default_inv = InversionPoint::default();
    let inv = match (curve.ambient, inv) {
        (Ambient::S3, None) => Some(&default_inv),
        (_, i) => i,
    };
    let coarse = modal_v2(&polygonalize(curve, resolution, inv)?, directions, seed)?;
    let fine = modal_v2(&polygonalize(curve, 2 * resolution, inv)?, directions, seed)?;
    if coarse != fine {
        return Err(Error::UnstableInvariant(format!(
            "v2 = {coarse} at {resolution} vertices but {fine} at {}",
            2 * resolution
        )));
    }
    Ok(coarse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_code() {
        let c = GaussCode::default();
        assert!(kauffman_bracket_code(&c).unwrap().is_one());
        assert_eq!(v2(&c), 0);
        assert_eq!(v3(&c), 0);
    }

    #[test]
    fn standard_trefoil_code() {
        let c = GaussCode::parse("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
        assert_eq!(&jones_normalized_code(&c).unwrap(), right_trefoil_jones());
        assert_eq!(&jones_normalized_code(&c.mirror()).unwrap(), left_trefoil_jones());
        assert_eq!(v2(&c), 1);
        assert_eq!(v3(&c), 1);
        assert_eq!(v3(&c.mirror()), -1);
    }

    #[test]
    fn one_crossing_kink_is_unknot() {
        let c = GaussCode::parse("O1+ U1+").unwrap();
        let j = jones_normalized_code(&c).unwrap();
        assert!(j.is_one());
        assert_eq!(kauffman_bracket_code(&c).unwrap(), LaurentPoly::monomial('A', 3, -1));
    }

    #[test]
    fn references_are_mirrors() {
        assert_eq!(&right_trefoil_jones().mirror(), left_trefoil_jones());
    }

    #[test]
    fn too_many_crossings() {
        let mut s = String::new();
        // Twisted unknot with 21 kinks.
        for i in 1..=21 {
            s.push_str(&format!("O{i}+ U{i}+ "));
        }
        let c = GaussCode::parse(&s).unwrap();
        assert!(matches!(kauffman_bracket_code(&c), Err(Error::TooManyCrossings(21))));
    }
}
