//! Oracles used by the integration tests. None of them call the library's
//! own implementations of the quantity they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use hexaknot::diagram::{ClosedPolygon, GaussCode};
use nalgebra::{DMatrix, DVector, Matrix2, Vector2, Vector3};
use rand::Rng;

pub type Poly = BTreeMap<i32, i64>;

fn add(p: &mut Poly, e: i32, c: i64) {
    let v = p.entry(e).or_insert(0);
    *v += c;
    if *v == 0 {
        p.remove(&e);
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            add(&mut out, ea + eb, ca * cb);
        }
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Kauffman bracket by brute-force state sum over the Gauss sequence.
///
/// Arc `k` leaves visit `k` and enters visit `k + 1`. Draw the over strand
/// west to east. For a positive crossing the under strand runs south to
/// north, for a negative one north to south. The A-regions are the ones swept
/// by turning the over strand counterclockwise (north-east and south-west),
/// and the A-smoothing merges them, joining north with west and south with
/// east.
pub fn bracket_oracle(code: &GaussCode) -> Poly {
    let sy = code.symbols();
    let m = sy.len();
    if m == 0 {
        return Poly::from([(0, 1)]);
    }
    let n = m / 2;
    // For each crossing: (arc in, arc out) of over and under strands.
    let mut over = vec![(0, 0); n];
    let mut under = vec![(0, 0); n];
    let mut sign = vec![0i8; n];
    for (k, s) in sy.iter().enumerate() {
        let arcs = ((k + m - 1) % m, k);
        if s.over {
            over[s.crossing] = arcs;
        } else {
            under[s.crossing] = arcs;
        }
        sign[s.crossing] = s.sign;
    }
    let mut total = Poly::new();
    for state in 0u32..(1 << n) {
        let mut parent: Vec<usize> = (0..m).collect();
        let mut a_count = 0i32;
        for c in 0..n {
            let (o_in, o_out) = over[c];
            let (u_in, u_out) = under[c];
            let (north, south) = if sign[c] > 0 { (u_out, u_in) } else { (u_in, u_out) };
            let (west, east) = (o_in, o_out);
            let a_smoothing = state & (1 << c) == 0;
            let pairs = if a_smoothing {
                a_count += 1;
                [(north, west), (south, east)]
            } else {
                [(north, east), (south, west)]
            };
            for (x, y) in pairs {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                parent[rx] = ry;
            }
        }
        let loops = (0..m).filter(|&x| find(&mut parent, x) == x).count();
        let b_count = n as i32 - a_count;
        // δ^(loops − 1), δ = −A² − A⁻²
        let delta = Poly::from([(2, -1), (-2, -1)]);
        let mut term = Poly::from([(a_count - b_count, 1)]);
        for _ in 1..loops {
            term = mul(&term, &delta);
        }
        for (e, c) in term {
            add(&mut total, e, c);
        }
    }
    total
}

/// Jones polynomial in `t = A⁻⁴` as `exponent → coefficient`.
pub fn jones_t_oracle(code: &GaussCode) -> Poly {
    let w: i32 = code.symbols().iter().filter(|s| s.over).map(|s| s.sign as i32).sum();
    let br = bracket_oracle(code);
    let mut out = Poly::new();
    for (e, c) in br {
        // (−A)^(−3w)
        let e2 = e - 3 * w;
        let c2 = if (3 * w).rem_euclid(2) == 1 { -c } else { c };
        assert_eq!(e2.rem_euclid(4), 0, "knot Jones exponents are multiples of 4");
        add(&mut out, -e2 / 4, c2);
    }
    out
}

fn derivative_at_one(p: &Poly, order: u32) -> i64 {
    p.iter()
        .map(|(&k, &c)| {
            let k = k as i64;
            let falling: i64 = (0..order as i64).map(|j| k - j).product();
            c * falling
        })
        .sum()
}

/// `a₂ = −V″(1)/6`.
pub fn a2_from_jones(v: &Poly) -> i64 {
    let d2 = derivative_at_one(v, 2);
    assert_eq!(d2 % 6, 0);
    -d2 / 6
}

/// `v₃ = −(V‴(1) + 3V″(1))/36`, normalized to `+1` on the right trefoil.
pub fn v3_from_jones(v: &Poly) -> i64 {
    let s = derivative_at_one(v, 3) + 3 * derivative_at_one(v, 2);
    assert_eq!(s % 36, 0);
    -s / 36
}

/// Conway polynomials from the skein relation `∇₊ − ∇₋ = z ∇₀`, as
/// coefficient vectors in `z`.
pub fn conway_torus_2n(n: usize) -> Vec<i64> {
    // T(2,n) switched at one crossing is T(2,n−2); smoothed it is T(2,n−1).
    let mut prev: Vec<i64> = vec![]; // T(2,0): two-component unlink
    let mut cur: Vec<i64> = vec![1]; // T(2,1): unknot
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let mut next = vec![0; cur.len() + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i] += c;
        }
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        while next.last() == Some(&0) {
            next.pop();
        }
        prev = cur;
        cur = next;
    }
    cur
}

pub fn conway_figure_eight() -> Vec<i64> {
    // Switching one crossing gives the unknot, smoothing it a negative Hopf
    // link: ∇ = 1 − z · z.
    let hopf = conway_torus_2n(2);
    let mut out = vec![1, 0, 0];
    for (i, c) in hopf.iter().enumerate() {
        out[i + 1] -= c;
    }
    out
}

pub fn z2(conway: &[i64]) -> i64 {
    conway.get(2).copied().unwrap_or(0)
}

/// Crossing parameters of two 2D segments, if they cross in their interiors.
pub fn segment_cross_2d(a0: Vector2<f64>, a1: Vector2<f64>, b0: Vector2<f64>, b1: Vector2<f64>) -> Option<(f64, f64)> {
    let m = Matrix2::from_columns(&[a1 - a0, b0 - b1]);
    let sol = m.try_inverse()? * (b0 - a0);
    (sol.x > 0.0 && sol.x < 1.0 && sol.y > 0.0 && sol.y < 1.0).then_some((sol.x, sol.y))
}

/// Projective concurrency defect of the diagonals `(1,4), (2,5), (3,6)`:
/// the smaller of the least-squares miss distance of a common point and the
/// spread of the three (unit) directions when they are parallel.
pub fn concurrency_oracle(points: &[DVector<f64>]) -> f64 {
    let d = points[0].len();
    let lines: Vec<(DVector<f64>, DVector<f64>)> = (0..3).map(|i| (points[i].clone(), (&points[i + 3] - &points[i]).normalize())).collect();
    // Common point: minimize Σ |(I − uuᵀ)(p − a)|².
    let mut m = DMatrix::<f64>::zeros(d, d);
    let mut rhs = DVector::<f64>::zeros(d);
    for (a, u) in &lines {
        let proj = DMatrix::<f64>::identity(d, d) - u * u.transpose();
        rhs += &proj * a;
        m += proj;
    }
    let finite = match m.clone().lu().solve(&rhs) {
        Some(p) => lines
            .iter()
            .map(|(a, u)| {
                let r = &p - a;
                (&r - u * u.dot(&r)).norm()
            })
            .fold(0.0, f64::max),
        None => f64::INFINITY,
    };
    let par = lines
        .iter()
        .map(|(_, u)| {
            let v = &lines[0].1;
            (u - v * u.dot(v).signum()).norm()
        })
        .fold(0.0, f64::max);
    finite.min(par)
}

pub fn random_hexagon<R: Rng + ?Sized>(rng: &mut R) -> ClosedPolygon {
    loop {
        let v: Vec<Vector3<f64>> = (0..6)
            .map(|_| Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if let Ok(p) = ClosedPolygon::new(v) {
            return p;
        }
    }
}
