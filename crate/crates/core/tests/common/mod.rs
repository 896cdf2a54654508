//! Independent oracles and random fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod suites;

use num::{BigInt, Zero};
use proptest::prelude::*;
use toricap::domains::ToricRegion2D;
use toricap::geometry::Point2;
use toricap::rational::{int, rat, Rational};

/// k-th smallest of `{ m·a_i : m ≥ 1 }` by listing `m ≤ k` for every axis.
pub fn brute_nk(axes: &[Rational], k: usize) -> Rational {
    let mut all = Vec::new();
    for a in axes {
        for m in 1..=k as i64 {
            all.push(a * int(m));
        }
    }
    all.sort();
    all[k - 1].clone()
}

/// First `horizon + 1` sorted values of `{ m·a + n·b : m, n ≥ 0 }`.
pub fn brute_ellipsoid_ech(a: &Rational, b: &Rational, horizon: usize) -> Vec<Rational> {
    let mut all = Vec::new();
    let top = horizon as i64 + 1;
    for m in 0..=top {
        for n in 0..=top {
            all.push(a * int(m) + b * int(n));
        }
    }
    all.sort();
    all.truncate(horizon + 1);
    all
}

/// `(x ⊕ y)_k = max_{i+j=k} x_i + y_j`, written out.
pub fn brute_max_plus(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let len = x.len().min(y.len());
    (0..len)
        .map(|k| (0..=k).map(|i| &x[i] + &y[k - i]).max().unwrap())
        .collect()
}

/// Integer vector `(μ; w)` against the ball-packing volume bound only.
pub fn volume_ok(mu: &BigInt, ws: &[BigInt]) -> bool {
    ws.iter().fold(BigInt::zero(), |acc, w| acc + w * w) <= mu * mu
}

/// Concave staircase from integer directions ordered shallow to steep.
pub fn concave_from_directions(mut dirs: Vec<(i64, i64)>, scale: &Rational) -> ToricRegion2D {
    // slope dy/dx ascending in |dy/dx|
    dirs.sort_by(|p, q| (p.1 * q.0).cmp(&(q.1 * p.0)));
    chain_region(&dirs, scale)
}

/// Convex staircase from integer directions ordered steep to shallow.
pub fn convex_from_directions(mut dirs: Vec<(i64, i64)>, scale: &Rational) -> ToricRegion2D {
    dirs.sort_by(|p, q| (q.1 * p.0).cmp(&(p.1 * q.0)));
    chain_region(&dirs, scale)
}

fn chain_region(dirs: &[(i64, i64)], scale: &Rational) -> ToricRegion2D {
    let x0: i64 = dirs.iter().map(|d| d.0).sum();
    let mut pts = vec![Point2::origin()];
    let (mut x, mut y) = (x0, 0i64);
    pts.push(Point2::new(int(x) * scale, int(y) * scale));
    for &(dx, dy) in dirs {
        x -= dx;
        y += dy;
        pts.push(Point2::new(int(x) * scale, int(y) * scale));
    }
    ToricRegion2D::from_vertices(pts).expect("staircase is a valid toric region")
}

pub fn positive_rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_num, 1..=max_den).prop_map(|(p, q)| rat(p, q))
}

/// Directions with `dx, dy > 0`, the chain going left and up.
pub fn concave_region() -> impl Strategy<Value = ToricRegion2D> {
    (
        prop::collection::vec((1i64..5, 1i64..5), 1..5),
        positive_rational(6, 5),
    )
        .prop_map(|(dirs, s)| concave_from_directions(dirs, &s))
}

/// Directions with `dx, dy ≥ 0`, allowing vertical and horizontal edges.
pub fn convex_region() -> impl Strategy<Value = ToricRegion2D> {
    (
        prop::collection::vec((0i64..5, 0i64..5), 1..5),
        positive_rational(6, 5),
    )
        .prop_filter_map("needs width and height", |(dirs, s)| {
            let dirs: Vec<_> = dirs.into_iter().filter(|d| *d != (0, 0)).collect();
            let w: i64 = dirs.iter().map(|d| d.0).sum();
            let h: i64 = dirs.iter().map(|d| d.1).sum();
            (w > 0 && h > 0).then(|| convex_from_directions(dirs, &s))
        })
}

pub fn ellipsoid_axes() -> impl Strategy<Value = (Rational, Rational)> {
    (positive_rational(12, 6), 1i64..=10, 1i64..=10).prop_map(|(a, p, q)| {
        let ratio = rat(p.max(q), p.min(q));
        let b = &a * ratio;
        (a, b)
    })
}
