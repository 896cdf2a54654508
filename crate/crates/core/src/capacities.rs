//! Capacity calculators: `N_k` on ellipsoids, the lattice min–max formulas
//! for convex and concave toric domains, volumes, and ECH capacity
//! sequences of balls, ellipsoids and disjoint unions.

use std::ops::Add;
use std::sync::OnceLock;

use num::{BigInt, One, Zero};

use crate::domains::{make_veps, EllipsoidSpec, PolydiskSpec, ToricRegion2D};
use crate::error::{Error, Result};
use crate::geometry::{boundary_min, support_max, VecN};
use crate::rational::{format_rational, int, rat, Rational};

/// The `k`-th smallest element, with multiplicity, of `{ m·a_i : m ≥ 1 }`.
pub fn n_k(axes: &[Rational], k: usize) -> Result<Rational> {
    if axes.is_empty() {
        return Err(Error::EmptyAxes);
    }
    if k == 0 {
        return Err(Error::OutOfRange(
            "capacity index k must be at least 1".into(),
        ));
    }
    if let Some(bad) = axes.iter().find(|a| **a <= Rational::zero()) {
        return Err(Error::NonPositive(bad.clone()));
    }
    let bound = axes.iter().min().expect("non-empty") * int(k as i64);
    let mut multiples = Vec::new();
    for a in axes {
        let mut m = a.clone();
        while m <= bound {
            multiples.push(m.clone());
            m += a;
        }
    }
    multiples.sort();
    Ok(multiples.swap_remove(k - 1))
}

/// All `v ∈ ℤⁿ_{≥0}` with `Σ v_i = total`, in lexicographic order.
pub fn compositions(n: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=left {
            prefix.push(first);
            rec(n - 1, left - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, total, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn as_rationals(v: &[usize]) -> Vec<Rational> {
    v.iter().map(|&x| int(x as i64)).collect()
}

/// `min { max_{w∈Ω} ⟨v,w⟩ : v ∈ ℤⁿ_{≥0}, Σ v_i = k }` for a convex moment
/// region given by its vertices (any dimension).
pub fn ch_convex_vertices(vertices: &[VecN], k: usize) -> Result<Rational> {
    if k == 0 {
        return Err(Error::OutOfRange(
            "capacity index k must be at least 1".into(),
        ));
    }
    let n = vertices.first().map(Vec::len).ok_or(Error::EmptyAxes)?;
    let mut best: Option<Rational> = None;
    for v in compositions(n, k) {
        let val = support_max(vertices, &as_rationals(&v))?;
        if best.as_ref().is_none_or(|b| val < *b) {
            best = Some(val);
        }
    }
    Ok(best.expect("at least one composition"))
}

pub fn ch_convex(region: &ToricRegion2D, k: usize) -> Result<Rational> {
    if !region.flags().convex {
        return Err(Error::NotConvex);
    }
    let verts: Vec<VecN> = region
        .polygon()
        .vertices()
        .iter()
        .map(|p| p.to_vec())
        .collect();
    ch_convex_vertices(&verts, k)
}

/// `max { min_{w∈∂₊Ω} ⟨v,w⟩ : v ∈ ℤ²_{>0}, v_1 + v_2 = k + 1 }`.
pub fn ch_concave(region: &ToricRegion2D, k: usize) -> Result<Rational> {
    if !region.flags().concave {
        return Err(Error::NotConcave);
    }
    if k == 0 {
        return Err(Error::OutOfRange(
            "capacity index k must be at least 1".into(),
        ));
    }
    let chain = region.positive_boundary();
    let total = k + 1;
    (1..total)
        .map(|i| boundary_min(chain, &[int(i as i64), int((total - i) as i64)]))
        .try_fold(None::<Rational>, |acc, val| {
            let val = val?;
            Ok(Some(match acc {
                Some(b) if b >= val => b,
                _ => val,
            }))
        })
        .map(|best| best.expect("k >= 1 gives at least one vector"))
}

pub enum VolumeOf<'a> {
    Ellipsoid(&'a EllipsoidSpec),
    Polydisk(&'a PolydiskSpec),
    Region(&'a ToricRegion2D),
}

/// Euclidean volume in the normalization where `vol(B⁴(a)) = a²/2`.
pub fn volume(domain: VolumeOf<'_>) -> Rational {
    match domain {
        VolumeOf::Ellipsoid(e) => {
            let prod = e.axes().iter().fold(Rational::one(), |acc, a| acc * a);
            let fact = (1..=e.dim() as i64).fold(Rational::one(), |acc, i| acc * int(i));
            prod / fact
        }
        VolumeOf::Polydisk(p) => p.axes().iter().fold(Rational::one(), |acc, a| acc * a),
        VolumeOf::Region(r) => r.area(),
    }
}

/// A truncated capacity sequence `c_0 = 0 ≤ c_1 ≤ … ≤ c_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacitySequence<T = Rational> {
    pub values: Vec<T>,
}

impl<T> CapacitySequence<T> {
    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }
}

pub const DEFAULT_ECH_HORIZON: usize = 200;

/// Values `m·a + m'·b`, `m, m' ≥ 0`, sorted, first `horizon + 1` of them.
///
/// Only pairs with `(m+1)(m'+1) ≤ horizon + 1` are enumerated: a pair outside
/// that range strictly dominates at least `horizon + 1` pairs with smaller
/// value, so it cannot be among the first `horizon + 1`.
pub fn ellipsoid_ech<T>(a: &T, b: &T, horizon: usize) -> CapacitySequence<T>
where
    T: Clone + Ord + Zero,
    for<'x> &'x T: Add<&'x T, Output = T>,
{
    let cap = horizon + 1;
    let mut vals = Vec::new();
    let mut row_start = T::zero();
    for m in 0..cap {
        let mut v = row_start.clone();
        let mut mp = 0;
        while (m + 1) * (mp + 1) <= cap {
            vals.push(v.clone());
            v = &v + b;
            mp += 1;
        }
        row_start = &row_start + a;
    }
    vals.sort();
    vals.truncate(cap);
    CapacitySequence { values: vals }
}

/// `c_k(X ⊔ Y) = max_{i+j=k} c_i(X) + c_j(Y)`.
pub fn max_plus<T>(x: &CapacitySequence<T>, y: &CapacitySequence<T>) -> CapacitySequence<T>
where
    T: Clone + Ord,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    let horizon = x.horizon().min(y.horizon());
    let values = (0..=horizon)
        .map(|k| {
            (0..=k)
                .map(|i| &x.values[i] + &y.values[k - i])
                .max()
                .expect("k >= 0")
        })
        .collect();
    CapacitySequence { values }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EchDomain {
    Ball(Rational),
    Ellipsoid(Rational, Rational),
    BallUnion(Vec<Rational>),
}

pub fn ech_sequence(domain: &EchDomain, horizon: usize) -> Result<CapacitySequence> {
    let check = |x: &Rational| {
        if *x > Rational::zero() {
            Ok(())
        } else {
            Err(Error::NonPositive(x.clone()))
        }
    };
    match domain {
        EchDomain::Ball(a) => {
            check(a)?;
            Ok(ellipsoid_ech(a, a, horizon))
        }
        EchDomain::Ellipsoid(a, b) => {
            check(a)?;
            check(b)?;
            Ok(ellipsoid_ech(a, b, horizon))
        }
        EchDomain::BallUnion(ws) => {
            if ws.is_empty() {
                return Err(Error::EmptyAxes);
            }
            ws.iter().try_for_each(check)?;
            let mut acc = ellipsoid_ech(&ws[0], &ws[0], horizon);
            for w in &ws[1..] {
                acc = max_plus(&acc, &ellipsoid_ech(w, w, horizon));
            }
            Ok(acc)
        }
    }
}

/// Integer variant used by the packing decider after clearing denominators.
pub fn ball_union_ech_int(weights: &[BigInt], horizon: usize) -> CapacitySequence<BigInt> {
    let mut acc: Option<CapacitySequence<BigInt>> = None;
    for w in weights {
        let s = ellipsoid_ech(w, w, horizon);
        acc = Some(match acc {
            None => s,
            Some(a) => max_plus(&a, &s),
        });
    }
    acc.unwrap_or(CapacitySequence {
        values: vec![BigInt::zero(); horizon + 1],
    })
}

/// Anchor checks for the convex and concave formulas: agreement with `N_k`
/// on ellipsoids, `c_k(P(1,…,1)) = k`, and `c_2(V_ε) = 3ε`.
pub fn self_test() -> Result<()> {
    let fail = |what: String| Err(Error::GateFailed(what));
    let pairs = [
        (1, 1, 1, 1),
        (1, 1, 2, 1),
        (2, 3, 5, 7),
        (1, 3, 10, 3),
        (3, 2, 3, 2),
        (1, 5, 7, 11),
    ];
    for (p, q, r, s) in pairs {
        let (a, b) = (rat(p, q), rat(r, s));
        let t = ToricRegion2D::triangle(a.clone(), b.clone())?;
        for k in 1..=12 {
            let expect = n_k(&[a.clone(), b.clone()], k)?;
            let cvx = ch_convex(&t, k)?;
            let ccv = ch_concave(&t, k)?;
            if cvx != expect || ccv != expect {
                return fail(format!(
                    "E({}, {}) k={k}: N_k={}, convex={}, concave={}",
                    format_rational(&a),
                    format_rational(&b),
                    format_rational(&expect),
                    format_rational(&cvx),
                    format_rational(&ccv)
                ));
            }
        }
    }
    for n in 2..=3 {
        let cube = PolydiskSpec::cube(n).moment_vertices();
        for k in 1..=12 {
            if ch_convex_vertices(&cube, k)? != int(k as i64) {
                return fail(format!("P(1,…,1) in dimension {n}, k={k}"));
            }
        }
    }
    for eps in [rat(1, 5), rat(2, 9), rat(1, 4)] {
        let v = ch_concave(&make_veps(&eps)?, 2)?;
        if v != &eps * int(3) {
            return fail(format!("c_2(V_ε) at ε={}", format_rational(&eps)));
        }
    }
    Ok(())
}

/// Runs [`self_test`] once per process and caches the outcome.
pub fn formula_gate() -> Result<()> {
    static GATE: OnceLock<Result<()>> = OnceLock::new();
    GATE.get_or_init(self_test).clone()
}
