//! Two-normalized capacities of 4-d convex toric domains, the `V_ε` family,
//! and polydisk gap certificates for `k`-normalized capacities.
//!
//! Every equality reported here is a sandwich
//! `N_k(inner) ≤ c_k^min ≤ c_k^max ≤ N_k(outer)` between an ellipsoid that
//! embeds into the domain and one that contains it, with matching ends.

use num::{BigUint, One, Zero};
use rayon::prelude::*;

use crate::capacities::{ch_concave, formula_gate, n_k};
use crate::domains::{
    axis_data, make_veps, region_contains, EllipsoidSpec, MomentRegion, ToricRegion2D,
};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, Point2, Polygon2D};
use crate::packing::{embed_concave_into_ball, Verdict};
use crate::rational::{format_rational, int, rat, Rational};
use crate::weights::DEFAULT_MAX_STEPS;

/// The region containing `Ω` that gives the binding upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OuterWitness {
    /// `Ω ⊆ P(a, b)`, and every 2-normalized capacity of `P(a, b)` is `2·min(a, b)`.
    Polydisk { a: Rational, b: Rational },
    /// `Ω ⊆ B(w)`.
    Ball { w: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C2Result {
    pub value: Rational,
    /// Smaller axis intercept.
    pub a: Rational,
    /// Radius of the smallest ball containing the domain.
    pub w: Rational,
    /// The quadrilateral `hull{(0,0), (a,0), (x,y), (0,b)} ⊆ Ω` with `x + y = w`.
    pub inner_region: Polygon2D,
    /// `E(a, w)`, which embeds into the toric domain over `inner_region`.
    pub inner_ellipsoid: (Rational, Rational),
    pub outer: OuterWitness,
}

/// `c_2` of a 4-d convex toric domain: `min(2a, w)`.
pub fn c2_convex_4d(region: &ToricRegion2D) -> Result<C2Result> {
    if !region.flags().convex {
        return Err(Error::NotConvex);
    }
    let data = axis_data(region);
    let a = data.a.clone().min(data.b.clone());
    let w = data.w.clone();
    let touch = region
        .positive_boundary()
        .iter()
        .find(|p| &p.x + &p.y == w)
        .expect("w is attained on the boundary")
        .clone();
    let quad = Polygon2D::new(convex_hull(&[
        Point2::origin(),
        Point2::new(data.a.clone(), Rational::zero()),
        touch,
        Point2::new(Rational::zero(), data.b.clone()),
    ]))?;
    if !region.polygon().contains_polygon(&quad) {
        return Err(Error::CheckFailed(
            "inner quadrilateral not contained in a convex region".into(),
        ));
    }

    let lower = n_k(&[a.clone(), w.clone()], 2)?;
    let polydisk_bound = &a * int(2);
    let (upper, outer) = if polydisk_bound <= w {
        (
            polydisk_bound,
            OuterWitness::Polydisk {
                a: data.a.clone(),
                b: data.b.clone(),
            },
        )
    } else {
        (
            n_k(&[w.clone(), w.clone()], 2)?,
            OuterWitness::Ball { w: w.clone() },
        )
    };
    let outer_region = match &outer {
        OuterWitness::Polydisk { a, b } => ToricRegion2D::rectangle(a.clone(), b.clone())?,
        OuterWitness::Ball { w } => ToricRegion2D::triangle(w.clone(), w.clone())?,
    };
    if !outer_region.polygon().contains_polygon(region.polygon()) {
        return Err(Error::CheckFailed(
            "outer witness does not contain the region".into(),
        ));
    }
    if lower != upper {
        return Err(Error::CheckFailed(format!(
            "c2 bounds disagree: {} vs {}",
            format_rational(&lower),
            format_rational(&upper)
        )));
    }
    Ok(C2Result {
        value: lower,
        inner_region: quad,
        inner_ellipsoid: (a.clone(), w.clone()),
        a,
        w,
        outer,
    })
}

/// `c_2(P(a_1, …, a_n)) = 2·min(a_i)`.
///
/// For `n = 2` this is the ellipsoid sandwich `E(a, 2a) ↪ P(a, b) ⊆
/// E(a + δ, (a + δ)b/δ)`. For `n ≥ 3` the inner embedding
/// `int E(1, 2, …, 2) ↪ P(1, …, 1)` is a theorem this crate relies on
/// without constructing it.
pub fn c2_polydisk(axes: &[Rational]) -> Result<Rational> {
    if axes.is_empty() {
        return Err(Error::EmptyAxes);
    }
    if let Some(bad) = axes.iter().find(|a| **a <= Rational::zero()) {
        return Err(Error::NonPositive(bad.clone()));
    }
    Ok(axes.iter().min().expect("non-empty") * int(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VepsRegime {
    /// `ε ∈ [1/3, 1/2)`
    Upper,
    /// `ε ∈ [2/9, 1/3)`
    Middle,
    /// `ε ∈ (0, 2/9)`
    Lower,
}

impl VepsRegime {
    pub fn of(eps: &Rational) -> Self {
        if *eps >= rat(1, 3) {
            VepsRegime::Upper
        } else if *eps >= rat(2, 9) {
            VepsRegime::Middle
        } else {
            VepsRegime::Lower
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            VepsRegime::Upper => "[1/3,1/2)",
            VepsRegime::Middle => "[2/9,1/3)",
            VepsRegime::Lower => "(0,2/9)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VepsReport {
    pub eps: Rational,
    pub c2_min: Rational,
    pub c2_max_lower: Rational,
    /// Known only when the two extremal capacities coincide.
    pub c2_max_upper: Option<Rational>,
    pub equal: bool,
    pub regime: VepsRegime,
    /// Rational `r` with `3ε < r` and `r² < 2ε`, when `ε < 2/9`.
    pub sqrt_certificate: Option<Rational>,
}

/// A rational strictly between `3ε` and `√(2ε)`, by midpoint search on
/// `[3ε, 1]`. Requires `9ε² < 2ε`.
pub fn sqrt_gap_witness(eps: &Rational) -> Rational {
    let target = eps * int(2);
    let lo = eps * int(3);
    let mut hi = int(1).max(target.clone());
    debug_assert!(&lo * &lo < target);
    loop {
        let mid = (&lo + &hi) / int(2);
        if &mid * &mid < target {
            return mid;
        }
        hi = mid;
    }
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::CheckFailed(what.to_string()))
    }
}

/// Decides whether `c_2^min(V_ε) = c_2^max(V_ε)` and reports the bounds.
pub fn veps_analysis(eps: &Rational) -> Result<VepsReport> {
    let q = make_veps(eps)?;
    formula_gate()?;
    let region = MomentRegion::Toric(q.clone());
    let ellipsoid = |a: Rational, b: Rational| -> Result<MomentRegion> {
        Ok(MomentRegion::Ellipsoid(EllipsoidSpec::new(vec![a, b])?))
    };
    let three_eps = eps * int(3);
    let regime = VepsRegime::of(eps);
    let report = match regime {
        VepsRegime::Upper => {
            require(
                region_contains(&ellipsoid(rat(1, 2), int(1))?, &region)?,
                "E(1/2,1) ⊆ V_ε",
            )?;
            require(
                region_contains(&region, &MomentRegion::Ball(int(1)))?,
                "V_ε ⊆ B(1)",
            )?;
            let lower = n_k(&[rat(1, 2), int(1)], 2)?;
            let upper = n_k(&[int(1), int(1)], 2)?;
            require(lower == upper, "N_2(1/2,1) = N_2(1,1)")?;
            VepsReport {
                eps: eps.clone(),
                c2_min: lower.clone(),
                c2_max_lower: lower,
                c2_max_upper: Some(upper),
                equal: true,
                regime,
                sqrt_certificate: None,
            }
        }
        VepsRegime::Middle => {
            let inner = ellipsoid(&three_eps / int(2), three_eps.clone())?;
            require(region_contains(&inner, &region)?, "E(3ε/2,3ε) ⊆ V_ε")?;
            let embed = embed_concave_into_ball(&q, &three_eps, DEFAULT_MAX_STEPS)?;
            match embed.verdict() {
                Verdict::Feasible => {}
                Verdict::Infeasible => {
                    return Err(Error::CheckFailed("V_ε does not embed into B(3ε)".into()))
                }
                Verdict::Inconclusive => {
                    return Err(Error::Inconclusive("ball embedding of V_ε".into()))
                }
            }
            let lower = n_k(&[&three_eps / int(2), three_eps.clone()], 2)?;
            let upper = n_k(&[three_eps.clone(), three_eps.clone()], 2)?;
            require(lower == upper, "N_2(3ε/2,3ε) = N_2(3ε,3ε)")?;
            VepsReport {
                eps: eps.clone(),
                c2_min: lower.clone(),
                c2_max_lower: lower,
                c2_max_upper: Some(upper),
                equal: true,
                regime,
                sqrt_certificate: None,
            }
        }
        VepsRegime::Lower => {
            // c2_min is squeezed between N_2 of an inscribed ellipsoid and a
            // 2-normalized capacity that evaluates to 3ε.
            let inner = ellipsoid(&three_eps / int(2), three_eps.clone())?;
            require(region_contains(&inner, &region)?, "E(3ε/2,3ε) ⊆ V_ε")?;
            let from_below = n_k(&[&three_eps / int(2), three_eps.clone()], 2)?;
            let from_above = ch_concave(&q, 2)?;
            require(from_below == from_above, "c_2^min sandwich")?;
            // Any E(a, b) ⊇ V_ε has a ≥ 2ε (the ball B(2ε) sits inside V_ε)
            // and ab/2 ≥ ε, so b ≥ √(2ε) > r.
            require(
                region_contains(&MomentRegion::Ball(eps * int(2)), &region)?,
                "B(2ε) ⊆ V_ε",
            )?;
            let r = sqrt_gap_witness(eps);
            require(&r * &r < eps * int(2) && r > three_eps, "3ε < r < √(2ε)")?;
            let c2_max_lower = (eps * int(4)).min(r.clone());
            VepsReport {
                eps: eps.clone(),
                equal: c2_max_lower == from_below,
                c2_min: from_below,
                c2_max_lower,
                c2_max_upper: None,
                regime,
                sqrt_certificate: Some(r),
            }
        }
    };
    Ok(report)
}

/// [`veps_analysis`] over a grid, in grid order.
pub fn scan_veps(grid: &[Rational]) -> Result<Vec<VepsReport>> {
    grid.par_iter().map(veps_analysis).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCertificate {
    pub k: u32,
    pub n: u32,
    /// `k ≥ max(n, 3)`.
    pub in_theorem_range: bool,
    /// `kⁿ > k·n!`.
    pub inequality_violated: bool,
    pub gap_proven: bool,
    pub chain: Vec<String>,
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Whether the volume argument separates `c_k^min` and `c_k^max` on the
/// cube `P(1, …, 1) ⊂ ℂⁿ`.
///
/// Suppose `E(a_1 ≤ … ≤ a_n) ↪ P(1, …, 1)` with `N_k(a) ≥ k − ε`. Since
/// `a_1 ≤ 1`, the case `a_2 ≤ (k−1)a_1` gives `N_k ≤ k − 1`. Otherwise
/// `N_k ≤ min(k·a_1, a_2)` forces `a_1 ≥ (k−ε)/k` and `a_i ≥ k − ε`, and the
/// volume bound in the limit reads `kⁿ ≤ k·n!`. When that fails, `c_k^min < k`.
pub fn polydisk_gap(k: u32, n: u32) -> Result<GapCertificate> {
    if k < 1 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    let lhs = BigUint::from(k).pow(n);
    let rhs = BigUint::from(k) * factorial(n);
    let violated = lhs > rhs;
    let gap_proven = violated && k >= 2;
    let mut chain = vec![
        format!("c_{k}(P(1,...,1)) = {k} for the combinatorial capacity; suppose c_{k}^min = {k}"),
        format!("take E(a_1<=...<=a_{n}) into P(1,...,1) with N_{k}(a) >= {k} - e"),
        format!("a_1 <= c_1(P) = 1"),
    ];
    if k >= 2 {
        chain.push(format!(
            "case a_2 <= {}*a_1: N_{k}(a) <= {}*a_1 <= {}, contradiction",
            k - 1,
            k - 1,
            k - 1
        ));
    }
    chain.push(format!(
        "case a_2 > {}*a_1: N_{k}(a) <= min({k}*a_1, a_2), so a_1 >= ({k}-e)/{k} and a_i >= {k}-e for i >= 2",
        k - 1
    ));
    chain.push(format!(
        "volume: ({k}-e)^{n}/({k}*{n}!) <= a_1...a_{n}/{n}! <= vol(P) = 1"
    ));
    chain.push(format!(
        "limit e -> 0: {k}^{n} = {lhs} {} {k}*{n}! = {rhs}",
        if violated { ">" } else { "<=" }
    ));
    chain.push(if gap_proven {
        format!("contradiction: c_{k}^min(P) < {k} <= c_{k}^max(P)")
    } else {
        "no contradiction: the volume argument gives no gap".to_string()
    });
    Ok(GapCertificate {
        k,
        n,
        in_theorem_range: k >= n.max(3),
        inequality_violated: violated,
        gap_proven,
        chain,
    })
}

/// `n! / (2n − 1)ⁿ`: below this `ε`, `c_n^min(V_ε) < c_n^max(V_ε)` in ℂⁿ.
pub fn highdim_veps_threshold(n: u32) -> Result<Rational> {
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    let num = factorial(n);
    let den = BigUint::from(2 * n - 1).pow(n);
    Ok(Rational::new(num.into(), den.into()))
}

pub fn gap_below(eps: &Rational, n: u32) -> Result<bool> {
    Ok(*eps < highdim_veps_threshold(n)?)
}
