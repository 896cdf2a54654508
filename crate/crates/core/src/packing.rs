//! Four-dimensional ball packings `⊔ B(w_i) ↪ B(μ)`.
//!
//! [`cremona_feasible`] is the deciding procedure. [`ech_feasible`] compares
//! ECH capacity sequences up to a finite horizon and can only ever certify
//! infeasibility; it serves as an independent cross-check.

use std::fmt::Write as _;

use num::{BigInt, Signed, Zero};

use crate::capacities::{ball_union_ech_int, ellipsoid_ech};
use crate::domains::ToricRegion2D;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, format_rational, simplest_in, Rational};
use crate::weights::{weights_concave, WeightSequence};

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingInstance {
    mu: Rational,
    weights: Vec<Rational>,
}

impl PackingInstance {
    /// Weights are stored sorted descending.
    pub fn new(mu: Rational, mut weights: Vec<Rational>) -> Result<Self> {
        if !mu.is_positive() {
            return Err(Error::NonPositive(mu));
        }
        if weights.is_empty() {
            return Err(Error::EmptyAxes);
        }
        if let Some(bad) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::NonPositive(bad.clone()));
        }
        weights.sort_by(|a, b| b.cmp(a));
        Ok(PackingInstance { mu, weights })
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn scaled(&self, s: &Rational) -> Result<Self> {
        PackingInstance::new(&self.mu * s, self.weights.iter().map(|w| w * s).collect())
    }

    /// `(L, L·μ, L·w)` with `L` the least common denominator.
    pub fn to_integers(&self) -> (BigInt, BigInt, Vec<BigInt>) {
        let scale = common_denominator(std::iter::once(&self.mu).chain(&self.weights));
        let lift = |x: &Rational| (x * Rational::from_integer(scale.clone())).to_integer();
        (
            scale.clone(),
            lift(&self.mu),
            self.weights.iter().map(lift).collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One Cremona move on the integer vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub mu_before: BigInt,
    pub weights_before: Vec<BigInt>,
    pub defect: BigInt,
    pub mu_after: BigInt,
    pub weights_after: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Reduced vector with nonnegative entries and `Σ w² ≤ μ²`.
    Reduced {
        mu: BigInt,
        weights: Vec<BigInt>,
    },
    NegativeEntry {
        mu: BigInt,
        weights: Vec<BigInt>,
    },
    WeightExceedsTarget {
        mu: BigInt,
        weight: BigInt,
    },
    Volume {
        sum_sq: BigInt,
        mu_sq: BigInt,
    },
    StepLimit {
        steps: usize,
    },
}

/// Audit trail of a reduction, on the integer vector `scale·(μ; w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub scale: BigInt,
    pub steps: Vec<ReductionStep>,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

fn join(ws: &[BigInt]) -> String {
    ws.iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

impl ReductionTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,mu_before,weights_before,defect,mu_after,weights_after\n");
        for (i, s) in self.steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                i + 1,
                s.mu_before,
                join(&s.weights_before),
                s.defect,
                s.mu_after,
                join(&s.weights_after)
            );
        }
        out
    }
}

fn sort_desc_drop_zeros(ws: &mut Vec<BigInt>) {
    ws.retain(|w| !w.is_zero());
    ws.sort_by(|a, b| b.cmp(a));
}

/// Decide `⊔ int B(w_i) ↪ B(μ)` by Cremona reduction.
///
/// Repeatedly: sort weights descending and drop zeros; reject on a negative
/// entry or `w_1 > μ`; with `δ = μ − w_1 − w_2 − w_3` (missing weights are 0),
/// a vector with `δ ≥ 0` is reduced and feasible iff `Σ w² ≤ μ²`; otherwise
/// replace `μ, w_1, w_2, w_3` by `μ+δ, w_1+δ, w_2+δ, w_3+δ`.
pub fn cremona_feasible(inst: &PackingInstance, step_limit: usize) -> ReductionTrace {
    let (scale, mut mu, mut ws) = inst.to_integers();
    let mut steps = Vec::new();
    let finish = |steps, verdict, certificate| ReductionTrace {
        scale: scale.clone(),
        steps,
        verdict,
        certificate,
    };
    loop {
        sort_desc_drop_zeros(&mut ws);
        if mu.is_negative() || ws.iter().any(|w| w.is_negative()) {
            return finish(
                steps,
                Verdict::Infeasible,
                Certificate::NegativeEntry { mu, weights: ws },
            );
        }
        if let Some(w1) = ws.first() {
            if *w1 > mu {
                let weight = w1.clone();
                return finish(
                    steps,
                    Verdict::Infeasible,
                    Certificate::WeightExceedsTarget { mu, weight },
                );
            }
        }
        let top: BigInt = ws.iter().take(3).sum();
        let defect = &mu - top;
        if !defect.is_negative() {
            let sum_sq: BigInt = ws.iter().map(|w| w * w).sum();
            let mu_sq = &mu * &mu;
            return if sum_sq <= mu_sq {
                finish(
                    steps,
                    Verdict::Feasible,
                    Certificate::Reduced { mu, weights: ws },
                )
            } else {
                finish(
                    steps,
                    Verdict::Infeasible,
                    Certificate::Volume { sum_sq, mu_sq },
                )
            };
        }
        if steps.len() == step_limit {
            let n = steps.len();
            return finish(
                steps,
                Verdict::Inconclusive,
                Certificate::StepLimit { steps: n },
            );
        }
        let before = ws.clone();
        while ws.len() < 3 {
            ws.push(BigInt::zero());
        }
        for w in ws.iter_mut().take(3) {
            *w += &defect;
        }
        let mu_after = &mu + &defect;
        steps.push(ReductionStep {
            mu_before: mu.clone(),
            weights_before: before,
            defect,
            mu_after: mu_after.clone(),
            weights_after: ws.clone(),
        });
        mu = mu_after;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EchVerdict {
    /// No obstruction among the first `horizon` capacities.
    FeasibleUpTo(usize),
    /// `c_k(⊔ B(w_i)) > c_k(B(μ))`; values are on the integer scale.
    Infeasible {
        k: usize,
        union_value: BigInt,
        ball_value: BigInt,
    },
}

impl EchVerdict {
    pub fn obstruction_k(&self) -> Option<usize> {
        match self {
            EchVerdict::Infeasible { k, .. } => Some(*k),
            EchVerdict::FeasibleUpTo(_) => None,
        }
    }
}

pub fn ech_feasible(inst: &PackingInstance, horizon: usize) -> EchVerdict {
    let (_, mu, ws) = inst.to_integers();
    let union = ball_union_ech_int(&ws, horizon);
    let ball = ellipsoid_ech(&mu, &mu, horizon);
    for (k, (u, b)) in union.values.iter().zip(&ball.values).enumerate() {
        if u > b {
            return EchVerdict::Infeasible {
                k,
                union_value: u.clone(),
                ball_value: b.clone(),
            };
        }
    }
    EchVerdict::FeasibleUpTo(horizon)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub weights: WeightSequence,
    pub trace: ReductionTrace,
}

impl EmbeddingReport {
    pub fn verdict(&self) -> Verdict {
        self.trace.verdict
    }
}

/// `int(X_Ω) ↪ B(μ)` for concave `Ω`, through its weight expansion.
pub fn embed_concave_into_ball(
    region: &ToricRegion2D,
    mu: &Rational,
    max_steps: usize,
) -> Result<EmbeddingReport> {
    let weights = weights_concave(region, max_steps)?;
    let inst = PackingInstance::new(mu.clone(), weights.weights.clone())?;
    let trace = cremona_feasible(&inst, DEFAULT_STEP_LIMIT);
    Ok(EmbeddingReport { weights, trace })
}

fn decide(weights: &[Rational], mu: &Rational) -> Result<bool> {
    let inst = PackingInstance::new(mu.clone(), weights.to_vec())?;
    match cremona_feasible(&inst, DEFAULT_STEP_LIMIT).verdict {
        Verdict::Feasible => Ok(true),
        Verdict::Infeasible => Ok(false),
        Verdict::Inconclusive => Err(Error::Inconclusive(format!(
            "Cremona reduction hit the step limit at mu = {}",
            format_rational(mu)
        ))),
    }
}

/// Smallest `μ` with `⊔ B(w_i) ↪ B(μ)`, up to `resolution`.
///
/// Bisection brackets the threshold in `(lo, hi]` with `hi` feasible and
/// `hi − lo ≤ resolution`; the simplest rational in the bracket is returned
/// when it is feasible, otherwise `hi`.
pub fn min_ball_for_weights(weights: &[Rational], resolution: &Rational) -> Result<Rational> {
    if !resolution.is_positive() {
        return Err(Error::NonPositive(resolution.clone()));
    }
    let mut lo = Rational::zero();
    let mut hi: Rational = weights.iter().sum();
    while !decide(weights, &hi)? {
        lo = hi.clone();
        hi = &hi * Rational::from_integer(2.into());
    }
    let two = Rational::from_integer(2.into());
    while &hi - &lo > *resolution {
        let mid = (&lo + &hi) / &two;
        if decide(weights, &mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let simple = simplest_in(&lo, &hi);
    if simple.is_positive() && decide(weights, &simple)? {
        Ok(simple)
    } else {
        Ok(hi)
    }
}

pub fn min_ball(
    region: &ToricRegion2D,
    resolution: &Rational,
    max_steps: usize,
) -> Result<Rational> {
    let w = weights_concave(region, max_steps)?;
    min_ball_for_weights(&w.weights, resolution)
}
