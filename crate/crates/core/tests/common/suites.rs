//! Property groups that must run both under `cargo test` and from the
//! acceptance binary. Each group returns the first counterexample found.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use toricap::capacities::{ch_concave, ch_convex, ch_convex_vertices, ellipsoid_ech, n_k};
use toricap::domains::{region_contains, EllipsoidSpec, MomentRegion, PolydiskSpec, ToricRegion2D};
use toricap::packing::{
    cremona_feasible, ech_feasible, EchVerdict, PackingInstance, Verdict, DEFAULT_STEP_LIMIT,
};
use toricap::rational::{int, Rational};
use toricap::weights::{weights_concave, weights_ellipsoid, DEFAULT_MAX_STEPS};

use super::*;

#[derive(Clone, Copy, Debug)]
pub struct Plan {
    pub cases: u32,
    /// Fixed seed instead of a fresh random one.
    pub deterministic: bool,
}

impl Plan {
    pub fn random(cases: u32) -> Self {
        Plan {
            cases,
            deterministic: false,
        }
    }

    pub fn fixed(cases: u32) -> Self {
        Plan {
            cases,
            deterministic: true,
        }
    }

    fn runner(&self) -> TestRunner {
        let config = Config {
            cases: self.cases,
            failure_persistence: None,
            ..Config::default()
        };
        if self.deterministic {
            TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
        } else {
            TestRunner::new(config)
        }
    }
}

fn check<S>(
    plan: Plan,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    plan.runner()
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

pub fn inner_corner(region: &ToricRegion2D) -> Rational {
    region
        .positive_boundary()
        .iter()
        .map(|p| &p.x + &p.y)
        .min()
        .unwrap()
}

pub fn packing_instance() -> impl Strategy<Value = PackingInstance> {
    (
        positive_rational(12, 4),
        prop::collection::vec(positive_rational(6, 4), 1..7),
    )
        .prop_map(|(mu, ws)| PackingInstance::new(mu, ws).unwrap())
}

pub fn verdict(inst: &PackingInstance) -> Verdict {
    cremona_feasible(inst, DEFAULT_STEP_LIMIT).verdict
}

/// `Σ w_i² = 2·area` for weight expansions.
pub fn conservation(plan: Plan) -> Result<(), String> {
    check(plan, "concave regions", concave_region(), |r| {
        let w = weights_concave(&r, DEFAULT_MAX_STEPS).unwrap();
        prop_assert_eq!(w.sum_of_squares(), r.area() * int(2));
        prop_assert!(w.weights.windows(2).all(|p| p[0] >= p[1]));
        prop_assert!(w.weights.iter().all(|x| *x > Rational::zero()));
        Ok(())
    })?;
    check(plan, "ellipsoids", ellipsoid_axes(), |(a, b)| {
        prop_assert_eq!(weights_ellipsoid(&a, &b).unwrap().sum_of_squares(), &a * &b);
        Ok(())
    })?;
    check(
        plan,
        "triangles expand like ellipsoids",
        ellipsoid_axes(),
        |(a, b)| {
            let t = ToricRegion2D::triangle(a.clone(), b.clone()).unwrap();
            prop_assert_eq!(
                weights_concave(&t, DEFAULT_MAX_STEPS).unwrap().weights,
                weights_ellipsoid(&a, &b).unwrap().weights
            );
            Ok(())
        },
    )
}

/// Inclusion of moment images never decreases a capacity, for every engine.
pub fn monotonicity(plan: Plan) -> Result<(), String> {
    check(
        plan,
        "concave engine",
        (concave_region(), 1usize..8),
        |(r, k)| {
            let (a, b) = r.intercepts();
            let outer = ToricRegion2D::triangle(a, b).unwrap();
            let w = inner_corner(&r);
            let inner = ToricRegion2D::triangle(w.clone(), w).unwrap();
            prop_assert!(region_contains(&inner.clone().into(), &r.clone().into()).unwrap());
            prop_assert!(region_contains(&r.clone().into(), &outer.clone().into()).unwrap());
            let c = ch_concave(&r, k).unwrap();
            prop_assert!(ch_concave(&inner, k).unwrap() <= c);
            prop_assert!(c <= ch_concave(&outer, k).unwrap());
            Ok(())
        },
    )?;
    check(
        plan,
        "convex engine",
        (convex_region(), 1usize..8),
        |(r, k)| {
            let (a, b) = r.intercepts();
            let rect = ToricRegion2D::rectangle(a.clone(), b.clone()).unwrap();
            let tri = ToricRegion2D::triangle(a, b).unwrap();
            prop_assert!(region_contains(&r.clone().into(), &rect.clone().into()).unwrap());
            prop_assert!(region_contains(&tri.clone().into(), &r.clone().into()).unwrap());
            let c = ch_convex(&r, k).unwrap();
            prop_assert!(ch_convex(&tri, k).unwrap() <= c);
            prop_assert!(c <= ch_convex(&rect, k).unwrap());
            Ok(())
        },
    )?;
    check(
        plan,
        "concave inside its box",
        (concave_region(), 1usize..8),
        |(r, k)| {
            let (a, b) = r.intercepts();
            let rect = ToricRegion2D::rectangle(a, b).unwrap();
            prop_assert!(region_contains(&r.clone().into(), &rect.clone().into()).unwrap());
            prop_assert!(ch_concave(&r, k).unwrap() <= ch_convex(&rect, k).unwrap());
            Ok(())
        },
    )?;
    let axes = prop::collection::vec(positive_rational(9, 4), 1..4);
    check(
        plan,
        "ellipsoids",
        (axes, positive_rational(5, 5), 1usize..12),
        |(axes, grow, k)| {
            let mut bigger = axes.clone();
            bigger[0] += grow;
            prop_assert!(n_k(&axes, k).unwrap() <= n_k(&bigger, k).unwrap());
            if axes.len() == 2 {
                let small = MomentRegion::Ellipsoid(EllipsoidSpec::new(axes).unwrap());
                let big = MomentRegion::Ellipsoid(EllipsoidSpec::new(bigger).unwrap());
                prop_assert!(region_contains(&small, &big).unwrap());
            }
            Ok(())
        },
    )?;
    let axes = prop::collection::vec(positive_rational(6, 3), 3..5);
    check(
        plan,
        "polydisks",
        (axes, positive_rational(5, 5), 1usize..8),
        |(axes, grow, k)| {
            let mut bigger = axes.clone();
            bigger[1] += grow;
            let small = PolydiskSpec::new(axes).unwrap();
            let big = PolydiskSpec::new(bigger).unwrap();
            prop_assert!(
                ch_convex_vertices(&small.moment_vertices(), k).unwrap()
                    <= ch_convex_vertices(&big.moment_vertices(), k).unwrap()
            );
            Ok(())
        },
    )?;
    check(
        plan,
        "ech sequences",
        (ellipsoid_axes(), positive_rational(5, 5)),
        |((a, b), grow)| {
            let x = ellipsoid_ech(&a, &b, 40);
            let y = ellipsoid_ech(&a, &(&b + grow), 40);
            prop_assert!(x.values.iter().zip(&y.values).all(|(p, q)| p <= q));
            Ok(())
        },
    )
}

/// Packing verdicts depend only on the ratios `w_i / μ`.
pub fn scaling(plan: Plan) -> Result<(), String> {
    check(
        plan,
        "packing verdicts",
        (packing_instance(), positive_rational(9, 7)),
        |(inst, s)| {
            let scaled = inst.scaled(&s).unwrap();
            prop_assert_eq!(verdict(&scaled), verdict(&inst));
            prop_assert_eq!(
                ech_feasible(&scaled, 60).obstruction_k(),
                ech_feasible(&inst, 60).obstruction_k()
            );
            Ok(())
        },
    )?;
    check(
        plan,
        "concave embeddings",
        (
            concave_region(),
            positive_rational(9, 4),
            positive_rational(9, 7),
        ),
        |(r, mu, s)| {
            let w = weights_concave(&r, DEFAULT_MAX_STEPS).unwrap().weights;
            let ws = weights_concave(&r.scale(&s).unwrap(), DEFAULT_MAX_STEPS)
                .unwrap()
                .weights;
            let base = PackingInstance::new(mu.clone(), w).unwrap();
            let scaled = PackingInstance::new(&mu * &s, ws).unwrap();
            prop_assert_eq!(verdict(&base), verdict(&scaled));
            Ok(())
        },
    )
}

/// The Cremona decider and the ECH obstruction never contradict each other.
pub fn decider_agreement(plan: Plan) -> Result<(), String> {
    check(plan, "random instances", packing_instance(), |inst| {
        let v = verdict(&inst);
        prop_assert_ne!(v, Verdict::Inconclusive);
        let ech = ech_feasible(&inst, 80);
        if v == Verdict::Feasible {
            prop_assert!(
                matches!(ech, EchVerdict::FeasibleUpTo(_)),
                "ECH obstructs a feasible packing: {:?}",
                ech
            );
            let (_, mu, ws) = inst.to_integers();
            prop_assert!(volume_ok(&mu, &ws));
        }
        if let EchVerdict::Infeasible { .. } = ech {
            prop_assert_eq!(v, Verdict::Infeasible);
        }
        Ok(())
    })?;
    check(
        plan,
        "single balls",
        (positive_rational(9, 5), positive_rational(9, 5)),
        |(w, mu)| {
            let inst = PackingInstance::new(mu.clone(), vec![w.clone()]).unwrap();
            let expected = if w <= mu {
                Verdict::Feasible
            } else {
                Verdict::Infeasible
            };
            prop_assert_eq!(verdict(&inst), expected);
            Ok(())
        },
    )
}
