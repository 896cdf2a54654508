//! Release gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

mod common;

use std::time::Instant;

use common::brute_nk;
use common::suites::{self, Plan};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use toricap::bounds::{
    c2_convex_4d, c2_polydisk, highdim_veps_threshold, polydisk_gap, veps_analysis,
};
use toricap::capacities::{ch_concave, ch_convex, ch_convex_vertices, n_k};
use toricap::domains::{
    make_veps, region_contains, EllipsoidSpec, MomentRegion, PolydiskSpec, ToricRegion2D,
};
use toricap::packing::{
    cremona_feasible, ech_feasible, embed_concave_into_ball, min_ball_for_weights, EchVerdict,
    PackingInstance, Verdict, DEFAULT_STEP_LIMIT,
};
use toricap::rational::{format_rational, int, rat, Rational};
use toricap::weights::{weights_concave, weights_ellipsoid, DEFAULT_MAX_STEPS};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn show(r: &Rational) -> String {
    format_rational(r)
}

fn test_grid() -> Vec<Rational> {
    [
        (1, 6),
        (1, 5),
        (43, 200),
        (2, 9),
        (23, 100),
        (1, 4),
        (3, 10),
        (1, 3),
        (2, 5),
    ]
    .iter()
    .map(|&(p, q)| rat(p, q))
    .collect()
}

fn ellipsoid_agreement() -> Check {
    let mut rng = StdRng::seed_from_u64(0x7061_636b);
    for _ in 0..100 {
        let a = rat(rng.gen_range(1..=30), rng.gen_range(1..=12));
        let ratio = rat(rng.gen_range(12..=120), 12);
        let b = &a * ratio;
        let t = ToricRegion2D::triangle(a.clone(), b.clone()).map_err(|e| e.to_string())?;
        for k in 1..=12 {
            let expected = brute_nk(&[a.clone(), b.clone()], k);
            let nk = n_k(&[a.clone(), b.clone()], k).map_err(|e| e.to_string())?;
            let cv = ch_convex(&t, k).map_err(|e| e.to_string())?;
            let cc = ch_concave(&t, k).map_err(|e| e.to_string())?;
            ensure!(
                nk == expected && cv == expected && cc == expected,
                "T({}, {}), k = {k}: n_k {}, convex {}, concave {}, listing {}",
                show(&a),
                show(&b),
                show(&nk),
                show(&cv),
                show(&cc),
                show(&expected)
            );
        }
    }
    Ok(())
}

fn cube_capacities() -> Check {
    let square = ToricRegion2D::rectangle(int(1), int(1)).map_err(|e| e.to_string())?;
    for k in 1..=20 {
        let v = ch_convex(&square, k).map_err(|e| e.to_string())?;
        ensure!(v == int(k as i64), "n = 2, k = {k}: got {}", show(&v));
        for n in 3..=4 {
            let v = ch_convex_vertices(&PolydiskSpec::cube(n).moment_vertices(), k)
                .map_err(|e| e.to_string())?;
            ensure!(v == int(k as i64), "n = {n}, k = {k}: got {}", show(&v));
        }
    }
    Ok(())
}

fn concave_anchor() -> Check {
    for eps in [rat(1, 6), rat(1, 5), rat(2, 9), rat(1, 4), rat(3, 10)] {
        let q = make_veps(&eps).map_err(|e| e.to_string())?;
        let v = ch_concave(&q, 2).map_err(|e| e.to_string())?;
        ensure!(
            v == &eps * int(3),
            "eps = {}: c_2 = {}",
            show(&eps),
            show(&v)
        );
    }
    Ok(())
}

fn weight_expansion() -> Check {
    for eps in test_grid() {
        let q = make_veps(&eps).map_err(|e| e.to_string())?;
        let w = weights_concave(&q, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
        // The first remainder is T(1 − 2ε, ε), whose corner triangle is ε only while ε ≤ 1/3.
        let second = if eps <= rat(1, 3) {
            eps.clone()
        } else {
            int(1) - &eps * int(2)
        };
        ensure!(
            w.weights.len() >= 3
                && w.weights[0] == &eps * int(2)
                && w.weights[1] == second
                && w.weights[2] == second,
            "eps = {}: weights start {:?}",
            show(&eps),
            w.weights.iter().take(3).map(show).collect::<Vec<_>>()
        );
        ensure!(
            w.sum_of_squares() == &eps * int(2),
            "eps = {}: sum of squares {}",
            show(&eps),
            show(&w.sum_of_squares())
        );
    }
    let eps = rat(2, 9);
    let tail = weights_ellipsoid(&rat(2, 9), &rat(1, 3))
        .map_err(|e| e.to_string())?
        .weights;
    let mut expected = vec![rat(4, 9), eps.clone(), eps.clone()];
    expected.extend(tail.iter().cloned());
    expected.extend(tail.iter().cloned());
    expected.sort_by(|a, b| b.cmp(a));
    let got = weights_concave(
        &make_veps(&eps).map_err(|e| e.to_string())?,
        DEFAULT_MAX_STEPS,
    )
    .map_err(|e| e.to_string())?
    .weights;
    ensure!(
        got == expected,
        "eps = 2/9: weights {:?}",
        got.iter().map(show).collect::<Vec<_>>()
    );
    Ok(())
}

fn flagship_threshold() -> Check {
    let feasible = [
        rat(2, 9),
        rat(23, 100),
        rat(1, 4),
        rat(3, 10),
        rat(1, 3),
        rat(2, 5),
    ];
    let infeasible = [rat(1, 6), rat(1, 5), rat(43, 200)];
    for (set, want) in [
        (&feasible[..], Verdict::Feasible),
        (&infeasible[..], Verdict::Infeasible),
    ] {
        for eps in set {
            let q = make_veps(eps).map_err(|e| e.to_string())?;
            let report = embed_concave_into_ball(&q, &(eps * int(3)), DEFAULT_MAX_STEPS)
                .map_err(|e| e.to_string())?;
            ensure!(
                report.verdict() == want,
                "eps = {}: into B(3 eps) is {}",
                show(eps),
                report.verdict().as_str()
            );
        }
    }
    for eps in test_grid() {
        let r = veps_analysis(&eps).map_err(|e| e.to_string())?;
        ensure!(
            r.equal == (eps >= rat(2, 9)),
            "eps = {}: equal = {}",
            show(&eps),
            r.equal
        );
    }
    Ok(())
}

fn packing_numbers() -> Check {
    let expected = [
        rat(1, 1),
        int(2),
        int(2),
        int(2),
        rat(5, 2),
        rat(5, 2),
        rat(8, 3),
        rat(17, 6),
        int(3),
    ];
    for (i, want) in expected.iter().enumerate() {
        let n = i + 1;
        let ones = vec![int(1); n];
        let got = min_ball_for_weights(&ones, &rat(1, 1000)).map_err(|e| e.to_string())?;
        ensure!(
            &got == want,
            "{n} balls: got {}, want {}",
            show(&got),
            show(want)
        );
        let inst = PackingInstance::new(want.clone(), ones.clone()).map_err(|e| e.to_string())?;
        ensure!(
            cremona_feasible(&inst, DEFAULT_STEP_LIMIT).verdict == Verdict::Feasible,
            "{n} balls: not feasible at {}",
            show(want)
        );
        let below = PackingInstance::new(want - rat(1, 1000), ones).map_err(|e| e.to_string())?;
        ensure!(
            cremona_feasible(&below, DEFAULT_STEP_LIMIT).verdict == Verdict::Infeasible,
            "{n} balls: still feasible one grid step below {}",
            show(want)
        );
        ensure!(
            matches!(ech_feasible(&inst, 200), EchVerdict::FeasibleUpTo(200)),
            "{n} balls: ECH obstruction at {}",
            show(want)
        );
    }
    Ok(())
}

fn c2_sandwich() -> Check {
    for (a, b) in [(int(1), int(1)), (int(1), int(5)), (int(3), int(3))] {
        let rect = ToricRegion2D::rectangle(a.clone(), b.clone()).map_err(|e| e.to_string())?;
        let r = c2_convex_4d(&rect).map_err(|e| e.to_string())?;
        let small = a.clone().min(b.clone());
        let want = &small * int(2);
        ensure!(
            r.value == want,
            "P({}, {}): c2 = {}",
            show(&a),
            show(&b),
            show(&r.value)
        );
        ensure!(
            c2_polydisk(&[a.clone(), b.clone()]).map_err(|e| e.to_string())? == want,
            "c2_polydisk disagrees"
        );
        let (ia, iw) = r.inner_ellipsoid.clone();
        ensure!(
            n_k(&[ia, iw], 2).map_err(|e| e.to_string())? == want,
            "inner witness N_2 differs"
        );
        ensure!(
            rect.polygon().contains_polygon(&r.inner_region),
            "inner region not contained in P({}, {})",
            show(&a),
            show(&b)
        );
        // E(s, 2s) sits below P(s, s) in capacity; E(s + δ, (s + δ)·t/δ) contains the rectangle.
        let lower = n_k(&[small.clone(), &small * int(2)], 2).map_err(|e| e.to_string())?;
        ensure!(lower == want, "lower sandwich {}", show(&lower));
        for delta in [rat(1, 10), rat(1, 100)] {
            let (s, t) = if a <= b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            };
            let e1 = &s + &delta;
            let e2 = &e1 * &t / &delta;
            let (ex, ey) = if a <= b {
                (e1.clone(), e2.clone())
            } else {
                (e2.clone(), e1.clone())
            };
            let outer = MomentRegion::Ellipsoid(
                EllipsoidSpec::new(vec![ex, ey]).map_err(|e| e.to_string())?,
            );
            ensure!(
                region_contains(&rect.clone().into(), &outer).map_err(|e| e.to_string())?,
                "E({}, {}) does not contain P({}, {})",
                show(&e1),
                show(&e2),
                show(&a),
                show(&b)
            );
            let upper = n_k(&[e1, e2], 2).map_err(|e| e.to_string())?;
            ensure!(
                upper >= r.value && &upper - &want <= &delta * int(2),
                "delta = {}: upper bound {} not within 2 delta of {}",
                show(&delta),
                show(&upper),
                show(&want)
            );
        }
    }
    Ok(())
}

fn gap_truth_table() -> Check {
    let mut cases = vec![
        (2, 2, false),
        (3, 2, true),
        (3, 3, true),
        (4, 3, true),
        (2, 4, false),
    ];
    cases.extend((2..=6).map(|n| (1, n, false)));
    for (k, n, want) in cases {
        let g = polydisk_gap(k, n).map_err(|e| e.to_string())?;
        ensure!(
            g.gap_proven == want,
            "(k, n) = ({k}, {n}): gap_proven = {}",
            g.gap_proven
        );
    }
    Ok(())
}

fn threshold_consistency() -> Check {
    let t = highdim_veps_threshold(2).map_err(|e| e.to_string())?;
    ensure!(t == rat(2, 9), "n = 2 threshold is {}", show(&t));
    let below = veps_analysis(&(&t - rat(1, 1000))).map_err(|e| e.to_string())?;
    let at = veps_analysis(&t).map_err(|e| e.to_string())?;
    ensure!(
        !below.equal && at.equal,
        "threshold does not separate the regimes"
    );
    Ok(())
}

fn property_groups() -> Check {
    let plan = Plan::fixed(48);
    suites::conservation(plan).map_err(|e| format!("conservation: {e}"))?;
    suites::monotonicity(plan).map_err(|e| format!("monotonicity: {e}"))?;
    suites::scaling(plan).map_err(|e| format!("scaling: {e}"))?;
    suites::decider_agreement(plan).map_err(|e| format!("decider agreement: {e}"))?;
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ellipsoid agreement", ellipsoid_agreement),
        ("cube capacities", cube_capacities),
        ("concave anchor", concave_anchor),
        ("weight expansion", weight_expansion),
        ("flagship threshold", flagship_threshold),
        ("packing numbers", packing_numbers),
        ("c2 of convex domains", c2_sandwich),
        ("gap certificates", gap_truth_table),
        ("threshold consistency", threshold_consistency),
        ("property groups", property_groups),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
