//! Acceptance suite. Runs without the libtest harness so each criterion
//! prints one PASS/FAIL line; the process fails if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::process::ExitCode;

use common::*;
use pcb_core::acts::{induce_lottery, Act};
use pcb_core::belief::{
    condition, dempster_combine, from_belief, from_commonality, to_belief, to_commonality,
    walley_combine, MassFunction, SetFunction, SetFunctionKind, Subset,
};
use pcb_core::pcb::{decompose, pcb_from_likelihood, prior_to_probability, LikelihoodVector};
use pcb_core::problem::{
    ActSpec, AttitudeSpec, DecisionProblem, FocalSpec, PrizeSpec, PrizesSpec, ProblemFile, Real,
    UncertaintySpec,
};
use pcb_core::rules::{
    act_lottery, choquet_eu, compare_rules, pignistic, plausibility_transform, RuleComparison,
};
use pcb_core::utility::{
    b_max, b_scale, expected_utility, mixed_utility, t_apply, BinaryUtility, ScaledPair, TFunction,
};
use rand::Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const ELLSBERG: &str = include_str!("../fixtures/ellsberg.json");
const EXACT: f64 = 1e-9;
const ROUNDED: f64 = 5e-3;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ellsberg() -> DecisionProblem {
    DecisionProblem::from_json(ELLSBERG).expect("fixture parses")
}

fn ellsberg_comparison() -> RuleComparison {
    compare_rules(&ellsberg()).expect("fixture compares")
}

fn utility_of(c: &RuleComparison, rule: &str, act: &str) -> f64 {
    let i = c.acts.iter().position(|a| a == act).unwrap();
    c.rule(rule).unwrap().utilities[i]
}

fn strictly(c: &RuleComparison, rule: &str, a: &str, b: &str) -> bool {
    utility_of(c, rule, a) > utility_of(c, rule, b) + EXACT
}

fn ellsberg_mixed() -> Check {
    let c = ellsberg_comparison();
    let expected = [
        ("IA", 1.0 / 3.0, 0.33),
        ("IB", 4.0 / 15.0, 0.27),
        ("IIA", 3.0 / 5.0, 0.60),
        ("IIB", 2.0 / 3.0, 0.67),
    ];
    for (act, exact, rounded) in expected {
        let u = utility_of(&c, "mixed", act);
        ensure!(close(u, exact, EXACT), "u({act}) = {u}, want {exact}");
        ensure!(
            close(u, rounded, ROUNDED),
            "u({act}) = {u}, want ~{rounded}"
        );
    }
    Ok("u = 1/3, 4/15, 3/5, 2/3".into())
}

fn ellsberg_pattern() -> Check {
    let c = ellsberg_comparison();
    ensure!(strictly(&c, "mixed", "IA", "IB"), "IA not preferred to IB");
    ensure!(
        strictly(&c, "mixed", "IIB", "IIA"),
        "IIB not preferred to IIA"
    );
    Ok("IA ≻ IB and IIB ≻ IIA".into())
}

fn pignistic_row() -> Check {
    let c = ellsberg_comparison();
    for p in &c.pignistic {
        ensure!(close(*p, 0.33, ROUNDED), "P_bet = {:?}", c.pignistic);
    }
    for (act, want) in [
        ("IA", 1.0 / 3.0),
        ("IB", 1.0 / 3.0),
        ("IIA", 2.0 / 3.0),
        ("IIB", 2.0 / 3.0),
    ] {
        let u = utility_of(&c, "pignistic_eu", act);
        ensure!(close(u, want, EXACT), "EU_bet({act}) = {u}");
    }
    let r = &c.rule("pignistic_eu").unwrap().ranking;
    ensure!(r.is_tie(0, 1) && r.is_tie(2, 3), "ties not flagged");
    Ok("P_bet = (1/3, 1/3, 1/3), IA ~ IB, IIA ~ IIB".into())
}

fn plausibility_row() -> Check {
    let c = ellsberg_comparison();
    for (p, want) in c.plausibility.iter().zip([0.2, 0.4, 0.4]) {
        ensure!(close(*p, want, EXACT), "P_pl = {:?}", c.plausibility);
    }
    for (act, want) in [("IA", 0.2), ("IB", 0.4), ("IIA", 0.6), ("IIB", 0.8)] {
        let u = utility_of(&c, "plausibility_eu", act);
        ensure!(close(u, want, EXACT), "EU_pl({act}) = {u}");
    }
    ensure!(
        strictly(&c, "plausibility_eu", "IB", "IA"),
        "IB not preferred to IA"
    );
    Ok("P_pl = (.2, .4, .4), EU = .2/.4/.6/.8, IB ≻ IA".into())
}

fn choquet_values() -> Check {
    let c = ellsberg_comparison();
    let cases = [
        ("ceu_bel", "IA", 1.0 / 3.0),
        ("ceu_pl", "IA", 1.0 / 3.0),
        ("ceu_bel", "IB", 0.0),
        ("ceu_pl", "IB", 2.0 / 3.0),
    ];
    for (rule, act, want) in cases {
        let u = utility_of(&c, rule, act);
        ensure!(close(u, want, EXACT), "{rule}({act}) = {u}, want {want}");
    }
    ensure!(
        strictly(&c, "ceu_bel", "IA", "IB"),
        "CEU_Bel does not prefer IA"
    );
    ensure!(
        strictly(&c, "ceu_pl", "IB", "IA"),
        "CEU_Pl does not prefer IB"
    );
    Ok("CEU_Bel: IA ≻ IB, CEU_Pl: IB ≻ IA".into())
}

fn walley_conditioning() -> Check {
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = r.gen_range(1..=8);
        let m = random_pcb(&mut r, n);
        let b = loop {
            let b = random_subset(&mut r, n);
            if m.plausibility(b) > 1e-6 {
                break b;
            }
        };
        let evidence = MassFunction::categorical(m.frame().clone(), b).unwrap();
        let q = walley_combine(
            &to_commonality(&m).unwrap(),
            &to_commonality(&evidence).unwrap(),
        )
        .map_err(|e| format!("case {case}: {e}"))?;
        let want = oracle_condition(&entries(&m), b.bits());
        let want: Vec<(u64, f64)> = want.into_iter().collect();
        let lib = to_commonality(&condition(&m, b).unwrap()).unwrap();
        for a in m.frame().all_subsets() {
            let d = (q.value(a) - oracle_commonality(&want, a.bits())).abs();
            worst = worst.max(d).max((q.value(a) - lib.value(a)).abs());
        }
    }
    ensure!(worst <= EXACT, "max commonality difference {worst:e}");
    Ok(format!("200 cases, max |ΔQ| = {worst:.1e}"))
}

fn mobius_round_trips() -> Check {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = r.gen_range(1..=10);
        let m = random_mass(&mut r, n);
        let e = entries(&m);
        let bel = to_belief(&m).unwrap();
        let q = to_commonality(&m).unwrap();
        for a in m.frame().all_subsets() {
            worst = worst
                .max((bel.value(a) - oracle_belief(&e, a.bits())).abs())
                .max((q.value(a) - oracle_commonality(&e, a.bits())).abs());
        }
        worst = worst
            .max(from_belief(&bel).unwrap().max_abs_diff(&m))
            .max(from_commonality(&q).unwrap().max_abs_diff(&m));
    }
    ensure!(worst <= EXACT, "max error {worst:e}");
    Ok(format!("200 cases, max error {worst:.1e}"))
}

fn pcb_round_trips() -> Check {
    let mut r = rng(8);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = r.gen_range(1..=10);
        let spec = random_pcb_spec(&mut r, n);
        let m = pcb_mass(&spec);
        let d = decompose(&m).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(
            d.block_count() == spec.blocks.len(),
            "case {case}: block count"
        );
        for i in 0..n {
            worst = worst.max((d.possibility(i) - spec.pi[i]).abs());
        }
        worst = worst.max(pcb_core::pcb::recompose(&d).max_abs_diff(&m));
    }
    ensure!(worst <= EXACT, "max error {worst:e}");
    for _ in 0..50 {
        let n = r.gen_range(1..=10);
        let p = MassFunction::probability(frame(n), &random_probs(&mut r, n)).unwrap();
        let d = decompose(&p).unwrap();
        ensure!(
            d.block_count() == n,
            "probability extreme gave s = {}",
            d.block_count()
        );
        let spec = PcbSpec {
            n,
            blocks: vec![(0..n).collect()],
            probs: vec![1.0],
            pi: {
                let mut pi: Vec<f64> = (0..n).map(|_| r.gen_range(0.05..1.0)).collect();
                pi[r.gen_range(0..n)] = 1.0;
                pi
            },
        };
        let c = pcb_mass(&spec);
        let d = decompose(&c).unwrap();
        ensure!(
            d.block_count() == 1,
            "possibility extreme gave s = {}",
            d.block_count()
        );
        for i in 0..n {
            let pl = oracle_plausibility(&entries(&c), 1 << i);
            ensure!(
                close(d.possibility(i), pl, EXACT),
                "π ≠ Pl on a consonant bpa"
            );
        }
    }
    Ok(format!(
        "200 cases, max error {worst:.1e}; s = N and s = 1 extremes"
    ))
}

/// A problem document with its probabilities, act prizes and attitude.
type ProbabilityProblem = (ProblemFile, Vec<f64>, Vec<Vec<String>>, f64);

fn random_probability_problem(r: &mut impl Rng, case: usize) -> ProbabilityProblem {
    let mut r = rng(r.gen());
    let n = r.gen_range(1..=6);
    let probs = random_probs(&mut r, n);
    let extra = r.gen_range(0..4);
    let prizes = random_prizes(&mut r, extra);
    let c = r.gen_range(0.05..0.95);
    let acts: Vec<Vec<String>> = (0..r.gen_range(1..=4))
        .map(|_| random_act_prizes(&mut r, n, &prizes))
        .collect();
    let labels: Vec<String> = frame(n).labels().to_vec();
    let spec = ProblemFile {
        frame: labels.clone(),
        uncertainty: UncertaintySpec::Bpa(
            labels
                .iter()
                .zip(&probs)
                .map(|(l, &p)| FocalSpec {
                    focal: vec![l.clone()],
                    mass: Real(p),
                })
                .collect(),
        ),
        prizes: Some(PrizesSpec {
            items: prizes
                .iter()
                .map(|(l, b)| PrizeSpec {
                    label: l.to_string(),
                    qu: [Real(b.lambda()), Real(b.rho())],
                })
                .collect(),
            best: "p0".into(),
            worst: "p1".into(),
        }),
        acts: acts
            .iter()
            .enumerate()
            .map(|(k, a)| ActSpec {
                name: format!("case{case}_d{k}"),
                assignment: labels.iter().cloned().zip(a.iter().cloned()).collect(),
            })
            .collect(),
        attitude: Some(AttitudeSpec::C(Real(c))),
        alpha: Some(Real(r.gen_range(0.0..=1.0))),
    };
    (spec, probs, acts, c)
}

fn degenerate_collapse() -> Check {
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let (spec, probs, acts, c) = random_probability_problem(&mut r, case);
        let problem = DecisionProblem::from_spec(spec).map_err(|e| format!("case {case}: {e}"))?;
        let prizes = problem.require_prizes().unwrap();
        let cmp = compare_rules(&problem).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(
            cmp.rules.len() == 6,
            "case {case}: {} rules",
            cmp.rules.len()
        );
        for (k, act) in acts.iter().enumerate() {
            let eu: f64 = act
                .iter()
                .zip(&probs)
                .map(|(w, p)| p * oracle_t(c, prizes.qu(w).unwrap()))
                .sum();
            for rule in &cmp.rules {
                worst = worst.max((rule.utilities[k] - eu).abs());
            }
        }
    }
    ensure!(worst <= EXACT, "rules disagree by {worst:e}");
    Ok(format!("100 problems, max spread {worst:.1e}"))
}

fn bayes_consistency() -> Check {
    let mut r = rng(10);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = r.gen_range(1..=8);
        let f = frame(n);
        let rho: Vec<f64> = (0..n).map(|_| r.gen_range(0.01..1.0)).collect();
        let tau: Vec<f64> = (0..n).map(|_| r.gen_range(0.01..1.0)).collect();
        let prior = prior_to_probability(f.clone(), &rho, 1.0).unwrap();
        let singletons: Vec<Subset> = (0..n).map(Subset::singleton).collect();
        let lik = pcb_from_likelihood(
            &LikelihoodVector::new(f, tau.clone()).unwrap(),
            &singletons,
            1.0,
        )
        .unwrap();
        let post = dempster_combine(&prior, &lik).unwrap();
        let z: f64 = rho.iter().zip(&tau).map(|(a, b)| a * b).sum();
        for i in 0..n {
            worst = worst.max((post.mass(Subset::singleton(i)) - rho[i] * tau[i] / z).abs());
        }
        ensure!(post.is_probability(), "posterior is not a probability");
    }
    ensure!(worst <= EXACT, "max posterior error {worst:e}");
    Ok(format!("100 cases, max error {worst:.1e}"))
}

fn property_suite() -> Check {
    let mut r = rng(11);

    for _ in 0..1000 {
        let (mut a, mut b) = (random_binary(&mut r), random_binary(&mut r));
        if (a.position() - b.position()).abs() < 1e-9 {
            continue;
        }
        if a.position() > b.position() {
            std::mem::swap(&mut a, &mut b);
        }
        let t = TFunction::parametric(r.gen_range(0.01..0.99)).unwrap();
        ensure!(
            t_apply(&t, a) < t_apply(&t, b),
            "t not increasing on {a} < {b}"
        );
        let mid = random_binary(&mut r);
        if (mid.position() - 1.0).abs() > 1e-6
            && mid.position() > 1e-6
            && mid.position() < 2.0 - 1e-6
        {
            let v = if mid.position() < 1.0 {
                r.gen_range(0.0..0.5)
            } else {
                r.gen_range(0.5..1.0)
            };
            let tab = TFunction::tabular(vec![(BinaryUtility::TIE, 0.5), (mid, v)]);
            if let Ok(tab) = tab {
                ensure!(
                    t_apply(&tab, a) < t_apply(&tab, b),
                    "tabular t not increasing"
                );
            }
        }
    }

    let pair = |r: &mut rand::rngs::StdRng| ScaledPair {
        lambda: r.gen_range(0.0..=1.0),
        rho: r.gen_range(0.0..=1.0),
    };
    for _ in 0..500 {
        let (x, y, z) = (pair(&mut r), pair(&mut r), pair(&mut r));
        ensure!(b_max(x, y) == b_max(y, x), "b_max not commutative");
        ensure!(
            b_max(b_max(x, y), z) == b_max(x, b_max(y, z)),
            "b_max not associative"
        );
        ensure!(b_max(x, x) == x, "b_max not idempotent");
        ensure!(b_max(x, ScaledPair::default()) == x, "<0,0> is not neutral");
        let b = random_binary(&mut r);
        ensure!(
            b_max(b_scale(1.0, b), b_scale(r.gen_range(0.0..1.0), b)) == b_scale(1.0, b),
            "scaling absorption"
        );
    }

    for case in 0..200 {
        let n = r.gen_range(1..=7);
        let m = random_pcb(&mut r, n);
        let d = decompose(&m).unwrap();
        let prizes = random_prizes(&mut r, 3);
        let t = TFunction::parametric(r.gen_range(0.05..0.95)).unwrap();
        let act = Act::new(
            "d",
            m.frame().clone(),
            random_act_prizes(&mut r, n, &prizes),
        )
        .unwrap();
        let before = mixed_utility(&induce_lottery(&act, &d).unwrap(), &prizes, &t).unwrap();
        let i = r.gen_range(0..n);
        let current = prizes.qu(act.prize(i)).unwrap();
        let better: Vec<&str> = prizes
            .iter()
            .filter(|(_, b)| b.position() >= current.position())
            .map(|(l, _)| l)
            .collect();
        let improved = act.with_prize(i, better[r.gen_range(0..better.len())]);
        let after = mixed_utility(&induce_lottery(&improved, &d).unwrap(), &prizes, &t).unwrap();
        ensure!(
            after >= before - EXACT,
            "case {case}: improvement lowered {before} to {after}"
        );

        let u = prizes.induced_utilities(&t);
        let lo = choquet_eu(
            &act,
            &SetFunction::from_mass(&m, SetFunctionKind::Belief).unwrap(),
            &u,
        )
        .unwrap();
        let hi = choquet_eu(
            &act,
            &SetFunction::from_mass(&m, SetFunctionKind::Plausibility).unwrap(),
            &u,
        )
        .unwrap();
        ensure!(lo <= hi + EXACT, "case {case}: CEU_Bel {lo} > CEU_Pl {hi}");
        let bet = expected_utility(&act_lottery(&act, &pignistic(&m)).unwrap(), &u).unwrap();
        ensure!(
            lo <= bet + EXACT && bet <= hi + EXACT,
            "case {case}: pignistic EU outside [CEU_Bel, CEU_Pl]"
        );
        plausibility_transform(&m).unwrap();
    }
    Ok("t monotone (1000 pairs), b_max laws, monotone improvement, CEU_Bel ≤ CEU_Pl (200)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("Ellsberg mixed utilities", ellsberg_mixed),
        ("Ellsberg preference pattern", ellsberg_pattern),
        ("pignistic transform", pignistic_row),
        ("plausibility transform", plausibility_row),
        ("Choquet values and reversal", choquet_values),
        ("Walley rule equals conditioning", walley_conditioning),
        ("Möbius round-trips", mobius_round_trips),
        ("pcb decomposition round-trip", pcb_round_trips),
        ("degenerate-rule collapse", degenerate_collapse),
        ("Bayes consistency", bayes_consistency),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
