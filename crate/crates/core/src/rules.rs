//! Competing decision rules: probability transforms followed by expected
//! utility, Choquet expected utility, and the Hurwicz criterion.

use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;

use crate::acts::{induce_lottery, Act};
use crate::belief::{MassFunction, SetFunction, SetFunctionKind, Subset};
use crate::error::{Error, Result};
use crate::pcb::decompose;
use crate::problem::DecisionProblem;
use crate::utility::{expected_utility, mixed_utility};

/// Utilities closer than this rank as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Splits each focal mass equally among the focus's outcomes.
pub fn pignistic(m: &MassFunction) -> MassFunction {
    let mut probs = vec![0.0; m.frame().len()];
    for (s, v) in m.focal() {
        let share = v / s.len() as f64;
        for i in s.indices() {
            probs[i] += share;
        }
    }
    MassFunction::probability(m.frame().clone(), &probs).expect("shares of unit mass sum to one")
}

/// Normalizes the singleton plausibilities.
pub fn plausibility_transform(m: &MassFunction) -> Result<MassFunction> {
    let pl = m.singleton_plausibilities();
    let total: f64 = pl.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("singleton plausibilities"));
    }
    let probs: Vec<f64> = pl.iter().map(|v| v / total).collect();
    MassFunction::probability(m.frame().clone(), &probs)
}

/// The probability lottery over prizes that an act induces.
pub fn act_lottery(d: &Act, p: &MassFunction) -> Result<IndexMap<String, f64>> {
    if d.frame() != p.frame() {
        return Err(Error::FrameMismatch);
    }
    if !p.is_probability() {
        return Err(Error::Domain("expected a Bayesian mass function".into()));
    }
    let mut out: IndexMap<String, f64> = IndexMap::new();
    for i in 0..d.frame().len() {
        *out.entry(d.prize(i).to_string()).or_insert(0.0) += p.mass(Subset::singleton(i));
    }
    Ok(out)
}

/// Choquet integral of the act's utility profile against capacity `v`.
/// Prizes of equal utility are merged into one event before summing.
pub fn choquet_eu(d: &Act, v: &SetFunction, u: &IndexMap<String, f64>) -> Result<f64> {
    if d.frame() != v.frame() {
        return Err(Error::FrameMismatch);
    }
    v.validate_capacity()?;
    let mut levels: Vec<(f64, Subset)> = Vec::new();
    for w in d.distinct_prizes() {
        let uw = *u.get(w).ok_or_else(|| Error::UnknownPrize(w.to_string()))?;
        if !uw.is_finite() || !(0.0..=1.0).contains(&uw) {
            return Err(Error::OutOfRange {
                name: "utility",
                value: uw,
                range: "[0, 1]",
            });
        }
        let e = d.preimage(w);
        match levels.iter_mut().find(|(x, _)| (x - uw).abs() <= 1e-12) {
            Some((_, s)) => *s = s.union(e),
            None => levels.push((uw, e)),
        }
    }
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut cumulative = Subset::EMPTY;
    let mut total = 0.0;
    for (k, &(w, e)) in levels.iter().enumerate() {
        cumulative = cumulative.union(e);
        let next = levels.get(k + 1).map_or(0.0, |l| l.0);
        total += (w - next) * v.value(cumulative);
    }
    Ok(total)
}

/// `α·CEU_Bel + (1-α)·CEU_Pl`: lower and upper expectations over the credal
/// set of `m`, blended by the pessimism index α.
pub fn jaffray_hurwicz(
    d: &Act,
    m: &MassFunction,
    u: &IndexMap<String, f64>,
    alpha: f64,
) -> Result<f64> {
    if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, 1]",
        });
    }
    let lower = choquet_eu(d, &SetFunction::from_mass(m, SetFunctionKind::Belief)?, u)?;
    let upper = choquet_eu(
        d,
        &SetFunction::from_mass(m, SetFunctionKind::Plausibility)?,
        u,
    )?;
    Ok(alpha * lower + (1.0 - alpha) * upper)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum Rule {
    Mixed,
    PignisticEu,
    PlausibilityEu,
    CeuBel,
    CeuPl,
    Hurwicz { alpha: f64 },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Mixed => "mixed",
            Rule::PignisticEu => "pignistic_eu",
            Rule::PlausibilityEu => "plausibility_eu",
            Rule::CeuBel => "ceu_bel",
            Rule::CeuPl => "ceu_pl",
            Rule::Hurwicz { .. } => "hurwicz",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Hurwicz { alpha } => write!(f, "hurwicz(α={alpha})"),
            r => f.write_str(r.name()),
        }
    }
}

/// Acts ordered best first. `tied[k]` marks `order[k]` as tied with
/// `order[k-1]`; ties keep declaration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub order: Vec<usize>,
    pub tied: Vec<bool>,
}

impl Ranking {
    pub fn from_utilities(utilities: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..utilities.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (utilities[a], utilities[b]);
            if (x - y).abs() <= TIE_TOLERANCE {
                a.cmp(&b)
            } else {
                y.total_cmp(&x)
            }
        });
        let tied = order
            .iter()
            .enumerate()
            .map(|(k, &i)| k > 0 && (utilities[order[k - 1]] - utilities[i]).abs() <= TIE_TOLERANCE)
            .collect();
        Ranking { order, tied }
    }

    /// Rank position of each act; tied acts share a position.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        let mut current = 0;
        for (k, &i) in self.order.iter().enumerate() {
            if k > 0 && !self.tied[k] {
                current = k;
            }
            pos[i] = current;
        }
        pos
    }

    /// `a ≻ b` under this ranking.
    pub fn strictly_prefers(&self, a: usize, b: usize) -> bool {
        let pos = self.positions();
        pos[a] < pos[b]
    }

    pub fn is_tie(&self, a: usize, b: usize) -> bool {
        let pos = self.positions();
        pos[a] == pos[b]
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (k, &i) in self.order.iter().enumerate() {
            if k > 0 {
                out.push_str(if self.tied[k] { " ~ " } else { " ≻ " });
            }
            out.push_str(&names[i]);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleResult {
    pub rule: Rule,
    pub utilities: Vec<f64>,
    pub ranking: Ranking,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleComparison {
    pub outcomes: Vec<String>,
    pub acts: Vec<String>,
    pub pignistic: Vec<f64>,
    pub plausibility: Vec<f64>,
    pub rules: Vec<RuleResult>,
}

impl RuleComparison {
    pub fn rule(&self, rule: &str) -> Option<&RuleResult> {
        self.rules.iter().find(|r| r.rule.name() == rule)
    }
}

fn probs_of(m: &MassFunction) -> Vec<f64> {
    (0..m.frame().len())
        .map(|i| m.mass(Subset::singleton(i)))
        .collect()
}

/// Scores every act of the problem under every rule. Prize utilities for the
/// non-mixed rules are `t(qu(w))`, so all rules see the same prize values.
/// The Hurwicz rule appears only when the problem sets α.
pub fn compare_rules(problem: &DecisionProblem) -> Result<RuleComparison> {
    let m = problem.mass();
    let prizes = problem.require_prizes()?;
    let t = problem.require_t()?;
    let u = prizes.induced_utilities(t);
    let decomposition = decompose(m)?;
    let bet = pignistic(m);
    let pla = plausibility_transform(m)?;
    let bel = SetFunction::from_mass(m, SetFunctionKind::Belief)?;
    let pl = SetFunction::from_mass(m, SetFunctionKind::Plausibility)?;

    let mut rules = vec![
        Rule::Mixed,
        Rule::PignisticEu,
        Rule::PlausibilityEu,
        Rule::CeuBel,
        Rule::CeuPl,
    ];
    if let Some(alpha) = problem.alpha() {
        rules.push(Rule::Hurwicz { alpha });
    }

    let results = rules
        .into_iter()
        .map(|rule| {
            let utilities = problem
                .acts()
                .iter()
                .map(|d| match rule {
                    Rule::Mixed => mixed_utility(&induce_lottery(d, &decomposition)?, prizes, t),
                    Rule::PignisticEu => expected_utility(&act_lottery(d, &bet)?, &u),
                    Rule::PlausibilityEu => expected_utility(&act_lottery(d, &pla)?, &u),
                    Rule::CeuBel => choquet_eu(d, &bel, &u),
                    Rule::CeuPl => choquet_eu(d, &pl, &u),
                    Rule::Hurwicz { alpha } => jaffray_hurwicz(d, m, &u, alpha),
                })
                .collect::<Result<Vec<f64>>>()?;
            let ranking = Ranking::from_utilities(&utilities);
            Ok(RuleResult {
                rule,
                utilities,
                ranking,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RuleComparison {
        outcomes: m.frame().labels().to_vec(),
        acts: problem
            .acts()
            .iter()
            .map(|a| a.name().to_string())
            .collect(),
        pignistic: probs_of(&bet),
        plausibility: probs_of(&pla),
        rules: results,
    })
}
