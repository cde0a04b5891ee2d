//! Command implementations behind the `pcb` binary. Each command takes file
//! contents and returns the text to print, so they are testable without a
//! process boundary.

use serde::Serialize;
use serde_json::json;

use crate::acts::induce_lottery;
use crate::belief::{
    condition, dempster_combine, to_commonality, walley_combine, MassFunction, Subset,
};
use crate::error::{Error, ErrorKind, Result};
use crate::pcb::{decompose, detect_pcb, PcbVerdict};
use crate::problem::{DecisionProblem, ProblemFile};
use crate::rules::{compare_rules, pignistic, plausibility_transform, Ranking};
use crate::utility::{mixed_utility, qu_lottery, t_apply};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineRule {
    Dempster,
    Walley,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMethod {
    Pignistic,
    Plausibility,
}

/// Command-line overrides of values in the problem file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub attitude_c: Option<f64>,
    pub alpha: Option<f64>,
}

/// Text to print and the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub code: i32,
}

/// `%g`-style rendering with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn load(src: &str, o: Overrides) -> Result<DecisionProblem> {
    let mut p = DecisionProblem::from_json(src)?;
    if let Some(c) = o.attitude_c {
        p = p.with_attitude(c)?;
    }
    if let Some(a) = o.alpha {
        p = p.with_alpha(a)?;
    }
    Ok(p)
}

fn ranking_json(r: &Ranking, names: &[String]) -> serde_json::Value {
    json!({
        "order": r.order.iter().map(|&i| names[i].clone()).collect::<Vec<_>>(),
        "tied_with_previous": r.tied,
        "text": r.render(names),
    })
}

/// Structural check of a problem file and the partially consonant verdict.
///
/// Exit status: 0 when the file is valid and partially consonant, the error
/// class's code otherwise (5 for a valid but non-pcb belief function).
pub fn cmd_validate(src: &str, format: Format) -> Report {
    let problem = match DecisionProblem::from_json(src) {
        Ok(p) => p,
        Err(e) => {
            let text = match format {
                Format::Table => format!("invalid: {e}\n"),
                Format::Structured => to_json(&json!({
                    "valid": false,
                    "error_kind": format!("{:?}", e.kind()).to_lowercase(),
                    "error": e.to_string(),
                })),
            };
            return Report {
                text,
                code: e.kind().exit_code(),
            };
        }
    };
    let m = problem.mass();
    let frame = m.frame();
    let noun = if m.focal_count() == 1 {
        "focus"
    } else {
        "foci"
    };
    match detect_pcb(m) {
        PcbVerdict::Pcb(d) => {
            let blocks: Vec<Vec<String>> = d
                .blocks()
                .iter()
                .map(|b| frame.subset_labels(b.members))
                .collect();
            let text = match format {
                Format::Table => {
                    let shown: Vec<String> = d
                        .blocks()
                        .iter()
                        .map(|b| frame.format_subset(b.members))
                        .collect();
                    format!(
                        "valid: {} outcomes, {} {noun}, {} acts\npcb: yes, blocks {}\n",
                        frame.len(),
                        m.focal_count(),
                        problem.acts().len(),
                        shown.join(" ")
                    )
                }
                Format::Structured => to_json(&json!({
                    "valid": true,
                    "pcb": true,
                    "blocks": blocks,
                    "block_probs": d.block_probs(),
                })),
            };
            Report { text, code: 0 }
        }
        PcbVerdict::NotPcb { first, second } => {
            let text = match format {
                Format::Table => format!(
                    "valid: {} outcomes, {} {noun}, {} acts\npcb: no, foci {} and {} share a block but are not nested\n",
                    frame.len(),
                    m.focal_count(),
                    problem.acts().len(),
                    frame.format_subset(first),
                    frame.format_subset(second)
                ),
                Format::Structured => to_json(&json!({
                    "valid": true,
                    "pcb": false,
                    "offending_foci": [frame.subset_labels(first), frame.subset_labels(second)],
                })),
            };
            Report {
                text,
                code: ErrorKind::Structure.exit_code(),
            }
        }
    }
}

/// Mixed utility of every act, with the ranking.
pub fn cmd_evaluate(src: &str, o: Overrides, format: Format) -> Result<String> {
    let problem = load(src, o)?;
    let prizes = problem.require_prizes()?;
    let t = problem.require_t()?;
    let d = decompose(problem.mass()).map_err(|e| match e {
        Error::NotPcb { .. } => Error::Domain(format!(
            "{e}; the mixed rule needs a partially consonant belief \
             (`pcb compare` and `pcb transform --method pignistic` accept any belief function)"
        )),
        other => other,
    })?;
    let names: Vec<String> = problem
        .acts()
        .iter()
        .map(|a| a.name().to_string())
        .collect();

    let mut utilities = Vec::new();
    let mut details = Vec::new();
    for act in problem.acts() {
        let lottery = induce_lottery(act, &d)?;
        let u = mixed_utility(&lottery, prizes, t)?;
        let branches = lottery
            .branches()
            .filter(|(p, _)| *p > 0.0)
            .map(|(p, branch)| {
                let qu = qu_lottery(branch, prizes)?;
                Ok(json!({
                    "probability": p,
                    "possibilities": branch,
                    "qu": [qu.lambda(), qu.rho()],
                    "t": t_apply(t, qu),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        details.push(json!({ "name": act.name(), "utility": u, "branches": branches }));
        utilities.push(u);
    }
    let ranking = Ranking::from_utilities(&utilities);

    Ok(match format {
        Format::Structured => to_json(&json!({
            "attitude": t.attitude(),
            "acts": details,
            "ranking": ranking_json(&ranking, &names),
        })),
        Format::Table => {
            let pos = ranking.positions();
            let mut rows = vec![vec![
                "act".to_string(),
                "mixed utility".into(),
                "rank".into(),
            ]];
            for (i, name) in names.iter().enumerate() {
                let tie = (0..names.len()).any(|j| j != i && pos[j] == pos[i]);
                rows.push(vec![
                    name.clone(),
                    sig6(utilities[i]),
                    format!("{}{}", pos[i] + 1, if tie { " (tie)" } else { "" }),
                ]);
            }
            let mut out = format!("attitude t(<1,1>) = {}\n", sig6(t.attitude()));
            out.push_str(&table(&rows));
            if !names.is_empty() {
                out.push_str(&format!("ranking: {}\n", ranking.render(&names)));
            }
            out
        }
    })
}

/// Every act under every decision rule, plus the transformed probabilities.
pub fn cmd_compare(src: &str, o: Overrides, format: Format) -> Result<String> {
    let problem = load(src, o)?;
    let c = compare_rules(&problem)?;
    Ok(match format {
        Format::Structured => {
            let rules: Vec<_> = c
                .rules
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "rule": r.rule.name(),
                        "utilities": c.acts.iter().cloned().zip(r.utilities.iter().copied())
                            .collect::<indexmap::IndexMap<String, f64>>(),
                        "ranking": ranking_json(&r.ranking, &c.acts),
                    });
                    if let crate::rules::Rule::Hurwicz { alpha } = r.rule {
                        v["alpha"] = json!(alpha);
                    }
                    v
                })
                .collect();
            let probs = |p: &[f64]| {
                c.outcomes
                    .iter()
                    .cloned()
                    .zip(p.iter().copied())
                    .collect::<indexmap::IndexMap<String, f64>>()
            };
            to_json(&json!({
                "transforms": {
                    "pignistic": probs(&c.pignistic),
                    "plausibility": probs(&c.plausibility),
                },
                "rules": rules,
            }))
        }
        Format::Table => {
            let mut rows = vec![std::iter::once("outcome".to_string())
                .chain(c.outcomes.iter().cloned())
                .collect::<Vec<_>>()];
            rows.push(
                std::iter::once("P_pignistic".to_string())
                    .chain(c.pignistic.iter().map(|&v| sig6(v)))
                    .collect(),
            );
            rows.push(
                std::iter::once("P_plausibility".to_string())
                    .chain(c.plausibility.iter().map(|&v| sig6(v)))
                    .collect(),
            );
            let mut out = table(&rows);
            out.push('\n');
            let mut rows = vec![std::iter::once("act".to_string())
                .chain(c.rules.iter().map(|r| r.rule.to_string()))
                .collect::<Vec<_>>()];
            for (i, name) in c.acts.iter().enumerate() {
                rows.push(
                    std::iter::once(name.clone())
                        .chain(c.rules.iter().map(|r| sig6(r.utilities[i])))
                        .collect(),
                );
            }
            out.push_str(&table(&rows));
            if !c.acts.is_empty() {
                out.push('\n');
                let rows: Vec<Vec<String>> = c
                    .rules
                    .iter()
                    .map(|r| vec![format!("{}:", r.rule), r.ranking.render(&c.acts)])
                    .collect();
                out.push_str(&table(&rows));
            }
            out
        }
    })
}

fn mass_table(m: &MassFunction) -> String {
    let frame = m.frame();
    let mut rows = vec![vec!["focus".to_string(), "mass".into()]];
    rows.extend(
        m.focal()
            .map(|(s, v)| vec![frame.format_subset(s), sig6(v)]),
    );
    table(&rows)
}

/// Combines two belief functions on the same frame.
pub fn cmd_combine(src1: &str, src2: &str, rule: CombineRule, format: Format) -> Result<String> {
    let a = DecisionProblem::from_json(src1)?;
    let b = DecisionProblem::from_json(src2)?;
    let (m1, m2) = (a.mass(), b.mass());
    if m1.frame() != m2.frame() {
        return Err(Error::FrameMismatch);
    }
    let m = match rule {
        CombineRule::Dempster => dempster_combine(m1, m2)?,
        CombineRule::Walley => {
            walley_combine(&to_commonality(m1)?, &to_commonality(m2)?)?.to_mass()?
        }
    };
    Ok(match format {
        Format::Structured => {
            let mut s = ProblemFile::from_mass(&m).to_json();
            s.push('\n');
            s
        }
        Format::Table => mass_table(&m),
    })
}

/// Probability transform of the file's belief function.
pub fn cmd_transform(src: &str, method: TransformMethod, format: Format) -> Result<String> {
    let problem = DecisionProblem::from_json(src)?;
    let m = problem.mass();
    let (name, p) = match method {
        TransformMethod::Pignistic => ("pignistic", pignistic(m)),
        TransformMethod::Plausibility => ("plausibility", plausibility_transform(m)?),
    };
    let frame = m.frame();
    let probs: Vec<f64> = (0..frame.len())
        .map(|i| p.mass(Subset::singleton(i)))
        .collect();
    Ok(match format {
        Format::Structured => to_json(&json!({
            "method": name,
            "probabilities": frame.labels().iter().cloned().zip(probs)
                .collect::<indexmap::IndexMap<String, f64>>(),
        })),
        Format::Table => {
            let rows = vec![
                std::iter::once("outcome".to_string())
                    .chain(frame.labels().iter().cloned())
                    .collect::<Vec<_>>(),
                std::iter::once(format!("P_{name}"))
                    .chain(probs.iter().map(|&v| sig6(v)))
                    .collect(),
            ];
            table(&rows)
        }
    })
}

/// Block probabilities and conditional possibilities; structured output is
/// a problem document in the `pcb` variant.
pub fn cmd_decompose(src: &str, format: Format) -> Result<String> {
    let problem = DecisionProblem::from_json(src)?;
    let d = decompose(problem.mass())?;
    Ok(match format {
        Format::Structured => {
            let mut s = ProblemFile::from_decomposition(&d).to_json();
            s.push('\n');
            s
        }
        Format::Table => {
            let frame = d.frame();
            let mut rows = vec![vec![
                "block".to_string(),
                "probability".into(),
                "possibilities".into(),
            ]];
            for b in d.blocks() {
                let pis: Vec<String> = b
                    .members
                    .indices()
                    .map(|i| format!("{}={}", frame.label(i), sig6(d.possibility(i))))
                    .collect();
                rows.push(vec![
                    frame.format_subset(b.members),
                    sig6(b.prob),
                    pis.join(" "),
                ]);
            }
            table(&rows)
        }
    })
}

/// Conditions the file's belief function on an event given by labels.
pub fn cmd_condition(src: &str, event: &[String], format: Format) -> Result<String> {
    let problem = DecisionProblem::from_json(src)?;
    let m = problem.mass();
    let b = m.frame().subset(event)?;
    let c = condition(m, b)?;
    Ok(match format {
        Format::Structured => {
            let mut s = ProblemFile::from_mass(&c).to_json();
            s.push('\n');
            s
        }
        Format::Table => mass_table(&c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(4.0 / 15.0), "0.266667");
        assert_eq!(sig6(0.6), "0.6");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(123.456789), "123.457");
        assert_eq!(sig6(-1e-17), "-1.00000e-17");
    }
}
