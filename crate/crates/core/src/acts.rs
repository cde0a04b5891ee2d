//! Acts and the lotteries they induce under a partially consonant belief.

use indexmap::IndexMap;

use crate::belief::{Frame, MassFunction, Subset, MASS_TOLERANCE};
use crate::error::{Error, Result};
use crate::pcb::{decompose, PcbDecomposition};
use crate::utility::PrizeAssignment;

/// A total map from outcomes to prize labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Act {
    name: String,
    frame: Frame,
    prizes: Vec<String>,
}

impl Act {
    /// `prizes[i]` is the prize delivered when outcome `i` obtains.
    pub fn new(name: impl Into<String>, frame: Frame, prizes: Vec<String>) -> Result<Self> {
        let name = name.into();
        if prizes.len() != frame.len() {
            let missing = frame.labels().get(prizes.len()).cloned();
            return match missing {
                Some(outcome) => Err(Error::IncompleteAct { act: name, outcome }),
                None => Err(Error::InvalidAct(format!(
                    "act `{name}` maps {} outcomes on a frame of {}",
                    prizes.len(),
                    frame.len()
                ))),
            };
        }
        Ok(Act {
            name,
            frame,
            prizes,
        })
    }

    /// Builds an act from outcome-label keys. Every outcome must be mapped.
    pub fn from_map<'a, I>(name: impl Into<String>, frame: Frame, assignment: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let name = name.into();
        let mut prizes: Vec<Option<String>> = vec![None; frame.len()];
        for (outcome, prize) in assignment {
            let i = frame
                .index_of(outcome)
                .ok_or_else(|| Error::UnknownOutcome(outcome.to_string()))?;
            if prizes[i].replace(prize.to_string()).is_some() {
                return Err(Error::InvalidAct(format!(
                    "act `{name}` maps `{outcome}` twice"
                )));
            }
        }
        let prizes = prizes
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| Error::IncompleteAct {
                    act: name.clone(),
                    outcome: frame.label(i).to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Act {
            name,
            frame,
            prizes,
        })
    }

    /// The act delivering `prize` everywhere.
    pub fn constant(name: impl Into<String>, frame: Frame, prize: &str) -> Self {
        let prizes = vec![prize.to_string(); frame.len()];
        Act {
            name: name.into(),
            frame,
            prizes,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn prize(&self, outcome: usize) -> &str {
        &self.prizes[outcome]
    }

    pub fn prizes(&self) -> &[String] {
        &self.prizes
    }

    /// Distinct prizes in order of first appearance.
    pub fn distinct_prizes(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for p in &self.prizes {
            if !out.contains(&p.as_str()) {
                out.push(p);
            }
        }
        out
    }

    /// `d⁻¹(prize)`.
    pub fn preimage(&self, prize: &str) -> Subset {
        Subset::from_indices(
            self.prizes
                .iter()
                .enumerate()
                .filter(|(_, p)| *p == prize)
                .map(|(i, _)| i),
        )
    }

    /// Replaces the prize at one outcome.
    pub fn with_prize(&self, outcome: usize, prize: &str) -> Act {
        let mut next = self.clone();
        next.prizes[outcome] = prize.to_string();
        next
    }

    pub fn check_prizes(&self, prizes: &PrizeAssignment) -> Result<()> {
        match self.prizes.iter().find(|p| !prizes.contains(p)) {
            Some(p) => Err(Error::UnknownPrize(p.clone())),
            None => Ok(()),
        }
    }
}

/// `[p_1/L_1, ..., p_s/L_s]`: a probability over blocks, each block carrying
/// a possibilistic lottery over prizes.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageLottery {
    branches: Vec<(f64, IndexMap<String, f64>)>,
}

impl TwoStageLottery {
    pub fn new(branches: Vec<(f64, IndexMap<String, f64>)>) -> Result<Self> {
        let mut total = 0.0;
        for (p, branch) in &branches {
            if !p.is_finite() || *p < -MASS_TOLERANCE {
                return Err(Error::OutOfRange {
                    name: "block probability",
                    value: *p,
                    range: "[0, 1]",
                });
            }
            total += p;
            if *p > 0.0 {
                let top = branch.values().copied().fold(0.0, f64::max);
                if (top - 1.0).abs() > MASS_TOLERANCE {
                    return Err(Error::NotNormalized {
                        what: "branch possibilities (maximum)".into(),
                        total: top,
                    });
                }
            }
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NotNormalized {
                what: "block probabilities".into(),
                total,
            });
        }
        Ok(TwoStageLottery { branches })
    }

    pub fn branches(&self) -> impl Iterator<Item = (f64, &IndexMap<String, f64>)> {
        self.branches.iter().map(|(p, b)| (*p, b))
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }
}

/// The two-stage lottery an act induces: block probabilities from the
/// decomposition, and in block i the possibility of prize w given by
/// `max{π(θ) | θ ∈ A_i, d(θ) = w}`.
pub fn induce_lottery(d: &Act, u: &PcbDecomposition) -> Result<TwoStageLottery> {
    if d.frame() != u.frame() {
        return Err(Error::FrameMismatch);
    }
    let branches = u
        .blocks()
        .iter()
        .map(|b| {
            let mut branch: IndexMap<String, f64> = IndexMap::new();
            for i in b.members.indices() {
                let entry = branch.entry(d.prize(i).to_string()).or_insert(0.0);
                *entry = entry.max(u.possibility(i));
            }
            (b.prob, branch)
        })
        .collect();
    TwoStageLottery::new(branches)
}

/// `[a_1/w_1, ...]` with `a_i = Pl(d⁻¹(w_i))`. Not normalized in general.
pub fn flat_lottery(d: &Act, m: &MassFunction) -> Result<IndexMap<String, f64>> {
    if d.frame() != m.frame() {
        return Err(Error::FrameMismatch);
    }
    Ok(d.distinct_prizes()
        .into_iter()
        .map(|w| (w.to_string(), m.plausibility(d.preimage(w))))
        .collect())
}

/// One outer branch of a compound lottery: event `E_i` and the inner
/// lottery's events `E_ij` with the prizes they deliver.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundBranch {
    pub event: Subset,
    pub inner: Vec<(Subset, String)>,
}

/// A lottery whose prizes are lotteries, realized by events of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundLottery {
    frame: Frame,
    branches: Vec<CompoundBranch>,
}

impl CompoundLottery {
    /// Outer events must partition the frame; inside each outer event the
    /// inner events must partition it again.
    pub fn new(frame: Frame, branches: Vec<CompoundBranch>) -> Result<Self> {
        let mut covered = Subset::EMPTY;
        for b in &branches {
            if b.event.is_empty()
                || b.event.intersects(covered)
                || !b.event.is_subset_of(frame.full())
            {
                return Err(Error::Domain(format!(
                    "outer event {} is empty, overlaps another, or leaves the frame",
                    frame.format_subset(b.event)
                )));
            }
            covered = covered.union(b.event);
            let mut inner_cover = Subset::EMPTY;
            for (e, _) in &b.inner {
                let part = e.intersection(b.event);
                if part.intersects(inner_cover) {
                    return Err(Error::Domain(format!(
                        "inner events overlap inside {}",
                        frame.format_subset(b.event)
                    )));
                }
                inner_cover = inner_cover.union(part);
            }
            if inner_cover != b.event {
                return Err(Error::Domain(format!(
                    "inner events do not cover {}",
                    frame.format_subset(b.event)
                )));
            }
        }
        if covered != frame.full() {
            return Err(Error::Domain("outer events do not cover the frame".into()));
        }
        Ok(CompoundLottery { frame, branches })
    }

    /// The compound view of an act over the blocks of a decomposition.
    pub fn from_blocks(d: &Act, u: &PcbDecomposition) -> Result<Self> {
        if d.frame() != u.frame() {
            return Err(Error::FrameMismatch);
        }
        let branches = u
            .blocks()
            .iter()
            .map(|b| CompoundBranch {
                event: b.members,
                inner: d
                    .distinct_prizes()
                    .into_iter()
                    .map(|w| (d.preimage(w), w.to_string()))
                    .collect(),
            })
            .collect();
        CompoundLottery::new(d.frame().clone(), branches)
    }

    pub fn branches(&self) -> &[CompoundBranch] {
        &self.branches
    }

    /// The act that delivers, at each outcome, the prize of its inner event.
    pub fn composed_act(&self, name: &str) -> Act {
        let mut prizes = vec![String::new(); self.frame.len()];
        for b in &self.branches {
            for (e, w) in &b.inner {
                for i in e.intersection(b.event).indices() {
                    prizes[i] = w.clone();
                }
            }
        }
        Act {
            name: name.to_string(),
            frame: self.frame.clone(),
            prizes,
        }
    }

    /// Outer plausibilities `Pl(E_i)` and inner conditionals `Pl(E_ij | E_i)`.
    pub fn plausibilities(&self, m: &MassFunction) -> Vec<(f64, IndexMap<String, f64>)> {
        self.branches
            .iter()
            .map(|b| {
                let outer = m.plausibility(b.event);
                let inner = b
                    .inner
                    .iter()
                    .map(|(e, w)| {
                        let v = if outer > 0.0 {
                            m.plausibility(e.intersection(b.event)) / outer
                        } else {
                            0.0
                        };
                        (w.clone(), v)
                    })
                    .collect();
                (outer, inner)
            })
            .collect()
    }
}

/// Reduces a compound lottery to a simple one: prize w_j gets `Pl(S_j)` with
/// `S_j = ∪_i (E_i ∩ E_ij)`. The context must be partially consonant.
pub fn reduce_compound(outer: &CompoundLottery, m: &MassFunction) -> Result<IndexMap<String, f64>> {
    if outer.frame != *m.frame() {
        return Err(Error::FrameMismatch);
    }
    decompose(m)?;
    let mut events: IndexMap<String, Subset> = IndexMap::new();
    for b in &outer.branches {
        for (e, w) in &b.inner {
            let s = events.entry(w.clone()).or_insert(Subset::EMPTY);
            *s = s.union(e.intersection(b.event));
        }
    }
    Ok(events
        .into_iter()
        .filter(|(_, s)| !s.is_empty())
        .map(|(w, s)| (w, m.plausibility(s)))
        .collect())
}
