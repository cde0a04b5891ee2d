//! Partially consonant belief functions: recognition, decomposition into a
//! block probability plus per-block possibility distributions, recomposition,
//! and construction from likelihoods and priors.

use crate::belief::{Frame, MassFunction, Subset, MASS_TOLERANCE};
use crate::error::{Error, Result};

const ZERO: f64 = 1e-12;

/// One cell of the partition and its probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub members: Subset,
    pub prob: f64,
}

/// A probability over the blocks of a partition together with a conditional
/// possibility distribution inside each block.
///
/// `possibility[θ]` is the possibility of outcome θ given its own block, so a
/// single vector over the frame holds every block's distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PcbDecomposition {
    frame: Frame,
    blocks: Vec<Block>,
    possibility: Vec<f64>,
}

impl PcbDecomposition {
    pub fn new(frame: Frame, blocks: Vec<(Subset, f64)>, possibility: Vec<f64>) -> Result<Self> {
        validate_partition(&frame, blocks.iter().map(|(s, _)| *s))?;
        if possibility.len() != frame.len() {
            return Err(Error::InvalidDecomposition(format!(
                "expected {} possibility values, got {}",
                frame.len(),
                possibility.len()
            )));
        }
        if blocks.iter().any(|(_, p)| !p.is_finite()) || possibility.iter().any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("decomposition"));
        }
        for (_, p) in &blocks {
            if *p < -MASS_TOLERANCE {
                return Err(Error::OutOfRange {
                    name: "block probability",
                    value: *p,
                    range: "[0, 1]",
                });
            }
        }
        let total: f64 = blocks.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NotNormalized {
                what: "block probabilities".into(),
                total,
            });
        }
        if let Some(&v) = possibility
            .iter()
            .find(|v| !(-MASS_TOLERANCE..=1.0 + MASS_TOLERANCE).contains(*v))
        {
            return Err(Error::OutOfRange {
                name: "possibility",
                value: v,
                range: "[0, 1]",
            });
        }
        for (s, p) in &blocks {
            if *p > ZERO {
                let top = s.indices().map(|i| possibility[i]).fold(0.0, f64::max);
                if (top - 1.0).abs() > MASS_TOLERANCE {
                    return Err(Error::InvalidDecomposition(format!(
                        "possibilities in block {} peak at {top}, not 1",
                        frame.format_subset(*s)
                    )));
                }
            }
        }
        let blocks = blocks
            .into_iter()
            .map(|(members, prob)| Block {
                members,
                prob: prob.max(0.0),
            })
            .collect();
        let possibility = possibility.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(PcbDecomposition {
            frame,
            blocks,
            possibility,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_probs(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.prob).collect()
    }

    /// Conditional possibility of outcome `index` within its block.
    pub fn possibility(&self, index: usize) -> f64 {
        self.possibility[index]
    }

    pub fn possibilities(&self) -> &[f64] {
        &self.possibility
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.members.contains(index))
            .expect("blocks partition the frame")
    }

    /// Plausibility of `a` recovered from the decomposition:
    /// `Σ_i p_i · max{π(θ) | θ ∈ a ∩ A_i}`.
    pub fn plausibility(&self, a: Subset) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let top = a
                    .intersection(b.members)
                    .indices()
                    .map(|i| self.possibility[i])
                    .fold(0.0, f64::max);
                b.prob * top
            })
            .sum()
    }

    pub fn approx_eq(&self, other: &PcbDecomposition, tol: f64) -> bool {
        self.frame == other.frame
            && self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(x, y)| x.members == y.members && (x.prob - y.prob).abs() <= tol)
            && self
                .possibility
                .iter()
                .zip(&other.possibility)
                .all(|(x, y)| (x - y).abs() <= tol)
    }
}

fn validate_partition<I: IntoIterator<Item = Subset>>(frame: &Frame, blocks: I) -> Result<()> {
    let mut covered = Subset::EMPTY;
    let mut count = 0;
    for s in blocks {
        count += 1;
        if s.is_empty() {
            return Err(Error::InvalidDecomposition("empty block".into()));
        }
        if !s.is_subset_of(frame.full()) {
            return Err(Error::InvalidDecomposition(
                "block outside the frame".into(),
            ));
        }
        if s.intersects(covered) {
            return Err(Error::InvalidDecomposition(format!(
                "blocks overlap on {}",
                frame.format_subset(s.intersection(covered))
            )));
        }
        covered = covered.union(s);
    }
    if count == 0 || covered != frame.full() {
        return Err(Error::InvalidDecomposition(format!(
            "blocks do not cover {}",
            frame.format_subset(frame.complement(covered))
        )));
    }
    Ok(())
}

/// Outcome of [`detect_pcb`].
#[derive(Debug, Clone, PartialEq)]
pub enum PcbVerdict {
    Pcb(PcbDecomposition),
    /// Two foci that fall in the same block without being nested.
    NotPcb {
        first: Subset,
        second: Subset,
    },
}

/// Finds the finest partition under which every focus sits inside one block
/// and the foci of each block form a chain.
///
/// Blocks are the connected components of the "foci intersect" graph, ordered
/// by their first outcome. Outcomes in no focus form one trailing block with
/// probability zero.
pub fn detect_pcb(m: &MassFunction) -> PcbVerdict {
    let frame = m.frame();
    // (union, foci with masses)
    let mut components: Vec<(Subset, Vec<(Subset, f64)>)> = Vec::new();
    for (focus, mass) in m.focal() {
        let mut merged = (focus, vec![(focus, mass)]);
        let mut i = 0;
        while i < components.len() {
            if components[i].0.intersects(focus) {
                let (u, fs) = components.swap_remove(i);
                merged.0 = merged.0.union(u);
                merged.1.extend(fs);
            } else {
                i += 1;
            }
        }
        components.push(merged);
    }

    for (_, foci) in &mut components {
        foci.sort_by_key(|(s, _)| (s.len(), s.bits()));
        for (i, (x, _)) in foci.iter().enumerate() {
            for (y, _) in &foci[i + 1..] {
                if !x.is_subset_of(*y) {
                    return PcbVerdict::NotPcb {
                        first: *x,
                        second: *y,
                    };
                }
            }
        }
    }
    components.sort_by_key(|(u, _)| u.first());

    let mut possibility = vec![0.0; frame.len()];
    let mut blocks = Vec::with_capacity(components.len() + 1);
    for (union, foci) in &components {
        let prob: f64 = foci.iter().map(|(_, v)| v).sum();
        for i in union.indices() {
            let pl: f64 = foci
                .iter()
                .filter(|(s, _)| s.contains(i))
                .map(|(_, v)| v)
                .sum();
            possibility[i] = (pl / prob).min(1.0);
        }
        blocks.push((*union, prob));
    }
    let covered = components
        .iter()
        .fold(Subset::EMPTY, |acc, (u, _)| acc.union(*u));
    let rest = frame.complement(covered);
    if !rest.is_empty() {
        blocks.push((rest, 0.0));
    }
    match PcbDecomposition::new(frame.clone(), blocks, possibility) {
        Ok(d) => PcbVerdict::Pcb(d),
        Err(e) => unreachable!("decomposition of a valid mass function failed: {e}"),
    }
}

/// [`detect_pcb`] as a fallible conversion.
pub fn decompose(m: &MassFunction) -> Result<PcbDecomposition> {
    match detect_pcb(m) {
        PcbVerdict::Pcb(d) => Ok(d),
        PcbVerdict::NotPcb { first, second } => Err(Error::NotPcb {
            first: m.frame().format_subset(first),
            second: m.frame().format_subset(second),
        }),
    }
}

/// Rebuilds the mass function: inside each block the foci are the nested
/// level sets of π, each weighted by the block probability times the drop to
/// the next level.
pub fn recompose(d: &PcbDecomposition) -> MassFunction {
    let mut entries = Vec::new();
    for b in d.blocks.iter().filter(|b| b.prob > ZERO) {
        let mut levels: Vec<(usize, f64)> = b
            .members
            .indices()
            .map(|i| (i, d.possibility[i]))
            .filter(|(_, v)| *v > ZERO)
            .collect();
        levels.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        let top = levels[0].1;
        let mut set = Subset::EMPTY;
        for (k, &(i, v)) in levels.iter().enumerate() {
            set = set.union(Subset::singleton(i));
            let next = levels.get(k + 1).map_or(0.0, |l| l.1);
            let drop = (v - next) / top;
            if drop > 0.0 {
                entries.push((set, b.prob * drop));
            }
        }
    }
    MassFunction::renormalized(d.frame.clone(), entries)
        .expect("a validated decomposition carries unit mass")
}

/// A likelihood vector over the parameter space, rescaled so its maximum is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodVector {
    frame: Frame,
    values: Vec<f64>,
}

impl LikelihoodVector {
    pub fn new(frame: Frame, values: Vec<f64>) -> Result<Self> {
        if values.len() != frame.len() {
            return Err(Error::InvalidProblem(format!(
                "likelihood has {} components for {} outcomes",
                values.len(),
                frame.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("likelihood"));
        }
        if let Some(&v) = values.iter().find(|v| **v < 0.0) {
            return Err(Error::OutOfRange {
                name: "likelihood",
                value: v,
                range: "[0, ∞)",
            });
        }
        let top = values.iter().copied().fold(0.0, f64::max);
        if top <= 0.0 {
            return Err(Error::Degenerate("likelihood"));
        }
        Ok(LikelihoodVector {
            frame,
            values: values.into_iter().map(|v| v / top).collect(),
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            range: "(0, ∞)",
        })
    }
}

/// The decomposition induced by a likelihood on a partition: block
/// probabilities proportional to each block's best scaled likelihood, and
/// within each block the scaled likelihood relative to that best value.
/// Blocks whose likelihood vanishes get probability zero.
pub fn likelihood_decomposition(
    tau: &LikelihoodVector,
    blocks: &[Subset],
    lambda: f64,
) -> Result<PcbDecomposition> {
    check_lambda(lambda)?;
    let frame = tau.frame().clone();
    validate_partition(&frame, blocks.iter().copied())?;
    let scaled: Vec<f64> = tau.values.iter().map(|v| v.powf(lambda)).collect();
    let tops: Vec<f64> = blocks
        .iter()
        .map(|b| b.indices().map(|i| scaled[i]).fold(0.0, f64::max))
        .collect();
    let total: f64 = tops.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("likelihood"));
    }
    let mut possibility = vec![0.0; frame.len()];
    for (b, &top) in blocks.iter().zip(&tops) {
        if top > 0.0 {
            for i in b.indices() {
                possibility[i] = scaled[i] / top;
            }
        }
    }
    let cells = blocks
        .iter()
        .zip(&tops)
        .map(|(b, top)| (*b, top / total))
        .collect();
    PcbDecomposition::new(frame, cells, possibility)
}

/// The partially consonant mass function that a likelihood induces on a
/// partition. Singleton plausibilities are `τ_i^λ / Σ_j max_{θ∈A_j} τ^λ`.
pub fn pcb_from_likelihood(
    tau: &LikelihoodVector,
    blocks: &[Subset],
    lambda: f64,
) -> Result<MassFunction> {
    likelihood_decomposition(tau, blocks, lambda).map(|d| recompose(&d))
}

/// A prior as a Bayesian mass function with masses `ρ_i^λ / Σ_j ρ_j^λ`.
pub fn prior_to_probability(frame: Frame, rho: &[f64], lambda: f64) -> Result<MassFunction> {
    check_lambda(lambda)?;
    if rho.len() != frame.len() {
        return Err(Error::InvalidProblem(format!(
            "prior has {} components for {} outcomes",
            rho.len(),
            frame.len()
        )));
    }
    if rho.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("prior"));
    }
    if let Some(&v) = rho.iter().find(|v| **v < 0.0) {
        return Err(Error::OutOfRange {
            name: "prior",
            value: v,
            range: "[0, ∞)",
        });
    }
    let scaled: Vec<f64> = rho.iter().map(|v| v.powf(lambda)).collect();
    let total: f64 = scaled.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("prior"));
    }
    let probs: Vec<f64> = scaled.iter().map(|v| v / total).collect();
    MassFunction::probability(frame, &probs)
}
