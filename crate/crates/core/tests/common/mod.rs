//! Random generators and independent reference computations shared by the
//! integration tests. The oracles work from the textbook definitions by
//! enumeration and never call the library's transforms.

#![allow(dead_code)]

use indexmap::IndexMap;
use pcb_core::belief::{Frame, MassFunction, Subset};
use pcb_core::utility::{BinaryUtility, PrizeAssignment};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn frame(n: usize) -> Frame {
    Frame::new((0..n).map(|i| format!("w{i}"))).unwrap()
}

/// Masses as a plain list, the way the oracles consume them.
pub fn entries(m: &MassFunction) -> Vec<(u64, f64)> {
    m.focal().map(|(s, v)| (s.bits(), v)).collect()
}

pub fn oracle_belief(m: &[(u64, f64)], a: u64) -> f64 {
    m.iter().filter(|(b, _)| b & !a == 0).map(|(_, v)| v).sum()
}

pub fn oracle_plausibility(m: &[(u64, f64)], a: u64) -> f64 {
    m.iter().filter(|(b, _)| b & a != 0).map(|(_, v)| v).sum()
}

pub fn oracle_commonality(m: &[(u64, f64)], a: u64) -> f64 {
    m.iter().filter(|(b, _)| a & !b == 0).map(|(_, v)| v).sum()
}

/// Unnormalized conjunctive combination followed by normalization.
pub fn oracle_dempster(m1: &[(u64, f64)], m2: &[(u64, f64)]) -> IndexMap<u64, f64> {
    let mut out: IndexMap<u64, f64> = IndexMap::new();
    let mut conflict = 0.0;
    for &(a, x) in m1 {
        for &(b, y) in m2 {
            if a & b == 0 {
                conflict += x * y;
            } else {
                *out.entry(a & b).or_default() += x * y;
            }
        }
    }
    out.values_mut().for_each(|v| *v /= 1.0 - conflict);
    out
}

/// `m_B(C) = Σ_{A ∩ B = C} m(A) / Pl(B)`.
pub fn oracle_condition(m: &[(u64, f64)], b: u64) -> IndexMap<u64, f64> {
    let pl = oracle_plausibility(m, b);
    let mut out: IndexMap<u64, f64> = IndexMap::new();
    for &(a, v) in m {
        if a & b != 0 {
            *out.entry(a & b).or_default() += v / pl;
        }
    }
    out
}

pub fn random_subset(r: &mut StdRng, n: usize) -> Subset {
    loop {
        let bits = r.gen::<u64>() & Subset::full(n).bits();
        if bits != 0 {
            return Subset::from_bits(bits);
        }
    }
}

/// An arbitrary mass function with a handful of random foci.
pub fn random_mass(r: &mut StdRng, n: usize) -> MassFunction {
    let f = frame(n);
    let count = r.gen_range(1..=((1usize << n) - 1).min(12));
    let weights: Vec<f64> = (0..count).map(|_| r.gen_range(0.01..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let entries: Vec<(Subset, f64)> = weights
        .iter()
        .map(|w| (random_subset(r, n), w / total))
        .collect();
    MassFunction::renormalized(f, entries).unwrap()
}

pub fn random_probs(r: &mut StdRng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| r.gen_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// A pcb given by its decomposition. `blocks[k]` lists outcome indices and
/// `pi[i]` is the conditional possibility of outcome `i`.
#[derive(Debug, Clone)]
pub struct PcbSpec {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    pub probs: Vec<f64>,
    pub pi: Vec<f64>,
}

pub fn random_partition(r: &mut StdRng, n: usize, max_blocks: usize) -> Vec<Vec<usize>> {
    let k = r.gen_range(1..=max_blocks.min(n));
    let mut outcomes: Vec<usize> = (0..n).collect();
    outcomes.shuffle(r);
    let mut blocks: Vec<Vec<usize>> = outcomes[..k].iter().map(|&i| vec![i]).collect();
    for &i in &outcomes[k..] {
        let b = r.gen_range(0..k);
        blocks[b].push(i);
    }
    blocks.iter_mut().for_each(|b| b.sort_unstable());
    blocks.sort();
    blocks
}

pub fn random_pcb_spec(r: &mut StdRng, n: usize) -> PcbSpec {
    let blocks = random_partition(r, n, n);
    let probs = random_probs(r, blocks.len());
    let mut pi = vec![0.0; n];
    for b in &blocks {
        for &i in b {
            // a coarse grid now and then so level sets share values
            pi[i] = if r.gen_bool(0.3) {
                [0.25, 0.5, 0.75, 1.0][r.gen_range(0..4)]
            } else {
                r.gen_range(0.05..1.0)
            };
        }
        let top = b[r.gen_range(0..b.len())];
        pi[top] = 1.0;
    }
    PcbSpec {
        n,
        blocks,
        probs,
        pi,
    }
}

/// Level-set masses of a decomposition: within block k with distinct
/// possibility levels `v_1 > ... > v_r`, the set `{π ≥ v_j}` carries
/// `p_k (v_j - v_{j+1})`.
pub fn oracle_recompose(s: &PcbSpec) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    for (b, &p) in s.blocks.iter().zip(&s.probs) {
        let mut levels: Vec<f64> = b.iter().map(|&i| s.pi[i]).collect();
        levels.sort_by(|x, y| y.total_cmp(x));
        levels.dedup();
        for (j, &v) in levels.iter().enumerate() {
            let next = levels.get(j + 1).copied().unwrap_or(0.0);
            let set = b
                .iter()
                .filter(|&&i| s.pi[i] >= v)
                .fold(0u64, |acc, &i| acc | (1 << i));
            out.push((set, p * (v - next)));
        }
    }
    out
}

pub fn pcb_mass(s: &PcbSpec) -> MassFunction {
    let entries = oracle_recompose(s)
        .into_iter()
        .map(|(b, v)| (Subset::from_bits(b), v));
    MassFunction::renormalized(frame(s.n), entries).unwrap()
}

pub fn random_pcb(r: &mut StdRng, n: usize) -> MassFunction {
    pcb_mass(&random_pcb_spec(r, n))
}

pub fn random_binary(r: &mut StdRng) -> BinaryUtility {
    let pos: f64 = r.gen_range(0.0..=2.0);
    BinaryUtility::from_position(pos).unwrap()
}

/// Prizes `p0 = <1,0>`, `p1 = <0,1>` and `extra` more at random positions.
pub fn random_prizes(r: &mut StdRng, extra: usize) -> PrizeAssignment {
    let mut items = vec![
        ("p0".to_string(), BinaryUtility::BEST),
        ("p1".to_string(), BinaryUtility::WORST),
    ];
    for k in 0..extra {
        items.push((format!("p{}", k + 2), random_binary(r)));
    }
    PrizeAssignment::new(items, "p0", "p1").unwrap()
}

pub fn random_act_prizes(r: &mut StdRng, n: usize, prizes: &PrizeAssignment) -> Vec<String> {
    let labels: Vec<&str> = prizes.iter().map(|(l, _)| l).collect();
    (0..n)
        .map(|_| labels[r.gen_range(0..labels.len())].to_string())
        .collect()
}

/// Parametric t written from its two-segment definition.
pub fn oracle_t(c: f64, b: BinaryUtility) -> f64 {
    if b.rho() == 1.0 {
        c * b.lambda()
    } else {
        1.0 - (1.0 - c) * b.rho()
    }
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
