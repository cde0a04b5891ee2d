use std::collections::BTreeMap;

use super::frame::Subset;
use super::mass::{MassFunction, MASS_TOLERANCE, ZERO_MASS};
use super::set_function::{
    raw_masses_from_commonality, to_commonality, SetFunction, SetFunctionKind,
};
use crate::error::{Error, Result};
use crate::pcb::{detect_pcb, PcbVerdict};

/// Combined mass below this is total conflict.
const CONFLICT_EPS: f64 = 1e-12;

/// Dempster's rule: normalized conjunctive combination of independent evidence.
pub fn dempster_combine(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    if m1.frame() != m2.frame() {
        return Err(Error::FrameMismatch);
    }
    let mut acc: BTreeMap<Subset, f64> = BTreeMap::new();
    let mut agreement = 0.0;
    for (b1, v1) in m1.focal() {
        for (b2, v2) in m2.focal() {
            let a = b1.intersection(b2);
            if !a.is_empty() {
                *acc.entry(a).or_insert(0.0) += v1 * v2;
                agreement += v1 * v2;
            }
        }
    }
    if agreement <= CONFLICT_EPS {
        return Err(Error::TotalConflict);
    }
    MassFunction::new(
        m1.frame().clone(),
        acc.into_iter().map(|(s, v)| (s, v / agreement)),
    )
}

/// Conditions `m` on the observation that the outcome lies in `b`.
pub fn condition(m: &MassFunction, b: Subset) -> Result<MassFunction> {
    if m.plausibility(b) <= CONFLICT_EPS {
        return Err(Error::ConditioningOnImpossible(m.frame().format_subset(b)));
    }
    let evidence = MassFunction::categorical(m.frame().clone(), b)?;
    dempster_combine(m, &evidence)
}

/// The likelihood-preserving combination of two partially consonant
/// commonality functions: pointwise products of singleton commonalities,
/// minimized over each set, kept only where both inputs are nonzero, then
/// rescaled so the recovered masses sum to one.
pub fn walley_combine(q1: &SetFunction, q2: &SetFunction) -> Result<SetFunction> {
    if q1.frame() != q2.frame() {
        return Err(Error::FrameMismatch);
    }
    let frame = q1.frame().clone();
    frame.ensure_dense()?;
    for (name, q) in [("first", q1), ("second", q2)] {
        if q.kind() != SetFunctionKind::Commonality {
            return Err(Error::Domain(format!(
                "{name} operand is a {:?} function, not a commonality",
                q.kind()
            )));
        }
        let m = q.to_mass()?;
        if let PcbVerdict::NotPcb { .. } = detect_pcb(&m) {
            return Err(Error::Domain(format!(
                "{name} operand is not partially consonant"
            )));
        }
    }

    let n = frame.len();
    let singleton: Vec<f64> = (0..n)
        .map(|i| {
            let s = Subset::singleton(i);
            q1.value(s) * q2.value(s)
        })
        .collect();
    let mut raw: Vec<f64> = frame
        .all_subsets()
        .map(|a| {
            if a.is_empty() || q1.value(a) * q2.value(a) <= ZERO_MASS {
                0.0
            } else {
                a.indices()
                    .map(|i| singleton[i])
                    .fold(f64::INFINITY, f64::min)
            }
        })
        .collect();

    raw_masses_from_commonality(&mut raw, n);
    let mut entries = Vec::new();
    let mut total = 0.0;
    for (bits, &v) in raw.iter().enumerate().skip(1) {
        if v < -MASS_TOLERANCE {
            return Err(Error::Domain(format!(
                "combined commonality is not a belief function (mass {v} on {})",
                frame.format_subset(Subset::from_bits(bits as u64))
            )));
        }
        if v > ZERO_MASS {
            entries.push((Subset::from_bits(bits as u64), v));
            total += v;
        }
    }
    if total <= CONFLICT_EPS {
        return Err(Error::TotalConflict);
    }
    let m = MassFunction::new(frame, entries.into_iter().map(|(s, v)| (s, v / total)))?;
    to_commonality(&m)
}
