use std::collections::BTreeMap;

use super::frame::{Frame, Subset};
use crate::error::{Error, Result};

/// Tolerance on the sum-to-one condition of a mass assignment.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Masses at or below this magnitude are treated as absent when canonicalizing.
pub(crate) const ZERO_MASS: f64 = 1e-12;

/// A basic probability assignment: strictly positive masses on nonempty
/// focal sets of a frame, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    focal: BTreeMap<Subset, f64>,
}

impl MassFunction {
    /// Builds a mass function, merging repeated foci and dropping zero masses.
    /// The total must already be one within [`MASS_TOLERANCE`].
    pub fn new<I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        let focal = collect_focal(&frame, entries)?;
        let total: f64 = focal.values().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NotNormalized {
                what: "masses".into(),
                total,
            });
        }
        Ok(MassFunction { frame, focal })
    }

    /// Like [`MassFunction::new`] but rescales any positive total to one.
    pub fn renormalized<I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        let mut focal = collect_focal(&frame, entries)?;
        let total: f64 = focal.values().sum();
        if total <= ZERO_MASS {
            return Err(Error::Degenerate("mass assignment"));
        }
        for v in focal.values_mut() {
            *v /= total;
        }
        Ok(MassFunction { frame, focal })
    }

    /// All mass on the full frame.
    pub fn vacuous(frame: Frame) -> Self {
        let full = frame.full();
        MassFunction {
            frame,
            focal: BTreeMap::from([(full, 1.0)]),
        }
    }

    /// All mass on `subset`: the observation that the true outcome lies in it.
    pub fn categorical(frame: Frame, subset: Subset) -> Result<Self> {
        MassFunction::new(frame, [(subset, 1.0)])
    }

    /// A Bayesian mass function with `probs[i]` on the i-th singleton.
    pub fn probability(frame: Frame, probs: &[f64]) -> Result<Self> {
        if probs.len() != frame.len() {
            return Err(Error::InvalidMass(format!(
                "expected {} probabilities, got {}",
                frame.len(),
                probs.len()
            )));
        }
        let entries: Vec<_> = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (Subset::singleton(i), p))
            .collect();
        MassFunction::new(frame, entries)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Focal sets with their masses, in bitmask order.
    pub fn focal(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.focal.iter().map(|(&s, &m)| (s, m))
    }

    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    pub fn mass(&self, subset: Subset) -> f64 {
        self.focal.get(&subset).copied().unwrap_or(0.0)
    }

    /// `Bel(A)`: total mass of foci contained in `a`.
    pub fn belief(&self, a: Subset) -> f64 {
        self.focal()
            .filter(|(b, _)| b.is_subset_of(a))
            .map(|(_, m)| m)
            .sum()
    }

    /// `Pl(A)`: total mass of foci meeting `a`.
    pub fn plausibility(&self, a: Subset) -> f64 {
        self.focal()
            .filter(|(b, _)| b.intersects(a))
            .map(|(_, m)| m)
            .sum()
    }

    /// `Q(A)`: total mass of foci containing `a`.
    pub fn commonality(&self, a: Subset) -> f64 {
        self.focal()
            .filter(|(b, _)| a.is_subset_of(*b))
            .map(|(_, m)| m)
            .sum()
    }

    /// Singleton plausibilities in frame order.
    pub fn singleton_plausibilities(&self) -> Vec<f64> {
        (0..self.frame.len())
            .map(|i| self.plausibility(Subset::singleton(i)))
            .collect()
    }

    /// True when every focus is a singleton.
    pub fn is_probability(&self) -> bool {
        self.focal.keys().all(|s| s.len() == 1)
    }

    /// Largest absolute mass difference over the union of both focal sets.
    pub fn max_abs_diff(&self, other: &MassFunction) -> f64 {
        self.focal
            .keys()
            .chain(other.focal.keys())
            .map(|&s| (self.mass(s) - other.mass(s)).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &MassFunction, tol: f64) -> bool {
        self.frame == other.frame && self.max_abs_diff(other) <= tol
    }
}

fn collect_focal<I>(frame: &Frame, entries: I) -> Result<BTreeMap<Subset, f64>>
where
    I: IntoIterator<Item = (Subset, f64)>,
{
    let full = frame.full();
    let mut focal: BTreeMap<Subset, f64> = BTreeMap::new();
    for (s, m) in entries {
        if !m.is_finite() {
            return Err(Error::NonFinite("mass"));
        }
        if !s.is_subset_of(full) {
            return Err(Error::InvalidMass(format!(
                "subset {:#x} lies outside the frame",
                s.bits()
            )));
        }
        if m < -ZERO_MASS {
            return Err(Error::InvalidMass(format!(
                "negative mass {m} on {}",
                frame.format_subset(s)
            )));
        }
        if s.is_empty() {
            if m > ZERO_MASS {
                return Err(Error::InvalidMass("the empty set cannot carry mass".into()));
            }
            continue;
        }
        *focal.entry(s).or_insert(0.0) += m;
    }
    focal.retain(|_, m| *m > ZERO_MASS);
    Ok(focal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Frame {
        Frame::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn merges_duplicates_and_drops_zeros() {
        let f = abc();
        let a = f.subset(["a"]).unwrap();
        let bc = f.subset(["b", "c"]).unwrap();
        let m = MassFunction::new(
            f,
            [(a, 0.25), (a, 0.25), (bc, 0.5), (Subset::singleton(1), 0.0)],
        )
        .unwrap();
        assert_eq!(m.focal_count(), 2);
        assert_eq!(m.mass(a), 0.5);
    }

    #[test]
    fn rejects_bad_assignments() {
        let f = abc();
        let a = f.subset(["a"]).unwrap();
        assert!(matches!(
            MassFunction::new(f.clone(), [(a, 0.9)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            MassFunction::new(f.clone(), [(Subset::EMPTY, 0.5), (a, 0.5)]),
            Err(Error::InvalidMass(_))
        ));
        assert!(matches!(
            MassFunction::new(f.clone(), [(a, -0.5), (f.full(), 1.5)]),
            Err(Error::InvalidMass(_))
        ));
        assert!(matches!(
            MassFunction::new(f.clone(), [(Subset::singleton(5), 1.0)]),
            Err(Error::InvalidMass(_))
        ));
        assert!(matches!(
            MassFunction::new(f, [(a, f64::NAN)]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn renormalize_is_explicit() {
        let f = abc();
        let a = f.subset(["a"]).unwrap();
        let m = MassFunction::renormalized(f.clone(), [(a, 0.3), (f.full(), 0.6)]).unwrap();
        assert!((m.mass(a) - 1.0 / 3.0).abs() < 1e-12);
        assert!(matches!(
            MassFunction::renormalized(f, [(a, 0.0)]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn sparse_measures() {
        let f = Frame::new(["a", "b"]).unwrap();
        let a = f.subset(["a"]).unwrap();
        let b = f.subset(["b"]).unwrap();
        let m = MassFunction::new(f.clone(), [(a, 0.5), (f.full(), 0.5)]).unwrap();
        assert_eq!(m.belief(a), 0.5);
        assert_eq!(m.belief(b), 0.0);
        assert_eq!(m.plausibility(b), 0.5);
        assert_eq!(m.commonality(a), 1.0);
        assert_eq!(m.commonality(Subset::EMPTY), 1.0);
        assert!(!m.is_probability());
    }
}
