//! Dense and mass-backed set functions, and the Möbius transforms that move
//! between a mass function and its belief, plausibility and commonality forms.

use super::frame::{Frame, Subset};
use super::mass::{MassFunction, MASS_TOLERANCE, ZERO_MASS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetFunctionKind {
    Belief,
    Plausibility,
    Commonality,
    /// Any normalized monotone set function.
    Capacity,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    /// Indexed by subset bitmask; length 2^N.
    Dense(Vec<f64>),
    /// Evaluated on demand from the focal sets.
    Mass(MassFunction),
}

/// A total map from subsets of a frame to reals.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFunction {
    frame: Frame,
    kind: SetFunctionKind,
    repr: Repr,
}

impl SetFunction {
    /// Wraps a dense table indexed by subset bitmask. Checks the table size and
    /// the boundary values of the kind; capacities are also checked for
    /// monotonicity.
    pub fn dense(frame: Frame, kind: SetFunctionKind, values: Vec<f64>) -> Result<Self> {
        frame.ensure_dense()?;
        let expected = 1usize << frame.len();
        if values.len() != expected {
            return Err(Error::Domain(format!(
                "set function table has {} entries, expected {expected}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("set function"));
        }
        let full = frame.full().bits() as usize;
        let bad_bounds = match kind {
            SetFunctionKind::Commonality => (values[0] - 1.0).abs() > MASS_TOLERANCE,
            _ => values[0].abs() > MASS_TOLERANCE || (values[full] - 1.0).abs() > MASS_TOLERANCE,
        };
        if bad_bounds {
            return Err(Error::Domain(format!(
                "{kind:?} table violates its boundary values"
            )));
        }
        let f = SetFunction {
            frame,
            kind,
            repr: Repr::Dense(values),
        };
        if kind == SetFunctionKind::Capacity {
            f.check_monotone().map_err(Error::InvalidCapacity)?;
        }
        Ok(f)
    }

    /// A normalized monotone set function given as a dense table.
    pub fn capacity(frame: Frame, values: Vec<f64>) -> Result<Self> {
        match SetFunction::dense(frame, SetFunctionKind::Capacity, values) {
            Err(Error::Domain(msg)) => Err(Error::InvalidCapacity(msg)),
            other => other,
        }
    }

    /// A view of `m` evaluated lazily, usable on frames beyond the dense limit.
    pub fn from_mass(m: &MassFunction, kind: SetFunctionKind) -> Result<Self> {
        if kind == SetFunctionKind::Capacity {
            return Err(Error::Domain(
                "a mass function induces belief, plausibility or commonality".into(),
            ));
        }
        Ok(SetFunction {
            frame: m.frame().clone(),
            kind,
            repr: Repr::Mass(m.clone()),
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn kind(&self) -> SetFunctionKind {
        self.kind
    }

    pub fn value(&self, a: Subset) -> f64 {
        match &self.repr {
            Repr::Dense(v) => v[a.bits() as usize],
            Repr::Mass(m) => match self.kind {
                SetFunctionKind::Belief => m.belief(a),
                SetFunctionKind::Plausibility => m.plausibility(a),
                SetFunctionKind::Commonality => m.commonality(a),
                SetFunctionKind::Capacity => unreachable!("rejected at construction"),
            },
        }
    }

    /// The dense table, when this function is stored densely.
    pub fn values(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Dense(v) => Some(v),
            Repr::Mass(_) => None,
        }
    }

    /// A dense copy of this function (frames up to the dense limit).
    pub fn to_dense(&self) -> Result<SetFunction> {
        self.frame.ensure_dense()?;
        let values = self.frame.all_subsets().map(|s| self.value(s)).collect();
        Ok(SetFunction {
            frame: self.frame.clone(),
            kind: self.kind,
            repr: Repr::Dense(values),
        })
    }

    /// Checks that this function can serve as a Choquet capacity.
    pub fn validate_capacity(&self) -> Result<()> {
        match (&self.repr, self.kind) {
            (_, SetFunctionKind::Commonality) => Err(Error::InvalidCapacity(
                "a commonality function is not a capacity".into(),
            )),
            // Belief and plausibility of a valid mass function are capacities.
            (Repr::Mass(_), _) => Ok(()),
            (Repr::Dense(v), _) => {
                let full = self.frame.full().bits() as usize;
                if v[0].abs() > MASS_TOLERANCE || (v[full] - 1.0).abs() > MASS_TOLERANCE {
                    return Err(Error::InvalidCapacity(
                        "v(∅) = 0 and v(Θ) = 1 required".into(),
                    ));
                }
                self.check_monotone().map_err(Error::InvalidCapacity)
            }
        }
    }

    fn check_monotone(&self) -> std::result::Result<(), String> {
        let Repr::Dense(v) = &self.repr else {
            return Ok(());
        };
        let n = self.frame.len();
        for a in 0..v.len() {
            for i in 0..n {
                let bit = 1usize << i;
                if a & bit == 0 && v[a] > v[a | bit] + MASS_TOLERANCE {
                    return Err(format!(
                        "not monotone: v({}) > v({})",
                        self.frame.format_subset(Subset::from_bits(a as u64)),
                        self.frame
                            .format_subset(Subset::from_bits((a | bit) as u64))
                    ));
                }
            }
        }
        Ok(())
    }

    /// Recovers the mass function from any of the three belief-function forms.
    pub fn to_mass(&self) -> Result<MassFunction> {
        if let Repr::Mass(m) = &self.repr {
            return Ok(m.clone());
        }
        match self.kind {
            SetFunctionKind::Belief => from_belief(self),
            SetFunctionKind::Commonality => from_commonality(self),
            SetFunctionKind::Plausibility => {
                let n = self.frame.len();
                let bel = self
                    .frame
                    .all_subsets()
                    .map(|a| 1.0 - self.value(a.complement(n)))
                    .collect();
                from_belief(&SetFunction::dense(
                    self.frame.clone(),
                    SetFunctionKind::Belief,
                    bel,
                )?)
            }
            SetFunctionKind::Capacity => Err(Error::Domain(
                "a general capacity has no mass function".into(),
            )),
        }
    }

    /// Largest pointwise difference against another function on the same frame.
    pub fn max_abs_diff(&self, other: &SetFunction) -> Result<f64> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        self.frame.ensure_dense()?;
        Ok(self
            .frame
            .all_subsets()
            .map(|s| (self.value(s) - other.value(s)).abs())
            .fold(0.0, f64::max))
    }
}

fn mass_table(m: &MassFunction) -> Result<Vec<f64>> {
    m.frame().ensure_dense()?;
    let mut t = vec![0.0; 1usize << m.frame().len()];
    for (s, v) in m.focal() {
        t[s.bits() as usize] = v;
    }
    Ok(t)
}

/// In-place sum over subsets: `t[A] <- Σ_{B⊆A} t[B]`.
fn zeta_subsets(t: &mut [f64], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for a in 0..t.len() {
            if a & bit != 0 {
                t[a] += t[a ^ bit];
            }
        }
    }
}

/// In-place sum over supersets: `t[A] <- Σ_{B⊇A} t[B]`.
fn zeta_supersets(t: &mut [f64], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for a in 0..t.len() {
            if a & bit == 0 {
                t[a] += t[a | bit];
            }
        }
    }
}

fn mobius_subsets(t: &mut [f64], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for a in 0..t.len() {
            if a & bit != 0 {
                t[a] -= t[a ^ bit];
            }
        }
    }
}

fn mobius_supersets(t: &mut [f64], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for a in 0..t.len() {
            if a & bit == 0 {
                t[a] -= t[a | bit];
            }
        }
    }
}

/// Dense belief function `Bel(A) = Σ_{B⊆A} m(B)`.
pub fn to_belief(m: &MassFunction) -> Result<SetFunction> {
    let mut t = mass_table(m)?;
    zeta_subsets(&mut t, m.frame().len());
    Ok(SetFunction {
        frame: m.frame().clone(),
        kind: SetFunctionKind::Belief,
        repr: Repr::Dense(t),
    })
}

/// Dense plausibility function `Pl(A) = Σ_{B∩A≠∅} m(B) = 1 - Bel(Aᶜ)`.
pub fn to_plausibility(m: &MassFunction) -> Result<SetFunction> {
    let bel = to_belief(m)?;
    let Repr::Dense(b) = &bel.repr else {
        unreachable!()
    };
    let full = m.frame().full().bits() as usize;
    let pl = (0..b.len()).map(|a| 1.0 - b[full & !a]).collect();
    Ok(SetFunction {
        frame: m.frame().clone(),
        kind: SetFunctionKind::Plausibility,
        repr: Repr::Dense(pl),
    })
}

/// Dense commonality function `Q(A) = Σ_{A⊆B} m(B)`.
pub fn to_commonality(m: &MassFunction) -> Result<SetFunction> {
    let mut t = mass_table(m)?;
    zeta_supersets(&mut t, m.frame().len());
    Ok(SetFunction {
        frame: m.frame().clone(),
        kind: SetFunctionKind::Commonality,
        repr: Repr::Dense(t),
    })
}

fn dense_table(f: &SetFunction, kind: SetFunctionKind) -> Result<Vec<f64>> {
    if f.kind != kind {
        return Err(Error::Domain(format!(
            "expected a {kind:?} function, got {:?}",
            f.kind
        )));
    }
    match &f.repr {
        Repr::Dense(v) => Ok(v.clone()),
        Repr::Mass(_) => Ok(f.to_dense()?.values().unwrap().to_vec()),
    }
}

fn masses_from_table(frame: &Frame, t: Vec<f64>) -> Result<MassFunction> {
    let mut entries = Vec::with_capacity(t.len());
    for (bits, v) in t.into_iter().enumerate() {
        let s = Subset::from_bits(bits as u64);
        if v < -MASS_TOLERANCE || (s.is_empty() && v.abs() > MASS_TOLERANCE) {
            return Err(Error::NotBeliefFunction {
                subset: frame.format_subset(s),
                mass: v,
            });
        }
        if !s.is_empty() && v > ZERO_MASS {
            entries.push((s, v));
        }
    }
    MassFunction::new(frame.clone(), entries)
}

/// Möbius inversion `m(A) = Σ_{B⊆A} (-1)^{|A∖B|} Bel(B)`.
pub fn from_belief(bel: &SetFunction) -> Result<MassFunction> {
    let mut t = dense_table(bel, SetFunctionKind::Belief)?;
    mobius_subsets(&mut t, bel.frame.len());
    masses_from_table(&bel.frame, t)
}

/// Dual inversion `m(A) = Σ_{A⊆B} (-1)^{|B∖A|} Q(B)`.
pub fn from_commonality(q: &SetFunction) -> Result<MassFunction> {
    let mut t = dense_table(q, SetFunctionKind::Commonality)?;
    mobius_supersets(&mut t, q.frame.len());
    // The transform leaves m(∅) = Q(∅) - Σ masses, which must vanish.
    masses_from_table(&q.frame, t)
}

/// Inverse superset transform of an arbitrary table, without validation.
pub(crate) fn raw_masses_from_commonality(t: &mut [f64], n: usize) {
    mobius_supersets(t, n);
}
