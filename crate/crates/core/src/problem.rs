//! The JSON problem document and its validated form.
//!
//! Subsets are written as arrays of outcome labels. Numbers may be given as
//! JSON numbers or as strings holding a decimal or a fraction such as `"1/3"`.
//! Unknown fields are rejected.

use std::fmt;

use indexmap::IndexMap;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::acts::Act;
use crate::belief::{Frame, MassFunction, Subset};
use crate::error::{Error, Result};
use crate::pcb::{pcb_from_likelihood, recompose, LikelihoodVector, PcbDecomposition};
use crate::utility::{BinaryUtility, PrizeAssignment, TFunction};

/// A real number that also accepts `"p/q"` and decimal strings on input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real(v)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RealVisitor;

        impl Visitor<'_> for RealVisitor {
            type Value = Real;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a string like \"1/3\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                Ok(Real(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                parse_real(v)
                    .map(Real)
                    .ok_or_else(|| E::custom(format!("invalid number `{v}`")))
            }
        }

        d.deserialize_any(RealVisitor)
    }
}

fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let (n, d): (f64, f64) = (num.trim().parse().ok()?, den.trim().parse().ok()?);
            (d != 0.0).then_some(n / d)
        }
        None => s.parse().ok(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub frame: Vec<String>,
    pub uncertainty: UncertaintySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prizes: Option<PrizesSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub acts: Vec<ActSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attitude: Option<AttitudeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum UncertaintySpec {
    Bpa(Vec<FocalSpec>),
    Pcb(PcbSpec),
    Likelihood(LikelihoodSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FocalSpec {
    pub focal: Vec<String>,
    pub mass: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcbSpec {
    pub blocks: Vec<Vec<String>>,
    pub block_probs: Vec<Real>,
    pub possibilities: IndexMap<String, Real>,
}

fn default_lambda() -> Real {
    Real(1.0)
}

fn is_default_lambda(l: &Real) -> bool {
    l.0 == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LikelihoodSpec {
    pub tau: Vec<Real>,
    pub blocks: Vec<Vec<String>>,
    #[serde(default = "default_lambda", skip_serializing_if = "is_default_lambda")]
    pub lambda: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrizesSpec {
    pub items: Vec<PrizeSpec>,
    pub best: String,
    pub worst: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrizeSpec {
    pub label: String,
    /// `[λ, ρ]`
    pub qu: [Real; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActSpec {
    pub name: String,
    pub assignment: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AttitudeSpec {
    C(Real),
    Tabular(Vec<TPointSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TPointSpec {
    pub qu: [Real; 2],
    pub t: Real,
}

impl ProblemFile {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem documents serialize")
    }

    /// A document holding only a frame and a mass assignment.
    pub fn from_mass(m: &MassFunction) -> Self {
        let frame = m.frame();
        ProblemFile {
            frame: frame.labels().to_vec(),
            uncertainty: UncertaintySpec::Bpa(
                m.focal()
                    .map(|(s, v)| FocalSpec {
                        focal: frame.subset_labels(s),
                        mass: Real(v),
                    })
                    .collect(),
            ),
            prizes: None,
            acts: Vec::new(),
            attitude: None,
            alpha: None,
        }
    }

    /// A document holding a frame and a decomposition in the `pcb` variant.
    pub fn from_decomposition(d: &PcbDecomposition) -> Self {
        let frame = d.frame();
        ProblemFile {
            frame: frame.labels().to_vec(),
            uncertainty: UncertaintySpec::Pcb(PcbSpec {
                blocks: d
                    .blocks()
                    .iter()
                    .map(|b| frame.subset_labels(b.members))
                    .collect(),
                block_probs: d.blocks().iter().map(|b| Real(b.prob)).collect(),
                possibilities: frame
                    .labels()
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.clone(), Real(d.possibility(i))))
                    .collect(),
            }),
            prizes: None,
            acts: Vec::new(),
            attitude: None,
            alpha: None,
        }
    }
}

/// A validated problem: frame, belief, prizes, acts and attitude.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    spec: ProblemFile,
    frame: Frame,
    mass: MassFunction,
    prizes: Option<PrizeAssignment>,
    acts: Vec<Act>,
    t: Option<TFunction>,
    alpha: Option<f64>,
}

fn subsets(frame: &Frame, sets: &[Vec<String>]) -> Result<Vec<Subset>> {
    sets.iter().map(|s| frame.subset(s)).collect()
}

fn binary(qu: &[Real; 2]) -> Result<BinaryUtility> {
    BinaryUtility::new(qu[0].0, qu[1].0)
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && (0.0..=1.0).contains(&alpha) {
        Ok(alpha)
    } else {
        Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, 1]",
        })
    }
}

fn uncertainty_mass(frame: &Frame, spec: &UncertaintySpec) -> Result<MassFunction> {
    match spec {
        UncertaintySpec::Bpa(foci) => {
            let entries = foci
                .iter()
                .map(|f| {
                    if f.focal.is_empty() {
                        return Err(Error::InvalidMass("a focal set lists no outcomes".into()));
                    }
                    Ok((frame.subset(&f.focal)?, f.mass.0))
                })
                .collect::<Result<Vec<_>>>()?;
            MassFunction::new(frame.clone(), entries)
        }
        UncertaintySpec::Pcb(p) => {
            if p.block_probs.len() != p.blocks.len() {
                return Err(Error::InvalidProblem(format!(
                    "{} blocks but {} block probabilities",
                    p.blocks.len(),
                    p.block_probs.len()
                )));
            }
            let blocks = subsets(frame, &p.blocks)?;
            for label in p.possibilities.keys() {
                if frame.index_of(label).is_none() {
                    return Err(Error::UnknownOutcome(label.clone()));
                }
            }
            let pi = frame
                .labels()
                .iter()
                .map(|l| {
                    p.possibilities.get(l).map(|r| r.0).ok_or_else(|| {
                        Error::InvalidProblem(format!("no possibility given for `{l}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let cells = blocks
                .into_iter()
                .zip(p.block_probs.iter().map(|r| r.0))
                .collect();
            let d = PcbDecomposition::new(frame.clone(), cells, pi)?;
            Ok(recompose(&d))
        }
        UncertaintySpec::Likelihood(l) => {
            let tau = LikelihoodVector::new(frame.clone(), l.tau.iter().map(|r| r.0).collect())?;
            pcb_from_likelihood(&tau, &subsets(frame, &l.blocks)?, l.lambda.0)
        }
    }
}

impl DecisionProblem {
    pub fn from_json(src: &str) -> Result<Self> {
        DecisionProblem::from_spec(ProblemFile::from_json(src)?)
    }

    pub fn from_spec(spec: ProblemFile) -> Result<Self> {
        let frame = Frame::new(spec.frame.iter().cloned())?;
        let mass = uncertainty_mass(&frame, &spec.uncertainty)?;

        let prizes = spec
            .prizes
            .as_ref()
            .map(|p| {
                let items = p
                    .items
                    .iter()
                    .map(|i| Ok((i.label.clone(), binary(&i.qu)?)))
                    .collect::<Result<Vec<_>>>()?;
                PrizeAssignment::new(items, &p.best, &p.worst)
            })
            .transpose()?;

        let mut acts: Vec<Act> = Vec::with_capacity(spec.acts.len());
        for a in &spec.acts {
            if acts.iter().any(|x| x.name() == a.name) {
                return Err(Error::InvalidProblem(format!("duplicate act `{}`", a.name)));
            }
            let act = Act::from_map(
                a.name.clone(),
                frame.clone(),
                a.assignment.iter().map(|(k, v)| (k.as_str(), v.as_str())),
            )?;
            match &prizes {
                Some(p) => act.check_prizes(p)?,
                None => {
                    return Err(Error::InvalidProblem(
                        "acts are declared but no prizes are".into(),
                    ))
                }
            }
            acts.push(act);
        }

        let t = spec
            .attitude
            .as_ref()
            .map(|a| match a {
                AttitudeSpec::C(c) => TFunction::parametric(c.0),
                AttitudeSpec::Tabular(points) => TFunction::tabular(
                    points
                        .iter()
                        .map(|p| Ok((binary(&p.qu)?, p.t.0)))
                        .collect::<Result<Vec<_>>>()?,
                ),
            })
            .transpose()?;

        let alpha = spec.alpha.map(|a| check_alpha(a.0)).transpose()?;

        Ok(DecisionProblem {
            spec,
            frame,
            mass,
            prizes,
            acts,
            t,
            alpha,
        })
    }

    pub fn spec(&self) -> &ProblemFile {
        &self.spec
    }

    pub fn to_json(&self) -> String {
        self.spec.to_json()
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mass(&self) -> &MassFunction {
        &self.mass
    }

    pub fn prizes(&self) -> Option<&PrizeAssignment> {
        self.prizes.as_ref()
    }

    pub fn acts(&self) -> &[Act] {
        &self.acts
    }

    pub fn t(&self) -> Option<&TFunction> {
        self.t.as_ref()
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn require_prizes(&self) -> Result<&PrizeAssignment> {
        self.prizes
            .as_ref()
            .ok_or_else(|| Error::InvalidProblem("the problem declares no prizes".into()))
    }

    pub fn require_t(&self) -> Result<&TFunction> {
        self.t.as_ref().ok_or_else(|| {
            Error::InvalidProblem("no attitude given (set `attitude` or --attitude-c)".into())
        })
    }

    /// Replaces the attitude with the parametric t at `c`.
    pub fn with_attitude(mut self, c: f64) -> Result<Self> {
        self.t = Some(TFunction::parametric(c)?);
        self.spec.attitude = Some(AttitudeSpec::C(Real(c)));
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = Some(check_alpha(alpha)?);
        self.spec.alpha = Some(Real(alpha));
        Ok(self)
    }
}
