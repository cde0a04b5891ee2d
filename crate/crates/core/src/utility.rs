//! Binary utility for possibilistic lotteries and the mixed utility of
//! two-stage (probability over blocks, possibility within blocks) lotteries.

use std::cmp::Ordering;
use std::fmt;

use indexmap::IndexMap;

use crate::acts::TwoStageLottery;
use crate::error::{Error, Result};

const TOL: f64 = 1e-9;

/// A point `<λ, ρ>` of the binary utility scale: both components in [0,1]
/// and at least one of them equal to 1.
///
/// The scale is totally ordered from `<0,1>` (worst) up through `<1,1>` to
/// `<1,0>` (best): larger λ and smaller ρ is better.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryUtility {
    lambda: f64,
    rho: f64,
}

impl BinaryUtility {
    pub const BEST: BinaryUtility = BinaryUtility {
        lambda: 1.0,
        rho: 0.0,
    };
    pub const WORST: BinaryUtility = BinaryUtility {
        lambda: 0.0,
        rho: 1.0,
    };
    pub const TIE: BinaryUtility = BinaryUtility {
        lambda: 1.0,
        rho: 1.0,
    };

    pub fn new(lambda: f64, rho: f64) -> Result<Self> {
        let in_unit = |v: f64| v.is_finite() && (-TOL..=1.0 + TOL).contains(&v);
        if !in_unit(lambda) || !in_unit(rho) || (lambda.max(rho) - 1.0).abs() > TOL {
            return Err(Error::InvalidBinaryUtility { lambda, rho });
        }
        let (mut lambda, mut rho) = (lambda.clamp(0.0, 1.0), rho.clamp(0.0, 1.0));
        if lambda >= rho {
            lambda = 1.0;
        } else {
            rho = 1.0;
        }
        Ok(BinaryUtility { lambda, rho })
    }

    pub fn lambda(self) -> f64 {
        self.lambda
    }

    pub fn rho(self) -> f64 {
        self.rho
    }

    /// Position on the chain, in [0, 2]: `λ` on the lower arm (ρ = 1) and
    /// `2 - ρ` on the upper arm (λ = 1). Order-isomorphic to the scale.
    pub fn position(self) -> f64 {
        self.lambda + (1.0 - self.rho)
    }

    /// Inverse of [`BinaryUtility::position`].
    pub fn from_position(pos: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&pos) {
            return Err(Error::OutOfRange {
                name: "scale position",
                value: pos,
                range: "[0, 2]",
            });
        }
        if pos <= 1.0 {
            BinaryUtility::new(pos, 1.0)
        } else {
            BinaryUtility::new(1.0, 2.0 - pos)
        }
    }

    /// `self ⪰ other` iff λ ≥ λ' and ρ ≤ ρ'.
    pub fn dominates(self, other: BinaryUtility) -> bool {
        self.lambda >= other.lambda && self.rho <= other.rho
    }
}

impl PartialOrd for BinaryUtility {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.dominates(*other), other.dominates(*self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            (false, false) => None,
        }
    }
}

impl fmt::Display for BinaryUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.lambda, self.rho)
    }
}

/// A scaled pair `<π·λ, π·ρ>`; only maxima over a normalized lottery are
/// guaranteed to land back on the scale.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScaledPair {
    pub lambda: f64,
    pub rho: f64,
}

impl From<BinaryUtility> for ScaledPair {
    fn from(b: BinaryUtility) -> Self {
        ScaledPair {
            lambda: b.lambda,
            rho: b.rho,
        }
    }
}

/// Componentwise maximum.
pub fn b_max(a: ScaledPair, b: ScaledPair) -> ScaledPair {
    ScaledPair {
        lambda: a.lambda.max(b.lambda),
        rho: a.rho.max(b.rho),
    }
}

/// Componentwise product of a possibility degree with a scale value.
pub fn b_scale(pi: f64, b: BinaryUtility) -> ScaledPair {
    ScaledPair {
        lambda: pi * b.lambda,
        rho: pi * b.rho,
    }
}

/// Maps the binary scale into [0,1], strictly increasing, with `<0,1> -> 0`
/// and `<1,0> -> 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum TFunction {
    /// Two linear segments through `<0,1> -> 0`, `<1,1> -> c`, `<1,0> -> 1`.
    /// `c` is the ambiguity attitude: below .5 averse, above .5 seeking.
    Parametric { c: f64 },
    /// Piecewise-linear interpolation between points sorted along the scale.
    /// Always contains both end pins.
    Tabular { points: Vec<(BinaryUtility, f64)> },
}

impl TFunction {
    pub fn parametric(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0 && c < 1.0) {
            return Err(Error::InvalidT(format!(
                "attitude c = {c} must lie in (0, 1)"
            )));
        }
        Ok(TFunction::Parametric { c })
    }

    /// Builds a tabular t. Missing end pins are added; present ones must map
    /// to 0 and 1. Values must increase strictly along the scale.
    pub fn tabular(points: Vec<(BinaryUtility, f64)>) -> Result<Self> {
        let mut pts = points;
        if pts.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidT("non-finite value".into()));
        }
        for (pin, value) in [(BinaryUtility::WORST, 0.0), (BinaryUtility::BEST, 1.0)] {
            match pts
                .iter()
                .find(|(b, _)| (b.position() - pin.position()).abs() <= TOL)
            {
                Some((_, v)) if (v - value).abs() > TOL => {
                    return Err(Error::InvalidT(format!(
                        "t({pin}) must be {value}, got {v}"
                    )));
                }
                Some(_) => {}
                None => pts.push((pin, value)),
            }
        }
        pts.sort_by(|a, b| a.0.position().total_cmp(&b.0.position()));
        for w in pts.windows(2) {
            if w[1].0.position() - w[0].0.position() <= TOL {
                return Err(Error::InvalidT(format!("duplicate point {}", w[0].0)));
            }
            if w[1].1 <= w[0].1 {
                return Err(Error::InvalidT(format!(
                    "not strictly increasing between {} and {}",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(TFunction::Tabular { points: pts })
    }

    /// Value at `<1,1>`: the price of a fair likelihood gamble.
    pub fn attitude(&self) -> f64 {
        t_apply(self, BinaryUtility::TIE)
    }
}

/// Evaluates t on a scale value.
pub fn t_apply(t: &TFunction, b: BinaryUtility) -> f64 {
    match t {
        TFunction::Parametric { c } => {
            if b.rho >= 1.0 {
                c * b.lambda
            } else {
                1.0 - (1.0 - c) * b.rho
            }
        }
        TFunction::Tabular { points } => {
            let x = b.position();
            let i = points
                .windows(2)
                .position(|w| x <= w[1].0.position())
                .unwrap_or(points.len() - 2);
            let (x0, y0) = (points[i].0.position(), points[i].1);
            let (x1, y1) = (points[i + 1].0.position(), points[i + 1].1);
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    }
}

/// Prize labels with their scale values and the designated best and worst.
#[derive(Debug, Clone, PartialEq)]
pub struct PrizeAssignment {
    qu: IndexMap<String, BinaryUtility>,
    best: String,
    worst: String,
}

impl PrizeAssignment {
    pub fn new<I, S>(prizes: I, best: &str, worst: &str) -> Result<Self>
    where
        I: IntoIterator<Item = (S, BinaryUtility)>,
        S: Into<String>,
    {
        let mut qu = IndexMap::new();
        for (label, b) in prizes {
            let label = label.into();
            if qu.insert(label.clone(), b).is_some() {
                return Err(Error::InvalidPrizes(format!("duplicate prize `{label}`")));
            }
        }
        if best == worst {
            return Err(Error::InvalidPrizes(
                "best and worst prizes must differ".into(),
            ));
        }
        for (label, pin) in [(best, BinaryUtility::BEST), (worst, BinaryUtility::WORST)] {
            match qu.get(label) {
                None => return Err(Error::UnknownPrize(label.to_string())),
                Some(b) if *b != pin => {
                    return Err(Error::InvalidPrizes(format!(
                        "`{label}` must have qu {pin}, got {b}"
                    )))
                }
                Some(_) => {}
            }
        }
        Ok(PrizeAssignment {
            qu,
            best: best.to_string(),
            worst: worst.to_string(),
        })
    }

    pub fn qu(&self, prize: &str) -> Result<BinaryUtility> {
        self.qu
            .get(prize)
            .copied()
            .ok_or_else(|| Error::UnknownPrize(prize.to_string()))
    }

    pub fn contains(&self, prize: &str) -> bool {
        self.qu.contains_key(prize)
    }

    pub fn best(&self) -> &str {
        &self.best
    }

    pub fn worst(&self) -> &str {
        &self.worst
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, BinaryUtility)> {
        self.qu.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Real utilities `u(w) = t(qu(w))`, in declaration order.
    pub fn induced_utilities(&self, t: &TFunction) -> IndexMap<String, f64> {
        self.qu
            .iter()
            .map(|(k, b)| (k.clone(), t_apply(t, *b)))
            .collect()
    }
}

/// Binary utility of a possibilistic lottery: `max_j π_j · qu(w_j)`.
pub fn qu_lottery(
    possibilities: &IndexMap<String, f64>,
    prizes: &PrizeAssignment,
) -> Result<BinaryUtility> {
    let mut top = 0.0f64;
    let mut acc = ScaledPair::default();
    for (prize, &pi) in possibilities {
        if !pi.is_finite() || !(-TOL..=1.0 + TOL).contains(&pi) {
            return Err(Error::OutOfRange {
                name: "possibility",
                value: pi,
                range: "[0, 1]",
            });
        }
        let pi = pi.clamp(0.0, 1.0);
        top = top.max(pi);
        acc = b_max(acc, b_scale(pi, prizes.qu(prize)?));
    }
    if (top - 1.0).abs() > TOL {
        return Err(Error::NotNormalized {
            what: "possibilities (maximum)".into(),
            total: top,
        });
    }
    BinaryUtility::new(acc.lambda, acc.rho)
}

/// Linear expected utility `Σ p_i u(z_i)` of a probabilistic lottery.
pub fn expected_utility(lottery: &IndexMap<String, f64>, u: &IndexMap<String, f64>) -> Result<f64> {
    let mut total = 0.0;
    let mut value = 0.0;
    for (prize, &p) in lottery {
        if !p.is_finite() || p < -TOL {
            return Err(Error::OutOfRange {
                name: "probability",
                value: p,
                range: "[0, 1]",
            });
        }
        let up = u
            .get(prize)
            .ok_or_else(|| Error::UnknownPrize(prize.clone()))?;
        total += p;
        value += p * up;
    }
    if (total - 1.0).abs() > TOL {
        return Err(Error::NotNormalized {
            what: "lottery probabilities".into(),
            total,
        });
    }
    Ok(value)
}

/// Mixed utility `Σ_i p_i · t(qu(L_i))` of a two-stage lottery.
/// Blocks with zero probability are skipped.
pub fn mixed_utility(
    lottery: &TwoStageLottery,
    prizes: &PrizeAssignment,
    t: &TFunction,
) -> Result<f64> {
    let mut value = 0.0;
    for (p, branch) in lottery.branches() {
        if p <= 0.0 {
            continue;
        }
        value += p * t_apply(t, qu_lottery(branch, prizes)?);
    }
    Ok(value)
}
