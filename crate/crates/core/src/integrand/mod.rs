//! Integrand representation, normalization, form classification and
//! degeneracy profiling.

mod classify;
mod normalize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{Poly, Rat};

pub use classify::{classify, degeneracy_profile, max_cofactor_degree, DegeneracyProfile};
pub use normalize::{normalize, normalize_keeping_zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranscKind {
    Exp,
    Cos,
    Sin,
}

impl TranscKind {
    pub fn name(self) -> &'static str {
        match self {
            TranscKind::Exp => "exp",
            TranscKind::Cos => "cos",
            TranscKind::Sin => "sin",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "exp" => Some(TranscKind::Exp),
            "cos" => Some(TranscKind::Cos),
            "sin" => Some(TranscKind::Sin),
            _ => None,
        }
    }
}

/// `kind(arg)` with `arg` of degree exactly one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TranscFactor {
    pub kind: TranscKind,
    pub arg: Poly,
}

impl TranscFactor {
    pub fn new(kind: TranscKind, arg: Poly) -> Self {
        TranscFactor { kind, arg }
    }

    pub fn with_kind(&self, kind: TranscKind) -> Self {
        TranscFactor {
            kind,
            arg: self.arg.clone(),
        }
    }
}

/// `base^exponent` with a nonconstant base.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PowerFactor {
    pub base: Poly,
    pub exponent: Rat,
}

impl PowerFactor {
    pub fn new(base: Poly, exponent: Rat) -> Self {
        PowerFactor { base, exponent }
    }

    pub fn degree(&self) -> usize {
        self.base.degree().unwrap_or(0)
    }
}

/// `cofactor * transc * prod(base_i ^ exponent_i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Integrand {
    pub cofactor: Poly,
    pub transc: Option<TranscFactor>,
    pub factors: Vec<PowerFactor>,
}

impl Integrand {
    pub fn new(cofactor: Poly, transc: Option<TranscFactor>, factors: Vec<PowerFactor>) -> Self {
        Integrand {
            cofactor,
            transc,
            factors,
        }
    }

    pub fn pure(factors: Vec<PowerFactor>) -> Self {
        Integrand::new(Poly::one(), None, factors)
    }

    pub fn cofactor_degree(&self) -> usize {
        self.cofactor.degree().unwrap_or(0)
    }

    pub fn exponents(&self) -> Vec<Rat> {
        self.factors.iter().map(|f| f.exponent.clone()).collect()
    }

    pub fn scaled(&self, c: &Rat) -> Integrand {
        Integrand {
            cofactor: self.cofactor.scale(c),
            ..self.clone()
        }
    }

    /// Same integrand without the cofactor.
    pub fn kernel(&self) -> Integrand {
        Integrand {
            cofactor: Poly::one(),
            ..self.clone()
        }
    }
}

/// The twelve supported integrand families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormTag {
    Q2,
    C3,
    Q4,
    LL,
    EL,
    LQ,
    EQ,
    QQ,
    LLL,
    ELL,
    LLQ,
    LLLL,
}

impl FormTag {
    pub const ALL: [FormTag; 12] = [
        FormTag::Q2,
        FormTag::C3,
        FormTag::Q4,
        FormTag::LL,
        FormTag::EL,
        FormTag::LQ,
        FormTag::EQ,
        FormTag::QQ,
        FormTag::LLL,
        FormTag::ELL,
        FormTag::LLQ,
        FormTag::LLLL,
    ];

    /// Base degrees per slot, nondecreasing.
    pub fn slot_degrees(self) -> &'static [usize] {
        match self {
            FormTag::Q2 => &[2],
            FormTag::C3 => &[3],
            FormTag::Q4 => &[4],
            FormTag::LL => &[1, 1],
            FormTag::EL => &[1],
            FormTag::LQ => &[1, 2],
            FormTag::EQ => &[2],
            FormTag::QQ => &[2, 2],
            FormTag::LLL => &[1, 1, 1],
            FormTag::ELL => &[1, 1],
            FormTag::LLQ => &[1, 1, 2],
            FormTag::LLLL => &[1, 1, 1, 1],
        }
    }

    pub fn has_transc(self) -> bool {
        matches!(self, FormTag::EL | FormTag::EQ | FormTag::ELL)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FormTag::Q2 => "Q2",
            FormTag::C3 => "C3",
            FormTag::Q4 => "Q4",
            FormTag::LL => "LL",
            FormTag::EL => "EL",
            FormTag::LQ => "LQ",
            FormTag::EQ => "EQ",
            FormTag::QQ => "QQ",
            FormTag::LLL => "LLL",
            FormTag::ELL => "ELL",
            FormTag::LLQ => "LLQ",
            FormTag::LLLL => "LLLL",
        }
    }

    pub fn from_shape(degrees: &[usize], transc: bool) -> Option<FormTag> {
        FormTag::ALL
            .into_iter()
            .find(|t| t.slot_degrees() == degrees && t.has_transc() == transc)
    }
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormTag {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| crate::error::Error::UnsupportedForm(format!("unknown form tag {s}")))
    }
}

/// Target interval for every exponent, with distances measured to the closed hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub lo: Rat,
    pub hi: Rat,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            lo: Rat::int(-1),
            hi: Rat::zero(),
        }
    }
}

impl Window {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        Window { lo, hi }
    }

    /// Number of unit steps that bring `e` into the window.
    pub fn distance(&self, e: &Rat) -> u64 {
        let d = if e < &self.lo {
            &self.lo - e
        } else if e > &self.hi {
            e - &self.hi
        } else {
            return 0;
        };
        d.ceil().to_i64().map_or(u64::MAX, |v| v as u64)
    }

    /// Reduction potential: total distance of all exponents.
    pub fn potential(&self, i: &Integrand) -> u64 {
        i.factors.iter().map(|f| self.distance(&f.exponent)).sum()
    }

    pub fn potential_of(&self, exps: &[Rat]) -> u64 {
        exps.iter().map(|e| self.distance(e)).sum()
    }
}
