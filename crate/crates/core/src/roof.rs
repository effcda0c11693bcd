//! Roof-class taxonomy and its binary feature decomposition.
//!
//! Five wind-relevant roof classes plus an `Unknown` filter class for
//! images where the roof cannot be seen. Each valid class decomposes into
//! a (family, complexity) pair; imputation predicts the pair and maps it
//! back to a class.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DomainError;

/// Roof class as emitted by the image classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoofClass {
    SimpleGable,
    SimpleCrossGable,
    ComplexCrossGable,
    SimpleHip,
    CrossHip,
    Unknown,
}

impl RoofClass {
    /// Canonical order. Prediction files, confusion matrices and argmax
    /// tie-breaking all use it.
    pub const ALL: [RoofClass; 6] = [
        RoofClass::SimpleGable,
        RoofClass::SimpleCrossGable,
        RoofClass::ComplexCrossGable,
        RoofClass::SimpleHip,
        RoofClass::CrossHip,
        RoofClass::Unknown,
    ];

    /// The five classes that count as a valid roof.
    pub const VALID: [RoofClass; 5] = [
        RoofClass::SimpleGable,
        RoofClass::SimpleCrossGable,
        RoofClass::ComplexCrossGable,
        RoofClass::SimpleHip,
        RoofClass::CrossHip,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RoofClass::SimpleGable => "g",
            RoofClass::SimpleCrossGable => "scg",
            RoofClass::ComplexCrossGable => "ccg",
            RoofClass::SimpleHip => "h",
            RoofClass::CrossHip => "ch",
            RoofClass::Unknown => "unknown",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            RoofClass::SimpleGable => "Simple gable",
            RoofClass::SimpleCrossGable => "Simple cross-gable",
            RoofClass::ComplexCrossGable => "Complex cross-gable",
            RoofClass::SimpleHip => "Simple hip",
            RoofClass::CrossHip => "Cross-hip",
            RoofClass::Unknown => "Unknown",
        }
    }

    /// Position in [`RoofClass::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<RoofClass> {
        RoofClass::ALL.get(i).copied()
    }

    pub fn is_valid(self) -> bool {
        self != RoofClass::Unknown
    }

    pub fn to_features(self) -> Result<RoofFeatures, DomainError> {
        let (family, complexity) = match self {
            RoofClass::SimpleGable => (RoofFamily::Gable, Complexity::Simple),
            RoofClass::SimpleCrossGable => (RoofFamily::Gable, Complexity::Complex),
            RoofClass::ComplexCrossGable => (RoofFamily::Gable, Complexity::Complex),
            RoofClass::SimpleHip => (RoofFamily::Hip, Complexity::Simple),
            RoofClass::CrossHip => (RoofFamily::Hip, Complexity::Complex),
            RoofClass::Unknown => return Err(DomainError::UnknownRoofHasNoFeatures),
        };
        Ok(RoofFeatures { family, complexity })
    }

    pub fn is_gable(self) -> Result<bool, DomainError> {
        self.to_features().map(|f| f.family == RoofFamily::Gable)
    }

    pub fn is_complex(self) -> Result<bool, DomainError> {
        self.to_features().map(|f| f.complexity == Complexity::Complex)
    }
}

impl fmt::Display for RoofClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for RoofClass {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RoofClass::ALL
            .iter()
            .copied()
            .find(|c| c.code() == s)
            .ok_or_else(|| DomainError::BadRoofCode(s.to_string()))
    }
}

/// Gable/hip axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoofFamily {
    Gable,
    Hip,
}

/// Simple/complex axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Complexity {
    Simple,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoofFeatures {
    pub family: RoofFamily,
    pub complexity: Complexity,
}

impl RoofFeatures {
    pub const ALL: [RoofFeatures; 4] = [
        RoofFeatures::new(RoofFamily::Gable, Complexity::Simple),
        RoofFeatures::new(RoofFamily::Gable, Complexity::Complex),
        RoofFeatures::new(RoofFamily::Hip, Complexity::Simple),
        RoofFeatures::new(RoofFamily::Hip, Complexity::Complex),
    ];

    pub const fn new(family: RoofFamily, complexity: Complexity) -> Self {
        RoofFeatures { family, complexity }
    }

    /// Reverse mapping. Every complex gable collapses to complex
    /// cross-gable, so simple cross-gable is never produced here.
    pub fn to_class(self) -> RoofClass {
        match (self.family, self.complexity) {
            (RoofFamily::Gable, Complexity::Simple) => RoofClass::SimpleGable,
            (RoofFamily::Gable, Complexity::Complex) => RoofClass::ComplexCrossGable,
            (RoofFamily::Hip, Complexity::Simple) => RoofClass::SimpleHip,
            (RoofFamily::Hip, Complexity::Complex) => RoofClass::CrossHip,
        }
    }
}
