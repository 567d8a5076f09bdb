//! Hierarchy classes Σ(n), Π(n), Δ(n) and their algebra.
//!
//! The order is generated by `Δ(n) ≤ Σ(n)`, `Δ(n) ≤ Π(n)`, `Σ(n) ≤ Δ(n+1)`
//! and `Π(n) ≤ Δ(n+1)`. Laid out by rank it is a ladder of diamonds
//!
//! ```text
//! Δ(1) < {Σ(1), Π(1)} < Δ(2) < {Σ(2), Π(2)} < Δ(3) < ...
//! ```
//!
//! so two classes are comparable unless they are the Σ and Π of the same
//! level, and every pair has a join and a meet.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest level any rule may produce.
pub const LEVEL_CAP: u32 = 65_535;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("hierarchy levels start at 1")]
    LevelZero,
    #[error("LevelOverflow: level {0} exceeds the cap of {LEVEL_CAP}")]
    LevelOverflow(u64),
    #[error("an explicit level schedule must list at least one class")]
    EmptySchedule,
    #[error(
        "UnboundedSchedule ({0}): a countable union of projective sets whose levels are \
         unbounded need not be projective, so no single class bounds the result"
    )]
    UnboundedSchedule(String),
    #[error("cannot parse class token `{0}`")]
    BadToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Sigma,
    Pi,
    Delta,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Sigma => "sigma",
            Kind::Pi => "pi",
            Kind::Delta => "delta",
        }
    }
}

/// A canonical class token. Borel is `Δ(1)` and analytic is `Σ(1)`; there is
/// no separate token for either.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct PointClass {
    kind: Kind,
    level: u32,
}

/// Checks a computed level against `1..=LEVEL_CAP`.
pub fn checked_level(level: u64) -> Result<u32, ClassError> {
    if level == 0 {
        Err(ClassError::LevelZero)
    } else if level > u64::from(LEVEL_CAP) {
        Err(ClassError::LevelOverflow(level))
    } else {
        Ok(level as u32)
    }
}

impl PointClass {
    pub const BOREL: PointClass = PointClass { kind: Kind::Delta, level: 1 };
    pub const ANALYTIC: PointClass = PointClass { kind: Kind::Sigma, level: 1 };
    pub const COANALYTIC: PointClass = PointClass { kind: Kind::Pi, level: 1 };

    pub fn new(kind: Kind, level: u64) -> Result<Self, ClassError> {
        Ok(PointClass { kind, level: checked_level(level)? })
    }

    pub fn sigma(level: u64) -> Result<Self, ClassError> {
        Self::new(Kind::Sigma, level)
    }

    pub fn pi(level: u64) -> Result<Self, ClassError> {
        Self::new(Kind::Pi, level)
    }

    pub fn delta(level: u64) -> Result<Self, ClassError> {
        Self::new(Kind::Delta, level)
    }

    pub fn kind(self) -> Kind {
        self.kind
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn is_delta(self) -> bool {
        self.kind == Kind::Delta
    }

    // Δ(n) sits at 2n-2, Σ(n) and Π(n) share 2n-1.
    fn rank(self) -> u64 {
        let n = u64::from(self.level);
        match self.kind {
            Kind::Delta => 2 * n - 2,
            Kind::Sigma | Kind::Pi => 2 * n - 1,
        }
    }

    pub fn leq(self, other: PointClass) -> bool {
        self == other || self.rank() < other.rank()
    }

    pub fn join(self, other: PointClass) -> Result<PointClass, ClassError> {
        if self.leq(other) {
            Ok(other)
        } else if other.leq(self) {
            Ok(self)
        } else {
            // Σ(n) and Π(n): both sit inside Δ(n+1).
            PointClass::delta(u64::from(self.level) + 1)
        }
    }

    pub fn meet(self, other: PointClass) -> PointClass {
        if self.leq(other) {
            self
        } else if other.leq(self) {
            other
        } else {
            PointClass { kind: Kind::Delta, level: self.level }
        }
    }

    pub fn complement(self) -> PointClass {
        let kind = match self.kind {
            Kind::Sigma => Kind::Pi,
            Kind::Pi => Kind::Sigma,
            Kind::Delta => Kind::Delta,
        };
        PointClass { kind, level: self.level }
    }

    /// The least Δ class containing `self`.
    pub fn delta_cover(self) -> Result<PointClass, ClassError> {
        match self.kind {
            Kind::Delta => Ok(self),
            Kind::Sigma | Kind::Pi => PointClass::delta(u64::from(self.level) + 1),
        }
    }

    /// The least Σ class containing `self`.
    pub fn sigma_cover(self) -> Result<PointClass, ClassError> {
        match self.kind {
            Kind::Sigma | Kind::Delta => PointClass::sigma(u64::from(self.level)),
            Kind::Pi => PointClass::sigma(u64::from(self.level) + 1),
        }
    }

    /// Class of `f(A)` for Borel `f` and `A` in `self`.
    pub fn borel_image(self) -> Result<PointClass, ClassError> {
        self.sigma_cover()
    }

    /// Class of `f⁻¹(B)` for Borel `f` and `B` in `self`.
    pub fn borel_preimage(self) -> PointClass {
        self
    }

    /// Class of the projection of a set in `self`. A Π(n) set projects to
    /// Σ(n+1) by construction of the hierarchy; Σ and Δ sets stay in Σ(n)
    /// because projection is a Borel image.
    pub fn projection(self) -> Result<PointClass, ClassError> {
        self.sigma_cover()
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.keyword(), self.level)
    }
}

impl FromStr for PointClass {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClassError::BadToken(s.to_string());
        let mut parts = s.split_whitespace();
        let head = parts.next().ok_or_else(bad)?;
        let class = match head {
            "borel" => PointClass::BOREL,
            "analytic" => PointClass::ANALYTIC,
            "sigma" | "pi" | "delta" => {
                let level: u64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let kind = match head {
                    "sigma" => Kind::Sigma,
                    "pi" => Kind::Pi,
                    _ => Kind::Delta,
                };
                PointClass::new(kind, level)?
            }
            _ => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(class)
    }
}

impl From<PointClass> for String {
    fn from(c: PointClass) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for PointClass {
    type Error = ClassError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// How the levels of a countable family are known.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelSchedule {
    ExplicitList(Vec<PointClass>),
    ConstantClass(PointClass),
    BoundedBy(PointClass),
    /// Levels grow without bound; the text says how (e.g. `level_i = i`).
    Unbounded(String),
}

impl LevelSchedule {
    pub fn explicit(classes: Vec<PointClass>) -> Result<Self, ClassError> {
        if classes.is_empty() {
            return Err(ClassError::EmptySchedule);
        }
        Ok(LevelSchedule::ExplicitList(classes))
    }

    /// The single class every member belongs to.
    pub fn bound(&self) -> Result<PointClass, ClassError> {
        match self {
            LevelSchedule::ConstantClass(c) | LevelSchedule::BoundedBy(c) => Ok(*c),
            LevelSchedule::ExplicitList(list) => {
                let (first, rest) = list.split_first().ok_or(ClassError::EmptySchedule)?;
                rest.iter().try_fold(*first, |acc, c| acc.join(*c))
            }
            LevelSchedule::Unbounded(witness) => {
                Err(ClassError::UnboundedSchedule(witness.clone()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combine {
    Union,
    Intersection,
}

/// Σ(n), Π(n) and Δ(n) are each closed under countable unions and
/// intersections, so a family with a bounded schedule lands in its bound.
pub fn countable_combine(_op: Combine, schedule: &LevelSchedule) -> Result<PointClass, ClassError> {
    schedule.bound()
}

/// Class of `A × B`. Same-kind products stay in the kind; otherwise both
/// factors are upcast to their join first.
pub fn product_class(a: PointClass, b: PointClass) -> Result<PointClass, ClassError> {
    a.join(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: u64) -> PointClass {
        PointClass::sigma(n).unwrap()
    }
    fn p(n: u64) -> PointClass {
        PointClass::pi(n).unwrap()
    }
    fn d(n: u64) -> PointClass {
        PointClass::delta(n).unwrap()
    }

    #[test]
    fn order_examples() {
        assert!(d(3).leq(s(3)));
        assert!(s(2).leq(d(3)));
        assert!(!s(2).leq(p(2)));
        assert!(!p(2).leq(s(2)));
    }

    #[test]
    fn join_examples() {
        assert_eq!(s(2).join(p(2)).unwrap(), d(3));
        assert_eq!(d(4).join(d(4)).unwrap(), d(4));
        assert_eq!(s(1).join(p(3)).unwrap(), p(3));
        assert_eq!(s(2).meet(p(2)), d(2));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(s(3).complement(), p(3));
        assert_eq!(d(2).complement(), d(2));
        assert_eq!(p(5).complement().complement(), p(5));
    }

    #[test]
    fn combine_examples() {
        assert_eq!(
            countable_combine(Combine::Union, &LevelSchedule::ConstantClass(s(2))).unwrap(),
            s(2)
        );
        let err = countable_combine(Combine::Union, &LevelSchedule::Unbounded("level_i = i".into()))
            .unwrap_err();
        assert!(matches!(err, ClassError::UnboundedSchedule(_)));
        assert!(err.to_string().contains("need not be projective"));
        let list = LevelSchedule::explicit(vec![d(1), d(3), d(2)]).unwrap();
        assert_eq!(countable_combine(Combine::Intersection, &list).unwrap(), d(3));
        assert_eq!(LevelSchedule::explicit(vec![]), Err(ClassError::EmptySchedule));
    }

    #[test]
    fn product_examples() {
        assert_eq!(product_class(s(2), s(2)).unwrap(), s(2));
        assert_eq!(product_class(d(1), d(1)).unwrap(), d(1));
        assert_eq!(product_class(s(2), p(2)).unwrap(), d(3));
    }

    #[test]
    fn image_preimage_projection_examples() {
        assert_eq!(s(3).borel_image().unwrap(), s(3));
        assert_eq!(p(2).borel_image().unwrap(), s(3));
        assert_eq!(d(1).borel_image().unwrap(), s(1));
        assert_eq!(s(4).borel_preimage(), s(4));
        assert_eq!(p(2).borel_preimage(), p(2));
        assert_eq!(d(1).borel_preimage(), d(1));
        assert_eq!(p(2).projection().unwrap(), s(3));
        assert_eq!(s(3).projection().unwrap(), s(3));
        assert_eq!(d(1).projection().unwrap(), s(1));
    }

    #[test]
    fn level_bounds() {
        assert_eq!(PointClass::sigma(0), Err(ClassError::LevelZero));
        assert!(PointClass::delta(u64::from(LEVEL_CAP)).is_ok());
        assert_eq!(
            PointClass::delta(u64::from(LEVEL_CAP) + 1),
            Err(ClassError::LevelOverflow(65_536))
        );
        let top = u64::from(LEVEL_CAP);
        assert!(matches!(s(top).join(p(top)), Err(ClassError::LevelOverflow(_))));
        assert!(matches!(p(top).projection(), Err(ClassError::LevelOverflow(_))));
    }

    #[test]
    fn tokens_round_trip() {
        assert_eq!("borel".parse::<PointClass>().unwrap(), d(1));
        assert_eq!("analytic".parse::<PointClass>().unwrap(), s(1));
        assert_eq!("pi 7".parse::<PointClass>().unwrap(), p(7));
        assert!("pi".parse::<PointClass>().is_err());
        assert!("pi 0".parse::<PointClass>().is_err());
        assert!("gamma 2".parse::<PointClass>().is_err());
        let json = serde_json::to_string(&s(2)).unwrap();
        assert_eq!(json, "\"sigma 2\"");
        assert_eq!(serde_json::from_str::<PointClass>(&json).unwrap(), s(2));
    }
}
