//! Derivation trees: one node per rule application.
//!
//! The wire format is canonical JSON with sorted keys:
//!
//! ```json
//! {"cite": "...", "conclusion": {"judgment": {"level": 5}, "mode": "ZFC", "subject": "compose(f, g)"},
//!  "premises": [...], "rule": "F-COMP"}
//! ```

mod check;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::infer::AxiomMode;
use crate::pointclass::{LevelSchedule, PointClass};

pub use check::{check, CheckError};

macro_rules! rules {
    ($($variant:ident => $id:literal, $cite:literal;)*) => {
        /// Every node type a derivation may contain.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleId {
            $($variant,)*
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $id,)*
                }
            }

            /// The statement that justifies the rule.
            pub fn citation(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $cite,)*
                }
            }
        }

        impl FromStr for RuleId {
            type Err = UnknownRule;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($id => Ok(RuleId::$variant),)*
                    _ => Err(UnknownRule(s.to_string())),
                }
            }
        }
    };
}

rules! {
    SProj => "S-PROJ", "proj_X(C) ∈ Σ(n+1) for C ∈ Π(n) on X × Y, and projections of Σ(n) or Δ(n) sets are Σ(n)";
    SCu => "S-CU", "Σ(n), Π(n) and Δ(n) are closed under countable unions";
    SCi => "S-CI", "Σ(n), Π(n) and Δ(n) are closed under countable intersections";
    SCompl => "S-COMPL", "Π(n) = {X ∖ C : C ∈ Σ(n)}, and Δ(n) is closed under complement";
    SProd => "S-PROD", "A ∈ Γ(X), B ∈ Γ(Y) implies A × B ∈ Γ(X × Y) for Γ = Σ(n), Π(n), Δ(n)";
    SBimg => "S-BIMG", "f Borel and A ∈ Σ(n) imply f(A) ∈ Σ(n)";
    SBpre => "S-BPRE", "f Borel and B ∈ Γ(Y) imply f⁻¹(B) ∈ Γ(X) for Γ = Σ(n), Π(n), Δ(n)";
    FPair => "F-PAIR", "f Δ(p)-measurable and g Δ(q)-measurable imply (f, g) is Δ(max(p, q))-measurable";
    FCyl => "F-CYL", "f Δ(p)-measurable on X implies (x, y) ↦ f(x) is Δ(p)-measurable on X × Y";
    FPreDelta => "F-PRE-DELTA", "f Δ(p)-measurable and B ∈ Δ(n) imply f⁻¹(B) ∈ Δ(p+n)";
    FPreSigma => "F-PRE-SIGMA", "f Δ(p)-measurable and B ∈ Σ(n) imply f⁻¹(B) ∈ Σ(n+p−1); Π(n) by complement";
    FGraph => "F-GRAPH", "f Δ(n)-measurable on D ∈ Δ(n) implies Graph(f) ∈ Δ(n+1)";
    FUngraph => "F-UNGRAPH", "Graph(f) ∈ Δ(n) and D ∈ Δ(n) imply f is Δ(n+1)-measurable";
    FComp => "F-COMP", "f Δ(p)-measurable and g Δ(q)-measurable imply f∘g is Δ(p+q)-measurable";
    FCompB => "F-COMP-B", "f Δ(p)-measurable and g Borel imply f∘g is Δ(p)-measurable";
    FSect => "F-SECT", "h Δ(p)-measurable on X × Y implies h(x, ·) is Δ(p+1)-measurable";
    FArith => "F-ARITH", "f, g Δ(p)-measurable imply f+g, −f, fg, min(f, g), max(f, g), ⟨f, g⟩ and f^a (f ≥ 0) are Δ(p)-measurable";
    FCsup => "F-CSUP", "f_n Δ(p)-measurable for all n implies sup_n f_n is Δ(p)-measurable";
    FCinf => "F-CINF", "f_n Δ(p)-measurable for all n implies inf_n f_n is Δ(p)-measurable";
    FPartial => "F-PARTIAL", "f Δ(q)-measurable and D ∈ Δ(q) imply {f_* < c} ∈ Σ(q) ⊂ Δ(q+1), so f_* and f^* are Δ(q+1)-measurable";
    FInt => "F-INT", "f Δ(p)-measurable and q a Δ(r)-measurable kernel imply x ↦ ∫ f(x, y) q(dy|x) is Δ(p+r+2)-measurable (PD)";
    SWr => "S-WR", "A ∈ Σ(n) implies {μ ∈ 𝔓(X) : μ(A) ≥ r} ∈ Σ(n) (PD for n ≥ 2)";
    FSelect => "F-SELECT", "A ∈ Π(2m+1) on X × Y has a uniformization A* ⊂ A in Π(2m+1) (PD for m ≥ 1)";
    FEps => "F-EPS", "f projective on D projective has projective ε-optimal selectors φ_*, φ^* with Graph ⊂ D (PD)";
    PUm => "P-UM", "projective sets and functions are universally measurable (PD above level 1)";
    DeclSet => "DECL-SET", "declared set class";
    DeclFunc => "DECL-FUNC", "declared function level; Borel is Δ(1), lower- and upper-semianalytic are Δ(2)";
    DeclKernel => "DECL-KERNEL", "declared kernel level";
    DeclSpace => "DECL-SPACE", "a whole space is Borel";
    Family => "FAMILY", "declared level schedule of a countable family";
    SLevel => "S-LEVEL", "f Δ(p)-measurable implies {f < c}, {f ≤ c}, {f > c}, {f ≥ c} ∈ Δ(p)";
    Sub => "SUB", "Δ(n) ⊂ Σ(n) ∩ Π(n) and Σ(n) ∪ Π(n) ⊂ Δ(n+1): least Δ class above";
    Meet => "MEET", "a set in several classes lies in their greatest lower bound";
    Domain => "DOMAIN", "f on D ∈ Γ: f⁻¹(B) ⊂ D, so the level joins the least Δ class above Γ";
}

impl RuleId {
    /// Whether the rule needs PD for at least some inputs.
    pub fn is_gated(self) -> bool {
        matches!(self, RuleId::FInt | RuleId::SWr | RuleId::FSelect | RuleId::FEps | RuleId::PUm)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule id `{0}`")]
pub struct UnknownRule(pub String);

impl Serialize for RuleId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What a node concludes about its subject.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Judgment {
    Class(PointClass),
    /// Δ(p)-measurability.
    Level(u32),
    Schedule(LevelSchedule),
    /// A named property such as universal measurability.
    Property(String),
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Class(c) => write!(f, "{c}"),
            Judgment::Level(p) => write!(f, "delta {p}-measurable"),
            Judgment::Schedule(s) => write!(f, "schedule {s:?}"),
            Judgment::Property(p) => f.write_str(p),
        }
    }
}

pub const UNIVERSALLY_MEASURABLE: &str = "universally measurable";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conclusion {
    pub subject: String,
    pub judgment: Judgment,
    pub mode: AxiomMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Derivation {
    pub rule: RuleId,
    pub cite: String,
    pub premises: Vec<Derivation>,
    pub conclusion: Conclusion,
}

impl Derivation {
    pub fn new(rule: RuleId, premises: Vec<Derivation>, subject: impl Into<String>, judgment: Judgment, mode: AxiomMode) -> Self {
        Derivation {
            rule,
            cite: rule.citation().to_string(),
            premises,
            conclusion: Conclusion { subject: subject.into(), judgment, mode },
        }
    }

    pub fn leaf(rule: RuleId, subject: impl Into<String>, judgment: Judgment, mode: AxiomMode) -> Self {
        Self::new(rule, Vec::new(), subject, judgment, mode)
    }

    pub fn judgment(&self) -> &Judgment {
        &self.conclusion.judgment
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Whether any node applies `rule`.
    pub fn uses(&self, rule: RuleId) -> bool {
        self.rule == rule || self.premises.iter().any(|p| p.uses(rule))
    }

    /// Node at a path of premise indices.
    pub fn node(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get(*i)?.node(rest),
        }
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get_mut(*i)?.node_mut(rest),
        }
    }

    /// Paths of all nodes in pre-order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for (i, p) in self.premises.iter().enumerate() {
            for mut sub in p.paths() {
                sub.insert(0, i);
                out.push(sub);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("FormatError at byte {offset}: {message}")]
pub struct FormatError {
    pub offset: usize,
    pub message: String,
}

/// Canonical JSON: keys sorted, no insignificant whitespace, trailing newline.
pub fn serialize(d: &Derivation) -> Vec<u8> {
    // serde_json's Value map is a BTreeMap, so going through it sorts keys.
    let value = serde_json::to_value(d).expect("derivations always serialize");
    let mut out = serde_json::to_vec(&value).expect("values always serialize");
    out.push(b'\n');
    out
}

pub fn deserialize(bytes: &[u8]) -> Result<Derivation, FormatError> {
    serde_json::from_slice(bytes).map_err(|e| FormatError {
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    })
}

fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut start = 0;
    for (i, l) in bytes.split(|b| *b == b'\n').enumerate() {
        if i + 1 == line {
            return (start + column.saturating_sub(1)).min(bytes.len());
        }
        start += l.len() + 1;
    }
    bytes.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf() -> Derivation {
        Derivation::leaf(RuleId::DeclSet, "A", Judgment::Class(PointClass::ANALYTIC), AxiomMode::Zfc)
    }

    #[test]
    fn rule_ids_round_trip() {
        for r in RuleId::ALL {
            assert_eq!(r.as_str().parse::<RuleId>().unwrap(), *r);
        }
        assert!("F-NOPE".parse::<RuleId>().is_err());
    }

    #[test]
    fn single_leaf_json() {
        let text = String::from_utf8(serialize(&leaf())).unwrap();
        assert!(text.starts_with("{\"cite\":"));
        assert!(text.contains("\"premises\":[]"));
        assert!(text.contains("\"judgment\":{\"class\":\"sigma 1\"}"));
        assert_eq!(deserialize(text.as_bytes()).unwrap(), leaf());
    }

    #[test]
    fn truncated_input_is_format_error() {
        let bytes = serialize(&leaf());
        let err = deserialize(&bytes[..bytes.len() / 2]).unwrap_err();
        assert!(err.offset > 0 && err.offset <= bytes.len());
        assert!(deserialize(b"").is_err());
    }

    #[test]
    fn paths_cover_tree() {
        let d = Derivation::new(RuleId::SCompl, vec![leaf()], "complement(A)", Judgment::Class(PointClass::COANALYTIC), AxiomMode::Zfc);
        assert_eq!(d.paths(), vec![vec![], vec![0]]);
        assert_eq!(d.node(&[0]).unwrap(), &leaf());
        assert_eq!(d.size(), 2);
    }
}
