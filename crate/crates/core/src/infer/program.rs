//! Whole-program runs: infer every binding, then evaluate assertions.

use serde::Serialize;

use super::{AxiomMode, Certificate, Engine, InferError};
use crate::derivation::{Derivation, Judgment};
use crate::expr::{format_decl, Assertion, Decl, Environment, Expr, FuncExpr, Program, Rel, SetExpr};
use crate::pointclass::PointClass;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BindingVerdict {
    pub name: String,
    pub judgment: Option<Judgment>,
    pub error: Option<String>,
    /// A failure that a `blocked` assertion on this binding expects.
    pub expected_failure: bool,
    pub derived_bound: bool,
    #[serde(skip)]
    pub certificate: Option<Certificate>,
}

impl BindingVerdict {
    pub fn passed(&self) -> bool {
        self.error.is_none() || self.expected_failure
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssertionVerdict {
    pub text: String,
    pub passed: bool,
    pub message: String,
    #[serde(skip)]
    pub derivation: Option<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgramReport {
    pub mode: AxiomMode,
    pub bindings: Vec<BindingVerdict>,
    pub assertions: Vec<AssertionVerdict>,
}

impl ProgramReport {
    pub fn all_passed(&self) -> bool {
        self.bindings.iter().all(BindingVerdict::passed) && self.assertions.iter().all(|a| a.passed)
    }

    /// Every derivation the run produced, named for output files.
    pub fn derivations(&self) -> Vec<(String, &Derivation)> {
        let mut out = Vec::new();
        for b in &self.bindings {
            if let Some(c) = &b.certificate {
                out.push((format!("let_{}", b.name), &c.derivation));
            }
        }
        for (i, a) in self.assertions.iter().enumerate() {
            if let Some(d) = &a.derivation {
                out.push((format!("assert_{:03}", i + 1), d));
            }
        }
        out
    }
}

fn named(e: &Expr) -> Option<&str> {
    match e {
        Expr::Set(SetExpr::Named(n)) | Expr::Func(FuncExpr::Named(n)) => Some(n),
        _ => None,
    }
}

/// Runs a parsed program. The program must come from [`crate::expr::parse`]
/// (or otherwise be well formed).
pub fn run_program(program: &Program, mode: AxiomMode) -> Result<ProgramReport, InferError> {
    let env = Environment::from_program(program).map_err(crate::expr::SignatureError::from)?;
    let engine = Engine::new(&env, mode);
    let blocked: Vec<(&str, &str)> = program
        .assertions()
        .filter_map(|a| match a {
            Assertion::Blocked { expr, rule } => named(expr).map(|n| (n, rule.as_str())),
            _ => None,
        })
        .collect();

    let mut bindings = Vec::new();
    for (name, expr) in program.lets() {
        let verdict = match engine.certify(expr) {
            Ok(cert) => BindingVerdict {
                name: name.clone(),
                judgment: Some(cert.conclusion.clone()),
                error: None,
                expected_failure: false,
                derived_bound: cert.derived_bound,
                certificate: Some(cert),
            },
            Err(e) => {
                let expected = matches!(&e, InferError::AxiomRequired(rule)
                    if blocked.iter().any(|(n, r)| n == name && *r == rule.as_str()));
                BindingVerdict {
                    name: name.clone(),
                    judgment: None,
                    error: Some(e.to_string()),
                    expected_failure: expected,
                    derived_bound: false,
                    certificate: None,
                }
            }
        };
        bindings.push(verdict);
    }

    let mut assertions = Vec::new();
    for decl in &program.decls {
        if let Decl::Assert(a) = decl {
            let mut v = evaluate(&engine, a);
            v.text = format_decl(decl);
            assertions.push(v);
        }
    }
    Ok(ProgramReport { mode, bindings, assertions })
}

fn verdict(passed: bool, message: String, derivation: Option<Derivation>) -> AssertionVerdict {
    AssertionVerdict { text: String::new(), passed, message, derivation }
}

fn evaluate(engine: &Engine<'_>, a: &Assertion) -> AssertionVerdict {
    match a {
        Assertion::Class { set, rel, class } => match engine.certify(&Expr::Set(set.clone())) {
            Ok(cert) => {
                let Judgment::Class(got) = cert.conclusion else { unreachable!("sets conclude classes") };
                let ok = holds_class(got, *rel, *class);
                let message = if ok {
                    format!("inferred {got}")
                } else {
                    format!("inferred {got}, which does not satisfy {} {class}", rel_text(*rel))
                };
                verdict(ok, message, Some(cert.derivation))
            }
            Err(e) => verdict(false, e.to_string(), None),
        },
        Assertion::Level { func, rel, level } => match engine.certify(&Expr::Func(func.clone())) {
            Ok(cert) => {
                let Judgment::Level(got) = cert.conclusion else { unreachable!("functions conclude levels") };
                let ok = match rel {
                    Rel::Le => got <= *level,
                    Rel::Eq => got == *level,
                };
                let message = if ok {
                    format!("inferred delta {got}")
                } else {
                    format!("inferred delta {got}, which does not satisfy {} delta {level}", rel_text(*rel))
                };
                verdict(ok, message, Some(cert.derivation))
            }
            Err(e) => verdict(false, e.to_string(), None),
        },
        Assertion::UniversallyMeasurable(e) => match engine.universally_measurable(e) {
            Ok(Ok(cert)) => verdict(true, "universally measurable".into(), Some(cert.derivation)),
            Ok(Err(refusal)) => verdict(false, refusal.to_string(), None),
            Err(err) => verdict(false, err.to_string(), None),
        },
        Assertion::Blocked { expr, rule } => match engine.certify(expr) {
            Ok(cert) => verdict(
                false,
                format!("expected {rule} to block inference, but it succeeded with {}", cert.conclusion),
                None,
            ),
            Err(InferError::AxiomRequired(r)) if r.as_str() == rule => {
                verdict(true, format!("blocked: AxiomRequired: {r}"), None)
            }
            Err(other) => verdict(false, format!("expected AxiomRequired: {rule}, got {other}"), None),
        },
    }
}

fn holds_class(got: PointClass, rel: Rel, want: PointClass) -> bool {
    match rel {
        Rel::Le => got.leq(want),
        Rel::Eq => got == want,
    }
}

fn rel_text(rel: Rel) -> &'static str {
    match rel {
        Rel::Le => "<=",
        Rel::Eq => "==",
    }
}
