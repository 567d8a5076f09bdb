//! Independent re-validation of derivations.
//!
//! The class order and level arithmetic are re-implemented here on plain
//! `(kind, level)` pairs rather than borrowed from the engine, so a wrong
//! rule in the engine cannot vouch for itself.

use std::fmt;

use thiserror::Error;

use super::{Derivation, Judgment, RuleId, UNIVERSALLY_MEASURABLE};
use crate::expr::{Environment, FuncAnnot};
use crate::infer::AxiomMode;
use crate::pointclass::{Kind, LevelSchedule, PointClass, LEVEL_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct CheckError {
    /// Premise indices from the root to the failing node.
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "CheckError at /{}: {}", path.join("/"), self.reason)
    }
}

/// Accepts `d` iff every node follows from its premises by its rule, every
/// gated rule is used in a mode that allows it, and every leaf matches `env`.
pub fn check(d: &Derivation, env: &Environment) -> Result<(), CheckError> {
    let mut path = Vec::new();
    walk(d, env, &mut path)
}

fn walk(d: &Derivation, env: &Environment, path: &mut Vec<usize>) -> Result<(), CheckError> {
    check_node(d, env).map_err(|reason| CheckError { path: path.clone(), reason })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        walk(p, env, path)?;
        path.pop();
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum K {
    S,
    P,
    D,
}

type C = (K, u64);

fn from_class(c: PointClass) -> C {
    let k = match c.kind() {
        Kind::Sigma => K::S,
        Kind::Pi => K::P,
        Kind::Delta => K::D,
    };
    (k, u64::from(c.level()))
}

fn to_class(c: C) -> Result<PointClass, String> {
    if c.1 == 0 || c.1 > u64::from(LEVEL_CAP) {
        return Err(format!("level {} out of range", c.1));
    }
    let kind = match c.0 {
        K::S => Kind::Sigma,
        K::P => Kind::Pi,
        K::D => Kind::Delta,
    };
    PointClass::new(kind, c.1).map_err(|e| e.to_string())
}

fn rank(c: C) -> u64 {
    match c.0 {
        K::D => 2 * c.1 - 2,
        _ => 2 * c.1 - 1,
    }
}

fn le(a: C, b: C) -> bool {
    a == b || rank(a) < rank(b)
}

fn lub(a: C, b: C) -> C {
    if le(a, b) {
        b
    } else if le(b, a) {
        a
    } else {
        (K::D, a.1 + 1)
    }
}

fn glb(a: C, b: C) -> C {
    if le(a, b) {
        a
    } else if le(b, a) {
        b
    } else {
        (K::D, a.1)
    }
}

fn dcover(c: C) -> C {
    match c.0 {
        K::D => c,
        _ => (K::D, c.1 + 1),
    }
}

fn scover(c: C) -> C {
    match c.0 {
        K::P => (K::S, c.1 + 1),
        _ => (K::S, c.1),
    }
}

fn compl(c: C) -> C {
    match c.0 {
        K::S => (K::P, c.1),
        K::P => (K::S, c.1),
        K::D => c,
    }
}

fn schedule_bound(s: &LevelSchedule) -> Result<C, String> {
    match s {
        LevelSchedule::ConstantClass(c) | LevelSchedule::BoundedBy(c) => Ok(from_class(*c)),
        LevelSchedule::ExplicitList(list) => {
            let mut it = list.iter().map(|c| from_class(*c));
            let first = it.next().ok_or("empty schedule")?;
            Ok(it.fold(first, lub))
        }
        LevelSchedule::Unbounded(w) => Err(format!("unbounded schedule ({w}) has no class")),
    }
}

fn class_of(d: &Derivation) -> Result<C, String> {
    match d.judgment() {
        Judgment::Class(c) => Ok(from_class(*c)),
        other => Err(format!("premise `{}` should conclude a class, found {other}", d.conclusion.subject)),
    }
}

fn level_of(d: &Derivation) -> Result<u64, String> {
    match d.judgment() {
        Judgment::Level(p) if *p >= 1 => Ok(u64::from(*p)),
        other => Err(format!("premise `{}` should conclude a level, found {other}", d.conclusion.subject)),
    }
}

fn arity(d: &Derivation, n: usize) -> Result<(), String> {
    if d.premises.len() == n {
        Ok(())
    } else {
        Err(format!("{} expects {n} premise(s), found {}", d.rule, d.premises.len()))
    }
}

fn level(p: u64) -> Result<Judgment, String> {
    if p == 0 || p > u64::from(LEVEL_CAP) {
        return Err(format!("level {p} out of range"));
    }
    Ok(Judgment::Level(p as u32))
}

fn class(c: C) -> Result<Judgment, String> {
    to_class(c).map(Judgment::Class)
}

fn pd(d: &Derivation) -> bool {
    d.conclusion.mode == AxiomMode::ZfcPd
}

fn gate(d: &Derivation, needed: bool) -> Result<(), String> {
    if needed && !pd(d) {
        Err(format!("axiom gate: {} needs PD but the node records mode ZFC", d.rule))
    } else {
        Ok(())
    }
}

fn check_node(d: &Derivation, env: &Environment) -> Result<(), String> {
    if d.cite != d.rule.citation() {
        return Err(format!("citation does not match rule {}", d.rule));
    }
    for p in &d.premises {
        if p.conclusion.mode != d.conclusion.mode {
            return Err("premise recorded under a different axiom mode".into());
        }
    }
    let expected = expected(d, env)?;
    if expected != d.conclusion.judgment {
        return Err(format!(
            "{} on these premises gives {expected}, node claims {}",
            d.rule, d.conclusion.judgment
        ));
    }
    Ok(())
}

fn expected(d: &Derivation, env: &Environment) -> Result<Judgment, String> {
    let ps = &d.premises;
    let subject = d.conclusion.subject.as_str();
    match d.rule {
        RuleId::DeclSet => {
            arity(d, 0)?;
            let decl = env.set_decl(subject).ok_or_else(|| format!("no set `{subject}` is declared"))?;
            Ok(Judgment::Class(decl.class))
        }
        RuleId::DeclFunc => {
            arity(d, 0)?;
            let decl = env.func_decl(subject).ok_or_else(|| format!("no function `{subject}` is declared"))?;
            level(match decl.annot {
                FuncAnnot::Delta(p) => u64::from(p),
                FuncAnnot::Borel => 1,
                FuncAnnot::Lsa | FuncAnnot::Usa => 2,
            })
        }
        RuleId::DeclKernel => {
            arity(d, 0)?;
            let decl = env.kernel_decl(subject).ok_or_else(|| format!("no kernel `{subject}` is declared"))?;
            level(u64::from(decl.level))
        }
        RuleId::DeclSpace => {
            arity(d, 0)?;
            class((K::D, 1))
        }
        RuleId::Family => {
            arity(d, 0)?;
            match d.judgment() {
                Judgment::Schedule(s) => {
                    schedule_bound(s)?;
                    Ok(d.judgment().clone())
                }
                other => Err(format!("FAMILY must record a schedule, found {other}")),
            }
        }
        RuleId::SCompl => {
            arity(d, 1)?;
            class(compl(class_of(&ps[0])?))
        }
        RuleId::SProj => {
            arity(d, 1)?;
            class(scover(class_of(&ps[0])?))
        }
        RuleId::SCu | RuleId::SCi => {
            if let [only] = ps.as_slice() {
                if let Judgment::Schedule(s) = only.judgment() {
                    return class(schedule_bound(s)?);
                }
            }
            if ps.is_empty() {
                return Err("union/intersection needs premises".into());
            }
            let mut acc = class_of(&ps[0])?;
            for p in &ps[1..] {
                acc = lub(acc, class_of(p)?);
            }
            class(acc)
        }
        RuleId::SProd => {
            arity(d, 2)?;
            class(lub(class_of(&ps[0])?, class_of(&ps[1])?))
        }
        RuleId::SBimg => {
            arity(d, 2)?;
            if level_of(&ps[0])? != 1 {
                return Err("S-BIMG needs a Borel function".into());
            }
            class(scover(class_of(&ps[1])?))
        }
        RuleId::SBpre => match ps.as_slice() {
            [set] => class(class_of(set)?),
            [f, set] => {
                if level_of(f)? != 1 {
                    return Err("S-BPRE needs a Borel function".into());
                }
                class(class_of(set)?)
            }
            _ => Err("S-BPRE expects 1 or 2 premises".into()),
        },
        RuleId::SLevel => {
            arity(d, 1)?;
            class((K::D, level_of(&ps[0])?))
        }
        RuleId::SWr => {
            arity(d, 1)?;
            let c = scover(class_of(&ps[0])?);
            gate(d, c.1 >= 2)?;
            class(c)
        }
        RuleId::FPair => {
            arity(d, 2)?;
            level(level_of(&ps[0])?.max(level_of(&ps[1])?))
        }
        RuleId::FCyl => {
            arity(d, 1)?;
            level(level_of(&ps[0])?)
        }
        RuleId::FArith => {
            if ps.is_empty() || ps.len() > 2 {
                return Err("F-ARITH expects 1 or 2 premises".into());
            }
            let mut p = 0;
            for x in ps {
                p = p.max(level_of(x)?);
            }
            level(p)
        }
        RuleId::FPreDelta => {
            arity(d, 2)?;
            let p = level_of(&ps[0])?;
            let (k, n) = class_of(&ps[1])?;
            if k != K::D {
                return Err("F-PRE-DELTA needs a Δ target set".into());
            }
            class((K::D, p + n))
        }
        RuleId::FPreSigma => {
            arity(d, 2)?;
            let p = level_of(&ps[0])?;
            let (k, n) = class_of(&ps[1])?;
            if k == K::D {
                return Err("F-PRE-SIGMA needs a Σ or Π target set".into());
            }
            class((k, n + p - 1))
        }
        RuleId::FGraph => {
            arity(d, 1)?;
            class((K::D, level_of(&ps[0])? + 1))
        }
        RuleId::FUngraph => {
            arity(d, 2)?;
            let (kg, g) = class_of(&ps[0])?;
            let (kd, dom) = class_of(&ps[1])?;
            if kg != K::D || kd != K::D {
                return Err("F-UNGRAPH needs Δ graph and domain classes".into());
            }
            level(g.max(dom) + 1)
        }
        RuleId::FComp => {
            arity(d, 2)?;
            level(level_of(&ps[0])? + level_of(&ps[1])?)
        }
        RuleId::FCompB => {
            arity(d, 2)?;
            if level_of(&ps[1])? != 1 {
                return Err("F-COMP-B needs a Borel inner function".into());
            }
            level(level_of(&ps[0])?)
        }
        RuleId::FSect => {
            arity(d, 1)?;
            level(level_of(&ps[0])? + 1)
        }
        RuleId::FCsup | RuleId::FCinf => {
            arity(d, 1)?;
            match ps[0].judgment() {
                Judgment::Schedule(s) => level(dcover(schedule_bound(s)?).1),
                other => Err(format!("countable sup/inf needs a schedule premise, found {other}")),
            }
        }
        RuleId::FPartial | RuleId::Domain => {
            arity(d, 2)?;
            let p = level_of(&ps[0])?;
            let dom = dcover(class_of(&ps[1])?).1;
            level(if d.rule == RuleId::FPartial { p.max(dom) + 1 } else { p.max(dom) })
        }
        RuleId::FInt => {
            arity(d, 2)?;
            gate(d, true)?;
            level(level_of(&ps[0])? + level_of(&ps[1])? + 2)
        }
        RuleId::FSelect => {
            arity(d, 1)?;
            let c = class_of(&ps[0])?;
            let mut m = 0;
            while !le(c, (K::P, 2 * m + 1)) {
                m += 1;
            }
            gate(d, m >= 1)?;
            class((K::P, 2 * m + 1))
        }
        RuleId::FEps => {
            arity(d, 1)?;
            gate(d, true)?;
            level(level_of(&ps[0])?)
        }
        RuleId::PUm => {
            arity(d, 1)?;
            let lvl = match ps[0].judgment() {
                Judgment::Class(c) => from_class(*c).1,
                Judgment::Level(p) => u64::from(*p),
                other => return Err(format!("P-UM needs a class or level premise, found {other}")),
            };
            gate(d, lvl >= 2)?;
            Ok(Judgment::Property(UNIVERSALLY_MEASURABLE.into()))
        }
        RuleId::Sub => {
            arity(d, 1)?;
            class(dcover(class_of(&ps[0])?))
        }
        RuleId::Meet => {
            if ps.len() < 2 {
                return Err("MEET needs at least two premises".into());
            }
            match ps[0].judgment() {
                Judgment::Class(_) => {
                    let mut acc = class_of(&ps[0])?;
                    for p in &ps[1..] {
                        acc = glb(acc, class_of(p)?);
                    }
                    class(acc)
                }
                _ => {
                    let mut acc = level_of(&ps[0])?;
                    for p in &ps[1..] {
                        acc = acc.min(level_of(p)?);
                    }
                    level(acc)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn env() -> Environment {
        let p = parse("space X = baire\nfunc f : X -> X : delta 2\nfunc g : X -> X : delta 3").unwrap();
        Environment::from_program(&p).unwrap()
    }

    fn compose(mode: AxiomMode, claimed: u32) -> Derivation {
        let f = Derivation::leaf(RuleId::DeclFunc, "f", Judgment::Level(2), mode);
        let g = Derivation::leaf(RuleId::DeclFunc, "g", Judgment::Level(3), mode);
        Derivation::new(RuleId::FComp, vec![f, g], "compose(f, g)", Judgment::Level(claimed), mode)
    }

    #[test]
    fn accepts_composition() {
        assert_eq!(check(&compose(AxiomMode::Zfc, 5), &env()), Ok(()));
    }

    #[test]
    fn rejects_mutated_root() {
        let err = check(&compose(AxiomMode::Zfc, 4), &env()).unwrap_err();
        assert!(err.path.is_empty());
    }

    #[test]
    fn rejects_leaf_mismatch() {
        let mut d = compose(AxiomMode::Zfc, 5);
        d.premises[1].conclusion.subject = "h".into();
        let err = check(&d, &env()).unwrap_err();
        assert_eq!(err.path, vec![1]);
    }

    #[test]
    fn gate_is_enforced() {
        let f = Derivation::leaf(RuleId::DeclFunc, "f", Judgment::Level(2), AxiomMode::Zfc);
        let g = Derivation::leaf(RuleId::DeclFunc, "g", Judgment::Level(3), AxiomMode::Zfc);
        let d = Derivation::new(RuleId::FInt, vec![f, g], "integral", Judgment::Level(7), AxiomMode::Zfc);
        let err = check(&d, &env()).unwrap_err();
        assert!(err.reason.contains("axiom gate"));
    }

    #[test]
    fn mixed_modes_rejected() {
        let mut d = compose(AxiomMode::ZfcPd, 5);
        d.premises[0].conclusion.mode = AxiomMode::Zfc;
        assert!(check(&d, &env()).is_err());
    }
}
