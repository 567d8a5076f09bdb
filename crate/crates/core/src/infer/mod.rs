//! The rule engine.
//!
//! Each set expression gets a [`PointClass`] and each function expression a
//! measurability level `Δ(p)`, together with a [`Derivation`]. At every node
//! the engine evaluates all applicable rules and keeps the meet of their
//! conclusions. PD-gated rules fail with [`InferError::AxiomRequired`] in
//! ZFC mode.

mod program;
pub mod rules;

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derivation::{Derivation, Judgment, RuleId, UNIVERSALLY_MEASURABLE};
use crate::expr::{
    format_func, format_set, format_space, Binding, Environment, Expr, Extremum,
    FuncAnnot, FuncExpr, SetExpr, SignatureError, SpaceExpr,
};
use crate::pointclass::{ClassError, Combine, PointClass};

pub use program::{run_program, AssertionVerdict, BindingVerdict, ProgramReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomMode {
    #[serde(rename = "ZFC")]
    Zfc,
    #[serde(rename = "ZFC_PD")]
    ZfcPd,
}

impl fmt::Display for AxiomMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomMode::Zfc => "ZFC",
            AxiomMode::ZfcPd => "ZFC_PD",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Declared,
    Borel,
    Lsa,
    Usa,
    Inferred,
}

/// `Δ(level)`-measurability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FuncLevel {
    pub level: u32,
    pub origin: Origin,
}

impl FuncLevel {
    pub fn inferred(level: u32) -> Self {
        FuncLevel { level, origin: Origin::Inferred }
    }

    pub fn from_annot(annot: FuncAnnot) -> Self {
        match annot {
            FuncAnnot::Delta(p) => FuncLevel { level: p, origin: Origin::Declared },
            FuncAnnot::Borel => FuncLevel { level: 1, origin: Origin::Borel },
            FuncAnnot::Lsa => FuncLevel { level: 2, origin: Origin::Lsa },
            FuncAnnot::Usa => FuncLevel { level: 2, origin: Origin::Usa },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error(
        "UnboundedSchedule ({0}): a countable combination of projective sets with unbounded levels \
         need not be projective"
    )]
    UnboundedSchedule(String),
    #[error("AxiomRequired: {0}")]
    AxiomRequired(RuleId),
    #[error("LevelOverflow: level {0} exceeds the cap")]
    LevelOverflow(u64),
    #[error("SignAnnotationMissing: `{0}` is not declared nonneg")]
    SignAnnotationMissing(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Class(ClassError),
}

impl From<ClassError> for InferError {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::LevelOverflow(n) => InferError::LevelOverflow(n),
            ClassError::UnboundedSchedule(w) => InferError::UnboundedSchedule(w),
            other => InferError::Class(other),
        }
    }
}

/// A conclusion with the derivation that supports it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub subject: String,
    pub conclusion: Judgment,
    pub mode: AxiomMode,
    /// Set for selector levels, which are computed by replaying an
    /// existence proof rather than read off a single rule.
    pub derived_bound: bool,
    pub derivation: Derivation,
}

impl Certificate {
    fn new(derivation: Derivation, derived_bound: bool) -> Self {
        Certificate {
            subject: derivation.conclusion.subject.clone(),
            conclusion: derivation.conclusion.judgment.clone(),
            mode: derivation.conclusion.mode,
            derived_bound,
            derivation,
        }
    }
}

type Res<T> = Result<T, InferError>;

/// Bottom-up evaluator over one environment and axiom mode.
pub struct Engine<'a> {
    env: &'a Environment,
    mode: AxiomMode,
}

impl<'a> Engine<'a> {
    pub fn new(env: &'a Environment, mode: AxiomMode) -> Self {
        Engine { env, mode }
    }

    pub fn mode(&self) -> AxiomMode {
        self.mode
    }

    fn node(&self, rule: RuleId, premises: Vec<Derivation>, subject: String, judgment: Judgment) -> Derivation {
        Derivation::new(rule, premises, subject, judgment, self.mode)
    }

    fn class_node(&self, rule: RuleId, premises: Vec<Derivation>, subject: &str, c: PointClass) -> (PointClass, Derivation) {
        (c, self.node(rule, premises, subject.to_string(), Judgment::Class(c)))
    }

    fn level_node(&self, rule: RuleId, premises: Vec<Derivation>, subject: &str, p: u32) -> (u32, Derivation) {
        (p, self.node(rule, premises, subject.to_string(), Judgment::Level(p)))
    }

    fn require_pd(&self, rule: RuleId) -> Res<()> {
        match self.mode {
            AxiomMode::ZfcPd => Ok(()),
            AxiomMode::Zfc => Err(InferError::AxiomRequired(rule)),
        }
    }

    fn best_class(&self, subject: &str, mut cands: Vec<(PointClass, Derivation)>) -> (PointClass, Derivation) {
        let meet = cands.iter().map(|c| c.0).reduce(PointClass::meet).expect("at least one rule applies");
        if let Some(i) = cands.iter().position(|c| c.0 == meet) {
            return cands.swap_remove(i);
        }
        let premises = cands.into_iter().map(|c| c.1).collect();
        self.class_node(RuleId::Meet, premises, subject, meet)
    }

    fn best_level(&self, mut cands: Vec<(u32, Derivation)>) -> (u32, Derivation) {
        let min = cands.iter().map(|c| c.0).min().expect("at least one rule applies");
        let i = cands.iter().position(|c| c.0 == min).expect("min is attained");
        cands.swap_remove(i)
    }

    /// Class of a set expression.
    pub fn set(&self, e: &SetExpr) -> Res<(PointClass, Derivation)> {
        let subject = format_set(e);
        let s = subject.as_str();
        match e {
            SetExpr::Named(name) => match self.env.lookup(name).map_err(SignatureError::from)? {
                Binding::Set(decl) => Ok(self.class_node(RuleId::DeclSet, vec![], s, decl.class)),
                Binding::Let(Expr::Set(inner)) => self.set(inner),
                other => Err(SignatureError::from(crate::expr::EnvError::WrongKind {
                    name: name.clone(),
                    expected: "set",
                    found: other.kind_name(),
                })
                .into()),
            },
            SetExpr::Complement(inner) => {
                let (c, d) = self.set(inner)?;
                Ok(self.class_node(RuleId::SCompl, vec![d], s, c.complement()))
            }
            SetExpr::Countable(op, family) => {
                let c = crate::pointclass::countable_combine(*op, &family.schedule)?;
                let leaf = self.node(
                    RuleId::Family,
                    vec![],
                    format!("{} in nat", family.member),
                    Judgment::Schedule(family.schedule.clone()),
                );
                Ok(self.class_node(combine_rule(*op), vec![leaf], s, c))
            }
            SetExpr::Finite(op, items) => {
                let mut premises = Vec::with_capacity(items.len());
                let mut acc: Option<PointClass> = None;
                for item in items {
                    let (c, d) = self.set(item)?;
                    acc = Some(match acc {
                        None => c,
                        Some(a) => a.join(c)?,
                    });
                    premises.push(d);
                }
                let c = acc.expect("parser rejects empty lists");
                Ok(self.class_node(combine_rule(*op), premises, s, c))
            }
            SetExpr::Product(a, b) => {
                let (ca, da) = self.set(a)?;
                let (cb, db) = self.set(b)?;
                let c = crate::pointclass::product_class(ca, cb)?;
                Ok(self.class_node(RuleId::SProd, vec![da, db], s, c))
            }
            SetExpr::Projection(inner, _) => {
                let (c, d) = self.set(inner)?;
                Ok(self.class_node(RuleId::SProj, vec![d], s, c.projection()?))
            }
            SetExpr::BorelImage(f, inner) => {
                let (_, df) = self.func(&FuncExpr::Named(f.clone()))?;
                let (c, d) = self.set(inner)?;
                Ok(self.class_node(RuleId::SBimg, vec![df, d], s, c.borel_image()?))
            }
            SetExpr::Preimage(f, inner) => {
                let (p, df) = self.func(f)?;
                let (c, dc) = self.set(inner)?;
                let mut cands = Vec::new();
                if p.level == 1 {
                    cands.push(self.class_node(RuleId::SBpre, vec![df.clone(), dc.clone()], s, c.borel_preimage()));
                }
                match rules::preimage_sigma(p.level, c)? {
                    Some(k) => cands.push(self.class_node(RuleId::FPreSigma, vec![df, dc], s, k)),
                    None => {
                        let k = rules::preimage_delta(p.level, c.level())?;
                        cands.push(self.class_node(RuleId::FPreDelta, vec![df, dc], s, k));
                    }
                }
                Ok(self.best_class(s, cands))
            }
            SetExpr::Section(inner, _, _) => {
                let (c, d) = self.set(inner)?;
                Ok(self.class_node(RuleId::SBpre, vec![d], s, c.borel_preimage()))
            }
            SetExpr::Graph(f) => {
                let (p, df) = self.func(f)?;
                Ok(self.class_node(RuleId::FGraph, vec![df], s, rules::graph(p.level)?))
            }
            SetExpr::Sublevel(f, _, _) => {
                let (p, df) = self.func(f)?;
                Ok(self.class_node(RuleId::SLevel, vec![df], s, PointClass::delta(u64::from(p.level))?))
            }
            SetExpr::MeasureThreshold(inner, _) => {
                let (c, d) = self.set(inner)?;
                if rules::measure_threshold_gated(c)? {
                    self.require_pd(RuleId::SWr)?;
                }
                Ok(self.class_node(RuleId::SWr, vec![d], s, rules::measure_threshold(c)?))
            }
        }
    }

    /// Measurability level of a function expression.
    pub fn func(&self, e: &FuncExpr) -> Res<(FuncLevel, Derivation)> {
        let subject = format_func(e);
        let s = subject.as_str();
        let inferred = |(p, d): (u32, Derivation)| (FuncLevel::inferred(p), d);
        match e {
            FuncExpr::Named(name) => match self.env.lookup(name).map_err(SignatureError::from)? {
                Binding::Func(decl) => {
                    let declared = FuncLevel::from_annot(decl.annot);
                    let leaf = self.node(RuleId::DeclFunc, vec![], name.clone(), Judgment::Level(declared.level));
                    match &decl.domain {
                        None => Ok((declared, leaf)),
                        Some(dom) => {
                            let (c, dc) = self.set(&SetExpr::Named(dom.clone()))?;
                            let p = rules::with_domain(declared.level, c)?;
                            let (_, d) = self.level_node(RuleId::Domain, vec![leaf, dc], &format!("{name} on {dom}"), p);
                            let origin = if p == declared.level { declared.origin } else { Origin::Inferred };
                            Ok((FuncLevel { level: p, origin }, d))
                        }
                    }
                }
                Binding::Let(Expr::Func(inner)) => self.func(inner),
                other => Err(SignatureError::from(crate::expr::EnvError::WrongKind {
                    name: name.clone(),
                    expected: "function",
                    found: other.kind_name(),
                })
                .into()),
            },
            FuncExpr::Pair(f, g) | FuncExpr::Inner(f, g) => {
                let (p, df) = self.func(f)?;
                let (q, dg) = self.func(g)?;
                let rule = if matches!(e, FuncExpr::Pair(..)) { RuleId::FPair } else { RuleId::FArith };
                Ok(inferred(self.level_node(rule, vec![df, dg], s, rules::pair(p.level, q.level))))
            }
            FuncExpr::Sum(f, g) | FuncExpr::Mul(f, g) | FuncExpr::Min(f, g) | FuncExpr::Max(f, g) => {
                let (p, df) = self.func(f)?;
                let (q, dg) = self.func(g)?;
                Ok(inferred(self.level_node(RuleId::FArith, vec![df, dg], s, rules::pair(p.level, q.level))))
            }
            FuncExpr::Neg(f) => {
                let (p, df) = self.func(f)?;
                Ok(inferred(self.level_node(RuleId::FArith, vec![df], s, p.level)))
            }
            FuncExpr::Power(f, _) => {
                if !self.is_nonneg(f) {
                    return Err(InferError::SignAnnotationMissing(format_func(f)));
                }
                let (p, df) = self.func(f)?;
                Ok(inferred(self.level_node(RuleId::FArith, vec![df], s, p.level)))
            }
            FuncExpr::Cylinder(f, _) => {
                let (p, df) = self.func(f)?;
                Ok(inferred(self.level_node(RuleId::FCyl, vec![df], s, p.level)))
            }
            FuncExpr::Compose { outer, inner } => {
                let (p, dp) = self.func(outer)?;
                let (q, dq) = self.func(inner)?;
                let mut cands = vec![self.level_node(
                    RuleId::FComp,
                    vec![dp.clone(), dq.clone()],
                    s,
                    rules::compose(p.level, q.level)?,
                )];
                if q.level == 1 {
                    cands.push(self.level_node(RuleId::FCompB, vec![dp, dq], s, rules::compose_borel(p.level)));
                }
                Ok(inferred(self.best_level(cands)))
            }
            FuncExpr::SectionOf(f, _, _) => {
                let (p, df) = self.func(f)?;
                Ok(inferred(self.level_node(RuleId::FSect, vec![df], s, rules::section(p.level)?)))
            }
            FuncExpr::Countable(op, family) => {
                let p = rules::countable_level(&family.schedule)?;
                let leaf = self.node(
                    RuleId::Family,
                    vec![],
                    format!("{} in nat", family.member),
                    Judgment::Schedule(family.schedule.clone()),
                );
                let rule = match op {
                    Extremum::Sup => RuleId::FCsup,
                    Extremum::Inf => RuleId::FCinf,
                };
                Ok(inferred(self.level_node(rule, vec![leaf], s, p)))
            }
            FuncExpr::Partial { func, domain, .. } => {
                let (p, df) = self.func(func)?;
                let (c, dc) = self.set(domain)?;
                Ok(inferred(self.level_node(RuleId::FPartial, vec![df, dc], s, rules::partial(p.level, c)?)))
            }
            FuncExpr::IntegralKernel(f, q) => {
                let (p, df) = self.func(f)?;
                let kernel = self
                    .env
                    .kernel_decl(q)
                    .ok_or_else(|| SignatureError::from(crate::expr::EnvError::Unknown(q.clone())))?;
                self.require_pd(RuleId::FInt)?;
                let dk = self.node(RuleId::DeclKernel, vec![], q.clone(), Judgment::Level(kernel.level));
                Ok(inferred(self.level_node(RuleId::FInt, vec![df, dk], s, rules::integral(p.level, kernel.level)?)))
            }
            FuncExpr::Select(a) => {
                let (c, da) = self.set(a)?;
                Ok(inferred(self.select_chain(c, da, &format_set(a), s)?))
            }
            FuncExpr::EpsSelector { domain, func, eps, direction } => {
                Ok(inferred(self.eps_chain(domain, func, eps, *direction)?))
            }
            FuncExpr::FromGraph(g, dom) => {
                let (cg, dg) = self.set(g)?;
                let (cd, dd) = self.set(dom)?;
                let (gc, gd) = self.to_delta(cg, dg)?;
                let (dc, ddd) = self.to_delta(cd, dd)?;
                Ok(inferred(self.level_node(RuleId::FUngraph, vec![gd, ddd], s, rules::ungraph(gc, dc)?)))
            }
        }
    }

    fn to_delta(&self, c: PointClass, d: Derivation) -> Res<(PointClass, Derivation)> {
        if c.is_delta() {
            return Ok((c, d));
        }
        let subject = d.conclusion.subject.clone();
        Ok(self.class_node(RuleId::Sub, vec![d], &subject, c.delta_cover()?))
    }

    /// Sign propagation for the nonneg requirement of `pow`.
    fn is_nonneg(&self, f: &FuncExpr) -> bool {
        match f {
            FuncExpr::Named(n) => match self.env.get(n) {
                Some(Binding::Func(d)) => d.nonneg,
                Some(Binding::Let(Expr::Func(inner))) => self.is_nonneg(inner),
                _ => false,
            },
            FuncExpr::Power(g, _)
            | FuncExpr::Cylinder(g, _)
            | FuncExpr::SectionOf(g, _, _)
            | FuncExpr::IntegralKernel(g, _) => self.is_nonneg(g),
            FuncExpr::Compose { outer, .. } => self.is_nonneg(outer),
            FuncExpr::Partial { func, .. } => self.is_nonneg(func),
            FuncExpr::Max(a, b) => self.is_nonneg(a) || self.is_nonneg(b),
            FuncExpr::Min(a, b) | FuncExpr::Sum(a, b) | FuncExpr::Mul(a, b) => self.is_nonneg(a) && self.is_nonneg(b),
            _ => false,
        }
    }

    /// Uniformize a set of class `c`, then read the selector level off its
    /// graph and domain.
    fn select_chain(&self, c: PointClass, da: Derivation, a: &str, subject: &str) -> Res<(u32, Derivation)> {
        let m = rules::select_index(c);
        if m >= 1 {
            self.require_pd(RuleId::FSelect)?;
        }
        let graph_subject = format!("uniformization of {a}");
        let (gc, graph) = self.class_node(RuleId::FSelect, vec![da.clone()], &graph_subject, rules::select_graph(m)?);
        let (gd, graph) = self.to_delta(gc, graph)?;
        let (pc, proj) = self.class_node(RuleId::SProj, vec![da], &format!("proj({a})"), c.projection()?);
        let (dc, proj) = self.to_delta(pc, proj)?;
        Ok(self.level_node(RuleId::FUngraph, vec![graph, proj], subject, rules::ungraph(gd, dc)?))
    }

    /// Replays the ε-optimal selector construction: `E = (A₁ ∩ B₁) ∪ (A₂ ∩ B₂)`
    /// and a selector of `E`.
    fn eps_chain(&self, domain: &SetExpr, f: &FuncExpr, eps: &BigRational, direction: Extremum) -> Res<(u32, Derivation)> {
        self.require_pd(RuleId::FEps)?;
        let dom_s = format_set(domain);
        let root_subject = format!("epsselect({dom_s}, {}, {eps}, {})", format_func(f), direction.keyword());
        let (dom_space, _) = self.env.func_signature(f)?;
        let y = match &dom_space {
            SpaceExpr::Product(_, y) => format_space(y),
            other => format_space(other),
        };
        let (cd, dd) = self.set(domain)?;
        let (pf, mut df) = self.func(f)?;
        // f^* = −(−f)_*, and negation keeps the level.
        let mut fs = format_func(f);
        if direction == Extremum::Sup {
            fs = format!("neg({fs})");
            df = self.node(RuleId::FArith, vec![df], fs.clone(), Judgment::Level(pf.level));
        }
        let p = pf.level;
        let star_s = format!("pinf({fs}, {dom_s})");
        let (pstar, dstar) = self.level_node(RuleId::FPartial, vec![df.clone(), dd.clone()], &star_s, rules::partial(p, cd)?);
        let (_, cyl) = self.level_node(RuleId::FCyl, vec![dstar.clone()], &format!("cyl({star_s}, {y})"), pstar);
        let (_, neg) = self.level_node(RuleId::FArith, vec![cyl], &format!("neg(cyl({star_s}, {y}))"), pstar);
        let g_s = format!("sum({fs}, neg(cyl({star_s}, {y})))");
        let (pg, dg) = self.level_node(RuleId::FArith, vec![df.clone(), neg], &g_s, rules::pair(p, pstar));

        let inter = |subject: String, parts: Vec<(PointClass, Derivation)>| -> Res<(PointClass, Derivation)> {
            let mut c = parts[0].0;
            for part in &parts[1..] {
                c = c.join(part.0)?;
            }
            Ok(self.class_node(RuleId::SCi, parts.into_iter().map(|x| x.1).collect(), &subject, c))
        };
        let sub_g = self.class_node(RuleId::SLevel, vec![dg], &format!("sublevel({g_s}, <, {eps})"), PointClass::delta(u64::from(pg))?);
        let a1 = inter(format!("A1 = {{{g_s} < {eps}}} ∩ {dom_s}"), vec![sub_g, (cd, dd.clone())])?;
        let inv = BigRational::from_integer((-1).into()) / eps;
        let sub_f = self.class_node(RuleId::SLevel, vec![df], &format!("sublevel({fs}, <, {inv})"), PointClass::delta(u64::from(p))?);
        let a2 = inter(format!("A2 = {{{fs} < {inv}}} ∩ {dom_s}"), vec![sub_f, (cd, dd.clone())])?;

        let proj = self.class_node(RuleId::SProj, vec![dd], &format!("proj({dom_s})"), cd.projection()?);
        let mut b = Vec::new();
        for (name, rel) in [("B1", "> -inf"), ("B2", "= -inf")] {
            let lev = self.class_node(
                RuleId::SLevel,
                vec![dstar.clone()],
                &format!("{{{star_s} {rel}}}"),
                PointClass::delta(u64::from(pstar))?,
            );
            let (bc, bx) = inter(format!("{{x ∈ proj({dom_s}) : {star_s} {rel}}}"), vec![proj.clone(), lev])?;
            let space = self.class_node(RuleId::DeclSpace, vec![], &y, PointClass::BOREL);
            let c = crate::pointclass::product_class(bc, space.0)?;
            b.push(self.class_node(RuleId::SProd, vec![bx, space.1], &format!("{name} = {{{star_s} {rel}}} × {y}"), c));
        }
        let b2 = b.pop().expect("two entries");
        let b1 = b.pop().expect("two entries");
        let e1 = inter("A1 ∩ B1".into(), vec![a1, b1])?;
        let e2 = inter("A2 ∩ B2".into(), vec![a2, b2])?;
        let ce = e1.0.join(e2.0)?;
        let (ce, de) = self.class_node(RuleId::SCu, vec![e1.1, e2.1], "E = (A1 ∩ B1) ∪ (A2 ∩ B2)", ce);
        let (level, sel) = self.select_chain(ce, de, "E", &format!("select(E) for {root_subject}"))?;
        Ok(self.level_node(RuleId::FEps, vec![sel], &root_subject, level))
    }

    /// Certificate for a set or function expression.
    pub fn certify(&self, e: &Expr) -> Res<Certificate> {
        self.env.check_expr(e)?;
        let derivation = match e {
            Expr::Set(s) => self.set(s)?.1,
            Expr::Func(f) => self.func(f)?.1,
        };
        let derived = derivation.uses(RuleId::FSelect);
        Ok(Certificate::new(derivation, derived))
    }

    /// Universal measurability of the subject of `e`. An `Err` is an inference
    /// failure; `Ok(Err(_))` is a refusal in ZFC mode.
    pub fn universally_measurable(&self, e: &Expr) -> Res<Result<Certificate, Refusal>> {
        let base = self.certify(e)?;
        let level = match &base.conclusion {
            Judgment::Class(c) => UmSubject::Class(*c),
            Judgment::Level(p) => UmSubject::Level(*p),
            _ => unreachable!("sets and functions conclude classes or levels"),
        };
        if let Err(refusal) = universal_measurability(level, self.mode) {
            return Ok(Err(refusal));
        }
        let subject = base.subject.clone();
        let d = self.node(RuleId::PUm, vec![base.derivation], subject, Judgment::Property(UNIVERSALLY_MEASURABLE.into()));
        Ok(Ok(Certificate::new(d, false)))
    }
}

fn combine_rule(op: Combine) -> RuleId {
    match op {
        Combine::Union => RuleId::SCu,
        Combine::Intersection => RuleId::SCi,
    }
}

pub fn infer_set(e: &SetExpr, env: &Environment, mode: AxiomMode) -> Res<(PointClass, Derivation)> {
    env.set_space(e)?;
    Engine::new(env, mode).set(e)
}

pub fn infer_func(e: &FuncExpr, env: &Environment, mode: AxiomMode) -> Res<(FuncLevel, Derivation)> {
    env.func_signature(e)?;
    Engine::new(env, mode).func(e)
}

/// Selector for a set `A ⊆ X × Y`: the least `m` with `class(A) ≤ Π(2m+1)`
/// fixes the uniformizing graph class; PD is needed unless `m = 0`.
pub fn select_certificate(a: &SetExpr, env: &Environment, mode: AxiomMode) -> Res<Certificate> {
    let f = FuncExpr::Select(Box::new(a.clone()));
    let (_, d) = infer_func(&f, env, mode)?;
    Ok(Certificate::new(d, true))
}

/// ε-optimal selector for `f` over `D`; needs PD.
pub fn eps_selector_certificate(
    domain: &SetExpr,
    f: &FuncExpr,
    eps: &BigRational,
    direction: Extremum,
    env: &Environment,
    mode: AxiomMode,
) -> Res<Certificate> {
    let e = FuncExpr::EpsSelector {
        domain: Box::new(domain.clone()),
        func: Box::new(f.clone()),
        eps: eps.clone(),
        direction,
    };
    let (_, d) = infer_func(&e, env, mode)?;
    Ok(Certificate::new(d, true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UmSubject {
    Class(PointClass),
    Level(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("refused: {reason}")]
pub struct Refusal {
    pub reason: String,
}

/// Universal measurability: always under PD; in ZFC only for level-1
/// classes and Borel functions.
pub fn universal_measurability(subject: UmSubject, mode: AxiomMode) -> Result<(), Refusal> {
    let level = match subject {
        UmSubject::Class(c) => c.level(),
        UmSubject::Level(p) => p,
    };
    if mode == AxiomMode::ZfcPd || level == 1 {
        Ok(())
    } else {
        Err(Refusal {
            reason: format!(
                "P-UM needs PD at level {level}: ZFC is consistent with a Σ(2) set that is not \
                 Lebesgue measurable"
            ),
        })
    }
}
