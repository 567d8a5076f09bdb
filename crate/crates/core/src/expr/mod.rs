//! Declarations and expressions of the `.pjc` language.
//!
//! A program is a list of one-line declarations. Parsing resolves every
//! identifier and checks space signatures, so a [`Program`] handed out by
//! [`parse`] is always well formed against its own [`Environment`].

mod format;
mod lexer;
mod parser;
mod signature;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::pointclass::{Combine, LevelSchedule, PointClass};

pub use format::{format, format_decl, format_func, format_set, format_space};
pub use parser::parse;
pub use signature::SignatureError;

pub type Ident = String;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpaceExpr {
    Reals,
    Naturals,
    Baire,
    Cantor,
    XRealLine,
    /// Binary; `X * Y * Z` nests to the right.
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
    /// Probability measures on the inner space.
    MeasureSpace(Box<SpaceExpr>),
    /// Reference to a declared space.
    Named(Ident),
}

impl SpaceExpr {
    pub fn product(left: SpaceExpr, right: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Product(Box::new(left), Box::new(right))
    }
}

/// Which factor of a product a projection or section refers to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Axis {
    Index(u8),
    Space(Ident),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    Inf,
    Sup,
}

impl Extremum {
    pub fn keyword(self) -> &'static str {
        match self {
            Extremum::Inf => "inf",
            Extremum::Sup => "sup",
        }
    }
}

/// A countable family `member` indexed by `index ∈ ℕ`, known only through
/// its level schedule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family {
    pub index: Ident,
    pub member: Ident,
    pub space: SpaceExpr,
    pub schedule: LevelSchedule,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetExpr {
    Named(Ident),
    Complement(Box<SetExpr>),
    Countable(Combine, Family),
    Finite(Combine, Vec<SetExpr>),
    Product(Box<SetExpr>, Box<SetExpr>),
    Projection(Box<SetExpr>, Axis),
    /// Image under a declared Borel function.
    BorelImage(Ident, Box<SetExpr>),
    Preimage(Box<FuncExpr>, Box<SetExpr>),
    /// Section at a fixed point of the named factor. The point is symbolic
    /// unless given, and is only needed for concrete evaluation.
    Section(Box<SetExpr>, Axis, Option<Ident>),
    Graph(Box<FuncExpr>),
    Sublevel(Box<FuncExpr>, Cmp, BigRational),
    /// `{μ : μ(A) ≥ r}` inside the space of probability measures.
    MeasureThreshold(Box<SetExpr>, BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FuncExpr {
    Named(Ident),
    Pair(Box<FuncExpr>, Box<FuncExpr>),
    /// `h(x, y) = f(x)` on `X × Y`.
    Cylinder(Box<FuncExpr>, SpaceExpr),
    Compose { outer: Box<FuncExpr>, inner: Box<FuncExpr> },
    SectionOf(Box<FuncExpr>, Axis, Option<Ident>),
    Sum(Box<FuncExpr>, Box<FuncExpr>),
    Neg(Box<FuncExpr>),
    Mul(Box<FuncExpr>, Box<FuncExpr>),
    Min(Box<FuncExpr>, Box<FuncExpr>),
    Max(Box<FuncExpr>, Box<FuncExpr>),
    Inner(Box<FuncExpr>, Box<FuncExpr>),
    Power(Box<FuncExpr>, BigRational),
    Countable(Extremum, Family),
    /// `x ↦ inf/sup { f(x, y) : (x, y) ∈ D }`.
    Partial { op: Extremum, func: Box<FuncExpr>, domain: Box<SetExpr> },
    IntegralKernel(Box<FuncExpr>, Ident),
    Select(Box<SetExpr>),
    EpsSelector {
        domain: Box<SetExpr>,
        func: Box<FuncExpr>,
        eps: BigRational,
        direction: Extremum,
    },
    FromGraph(Box<SetExpr>, Box<SetExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Set(SetExpr),
    Func(FuncExpr),
}

/// Measurability annotation on a function declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FuncAnnot {
    Delta(u32),
    Borel,
    /// Lower-semianalytic.
    Lsa,
    /// Upper-semianalytic.
    Usa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Assertion {
    Class { set: SetExpr, rel: Rel, class: PointClass },
    Level { func: FuncExpr, rel: Rel, level: u32 },
    UniversallyMeasurable(Expr),
    /// Inference must fail because the named gated rule is unavailable.
    Blocked { expr: Expr, rule: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetDecl {
    pub space: SpaceExpr,
    pub class: PointClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuncDecl {
    pub dom: SpaceExpr,
    pub cod: SpaceExpr,
    pub annot: FuncAnnot,
    pub nonneg: bool,
    /// Optional domain set `D ⊆ dom` the function is defined on.
    pub domain: Option<Ident>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KernelDecl {
    pub dom: SpaceExpr,
    pub cod: SpaceExpr,
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Decl {
    Space { name: Ident, space: SpaceExpr },
    Set { name: Ident, decl: SetDecl },
    Func { name: Ident, decl: FuncDecl },
    Kernel { name: Ident, decl: KernelDecl },
    Let { name: Ident, expr: Expr },
    Assert(Assertion),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub decls: Vec<Decl>,
}

impl Program {
    pub fn lets(&self) -> impl Iterator<Item = (&Ident, &Expr)> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Let { name, expr } => Some((name, expr)),
            _ => None,
        })
    }

    pub fn assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Assert(a) => Some(a),
            _ => None,
        })
    }
}

/// What an identifier is bound to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Space(SpaceExpr),
    Set(SetDecl),
    Func(FuncDecl),
    Kernel(KernelDecl),
    Let(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("unknown identifier `{0}`")]
    Unknown(Ident),
    #[error("identifier `{0}` is already declared")]
    Duplicate(Ident),
    #[error("`{name}` is a {found}, expected a {expected}")]
    WrongKind { name: Ident, expected: &'static str, found: &'static str },
}

/// Symbol table built from a program's declarations, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    bindings: BTreeMap<Ident, Binding>,
}

impl Binding {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Binding::Space(_) => "space",
            Binding::Set(_) => "set",
            Binding::Func(_) => "function",
            Binding::Kernel(_) => "kernel",
            Binding::Let(Expr::Set(_)) => "set",
            Binding::Let(Expr::Func(_)) => "function",
        }
    }
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the environment of a parsed program.
    pub fn from_program(program: &Program) -> Result<Self, EnvError> {
        let mut env = Environment::new();
        for decl in &program.decls {
            env.declare(decl)?;
        }
        Ok(env)
    }

    pub fn declare(&mut self, decl: &Decl) -> Result<(), EnvError> {
        let (name, binding) = match decl {
            Decl::Space { name, space } => (name, Binding::Space(space.clone())),
            Decl::Set { name, decl } => (name, Binding::Set(decl.clone())),
            Decl::Func { name, decl } => (name, Binding::Func(decl.clone())),
            Decl::Kernel { name, decl } => (name, Binding::Kernel(decl.clone())),
            Decl::Let { name, expr } => (name, Binding::Let(expr.clone())),
            Decl::Assert(_) => return Ok(()),
        };
        if self.bindings.contains_key(name) {
            return Err(EnvError::Duplicate(name.clone()));
        }
        self.bindings.insert(name.clone(), binding);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn space(&self, name: &str) -> Result<&SpaceExpr, EnvError> {
        match self.lookup(name)? {
            Binding::Space(s) => Ok(s),
            other => Err(wrong_kind(name, "space", other)),
        }
    }

    pub fn set_decl(&self, name: &str) -> Option<&SetDecl> {
        match self.bindings.get(name) {
            Some(Binding::Set(d)) => Some(d),
            _ => None,
        }
    }

    pub fn func_decl(&self, name: &str) -> Option<&FuncDecl> {
        match self.bindings.get(name) {
            Some(Binding::Func(d)) => Some(d),
            _ => None,
        }
    }

    pub fn kernel_decl(&self, name: &str) -> Option<&KernelDecl> {
        match self.bindings.get(name) {
            Some(Binding::Kernel(d)) => Some(d),
            _ => None,
        }
    }

    pub fn let_expr(&self, name: &str) -> Option<&Expr> {
        match self.bindings.get(name) {
            Some(Binding::Let(e)) => Some(e),
            _ => None,
        }
    }

    pub fn lookup(&self, name: &str) -> Result<&Binding, EnvError> {
        self.bindings.get(name).ok_or_else(|| EnvError::Unknown(name.to_string()))
    }

    /// Replaces every named space by its definition.
    pub fn expand(&self, space: &SpaceExpr) -> Result<SpaceExpr, EnvError> {
        Ok(match space {
            SpaceExpr::Named(name) => self.expand(self.space(name)?)?,
            SpaceExpr::Product(l, r) => SpaceExpr::product(self.expand(l)?, self.expand(r)?),
            SpaceExpr::MeasureSpace(inner) => SpaceExpr::MeasureSpace(Box::new(self.expand(inner)?)),
            other => other.clone(),
        })
    }
}

fn wrong_kind(name: &str, expected: &'static str, found: &Binding) -> EnvError {
    EnvError::WrongKind { name: name.to_string(), expected, found: found.kind_name() }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {}, found {found}", .expected.join(" or "))]
    Syntax { line: usize, col: usize, expected: Vec<String>, found: String },
    #[error("{line}:{col}: {source}")]
    Resolution {
        line: usize,
        col: usize,
        #[source]
        source: EnvError,
    },
    #[error("{line}:{col}: signature error: {source}")]
    Signature {
        line: usize,
        col: usize,
        #[source]
        source: SignatureError,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::Resolution { line, col, .. }
            | ParseError::Signature { line, col, .. } => (*line, *col),
        }
    }
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_space(self))
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_set(self))
    }
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_func(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Set(s) => s.fmt(f),
            Expr::Func(g) => g.fmt(f),
        }
    }
}
