//! Finite models and the concrete evaluation of set and function expressions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

use super::select::eps_select_enumerate;
use super::xreal::{integral_minus, parse_rational, xreal_add, xreal_neg, xreal_prod, XReal};
use crate::expr::{Axis, Cmp, Extremum, FuncExpr, SetExpr, SpaceExpr};
use crate::pointclass::Combine;

/// Carrier of a model value: a named atom space, the extended reals, or a
/// binary product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MSpace {
    Atoms(String),
    XReal,
    Product(Box<MSpace>, Box<MSpace>),
}

impl MSpace {
    pub fn atoms(name: &str) -> MSpace {
        MSpace::Atoms(name.to_string())
    }

    pub fn product(l: MSpace, r: MSpace) -> MSpace {
        MSpace::Product(Box::new(l), Box::new(r))
    }

    /// Parses `X`, `xreal` or a right-nested `X*Y*Z`.
    pub fn parse(text: &str) -> MSpace {
        match text.split_once('*') {
            Some((l, r)) => MSpace::product(MSpace::parse(l), MSpace::parse(r)),
            None => match text.trim() {
                "xreal" => MSpace::XReal,
                name => MSpace::Atoms(name.to_string()),
            },
        }
    }

    fn split(&self) -> Option<(&MSpace, &MSpace)> {
        match self {
            MSpace::Product(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

impl fmt::Display for MSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MSpace::Atoms(n) => f.write_str(n),
            MSpace::XReal => f.write_str("xreal"),
            MSpace::Product(l, r) => match **l {
                MSpace::Product(..) => write!(f, "({l})*{r}"),
                _ => write!(f, "{l}*{r}"),
            },
        }
    }
}

/// A model element. Atoms of different spaces may share names; the carrier
/// is tracked separately.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Atom(String),
    Real(XReal),
    Pair(Box<Point>, Box<Point>),
}

impl Point {
    pub fn atom(name: &str) -> Point {
        Point::Atom(name.to_string())
    }

    pub fn pair(l: Point, r: Point) -> Point {
        Point::Pair(Box::new(l), Box::new(r))
    }

    fn split(&self) -> Option<(&Point, &Point)> {
        match self {
            Point::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }

    fn real(&self) -> Result<&XReal, ModelError> {
        match self {
            Point::Real(x) => Ok(x),
            other => Err(ModelError::Type(format!("expected an extended real, found {other}"))),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Point::Atom(a) => Json::String(a.clone()),
            Point::Real(x) => Json::String(x.to_string()),
            Point::Pair(l, r) => Json::Array(vec![l.to_json(), r.to_json()]),
        }
    }

    /// Reads a point of the given carrier: strings for atoms and reals,
    /// two-element arrays for pairs.
    pub fn from_json(v: &Json, space: &MSpace) -> Result<Point, ModelError> {
        let bad = || ModelError::BadPoint { space: space.to_string(), found: v.to_string() };
        match (space, v) {
            (MSpace::Atoms(_), Json::String(s)) => Ok(Point::Atom(s.clone())),
            (MSpace::XReal, Json::String(s)) => s.parse().map(Point::Real).map_err(|_| bad()),
            (MSpace::Product(l, r), Json::Array(items)) if items.len() == 2 => {
                Ok(Point::pair(Point::from_json(&items[0], l)?, Point::from_json(&items[1], r)?))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Atom(a) => f.write_str(a),
            Point::Real(x) => write!(f, "{x}"),
            Point::Pair(l, r) => write!(f, "({l}, {r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown {kind} `{name}` in model")]
    Unknown { kind: &'static str, name: String },
    #[error("`{found}` is not a point of {space}")]
    BadPoint { space: String, found: String },
    #[error("table of `{func}` is not total: missing {point}")]
    NotTotal { func: String, point: String },
    #[error("`{0}` does not sum to 1")]
    NotProbability(String),
    #[error("space `{0}` lists an atom twice")]
    DuplicateAtom(String),
    #[error("UnsupportedConstructor: {0}")]
    UnsupportedConstructor(String),
    #[error("type mismatch: {0}")]
    Type(String),
    #[error("fromgraph: {0} has no unique value")]
    NotAFunction(String),
    #[error("model file: {0}")]
    Format(String),
}

type Res<T> = Result<T, ModelError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    pub space: MSpace,
    pub elems: BTreeSet<Point>,
}

/// A function table. Selector tables are partial; declared tables are total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub dom: MSpace,
    pub cod: MSpace,
    pub values: BTreeMap<Point, Point>,
}

impl Table {
    pub fn get(&self, x: &Point) -> Option<&Point> {
        self.values.get(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    pub space: MSpace,
    pub weights: BTreeMap<Point, BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub dom: MSpace,
    pub cod: MSpace,
    pub rows: BTreeMap<Point, BTreeMap<Point, BigRational>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiniteModel {
    /// Atoms in declaration order; that order is the tie-break order.
    pub spaces: BTreeMap<String, Vec<String>>,
    pub sets: BTreeMap<String, Subset>,
    pub funcs: BTreeMap<String, Table>,
    pub measures: BTreeMap<String, Measure>,
    pub kernels: BTreeMap<String, Kernel>,
    /// Finite stand-ins for countable families: member name to set or
    /// function names.
    pub families: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    space: String,
    elements: Vec<Json>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunc {
    dom: String,
    cod: String,
    table: Vec<(Json, Json)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasure {
    space: String,
    weights: Vec<(Json, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    dom: String,
    cod: String,
    rows: Vec<(Json, Vec<(Json, String)>)>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default)]
    spaces: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    sets: BTreeMap<String, RawSet>,
    #[serde(default)]
    funcs: BTreeMap<String, RawFunc>,
    #[serde(default)]
    measures: BTreeMap<String, RawMeasure>,
    #[serde(default)]
    kernels: BTreeMap<String, RawKernel>,
    #[serde(default)]
    families: BTreeMap<String, Vec<String>>,
}

fn rational(s: &str) -> Res<BigRational> {
    parse_rational(s).ok_or_else(|| ModelError::Format(format!("not a rational: `{s}`")))
}

fn weights(items: &[(Json, String)], space: &MSpace) -> Res<BTreeMap<Point, BigRational>> {
    items.iter().map(|(p, w)| Ok((Point::from_json(p, space)?, rational(w)?))).collect()
}

fn weights_json(w: &BTreeMap<Point, BigRational>) -> Vec<(Json, String)> {
    w.iter().map(|(p, q)| (p.to_json(), q.to_string())).collect()
}

impl FiniteModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses and validates a `.pjm` document.
    pub fn from_json(text: &str) -> Res<FiniteModel> {
        let raw: RawModel = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        let mut m = FiniteModel { spaces: raw.spaces, families: raw.families, ..Default::default() };
        for (name, s) in raw.sets {
            let space = MSpace::parse(&s.space);
            let elems = s.elements.iter().map(|p| Point::from_json(p, &space)).collect::<Res<_>>()?;
            m.sets.insert(name, Subset { space, elems });
        }
        for (name, f) in raw.funcs {
            let (dom, cod) = (MSpace::parse(&f.dom), MSpace::parse(&f.cod));
            let values = f
                .table
                .iter()
                .map(|(x, y)| Ok((Point::from_json(x, &dom)?, Point::from_json(y, &cod)?)))
                .collect::<Res<_>>()?;
            m.funcs.insert(name, Table { dom, cod, values });
        }
        for (name, mu) in raw.measures {
            let space = MSpace::parse(&mu.space);
            let weights = weights(&mu.weights, &space)?;
            m.measures.insert(name, Measure { space, weights });
        }
        for (name, q) in raw.kernels {
            let (dom, cod) = (MSpace::parse(&q.dom), MSpace::parse(&q.cod));
            let mut rows = BTreeMap::new();
            for (x, row) in &q.rows {
                rows.insert(Point::from_json(x, &dom)?, weights(row, &cod)?);
            }
            m.kernels.insert(name, Kernel { dom, cod, rows });
        }
        m.validate()?;
        Ok(m)
    }

    /// Pretty JSON with sorted keys and elements.
    pub fn to_json(&self) -> String {
        let raw = RawModel {
            spaces: self.spaces.clone(),
            sets: self
                .sets
                .iter()
                .map(|(n, s)| {
                    let elements = s.elems.iter().map(Point::to_json).collect();
                    (n.clone(), RawSet { space: s.space.to_string(), elements })
                })
                .collect(),
            funcs: self
                .funcs
                .iter()
                .map(|(n, t)| {
                    let table = t.values.iter().map(|(x, y)| (x.to_json(), y.to_json())).collect();
                    (n.clone(), RawFunc { dom: t.dom.to_string(), cod: t.cod.to_string(), table })
                })
                .collect(),
            measures: self
                .measures
                .iter()
                .map(|(n, mu)| {
                    (n.clone(), RawMeasure { space: mu.space.to_string(), weights: weights_json(&mu.weights) })
                })
                .collect(),
            kernels: self
                .kernels
                .iter()
                .map(|(n, q)| {
                    let rows = q.rows.iter().map(|(x, row)| (x.to_json(), weights_json(row))).collect();
                    (n.clone(), RawKernel { dom: q.dom.to_string(), cod: q.cod.to_string(), rows })
                })
                .collect(),
            families: self.families.clone(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("model JSON is always serializable");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Res<()> {
        for (name, atoms) in &self.spaces {
            let distinct: BTreeSet<_> = atoms.iter().collect();
            if distinct.len() != atoms.len() {
                return Err(ModelError::DuplicateAtom(name.clone()));
            }
        }
        for s in self.sets.values() {
            for p in &s.elems {
                self.check_point(p, &s.space)?;
            }
        }
        for (name, t) in &self.funcs {
            for (x, y) in &t.values {
                self.check_point(x, &t.dom)?;
                self.check_point(y, &t.cod)?;
            }
            for x in self.universe(&t.dom)? {
                if !t.values.contains_key(&x) {
                    return Err(ModelError::NotTotal { func: name.clone(), point: x.to_string() });
                }
            }
        }
        for (name, mu) in &self.measures {
            self.check_distribution(name, &mu.weights, &mu.space)?;
        }
        for (name, q) in &self.kernels {
            for x in self.universe(&q.dom)? {
                let row = q
                    .rows
                    .get(&x)
                    .ok_or_else(|| ModelError::NotTotal { func: name.clone(), point: x.to_string() })?;
                self.check_distribution(&format!("{name} row {x}"), row, &q.cod)?;
            }
        }
        for (name, members) in &self.families {
            for m in members {
                if !self.sets.contains_key(m) && !self.funcs.contains_key(m) {
                    return Err(ModelError::Unknown { kind: "family member", name: format!("{name}: {m}") });
                }
            }
        }
        Ok(())
    }

    fn check_distribution(&self, name: &str, w: &BTreeMap<Point, BigRational>, space: &MSpace) -> Res<()> {
        let mut total = BigRational::zero();
        for (p, q) in w {
            self.check_point(p, space)?;
            if *q < BigRational::zero() {
                return Err(ModelError::NotProbability(name.to_string()));
            }
            total += q;
        }
        if total != BigRational::one() {
            return Err(ModelError::NotProbability(name.to_string()));
        }
        Ok(())
    }

    fn check_point(&self, p: &Point, space: &MSpace) -> Res<()> {
        let ok = match (space, p) {
            (MSpace::Atoms(name), Point::Atom(a)) => self.atoms(name)?.iter().any(|b| b == a),
            (MSpace::XReal, Point::Real(_)) => true,
            (MSpace::Product(l, r), Point::Pair(x, y)) => {
                self.check_point(x, l)?;
                self.check_point(y, r)?;
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(ModelError::BadPoint { space: space.to_string(), found: p.to_string() })
        }
    }

    fn atoms(&self, name: &str) -> Res<&Vec<String>> {
        self.spaces.get(name).ok_or_else(|| ModelError::Unknown { kind: "space", name: name.to_string() })
    }

    /// All points of a finite carrier in tie-break order (declaration order,
    /// lexicographic on products).
    pub fn universe(&self, space: &MSpace) -> Res<Vec<Point>> {
        match space {
            MSpace::Atoms(name) => Ok(self.atoms(name)?.iter().map(|a| Point::atom(a)).collect()),
            MSpace::XReal => Err(ModelError::UnsupportedConstructor("the extended real line is not finite".into())),
            MSpace::Product(l, r) => {
                let right = self.universe(r)?;
                let mut out = Vec::new();
                for x in self.universe(l)? {
                    for y in &right {
                        out.push(Point::pair(x.clone(), y.clone()));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn set(&self, name: &str) -> Res<&Subset> {
        self.sets.get(name).ok_or_else(|| ModelError::Unknown { kind: "set", name: name.to_string() })
    }

    pub fn func(&self, name: &str) -> Res<&Table> {
        self.funcs.get(name).ok_or_else(|| ModelError::Unknown { kind: "function", name: name.to_string() })
    }

    fn family(&self, member: &str) -> Res<&Vec<String>> {
        match self.families.get(member) {
            Some(v) if !v.is_empty() => Ok(v),
            Some(_) => Err(ModelError::UnsupportedConstructor(format!("empty family `{member}`"))),
            None => Err(ModelError::Unknown { kind: "family", name: member.to_string() }),
        }
    }

    fn space_of(&self, s: &SpaceExpr) -> Res<MSpace> {
        match s {
            SpaceExpr::Named(n) => {
                self.atoms(n)?;
                Ok(MSpace::Atoms(n.clone()))
            }
            SpaceExpr::Reals | SpaceExpr::XRealLine => Ok(MSpace::XReal),
            SpaceExpr::Product(l, r) => Ok(MSpace::product(self.space_of(l)?, self.space_of(r)?)),
            other => Err(ModelError::UnsupportedConstructor(format!("space {other:?} has no finite model"))),
        }
    }

    /// Index of the axis within a product carrier.
    fn axis(&self, space: &MSpace, axis: &Axis) -> Res<usize> {
        let (l, r) = space.split().ok_or_else(|| ModelError::Type(format!("{space} is not a product")))?;
        match axis {
            Axis::Index(i) if *i <= 1 => Ok(usize::from(*i)),
            Axis::Index(i) => Err(ModelError::Type(format!("axis {i} of {space}"))),
            Axis::Space(name) => {
                let s = MSpace::Atoms(name.clone());
                if *l == s {
                    Ok(0)
                } else if *r == s {
                    Ok(1)
                } else {
                    Err(ModelError::Type(format!("axis {name} of {space}")))
                }
            }
        }
    }

    pub fn measure_of(&self, mu: &Measure, s: &Subset) -> BigRational {
        mu.weights.iter().filter(|(p, _)| s.elems.contains(p)).map(|(_, w)| w.clone()).sum()
    }
}

fn coord(p: &Point, i: usize) -> &Point {
    let (l, r) = p.split().expect("points of a product carrier are pairs");
    if i == 0 {
        l
    } else {
        r
    }
}

fn factor(space: &MSpace, i: usize) -> MSpace {
    let (l, r) = space.split().expect("caller resolved the axis on a product");
    if i == 0 {
        l.clone()
    } else {
        r.clone()
    }
}

fn compare(x: &XReal, cmp: Cmp, r: &BigRational) -> bool {
    let r = XReal::Fin(r.clone());
    match cmp {
        Cmp::Lt => *x < r,
        Cmp::Le => *x <= r,
        Cmp::Gt => *x > r,
        Cmp::Ge => *x >= r,
    }
}

fn unsupported<T>(what: &str) -> Res<T> {
    Err(ModelError::UnsupportedConstructor(what.to_string()))
}

/// The subset of a finite carrier denoted by a set expression.
pub fn eval_set(e: &SetExpr, m: &FiniteModel) -> Res<Subset> {
    match e {
        SetExpr::Named(n) => Ok(m.set(n)?.clone()),
        SetExpr::Complement(s) => {
            let s = eval_set(s, m)?;
            let elems = m.universe(&s.space)?.into_iter().filter(|p| !s.elems.contains(p)).collect();
            Ok(Subset { space: s.space, elems })
        }
        SetExpr::Countable(op, fam) => {
            let items: Vec<SetExpr> = m.family(&fam.member)?.iter().map(|n| SetExpr::Named(n.clone())).collect();
            eval_set(&SetExpr::Finite(*op, items), m)
        }
        SetExpr::Finite(op, items) => {
            let mut iter = items.iter();
            let first = iter.next().ok_or_else(|| ModelError::Type("empty finite combination".into()))?;
            let mut acc = eval_set(first, m)?;
            for item in iter {
                let s = eval_set(item, m)?;
                if s.space != acc.space {
                    return Err(ModelError::Type(format!("combining {} with {}", acc.space, s.space)));
                }
                acc.elems = match op {
                    Combine::Union => acc.elems.union(&s.elems).cloned().collect(),
                    Combine::Intersection => acc.elems.intersection(&s.elems).cloned().collect(),
                };
            }
            Ok(acc)
        }
        SetExpr::Product(a, b) => {
            let (a, b) = (eval_set(a, m)?, eval_set(b, m)?);
            let mut elems = BTreeSet::new();
            for x in &a.elems {
                for y in &b.elems {
                    elems.insert(Point::pair(x.clone(), y.clone()));
                }
            }
            Ok(Subset { space: MSpace::product(a.space, b.space), elems })
        }
        SetExpr::Projection(s, axis) => {
            let s = eval_set(s, m)?;
            let i = m.axis(&s.space, axis)?;
            let elems = s.elems.iter().map(|p| coord(p, i).clone()).collect();
            Ok(Subset { space: factor(&s.space, i), elems })
        }
        SetExpr::BorelImage(f, s) => {
            let t = m.func(f)?;
            let s = eval_set(s, m)?;
            let elems = s.elems.iter().filter_map(|x| t.get(x).cloned()).collect();
            Ok(Subset { space: t.cod.clone(), elems })
        }
        SetExpr::Preimage(f, s) => {
            let t = eval_func(f, m)?;
            let s = eval_set(s, m)?;
            let elems = t.values.iter().filter(|(_, y)| s.elems.contains(y)).map(|(x, _)| x.clone()).collect();
            Ok(Subset { space: t.dom, elems })
        }
        SetExpr::Section(s, axis, point) => {
            let Some(point) = point else { return unsupported("section without a fixed point") };
            let s = eval_set(s, m)?;
            let i = m.axis(&s.space, axis)?;
            let fixed = Point::atom(point);
            let elems =
                s.elems.iter().filter(|p| *coord(p, i) == fixed).map(|p| coord(p, 1 - i).clone()).collect();
            Ok(Subset { space: factor(&s.space, 1 - i), elems })
        }
        SetExpr::Graph(f) => {
            let t = eval_func(f, m)?;
            let elems = t.values.iter().map(|(x, y)| Point::pair(x.clone(), y.clone())).collect();
            Ok(Subset { space: MSpace::product(t.dom, t.cod), elems })
        }
        SetExpr::Sublevel(f, cmp, r) => {
            let t = eval_func(f, m)?;
            let mut elems = BTreeSet::new();
            for (x, y) in &t.values {
                if compare(y.real()?, *cmp, r) {
                    elems.insert(x.clone());
                }
            }
            Ok(Subset { space: t.dom, elems })
        }
        SetExpr::MeasureThreshold(..) => unsupported("measure thresholds are symbolic only"),
    }
}

fn pointwise(
    f: &FuncExpr,
    g: &FuncExpr,
    m: &FiniteModel,
    op: impl Fn(&XReal, &XReal) -> XReal,
) -> Res<Table> {
    let (f, g) = (eval_func(f, m)?, eval_func(g, m)?);
    let mut values = BTreeMap::new();
    for (x, a) in &f.values {
        if let Some(b) = g.get(x) {
            values.insert(x.clone(), Point::Real(op(a.real()?, b.real()?)));
        }
    }
    Ok(Table { dom: f.dom, cod: MSpace::XReal, values })
}

fn inner(a: &Point, b: &Point) -> Res<XReal> {
    match (a, b) {
        (Point::Real(x), Point::Real(y)) => Ok(xreal_prod(x, y)),
        (Point::Pair(a1, a2), Point::Pair(b1, b2)) => Ok(xreal_add(&inner(a1, b1)?, &inner(a2, b2)?)),
        _ => Err(ModelError::Type(format!("inner product of {a} and {b}"))),
    }
}

fn power(x: &XReal, n: u32) -> XReal {
    (0..n).fold(XReal::int(1), |acc, _| xreal_prod(&acc, x))
}

/// The table denoted by a function expression.
pub fn eval_func(e: &FuncExpr, m: &FiniteModel) -> Res<Table> {
    match e {
        FuncExpr::Named(n) => Ok(m.func(n)?.clone()),
        FuncExpr::Pair(f, g) => {
            let (f, g) = (eval_func(f, m)?, eval_func(g, m)?);
            let values = f
                .values
                .iter()
                .filter_map(|(x, a)| g.get(x).map(|b| (x.clone(), Point::pair(a.clone(), b.clone()))))
                .collect();
            Ok(Table { dom: f.dom, cod: MSpace::product(f.cod, g.cod), values })
        }
        FuncExpr::Cylinder(f, extra) => {
            let f = eval_func(f, m)?;
            let extra = m.space_of(extra)?;
            let ys = m.universe(&extra)?;
            let mut values = BTreeMap::new();
            for (x, v) in &f.values {
                for y in &ys {
                    values.insert(Point::pair(x.clone(), y.clone()), v.clone());
                }
            }
            Ok(Table { dom: MSpace::product(f.dom, extra), cod: f.cod, values })
        }
        FuncExpr::Compose { outer, inner } => {
            let (o, i) = (eval_func(outer, m)?, eval_func(inner, m)?);
            let values =
                i.values.iter().filter_map(|(x, y)| o.get(y).map(|z| (x.clone(), z.clone()))).collect();
            Ok(Table { dom: i.dom, cod: o.cod, values })
        }
        FuncExpr::SectionOf(f, axis, point) => {
            let Some(point) = point else { return unsupported("slice without a fixed point") };
            let f = eval_func(f, m)?;
            let i = m.axis(&f.dom, axis)?;
            let fixed = Point::atom(point);
            let values = f
                .values
                .iter()
                .filter(|(p, _)| *coord(p, i) == fixed)
                .map(|(p, v)| (coord(p, 1 - i).clone(), v.clone()))
                .collect();
            Ok(Table { dom: factor(&f.dom, 1 - i), cod: f.cod, values })
        }
        FuncExpr::Sum(f, g) => pointwise(f, g, m, xreal_add),
        FuncExpr::Mul(f, g) => pointwise(f, g, m, xreal_prod),
        FuncExpr::Min(f, g) => pointwise(f, g, m, |a, b| a.clone().min(b.clone())),
        FuncExpr::Max(f, g) => pointwise(f, g, m, |a, b| a.clone().max(b.clone())),
        FuncExpr::Neg(f) => {
            let f = eval_func(f, m)?;
            let values =
                f.values.iter().map(|(x, y)| Ok((x.clone(), Point::Real(xreal_neg(y.real()?))))).collect::<Res<_>>()?;
            Ok(Table { dom: f.dom, cod: MSpace::XReal, values })
        }
        FuncExpr::Inner(f, g) => {
            let (f, g) = (eval_func(f, m)?, eval_func(g, m)?);
            let mut values = BTreeMap::new();
            for (x, a) in &f.values {
                if let Some(b) = g.get(x) {
                    values.insert(x.clone(), Point::Real(inner(a, b)?));
                }
            }
            Ok(Table { dom: f.dom, cod: MSpace::XReal, values })
        }
        FuncExpr::Power(f, a) => {
            if !a.is_integer() {
                return unsupported("non-integer exponents have no exact value");
            }
            let n: u32 = a.to_integer().try_into().map_err(|_| ModelError::Type(format!("exponent {a}")))?;
            let f = eval_func(f, m)?;
            let values =
                f.values.iter().map(|(x, y)| Ok((x.clone(), Point::Real(power(y.real()?, n))))).collect::<Res<_>>()?;
            Ok(Table { dom: f.dom, cod: MSpace::XReal, values })
        }
        FuncExpr::Countable(op, fam) => {
            let names = m.family(&fam.member)?;
            let mut acc = m.func(&names[0])?.clone();
            for n in &names[1..] {
                let next = FuncExpr::Named(n.clone());
                let cur = std::mem::take(&mut acc.values);
                let g = eval_func(&next, m)?;
                for (x, a) in cur {
                    if let Some(b) = g.get(&x) {
                        let (a, b) = (a.real()?.clone(), b.real()?.clone());
                        let v = if *op == Extremum::Inf { a.min(b) } else { a.max(b) };
                        acc.values.insert(x, Point::Real(v));
                    }
                }
            }
            acc.cod = MSpace::XReal;
            Ok(acc)
        }
        FuncExpr::Partial { op, func, domain } => {
            let f = eval_func(func, m)?;
            let d = eval_set(domain, m)?;
            let x_space = factor(&f.dom, 0);
            let empty = if *op == Extremum::Inf { XReal::PosInf } else { XReal::NegInf };
            let mut values: BTreeMap<Point, Point> =
                m.universe(&x_space)?.into_iter().map(|x| (x, Point::Real(empty.clone()))).collect();
            for p in &d.elems {
                let v = f.get(p).ok_or_else(|| ModelError::NotTotal { func: "partial".into(), point: p.to_string() })?;
                let v = v.real()?.clone();
                let slot = values.get_mut(coord(p, 0)).expect("domain points lie in the carrier");
                let cur = slot.real()?.clone();
                *slot = Point::Real(if *op == Extremum::Inf { cur.min(v) } else { cur.max(v) });
            }
            Ok(Table { dom: x_space, cod: MSpace::XReal, values })
        }
        FuncExpr::IntegralKernel(f, q) => {
            let f = eval_func(f, m)?;
            let kernel = m.kernels.get(q).ok_or_else(|| ModelError::Unknown { kind: "kernel", name: q.clone() })?;
            let ys = m.universe(&kernel.cod)?;
            let mut values = BTreeMap::new();
            for x in m.universe(&kernel.dom)? {
                let row = &kernel.rows[&x];
                let mut vals = Vec::new();
                let mut ws = Vec::new();
                for y in &ys {
                    let p = Point::pair(x.clone(), y.clone());
                    let v = f.get(&p).ok_or_else(|| ModelError::NotTotal { func: "integrand".into(), point: p.to_string() })?;
                    vals.push(v.real()?.clone());
                    ws.push(row.get(y).cloned().unwrap_or_else(BigRational::zero));
                }
                values.insert(x, Point::Real(integral_minus(&vals, &ws)));
            }
            Ok(Table { dom: kernel.dom.clone(), cod: MSpace::XReal, values })
        }
        FuncExpr::Select(s) => {
            let s = eval_set(s, m)?;
            let (x_space, y_space) = (factor(&s.space, 0), factor(&s.space, 1));
            let ys = m.universe(&y_space)?;
            let mut values = BTreeMap::new();
            for x in m.universe(&x_space)? {
                if let Some(y) = ys.iter().find(|y| s.elems.contains(&Point::pair(x.clone(), (*y).clone()))) {
                    values.insert(x, y.clone());
                }
            }
            Ok(Table { dom: x_space, cod: y_space, values })
        }
        FuncExpr::EpsSelector { domain, func, eps, direction } => {
            let d = eval_set(domain, m)?;
            let f = eval_func(func, m)?;
            let values = eps_select_enumerate(m, &d, &f, eps, *direction)?;
            Ok(Table { dom: factor(&d.space, 0), cod: factor(&d.space, 1), values })
        }
        FuncExpr::FromGraph(g, d) => {
            let g = eval_set(g, m)?;
            let d = eval_set(d, m)?;
            let mut values = BTreeMap::new();
            for x in &d.elems {
                let mut ys = g.elems.iter().filter(|p| coord(p, 0) == x).map(|p| coord(p, 1));
                match (ys.next(), ys.next()) {
                    (Some(y), None) => {
                        values.insert(x.clone(), y.clone());
                    }
                    _ => return Err(ModelError::NotAFunction(x.to_string())),
                }
            }
            Ok(Table { dom: d.space, cod: factor(&g.space, 1), values })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> FiniteModel {
        FiniteModel::from_json(
            r#"{
              "spaces": {"X": ["a", "b"], "Y": ["u", "v"]},
              "sets": {"A": {"space": "X", "elements": ["a"]},
                       "B": {"space": "Y", "elements": ["u", "v"]}},
              "funcs": {"f": {"dom": "X", "cod": "xreal", "table": [["a", "0"], ["b", "2"]]}}
            }"#,
        )
        .unwrap()
    }

    fn named(n: &str) -> Box<SetExpr> {
        Box::new(SetExpr::Named(n.into()))
    }

    #[test]
    fn double_complement() {
        let m = model();
        let e = SetExpr::Complement(Box::new(SetExpr::Complement(named("A"))));
        assert_eq!(eval_set(&e, &m).unwrap(), *m.set("A").unwrap());
    }

    #[test]
    fn projection_of_product() {
        let m = model();
        let e = SetExpr::Projection(Box::new(SetExpr::Product(named("A"), named("B"))), Axis::Space("X".into()));
        assert_eq!(eval_set(&e, &m).unwrap(), *m.set("A").unwrap());
    }

    #[test]
    fn sublevel_lookup() {
        let m = model();
        let e = SetExpr::Sublevel(Box::new(FuncExpr::Named("f".into())), Cmp::Lt, BigRational::one());
        let s = eval_set(&e, &m).unwrap();
        assert_eq!(s.elems, BTreeSet::from([Point::atom("a")]));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let m = model();
        assert_eq!(FiniteModel::from_json(&m.to_json()).unwrap(), m);
        let partial = r#"{"spaces": {"X": ["a", "b"]},
            "funcs": {"f": {"dom": "X", "cod": "xreal", "table": [["a", "0"]]}}}"#;
        assert!(matches!(FiniteModel::from_json(partial), Err(ModelError::NotTotal { .. })));
        let heavy = r#"{"spaces": {"X": ["a"]}, "measures": {"mu": {"space": "X", "weights": [["a", "2"]]}}}"#;
        assert!(matches!(FiniteModel::from_json(heavy), Err(ModelError::NotProbability(_))));
    }

    #[test]
    fn threshold_is_symbolic() {
        let e = SetExpr::MeasureThreshold(named("A"), BigRational::one());
        assert!(matches!(eval_set(&e, &model()), Err(ModelError::UnsupportedConstructor(_))));
    }
}
