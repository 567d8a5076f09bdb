//! The five set/arithmetic identities behind the closure rules, checked
//! exactly on finite models, and seeded random instances of each.
//!
//! Model conventions per identity:
//!
//! | identity       | spaces    | model contents                         | parameters |
//! |----------------|-----------|----------------------------------------|------------|
//! | `INFSUP-PROJ`  | X, Y      | set `D` on `X*Y`, `f : X*Y -> xreal`   | `c`        |
//! | `SUM-PRE`      | X         | `f, g : X -> xreal`                    | `c`        |
//! | `PROD-POS`     | X         | `f, g : X -> xreal`                    |            |
//! | `EPS-E`        | X, Y      | set `D` on `X*Y`, `f : X*Y -> xreal`   | `eps`      |
//! | `FUBINI-DIRAC` | C, X, N   | set `S` on `C*X*N`, measure `mu` on X  | `d`, `r`   |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::model::{eval_func, eval_set, FiniteModel, MSpace, Measure, ModelError, Point, Subset, Table};
use super::xreal::{parse_rational, xreal_add, xreal_neg, xreal_prod, xreal_sub, XReal};
use crate::expr::{Axis, Cmp, Extremum, FuncExpr, SetExpr};
use crate::pointclass::Combine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Identity {
    #[serde(rename = "INFSUP-PROJ")]
    InfSupProj,
    #[serde(rename = "SUM-PRE")]
    SumPre,
    #[serde(rename = "PROD-POS")]
    ProdPos,
    #[serde(rename = "EPS-E")]
    EpsE,
    #[serde(rename = "FUBINI-DIRAC")]
    FubiniDirac,
}

impl Identity {
    pub const ALL: [Identity; 5] =
        [Identity::InfSupProj, Identity::SumPre, Identity::ProdPos, Identity::EpsE, Identity::FubiniDirac];

    pub fn as_str(self) -> &'static str {
        match self {
            Identity::InfSupProj => "INFSUP-PROJ",
            Identity::SumPre => "SUM-PRE",
            Identity::ProdPos => "PROD-POS",
            Identity::EpsE => "EPS-E",
            Identity::FubiniDirac => "FUBINI-DIRAC",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown identity `{0}`")]
pub struct UnknownIdentity(pub String);

impl FromStr for Identity {
    type Err = UnknownIdentity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL.into_iter().find(|i| i.as_str() == s).ok_or_else(|| UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub c: Option<BigRational>,
    pub r: Option<BigRational>,
    pub eps: Option<BigRational>,
    /// The Dirac atom of `FUBINI-DIRAC`.
    pub d: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCase {
    pub identity: Identity,
    pub model: FiniteModel,
    pub params: Params,
}

impl IdentityCase {
    pub fn to_json(&self) -> serde_json::Value {
        let q = |v: &Option<BigRational>| v.as_ref().map(|q| q.to_string());
        serde_json::json!({
            "identity": self.identity,
            "model": serde_json::from_str::<serde_json::Value>(&self.model.to_json())
                .expect("model JSON parses"),
            "params": { "c": q(&self.params.c), "r": q(&self.params.r), "eps": q(&self.params.eps), "d": self.params.d },
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<IdentityCase, ModelError> {
        let bad = |what: &str| ModelError::Format(format!("identity case: {what}"));
        let identity = v
            .get("identity")
            .and_then(|i| i.as_str())
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("missing or unknown identity"))?;
        let model = FiniteModel::from_json(&v.get("model").ok_or_else(|| bad("missing model"))?.to_string())?;
        let p = v.get("params");
        let q = |k: &str| -> Result<Option<BigRational>, ModelError> {
            match p.and_then(|p| p.get(k)).and_then(|x| x.as_str()) {
                Some(s) => parse_rational(s).map(Some).ok_or_else(|| bad(k)),
                None => Ok(None),
            }
        };
        let params = Params {
            c: q("c")?,
            r: q("r")?,
            eps: q("eps")?,
            d: p.and_then(|p| p.get("d")).and_then(|x| x.as_str()).map(String::from),
        };
        Ok(IdentityCase { identity, model, params })
    }
}

/// A failing instance: the atom or parameter where the two sides differ.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{identity} fails at {witness}: {detail}")]
pub struct Counterexample {
    pub identity: Identity,
    pub witness: String,
    pub detail: String,
}

fn named_set(n: &str) -> Box<SetExpr> {
    Box::new(SetExpr::Named(n.into()))
}

fn named_func(n: &str) -> Box<FuncExpr> {
    Box::new(FuncExpr::Named(n.into()))
}

fn param<'a>(p: &'a Option<BigRational>, name: &str) -> Result<&'a BigRational, ModelError> {
    p.as_ref().ok_or_else(|| ModelError::Format(format!("missing parameter `{name}`")))
}

fn real(p: &Point) -> XReal {
    match p {
        Point::Real(x) => x.clone(),
        other => panic!("validated xreal table holds {other}"),
    }
}

fn first_difference(a: &BTreeSet<Point>, b: &BTreeSet<Point>) -> Option<Point> {
    a.symmetric_difference(b).next().cloned()
}

/// Evaluates both sides of the identity exactly.
pub fn check_identity(case: &IdentityCase) -> Result<(), Counterexample> {
    let id = case.identity;
    let fail = |witness: String, detail: String| Counterexample { identity: id, witness, detail };
    let result = match id {
        Identity::InfSupProj => infsup_proj(case),
        Identity::SumPre => sum_pre(case),
        Identity::ProdPos => prod_pos(case),
        Identity::EpsE => eps_e(case),
        Identity::FubiniDirac => fubini_dirac(case),
    };
    match result {
        Ok(None) => Ok(()),
        Ok(Some((w, detail))) => Err(fail(w, detail)),
        Err(e) => Err(fail("model".into(), e.to_string())),
    }
}

type Outcome = Result<Option<(String, String)>, ModelError>;

fn infsup_proj(case: &IdentityCase) -> Outcome {
    let m = &case.model;
    let c = param(&case.params.c, "c")?;
    let proj_d = SetExpr::Projection(named_set("D"), Axis::Space("X".into()));
    for (op, cmp) in [(Extremum::Inf, Cmp::Lt), (Extremum::Sup, Cmp::Gt)] {
        let partial = FuncExpr::Partial { op, func: named_func("f"), domain: named_set("D") };
        let lhs = SetExpr::Finite(
            Combine::Intersection,
            vec![proj_d.clone(), SetExpr::Sublevel(Box::new(partial), cmp, c.clone())],
        );
        let rhs = SetExpr::Projection(
            Box::new(SetExpr::Finite(
                Combine::Intersection,
                vec![SetExpr::Named("D".into()), SetExpr::Sublevel(named_func("f"), cmp, c.clone())],
            )),
            Axis::Space("X".into()),
        );
        let (l, r) = (eval_set(&lhs, m)?, eval_set(&rhs, m)?);
        if let Some(x) = first_difference(&l.elems, &r.elems) {
            return Ok(Some((x.to_string(), format!("p{} side differs at c = {c}", op.keyword()))));
        }
    }
    Ok(None)
}

/// The finite family of rationals standing in for `ℚ` in the sum identity.
fn sum_rationals(f: &Table, g: &Table, c: &BigRational) -> BTreeSet<BigRational> {
    let fin = |t: &Table, shift: bool| -> Vec<BigRational> {
        t.values
            .values()
            .filter_map(|v| match real(v) {
                XReal::Fin(q) if shift => Some(c - q),
                XReal::Fin(q) => Some(q),
                _ => None,
            })
            .collect()
    };
    let fs = fin(f, false);
    let gs = fin(g, true);
    let two = BigRational::from_integer(2.into());
    let mut out = BTreeSet::from([BigRational::zero()]);
    for a in &fs {
        for b in &gs {
            if a < b {
                out.insert((a + b) / &two);
            }
        }
    }
    for v in fs.iter().chain(&gs) {
        out.insert(v - BigRational::one());
        out.insert(v + BigRational::one());
    }
    out
}

fn sum_pre(case: &IdentityCase) -> Outcome {
    let m = &case.model;
    let c = param(&case.params.c, "c")?;
    let sum = FuncExpr::Sum(named_func("f"), named_func("g"));
    let lhs = eval_set(&SetExpr::Sublevel(Box::new(sum), Cmp::Lt, c.clone()), m)?;

    let (f, g) = (m.func("f")?, m.func("g")?);
    let mut rhs: BTreeSet<Point> = f
        .values
        .iter()
        .filter(|(x, v)| {
            let (a, b) = (real(v), real(&g.values[*x]));
            matches!((a, b), (XReal::PosInf, XReal::NegInf) | (XReal::NegInf, XReal::PosInf))
        })
        .map(|(x, _)| x.clone())
        .collect();
    let pieces: Vec<SetExpr> = sum_rationals(f, g, c)
        .into_iter()
        .map(|r| {
            SetExpr::Finite(
                Combine::Intersection,
                vec![
                    SetExpr::Sublevel(named_func("f"), Cmp::Lt, r.clone()),
                    SetExpr::Sublevel(named_func("g"), Cmp::Lt, c - r),
                ],
            )
        })
        .collect();
    rhs.extend(eval_set(&SetExpr::Finite(Combine::Union, pieces), m)?.elems);
    Ok(first_difference(&lhs.elems, &rhs).map(|x| (x.to_string(), format!("sublevel of f + g at c = {c}"))))
}

fn prod_pos(case: &IdentityCase) -> Outcome {
    let m = &case.model;
    let lhs = eval_func(&FuncExpr::Mul(named_func("f"), named_func("g")), m)?;
    let (f, g) = (m.func("f")?, m.func("g")?);
    for (x, v) in &lhs.values {
        let (a, b) = (real(&f.values[x]), real(&g.values[x]));
        let (ap, an, bp, bn) = (a.pos_part(), a.neg_part(), b.pos_part(), b.neg_part());
        let rhs = xreal_sub(
            &xreal_add(&xreal_prod(&ap, &bp), &xreal_prod(&an, &bn)),
            &xreal_add(&xreal_prod(&ap, &bn), &xreal_prod(&an, &bp)),
        );
        if real(v) != rhs {
            return Ok(Some((x.to_string(), format!("f g = {} but the positive-part form gives {rhs}", real(v)))));
        }
    }
    Ok(None)
}

/// The set `E = (A₁ ∩ B₁) ∪ (A₂ ∩ B₂)` for the inf direction of `f`.
fn eps_set(m: &FiniteModel, d: &Subset, f: &Table, eps: &BigRational) -> Result<BTreeSet<Point>, ModelError> {
    let mut work = m.clone();
    work.funcs.insert("f".into(), f.clone());
    let lower = eval_func(&FuncExpr::Partial { op: Extremum::Inf, func: named_func("f"), domain: named_set("D") }, &work)?;
    let cap = XReal::Fin(-(BigRational::one() / eps));
    let mut e = BTreeSet::new();
    for p in &d.elems {
        let Point::Pair(x, _) = p else { unreachable!("D lives on a product") };
        let (v, low) = (real(&f.values[p]), real(&lower.values[x]));
        let in_a1 = low == XReal::PosInf || v < xreal_add(&low, &XReal::Fin(eps.clone()));
        let in_a2 = v < cap;
        if (low != XReal::NegInf && in_a1) || (low == XReal::NegInf && in_a2) {
            e.insert(p.clone());
        }
    }
    Ok(e)
}

fn eps_e(case: &IdentityCase) -> Outcome {
    let m = &case.model;
    let eps = param(&case.params.eps, "eps")?;
    let d = m.set("D")?;
    let f = m.func("f")?;
    let negated = Table {
        values: f.values.iter().map(|(k, v)| (k.clone(), Point::Real(xreal_neg(&real(v))))).collect(),
        ..f.clone()
    };
    let proj = |s: &BTreeSet<Point>| -> BTreeSet<Point> {
        s.iter().map(|p| if let Point::Pair(x, _) = p { (**x).clone() } else { unreachable!() }).collect()
    };
    for (label, table) in [("inf", f), ("sup", &negated)] {
        let e = eps_set(m, d, table, eps)?;
        if let Some(p) = e.difference(&d.elems).next() {
            return Ok(Some((p.to_string(), format!("{label}: E is not inside D"))));
        }
        if let Some(x) = first_difference(&proj(&e), &proj(&d.elems)) {
            return Ok(Some((x.to_string(), format!("{label}: proj E differs from proj D at eps = {eps}"))));
        }
    }
    Ok(None)
}

fn fubini_dirac(case: &IdentityCase) -> Outcome {
    let m = &case.model;
    let d = case.params.d.as_deref().ok_or_else(|| ModelError::Format("missing parameter `d`".into()))?;
    let mu = m.measures.get("mu").ok_or_else(|| ModelError::Unknown { kind: "measure", name: "mu".into() })?;
    let section = SetExpr::Section(named_set("S"), Axis::Space("C".into()), Some(d.to_string()));
    let shadow = eval_set(&SetExpr::Projection(Box::new(section), Axis::Space("X".into())), m)?;
    let lhs = m.measure_of(mu, &shadow);

    let mut rhs = BigRational::zero();
    let mut seen = BTreeSet::new();
    for p in &m.set("S")?.elems {
        let Point::Pair(c, rest) = p else { unreachable!("S lives on C*X*N") };
        let Point::Pair(x, _) = &**rest else { unreachable!("S lives on C*X*N") };
        if seen.insert((c.clone(), x.clone())) && **c == Point::atom(d) {
            rhs += mu.weights.get(x).cloned().unwrap_or_else(BigRational::zero);
        }
    }
    if lhs != rhs {
        return Ok(Some((format!("d = {d}"), format!("mu(proj S_d) = {lhs}, product measure gives {rhs}"))));
    }
    if let Some(r) = &case.params.r {
        if (lhs >= *r) != (rhs >= *r) {
            return Ok(Some((format!("r = {r}"), "threshold sides disagree".into())));
        }
    }
    Ok(None)
}

/// Size and value bounds of the random generators.
pub const MAX_ATOMS: usize = 6;

fn random_xreal(rng: &mut ChaCha8Rng) -> XReal {
    match rng.random_range(0..20) {
        0..=2 => XReal::NegInf,
        3..=5 => XReal::PosInf,
        _ => XReal::Fin(random_rational(rng)),
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n: i64 = rng.random_range(-4..=4);
    let d: i64 = rng.random_range(1..=3);
    BigRational::new(n.into(), d.into())
}

fn random_eps(rng: &mut ChaCha8Rng) -> BigRational {
    let choices = [(1, 10), (1, 4), (1, 2), (1, 1), (2, 1), (3, 1)];
    let (n, d) = choices[rng.random_range(0..choices.len())];
    BigRational::new(n.into(), d.into())
}

fn add_space(m: &mut FiniteModel, name: &str, prefix: &str, n: usize) {
    m.spaces.insert(name.into(), (0..n).map(|i| format!("{prefix}{i}")).collect());
}

fn random_subset(m: &FiniteModel, space: MSpace, rng: &mut ChaCha8Rng) -> Subset {
    let density = [0.0, 0.3, 0.6, 1.0][rng.random_range(0..4)];
    let elems = m.universe(&space).expect("generated spaces exist").into_iter().filter(|_| rng.random_bool(density)).collect();
    Subset { space, elems }
}

fn random_table(m: &FiniteModel, dom: MSpace, rng: &mut ChaCha8Rng) -> Table {
    let values = m
        .universe(&dom)
        .expect("generated spaces exist")
        .into_iter()
        .map(|x| (x, Point::Real(random_xreal(rng))))
        .collect();
    Table { dom, cod: MSpace::XReal, values }
}

fn random_measure(m: &FiniteModel, space: MSpace, rng: &mut ChaCha8Rng) -> Measure {
    let atoms = m.universe(&space).expect("generated spaces exist");
    let mut raw: Vec<i64> = atoms.iter().map(|_| rng.random_range(0..=3)).collect();
    if raw.iter().all(|w| *w == 0) {
        raw[0] = 1;
    }
    let total: i64 = raw.iter().sum();
    let weights = atoms.into_iter().zip(raw).map(|(p, w)| (p, BigRational::new(w.into(), total.into()))).collect();
    Measure { space, weights }
}

/// A random instance of the identity, fully determined by `seed`.
pub fn random_case(identity: Identity, seed: u64) -> IdentityCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    let mut m = FiniteModel::new();
    let mut params = Params::default();
    let xy = MSpace::product(MSpace::atoms("X"), MSpace::atoms("Y"));
    match identity {
        Identity::InfSupProj | Identity::EpsE => {
            add_space(&mut m, "X", "x", rng.random_range(1..=MAX_ATOMS));
            add_space(&mut m, "Y", "y", rng.random_range(1..=MAX_ATOMS));
            let d = random_subset(&m, xy.clone(), rng);
            let f = random_table(&m, xy, rng);
            m.sets.insert("D".into(), d);
            m.funcs.insert("f".into(), f);
            if identity == Identity::InfSupProj {
                params.c = Some(random_rational(rng));
            } else {
                params.eps = Some(random_eps(rng));
            }
        }
        Identity::SumPre | Identity::ProdPos => {
            add_space(&mut m, "X", "x", rng.random_range(1..=MAX_ATOMS));
            for name in ["f", "g"] {
                let t = random_table(&m, MSpace::atoms("X"), rng);
                m.funcs.insert(name.into(), t);
            }
            if identity == Identity::SumPre {
                params.c = Some(random_rational(rng));
            }
        }
        Identity::FubiniDirac => {
            add_space(&mut m, "C", "c", rng.random_range(1..=4));
            add_space(&mut m, "X", "x", rng.random_range(1..=MAX_ATOMS));
            add_space(&mut m, "N", "n", rng.random_range(1..=4));
            let cxn = MSpace::product(MSpace::atoms("C"), MSpace::product(MSpace::atoms("X"), MSpace::atoms("N")));
            let s = random_subset(&m, cxn, rng);
            let mu = random_measure(&m, MSpace::atoms("X"), rng);
            m.sets.insert("S".into(), s);
            m.measures.insert("mu".into(), mu);
            params.d = Some(format!("c{}", rng.random_range(0..m.spaces["C"].len())));
            params.r = Some(BigRational::new(rng.random_range(0..=4).into(), 4.into()));
        }
    }
    IdentityCase { identity, model: m, params }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Ok,
    Counterexample,
}

/// One line of an oracle report; `seed` alone reproduces the case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRecord {
    pub seed: u64,
    pub identity: Identity,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<serde_json::Value>,
}

pub fn run_case(identity: Identity, seed: u64) -> OracleRecord {
    let case = random_case(identity, seed);
    match check_identity(&case) {
        Ok(()) => OracleRecord { seed, identity, verdict: Verdict::Ok, witness: None, detail: None, case: None },
        Err(cx) => OracleRecord {
            seed,
            identity,
            verdict: Verdict::Counterexample,
            witness: Some(cx.witness),
            detail: Some(cx.detail),
            case: Some(case.to_json()),
        },
    }
}

/// Runs `count` cases per identity with seeds `seed, seed+1, ...`, in
/// identity order then seed order.
pub fn run_suite(identities: &[Identity], seed: u64, count: u64) -> Vec<OracleRecord> {
    let mut out = Vec::new();
    for &id in identities {
        for i in 0..count {
            out.push(run_case(id, seed.wrapping_add(i)));
        }
    }
    out
}

/// Summary counts by identity, for reports.
pub fn tally(records: &[OracleRecord]) -> BTreeMap<Identity, (usize, usize)> {
    let mut out: BTreeMap<Identity, (usize, usize)> = BTreeMap::new();
    for r in records {
        let e = out.entry(r.identity).or_default();
        e.0 += 1;
        if r.verdict == Verdict::Counterexample {
            e.1 += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.as_str().parse::<Identity>().unwrap(), id);
        }
        assert!("SUM".parse::<Identity>().is_err());
    }

    #[test]
    fn empty_domain_infsup() {
        let mut case = random_case(Identity::InfSupProj, 3);
        case.model.sets.get_mut("D").unwrap().elems.clear();
        assert_eq!(check_identity(&case), Ok(()));
    }

    #[test]
    fn eps_e_constant_objective() {
        let mut m = FiniteModel::new();
        add_space(&mut m, "X", "x", 2);
        add_space(&mut m, "Y", "y", 2);
        let xy = MSpace::product(MSpace::atoms("X"), MSpace::atoms("Y"));
        let all = m.universe(&xy).unwrap();
        m.sets.insert("D".into(), Subset { space: xy.clone(), elems: all.iter().cloned().collect() });
        let values = all.into_iter().map(|p| (p, Point::Real(XReal::zero()))).collect();
        m.funcs.insert("f".into(), Table { dom: xy, cod: MSpace::XReal, values });
        let d = m.set("D").unwrap().clone();
        let e = eps_set(&m, &d, m.func("f").unwrap(), &BigRational::one()).unwrap();
        assert_eq!(e, d.elems);
        let params = Params { eps: Some(BigRational::one()), ..Params::default() };
        assert_eq!(check_identity(&IdentityCase { identity: Identity::EpsE, model: m, params }), Ok(()));
    }

    #[test]
    fn fubini_full_product() {
        let mut case = random_case(Identity::FubiniDirac, 11);
        let s = case.model.sets.get_mut("S").unwrap().clone();
        let full = case.model.universe(&s.space).unwrap();
        case.model.sets.get_mut("S").unwrap().elems = full.into_iter().collect();
        case.params.r = Some(BigRational::one());
        assert_eq!(check_identity(&case), Ok(()));
    }

    #[test]
    fn case_json_round_trip() {
        let case = random_case(Identity::FubiniDirac, 5);
        let json = case.to_json();
        assert_eq!(IdentityCase::from_json(&json).unwrap(), case);
    }

    #[test]
    fn small_suite_is_clean() {
        let records = run_suite(&Identity::ALL, 1, 20);
        assert_eq!(records.len(), 100);
        assert!(records.iter().all(|r| r.verdict == Verdict::Ok), "{records:?}");
    }
}
