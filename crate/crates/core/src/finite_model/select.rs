//! ε-optimal selectors on finite models.
//!
//! For `inf`, the selected `y ∈ D_x` satisfies `f(x,y) < f_*(x) + ε` when
//! `f_*(x) > −∞` and `f(x,y) < −1/ε` when `f_*(x) = −∞`. `sup` is the mirror
//! image. When `f_*(x) = +∞` every `y ∈ D_x` counts as ε-optimal (and
//! symmetrically for `f^*(x) = −∞`).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use super::model::{FiniteModel, ModelError, Point, Subset, Table};
use super::xreal::{xreal_add, xreal_neg, XReal};
use crate::expr::Extremum;

/// The bound a selected value must beat strictly, given the extremum over
/// the section.
fn target(extremum: &XReal, eps: &BigRational, dir: Extremum) -> Option<XReal> {
    let eps_x = XReal::Fin(eps.clone());
    let inv = XReal::Fin(BigRational::one() / eps);
    match (dir, extremum) {
        (Extremum::Inf, XReal::PosInf) | (Extremum::Sup, XReal::NegInf) => None,
        (Extremum::Inf, XReal::NegInf) => Some(xreal_neg(&inv)),
        (Extremum::Inf, e) => Some(xreal_add(e, &eps_x)),
        (Extremum::Sup, XReal::PosInf) => Some(inv),
        (Extremum::Sup, e) => Some(xreal_add(e, &xreal_neg(&eps_x))),
    }
}

fn beats(v: &XReal, bound: &Option<XReal>, dir: Extremum) -> bool {
    match (bound, dir) {
        (None, _) => true,
        (Some(b), Extremum::Inf) => v < b,
        (Some(b), Extremum::Sup) => v > b,
    }
}

fn real(p: &Point) -> Result<XReal, ModelError> {
    match p {
        Point::Real(x) => Ok(x.clone()),
        other => Err(ModelError::Type(format!("expected an extended real, found {other}"))),
    }
}

type Section = (Point, Vec<(Point, XReal)>);

/// Sections `D_x` in carrier order, with the values of `f` on them.
fn sections(m: &FiniteModel, d: &Subset, f: &Table) -> Result<Vec<Section>, ModelError> {
    let (xs, ys) = match &d.space {
        super::model::MSpace::Product(l, r) => (m.universe(l)?, m.universe(r)?),
        other => return Err(ModelError::Type(format!("{other} is not a product"))),
    };
    let mut out = Vec::new();
    for x in xs {
        let mut row = Vec::new();
        for y in &ys {
            let p = Point::pair(x.clone(), y.clone());
            if d.elems.contains(&p) {
                let v = f.get(&p).ok_or_else(|| ModelError::NotTotal { func: "objective".into(), point: p.to_string() })?;
                row.push((y.clone(), real(v)?));
            }
        }
        if !row.is_empty() {
            out.push((x, row));
        }
    }
    Ok(out)
}

/// Picks, for each `x ∈ proj_X(D)`, the least-indexed ε-optimal `y`.
pub fn eps_select_enumerate(
    m: &FiniteModel,
    d: &Subset,
    f: &Table,
    eps: &BigRational,
    dir: Extremum,
) -> Result<BTreeMap<Point, Point>, ModelError> {
    let mut out = BTreeMap::new();
    for (x, row) in sections(m, d, f)? {
        let values = row.iter().map(|(_, v)| v.clone());
        let extremum = match dir {
            Extremum::Inf => values.min(),
            Extremum::Sup => values.max(),
        }
        .expect("sections are nonempty");
        let bound = target(&extremum, eps, dir);
        let (y, _) = row
            .iter()
            .find(|(_, v)| beats(v, &bound, dir))
            .expect("the extremum of a finite section is attained");
        out.insert(x, y.clone());
    }
    Ok(out)
}

/// Checks a selector table: domain `proj_X(D)`, graph inside `D`, and the
/// ε-optimality inequality at every point. Returns the offending `x`.
pub fn check_eps_selector(
    m: &FiniteModel,
    d: &Subset,
    f: &Table,
    eps: &BigRational,
    dir: Extremum,
    selector: &BTreeMap<Point, Point>,
) -> Result<(), String> {
    let rows = sections(m, d, f).map_err(|e| e.to_string())?;
    if rows.len() != selector.len() {
        return Err(format!("selector defined on {} points, projection has {}", selector.len(), rows.len()));
    }
    for (x, row) in rows {
        let Some(y) = selector.get(&x) else { return Err(format!("{x}: no selection")) };
        let Some((_, v)) = row.iter().find(|(z, _)| z == y) else {
            return Err(format!("{x}: selected {y} outside the section"));
        };
        // Extremum recomputed by pairwise comparison rather than min/max.
        let mut ext = row[0].1.clone();
        for (_, w) in &row {
            let better = match dir {
                Extremum::Inf => *w < ext,
                Extremum::Sup => *w > ext,
            };
            if better {
                ext = w.clone();
            }
        }
        let ok = match (dir, &ext) {
            (Extremum::Inf, XReal::PosInf) | (Extremum::Sup, XReal::NegInf) => true,
            (Extremum::Inf, XReal::NegInf) => *v < XReal::Fin(-(BigRational::one() / eps)),
            (Extremum::Inf, XReal::Fin(q)) => *v < XReal::Fin(q + eps),
            (Extremum::Sup, XReal::PosInf) => *v > XReal::Fin(BigRational::one() / eps),
            (Extremum::Sup, XReal::Fin(q)) => *v > XReal::Fin(q - eps),
        };
        if !ok {
            return Err(format!("{x}: value {v} at {y} is not {}-optimal (extremum {ext})", eps));
        }
    }
    Ok(())
}
