//! Canonical one-line-per-declaration rendering; `parse(format(p)) == p`.

use num_rational::BigRational;

use super::{
    Assertion, Axis, Decl, Expr, Family, FuncAnnot, FuncExpr, Program, Rel, SetExpr, SpaceExpr,
};
use crate::pointclass::{Combine, LevelSchedule};

pub fn format(program: &Program) -> String {
    let mut out = String::new();
    for decl in &program.decls {
        out.push_str(&format_decl(decl));
        out.push('\n');
    }
    out
}

pub fn format_space(space: &SpaceExpr) -> String {
    match space {
        SpaceExpr::Reals => "reals".into(),
        SpaceExpr::Naturals => "nat".into(),
        SpaceExpr::Baire => "baire".into(),
        SpaceExpr::Cantor => "cantor".into(),
        SpaceExpr::XRealLine => "xreal".into(),
        SpaceExpr::Named(name) => name.clone(),
        SpaceExpr::MeasureSpace(inner) => format!("measures({})", format_space(inner)),
        SpaceExpr::Product(l, r) => {
            let left = match **l {
                SpaceExpr::Product(..) => format!("({})", format_space(l)),
                _ => format_space(l),
            };
            format!("{left} * {}", format_space(r))
        }
    }
}

fn rational(r: &BigRational) -> String {
    r.to_string()
}

fn axis(a: &Axis, point: &Option<String>) -> String {
    let base = match a {
        Axis::Index(i) => i.to_string(),
        Axis::Space(s) => s.clone(),
    };
    match point {
        Some(p) => format!("[{base}={p}]"),
        None => format!("[{base}]"),
    }
}

fn schedule(s: &LevelSchedule) -> String {
    match s {
        LevelSchedule::ConstantClass(c) => format!("const {c}"),
        LevelSchedule::BoundedBy(c) => format!("bounded {c}"),
        LevelSchedule::ExplicitList(cs) => {
            let items: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            format!("list [{}]", items.join(", "))
        }
        LevelSchedule::Unbounded(text) => format!("unbounded \"{text}\""),
    }
}

fn family(f: &Family, space_kw: &str) -> String {
    format!(
        "{} in nat of {} {space_kw} {} with levels {}",
        f.index,
        f.member,
        format_space(&f.space),
        schedule(&f.schedule)
    )
}

fn combine_kw(op: Combine) -> &'static str {
    match op {
        Combine::Union => "union",
        Combine::Intersection => "inter",
    }
}

pub fn format_set(e: &SetExpr) -> String {
    match e {
        SetExpr::Named(n) => n.clone(),
        SetExpr::Complement(s) => format!("complement({})", format_set(s)),
        SetExpr::Countable(op, fam) => format!("{} {}", combine_kw(*op), family(fam, "in")),
        SetExpr::Finite(op, items) => {
            let items: Vec<String> = items.iter().map(format_set).collect();
            format!("{}({})", combine_kw(*op), items.join(", "))
        }
        SetExpr::Product(a, b) => format!("prod({}, {})", format_set(a), format_set(b)),
        SetExpr::Projection(s, a) => format!("proj{}({})", axis(a, &None), format_set(s)),
        SetExpr::BorelImage(f, s) => format!("image[{f}]({})", format_set(s)),
        SetExpr::Preimage(f, s) => format!("preimage({}, {})", format_func(f), format_set(s)),
        SetExpr::Section(s, a, p) => format!("section{}({})", axis(a, p), format_set(s)),
        SetExpr::Graph(f) => format!("graph({})", format_func(f)),
        SetExpr::Sublevel(f, c, r) => format!("sublevel({}, {}, {})", format_func(f), c.symbol(), rational(r)),
        SetExpr::MeasureThreshold(s, r) => format!("threshold({}, {})", format_set(s), rational(r)),
    }
}

pub fn format_func(e: &FuncExpr) -> String {
    let bin = |name: &str, f: &FuncExpr, g: &FuncExpr| format!("{name}({}, {})", format_func(f), format_func(g));
    match e {
        FuncExpr::Named(n) => n.clone(),
        FuncExpr::Pair(f, g) => bin("pair", f, g),
        FuncExpr::Cylinder(f, s) => format!("cyl({}, {})", format_func(f), format_space(s)),
        FuncExpr::Compose { outer, inner } => bin("compose", outer, inner),
        FuncExpr::SectionOf(f, a, p) => format!("slice{}({})", axis(a, p), format_func(f)),
        FuncExpr::Sum(f, g) => bin("sum", f, g),
        FuncExpr::Neg(f) => format!("neg({})", format_func(f)),
        FuncExpr::Mul(f, g) => bin("mul", f, g),
        FuncExpr::Min(f, g) => bin("min", f, g),
        FuncExpr::Max(f, g) => bin("max", f, g),
        FuncExpr::Inner(f, g) => bin("inner", f, g),
        FuncExpr::Power(f, a) => format!("pow({}, {})", format_func(f), rational(a)),
        FuncExpr::Countable(op, fam) => format!("{} {}", op.keyword(), family(fam, "on")),
        FuncExpr::Partial { op, func, domain } => {
            format!("p{}({}, {})", op.keyword(), format_func(func), format_set(domain))
        }
        FuncExpr::IntegralKernel(f, q) => format!("integral({}, {q})", format_func(f)),
        FuncExpr::Select(s) => format!("select({})", format_set(s)),
        FuncExpr::EpsSelector { domain, func, eps, direction } => format!(
            "epsselect({}, {}, {}, {})",
            format_set(domain),
            format_func(func),
            rational(eps),
            direction.keyword()
        ),
        FuncExpr::FromGraph(g, d) => format!("fromgraph({}, {})", format_set(g), format_set(d)),
    }
}

fn format_expr(e: &Expr) -> String {
    match e {
        Expr::Set(s) => format_set(s),
        Expr::Func(f) => format_func(f),
    }
}

fn rel(r: Rel) -> &'static str {
    match r {
        Rel::Le => "<=",
        Rel::Eq => "==",
    }
}

pub fn format_decl(decl: &Decl) -> String {
    match decl {
        Decl::Space { name, space } => format!("space {name} = {}", format_space(space)),
        Decl::Set { name, decl } => format!("set {name} in {} : {}", format_space(&decl.space), decl.class),
        Decl::Func { name, decl } => {
            let annot = match decl.annot {
                FuncAnnot::Delta(p) => format!("delta {p}"),
                FuncAnnot::Borel => "borel".into(),
                FuncAnnot::Lsa => "lsa".into(),
                FuncAnnot::Usa => "usa".into(),
            };
            let mut line = format!(
                "func {name} : {} -> {} : {annot}",
                format_space(&decl.dom),
                format_space(&decl.cod)
            );
            if decl.nonneg {
                line.push_str(" nonneg");
            }
            if let Some(d) = &decl.domain {
                line.push_str(" on ");
                line.push_str(d);
            }
            line
        }
        Decl::Kernel { name, decl } => format!(
            "kernel {name} : {} -> {} : delta {}",
            format_space(&decl.dom),
            format_space(&decl.cod),
            decl.level
        ),
        Decl::Let { name, expr } => format!("let {name} = {}", format_expr(expr)),
        Decl::Assert(a) => match a {
            Assertion::Class { set, rel: r, class } => {
                format!("assert class({}) {} {class}", format_set(set), rel(*r))
            }
            Assertion::Level { func, rel: r, level } => {
                format!("assert level({}) {} delta {level}", format_func(func), rel(*r))
            }
            Assertion::UniversallyMeasurable(e) => format!("assert um({})", format_expr(e)),
            Assertion::Blocked { expr, rule } => format!("assert blocked({}) by {rule}", format_expr(expr)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn empty_program() {
        assert_eq!(format(&Program::default()), "");
    }

    #[test]
    fn one_set_decl() {
        let p = parse("space X   = baire\nset A in X:Sigma 1   # analytic").unwrap();
        assert_eq!(format(&p), "space X = baire\nset A in X : sigma 1\n");
    }

    #[test]
    fn nested_products_round_trip() {
        let src = "space X = (baire * cantor) * reals * nat\nspace M = measures(X)\n";
        let p = parse(src).unwrap();
        assert_eq!(format(&p), "space X = (baire * cantor) * reals * nat\nspace M = measures(X)\n");
        assert_eq!(parse(&format(&p)).unwrap(), p);
    }
}
