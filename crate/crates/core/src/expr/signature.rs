//! Space signatures of set and function expressions.

use num_traits::Zero;
use thiserror::Error;

use super::{Axis, EnvError, Environment, Expr, FuncAnnot, FuncExpr, SetExpr, SpaceExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error(transparent)]
    Resolution(#[from] EnvError),
    #[error("{context}: expected space {expected}, found {found}")]
    Mismatch { context: String, expected: SpaceExpr, found: SpaceExpr },
    #[error("{context}: expected a product space, found {found}")]
    NotProduct { context: String, found: SpaceExpr },
    #[error("axis {axis} does not name a factor of {space}")]
    BadAxis { axis: String, space: SpaceExpr },
    #[error("{context}: expected a real-valued function, codomain is {found}")]
    NotNumeric { context: String, found: SpaceExpr },
    #[error("image[{0}] needs a Borel function")]
    NotBorel(String),
    #[error("{0} must be strictly positive")]
    NotPositive(&'static str),
}

type Sig<T> = Result<T, SignatureError>;

fn is_numeric(space: &SpaceExpr) -> bool {
    matches!(space, SpaceExpr::Reals | SpaceExpr::XRealLine)
}

fn is_numeric_vector(space: &SpaceExpr) -> bool {
    match space {
        SpaceExpr::Product(l, r) => is_numeric_vector(l) && is_numeric_vector(r),
        other => is_numeric(other),
    }
}

fn split_product(context: &str, space: SpaceExpr) -> Sig<(SpaceExpr, SpaceExpr)> {
    match space {
        SpaceExpr::Product(l, r) => Ok((*l, *r)),
        found => Err(SignatureError::NotProduct { context: context.to_string(), found }),
    }
}

fn expect_eq(context: &str, expected: &SpaceExpr, found: &SpaceExpr) -> Sig<()> {
    if expected == found {
        Ok(())
    } else {
        Err(SignatureError::Mismatch {
            context: context.to_string(),
            expected: expected.clone(),
            found: found.clone(),
        })
    }
}

fn numeric_join(context: &str, a: &SpaceExpr, b: &SpaceExpr) -> Sig<SpaceExpr> {
    for s in [a, b] {
        if !is_numeric(s) {
            return Err(SignatureError::NotNumeric { context: context.to_string(), found: s.clone() });
        }
    }
    Ok(if *a == SpaceExpr::Reals && *b == SpaceExpr::Reals {
        SpaceExpr::Reals
    } else {
        SpaceExpr::XRealLine
    })
}

impl Environment {
    /// Index (0 = left, 1 = right) of the factor `axis` names in `product`.
    pub fn resolve_axis(&self, left: &SpaceExpr, right: &SpaceExpr, axis: &Axis) -> Sig<usize> {
        let bad = || SignatureError::BadAxis {
            axis: match axis {
                Axis::Index(i) => i.to_string(),
                Axis::Space(s) => s.clone(),
            },
            space: SpaceExpr::product(left.clone(), right.clone()),
        };
        match axis {
            Axis::Index(i) if *i <= 1 => Ok(usize::from(*i)),
            Axis::Index(_) => Err(bad()),
            Axis::Space(name) => {
                let named = self.expand(&SpaceExpr::Named(name.clone()))?;
                if named == *left {
                    Ok(0)
                } else if named == *right {
                    Ok(1)
                } else {
                    Err(bad())
                }
            }
        }
    }

    /// Fully expanded carrier space of a set expression.
    pub fn set_space(&self, e: &SetExpr) -> Sig<SpaceExpr> {
        match e {
            SetExpr::Named(name) => match self.lookup(name)? {
                super::Binding::Set(d) => Ok(self.expand(&d.space)?),
                super::Binding::Let(Expr::Set(inner)) => self.set_space(inner),
                other => Err(EnvError::WrongKind {
                    name: name.clone(),
                    expected: "set",
                    found: other.kind_name(),
                }
                .into()),
            },
            SetExpr::Complement(inner) => self.set_space(inner),
            SetExpr::Countable(_, family) => Ok(self.expand(&family.space)?),
            SetExpr::Finite(_, items) => {
                let mut spaces = items.iter().map(|s| self.set_space(s));
                let first = spaces.next().expect("parser rejects empty lists")?;
                for s in spaces {
                    expect_eq("finite union/intersection", &first, &s?)?;
                }
                Ok(first)
            }
            SetExpr::Product(a, b) => Ok(SpaceExpr::product(self.set_space(a)?, self.set_space(b)?)),
            SetExpr::Projection(inner, axis) => {
                let (l, r) = split_product("proj", self.set_space(inner)?)?;
                Ok(if self.resolve_axis(&l, &r, axis)? == 0 { l } else { r })
            }
            SetExpr::BorelImage(f, inner) => {
                let decl = self.func_decl(f).ok_or_else(|| match self.get(f) {
                    Some(b) => SignatureError::from(EnvError::WrongKind {
                        name: f.clone(),
                        expected: "declared function",
                        found: b.kind_name(),
                    }),
                    None => EnvError::Unknown(f.clone()).into(),
                })?;
                if !matches!(decl.annot, FuncAnnot::Borel | FuncAnnot::Delta(1)) || decl.domain.is_some() {
                    return Err(SignatureError::NotBorel(f.clone()));
                }
                expect_eq("image", &self.expand(&decl.dom)?, &self.set_space(inner)?)?;
                Ok(self.expand(&decl.cod)?)
            }
            SetExpr::Preimage(func, inner) => {
                let (dom, cod) = self.func_signature(func)?;
                expect_eq("preimage", &cod, &self.set_space(inner)?)?;
                Ok(dom)
            }
            SetExpr::Section(inner, axis, _) => {
                let (l, r) = split_product("section", self.set_space(inner)?)?;
                Ok(if self.resolve_axis(&l, &r, axis)? == 0 { r } else { l })
            }
            SetExpr::Graph(func) => {
                let (dom, cod) = self.func_signature(func)?;
                Ok(SpaceExpr::product(dom, cod))
            }
            SetExpr::Sublevel(func, _, _) => {
                let (dom, cod) = self.func_signature(func)?;
                if !is_numeric(&cod) {
                    return Err(SignatureError::NotNumeric { context: "sublevel".into(), found: cod });
                }
                Ok(dom)
            }
            SetExpr::MeasureThreshold(inner, _) => {
                Ok(SpaceExpr::MeasureSpace(Box::new(self.set_space(inner)?)))
            }
        }
    }

    /// Fully expanded `(domain space, codomain space)` of a function expression.
    pub fn func_signature(&self, e: &FuncExpr) -> Sig<(SpaceExpr, SpaceExpr)> {
        match e {
            FuncExpr::Named(name) => match self.lookup(name)? {
                super::Binding::Func(d) => Ok((self.expand(&d.dom)?, self.expand(&d.cod)?)),
                super::Binding::Let(Expr::Func(inner)) => self.func_signature(inner),
                other => Err(EnvError::WrongKind {
                    name: name.clone(),
                    expected: "function",
                    found: other.kind_name(),
                }
                .into()),
            },
            FuncExpr::Pair(f, g) => {
                let (df, cf) = self.func_signature(f)?;
                let (dg, cg) = self.func_signature(g)?;
                expect_eq("pair", &df, &dg)?;
                Ok((df, SpaceExpr::product(cf, cg)))
            }
            FuncExpr::Cylinder(f, extra) => {
                let (d, c) = self.func_signature(f)?;
                Ok((SpaceExpr::product(d, self.expand(extra)?), c))
            }
            FuncExpr::Compose { outer, inner } => {
                let (d_out, c_out) = self.func_signature(outer)?;
                let (d_in, c_in) = self.func_signature(inner)?;
                expect_eq("compose", &d_out, &c_in)?;
                Ok((d_in, c_out))
            }
            FuncExpr::SectionOf(f, axis, _) => {
                let (d, c) = self.func_signature(f)?;
                let (l, r) = split_product("slice", d)?;
                let free = if self.resolve_axis(&l, &r, axis)? == 0 { r } else { l };
                Ok((free, c))
            }
            FuncExpr::Sum(f, g) | FuncExpr::Mul(f, g) | FuncExpr::Min(f, g) | FuncExpr::Max(f, g) => {
                let (df, cf) = self.func_signature(f)?;
                let (dg, cg) = self.func_signature(g)?;
                expect_eq("arithmetic", &df, &dg)?;
                Ok((df, numeric_join("arithmetic", &cf, &cg)?))
            }
            FuncExpr::Neg(f) => {
                let (d, c) = self.func_signature(f)?;
                Ok((d.clone(), numeric_join("neg", &c, &c)?))
            }
            FuncExpr::Inner(f, g) => {
                let (df, cf) = self.func_signature(f)?;
                let (dg, cg) = self.func_signature(g)?;
                expect_eq("inner", &df, &dg)?;
                expect_eq("inner", &cf, &cg)?;
                if !is_numeric_vector(&cf) {
                    return Err(SignatureError::NotNumeric { context: "inner".into(), found: cf });
                }
                Ok((df, SpaceExpr::Reals))
            }
            FuncExpr::Power(f, a) => {
                if *a <= num_rational::BigRational::zero() {
                    return Err(SignatureError::NotPositive("exponent"));
                }
                let (d, c) = self.func_signature(f)?;
                Ok((d, numeric_join("pow", &c, &c)?))
            }
            FuncExpr::Countable(_, family) => Ok((self.expand(&family.space)?, SpaceExpr::XRealLine)),
            FuncExpr::Partial { func, domain, .. } => {
                let (d, c) = self.func_signature(func)?;
                if !is_numeric(&c) {
                    return Err(SignatureError::NotNumeric { context: "partial extremum".into(), found: c });
                }
                expect_eq("partial extremum domain", &d, &self.set_space(domain)?)?;
                let (x, _) = split_product("partial extremum", d)?;
                Ok((x, SpaceExpr::XRealLine))
            }
            FuncExpr::IntegralKernel(f, q) => {
                let kernel = self.kernel_decl(q).ok_or_else(|| match self.get(q) {
                    Some(b) => SignatureError::from(EnvError::WrongKind {
                        name: q.clone(),
                        expected: "kernel",
                        found: b.kind_name(),
                    }),
                    None => EnvError::Unknown(q.clone()).into(),
                })?;
                let (d, c) = self.func_signature(f)?;
                if !is_numeric(&c) {
                    return Err(SignatureError::NotNumeric { context: "integral".into(), found: c });
                }
                let x = self.expand(&kernel.dom)?;
                let y = self.expand(&kernel.cod)?;
                expect_eq("integral", &SpaceExpr::product(x.clone(), y), &d)?;
                Ok((x, SpaceExpr::XRealLine))
            }
            FuncExpr::Select(set) => split_product("select", self.set_space(set)?),
            FuncExpr::EpsSelector { domain, func, eps, .. } => {
                if *eps <= num_rational::BigRational::zero() {
                    return Err(SignatureError::NotPositive("epsilon"));
                }
                let space = self.set_space(domain)?;
                let (d, c) = self.func_signature(func)?;
                if !is_numeric(&c) {
                    return Err(SignatureError::NotNumeric { context: "epsselect".into(), found: c });
                }
                expect_eq("epsselect", &space, &d)?;
                split_product("epsselect", space)
            }
            FuncExpr::FromGraph(graph, domain) => {
                let (x, y) = split_product("fromgraph", self.set_space(graph)?)?;
                expect_eq("fromgraph domain", &x, &self.set_space(domain)?)?;
                Ok((x, y))
            }
        }
    }

    pub fn check_expr(&self, e: &Expr) -> Sig<()> {
        match e {
            Expr::Set(s) => self.set_space(s).map(|_| ()),
            Expr::Func(f) => self.func_signature(f).map(|_| ()),
        }
    }
}
