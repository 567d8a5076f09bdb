//! Line-oriented recursive-descent parser.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::lexer::{tokenize, Spanned, Tok};
use super::{
    Assertion, Axis, Binding, Cmp, Decl, EnvError, Environment, Expr, Extremum, Family, FuncAnnot,
    FuncDecl, FuncExpr, KernelDecl, ParseError, Program, Rel, SetDecl, SetExpr, SpaceExpr,
};
use crate::derivation::RuleId;
use crate::pointclass::{Combine, Kind, LevelSchedule, PointClass};

const KEYWORDS: &[&str] = &[
    "space", "set", "func", "kernel", "let", "assert", "in", "on", "nat", "of", "with", "levels",
    "const", "bounded", "list", "unbounded", "nonneg", "sigma", "pi", "delta", "borel", "analytic",
    "lsa", "usa", "baire", "cantor", "reals", "xreal", "measures", "complement", "union", "inter",
    "prod", "proj", "image", "preimage", "section", "graph", "sublevel", "threshold", "pair", "cyl",
    "compose", "slice", "sum", "neg", "mul", "min", "max", "inner", "pow", "sup", "inf", "pinf",
    "psup", "integral", "select", "epsselect", "fromgraph", "class", "level", "um", "blocked", "by",
    "Sigma", "Pi", "Delta",
];

/// Parses `.pjc` source into a resolved, signature-checked program.
pub fn parse(text: &str) -> Result<Program, ParseError> {
    let mut env = Environment::new();
    let mut program = Program::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize(raw).map_err(|(col, msg)| ParseError::Syntax {
            line: line_no,
            col,
            expected: vec!["a token".into()],
            found: msg,
        })?;
        if tokens.len() == 1 {
            continue;
        }
        let mut p = LineParser { toks: tokens, pos: 0, line: line_no, env: &env };
        let decl = p.declaration()?;
        p.expect_end()?;
        env.declare(&decl).map_err(|e| ParseError::Resolution { line: line_no, col: 1, source: e })?;
        program.decls.push(decl);
    }
    Ok(program)
}

type PResult<T> = Result<T, ParseError>;

struct LineParser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    env: &'a Environment,
}

impl LineParser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError::Syntax {
            line: self.line,
            col: self.col(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn resolution<T>(&self, col: usize, source: EnvError) -> PResult<T> {
        Err(ParseError::Resolution { line: self.line, col, source })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let shown = tok.to_string();
            self.err(&[shown.as_str()])
        }
    }

    fn expect_end(&mut self) -> PResult<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err(&["end of line"])
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.at_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.err(&[&format!("`{kw}`")])
        }
    }

    /// A non-keyword identifier.
    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.err(&["identifier"]),
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        match self.peek() {
            Tok::Int(s) => {
                let v = s.parse().expect("lexer only yields digits");
                self.bump();
                Ok(v)
            }
            _ => self.err(&["integer"]),
        }
    }

    fn level(&mut self) -> PResult<u32> {
        let col = self.col();
        match self.peek() {
            Tok::Int(s) => match s.parse::<u64>().ok().map(crate::pointclass::checked_level) {
                Some(Ok(level)) => {
                    self.bump();
                    Ok(level)
                }
                _ => Err(ParseError::Syntax {
                    line: self.line,
                    col,
                    expected: vec!["level between 1 and 65535".into()],
                    found: format!("`{s}`"),
                }),
            },
            _ => self.err(&["level"]),
        }
    }

    fn rational(&mut self) -> PResult<BigRational> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let num = self.int()?;
        let den = if *self.peek() == Tok::Slash {
            self.bump();
            let col = self.col();
            let d = self.int()?;
            if d.is_zero() {
                return Err(ParseError::Syntax {
                    line: self.line,
                    col,
                    expected: vec!["non-zero denominator".into()],
                    found: "`0`".into(),
                });
            }
            d
        } else {
            BigInt::from(1)
        };
        let r = BigRational::new(num, den);
        Ok(if negative { -r } else { r })
    }

    fn declaration(&mut self) -> PResult<Decl> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.err(&["`space`", "`set`", "`func`", "`kernel`", "`let`", "`assert`"]),
        };
        match kw.as_str() {
            "space" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Assign)?;
                let space = self.space()?;
                Ok(Decl::Space { name, space })
            }
            "set" => {
                self.bump();
                let name = self.ident()?;
                self.expect_kw("in")?;
                let space = self.space()?;
                self.expect(Tok::Colon)?;
                let class = self.class()?;
                Ok(Decl::Set { name, decl: SetDecl { space, class } })
            }
            "func" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let dom = self.space()?;
                self.expect(Tok::Arrow)?;
                let cod = self.space()?;
                self.expect(Tok::Colon)?;
                let annot = self.func_annot()?;
                let nonneg = if self.at_kw("nonneg") {
                    self.bump();
                    true
                } else {
                    false
                };
                let domain = if self.at_kw("on") {
                    self.bump();
                    let col = self.col();
                    let d = self.ident()?;
                    let carrier = self.sig(col, |env| env.set_space(&SetExpr::Named(d.clone())))?;
                    let dom_expanded = self.sig(col, |env| Ok(env.expand(&dom)?))?;
                    if carrier != dom_expanded {
                        return Err(ParseError::Signature {
                            line: self.line,
                            col,
                            source: super::SignatureError::Mismatch {
                                context: format!("domain of {name}"),
                                expected: dom_expanded,
                                found: carrier,
                            },
                        });
                    }
                    Some(d)
                } else {
                    None
                };
                Ok(Decl::Func { name, decl: FuncDecl { dom, cod, annot, nonneg, domain } })
            }
            "kernel" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let dom = self.space()?;
                self.expect(Tok::Arrow)?;
                let cod = self.space()?;
                self.expect(Tok::Colon)?;
                let level = if self.at_kw("borel") {
                    self.bump();
                    1
                } else {
                    self.expect_kw("delta")?;
                    self.level()?
                };
                Ok(Decl::Kernel { name, decl: KernelDecl { dom, cod, level } })
            }
            "let" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Assign)?;
                let col = self.col();
                let expr = self.expr()?;
                self.sig(col, |env| env.check_expr(&expr))?;
                Ok(Decl::Let { name, expr })
            }
            "assert" => {
                self.bump();
                Ok(Decl::Assert(self.assertion()?))
            }
            _ => self.err(&["`space`", "`set`", "`func`", "`kernel`", "`let`", "`assert`"]),
        }
    }

    fn sig<T>(
        &self,
        col: usize,
        f: impl FnOnce(&Environment) -> Result<T, super::SignatureError>,
    ) -> PResult<T> {
        f(self.env).map_err(|e| match e {
            super::SignatureError::Resolution(source) => ParseError::Resolution { line: self.line, col, source },
            source => ParseError::Signature { line: self.line, col, source },
        })
    }

    fn assertion(&mut self) -> PResult<Assertion> {
        if self.at_kw("class") {
            self.bump();
            self.expect(Tok::LParen)?;
            let col = self.col();
            let set = self.set_expr()?;
            self.expect(Tok::RParen)?;
            self.sig(col, |env| env.set_space(&set))?;
            let rel = self.rel()?;
            let class = self.class()?;
            Ok(Assertion::Class { set, rel, class })
        } else if self.at_kw("level") {
            self.bump();
            self.expect(Tok::LParen)?;
            let col = self.col();
            let func = self.func_expr()?;
            self.expect(Tok::RParen)?;
            self.sig(col, |env| env.func_signature(&func))?;
            let rel = self.rel()?;
            let level = if self.at_kw("borel") {
                self.bump();
                1
            } else {
                self.expect_kw("delta")?;
                self.level()?
            };
            Ok(Assertion::Level { func, rel, level })
        } else if self.at_kw("um") {
            self.bump();
            self.expect(Tok::LParen)?;
            let col = self.col();
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            self.sig(col, |env| env.check_expr(&e))?;
            Ok(Assertion::UniversallyMeasurable(e))
        } else if self.at_kw("blocked") {
            self.bump();
            self.expect(Tok::LParen)?;
            let col = self.col();
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            self.sig(col, |env| env.check_expr(&e))?;
            self.expect_kw("by")?;
            let rule = self.rule_id()?;
            Ok(Assertion::Blocked { expr: e, rule })
        } else {
            self.err(&["`class`", "`level`", "`um`", "`blocked`"])
        }
    }

    fn rule_id(&mut self) -> PResult<String> {
        let col = self.col();
        let mut parts = Vec::new();
        loop {
            match self.peek() {
                Tok::Ident(s) => {
                    parts.push(s.clone());
                    self.bump();
                }
                _ => return self.err(&["rule id"]),
            }
            if *self.peek() == Tok::Minus {
                self.bump();
            } else {
                break;
            }
        }
        let id = parts.join("-");
        if id.parse::<RuleId>().is_err() {
            return Err(ParseError::Syntax {
                line: self.line,
                col,
                expected: vec!["rule id".into()],
                found: format!("`{id}`"),
            });
        }
        Ok(id)
    }

    fn rel(&mut self) -> PResult<Rel> {
        match self.peek() {
            Tok::Le => {
                self.bump();
                Ok(Rel::Le)
            }
            Tok::EqEq => {
                self.bump();
                Ok(Rel::Eq)
            }
            _ => self.err(&["`<=`", "`==`"]),
        }
    }

    fn class(&mut self) -> PResult<PointClass> {
        let kind = match self.peek() {
            Tok::Ident(s) if s == "borel" => {
                self.bump();
                return Ok(PointClass::BOREL);
            }
            Tok::Ident(s) if s == "analytic" => {
                self.bump();
                return Ok(PointClass::ANALYTIC);
            }
            Tok::Ident(s) if s == "sigma" || s == "Sigma" => Kind::Sigma,
            Tok::Ident(s) if s == "pi" || s == "Pi" => Kind::Pi,
            Tok::Ident(s) if s == "delta" || s == "Delta" => Kind::Delta,
            _ => return self.err(&["`sigma`", "`pi`", "`delta`", "`borel`", "`analytic`"]),
        };
        self.bump();
        let level = self.level()?;
        Ok(PointClass::new(kind, u64::from(level)).expect("level already range-checked"))
    }

    fn func_annot(&mut self) -> PResult<FuncAnnot> {
        let annot = match self.peek() {
            Tok::Ident(s) if s == "borel" => FuncAnnot::Borel,
            Tok::Ident(s) if s == "lsa" => FuncAnnot::Lsa,
            Tok::Ident(s) if s == "usa" => FuncAnnot::Usa,
            Tok::Ident(s) if s == "delta" => {
                self.bump();
                return Ok(FuncAnnot::Delta(self.level()?));
            }
            _ => return self.err(&["`delta`", "`borel`", "`lsa`", "`usa`"]),
        };
        self.bump();
        Ok(annot)
    }

    fn schedule(&mut self) -> PResult<LevelSchedule> {
        match self.peek() {
            Tok::Ident(s) if s == "const" => {
                self.bump();
                Ok(LevelSchedule::ConstantClass(self.class()?))
            }
            Tok::Ident(s) if s == "bounded" => {
                self.bump();
                Ok(LevelSchedule::BoundedBy(self.class()?))
            }
            Tok::Ident(s) if s == "list" => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let mut classes = vec![self.class()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    classes.push(self.class()?);
                }
                self.expect(Tok::RBracket)?;
                Ok(LevelSchedule::ExplicitList(classes))
            }
            Tok::Ident(s) if s == "unbounded" => {
                self.bump();
                match self.bump() {
                    Tok::Str(text) => Ok(LevelSchedule::Unbounded(text)),
                    _ => {
                        self.pos -= 1;
                        self.err(&["quoted witness"])
                    }
                }
            }
            _ => self.err(&["`const`", "`bounded`", "`list`", "`unbounded`"]),
        }
    }

    fn space(&mut self) -> PResult<SpaceExpr> {
        let left = self.space_atom()?;
        if *self.peek() == Tok::Star {
            self.bump();
            let right = self.space()?;
            Ok(SpaceExpr::product(left, right))
        } else {
            Ok(left)
        }
    }

    fn space_atom(&mut self) -> PResult<SpaceExpr> {
        let col = self.col();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let s = self.space()?;
                self.expect(Tok::RParen)?;
                Ok(s)
            }
            Tok::Ident(s) => {
                let atom = match s.as_str() {
                    "baire" => SpaceExpr::Baire,
                    "cantor" => SpaceExpr::Cantor,
                    "reals" => SpaceExpr::Reals,
                    "nat" => SpaceExpr::Naturals,
                    "xreal" => SpaceExpr::XRealLine,
                    "measures" => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let inner = self.space()?;
                        self.expect(Tok::RParen)?;
                        return Ok(SpaceExpr::MeasureSpace(Box::new(inner)));
                    }
                    _ => {
                        let name = self.ident()?;
                        if let Err(e) = self.env.space(&name) {
                            return self.resolution(col, e);
                        }
                        return Ok(SpaceExpr::Named(name));
                    }
                };
                self.bump();
                Ok(atom)
            }
            _ => self.err(&["space"]),
        }
    }

    fn axis(&mut self) -> PResult<(Axis, Option<String>)> {
        self.expect(Tok::LBracket)?;
        let col = self.col();
        let axis = match self.peek().clone() {
            Tok::Int(s) if s == "0" || s == "1" => {
                self.bump();
                Axis::Index(s.parse().expect("checked"))
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                if let Err(e) = self.env.space(&name) {
                    return self.resolution(col, e);
                }
                Axis::Space(name)
            }
            _ => return self.err(&["`0`", "`1`", "space name"]),
        };
        let point = if *self.peek() == Tok::Assign {
            self.bump();
            Some(self.ident()?)
        } else {
            None
        };
        self.expect(Tok::RBracket)?;
        Ok((axis, point))
    }

    fn family(&mut self, space_kw: &str) -> PResult<Family> {
        let index = self.ident()?;
        self.expect_kw("in")?;
        self.expect_kw("nat")?;
        self.expect_kw("of")?;
        let member = self.ident()?;
        self.expect_kw(space_kw)?;
        let space = self.space()?;
        self.expect_kw("with")?;
        self.expect_kw("levels")?;
        let schedule = self.schedule()?;
        Ok(Family { index, member, space, schedule })
    }

    fn set_expr(&mut self) -> PResult<SetExpr> {
        match self.expr()? {
            Expr::Set(s) => Ok(s),
            Expr::Func(_) => {
                self.pos = self.pos.saturating_sub(1);
                self.err(&["set expression"])
            }
        }
    }

    fn func_expr(&mut self) -> PResult<FuncExpr> {
        match self.expr()? {
            Expr::Func(f) => Ok(f),
            Expr::Set(_) => {
                self.pos = self.pos.saturating_sub(1);
                self.err(&["function expression"])
            }
        }
    }

    fn args2<A, B>(
        &mut self,
        a: impl FnOnce(&mut Self) -> PResult<A>,
        b: impl FnOnce(&mut Self) -> PResult<B>,
    ) -> PResult<(A, B)> {
        self.expect(Tok::LParen)?;
        let x = a(self)?;
        self.expect(Tok::Comma)?;
        let y = b(self)?;
        self.expect(Tok::RParen)?;
        Ok((x, y))
    }

    fn arg1<A>(&mut self, a: impl FnOnce(&mut Self) -> PResult<A>) -> PResult<A> {
        self.expect(Tok::LParen)?;
        let x = a(self)?;
        self.expect(Tok::RParen)?;
        Ok(x)
    }

    fn cmp(&mut self) -> PResult<Cmp> {
        let c = match self.peek() {
            Tok::Lt => Cmp::Lt,
            Tok::Le => Cmp::Le,
            Tok::Gt => Cmp::Gt,
            Tok::Ge => Cmp::Ge,
            _ => return self.err(&["`<`", "`<=`", "`>`", "`>=`"]),
        };
        self.bump();
        Ok(c)
    }

    fn extremum(&mut self) -> PResult<Extremum> {
        if self.at_kw("inf") {
            self.bump();
            Ok(Extremum::Inf)
        } else if self.at_kw("sup") {
            self.bump();
            Ok(Extremum::Sup)
        } else {
            self.err(&["`inf`", "`sup`"])
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let col = self.col();
        let head = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.err(&["expression"]),
        };
        if !KEYWORDS.contains(&head.as_str()) {
            self.bump();
            return match self.env.get(&head) {
                Some(Binding::Set(_)) | Some(Binding::Let(Expr::Set(_))) => Ok(Expr::Set(SetExpr::Named(head))),
                Some(Binding::Func(_)) | Some(Binding::Let(Expr::Func(_))) => Ok(Expr::Func(FuncExpr::Named(head))),
                Some(other) => self.resolution(
                    col,
                    EnvError::WrongKind { name: head.clone(), expected: "set or function", found: other.kind_name() },
                ),
                None => self.resolution(col, EnvError::Unknown(head)),
            };
        }
        self.bump();
        let set = |s: SetExpr| Ok(Expr::Set(s));
        let func = |f: FuncExpr| Ok(Expr::Func(f));
        match head.as_str() {
            "complement" => set(SetExpr::Complement(Box::new(self.arg1(Self::set_expr)?))),
            "union" | "inter" => {
                let op = if head == "union" { Combine::Union } else { Combine::Intersection };
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut items = vec![self.set_expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        items.push(self.set_expr()?);
                    }
                    self.expect(Tok::RParen)?;
                    set(SetExpr::Finite(op, items))
                } else {
                    set(SetExpr::Countable(op, self.family("in")?))
                }
            }
            "prod" => {
                let (l, r) = self.args2(Self::set_expr, Self::set_expr)?;
                set(SetExpr::Product(Box::new(l), Box::new(r)))
            }
            "proj" => {
                let (axis, point) = self.axis()?;
                if point.is_some() {
                    return self.err(&["`]`"]);
                }
                set(SetExpr::Projection(Box::new(self.arg1(Self::set_expr)?), axis))
            }
            "image" => {
                self.expect(Tok::LBracket)?;
                let fcol = self.col();
                let f = self.ident()?;
                if self.env.get(&f).is_none() {
                    return self.resolution(fcol, EnvError::Unknown(f));
                }
                self.expect(Tok::RBracket)?;
                set(SetExpr::BorelImage(f, Box::new(self.arg1(Self::set_expr)?)))
            }
            "preimage" => {
                let (f, s) = self.args2(Self::func_expr, Self::set_expr)?;
                set(SetExpr::Preimage(Box::new(f), Box::new(s)))
            }
            "section" => {
                let (axis, point) = self.axis()?;
                set(SetExpr::Section(Box::new(self.arg1(Self::set_expr)?), axis, point))
            }
            "graph" => set(SetExpr::Graph(Box::new(self.arg1(Self::func_expr)?))),
            "sublevel" => {
                self.expect(Tok::LParen)?;
                let f = self.func_expr()?;
                self.expect(Tok::Comma)?;
                let c = self.cmp()?;
                self.expect(Tok::Comma)?;
                let r = self.rational()?;
                self.expect(Tok::RParen)?;
                set(SetExpr::Sublevel(Box::new(f), c, r))
            }
            "threshold" => {
                let (s, r) = self.args2(Self::set_expr, Self::rational)?;
                set(SetExpr::MeasureThreshold(Box::new(s), r))
            }
            "pair" => {
                let (f, g) = self.args2(Self::func_expr, Self::func_expr)?;
                func(FuncExpr::Pair(Box::new(f), Box::new(g)))
            }
            "cyl" => {
                let (f, s) = self.args2(Self::func_expr, Self::space)?;
                func(FuncExpr::Cylinder(Box::new(f), s))
            }
            "compose" => {
                let (outer, inner) = self.args2(Self::func_expr, Self::func_expr)?;
                func(FuncExpr::Compose { outer: Box::new(outer), inner: Box::new(inner) })
            }
            "slice" => {
                let (axis, point) = self.axis()?;
                func(FuncExpr::SectionOf(Box::new(self.arg1(Self::func_expr)?), axis, point))
            }
            "sum" | "mul" | "min" | "max" | "inner" => {
                let (f, g) = self.args2(Self::func_expr, Self::func_expr)?;
                let (f, g) = (Box::new(f), Box::new(g));
                func(match head.as_str() {
                    "sum" => FuncExpr::Sum(f, g),
                    "mul" => FuncExpr::Mul(f, g),
                    "min" => FuncExpr::Min(f, g),
                    "max" => FuncExpr::Max(f, g),
                    _ => FuncExpr::Inner(f, g),
                })
            }
            "neg" => func(FuncExpr::Neg(Box::new(self.arg1(Self::func_expr)?))),
            "pow" => {
                let (f, a) = self.args2(Self::func_expr, Self::rational)?;
                func(FuncExpr::Power(Box::new(f), a))
            }
            "sup" | "inf" => {
                let op = if head == "sup" { Extremum::Sup } else { Extremum::Inf };
                func(FuncExpr::Countable(op, self.family("on")?))
            }
            "pinf" | "psup" => {
                let op = if head == "pinf" { Extremum::Inf } else { Extremum::Sup };
                let (f, d) = self.args2(Self::func_expr, Self::set_expr)?;
                func(FuncExpr::Partial { op, func: Box::new(f), domain: Box::new(d) })
            }
            "integral" => {
                self.expect(Tok::LParen)?;
                let f = self.func_expr()?;
                self.expect(Tok::Comma)?;
                let qcol = self.col();
                let q = self.ident()?;
                if self.env.get(&q).is_none() {
                    return self.resolution(qcol, EnvError::Unknown(q));
                }
                self.expect(Tok::RParen)?;
                func(FuncExpr::IntegralKernel(Box::new(f), q))
            }
            "select" => func(FuncExpr::Select(Box::new(self.arg1(Self::set_expr)?))),
            "epsselect" => {
                self.expect(Tok::LParen)?;
                let d = self.set_expr()?;
                self.expect(Tok::Comma)?;
                let f = self.func_expr()?;
                self.expect(Tok::Comma)?;
                let eps = self.rational()?;
                self.expect(Tok::Comma)?;
                let direction = self.extremum()?;
                self.expect(Tok::RParen)?;
                func(FuncExpr::EpsSelector { domain: Box::new(d), func: Box::new(f), eps, direction })
            }
            "fromgraph" => {
                let (g, d) = self.args2(Self::set_expr, Self::set_expr)?;
                func(FuncExpr::FromGraph(Box::new(g), Box::new(d)))
            }
            _ => {
                self.pos -= 1;
                self.err(&["expression"])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_and_set() {
        let p = parse("space X = baire\nset A in X : Sigma 1").unwrap();
        assert_eq!(p.decls.len(), 2);
        assert_eq!(
            p.decls[1],
            Decl::Set {
                name: "A".into(),
                decl: SetDecl { space: SpaceExpr::Named("X".into()), class: PointClass::ANALYTIC }
            }
        );
    }

    #[test]
    fn lsa_annotation() {
        let p = parse("space X = baire\nfunc f : X -> xreal : lsa").unwrap();
        match &p.decls[1] {
            Decl::Func { decl, .. } => assert_eq!(decl.annot, FuncAnnot::Lsa),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_is_resolution_error() {
        let err = parse("space X = baire\nlet B = proj[X](A)").unwrap_err();
        match err {
            ParseError::Resolution { line, col, source } => {
                assert_eq!((line, col), (2, 17));
                assert_eq!(source, EnvError::Unknown("A".into()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn signature_mismatch() {
        let src = "space X = baire\nspace Y = reals\nset A in X : borel\nfunc f : Y -> xreal : delta 2\nlet B = preimage(f, A)";
        assert!(matches!(parse(src).unwrap_err(), ParseError::Signature { line: 5, .. }));
    }

    #[test]
    fn duplicates_and_keywords() {
        assert!(matches!(
            parse("space X = baire\nspace X = cantor").unwrap_err(),
            ParseError::Resolution { source: EnvError::Duplicate(_), .. }
        ));
        assert!(matches!(parse("space union = baire").unwrap_err(), ParseError::Syntax { .. }));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse("space X = baire\nset A in X sigma 1").unwrap_err();
        assert_eq!(err.position(), (2, 12));
        assert!(err.to_string().contains("`:`"));
    }

    #[test]
    fn families_and_rationals() {
        let src = "space X = baire\nlet U = union i in nat of A_i in X with levels bounded delta 2\nfunc f : X -> xreal : delta 3\nlet S = sublevel(f, <=, -3/6)";
        let p = parse(src).unwrap();
        match &p.decls[3] {
            Decl::Let { expr: Expr::Set(SetExpr::Sublevel(_, Cmp::Le, r)), .. } => {
                assert_eq!(*r, BigRational::new((-1).into(), 2.into()))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn image_requires_borel() {
        let src = "space X = baire\nset A in X : sigma 2\nfunc f : X -> X : delta 2\nlet B = image[f](A)";
        assert!(matches!(parse(src).unwrap_err(), ParseError::Signature { .. }));
    }

    #[test]
    fn blocked_rule_must_exist() {
        let src = "space X = baire\nset A in X : sigma 2\nassert blocked(A) by F-NOPE";
        assert!(matches!(parse(src).unwrap_err(), ParseError::Syntax { line: 3, .. }));
    }
}
