//! A small predicate language over plays.
//!
//! ```text
//! a0 == b0 && (sum % 2 == 1 || !(m3 < 2))
//! ```
//!
//! `mI` is the `I`-th move of the play, `aI` Player I's `I`-th move (`m(2I)`),
//! `bI` Player II's (`m(2I+1)`), `sum` the sum of all moves. Integers support
//! `+ - * %`; `x % 0` is `0`. Comparisons yield booleans, combined with
//! `! && ||`. The whole predicate must be boolean.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("predicate column {col}: {message}")]
pub struct PredicateError {
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Int(i64),
    Move(usize),
    Sum,
    Not(Box<Node>),
    NegI(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Rem,
}

impl Op {
    fn precedence(self) -> u8 {
        match self {
            Op::Or => 1,
            Op::And => 2,
            Op::Eq | Op::Ne | Op::Lt | Op::Le | Op::Gt | Op::Ge => 3,
            Op::Add | Op::Sub => 4,
            Op::Mul | Op::Rem => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
}

/// A parsed, type-checked predicate over plays of a fixed length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    source: String,
    root: Node,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(&'static str),
    Open,
    Close,
}

const SYMBOLS: [&str; 16] = ["||", "&&", "==", "!=", "<=", ">=", "<", ">", "+", "-", "*", "%", "!", "(", ")", "="];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PredicateError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse()
                .map_err(|_| PredicateError { col, message: "integer literal too large".into() })?;
            out.push((col, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((col, Tok::Ident(text[start..i].to_string())));
        } else {
            let sym = SYMBOLS
                .iter()
                .find(|s| text[i..].starts_with(**s))
                .ok_or_else(|| PredicateError { col, message: format!("unexpected character `{}`", c as char) })?;
            if *sym == "=" {
                return Err(PredicateError { col, message: "use `==` for equality".into() });
            }
            i += sym.len();
            out.push((
                col,
                match *sym {
                    "(" => Tok::Open,
                    ")" => Tok::Close,
                    s => Tok::Op(s),
                },
            ));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    len: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PredicateError> {
        Err(PredicateError { col: self.col(), message: message.into() })
    }

    fn binop(&self) -> Option<Op> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Op(s))) => Some(match *s {
                "||" => Op::Or,
                "&&" => Op::And,
                "==" => Op::Eq,
                "!=" => Op::Ne,
                "<" => Op::Lt,
                "<=" => Op::Le,
                ">" => Op::Gt,
                ">=" => Op::Ge,
                "+" => Op::Add,
                "-" => Op::Sub,
                "*" => Op::Mul,
                "%" => Op::Rem,
                _ => return None,
            }),
            _ => None,
        }
    }

    fn expr(&mut self, min: u8) -> Result<(Node, Ty), PredicateError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop() {
            if op.precedence() < min {
                break;
            }
            let col = self.col();
            self.pos += 1;
            let rhs = self.expr(op.precedence() + 1)?;
            let (want, out) = match op {
                Op::Or | Op::And => (Ty::Bool, Ty::Bool),
                Op::Eq | Op::Ne | Op::Lt | Op::Le | Op::Gt | Op::Ge => (Ty::Int, Ty::Bool),
                _ => (Ty::Int, Ty::Int),
            };
            if lhs.1 != want || rhs.1 != want {
                return Err(PredicateError { col, message: format!("operator needs {want:?} operands") });
            }
            // Comparisons do not chain.
            if out == Ty::Bool && want == Ty::Int && matches!(self.binop(), Some(o) if o.precedence() == 3) {
                return self.err("comparisons do not chain");
            }
            lhs = (Node::Bin(op, Box::new(lhs.0), Box::new(rhs.0)), out);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<(Node, Ty), PredicateError> {
        let col = self.col();
        let Some((_, tok)) = self.toks.get(self.pos) else { return self.err("unexpected end of predicate") };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok((Node::Int(*n), Ty::Int)),
            Tok::Op("!") => match self.unary()? {
                (n, Ty::Bool) => Ok((Node::Not(Box::new(n)), Ty::Bool)),
                _ => Err(PredicateError { col, message: "`!` needs a boolean".into() }),
            },
            Tok::Op("-") => match self.unary()? {
                (n, Ty::Int) => Ok((Node::NegI(Box::new(n)), Ty::Int)),
                _ => Err(PredicateError { col, message: "`-` needs an integer".into() }),
            },
            Tok::Open => {
                let inner = self.expr(0)?;
                match self.toks.get(self.pos) {
                    Some((_, Tok::Close)) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Tok::Ident(name) => self.ident(name, col),
            _ => Err(PredicateError { col, message: "expected a value".into() }),
        }
    }

    fn ident(&self, name: &str, col: usize) -> Result<(Node, Ty), PredicateError> {
        let bad = |m: String| Err(PredicateError { col, message: m });
        match name {
            "sum" => return Ok((Node::Sum, Ty::Int)),
            "true" => return Ok((Node::Bin(Op::Eq, Box::new(Node::Int(0)), Box::new(Node::Int(0))), Ty::Bool)),
            "false" => return Ok((Node::Bin(Op::Ne, Box::new(Node::Int(0)), Box::new(Node::Int(0))), Ty::Bool)),
            _ => {}
        }
        let (head, digits) = name.split_at(1);
        let Ok(i) = digits.parse::<usize>() else { return bad(format!("unknown name `{name}`")) };
        let index = match head {
            "m" => Some(i),
            "a" => i.checked_mul(2),
            "b" => i.checked_mul(2).and_then(|j| j.checked_add(1)),
            _ => return bad(format!("unknown name `{name}`")),
        };
        match index {
            Some(j) if j < self.len => Ok((Node::Move(j), Ty::Int)),
            _ => bad(format!("`{name}` is beyond a play of length {}", self.len)),
        }
    }
}

fn eval(n: &Node, play: &[u32]) -> i64 {
    match n {
        Node::Int(v) => *v,
        Node::Move(i) => i64::from(play[*i]),
        Node::Sum => play.iter().map(|m| i64::from(*m)).sum(),
        Node::Not(a) => i64::from(eval(a, play) == 0),
        Node::NegI(a) => eval(a, play).wrapping_neg(),
        Node::Bin(op, a, b) => {
            let x = eval(a, play);
            if *op == Op::And && x == 0 {
                return 0;
            }
            if *op == Op::Or && x != 0 {
                return 1;
            }
            let y = eval(b, play);
            match op {
                Op::Or | Op::And => i64::from(y != 0),
                Op::Eq => i64::from(x == y),
                Op::Ne => i64::from(x != y),
                Op::Lt => i64::from(x < y),
                Op::Le => i64::from(x <= y),
                Op::Gt => i64::from(x > y),
                Op::Ge => i64::from(x >= y),
                Op::Add => x.wrapping_add(y),
                Op::Sub => x.wrapping_sub(y),
                Op::Mul => x.wrapping_mul(y),
                Op::Rem => x.checked_rem(y).unwrap_or(0),
            }
        }
    }
}

impl Predicate {
    /// Parses a predicate for plays of `len` moves.
    pub fn parse(text: &str, len: usize) -> Result<Predicate, PredicateError> {
        let toks = lex(text)?;
        let mut p = Parser { toks: &toks, pos: 0, len, end_col: text.len() + 1 };
        let (root, ty) = p.expr(0)?;
        if p.pos < toks.len() {
            return p.err("unexpected trailing input");
        }
        if ty != Ty::Bool {
            return Err(PredicateError { col: 1, message: "predicate must be boolean".into() });
        }
        Ok(Predicate { source: text.to_string(), root })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn holds(&self, play: &[u32]) -> bool {
        eval(&self.root, play) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates() {
        let p = Predicate::parse("a0 == b0", 2).unwrap();
        assert!(p.holds(&[1, 1]));
        assert!(!p.holds(&[0, 1]));
        let q = Predicate::parse("sum % 2 == 1 || !(m1 < 1) && true", 4).unwrap();
        assert!(q.holds(&[1, 0, 0, 0]));
        assert!(q.holds(&[0, 1, 0, 0]));
        assert!(!q.holds(&[0, 0, 1, 1]));
        assert!(Predicate::parse("-m0 + 3 * 2 == 6", 2).unwrap().holds(&[0, 5]));
        assert!(Predicate::parse("m0 % 0 == 0", 2).unwrap().holds(&[3, 0]));
    }

    #[test]
    fn rejects() {
        assert!(Predicate::parse("a0", 2).is_err());
        assert!(Predicate::parse("b1 == 0", 2).is_err());
        assert!(Predicate::parse("a0 = 1", 2).is_err());
        assert!(Predicate::parse("0 < m0 < 2", 2).is_err());
        assert!(Predicate::parse("(a0 == 1", 2).is_err());
        assert!(Predicate::parse("x0 == 1", 2).is_err());
        let e = Predicate::parse("a0 == 1 &&", 2).unwrap_err();
        assert_eq!(e.col, 11);
    }
}
