//! Extended reals with the conventions `−∞ + ∞ = ∞ − ∞ = −∞` and
//! `0 · (±∞) = 0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Variant order gives the total order `−∞ < q < +∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum XReal {
    NegInf,
    Fin(BigRational),
    PosInf,
}

impl XReal {
    pub fn zero() -> Self {
        XReal::Fin(BigRational::zero())
    }

    pub fn int(n: i64) -> Self {
        XReal::Fin(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        XReal::Fin(BigRational::new(n.into(), d.into()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, XReal::Fin(_))
    }

    /// `f⁺ = max(f, 0)`.
    pub fn pos_part(&self) -> XReal {
        self.clone().max(XReal::zero())
    }

    /// `f⁻ = max(−f, 0)`.
    pub fn neg_part(&self) -> XReal {
        xreal_neg(self).max(XReal::zero())
    }
}

impl From<BigRational> for XReal {
    fn from(q: BigRational) -> Self {
        XReal::Fin(q)
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XReal::NegInf => f.write_str("-inf"),
            XReal::PosInf => f.write_str("+inf"),
            XReal::Fin(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not an extended real: `{0}`")]
pub struct BadXReal(pub String);

/// Parses an exact rational `n` or `n/d`, with optional sign.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl FromStr for XReal {
    type Err = BadXReal;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "-inf" => Ok(XReal::NegInf),
            "+inf" | "inf" => Ok(XReal::PosInf),
            other => parse_rational(other).map(XReal::Fin).ok_or_else(|| BadXReal(s.to_string())),
        }
    }
}

impl From<XReal> for String {
    fn from(x: XReal) -> String {
        x.to_string()
    }
}

impl TryFrom<String> for XReal {
    type Error = BadXReal;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// `−∞` absorbs everything, then `+∞`; otherwise the exact sum.
pub fn xreal_sum(values: &[XReal]) -> XReal {
    if values.contains(&XReal::NegInf) {
        return XReal::NegInf;
    }
    if values.contains(&XReal::PosInf) {
        return XReal::PosInf;
    }
    let mut total = BigRational::zero();
    for v in values {
        if let XReal::Fin(q) = v {
            total += q;
        }
    }
    XReal::Fin(total)
}

pub fn xreal_add(a: &XReal, b: &XReal) -> XReal {
    xreal_sum(&[a.clone(), b.clone()])
}

/// `a − b = a + (−b)`, so `∞ − ∞ = −∞`.
pub fn xreal_sub(a: &XReal, b: &XReal) -> XReal {
    xreal_add(a, &xreal_neg(b))
}

pub fn xreal_neg(a: &XReal) -> XReal {
    match a {
        XReal::NegInf => XReal::PosInf,
        XReal::PosInf => XReal::NegInf,
        XReal::Fin(q) => XReal::Fin(-q),
    }
}

/// Sign rules, with `0 · (±∞) = (±∞) · 0 = 0`.
pub fn xreal_prod(a: &XReal, b: &XReal) -> XReal {
    let sign = |x: &XReal| match x {
        XReal::NegInf => -1,
        XReal::PosInf => 1,
        XReal::Fin(q) if q.is_zero() => 0,
        XReal::Fin(q) if q.is_negative() => -1,
        XReal::Fin(_) => 1,
    };
    match (a, b) {
        (XReal::Fin(x), XReal::Fin(y)) => XReal::Fin(x * y),
        _ => match sign(a) * sign(b) {
            0 => XReal::zero(),
            1 => XReal::PosInf,
            _ => XReal::NegInf,
        },
    }
}

/// `I⁺ = Σ p(x) f⁺(x)` and `I⁻ = Σ p(x) f⁻(x)`.
fn parts(f: &[XReal], p: &[BigRational]) -> (XReal, XReal) {
    assert_eq!(f.len(), p.len(), "function and measure must share atoms");
    let mut plus = Vec::with_capacity(f.len());
    let mut minus = Vec::with_capacity(f.len());
    for (v, w) in f.iter().zip(p) {
        let w = XReal::Fin(w.clone());
        plus.push(xreal_prod(&w, &v.pos_part()));
        minus.push(xreal_prod(&w, &v.neg_part()));
    }
    (xreal_sum(&plus), xreal_sum(&minus))
}

/// The `(−∞)` integral: `I⁺ − I⁻` when either part is finite, `−∞` otherwise.
pub fn integral_minus(f: &[XReal], p: &[BigRational]) -> XReal {
    let (plus, minus) = parts(f, p);
    if plus.is_finite() || minus.is_finite() {
        xreal_sub(&plus, &minus)
    } else {
        XReal::NegInf
    }
}

/// The `(+∞)` integral: `I⁺ − I⁻` when either part is finite, `+∞` otherwise.
pub fn integral_plus(f: &[XReal], p: &[BigRational]) -> XReal {
    let (plus, minus) = parts(f, p);
    if plus.is_finite() || minus.is_finite() {
        xreal_sub(&plus, &minus)
    } else {
        XReal::PosInf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn conventions() {
        assert_eq!(xreal_sum(&[XReal::PosInf, XReal::NegInf]), XReal::NegInf);
        assert_eq!(xreal_sub(&XReal::PosInf, &XReal::PosInf), XReal::NegInf);
        assert_eq!(xreal_prod(&XReal::zero(), &XReal::PosInf), XReal::zero());
        assert_eq!(xreal_prod(&XReal::NegInf, &XReal::zero()), XReal::zero());
        assert_eq!(xreal_prod(&XReal::int(-2), &XReal::NegInf), XReal::PosInf);
        assert_eq!(xreal_sum(&[XReal::ratio(1, 2), XReal::ratio(1, 3)]), XReal::ratio(5, 6));
        assert_eq!(xreal_sum(&[]), XReal::zero());
    }

    #[test]
    fn order_and_parsing() {
        assert!(XReal::NegInf < XReal::int(-100));
        assert!(XReal::int(100) < XReal::PosInf);
        assert_eq!("-3/6".parse::<XReal>().unwrap(), XReal::ratio(-1, 2));
        assert_eq!("+inf".parse::<XReal>().unwrap(), XReal::PosInf);
        assert!("1/0".parse::<XReal>().is_err());
        assert_eq!(XReal::ratio(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn integrals() {
        let p = vec![half(), half()];
        assert_eq!(integral_minus(&[XReal::int(2), XReal::int(2)], &p), XReal::int(2));
        let both = [XReal::PosInf, XReal::NegInf];
        assert_eq!(integral_minus(&both, &p), XReal::NegInf);
        assert_eq!(integral_plus(&both, &p), XReal::PosInf);
        let one = [XReal::PosInf, XReal::int(1)];
        assert_eq!(integral_minus(&one, &p), XReal::PosInf);
        assert_eq!(integral_plus(&one, &p), XReal::PosInf);
        // Null atoms contribute nothing even when infinite.
        let q = vec![BigRational::zero(), BigRational::from_integer(1.into())];
        assert_eq!(integral_minus(&[XReal::NegInf, XReal::int(3)], &q), XReal::int(3));
    }
}
