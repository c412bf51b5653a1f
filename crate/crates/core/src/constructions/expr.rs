use std::fmt;

use crate::error::{Error, Result};
use crate::spaces::Field;

/// Abstract syntax of a space expression.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceExpr {
    Linf(usize),
    L1(usize),
    Lp(usize, f64),
    Hilbert(usize, Field),
    /// Ball = convex hull of the `2n`-th roots of unity.
    Polygon(usize),
    /// `{(a, b, c) in l_inf^3 : a + b + c = 0}`.
    HexQuot,
    SumInf(Box<SpaceExpr>, Box<SpaceExpr>),
    Sum1(Box<SpaceExpr>, Box<SpaceExpr>),
    Dual(Box<SpaceExpr>),
    /// Common kernel of the listed functionals.
    Ker(Box<SpaceExpr>, Vec<Vec<f64>>),
    /// Three copies of `C({1..N, inf})` with the limit coordinates summing to 0.
    XTrunc(usize),
    /// Three copies of `C({1..N, inf})` with the first coordinates summing to 0.
    X2Trunc(usize),
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Linf(n) => write!(f, "linf({n})"),
            SpaceExpr::L1(n) => write!(f, "l1({n})"),
            SpaceExpr::Lp(n, p) => write!(f, "lp({n}, {p})"),
            SpaceExpr::Hilbert(n, Field::Real) => write!(f, "hilbert({n}, real)"),
            SpaceExpr::Hilbert(n, Field::Complex) => write!(f, "hilbert({n}, complex)"),
            SpaceExpr::Polygon(n) => write!(f, "polygon({n})"),
            SpaceExpr::HexQuot => write!(f, "hexquot"),
            SpaceExpr::SumInf(a, b) => write!(f, "sum_inf({a}, {b})"),
            SpaceExpr::Sum1(a, b) => write!(f, "sum_1({a}, {b})"),
            SpaceExpr::Dual(e) => write!(f, "dual({e})"),
            SpaceExpr::Ker(e, fs) => {
                write!(f, "ker({e}; ")?;
                for (i, v) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "[")?;
                    for (j, x) in v.iter().enumerate() {
                        if j > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{x}")?;
                    }
                    write!(f, "]")?;
                }
                write!(f, ")")
            }
            SpaceExpr::XTrunc(n) => write!(f, "xtrunc({n})"),
            SpaceExpr::X2Trunc(n) => write!(f, "x2trunc({n})"),
        }
    }
}

impl std::str::FromStr for SpaceExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_space_expr(s)
    }
}

/// Parses the space-expression grammar, e.g. `sum_inf(linf(2), polygon(3))`
/// or `ker(linf(3); [1, 1, 1])`. Whitespace between tokens is ignored.
pub fn parse_space_expr(text: &str) -> Result<SpaceExpr> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: msg.into(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<(usize, &str)> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a space constructor"));
        }
        Ok((start, std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")))
    }

    fn token(&mut self, allowed: impl Fn(u8) -> bool) -> (usize, &str) {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && allowed(self.s[self.pos]) {
            self.pos += 1;
        }
        (start, std::str::from_utf8(&self.s[start..self.pos]).expect("ascii"))
    }

    fn int(&mut self) -> Result<usize> {
        let (start, tok) = self.token(|c| c.is_ascii_digit());
        tok.parse().map_err(|_| Error::Parse {
            offset: start,
            message: "expected an integer".into(),
        })
    }

    fn float(&mut self) -> Result<f64> {
        let (start, tok) = self.token(|c| c.is_ascii_digit() || matches!(c, b'.' | b'-' | b'+' | b'e' | b'E'));
        tok.parse().map_err(|_| Error::Parse {
            offset: start,
            message: "expected a number".into(),
        })
    }

    fn vector(&mut self) -> Result<Vec<f64>> {
        self.eat(b'[')?;
        let mut v = vec![self.float()?];
        loop {
            self.ws();
            if self.s.get(self.pos) == Some(&b',') {
                self.pos += 1;
                v.push(self.float()?);
            } else {
                self.eat(b']')?;
                return Ok(v);
            }
        }
    }

    fn expr(&mut self) -> Result<SpaceExpr> {
        let (start, name) = self.ident()?;
        let name = name.to_string();
        let e = match name.as_str() {
            "hexquot" => SpaceExpr::HexQuot,
            "linf" | "l1" | "polygon" | "xtrunc" | "x2trunc" => {
                self.eat(b'(')?;
                let n = self.int()?;
                self.eat(b')')?;
                match name.as_str() {
                    "linf" => SpaceExpr::Linf(positive(n, "linf")?),
                    "l1" => SpaceExpr::L1(positive(n, "l1")?),
                    "polygon" if n < 2 => return Err(Error::Semantic(format!("polygon needs n >= 2, got {n}"))),
                    "polygon" => SpaceExpr::Polygon(n),
                    "xtrunc" => SpaceExpr::XTrunc(positive(n, "xtrunc")?),
                    _ => SpaceExpr::X2Trunc(positive(n, "x2trunc")?),
                }
            }
            "lp" => {
                self.eat(b'(')?;
                let n = self.int()?;
                self.eat(b',')?;
                let p = self.float()?;
                self.eat(b')')?;
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(Error::Semantic(format!("lp needs a finite p >= 1, got {p}")));
                }
                SpaceExpr::Lp(positive(n, "lp")?, p)
            }
            "hilbert" => {
                self.eat(b'(')?;
                let n = self.int()?;
                self.eat(b',')?;
                let (fstart, field) = self.ident()?;
                let field = match field {
                    "real" => Field::Real,
                    "complex" => Field::Complex,
                    _ => {
                        return Err(Error::Parse {
                            offset: fstart,
                            message: "expected 'real' or 'complex'".into(),
                        })
                    }
                };
                self.eat(b')')?;
                SpaceExpr::Hilbert(positive(n, "hilbert")?, field)
            }
            "sum_inf" | "sum_1" => {
                self.eat(b'(')?;
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                self.eat(b')')?;
                if name == "sum_inf" {
                    SpaceExpr::SumInf(Box::new(a), Box::new(b))
                } else {
                    SpaceExpr::Sum1(Box::new(a), Box::new(b))
                }
            }
            "dual" => {
                self.eat(b'(')?;
                let a = self.expr()?;
                self.eat(b')')?;
                SpaceExpr::Dual(Box::new(a))
            }
            "ker" => {
                self.eat(b'(')?;
                let a = self.expr()?;
                self.eat(b';')?;
                let mut fs = vec![self.vector()?];
                loop {
                    self.ws();
                    if self.s.get(self.pos) == Some(&b',') {
                        self.pos += 1;
                        fs.push(self.vector()?);
                    } else {
                        self.eat(b')')?;
                        break;
                    }
                }
                if fs.iter().any(|f| f.len() != fs[0].len()) {
                    return Err(Error::Semantic("ker functionals have different lengths".into()));
                }
                SpaceExpr::Ker(Box::new(a), fs)
            }
            _ => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unknown constructor '{name}'"),
                })
            }
        };
        Ok(e)
    }
}

fn positive(n: usize, what: &str) -> Result<usize> {
    if n == 0 {
        Err(Error::Semantic(format!("{what} needs a positive size")))
    } else {
        Ok(n)
    }
}
