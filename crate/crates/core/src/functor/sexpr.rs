//! Minimal s-expressions: atoms and parenthesised lists.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn parse(src: &str) -> Result<Sexp> {
        let mut p = Parser { s: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse { pos: p.pos, msg: "trailing input".into() });
        }
        Ok(e)
    }

    pub fn atom(s: impl Into<String>) -> Sexp {
        Sexp::Atom(s.into())
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List(items)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }

    pub fn as_usize(&self) -> Result<usize> {
        self.as_atom()
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| Error::Expr(format!("expected a nonnegative integer, got {self}")))
    }

    pub fn as_i64(&self) -> Result<i64> {
        self.as_atom()
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| Error::Expr(format!("expected an integer, got {self}")))
    }

    /// `(head args...)` split into head atom and arguments.
    pub fn head(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(v) => v.first().and_then(|h| h.as_atom()).map(|h| (h, &v[1..])),
            Sexp::Atom(_) => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => write!(f, "{a}"),
            Sexp::List(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Sexp> {
        self.skip_ws();
        match self.s.get(self.pos) {
            None => Err(Error::Parse { pos: self.pos, msg: "unexpected end of input".into() }),
            Some(b'(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.s.get(self.pos) {
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items));
                        }
                        None => return Err(Error::Parse { pos: self.pos, msg: "unclosed list".into() }),
                        _ => items.push(self.expr()?),
                    }
                }
            }
            Some(b')') => Err(Error::Parse { pos: self.pos, msg: "unexpected ')'".into() }),
            Some(_) => {
                let start = self.pos;
                while self.pos < self.s.len() && !self.s[self.pos].is_ascii_whitespace() && !matches!(self.s[self.pos], b'(' | b')') {
                    self.pos += 1;
                }
                Ok(Sexp::Atom(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let src = "(tensor (sym 2) (compose (sym 1) (twist 1)))";
        assert_eq!(Sexp::parse(src).unwrap().to_string(), src);
        assert!(Sexp::parse("(sym 2").is_err());
        assert!(Sexp::parse("(a) b").is_err());
    }
}
