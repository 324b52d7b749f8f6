//! Text form of piecewise functions.
//!
//! ```text
//! function := "0" | piece (";" piece)*
//! piece    := "char(" a "," b ")" ["*" h]
//!           | sum "on" "(" a "," b ")"
//! sum      := term (("+" | "-") term)*
//! term     := number
//!           | "const(" v ")"
//!           | "powerleft(" c "," q ["," anchor] ")"
//!           | "powerright(" c "," q ["," anchor] ")"
//! ```
//!
//! Omitted anchors default to the piece's own endpoint. Printing emits the
//! canonical form with shortest round-trip numbers, so every printed
//! literal parses back to an identical function.

use std::fmt;

use super::{Piece, PiecewiseFunction, Term};
use crate::error::{Error, Result};

pub(super) fn write_function(f: &PiecewiseFunction, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if f.pieces.is_empty() {
        return out.write_str("0");
    }
    for (i, p) in f.pieces.iter().enumerate() {
        if i > 0 {
            out.write_str("; ")?;
        }
        for (j, t) in p.terms.iter().enumerate() {
            if j > 0 {
                out.write_str(" + ")?;
            }
            match *t {
                Term::Const(v) => write!(out, "const({v:?})")?,
                Term::PowerLeft { coef, exp, anchor } => {
                    write!(out, "powerleft({coef:?}, {exp:?}")?;
                    if anchor != p.lo {
                        write!(out, ", {anchor:?}")?;
                    }
                    out.write_str(")")?;
                }
                Term::PowerRight { coef, exp, anchor } => {
                    write!(out, "powerright({coef:?}, {exp:?}")?;
                    if anchor != p.hi {
                        write!(out, ", {anchor:?}")?;
                    }
                    out.write_str(")")?;
                }
            }
        }
        write!(out, " on ({:?}, {:?})", p.lo, p.hi)?;
    }
    Ok(())
}

pub(super) fn parse_function(s: &str) -> Result<PiecewiseFunction> {
    let mut p = Parser { src: s, pos: 0 };
    p.skip_ws();
    if p.rest().trim() == "0" {
        return Ok(PiecewiseFunction::zero());
    }
    let mut pieces = Vec::new();
    loop {
        pieces.push(p.piece()?);
        p.skip_ws();
        if p.eat(";") {
            continue;
        }
        if p.at_end() {
            break;
        }
        return Err(p.error("expected ';' or end of input"));
    }
    pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    PiecewiseFunction::new(pieces)
}

enum RawTerm {
    Const(f64),
    Left(f64, f64, Option<f64>),
    Right(f64, f64, Option<f64>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at column {} in '{}'", self.pos + 1, self.src))
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().len() >= tok.len() && self.rest()[..tok.len()].eq_ignore_ascii_case(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{tok}'")))
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| {
                c.is_ascii_digit()
                    || c == '.'
                    || c == 'e'
                    || c == 'E'
                    || ((c == '-' || c == '+') && (i == 0 || matches!(rest.as_bytes()[i - 1], b'e' | b'E')))
            })
            .map(|(i, c)| i + c.len_utf8())
            .last()
            .unwrap_or(0);
        let text = &rest[..len];
        let v: f64 = text.parse().map_err(|_| self.error("expected a number"))?;
        if !v.is_finite() {
            return Err(self.error("number must be finite"));
        }
        self.pos += len;
        Ok(v)
    }

    fn interval(&mut self) -> Result<(f64, f64)> {
        self.expect("(")?;
        let a = self.number()?;
        self.expect(",")?;
        let b = self.number()?;
        self.expect(")")?;
        Ok((a, b))
    }

    fn power_args(&mut self) -> Result<(f64, f64, Option<f64>)> {
        self.expect("(")?;
        let c = self.number()?;
        self.expect(",")?;
        let q = self.number()?;
        let anchor = if self.eat(",") { Some(self.number()?) } else { None };
        self.expect(")")?;
        Ok((c, q, anchor))
    }

    fn term(&mut self, sign: f64) -> Result<RawTerm> {
        if self.eat("const") {
            self.expect("(")?;
            let v = self.number()?;
            self.expect(")")?;
            Ok(RawTerm::Const(sign * v))
        } else if self.eat("powerleft") {
            let (c, q, a) = self.power_args()?;
            Ok(RawTerm::Left(sign * c, q, a))
        } else if self.eat("powerright") {
            let (c, q, a) = self.power_args()?;
            Ok(RawTerm::Right(sign * c, q, a))
        } else {
            Ok(RawTerm::Const(sign * self.number()?))
        }
    }

    fn piece(&mut self) -> Result<Piece> {
        if self.eat("char") {
            let (a, b) = self.interval()?;
            let h = if self.eat("*") { self.number()? } else { 1.0 };
            return Ok(Piece { lo: a, hi: b, terms: vec![Term::Const(h)] });
        }
        let mut raw = vec![self.term(1.0)?];
        loop {
            if self.eat("+") {
                raw.push(self.term(1.0)?);
            } else if self.eat("-") {
                raw.push(self.term(-1.0)?);
            } else {
                break;
            }
        }
        self.expect("on")?;
        let (lo, hi) = self.interval()?;
        let terms = raw
            .into_iter()
            .map(|t| match t {
                RawTerm::Const(v) => Term::Const(v),
                RawTerm::Left(coef, exp, a) => Term::PowerLeft { coef, exp, anchor: a.unwrap_or(lo) },
                RawTerm::Right(coef, exp, a) => Term::PowerRight { coef, exp, anchor: a.unwrap_or(hi) },
            })
            .collect();
        Ok(Piece { lo, hi, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let f: PiecewiseFunction = "char(0,1)".parse().unwrap();
        assert_eq!(f, PiecewiseFunction::char_fn(0.0, 1.0, 1.0).unwrap());
        let g: PiecewiseFunction = "powerleft(1, 0.5) on (0,1)".parse().unwrap();
        assert_eq!(g, PiecewiseFunction::power_left(0.0, 1.0, 1.0, 0.5).unwrap());
        let s: PiecewiseFunction = "2 on (0,1); 1 on (1,2)".parse().unwrap();
        assert_eq!(s, PiecewiseFunction::steps(&[(0.0, 1.0, 2.0), (1.0, 2.0, 1.0)]).unwrap());
        let h: PiecewiseFunction = "powerleft(1,0.5) - powerright(1,0.5) on (0,1)".parse().unwrap();
        assert!((h.eval(0.25) - (2.0 - 1.0 / 0.75f64.sqrt())).abs() < 1e-12);
        let c: PiecewiseFunction = "char(2,3)*1.5e0".parse().unwrap();
        assert_eq!(c.eval(2.5), 1.5);
        assert!("0".parse::<PiecewiseFunction>().unwrap().is_zero());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "char(0)", "powerleft(1,0.5) on (1,0)", "foo on (0,1)", "1 on (0,1) junk", "1 on (0,inf)"] {
            assert!(bad.parse::<PiecewiseFunction>().is_err(), "{bad}");
        }
    }

    #[test]
    fn prints_canonical_form() {
        let f = PiecewiseFunction::lincomb(
            1.0,
            &PiecewiseFunction::power_left(0.0, 1.0, 1.0, 0.5).unwrap(),
            1.0,
            &PiecewiseFunction::char_fn(0.5, 2.0, 1.0).unwrap(),
        )
        .unwrap();
        let text = f.to_string();
        assert_eq!(
            text,
            "powerleft(1.0, 0.5) on (0.0, 0.5); const(1.0) + powerleft(1.0, 0.5, 0.0) on (0.5, 1.0); const(1.0) on (1.0, 2.0)"
        );
        assert_eq!(text.parse::<PiecewiseFunction>().unwrap(), f);
    }
}
