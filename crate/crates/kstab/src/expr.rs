//! Small exact expression language for scenario files: rationals, `u`, `v`,
//! single-letter parameters, `+ - * / ^`, parentheses and implicit products (`5d`, `(1-u)(7-u)`).

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::exact::{parse_rational, AffineForm, Polynomial2, Rational};

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: u32 = 32;
const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{msg} at offset {pos} in {src:?}")]
pub struct ExprError {
    pub src: String,
    pub pos: usize,
    pub msg: String,
}

pub type Params = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let err = |pos: usize, msg: &str| ExprError { src: src.to_string(), pos, msg: msg.to_string() };
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // scientific suffix like 2e-3, only when followed by digits
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'-' || bytes[j] == b'+') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value = parse_rational(text).map_err(|_| err(start, "bad number"))?;
            out.push((start, Tok::Num(value)));
        } else if c.is_ascii_alphabetic() {
            // identifiers are single letters so that `uv` reads as `u*v`
            out.push((i, Tok::Ident(c.to_string())));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, "unexpected character"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    at: usize,
    params: &'a Params,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ExprError {
        let pos = self.toks.get(self.at).map(|t| t.0).unwrap_or(self.src.len());
        ExprError { src: self.src.to_string(), pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn guard(&mut self) -> Result<(), ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Polynomial2, ExprError> {
        self.guard()?;
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Polynomial2, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = self.checked_mul(&acc, &rhs)?;
            } else if self.eat('/') {
                let d = self.unary()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::from_integer(1.into()) / c)),
                    Some(_) => return Err(self.err("division by zero")),
                    None => return Err(self.err("division by a non-constant")),
                }
            } else if self.starts_primary() {
                let rhs = self.power()?;
                acc = self.checked_mul(&acc, &rhs)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn checked_mul(&self, a: &Polynomial2, b: &Polynomial2) -> Result<Polynomial2, ExprError> {
        if a.total_degree() + b.total_degree() > MAX_DEGREE {
            return Err(self.err("degree too large"));
        }
        Ok(a * b)
    }

    fn unary(&mut self) -> Result<Polynomial2, ExprError> {
        self.guard()?;
        let r = if self.eat('-') {
            Ok(-&self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        };
        self.depth -= 1;
        r
    }

    fn power(&mut self) -> Result<Polynomial2, ExprError> {
        let base = self.primary()?;
        if self.eat('^') {
            let e = self.unary()?;
            let n = e
                .as_constant()
                .filter(|c| c.is_integer())
                .and_then(|c| c.to_integer().to_u32())
                .filter(|&n| n <= MAX_EXPONENT)
                .ok_or_else(|| self.err("exponent must be a small non-negative integer"))?;
            if base.total_degree() * n > MAX_DEGREE {
                return Err(self.err("degree too large"));
            }
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial2, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.at += 1;
                Ok(Polynomial2::constant(r))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "u" => Ok(Polynomial2::u()),
                    "v" => Ok(Polynomial2::v()),
                    other => match self.params.get(other) {
                        Some(r) => Ok(Polynomial2::constant(r.clone())),
                        None => {
                            self.at -= 1;
                            Err(self.err(&format!("unknown identifier {other:?}")))
                        }
                    },
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

pub fn parse_polynomial(src: &str, params: &Params) -> Result<Polynomial2, ExprError> {
    let toks = tokenize(src)?;
    let mut p = Parser { src, toks, at: 0, params, depth: 0 };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

pub fn parse_constant(src: &str, params: &Params) -> Result<Rational, ExprError> {
    let p = parse_polynomial(src, params)?;
    p.as_constant().ok_or_else(|| ExprError {
        src: src.to_string(),
        pos: 0,
        msg: "expected a constant".into(),
    })
}

pub fn parse_affine(src: &str, params: &Params) -> Result<AffineForm, ExprError> {
    let p = parse_polynomial(src, params)?;
    AffineForm::from_poly(&p).ok_or_else(|| ExprError {
        src: src.to_string(),
        pos: 0,
        msg: "expected an affine expression in u, v".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn no() -> Params {
        Params::new()
    }

    #[test]
    fn implicit_products_and_powers() {
        let p = parse_polynomial("(1-u)(7-u) - v^2/6", &no()).unwrap();
        assert_eq!(p.eval(&int(0), &int(3)), rat(7, 1) - rat(9, 6));
        let mut params = Params::new();
        params.insert("d".into(), int(3));
        assert_eq!(parse_constant("(44+5d)/32", &params).unwrap(), rat(59, 32));
        assert_eq!(parse_constant("-2^2", &no()).unwrap(), int(-4));
        assert_eq!(parse_constant("2e-3", &no()).unwrap(), rat(1, 500));
    }

    #[test]
    fn display_round_trips() {
        let p = parse_polynomial("13u^2+16uv+4v^2-42u-24v+33", &no()).unwrap();
        assert_eq!(parse_polynomial(&p.to_string(), &no()).unwrap(), p);
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_polynomial("1 + w", &no()).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_polynomial("u/v", &no()).is_err());
        assert!(parse_polynomial("u^100", &no()).is_err());
        assert!(parse_polynomial("(u", &no()).is_err());
        assert!(parse_affine("u*v", &no()).is_err());
        assert!(parse_polynomial("1/0", &no()).is_err());
    }
}
