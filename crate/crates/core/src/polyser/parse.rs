//! Recursive-descent parser for rational expressions over a finite field.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/")? unary)*      juxtaposition multiplies
//! unary   := "-" unary | power
//! power   := primary ("^" exponent)?
//! primary := integer | ident | "(" expr ")"
//! ```
//!
//! The identifier `g` is the cached generator of the field; every other
//! identifier is handed to the algebra as a variable name.

use super::Poly;
use crate::error::{Error, Result};
use crate::gf::{Fe, Field};

/// Target of [`parse_expr`]: anything with ring operations, division and
/// named variables.
pub trait ExprAlgebra {
    type Elem: Clone;

    fn field(&self) -> &Field;
    fn constant(&self, c: Fe) -> Self::Elem;
    fn variable(&self, name: &str) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        let mut acc = self.constant(Fe::ONE);
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, a);
        }
        if e < 0 {
            acc = self.div(&self.constant(Fe::ONE), &acc)?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            out.push(Tok::Num(
                text.parse()
                    .map_err(|_| Error::Parse(format!("integer `{text}` too large")))?,
            ));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, A: ExprAlgebra> {
    alg: &'a A,
    toks: Vec<Tok>,
    pos: usize,
}

impl<A: ExprAlgebra> Parser<'_, A> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<A::Elem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.alg.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.alg.add(&acc, &self.alg.neg(&t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))
        )
    }

    fn term(&mut self) -> Result<A::Elem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let u = self.unary()?;
                acc = self.alg.mul(&acc, &u);
            } else if self.eat('/') {
                let u = self.unary()?;
                acc = self.alg.div(&acc, &u)?;
            } else if self.starts_primary() {
                let u = self.power()?;
                acc = self.alg.mul(&acc, &u);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<A::Elem> {
        if self.eat('-') {
            let u = self.unary()?;
            Ok(self.alg.neg(&u))
        } else {
            self.power()
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = match self.peek() {
            Some(Tok::Num(n)) => *n as i64,
            other => return Err(Error::Parse(format!("expected exponent, found {other:?}"))),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(Error::Parse("unclosed exponent".into()));
        }
        Ok(if neg { -n } else { n })
    }

    fn power(&mut self) -> Result<A::Elem> {
        let base = self.primary()?;
        if self.eat('^') {
            let e = self.exponent()?;
            self.alg.pow(&base, e)
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<A::Elem> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => {
                let f = self.alg.field();
                let r = (n % u64::from(f.p())) as i64;
                Ok(self.alg.constant(f.from_int(r)))
            }
            Some(Tok::Ident(name)) if name == "g" => {
                Ok(self.alg.constant(self.alg.field().generator()))
            }
            Some(Tok::Ident(name)) => self.alg.variable(&name),
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("unbalanced parentheses".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse `s` into the algebra `alg`.
pub fn parse_expr<A: ExprAlgebra>(alg: &A, s: &str) -> Result<A::Elem> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { alg, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {} in `{s}`",
            p.pos
        )));
    }
    Ok(e)
}

struct PolyAlgebra<'a> {
    field: &'a Field,
    var: &'a str,
}

impl ExprAlgebra for PolyAlgebra<'_> {
    type Elem = Poly;

    fn field(&self) -> &Field {
        self.field
    }

    fn constant(&self, c: Fe) -> Poly {
        Poly::constant(self.field, c)
    }

    fn variable(&self, name: &str) -> Result<Poly> {
        if name == self.var {
            Ok(Poly::x(self.field))
        } else {
            Err(Error::Parse(format!("unknown variable `{name}`")))
        }
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn neg(&self, a: &Poly) -> Poly {
        a.neg()
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b)
    }

    fn div(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        a.div_exact(b)
    }
}

/// Parse a polynomial such as `t^3 + 2*t + 1` in the variable `var`.
pub fn parse_poly(field: &Field, s: &str, var: &str) -> Result<Poly> {
    parse_expr(&PolyAlgebra { field, var }, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_polynomials() {
        let f5 = Field::prime(5).unwrap();
        let p = parse_poly(&f5, "t^3 + 2*t + 1", "t").unwrap();
        assert_eq!(p.coeffs(), &[Fe(1), Fe(2), Fe(0), Fe(1)]);
        let q = parse_poly(&f5, "(t+1)(t-1) - 3t", "t").unwrap();
        assert_eq!(q.coeffs(), &[Fe(4), Fe(2), Fe(1)]);
        let r = parse_poly(&f5, "(t^2 - 1)/(t + 1)", "t").unwrap();
        assert_eq!(r.coeffs(), &[Fe(4), Fe(1)]);
        assert!(parse_poly(&f5, "t +", "t").is_err());
        assert!(parse_poly(&f5, "u", "t").is_err());
        assert!(parse_poly(&f5, "", "t").is_err());
    }

    #[test]
    fn generator_literals() {
        let f9 = crate::gf::gf_make_field(3, 2).unwrap();
        let p = parse_poly(&f9, "g^2 t + g", "t").unwrap();
        assert_eq!(p.coeff(1), f9.gen_pow(2));
        assert_eq!(p.coeff(0), f9.generator());
        let inv = parse_poly(&f9, "g^(-1)", "t").unwrap();
        assert_eq!(inv.coeff(0), f9.gen_pow(-1));
    }
}
