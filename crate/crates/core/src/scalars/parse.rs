//! Text grammar for scalars and eigenvalues.
//!
//! Scalars: `+ - * / ^`, parentheses, integers, identifiers, `i`, `zeta(N)`.
//! Exponents are integers or parenthesized rationals: `a1^-2`, `2^(1/3)`.
//! Eigenvalues use the multiplicative fragment of the same grammar: `-l^-2`,
//! `zeta(3)*l`, `i*x^(1/2)`.

use num::{BigInt, BigRational, One, Zero};

use super::{Cyclotomic, Eigenvalue, Scalar, ScalarError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn err(pos: usize, msg: impl Into<String>) -> ScalarError {
    ScalarError::Parse { pos, msg: msg.into() }
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ScalarError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(text.parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character '{}'", c)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Self, ScalarError> {
        Ok(Parser { toks: tokenize(s)?, at: 0, end: s.len() })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ScalarError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected '{}'", c)))
        }
    }

    fn int(&mut self) -> Result<BigInt, ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => Err(err(self.pos(), "expected integer")),
        }
    }

    fn done(&self) -> Result<(), ScalarError> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            Err(err(self.pos(), "trailing input"))
        }
    }

    /// `^` exponent: `k`, `-k`, `(p/q)`, `(-p/q)`.
    fn exponent(&mut self) -> Result<BigRational, ScalarError> {
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.int()?;
            let d = if self.eat('/') { self.int()? } else { BigInt::one() };
            self.expect(')')?;
            if d.is_zero() {
                return Err(err(self.pos(), "zero denominator in exponent"));
            }
            let q = BigRational::new(n, d);
            Ok(if neg { -q } else { q })
        } else {
            let neg = self.eat('-');
            let n = self.int()?;
            Ok(BigRational::from_integer(if neg { -n } else { n }))
        }
    }

    fn zeta_order(&mut self) -> Result<u32, ScalarError> {
        self.expect('(')?;
        let p = self.pos();
        let n = self.int()?;
        self.expect(')')?;
        let n: u32 = n.try_into().map_err(|_| err(p, "bad zeta order"))?;
        if n == 0 {
            return Err(err(p, "zeta(0)"));
        }
        Ok(n)
    }

    // scalar grammar

    fn s_expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.s_term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.s_term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.s_term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn s_term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.s_unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.s_unary()?);
            } else if self.eat('/') {
                let p = self.pos();
                let d = self.s_unary()?;
                acc = acc.div(&d).map_err(|_| err(p, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn s_unary(&mut self) -> Result<Scalar, ScalarError> {
        if self.eat('-') {
            return Ok(self.s_unary()?.neg());
        }
        let base = self.s_atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return base.pow_rational(&e);
        }
        Ok(base)
    }

    fn s_atom(&mut self) -> Result<Scalar, ScalarError> {
        let p = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Scalar::from_rational(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "i" => Ok(Scalar::zeta(4, 1)),
                    "zeta" => Ok(Scalar::zeta(self.zeta_order()?, 1)),
                    _ => Ok(Scalar::var(&name)),
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let v = self.s_expr()?;
                self.expect(')')?;
                Ok(v)
            }
            _ => Err(err(p, "expected a value")),
        }
    }

    // eigenvalue grammar

    fn e_product(&mut self) -> Result<Eigenvalue, ScalarError> {
        let mut acc = self.e_unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.e_unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.e_unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn e_unary(&mut self) -> Result<Eigenvalue, ScalarError> {
        if self.eat('-') {
            // `-` alone (as in `-E2` prefixes) stands for -1
            if self.peek().is_none() || matches!(self.peek(), Some(Tok::Op(')'))) {
                return Ok(Eigenvalue::minus_one());
            }
            return Ok(self.e_unary()?.mul(&Eigenvalue::minus_one()));
        }
        let base = self.e_atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(base.pow(&e));
        }
        Ok(base)
    }

    fn e_atom(&mut self) -> Result<Eigenvalue, ScalarError> {
        let p = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                if n.is_one() {
                    Ok(Eigenvalue::one())
                } else {
                    Err(err(p, "only 1 is allowed as an integer eigenvalue factor"))
                }
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "i" => Ok(Eigenvalue::root_of_unity(1, 4)),
                    "zeta" => Ok(Eigenvalue::root_of_unity(1, self.zeta_order()? as i64)),
                    _ => Ok(Eigenvalue::symbol(&name)),
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let v = self.e_product()?;
                self.expect(')')?;
                Ok(v)
            }
            _ => Err(err(p, "expected an eigenvalue factor")),
        }
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarError> {
    let mut p = Parser::new(s)?;
    let v = p.s_expr()?;
    p.done()?;
    Ok(v)
}

pub fn parse_eigenvalue(s: &str) -> Result<Eigenvalue, ScalarError> {
    let mut p = Parser::new(s)?;
    if p.toks.is_empty() {
        return Ok(Eigenvalue::one());
    }
    let v = p.e_product()?;
    p.done()?;
    Ok(v)
}

pub fn parse_cyclotomic(s: &str) -> Result<Cyclotomic, ScalarError> {
    parse_scalar(s)?.as_cyclotomic().ok_or_else(|| err(0, "expected a constant"))
}
