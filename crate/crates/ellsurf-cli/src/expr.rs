//! Expression parser for surface spec files: rational-function expressions
//! in `t` (and the number field generator `a`) with +, -, *, /, ^ and
//! integer literals.

use ellsurf_core::field::Field;
use ellsurf_core::numfield::NumberField;
use ellsurf_core::poly::Poly;
use ellsurf_core::ratfunc::RatFunc;

pub type Rf = RatFunc<NumberField>;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Unexpected(String),
    TrailingInput(String),
    DivisionByZero,
    NegativePower,
}

pub struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a NumberField,
}

pub fn parse_ratfunc(field: &NumberField, src: &str) -> Result<Rf, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        field,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::TrailingInput(
            String::from_utf8_lossy(&p.src[p.pos..]).into_owned(),
        ));
    }
    Ok(v)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expr(&mut self) -> Result<Rf, ParseError> {
        let k = self.field;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = RatFunc::add(&k.clone(), &acc, &rhs);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = RatFunc::sub(&k.clone(), &acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Rf, ParseError> {
        let k = self.field.clone();
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = RatFunc::mul(&k, &acc, &rhs);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return Err(ParseError::DivisionByZero);
                    }
                    acc = RatFunc::div(&k, &acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Rf, ParseError> {
        let k = self.field.clone();
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(ParseError::NegativePower);
            }
            let e: u64 = core::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| ParseError::NegativePower)?;
            return Ok(RatFunc::pow(&k, &base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Rf, ParseError> {
        let k = self.field.clone();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(ParseError::Unexpected(String::from("expected )")));
                }
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                let v = self.factor()?;
                Ok(RatFunc::neg(&k, &v))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(RatFunc::of_poly(&k, Poly::x(&k)))
            }
            Some(b'a') => {
                self.pos += 1;
                Ok(RatFunc::constant(&k, k.generator()))
            }
            Some(c) if c.is_ascii_digit() => {
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: i64 = core::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| ParseError::Unexpected(String::from("integer overflow")))?;
                Ok(RatFunc::constant(&k, k.from_i64(n)))
            }
            other => Err(ParseError::Unexpected(format!("{other:?}"))),
        }
    }
}
