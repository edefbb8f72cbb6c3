//! Text and JSON forms of polynomials.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Monomial, MonomialOrder, Polynomial, Rational, VarId, NVARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("division by a non-constant or zero")]
    BadDivision,
    #[error("bad number {0:?}")]
    BadNumber(String),
    #[error("json: {0}")]
    Json(String),
}

/// One entry of the JSON term list: `{"coeff":"p/q","exps":{"G1":2}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: BTreeMap<String, u16>,
}

impl Polynomial {
    /// Parse either the text form or a JSON term list.
    pub fn parse(input: &str) -> Result<Polynomial, ParseError> {
        if input.trim_start().starts_with('[') {
            let terms: Vec<TermJson> = serde_json::from_str(input).map_err(|e| ParseError::Json(e.to_string()))?;
            Polynomial::from_json_terms(&terms)
        } else {
            let mut p = Parser { src: input, chars: input.char_indices().collect(), pos: 0 };
            let out = p.expr()?;
            p.skip_ws();
            match p.peek() {
                None => Ok(out),
                Some((i, c)) => Err(ParseError::Unexpected(c, i)),
            }
        }
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<Polynomial, ParseError> {
        let mut p = Polynomial::zero();
        for t in terms {
            let c = Rational::from_str(t.coeff.trim()).map_err(|_| ParseError::BadNumber(t.coeff.clone()))?;
            let mut e = [0u16; NVARS];
            for (name, x) in &t.exps {
                let v = VarId::from_name(name).ok_or_else(|| ParseError::UnknownVariable(name.clone()))?;
                e[v.index()] += *x;
            }
            p.add_term(Monomial::from_exponents(e), c);
        }
        Ok(p)
    }

    /// JSON term list in default-order term sequence.
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.sorted_terms(&MonomialOrder::grevlex())
            .into_iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                exps: m.vars().map(|(v, e)| (v.name().to_string(), e)).collect(),
            })
            .collect()
    }
}

impl FromStr for Polynomial {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Polynomial::parse(s)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Polynomial::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if matches!(self.peek(), Some((_, c)) if c == want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc * self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                let c = constant_of(&d).ok_or(ParseError::BadDivision)?;
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let n = self.integer()?;
            let e: u32 = n.parse().map_err(|_| ParseError::BadNumber(n))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some((_, c)) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.peek() {
                Some((i, c)) => Err(ParseError::Unexpected(c, i)),
                None => Err(ParseError::Eof),
            };
        }
        Ok(self.chars[start..self.pos].iter().map(|(_, c)| c).collect())
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(ParseError::Eof),
            Some((_, '(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return match self.peek() {
                        Some((i, c)) => Err(ParseError::Unexpected(c, i)),
                        None => Err(ParseError::Eof),
                    };
                }
                Ok(inner)
            }
            Some((_, '-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some((_, c)) if c.is_ascii_digit() => {
                let digits = self.integer()?;
                let n = BigInt::from_str(&digits).map_err(|_| ParseError::BadNumber(digits))?;
                Ok(Polynomial::constant(Rational::from_integer(n)))
            }
            Some((i, c)) if c.is_alphabetic() || c == 'Γ' => {
                let start = i;
                while matches!(self.peek(), Some((_, c)) if c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let end = self.peek().map(|(j, _)| j).unwrap_or(self.src.len());
                let name = &self.src[start..end];
                VarId::from_name(name).map(Polynomial::var).ok_or_else(|| ParseError::UnknownVariable(name.to_string()))
            }
            Some((i, c)) => Err(ParseError::Unexpected(c, i)),
        }
    }
}

fn constant_of(p: &Polynomial) -> Option<Rational> {
    if p.is_zero() {
        return None;
    }
    if p.len() == 1 {
        let (m, c) = p.terms().next().unwrap();
        if m.is_one() {
            return Some(c.clone());
        }
    }
    None
}
