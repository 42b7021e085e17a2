//! Poset expressions.
//!
//! Grammar (precedence: `*` > `^` > `+`, all left-associative):
//!
//! ```text
//! expr := sum
//! sum  := osum ('+' osum)*          direct sum
//! osum := prod ('^' prod)*          ordinal sum (stacking)
//! prod := atom ('*' atom)*          product
//! atom := 'C'INT | 'A'INT | 'L' | 'D'
//!       | 'H(' expr ',' expr ')' | 'dual(' expr ')'
//!       | 'file:'PATH | '(' expr ')'
//! ```
//!
//! `C<n>` is the n-chain, `A<n>` the n-antichain, `L` the three-element
//! poset with two minimal points under a top, `D` the diamond. `H(p,q)`
//! is the poset of monotone maps p -> q. `file:` loads the JSON poset
//! format; the path extends to the next delimiter or whitespace.

use std::fmt;

use ordhom_core::{hom_poset, Poset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetExpr {
    Chain(usize),
    Antichain(usize),
    Lambda,
    Diamond,
    Product(Vec<PosetExpr>),
    OrdinalSum(Vec<PosetExpr>),
    DirectSum(Vec<PosetExpr>),
    Hom(Box<PosetExpr>, Box<PosetExpr>),
    Dual(Box<PosetExpr>),
    File(String),
}

#[derive(Clone, Debug)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse_expr(text: &str) -> Result<PosetExpr, ParseError> {
    let mut p = Parser { text: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let expr = p.sum()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError { position: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn sum(&mut self) -> Result<PosetExpr, ParseError> {
        let mut parts = vec![self.osum()?];
        while self.eat(b'+') {
            parts.push(self.osum()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { PosetExpr::DirectSum(parts) })
    }

    fn osum(&mut self) -> Result<PosetExpr, ParseError> {
        let mut parts = vec![self.prod()?];
        while self.eat(b'^') {
            parts.push(self.prod()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { PosetExpr::OrdinalSum(parts) })
    }

    fn prod(&mut self) -> Result<PosetExpr, ParseError> {
        let mut parts = vec![self.atom()?];
        while self.eat(b'*') {
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { PosetExpr::Product(parts) })
    }

    fn integer(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<PosetExpr, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        if rest.starts_with(b"file:") {
            self.pos += 5;
            let start = self.pos;
            while let Some(c) = self.peek() {
                if matches!(c, b' ' | b'\t' | b'(' | b')' | b'+' | b'*' | b'^' | b',') {
                    break;
                }
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.error("expected a path after 'file:'"));
            }
            let path = std::str::from_utf8(&self.text[start..self.pos])
                .map_err(|_| self.error("path is not valid UTF-8"))?;
            return Ok(PosetExpr::File(path.to_string()));
        }
        if rest.starts_with(b"dual(") {
            self.pos += 5;
            let inner = self.sum()?;
            self.expect(b')')?;
            return Ok(PosetExpr::Dual(Box::new(inner)));
        }
        if rest.starts_with(b"H(") {
            self.pos += 2;
            let domain = self.sum()?;
            self.expect(b',')?;
            let codomain = self.sum()?;
            self.expect(b')')?;
            return Ok(PosetExpr::Hom(Box::new(domain), Box::new(codomain)));
        }
        match self.peek() {
            Some(b'C') => {
                self.pos += 1;
                Ok(PosetExpr::Chain(self.integer()?))
            }
            Some(b'A') => {
                self.pos += 1;
                Ok(PosetExpr::Antichain(self.integer()?))
            }
            Some(b'L') => {
                self.pos += 1;
                Ok(PosetExpr::Lambda)
            }
            Some(b'D') => {
                self.pos += 1;
                Ok(PosetExpr::Diamond)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(b')')?;
                Ok(inner)
            }
            _ => Err(self.error("expected a poset atom")),
        }
    }
}

impl PosetExpr {
    /// Builds the poset. Product and sum ids follow left-associated
    /// grouping; for products that makes the layout row-major in the
    /// written factor order.
    pub fn eval(&self) -> ordhom_core::Result<Poset> {
        match self {
            PosetExpr::Chain(k) => {
                check_atom_size(*k)?;
                Ok(Poset::chain(*k))
            }
            PosetExpr::Antichain(k) => {
                check_atom_size(*k)?;
                Ok(Poset::antichain(*k))
            }
            PosetExpr::Lambda => Ok(Poset::lambda()),
            PosetExpr::Diamond => Ok(Poset::diamond()),
            PosetExpr::Product(parts) => {
                fold_parts(parts, Poset::product)
            }
            PosetExpr::OrdinalSum(parts) => fold_parts(parts, Poset::ordinal_sum),
            PosetExpr::DirectSum(parts) => fold_parts(parts, Poset::direct_sum),
            PosetExpr::Hom(p, q) => hom_poset(&p.eval()?, &q.eval()?),
            PosetExpr::Dual(p) => Ok(p.eval()?.dual()),
            PosetExpr::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ordhom_core::Error::Load(format!("{path}: {e}")))?;
                Poset::from_json_str(&text)
            }
        }
    }

    /// The factors of a top-level product, if this is one.
    pub fn product_factors(&self) -> Option<&[PosetExpr]> {
        match self {
            PosetExpr::Product(parts) => Some(parts),
            _ => None,
        }
    }
}

fn check_atom_size(k: usize) -> ordhom_core::Result<()> {
    if k > ordhom_core::poset::MAX_ELEMENTS {
        return Err(ordhom_core::Error::CarrierTooLarge {
            size: k,
            limit: ordhom_core::poset::MAX_ELEMENTS,
        });
    }
    Ok(())
}

fn fold_parts(
    parts: &[PosetExpr],
    combine: impl Fn(&Poset, &Poset) -> ordhom_core::Result<Poset>,
) -> ordhom_core::Result<Poset> {
    let mut iter = parts.iter();
    let mut acc = iter.next().expect("parser never yields empty lists").eval()?;
    for part in iter {
        acc = combine(&acc, &part.eval()?)?;
    }
    Ok(acc)
}
