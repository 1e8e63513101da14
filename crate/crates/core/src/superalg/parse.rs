//! Recursive-descent parser for the element grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | power
//! power  := atom ('^' integer)?
//! atom   := integer ['/' integer] | symbol | '(' expr ')'
//! symbol := q<i> | r<i> | p<i> | e<α> | f<α>      (1-based indices)
//! ```
//!
//! `e<α>` is `a_α`, `f<α>` is `a^α`. Products are wedge products taken in
//! written order.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Element, GeneratorSet, MomentumBasis, OddGen, Rational};
use crate::error::{Error, Result};

/// Parses `text` into an element over `gens`.
pub fn parse_element(text: &str, gens: GeneratorSet) -> Result<Element> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, gens };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    gens: GeneratorSet,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: message.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Element> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Element> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                self.pos = start;
                return Err(self.error("exponent must be a non-negative integer"));
            }
            let exp: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        s
    }

    fn atom(&mut self) -> Result<Element> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits parse");
                let save = self.pos;
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den_digits = self.digits();
                    if den_digits.is_empty() {
                        return Err(self.error("expected denominator after '/'"));
                    }
                    let den: BigInt = den_digits.parse().expect("digits parse");
                    if den.is_zero() {
                        self.pos = start;
                        return Err(self.error("zero denominator"));
                    }
                    return Ok(Element::constant(self.gens, Rational::new(num, den)));
                }
                self.pos = save;
                Ok(Element::constant(self.gens, Rational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let digits = self.digits();
                if digits.is_empty() {
                    self.pos = start;
                    return Err(self.error(&format!("unknown symbol '{c}'")));
                }
                let idx: usize = digits.parse().map_err(|_| self.error("index too large"))?;
                self.symbol(c, idx, start)
            }
            Some(c) => Err(self.error(&format!("unexpected '{c}'"))),
        }
    }

    fn symbol(&mut self, c: char, idx: usize, start: usize) -> Result<Element> {
        let (n, k) = (self.gens.n(), self.gens.k());
        let bound = match c {
            'q' | 'r' | 'p' => n,
            'e' | 'f' => k,
            _ => {
                self.pos = start;
                return Err(self.error(&format!("unknown symbol '{c}{idx}'")));
            }
        };
        if idx == 0 || idx > bound {
            self.pos = start;
            return Err(self.error(&format!("index of '{c}{idx}' out of range 1..={bound}")));
        }
        let i = idx - 1;
        Ok(match c {
            'q' => Element::q(self.gens, i),
            'r' | 'p' => {
                let wanted = if c == 'r' { MomentumBasis::Darboux } else { MomentumBasis::Curved };
                if wanted != self.gens.basis() {
                    self.pos = start;
                    return Err(self.error(&format!(
                        "momentum '{c}{idx}' does not belong to the {} basis",
                        self.gens.basis().symbol()
                    )));
                }
                Element::momentum(self.gens, i)
            }
            'e' => Element::odd(self.gens, OddGen::Lower(i)),
            _ => Element::odd(self.gens, OddGen::Upper(i)),
        })
    }
}
