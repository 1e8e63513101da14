//! Printing in the element grammar, so that output re-parses.

use std::fmt;

use num_traits::{One, Signed};

use super::{Element, Monomial, Rational};

fn push_factors(out: &mut Vec<String>, m: &Monomial, el: &Element) {
    let gens = el.gens();
    for (i, &e) in m.q_exponents().iter().enumerate() {
        push_power(out, format!("q{}", i + 1), e);
    }
    let sym = gens.basis().symbol();
    for (i, &e) in m.momentum_exponents().iter().enumerate() {
        push_power(out, format!("{sym}{}", i + 1), e);
    }
    for bit in super::word::bits(m.odd_word()) {
        out.push(match gens.odd_from_bit(bit) {
            super::OddGen::Lower(a) => format!("e{}", a + 1),
            super::OddGen::Upper(a) => format!("f{}", a + 1),
        });
    }
}

fn push_power(out: &mut Vec<String>, name: String, e: u32) {
    match e {
        0 => {}
        1 => out.push(name),
        _ => out.push(format!("{name}^{e}")),
    }
}

fn write_magnitude(f: &mut fmt::Formatter<'_>, c: &Rational, factors: &[String]) -> fmt::Result {
    if factors.is_empty() {
        return write!(f, "{c}");
    }
    if !c.is_one() {
        write!(f, "{c}*")?;
    }
    write!(f, "{}", factors.join("*"))
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut factors = Vec::new();
        for (idx, (m, c)) in self.terms().enumerate() {
            factors.clear();
            push_factors(&mut factors, m, self);
            let negative = c.is_negative();
            match (idx, negative) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            write_magnitude(f, &c.abs(), &factors)?;
        }
        Ok(())
    }
}
