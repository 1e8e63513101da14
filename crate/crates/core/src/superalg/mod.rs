//! Exact term algebra for polynomial sections of `Λ•τ♯(L ⊕ L*)`.
//!
//! An [`Element`] is a finite sum of terms
//! `coefficient · q^I · m^J · (odd word)`, where `q^1..q^n` are base
//! coordinates, `m_1..m_n` are momenta (either the super-Darboux `r_i` or the
//! curved-basis `p_i`, recorded once on the [`GeneratorSet`]) and the odd word
//! is a set of generators drawn from `a_1..a_k, a^1..a^k`.
//!
//! Odd words are stored in the canonical order
//! `a_1 < … < a_k < a^1 < … < a^k`; every swap of adjacent odd generators
//! contributes a factor `-1`, which is absorbed into the coefficient when a
//! term is normalized. Even generators commute with everything.

mod display;
mod parse;
pub mod word;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use parse::parse_element;

/// Exact rational coefficients.
pub type Rational = BigRational;

/// Builds the rational `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Which momentum coordinates an element is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MomentumBasis {
    /// Super-Darboux momenta `r_i` with a constant bracket table.
    Darboux,
    /// Curved-basis momenta `p_i`; brackets depend on a connection.
    Curved,
}

impl MomentumBasis {
    /// Symbol prefix used by the element grammar.
    pub fn symbol(self) -> char {
        match self {
            MomentumBasis::Darboux => 'r',
            MomentumBasis::Curved => 'p',
        }
    }
}

/// Dimensions and momentum basis of the ambient algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    n: usize,
    k: usize,
    basis: MomentumBasis,
}

/// Largest supported rank; odd words are 64-bit masks.
pub const MAX_RANK: usize = 32;

impl GeneratorSet {
    pub fn new(n: usize, k: usize, basis: MomentumBasis) -> Result<Self> {
        if k == 0 || k > MAX_RANK {
            return Err(Error::InvalidSpec(format!(
                "rank k must satisfy 1 <= k <= {MAX_RANK}, got {k}"
            )));
        }
        Ok(GeneratorSet { n, k, basis })
    }

    /// Super-Darboux generator set. Panics on an unsupported rank.
    pub fn darboux(n: usize, k: usize) -> Self {
        Self::new(n, k, MomentumBasis::Darboux).expect("valid rank")
    }

    /// Curved-basis generator set. Panics on an unsupported rank.
    pub fn curved(n: usize, k: usize) -> Self {
        Self::new(n, k, MomentumBasis::Curved).expect("valid rank")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> MomentumBasis {
        self.basis
    }

    pub fn with_basis(self, basis: MomentumBasis) -> Self {
        GeneratorSet { basis, ..self }
    }

    /// Canonical bit position of an odd generator.
    pub fn odd_bit(&self, g: OddGen) -> u32 {
        match g {
            OddGen::Lower(a) => a as u32,
            OddGen::Upper(a) => (self.k + a) as u32,
        }
    }

    pub fn odd_from_bit(&self, bit: u32) -> OddGen {
        let bit = bit as usize;
        if bit < self.k {
            OddGen::Lower(bit)
        } else {
            OddGen::Upper(bit - self.k)
        }
    }

    fn lower_mask(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    fn upper_mask(&self) -> u64 {
        self.lower_mask() << self.k
    }

    fn check_same(&self, other: &GeneratorSet) -> Result<()> {
        if self != other {
            return Err(Error::GeneratorMismatch { left: *self, right: *other });
        }
        Ok(())
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, k={}, momenta {})", self.n, self.k, self.basis.symbol())
    }
}

/// Odd generator: `Lower(α)` is the basis section `a_α` of `L`, `Upper(α)`
/// the dual section `a^α` of `L*`. Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OddGen {
    Lower(usize),
    Upper(usize),
}

impl OddGen {
    /// The generator paired with this one by the fiber metric.
    pub fn partner(self) -> OddGen {
        match self {
            OddGen::Lower(a) => OddGen::Upper(a),
            OddGen::Upper(a) => OddGen::Lower(a),
        }
    }
}

/// Even generator: base coordinate `q^i` or momentum `i` (zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvenGen {
    Q(usize),
    Momentum(usize),
}

/// Pair `(deg_L, deg_L*)` of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bidegree {
    /// The zero element, homogeneous of every bidegree.
    Zero,
    Pure(u32, u32),
    Inhomogeneous,
}

impl Bidegree {
    /// True when an element of this bidegree may be regarded as `(r, s)`.
    pub fn admits(self, r: u32, s: u32) -> bool {
        match self {
            Bidegree::Zero => true,
            Bidegree::Pure(a, b) => a == r && b == s,
            Bidegree::Inhomogeneous => false,
        }
    }
}

/// A single monomial `q^I · m^J · word`.
///
/// The exponent vector holds the `n` base exponents followed by the `n`
/// momentum exponents. The derived ordering (word first) fixes the printing
/// order of terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    odd: u64,
    exps: SmallVec<[u32; 8]>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { odd: 0, exps: SmallVec::from_elem(0, 2 * n) }
    }

    pub fn new(q: &[u32], momenta: &[u32], odd: u64) -> Self {
        assert_eq!(q.len(), momenta.len(), "exponent vectors must have equal length");
        let mut exps = SmallVec::with_capacity(2 * q.len());
        exps.extend_from_slice(q);
        exps.extend_from_slice(momenta);
        Monomial { odd, exps }
    }

    fn n(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn q_exponents(&self) -> &[u32] {
        &self.exps[..self.n()]
    }

    pub fn momentum_exponents(&self) -> &[u32] {
        &self.exps[self.n()..]
    }

    /// The odd word as a canonical bitmask.
    pub fn odd_word(&self) -> u64 {
        self.odd
    }

    pub fn q_degree(&self) -> u32 {
        self.q_exponents().iter().sum()
    }

    pub fn momentum_degree(&self) -> u32 {
        self.momentum_exponents().iter().sum()
    }

    pub fn odd_degree(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn is_odd(&self) -> bool {
        self.odd.count_ones() & 1 == 1
    }

    fn bidegree(&self, gens: &GeneratorSet) -> (u32, u32) {
        let m = self.momentum_degree();
        (
            m + (self.odd & gens.lower_mask()).count_ones(),
            m + (self.odd & gens.upper_mask()).count_ones(),
        )
    }

    fn exp(&self, g: EvenGen) -> u32 {
        match g {
            EvenGen::Q(i) => self.exps[i],
            EvenGen::Momentum(i) => self.exps[self.n() + i],
        }
    }

    fn exp_mut(&mut self, g: EvenGen) -> &mut u32 {
        let n = self.n();
        match g {
            EvenGen::Q(i) => &mut self.exps[i],
            EvenGen::Momentum(i) => &mut self.exps[n + i],
        }
    }

    fn with_even_product(&self, other: &Monomial) -> SmallVec<[u32; 8]> {
        self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect()
    }

    /// Product of two monomials; `None` when the odd words overlap.
    /// The flag reports a reordering sign.
    pub(crate) fn times(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let negative = word::merge_sign(self.odd, other.odd)?;
        Some((Monomial { odd: self.odd | other.odd, exps: self.with_even_product(other) }, negative))
    }

    pub(crate) fn with_odd(&self, odd: u64) -> Monomial {
        Monomial { odd, exps: self.exps.clone() }
    }

    /// Lowers the exponent of `g` by one, returning the old exponent.
    pub(crate) fn lowered(&self, g: EvenGen) -> Option<(Monomial, u32)> {
        let e = self.exp(g);
        if e == 0 {
            return None;
        }
        let mut m = self.clone();
        *m.exp_mut(g) -= 1;
        Some((m, e))
    }

    pub(crate) fn without_momenta(&self) -> Monomial {
        let n = self.n();
        let mut m = self.clone();
        for e in &mut m.exps[n..] {
            *e = 0;
        }
        m
    }
}

/// Exponent vectors of all monomials in `n` variables of total degree at
/// most `max_degree`, in lexicographic order.
pub fn q_monomials(n: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(prefix, n, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, max_degree, &mut out);
    out
}

/// Normalized sum of exact-rational terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    gens: GeneratorSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero(gens: GeneratorSet) -> Self {
        Element { gens, terms: BTreeMap::new() }
    }

    pub fn constant(gens: GeneratorSet, value: Rational) -> Self {
        let mut e = Element::zero(gens);
        e.add_term(Monomial::one(gens.n), value);
        e
    }

    pub fn one(gens: GeneratorSet) -> Self {
        Element::constant(gens, Rational::one())
    }

    pub fn from_int(gens: GeneratorSet, value: i64) -> Self {
        Element::constant(gens, int(value))
    }

    /// The even generator `g` (a base coordinate or a momentum).
    pub fn even(gens: GeneratorSet, g: EvenGen) -> Self {
        let mut m = Monomial::one(gens.n);
        *m.exp_mut(g) = 1;
        Element::monomial(gens, m, Rational::one())
    }

    pub fn q(gens: GeneratorSet, i: usize) -> Self {
        Element::even(gens, EvenGen::Q(i))
    }

    pub fn momentum(gens: GeneratorSet, i: usize) -> Self {
        Element::even(gens, EvenGen::Momentum(i))
    }

    pub fn odd(gens: GeneratorSet, g: OddGen) -> Self {
        let m = Monomial::one(gens.n).with_odd(1u64 << gens.odd_bit(g));
        Element::monomial(gens, m, Rational::one())
    }

    /// The section `a_α` of `L` (zero-based index).
    pub fn lower(gens: GeneratorSet, alpha: usize) -> Self {
        Element::odd(gens, OddGen::Lower(alpha))
    }

    /// The section `a^α` of `L*` (zero-based index).
    pub fn upper(gens: GeneratorSet, alpha: usize) -> Self {
        Element::odd(gens, OddGen::Upper(alpha))
    }

    pub fn monomial(gens: GeneratorSet, m: Monomial, coeff: Rational) -> Self {
        assert_eq!(m.exps.len(), 2 * gens.n, "monomial does not match generator set");
        let mut e = Element::zero(gens);
        e.add_term(m, coeff);
        e
    }

    /// Builds an element from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(gens: GeneratorSet, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut e = Element::zero(gens);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub(crate) fn add_term(&mut self, m: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_signed_term(&mut self, m: Monomial, coeff: Rational, negative: bool) {
        if negative {
            self.add_term(m, -coeff)
        } else {
            self.add_term(m, coeff)
        }
    }

    pub fn gens(&self) -> GeneratorSet {
        self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.gens.n))
    }

    /// Re-applies the normal form; a no-op on any constructed element.
    pub fn normalize(&self) -> Element {
        Element::from_terms(self.gens, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero(self.gens);
        }
        Element {
            gens: self.gens,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Element {
        self.scale(&int(c))
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.gens.check_same(&other.gens)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Wedge product. Errors when the generator sets differ.
    pub fn wedge(&self, other: &Element) -> Result<Element> {
        self.gens.check_same(&other.gens)?;
        let mut out = Element::zero(self.gens);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, negative)) = m1.times(m2) {
                    out.add_signed_term(m, c1 * c2, negative);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Element {
        let mut acc = Element::one(self.gens);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn bidegree(&self) -> Bidegree {
        let mut found = None;
        for m in self.terms.keys() {
            let b = m.bidegree(&self.gens);
            match found {
                None => found = Some(b),
                Some(prev) if prev != b => return Bidegree::Inhomogeneous,
                _ => {}
            }
        }
        match found {
            None => Bidegree::Zero,
            Some((r, s)) => Bidegree::Pure(r, s),
        }
    }

    pub fn has_bidegree(&self, r: u32, s: u32) -> bool {
        self.terms.keys().all(|m| m.bidegree(&self.gens) == (r, s))
    }

    /// True when every term has total degree `d` (momenta count twice).
    pub fn has_total_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|m| 2 * m.momentum_degree() + m.odd_degree() == d)
    }

    /// The part of bidegree `(r, s)`.
    pub fn project_bidegree(&self, r: u32, s: u32) -> Element {
        self.filter(|m| m.bidegree(&self.gens) == (r, s))
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            gens: self.gens,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Splits into Grassmann-even and Grassmann-odd parts.
    pub fn parity_parts(&self) -> (Element, Element) {
        (self.filter(|m| !m.is_odd()), self.filter(|m| m.is_odd()))
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| !m.is_odd())
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.is_odd())
    }

    /// Largest total degree in the base coordinates over all terms.
    pub fn q_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::q_degree).max()
    }

    pub fn has_momenta(&self) -> bool {
        self.terms.keys().any(|m| m.momentum_degree() > 0)
    }

    /// True for elements of bidegree `(0, 0)`: polynomials in `q` only.
    pub fn is_function(&self) -> bool {
        self.terms.keys().all(|m| m.momentum_degree() == 0 && m.odd == 0)
    }

    /// Left interior product by `g`: removes an occurrence of `g`'s partner
    /// after moving it to the front of the word.
    pub fn interior_left(&self, g: OddGen) -> Element {
        let bit = self.gens.odd_bit(g.partner());
        let mut out = Element::zero(self.gens);
        for (m, c) in &self.terms {
            if m.odd & (1 << bit) != 0 {
                let negative = word::left_extract_sign(m.odd, bit);
                out.add_signed_term(m.with_odd(m.odd & !(1 << bit)), c.clone(), negative);
            }
        }
        out
    }

    /// Right interior product by `g`: removes an occurrence of `g`'s partner
    /// after moving it to the back of the word.
    pub fn interior_right(&self, g: OddGen) -> Element {
        let bit = self.gens.odd_bit(g.partner());
        let mut out = Element::zero(self.gens);
        for (m, c) in &self.terms {
            if m.odd & (1 << bit) != 0 {
                let negative = word::right_extract_sign(m.odd, bit);
                out.add_signed_term(m.with_odd(m.odd & !(1 << bit)), c.clone(), negative);
            }
        }
        out
    }

    /// Formal partial derivative with respect to an even generator.
    pub fn partial(&self, g: EvenGen) -> Element {
        let mut out = Element::zero(self.gens);
        for (m, c) in &self.terms {
            if let Some((lowered, e)) = m.lowered(g) {
                out.add_term(lowered, c * int(e as i64));
            }
        }
        out
    }

    /// Moves the element to another generator set with the same dimensions.
    /// Only momentum-free elements may change momentum basis.
    pub fn rebase(&self, gens: GeneratorSet) -> Result<Element> {
        if gens.n != self.gens.n || gens.k != self.gens.k {
            return Err(Error::GeneratorMismatch { left: self.gens, right: gens });
        }
        if gens.basis != self.gens.basis && self.has_momenta() {
            return Err(Error::BasisMismatch(format!(
                "cannot reinterpret {} momenta as {} momenta",
                self.gens.basis.symbol(),
                gens.basis.symbol()
            )));
        }
        Ok(Element { gens, terms: self.terms.clone() })
    }

    /// Replaces the momentum basis tag without touching terms.
    pub(crate) fn relabel_momenta(&self, basis: MomentumBasis) -> Element {
        Element { gens: self.gens.with_basis(basis), terms: self.terms.clone() }
    }

    /// Substitutes every momentum `m_i` by `images[i]` (which must live in
    /// `target`) and moves the remaining factors to `target`.
    pub(crate) fn substitute_momenta(&self, target: GeneratorSet, images: &[Element]) -> Element {
        let mut powers: Vec<Vec<Element>> = images.iter().map(|img| vec![Element::one(target), img.clone()]).collect();
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            let base = Element::monomial(target, m.without_momenta(), c.clone());
            let mut acc = base;
            for (i, &e) in m.momentum_exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                acc = &acc * &powers[i][e as usize];
            }
            out += &acc;
        }
        out
    }

    /// Dot product of coefficient vectors in the monomial basis.
    pub fn coefficient_dot(&self, other: &Element) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            if let Some(d) = other.terms.get(m) {
                acc += c * d;
            }
        }
        acc
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}]({})", self.gens, self)
    }
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, rhs: &'a Element) -> Element {
        self.try_add(rhs).expect("generator sets must agree")
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += &rhs;
        self
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        assert_eq!(self.gens, rhs.gens, "generator sets must agree");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        assert_eq!(self.gens, rhs.gens, "generator sets must agree");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &'a Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(mut self, rhs: Element) -> Element {
        self -= &rhs;
        self
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            gens: self.gens,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, rhs: &'a Element) -> Element {
        self.wedge(rhs).expect("generator sets must agree")
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g22() -> GeneratorSet {
        GeneratorSet::darboux(2, 2)
    }

    #[test]
    fn repeated_odd_generator_vanishes() {
        let a1 = Element::lower(g22(), 0);
        assert!((&a1 * &a1).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let a1 = Element::lower(g22(), 0);
        let b1 = Element::upper(g22(), 0);
        assert_eq!(&a1 * &b1, -(&b1 * &a1));
    }

    #[test]
    fn hand_expansion_of_mixed_product() {
        let g = g22();
        let q1 = Element::q(g, 0);
        let x = &q1 + &(&Element::lower(g, 0) * &Element::upper(g, 0));
        let prod = &x * &q1;
        let expected = &(&q1 * &q1) + &(&q1 * &(&Element::lower(g, 0) * &Element::upper(g, 0)));
        assert_eq!(prod, expected);
        assert_eq!(prod.len(), 2);
    }

    #[test]
    fn wedge_rejects_mismatched_generators() {
        let x = Element::q(GeneratorSet::darboux(2, 2), 0);
        let y = Element::q(GeneratorSet::darboux(3, 2), 0);
        assert!(matches!(x.wedge(&y), Err(Error::GeneratorMismatch { .. })));
        let z = Element::q(GeneratorSet::curved(2, 2), 0);
        assert!(x.wedge(&z).is_err());
    }

    #[test]
    fn bidegree_examples() {
        let g = GeneratorSet::darboux(1, 3);
        let r_a = &Element::momentum(g, 0) * &Element::upper(g, 0);
        assert_eq!(r_a.bidegree(), Bidegree::Pure(1, 2));
        let top = &(&Element::lower(g, 0) * &Element::lower(g, 1)) * &Element::lower(g, 2);
        assert_eq!(top.bidegree(), Bidegree::Pure(3, 0));
        assert_eq!(Element::one(g).bidegree(), Bidegree::Pure(0, 0));
        assert_eq!(Element::zero(g).bidegree(), Bidegree::Zero);
        assert!(Bidegree::Zero.admits(5, 7));
        let mixed = &Element::one(g) + &Element::lower(g, 0);
        assert_eq!(mixed.bidegree(), Bidegree::Inhomogeneous);
    }

    #[test]
    fn interior_products() {
        let g = g22();
        let a1a2 = &Element::lower(g, 0) * &Element::lower(g, 1);
        assert_eq!(a1a2.interior_left(OddGen::Upper(0)), Element::lower(g, 1));
        assert!(Element::lower(g, 1).interior_left(OddGen::Upper(0)).is_zero());
        assert_eq!(a1a2.interior_right(OddGen::Upper(0)), -a1a2.interior_left(OddGen::Upper(0)));
    }

    #[test]
    fn partial_derivatives() {
        let g = g22();
        let p1p2 = &Element::momentum(g, 0) * &Element::momentum(g, 1);
        assert_eq!(p1p2.partial(EvenGen::Momentum(0)), Element::momentum(g, 1));
        let q1 = Element::q(g, 0);
        let x = &(&q1 * &q1) * &Element::lower(g, 0);
        assert_eq!(x.partial(EvenGen::Q(0)), (&q1 * &Element::lower(g, 0)).scale_int(2));
        let y = &Element::lower(g, 0) * &Element::upper(g, 0);
        assert!(y.partial(EvenGen::Momentum(0)).is_zero());
    }

    #[test]
    fn rebase_rules() {
        let d = GeneratorSet::darboux(1, 1);
        let c = GeneratorSet::curved(1, 1);
        assert!(Element::q(d, 0).rebase(c).is_ok());
        assert!(Element::momentum(d, 0).rebase(c).is_err());
    }
}
