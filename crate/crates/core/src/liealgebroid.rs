//! Lie algebroid calculus derived from the components of `Θ`, and
//! cohomology of `L` on degree-truncated cochain spaces.
//!
//! All operations are brackets with a component of `Θ`:
//!
//! ```text
//! d_L η = {μ, η}            d_{L*} P = {γ, P}
//! [P, Q]_μ = {{P, μ}, Q}    [η₁, η₂, η₃]_φ = {{{φ, η₁}, η₂}, η₃}
//! ```
//!
//! Algebra never truncates. Only the linear-algebra layer restricts to the
//! finite spaces `C^m_D` of `m`-cochains whose coefficients have degree at
//! most `D`, widening codomains by the degree growth of `d_L`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Solve, SparseMatrix, SparseVector};
use crate::rothstein::bracket;
use crate::superalg::{int, q_monomials, Bidegree, Element, GeneratorSet, Monomial};

fn br(x: &Element, y: &Element) -> Result<Element> {
    bracket(x, y)
}

/// A Lie algebroid `m`-form on `L`: an element of bidegree `(0, m)`, i.e. a
/// polynomial combination of words in the `a^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    element: Element,
    degree: u32,
}

impl Cochain {
    pub fn new(element: Element, degree: u32) -> Result<Self> {
        if !element.has_bidegree(0, degree) || element.has_momenta() {
            return Err(Error::Degree(format!("expected a cochain of bidegree (0,{degree}), got {element}")));
        }
        Ok(Cochain { element, degree })
    }

    /// Infers the form degree; the zero element must use [`Cochain::zero`].
    pub fn from_element(element: Element) -> Result<Self> {
        match element.bidegree() {
            Bidegree::Pure(0, m) => Cochain::new(element, m),
            Bidegree::Zero => Err(Error::Degree("cannot infer the degree of the zero cochain".into())),
            _ => Err(Error::Degree(format!("expected a cochain of bidegree (0,m), got {element}"))),
        }
    }

    pub fn zero(gens: GeneratorSet, degree: u32) -> Self {
        Cochain { element: Element::zero(gens), degree }
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn into_element(self) -> Element {
        self.element
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Largest coefficient degree, zero for the zero cochain.
    pub fn poly_bound(&self) -> u32 {
        self.element.q_degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.element.fmt(f)
    }
}

fn require_bidegree(e: &Element, r: Option<u32>, s: Option<u32>, what: &str) -> Result<(u32, u32)> {
    let (a, b) = match e.bidegree() {
        Bidegree::Zero => return Ok((r.unwrap_or(0), s.unwrap_or(0))),
        Bidegree::Pure(a, b) => (a, b),
        Bidegree::Inhomogeneous => return Err(Error::Degree(format!("{what} is not homogeneous: {e}"))),
    };
    if r.is_some_and(|r| r != a) || s.is_some_and(|s| s != b) {
        let show = |x: Option<u32>| x.map_or("*".to_string(), |v| v.to_string());
        return Err(Error::Degree(format!("{what} must have bidegree ({},{}), got ({a},{b})", show(r), show(s))));
    }
    Ok((a, b))
}

/// `d_L η = {μ, η}`.
pub fn d_l(mu: &Element, eta: &Cochain) -> Result<Cochain> {
    require_bidegree(mu, Some(1), Some(2), "mu")?;
    Ok(Cochain { element: br(mu, &eta.element)?, degree: eta.degree + 1 })
}

/// `d_{L*} P = {γ, P}` on elements of bidegree `(m, 0)` without momenta.
pub fn d_lstar(gamma: &Element, p: &Element) -> Result<Element> {
    require_bidegree(gamma, Some(2), Some(1), "gamma")?;
    require_bidegree(p, None, Some(0), "argument")?;
    if p.has_momenta() {
        return Err(Error::Degree(format!("argument must not contain momenta: {p}")));
    }
    br(gamma, p)
}

/// The Schouten bracket `[P, Q]_μ = {{P, μ}, Q}` on `Λ•L`.
pub fn schouten(mu: &Element, p: &Element, q: &Element) -> Result<Element> {
    require_bidegree(mu, Some(1), Some(2), "mu")?;
    require_bidegree(p, None, Some(0), "first argument")?;
    require_bidegree(q, None, Some(0), "second argument")?;
    br(&br(p, mu)?, q)
}

/// The dual Schouten bracket `⟦η, ζ⟧_γ = {{η, γ}, ζ}` on `Λ•L*`.
pub fn schouten_dual(gamma: &Element, eta: &Cochain, zeta: &Cochain) -> Result<Cochain> {
    require_bidegree(gamma, Some(2), Some(1), "gamma")?;
    let element = br(&br(&eta.element, gamma)?, &zeta.element)?;
    Ok(Cochain { element, degree: (eta.degree + zeta.degree).saturating_sub(1) })
}

/// `[η₁, η₂, η₃]_φ = {{{φ, η₁}, η₂}, η₃}`.
pub fn triple_bracket(phi: &Element, eta1: &Cochain, eta2: &Cochain, eta3: &Cochain) -> Result<Cochain> {
    require_bidegree(phi, Some(3), Some(0), "phi")?;
    let element = br(&br(&br(phi, &eta1.element)?, &eta2.element)?, &eta3.element)?;
    let degree = (eta1.degree + eta2.degree + eta3.degree).saturating_sub(3);
    Ok(Cochain { element, degree })
}

/// Ordered monomial basis of `C^m_D`.
///
/// Basis elements are `q^I a^{α₁} ⋯ a^{α_m}` with `|I| ≤ D` and
/// `α₁ < ⋯ < α_m`, ordered lexicographically by `I`, then by `α`.
#[derive(Clone, Debug)]
pub struct CochainBasis {
    gens: GeneratorSet,
    degree: u32,
    bound: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn subsets(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for a in start..k {
            cur.push(a);
            rec(a + 1, k, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= k {
        rec(0, k, m, &mut Vec::new(), &mut out);
    }
    out
}

impl CochainBasis {
    pub fn new(gens: GeneratorSet, degree: u32, bound: u32) -> Self {
        let (n, k) = (gens.n(), gens.k());
        let words: Vec<u64> = subsets(k, degree as usize)
            .into_iter()
            .map(|s| s.into_iter().fold(0u64, |w, a| w | 1 << (k + a)))
            .collect();
        let zeros = vec![0; n];
        let mut monomials = Vec::new();
        for q in q_monomials(n, bound) {
            for &w in &words {
                monomials.push(Monomial::new(&q, &zeros, w));
            }
        }
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        CochainBasis { gens, degree, bound, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// The `i`-th basis cochain.
    pub fn element(&self, i: usize) -> Cochain {
        Cochain { element: Element::monomial(self.gens, self.monomials[i].clone(), int(1)), degree: self.degree }
    }

    /// Coordinates of `e`; `Err` carries the first term outside the span.
    pub fn coordinates(&self, e: &Element) -> std::result::Result<SparseVector, Element> {
        let mut v = SparseVector::new();
        for (m, c) in e.terms() {
            match self.position(m) {
                Some(i) => {
                    v.insert(i, c.clone());
                }
                None => return Err(Element::monomial(self.gens, m.clone(), c.clone())),
            }
        }
        Ok(v)
    }

    pub fn to_element(&self, v: &SparseVector) -> Element {
        Element::from_terms(self.gens, v.iter().map(|(&i, c)| (self.monomials[i].clone(), c.clone())))
    }
}

/// The complex `(Γ(Λ•L*), d_L)` of a Lie algebroid given by `μ`.
#[derive(Clone, Debug)]
pub struct LieComplex {
    mu: Element,
    growth: u32,
}

/// Dimensions of one cohomology group at a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyDims {
    pub degree: u32,
    pub truncation: u32,
    /// Closed cochains in `C^m_D`.
    pub kernel: usize,
    /// Exact cochains in `C^m_D` with primitives in `C^{m-1}_{D+1}`.
    pub image: usize,
    pub cohomology: usize,
    /// False for point models, where the answer is the true cohomology.
    pub truncation_relative: bool,
}

/// Evidence that a closed cochain has no primitive in the searched space.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Certificate {
    /// A term of `η` lies outside every possible image `d_L β`.
    OutOfRange {
        #[serde(serialize_with = "crate::report::serialize_element")]
        term: Element,
    },
    /// A functional `y` (paired by coefficient dot product) vanishing on the
    /// image of `d_L` with `y · η ≠ 0`.
    Functional {
        #[serde(serialize_with = "crate::report::serialize_element")]
        functional: Element,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Exactness {
    Exact(Cochain),
    NotExact {
        certificate: Certificate,
        /// True only for point models; otherwise a primitive of higher
        /// coefficient degree may exist.
        unconditional: bool,
    },
}

impl LieComplex {
    /// Requires `μ` of bidegree `(1,2)` with `{μ, μ} = 0`.
    pub fn new(mu: &Element) -> Result<Self> {
        require_bidegree(mu, Some(1), Some(2), "mu")?;
        let square = br(mu, mu)?;
        if !square.is_zero() {
            return Err(Error::MasterFailed(format!("{{mu,mu}} = {square}")));
        }
        let growth = mu
            .terms()
            .map(|(m, _)| if m.momentum_degree() > 0 { m.q_degree().saturating_sub(1) } else { m.q_degree() })
            .max()
            .unwrap_or(0);
        Ok(LieComplex { mu: mu.clone(), growth })
    }

    pub fn mu(&self) -> &Element {
        &self.mu
    }

    pub fn gens(&self) -> GeneratorSet {
        self.mu.gens()
    }

    /// Bound on the increase of coefficient degree under `d_L`.
    pub fn growth(&self) -> u32 {
        self.growth
    }

    pub fn d(&self, eta: &Cochain) -> Cochain {
        d_l(&self.mu, eta).expect("mu validated on construction")
    }

    pub fn basis(&self, degree: u32, bound: u32) -> CochainBasis {
        CochainBasis::new(self.gens(), degree, bound)
    }

    /// Matrix of `d_L : C^m_D → C^{m+1}_{D+growth}`.
    pub fn matrix_of_dl(&self, degree: u32, bound: u32) -> SparseMatrix {
        let domain = self.basis(degree, bound);
        let codomain = self.basis(degree + 1, bound + self.growth);
        self.matrix_between(&domain, &codomain)
    }

    fn matrix_between(&self, domain: &CochainBasis, codomain: &CochainBasis) -> SparseMatrix {
        let columns: Vec<SparseVector> = (0..domain.len())
            .map(|j| {
                let image = self.d(&domain.element(j));
                codomain.coordinates(image.element()).expect("growth bound covers every image")
            })
            .collect();
        SparseMatrix::from_columns(codomain.len(), &columns)
    }

    /// `(dim ker, dim im, dim H)` of degree `m` at truncation `D`.
    ///
    /// The kernel is taken in `C^m_D`; the image counts exact cochains in
    /// `C^m_D` whose primitives lie in `C^{m-1}_{D+1}`.
    pub fn cohomology_dim(&self, degree: u32, bound: u32) -> CohomologyDims {
        let kernel = self.matrix_of_dl(degree, bound).nullity();
        let image = if degree == 0 {
            0
        } else {
            let d = self.matrix_of_dl(degree - 1, bound + 1);
            let codomain = self.basis(degree, bound + 1 + self.growth);
            let outside = d.select_rows(|i| codomain.monomial(i).q_degree() > bound);
            outside.nullity() - d.nullity()
        };
        CohomologyDims {
            degree,
            truncation: bound,
            kernel,
            image,
            cohomology: kernel - image,
            truncation_relative: self.gens().n() > 0,
        }
    }

    /// Searches a primitive `β ∈ C^{m-1}_D` with `d_L β = η`.
    pub fn is_exact(&self, eta: &Cochain, bound: u32) -> Result<Exactness> {
        if eta.degree == 0 {
            return Err(Error::Degree("exactness is defined for cochains of degree at least 1".into()));
        }
        let closed = self.d(eta);
        if !closed.is_zero() {
            return Err(Error::NotClosed(closed.to_string()));
        }
        let unconditional = self.gens().n() == 0;
        let domain = self.basis(eta.degree - 1, bound);
        let codomain = self.basis(eta.degree, bound + self.growth);
        let rhs = match codomain.coordinates(eta.element()) {
            Ok(v) => v,
            Err(term) => {
                return Ok(Exactness::NotExact { certificate: Certificate::OutOfRange { term }, unconditional })
            }
        };
        let matrix = self.matrix_between(&domain, &codomain);
        Ok(match matrix.solve(&rhs) {
            Solve::Solution(x) => {
                Exactness::Exact(Cochain { element: domain.to_element(&x), degree: eta.degree - 1 })
            }
            Solve::Inconsistent(y) => Exactness::NotExact {
                certificate: Certificate::Functional { functional: codomain.to_element(&y) },
                unconditional,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::{assemble_theta, AlgebroidSpec};
    use crate::superalg::parse_element;

    fn aff1() -> LieComplex {
        let mut spec = AlgebroidSpec::new(0, 2).unwrap();
        spec.set_c_low(0, 1, 1, Element::one(spec.gens())).unwrap();
        LieComplex::new(assemble_theta(&spec).mu()).unwrap()
    }

    #[test]
    fn de_rham_on_the_standard_model() {
        let spec = AlgebroidSpec::standard(3).unwrap();
        let g = spec.gens();
        let mu = assemble_theta(&spec).mu().clone();
        let eta = Cochain::new(parse_element("q3*f1*f2", g).unwrap(), 2).unwrap();
        let d = d_l(&mu, &eta).unwrap();
        assert_eq!(*d.element(), parse_element("f1*f2*f3", g).unwrap());
        assert_eq!(d.degree(), 3);
    }

    #[test]
    fn basis_sizes() {
        let c = aff1();
        assert_eq!((0..=2).map(|m| c.basis(m, 3).len()).collect::<Vec<_>>(), vec![1, 2, 1]);
        let g = GeneratorSet::darboux(1, 1);
        assert_eq!(CochainBasis::new(g, 0, 2).len(), 3);
        assert_eq!(c.matrix_of_dl(0, 0).rank(), 0);
        assert_eq!(c.matrix_of_dl(1, 0).rank(), 1);
    }

    #[test]
    fn aff1_cohomology() {
        let c = aff1();
        let dims: Vec<usize> = (0..=2).map(|m| c.cohomology_dim(m, 0).cohomology).collect();
        assert_eq!(dims, vec![1, 1, 0]);
        assert!(!c.cohomology_dim(1, 0).truncation_relative);
    }

    #[test]
    fn aff1_first_class_is_not_exact() {
        let c = aff1();
        let g = c.gens();
        let eta = Cochain::new(parse_element("f1", g).unwrap(), 1).unwrap();
        match c.is_exact(&eta, 0).unwrap() {
            Exactness::NotExact { unconditional, .. } => assert!(unconditional),
            other => panic!("{other:?}"),
        }
        let zero = Cochain::zero(g, 2);
        assert_eq!(c.is_exact(&zero, 0).unwrap(), Exactness::Exact(Cochain::zero(g, 1)));
        let not_closed = Cochain::new(parse_element("f2", g).unwrap(), 1).unwrap();
        assert!(matches!(c.is_exact(&not_closed, 0), Err(Error::NotClosed(_))));
    }

    #[test]
    fn standard_line_has_no_first_cohomology() {
        let spec = AlgebroidSpec::standard(1).unwrap();
        let c = LieComplex::new(assemble_theta(&spec).mu()).unwrap();
        for d in 0..4 {
            assert_eq!(c.cohomology_dim(0, d).cohomology, 1);
            assert_eq!(c.cohomology_dim(1, d).cohomology, 0);
        }
    }

    #[test]
    fn point_model_triple_contraction() {
        let g = GeneratorSet::darboux(0, 3);
        let phi = parse_element("e1*e2*e3", g).unwrap();
        let etas: Vec<Cochain> =
            ["f1", "f2", "f3"].iter().map(|s| Cochain::new(parse_element(s, g).unwrap(), 1).unwrap()).collect();
        let t = triple_bracket(&phi, &etas[0], &etas[1], &etas[2]).unwrap();
        assert_eq!(*t.element(), Element::from_int(g, -1));
        assert!(triple_bracket(&Element::zero(g), &etas[0], &etas[1], &etas[2]).unwrap().is_zero());
    }
}
