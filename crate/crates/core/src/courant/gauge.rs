//! Gauge transformations `τ_B(X, α) = (X, α + i_X B)` of the standard model.

use serde::Serialize;

use super::{derived_bracket, AlgebroidSpec, ThetaDecomposition};
use crate::error::{Error, Result};
use crate::superalg::{q_monomials, EvenGen, Element, GeneratorSet, Monomial, OddGen};

/// A two-form `B = Σ_{i<j} B_ij a^i a^j` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeField {
    form: Element,
}

impl GaugeField {
    /// Wraps an element of bidegree `(0,2)`.
    pub fn new(form: Element) -> Result<Self> {
        if !form.has_bidegree(0, 2) || form.has_momenta() {
            return Err(Error::Degree(format!("B must be a two-form of bidegree (0,2), got {form}")));
        }
        Ok(GaugeField { form })
    }

    /// Builds `B` from an antisymmetric coefficient matrix `b[i][j] = B_ij`.
    pub fn from_matrix(gens: GeneratorSet, b: &[Vec<Element>]) -> Result<Self> {
        let k = gens.k();
        if b.len() != k || b.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidSpec(format!("B must be a {k}x{k} matrix")));
        }
        let mut form = Element::zero(gens);
        for i in 0..k {
            for j in 0..k {
                if b[i][j] != -&b[j][i] {
                    return Err(Error::InvalidSpec(format!("B is not antisymmetric at ({}, {})", i + 1, j + 1)));
                }
                if !b[i][j].is_function() {
                    return Err(Error::InvalidSpec(format!("B entries must be polynomials in q, got {}", b[i][j])));
                }
                if i < j {
                    form += &(&b[i][j] * &(&Element::upper(gens, i) * &Element::upper(gens, j)));
                }
            }
        }
        Ok(GaugeField { form })
    }

    pub fn form(&self) -> &Element {
        &self.form
    }

    /// `B_ij`, recovered by contracting with `a_i` then `a_j`.
    pub fn coefficient(&self, i: usize, j: usize) -> Element {
        self.form.interior_left(OddGen::Lower(i)).interior_left(OddGen::Lower(j))
    }

    /// `τ_B(e) = e + i_X B` where `X` is the `L` part of `e`.
    pub fn apply(&self, e: &Element) -> Result<Element> {
        if !e.has_total_degree(1) || e.has_momenta() {
            return Err(Error::Degree(format!("gauge transformations act on sections, got {e}")));
        }
        if e.gens() != self.form.gens() {
            return Err(Error::GeneratorMismatch { left: self.form.gens(), right: e.gens() });
        }
        let mut out = e.clone();
        for i in 0..e.gens().k() {
            let x = e.interior_left(OddGen::Upper(i));
            if !x.is_zero() {
                out += &(&x * &self.form.interior_left(OddGen::Lower(i)));
            }
        }
        Ok(out)
    }

    /// `dB = Σ_{i<j<k} (∂_i B_jk + ∂_j B_ki + ∂_k B_ij) a^i a^j a^k`.
    pub fn exterior_derivative(&self) -> Element {
        let gens = self.form.gens();
        let k = gens.k().min(gens.n());
        let mut out = Element::zero(gens);
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    let c = &(&self.coefficient(j, l).partial(EvenGen::Q(i))
                        + &self.coefficient(l, i).partial(EvenGen::Q(j)))
                        + &self.coefficient(i, j).partial(EvenGen::Q(l));
                    if !c.is_zero() {
                        let basis = &(&Element::upper(gens, i) * &Element::upper(gens, j)) * &Element::upper(gens, l);
                        out += &(&c * &basis);
                    }
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_derivative().is_zero()
    }
}

/// A pair of sections on which `τ_B` fails to preserve the bracket.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeViolation {
    #[serde(serialize_with = "crate::report::serialize_element")]
    pub e1: Element,
    #[serde(serialize_with = "crate::report::serialize_element")]
    pub e2: Element,
    /// `⟦τ e₁, τ e₂⟧`.
    #[serde(serialize_with = "crate::report::serialize_element")]
    pub transformed_bracket: Element,
    /// `τ ⟦e₁, e₂⟧`.
    #[serde(serialize_with = "crate::report::serialize_element")]
    pub bracket_transformed: Element,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeReport {
    pub automorphism: bool,
    /// Whether `dB = 0`, computed independently of the bracket.
    pub closed: bool,
    #[serde(serialize_with = "crate::report::serialize_element")]
    pub d_b: Element,
    pub pairs_checked: usize,
    pub counterexample: Option<GaugeViolation>,
}

/// Monomial basis sections `q^I a_i` and `q^I a^i` with `|I| ≤ bound`.
fn basis_sections(gens: GeneratorSet, bound: u32) -> Vec<Element> {
    let mut out = Vec::new();
    let zeros = vec![0; gens.n()];
    for q in q_monomials(gens.n(), bound) {
        for g in (0..gens.k()).map(OddGen::Lower).chain((0..gens.k()).map(OddGen::Upper)) {
            let m = Monomial::new(&q, &zeros, 1 << gens.odd_bit(g));
            out.push(Element::monomial(gens, m, crate::int(1)));
        }
    }
    out
}

/// Tests `⟦τ_B e₁, τ_B e₂⟧ = τ_B ⟦e₁, e₂⟧` over all pairs of monomial basis
/// sections with coefficient degree at most `bound`, stopping at the first
/// violation. Requires the standard model.
pub fn is_gauge_automorphism(
    spec: &AlgebroidSpec,
    theta: &ThetaDecomposition,
    b: &GaugeField,
    bound: u32,
) -> Result<GaugeReport> {
    if !spec.is_standard() {
        return Err(Error::InvalidSpec("gauge transformations require the standard model".into()));
    }
    let sections = basis_sections(spec.gens(), bound);
    let images: Vec<Element> = sections.iter().map(|e| b.apply(e)).collect::<Result<_>>()?;
    let d_b = b.exterior_derivative();
    let closed = d_b.is_zero();
    let mut pairs = 0;
    for (e1, t1) in sections.iter().zip(&images) {
        for (e2, t2) in sections.iter().zip(&images) {
            pairs += 1;
            let lhs = derived_bracket(theta, t1, t2)?;
            let rhs = b.apply(&derived_bracket(theta, e1, e2)?)?;
            if lhs != rhs {
                let counterexample = GaugeViolation {
                    e1: e1.clone(),
                    e2: e2.clone(),
                    transformed_bracket: lhs,
                    bracket_transformed: rhs,
                };
                return Ok(GaugeReport {
                    automorphism: false,
                    closed,
                    d_b,
                    pairs_checked: pairs,
                    counterexample: Some(counterexample),
                });
            }
        }
    }
    Ok(GaugeReport { automorphism: true, closed, d_b, pairs_checked: pairs, counterexample: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::assemble_theta;
    use crate::superalg::parse_element;

    fn setup() -> (AlgebroidSpec, ThetaDecomposition) {
        let spec = AlgebroidSpec::standard(3).unwrap();
        let theta = assemble_theta(&spec);
        (spec, theta)
    }

    #[test]
    fn constant_b_is_an_automorphism() {
        let (spec, theta) = setup();
        let b = GaugeField::new(parse_element("2*f1*f2 - f2*f3", spec.gens()).unwrap()).unwrap();
        let report = is_gauge_automorphism(&spec, &theta, &b, 1).unwrap();
        assert!(report.automorphism && report.closed);
    }

    #[test]
    fn non_closed_b_has_counterexample() {
        let (spec, theta) = setup();
        let b = GaugeField::new(parse_element("q3*f1*f2", spec.gens()).unwrap()).unwrap();
        assert!(!b.is_closed());
        let report = is_gauge_automorphism(&spec, &theta, &b, 1).unwrap();
        assert!(!report.automorphism);
        let v = report.counterexample.unwrap();
        assert_ne!(v.transformed_bracket, v.bracket_transformed);
    }

    #[test]
    fn exact_b_is_an_automorphism() {
        // B = d(q1 q2 dq1) = -q1 dq1∧dq2
        let (spec, theta) = setup();
        let b = GaugeField::new(parse_element("-q1*f1*f2", spec.gens()).unwrap()).unwrap();
        assert!(b.is_closed());
        assert!(is_gauge_automorphism(&spec, &theta, &b, 1).unwrap().automorphism);
    }

    #[test]
    fn matrix_input_must_be_antisymmetric() {
        let g = GeneratorSet::darboux(2, 2);
        let one = Element::one(g);
        let z = Element::zero(g);
        assert!(GaugeField::from_matrix(g, &[vec![z.clone(), one.clone()], vec![one.clone(), z.clone()]]).is_err());
        let b = GaugeField::from_matrix(g, &[vec![z.clone(), one.clone()], vec![-&one, z]]).unwrap();
        assert_eq!(*b.form(), parse_element("f1*f2", g).unwrap());
        assert_eq!(b.apply(&parse_element("e1", g).unwrap()).unwrap(), parse_element("e1 + f2", g).unwrap());
    }
}
