//! Formal deformations of the Dirac structure `L`.
//!
//! A 2-cochain `ω` deforms `L` into `graph(ω)`, which is Dirac exactly when
//!
//! ```text
//! MC(ω) = d_L ω + ½ ⟦ω, ω⟧_γ + ⅙ [ω, ω, ω]_φ = 0.
//! ```
//!
//! For a formal series `ω = Σ tʳ ω_r` the equation is solved order by order:
//! given `ω_1 … ω_N`, the next order needs `d_L ω_{N+1} = R_{N+1}` with
//!
//! ```text
//! R_{N+1} = −½ Σ_{i+j=N+1} ⟦ω_i, ω_j⟧_γ − ⅙ Σ_{i+j+l=N+1} [ω_i, ω_j, ω_l]_φ,
//! ```
//!
//! which is always `d_L`-closed. Its class is the obstruction.

use serde::{Deserialize, Serialize};

use crate::courant::{assemble_theta, derived_bracket, pairing, verify_master, AlgebroidSpec, ThetaDecomposition};
use crate::error::{Error, Result};
use crate::liealgebroid::{schouten, schouten_dual, triple_bracket, Certificate, Cochain, Exactness, LieComplex};
use crate::superalg::{parse_element, rat, Element, GeneratorSet, OddGen};

/// A Courant algebroid in which `L` is a Dirac structure (`ψ = 0`).
#[derive(Clone, Debug)]
pub struct DiracContext {
    theta: ThetaDecomposition,
    complex: LieComplex,
}

impl DiracContext {
    /// Requires `ψ = 0` and the master equation.
    pub fn new(theta: ThetaDecomposition) -> Result<Self> {
        if !theta.psi().is_zero() {
            return Err(Error::PsiNonzero);
        }
        let report = verify_master(&theta);
        if let Some(bad) = report.failures().next() {
            return Err(Error::MasterFailed(format!("{} = {}", bad.name, bad.residual)));
        }
        let complex = LieComplex::new(theta.mu())?;
        Ok(DiracContext { theta, complex })
    }

    pub fn from_spec(spec: &AlgebroidSpec) -> Result<Self> {
        DiracContext::new(assemble_theta(spec))
    }

    pub fn theta(&self) -> &ThetaDecomposition {
        &self.theta
    }

    pub fn complex(&self) -> &LieComplex {
        &self.complex
    }

    pub fn gens(&self) -> GeneratorSet {
        self.theta.gens()
    }

    fn two_form(&self, omega: &Cochain) -> Result<()> {
        if omega.degree() != 2 {
            return Err(Error::Degree(format!("expected a 2-cochain, got degree {}", omega.degree())));
        }
        if omega.element().gens() != self.gens() {
            return Err(Error::GeneratorMismatch { left: self.gens(), right: omega.element().gens() });
        }
        Ok(())
    }

    fn gamma_bracket(&self, a: &Cochain, b: &Cochain) -> Element {
        schouten_dual(self.theta.gamma(), a, b).expect("gamma validated").into_element()
    }

    fn phi_bracket(&self, a: &Cochain, b: &Cochain, c: &Cochain) -> Element {
        triple_bracket(self.theta.phi(), a, b, c).expect("phi validated").into_element()
    }

    /// `MC(ω) = {μ, ω} + ½ {{ω, γ}, ω} + ⅙ {{{φ, ω}, ω}, ω}`.
    pub fn mc_residual(&self, omega: &Cochain) -> Result<Cochain> {
        self.two_form(omega)?;
        let mut r = self.complex.d(omega).into_element();
        r += &self.gamma_bracket(omega, omega).scale(&rat(1, 2));
        r += &self.phi_bracket(omega, omega, omega).scale(&rat(1, 6));
        Cochain::new(r, 3)
    }

    /// The residual assembled from the graph condition: its value on
    /// `(a_α, a_β, a_γ)` is `⟨⟦x_α, x_β⟧, x_γ⟩` with `x_α = a_α + i_{a_α} ω`,
    /// computed through the derived bracket.
    pub fn mc_residual_oracle(&self, omega: &Cochain) -> Result<Cochain> {
        self.two_form(omega)?;
        let gens = self.gens();
        let k = gens.k();
        let lifts: Vec<Element> =
            (0..k).map(|a| &Element::lower(gens, a) + &omega.element().interior_left(OddGen::Lower(a))).collect();
        let mut out = Element::zero(gens);
        for a in 0..k {
            for b in a + 1..k {
                let ab = derived_bracket(&self.theta, &lifts[a], &lifts[b])?;
                for c in b + 1..k {
                    let value = pairing(&ab, &lifts[c])?;
                    if value.is_zero() {
                        continue;
                    }
                    let word =
                        &(&Element::upper(gens, a) * &Element::upper(gens, b)) * &Element::upper(gens, c);
                    out += &(&value * &word);
                }
            }
        }
        Cochain::new(out, 3)
    }

    /// `d_η X = {μ, X} + {{η, γ}, X} + ½ {{{φ, η}, η}, X}` applied to
    /// `X = MC(η)`. Vanishes identically.
    pub fn d_eta_check(&self, eta: &Cochain) -> Result<Element> {
        let x = self.mc_residual(eta)?;
        let mut out = self.complex.d(&x).into_element();
        out += &self.gamma_bracket(eta, &x);
        out += &self.phi_bracket(eta, eta, &x).scale(&rat(1, 2));
        Ok(out)
    }

    /// Coefficient of `t^order` in `MC(Σ tʳ ω_r)`, recomputed from scratch.
    pub fn order_residual(&self, omegas: &[Cochain], order: usize) -> Element {
        let gens = self.gens();
        let get = |r: usize| omegas.get(r.wrapping_sub(1)).filter(|_| r >= 1);
        let mut out = match get(order) {
            Some(w) => self.complex.d(w).into_element(),
            None => Element::zero(gens),
        };
        let mut quadratic = Element::zero(gens);
        for i in 1..order {
            if let (Some(a), Some(b)) = (get(i), get(order - i)) {
                quadratic += &self.gamma_bracket(a, b);
            }
        }
        out += &quadratic.scale(&rat(1, 2));
        let mut cubic = Element::zero(gens);
        for i in 1..order {
            for j in 1..order - i {
                let l = order - i - j;
                if let (Some(a), Some(b), Some(c)) = (get(i), get(j), get(l)) {
                    cubic += &self.phi_bracket(a, b, c);
                }
            }
        }
        out += &cubic.scale(&rat(1, 6));
        out
    }

    /// Largest `J ≤ omegas.len()` such that the residual vanishes through `t^J`.
    pub fn verified_through(&self, omegas: &[Cochain]) -> usize {
        (1..=omegas.len()).take_while(|&j| self.order_residual(omegas, j).is_zero()).count()
    }

    /// `R_{N+1}` for the state's `N = omegas.len()`.
    pub fn obstruction_cochain(&self, omegas: &[Cochain]) -> Cochain {
        let next = omegas.len() + 1;
        let r = -self.order_residual(omegas, next);
        Cochain::new(r, 3).expect("products of 2-cochains are 3-cochains")
    }

    /// Computes `R_{N+1}`, checks that it is closed and decides exactness in
    /// `C²_D`.
    pub fn obstruction(&self, state: &DeformationState, bound: u32) -> Result<ObstructionResult> {
        let n = state.order();
        let verified = self.verified_through(&state.omegas);
        if verified < n {
            return Err(Error::StateNotVerified { verified, needed: n });
        }
        let r = self.obstruction_cochain(&state.omegas);
        let dr = self.complex.d(&r);
        if !dr.is_zero() {
            return Err(Error::ClosednessViolated(dr.to_string()));
        }
        let (verdict, primitive, certificate) = match self.complex.is_exact(&r, bound)? {
            Exactness::Exact(p) => (ExactVerdict::Exact, Some(p), None),
            Exactness::NotExact { certificate, unconditional } => {
                let verdict = if unconditional { ExactVerdict::NotExact } else { ExactVerdict::NotExactAtTruncation };
                (verdict, None, Some(certificate))
            }
        };
        Ok(ObstructionResult { order: n + 1, truncation: bound, residual: r, closed: true, verdict, primitive, certificate })
    }

    /// Appends `ω_{N+1}` when `R_{N+1}` has a primitive in `C²_D`.
    pub fn extend_order(&self, state: &DeformationState, bound: u32) -> Result<Extension> {
        let obstruction = self.obstruction(state, bound)?;
        let Some(primitive) = obstruction.primitive.clone() else {
            return Ok(Extension::Obstructed(obstruction));
        };
        let mut omegas = state.omegas.clone();
        omegas.push(primitive);
        let verified = self.verified_through(&omegas);
        if verified != omegas.len() {
            return Err(Error::StateNotVerified { verified, needed: omegas.len() });
        }
        Ok(Extension::Extended(DeformationState { omegas, residual_ok_to: verified }, obstruction))
    }

    /// Starts a deformation from `ω_1`, which must satisfy `d_L ω_1 = 0`.
    pub fn first_order(&self, omega1: Cochain) -> Result<DeformationState> {
        self.two_form(&omega1)?;
        let d = self.complex.d(&omega1);
        if !d.is_zero() {
            return Err(Error::InvalidFirstOrder(d.to_string()));
        }
        Ok(DeformationState { omegas: vec![omega1], residual_ok_to: 1 })
    }

    /// Re-validates a deserialized state.
    pub fn resume(&self, omegas: Vec<Cochain>) -> Result<DeformationState> {
        for w in &omegas {
            self.two_form(w)?;
        }
        let verified = self.verified_through(&omegas);
        if verified < omegas.len() {
            return Err(Error::StateNotVerified { verified, needed: omegas.len() });
        }
        Ok(DeformationState { omegas, residual_ok_to: verified })
    }
}

/// Verdict on the exactness of an obstruction class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactVerdict {
    Exact,
    /// No primitive exists (point models only).
    NotExact,
    /// No primitive with coefficients of degree at most the truncation.
    NotExactAtTruncation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionResult {
    /// The order `N + 1` this class obstructs.
    pub order: usize,
    pub truncation: u32,
    pub residual: Cochain,
    pub closed: bool,
    pub verdict: ExactVerdict,
    pub primitive: Option<Cochain>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extension {
    /// The extended state together with the obstruction class it resolved.
    Extended(DeformationState, ObstructionResult),
    Obstructed(ObstructionResult),
}

/// A formal deformation `ω_1, …, ω_N` verified through `residual_ok_to`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationState {
    omegas: Vec<Cochain>,
    residual_ok_to: usize,
}

/// Serialized form of a [`DeformationState`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub spec_digest: String,
    pub n: usize,
    pub k: usize,
    pub omegas: Vec<String>,
    pub residual_ok_to: usize,
}

impl DeformationState {
    pub fn omegas(&self) -> &[Cochain] {
        &self.omegas
    }

    pub fn order(&self) -> usize {
        self.omegas.len()
    }

    pub fn residual_ok_to(&self) -> usize {
        self.residual_ok_to
    }

    pub fn to_record(&self, spec_digest: &str) -> StateRecord {
        let gens = self.omegas[0].element().gens();
        StateRecord {
            spec_digest: spec_digest.to_string(),
            n: gens.n(),
            k: gens.k(),
            omegas: self.omegas.iter().map(ToString::to_string).collect(),
            residual_ok_to: self.residual_ok_to,
        }
    }

    /// Parses a record and re-verifies it against `ctx`.
    pub fn from_record(ctx: &DiracContext, record: &StateRecord, spec_digest: &str) -> Result<Self> {
        if record.spec_digest != spec_digest {
            return Err(Error::SpecFile(format!(
                "state was produced for spec {} but the current spec is {}",
                record.spec_digest, spec_digest
            )));
        }
        let gens = ctx.gens();
        if record.n != gens.n() || record.k != gens.k() {
            return Err(Error::SpecFile("state dimensions do not match the spec".into()));
        }
        let omegas = record
            .omegas
            .iter()
            .map(|s| Cochain::new(parse_element(s, gens)?, 2))
            .collect::<Result<Vec<_>>>()?;
        let state = ctx.resume(omegas)?;
        if state.residual_ok_to < record.residual_ok_to {
            return Err(Error::StateNotVerified { verified: state.residual_ok_to, needed: record.residual_ok_to });
        }
        Ok(state)
    }
}

/// Both sides of the Poisson deformation equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoissonEquivalence {
    /// `MC(ω_λ) = 0` in the Poisson model.
    pub mc_vanishes: bool,
    /// `[π + λ, π + λ] = 0` for the Schouten bracket of multivector fields.
    pub schouten_vanishes: bool,
}

impl PoissonEquivalence {
    pub fn agree(&self) -> bool {
        self.mc_vanishes == self.schouten_vanishes
    }
}

/// Compares `MC(ω_λ) = 0` with `[π + λ, π + λ] = 0`. The right-hand side is
/// computed with the Schouten bracket of the standard model, independently
/// of the Poisson model's `Θ`.
pub fn poisson_equivalence_check(spec: &AlgebroidSpec, lambda: &Cochain) -> Result<PoissonEquivalence> {
    let pi = spec
        .poisson_bivector()
        .ok_or_else(|| Error::NotPoisson("spec is not the Courant algebroid of a bivector".into()))?;
    let ctx = DiracContext::from_spec(spec)?;
    ctx.two_form(lambda)?;
    let n = spec.n();
    let standard = AlgebroidSpec::standard(n)?;
    let mu = assemble_theta(&standard).mu().clone();
    let g = standard.gens();
    let bivector = |coeff: &dyn Fn(usize, usize) -> Element| {
        let mut out = Element::zero(g);
        for i in 0..n {
            for j in i + 1..n {
                let c = coeff(i, j);
                if !c.is_zero() {
                    out += &(&c * &(&Element::lower(g, i) * &Element::lower(g, j)));
                }
            }
        }
        out
    };
    let pi_field = bivector(&|i, j| pi[i][j].clone());
    if !schouten(&mu, &pi_field, &pi_field)?.is_zero() {
        return Err(Error::NotPoisson("[pi, pi] != 0".into()));
    }
    let lambda_coeff = |i: usize, j: usize| {
        lambda.element().interior_left(OddGen::Lower(i)).interior_left(OddGen::Lower(j))
    };
    let total = bivector(&|i, j| &pi[i][j] + &lambda_coeff(i, j));
    let schouten_vanishes = schouten(&mu, &total, &total)?.is_zero();
    let mc_vanishes = ctx.mc_residual(lambda)?.is_zero();
    Ok(PoissonEquivalence { mc_vanishes, schouten_vanishes })
}
