//! Generating elements of Courant algebroids on `E = L ⊕ L*`.
//!
//! A Courant algebroid structure is encoded by an element `Θ` of total
//! degree 3 with `{Θ, Θ} = 0`. It splits by bidegree into
//! `ψ ∈ (0,3)`, `μ ∈ (1,2)`, `γ ∈ (2,1)` and `φ ∈ (3,0)`. The bracket,
//! anchor and differential of the algebroid are derived from `Θ`:
//!
//! ```text
//! ⟦e₁, e₂⟧ = {{e₁, Θ}, e₂}     ρ(e) f = {{e, Θ}, f}     D f = {Θ, f}
//! ```

mod gauge;
mod spec;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rothstein::{bracket, ConnectionData};
use crate::superalg::{rat, Element, GeneratorSet, MomentumBasis, OddGen};

pub use gauge::{is_gauge_automorphism, GaugeField, GaugeReport};
pub use spec::{AlgebroidSpec, SpecEntries};

fn br(x: &Element, y: &Element) -> Element {
    bracket(x, y).expect("operands share a super-Darboux generator set")
}

/// The four bidegree components of a generating element `Θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaDecomposition {
    psi: Element,
    mu: Element,
    gamma: Element,
    phi: Element,
}

impl ThetaDecomposition {
    /// Checks the bidegree of every component.
    pub fn new(psi: Element, mu: Element, gamma: Element, phi: Element) -> Result<Self> {
        for (name, e, (r, s)) in [("psi", &psi, (0, 3)), ("mu", &mu, (1, 2)), ("gamma", &gamma, (2, 1)), ("phi", &phi, (3, 0))] {
            if !e.has_bidegree(r, s) {
                return Err(Error::Degree(format!("{name} must have bidegree ({r},{s}), got {e}")));
            }
        }
        let gens = psi.gens();
        if [&mu, &gamma, &phi].iter().any(|e| e.gens() != gens) {
            return Err(Error::InvalidSpec("theta components over different generator sets".into()));
        }
        Ok(ThetaDecomposition { psi, mu, gamma, phi })
    }

    /// Splits an element of total degree 3 into its bidegree components.
    pub fn split(theta: &Element) -> Result<Self> {
        if !theta.has_total_degree(3) {
            return Err(Error::Degree(format!("theta must have total degree 3, got {theta}")));
        }
        ThetaDecomposition::new(
            theta.project_bidegree(0, 3),
            theta.project_bidegree(1, 2),
            theta.project_bidegree(2, 1),
            theta.project_bidegree(3, 0),
        )
    }

    pub fn psi(&self) -> &Element {
        &self.psi
    }

    pub fn mu(&self) -> &Element {
        &self.mu
    }

    pub fn gamma(&self) -> &Element {
        &self.gamma
    }

    pub fn phi(&self) -> &Element {
        &self.phi
    }

    pub fn gens(&self) -> GeneratorSet {
        self.mu.gens()
    }

    /// `Θ = ψ + μ + γ + φ`.
    pub fn theta(&self) -> Element {
        let mut t = self.psi.clone();
        t += &self.mu;
        t += &self.gamma;
        t += &self.phi;
        t
    }
}

fn triple(gens: GeneratorSet, a: OddGen, b: OddGen, c: OddGen) -> Element {
    &(&Element::odd(gens, a) * &Element::odd(gens, b)) * &Element::odd(gens, c)
}

/// `Σ ½ t[α][β][γ] x^α x^β y_γ` with the given generator kinds.
fn cubic_term(
    gens: GeneratorSet,
    coeff: impl Fn(usize, usize, usize) -> Element,
    first: fn(usize) -> OddGen,
    last: fn(usize) -> OddGen,
    scale: crate::Rational,
) -> Element {
    let k = gens.k();
    let mut out = Element::zero(gens);
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let t = coeff(a, b, c);
                if !t.is_zero() {
                    out += &(&t * &triple(gens, first(a), first(b), last(c)));
                }
            }
        }
    }
    out.scale(&scale)
}

/// `−Σ m_i ρ^i(x_α) y^α` where `y` is the partner of `x`.
fn anchor_term(gens: GeneratorSet, rho: impl Fn(usize, usize) -> Element, partner: fn(usize) -> OddGen) -> Element {
    let mut out = Element::zero(gens);
    for a in 0..gens.k() {
        for i in 0..gens.n() {
            let r = rho(a, i);
            if !r.is_zero() {
                out -= &(&(&r * &Element::momentum(gens, i)) * &Element::odd(gens, partner(a)));
            }
        }
    }
    out
}

fn rebased(e: &Element, gens: GeneratorSet) -> Element {
    e.rebase(gens).expect("functions rebase freely")
}

fn assemble_with(spec: &AlgebroidSpec, gens: GeneratorSet, t_low: &Cube, t_up: &Cube, sign: i64) -> ThetaDecomposition {
    let half = rat(sign, 2);
    let mu = &anchor_term(gens, |a, i| rebased(spec.rho_l(a, i), gens), OddGen::Upper)
        + &cubic_term(gens, |a, b, c| rebased(&t_low[a][b][c], gens), OddGen::Upper, OddGen::Lower, half.clone());
    let gamma = &anchor_term(gens, |a, i| rebased(spec.rho_lstar(a, i), gens), OddGen::Lower)
        + &cubic_term(gens, |a, b, c| rebased(&t_up[a][b][c], gens), OddGen::Lower, OddGen::Upper, half);
    let phi = cubic_term(gens, |a, b, c| rebased(spec.phi(a, b, c), gens), OddGen::Lower, OddGen::Lower, rat(1, 6));
    let psi = cubic_term(gens, |a, b, c| rebased(spec.psi(a, b, c), gens), OddGen::Upper, OddGen::Upper, rat(1, 6));
    ThetaDecomposition { psi, mu, gamma, phi }
}

type Cube = Vec<Vec<Vec<Element>>>;

fn table(k: usize, f: impl Fn(usize, usize, usize) -> Element) -> Cube {
    (0..k).map(|a| (0..k).map(|b| (0..k).map(|c| f(a, b, c)).collect()).collect()).collect()
}

/// Assembles `Θ` in super-Darboux generators:
///
/// ```text
/// μ = −r_i ρ^i(a_α) a^α − ½ c_{αβ}^γ a^α a^β a_γ
/// γ = −r_i ρ^i(a^α) a_α − ½ c^{αβ}_γ a_α a_β a^γ
/// φ = ⅙ φ^{αβγ} a_α a_β a_γ        ψ = ⅙ ψ_{αβγ} a^α a^β a^γ
/// ```
pub fn assemble_theta(spec: &AlgebroidSpec) -> ThetaDecomposition {
    let k = spec.k();
    let c_low = table(k, |a, b, c| spec.c_low(a, b, c).clone());
    let c_up = table(k, |a, b, c| spec.c_up(a, b, c).clone());
    assemble_with(spec, spec.gens(), &c_low, &c_up, -1)
}

/// Torsion components of a spec relative to a connection.
#[derive(Clone, Debug, PartialEq)]
pub struct Torsion {
    /// `T_{αβ}^γ` as `t_low[α][β][γ]`.
    pub t_low: Vec<Vec<Vec<Element>>>,
    /// `T^{αβ}_γ` as `t_up[α][β][γ]`.
    pub t_up: Vec<Vec<Vec<Element>>>,
    /// `φ^{αβγ}`, unchanged by the connection.
    pub phi: Vec<Vec<Vec<Element>>>,
}

/// Torsion of the spec's bracket with respect to `conn`:
///
/// ```text
/// T_{αβ}^γ = ρ^i(a_α) Γ^γ_{iβ} − ρ^i(a_β) Γ^γ_{iα} − c_{αβ}^γ
/// T^{αβ}_γ = ρ^i(a^β) Γ^α_{iγ} − ρ^i(a^α) Γ^β_{iγ} − c^{αβ}_γ
/// ```
pub fn torsion(spec: &AlgebroidSpec, conn: Option<&ConnectionData>) -> Result<Torsion> {
    let conn = conn.ok_or(Error::MissingConnection)?;
    if conn.n() != spec.n() || conn.k() != spec.k() {
        return Err(Error::InvalidSpec("connection dimensions differ from the spec".into()));
    }
    let gens = spec.gens();
    let (n, k) = (spec.n(), spec.k());
    let gamma = |i: usize, a: usize, b: usize| conn.coefficient(i, a, b, gens);
    let t_low = table(k, |a, b, c| {
        let mut t = -spec.c_low(a, b, c).clone();
        for i in 0..n {
            t += &(spec.rho_l(a, i) * &gamma(i, b, c));
            t -= &(spec.rho_l(b, i) * &gamma(i, a, c));
        }
        t
    });
    let t_up = table(k, |a, b, c| {
        let mut t = -spec.c_up(a, b, c).clone();
        for i in 0..n {
            t += &(spec.rho_lstar(b, i) * &gamma(i, c, a));
            t -= &(spec.rho_lstar(a, i) * &gamma(i, c, b));
        }
        t
    });
    let phi = table(k, |a, b, c| spec.phi(a, b, c).clone());
    Ok(Torsion { t_low, t_up, phi })
}

/// Assembles `Θ` in the curved basis of the spec's connection:
///
/// ```text
/// μ = −p_i ρ^i(a_α) a^α + ½ T_{αβ}^γ a^α a^β a_γ
/// γ = −p_i ρ^i(a^α) a_α + ½ T^{αβ}_γ a_α a_β a^γ
/// ```
///
/// with `φ`, `ψ` as in the Darboux assembly.
pub fn assemble_theta_curved(spec: &AlgebroidSpec, conn: Option<&ConnectionData>) -> Result<Element> {
    let t = torsion(spec, conn)?;
    let gens = spec.gens().with_basis(MomentumBasis::Curved);
    Ok(assemble_with(spec, gens, &t.t_low, &t.t_up, 1).theta())
}

/// One of the five bidegree components of `{Θ, Θ} = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentResidual {
    pub name: &'static str,
    pub bidegree: (u32, u32),
    #[serde(serialize_with = "crate::report::serialize_element")]
    pub residual: Element,
}

impl ComponentResidual {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Outcome of checking the master equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MasterReport {
    #[serde(serialize_with = "crate::report::serialize_element")]
    pub theta_theta: Element,
    pub components: Vec<ComponentResidual>,
}

impl MasterReport {
    /// True iff every residual is literally zero.
    pub fn passed(&self) -> bool {
        self.theta_theta.is_zero() && self.components.iter().all(ComponentResidual::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ComponentResidual> {
        self.components.iter().filter(|c| !c.passed())
    }

    pub fn component(&self, name: &str) -> Option<&ComponentResidual> {
        self.components.iter().find(|c| c.name == name)
    }
}

pub const MU_PSI: &str = "{mu,psi}";
pub const MU_MU_GAMMA_PSI: &str = "1/2{mu,mu}+{gamma,psi}";
pub const PHI_PSI_MU_GAMMA: &str = "{phi,psi}+{mu,gamma}";
pub const GAMMA_GAMMA_MU_PHI: &str = "1/2{gamma,gamma}+{mu,phi}";
pub const GAMMA_PHI: &str = "{gamma,phi}";

/// Computes `{Θ, Θ}` and its five bidegree components.
pub fn verify_master(theta: &ThetaDecomposition) -> MasterReport {
    let ThetaDecomposition { psi, mu, gamma, phi } = theta;
    let half = rat(1, 2);
    let components = vec![
        ComponentResidual { name: MU_PSI, bidegree: (0, 4), residual: br(mu, psi) },
        ComponentResidual {
            name: MU_MU_GAMMA_PSI,
            bidegree: (1, 3),
            residual: &br(mu, mu).scale(&half) + &br(gamma, psi),
        },
        ComponentResidual { name: PHI_PSI_MU_GAMMA, bidegree: (2, 2), residual: &br(phi, psi) + &br(mu, gamma) },
        ComponentResidual {
            name: GAMMA_GAMMA_MU_PHI,
            bidegree: (3, 1),
            residual: &br(gamma, gamma).scale(&half) + &br(mu, phi),
        },
        ComponentResidual { name: GAMMA_PHI, bidegree: (4, 0), residual: br(gamma, phi) },
    ];
    let t = theta.theta();
    MasterReport { theta_theta: br(&t, &t), components }
}

fn require_section(e: &Element, what: &str) -> Result<()> {
    if e.gens().basis() != MomentumBasis::Darboux {
        return Err(Error::BasisMismatch(format!("{what} must be written with momenta r")));
    }
    if !e.has_total_degree(1) {
        return Err(Error::Degree(format!("{what} must have total degree 1, got {e}")));
    }
    Ok(())
}

fn require_function(f: &Element, what: &str) -> Result<()> {
    if !f.is_function() {
        return Err(Error::Degree(format!("{what} must have bidegree (0,0), got {f}")));
    }
    Ok(())
}

fn require_gens(theta: &ThetaDecomposition, e: &Element) -> Result<()> {
    if e.gens() != theta.gens() {
        return Err(Error::GeneratorMismatch { left: theta.gens(), right: e.gens() });
    }
    Ok(())
}

/// The derived bracket `⟦e₁, e₂⟧ = {{e₁, Θ}, e₂}`.
pub fn derived_bracket(theta: &ThetaDecomposition, e1: &Element, e2: &Element) -> Result<Element> {
    require_section(e1, "first argument")?;
    require_section(e2, "second argument")?;
    require_gens(theta, e1)?;
    require_gens(theta, e2)?;
    Ok(br(&br(e1, &theta.theta()), e2))
}

/// The derived anchor `ρ(e) f = {{e, Θ}, f}`.
pub fn derived_anchor(theta: &ThetaDecomposition, e: &Element, f: &Element) -> Result<Element> {
    require_section(e, "section")?;
    require_function(f, "function")?;
    require_gens(theta, e)?;
    require_gens(theta, f)?;
    Ok(br(&br(e, &theta.theta()), f))
}

/// `D f = {Θ, f}`.
pub fn d_theta(theta: &ThetaDecomposition, f: &Element) -> Result<Element> {
    require_function(f, "function")?;
    require_gens(theta, f)?;
    Ok(br(&theta.theta(), f))
}

/// The canonical pairing `⟨e₁, e₂⟩ = Σ_α (e₁_α e₂^α + e₁^α e₂_α)` computed
/// from coefficients.
pub fn pairing(e1: &Element, e2: &Element) -> Result<Element> {
    for (what, e) in [("first argument", e1), ("second argument", e2)] {
        if !e.has_total_degree(1) || e.has_momenta() {
            return Err(Error::Degree(format!("{what} must be a section of L ⊕ L*, got {e}")));
        }
    }
    if e1.gens() != e2.gens() {
        return Err(Error::GeneratorMismatch { left: e1.gens(), right: e2.gens() });
    }
    let mut out = Element::zero(e1.gens());
    for a in 0..e1.gens().k() {
        out += &(&e1.interior_left(OddGen::Upper(a)) * &e2.interior_left(OddGen::Lower(a)));
        out += &(&e1.interior_left(OddGen::Lower(a)) * &e2.interior_left(OddGen::Upper(a)));
    }
    Ok(out)
}

/// Structural labels derived from the components of `Θ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub psi_zero: bool,
    pub phi_zero: bool,
    pub mu_phi_zero: bool,
    pub kind: AlgebroidKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebroidKind {
    /// `ψ = 0` and `{μ, φ} = 0`.
    LieBialgebroid,
    /// `ψ = 0`: `L` is a Lie algebroid, `L*` only quasi.
    LieQuasiBialgebroid,
    /// `φ = 0`, `ψ ≠ 0`.
    QuasiLieBialgebroid,
    ProtoBialgebroid,
}

impl Classification {
    pub fn l_dirac(&self) -> bool {
        self.psi_zero
    }

    pub fn lstar_dirac(&self) -> bool {
        self.phi_zero
    }
}

impl fmt::Display for AlgebroidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebroidKind::LieBialgebroid => "Lie bialgebroid",
            AlgebroidKind::LieQuasiBialgebroid => "Lie quasi-bialgebroid",
            AlgebroidKind::QuasiLieBialgebroid => "quasi-Lie bialgebroid",
            AlgebroidKind::ProtoBialgebroid => "proto-bialgebroid",
        })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dirac = match (self.l_dirac(), self.lstar_dirac()) {
            (true, true) => "L and L* Dirac",
            (true, false) => "L Dirac",
            (false, true) => "L* Dirac",
            (false, false) => "neither L nor L* Dirac",
        };
        write!(f, "{dirac}, {}", self.kind)
    }
}

/// Classifies a master-passing `Θ`.
pub fn classify(theta: &ThetaDecomposition) -> Result<Classification> {
    let report = verify_master(theta);
    if let Some(bad) = report.failures().next() {
        return Err(Error::MasterFailed(format!("{} = {}", bad.name, bad.residual)));
    }
    let psi_zero = theta.psi.is_zero();
    let phi_zero = theta.phi.is_zero();
    let mu_phi_zero = br(&theta.mu, &theta.phi).is_zero();
    let kind = match (psi_zero, phi_zero, mu_phi_zero) {
        (true, _, true) => AlgebroidKind::LieBialgebroid,
        (true, _, false) => AlgebroidKind::LieQuasiBialgebroid,
        (false, true, _) => AlgebroidKind::QuasiLieBialgebroid,
        (false, false, _) => AlgebroidKind::ProtoBialgebroid,
    };
    Ok(Classification { psi_zero, phi_zero, mu_phi_zero, kind })
}
