//! The Rothstein–Poisson bracket on polynomial sections.
//!
//! In super-Darboux generators the bracket has the constant table
//! `{q^i, r_j} = δ^i_j`, `{a^α, a_β} = {a_β, a^α} = δ^α_β` and is extended as
//! a graded biderivation. For a single pair of terms this is
//!
//! ```text
//! {F, G} = Σ_i (∂F/∂q^i · ∂G/∂r_i − ∂F/∂r_i · ∂G/∂q^i)
//!        + Σ_{g ∈ word(F)} (F ∂⃖/∂g) · (∂⃗/∂g* G)
//! ```
//!
//! where `∂⃖` differentiates from the right, `∂⃗` from the left and `g*` is the
//! generator paired with `g`.
//!
//! In the curved basis `p_i` the bracket depends on a connection `Γ` on `L`
//! and is computed from the covariant formula
//!
//! ```text
//! {φ, ψ} = Σ_i (∇_i φ · ∂ψ/∂p_i − ∂φ/∂p_i · ∇_i ψ)
//!        + Σ_{i,j} R_{ij} · ∂φ/∂p_i · ∂ψ/∂p_j
//!        + Σ_{g ∈ word(φ)} (φ ∂⃖/∂g) · (∂⃗/∂g* ψ)
//! ```
//!
//! with `R_{ij} = R^β_{αij} a_β a^α`. The two bases are related by
//! `p_i = r_i + Γ^β_{iα} a^α a_β`.

use crate::error::{Error, Result};
use crate::superalg::word::{bits, left_extract_sign, right_extract_sign};
use crate::superalg::{int, EvenGen, Element, GeneratorSet, Monomial, MomentumBasis, Rational};

fn require_basis(x: &Element, basis: MomentumBasis) -> Result<()> {
    if x.gens().basis() != basis {
        return Err(Error::BasisMismatch(format!(
            "expected momenta {}, got {}",
            basis.symbol(),
            x.gens().basis().symbol()
        )));
    }
    Ok(())
}

fn require_same(x: &Element, y: &Element) -> Result<()> {
    if x.gens() != y.gens() {
        return Err(Error::GeneratorMismatch { left: x.gens(), right: y.gens() });
    }
    Ok(())
}

fn partner_bit(bit: u32, k: usize) -> u32 {
    let k = k as u32;
    if bit < k {
        bit + k
    } else {
        bit - k
    }
}

/// Adds `c1 c2 s · m1 m2` to `out` where both monomials are already reduced.
fn push_product(out: &mut Element, m1: &Monomial, m2: &Monomial, coeff: Rational, negative: bool) {
    if let Some((m, swap)) = m1.times(m2) {
        out.add_signed_term(m, coeff, negative ^ swap);
    }
}

/// Contribution of the odd pairing term for one pair of monomials.
fn pairing_terms(out: &mut Element, m1: &Monomial, c1: &Rational, m2: &Monomial, c2: &Rational, k: usize) {
    let (w1, w2) = (m1.odd_word(), m2.odd_word());
    for b in bits(w1) {
        let pb = partner_bit(b, k);
        if w2 & (1 << pb) == 0 {
            continue;
        }
        let left = m1.with_odd(w1 & !(1 << b));
        let right = m2.with_odd(w2 & !(1 << pb));
        let negative = right_extract_sign(w1, b) ^ left_extract_sign(w2, pb);
        push_product(out, &left, &right, c1 * c2, negative);
    }
}

/// The Rothstein–Poisson bracket in super-Darboux generators.
pub fn bracket(x: &Element, y: &Element) -> Result<Element> {
    require_same(x, y)?;
    require_basis(x, MomentumBasis::Darboux)?;
    let gens = x.gens();
    let n = gens.n();
    let mut out = Element::zero(gens);
    for (m1, c1) in x.terms() {
        for (m2, c2) in y.terms() {
            for i in 0..n {
                if let (Some((a, ea)), Some((b, eb))) =
                    (m1.lowered(EvenGen::Q(i)), m2.lowered(EvenGen::Momentum(i)))
                {
                    push_product(&mut out, &a, &b, c1 * c2 * int((ea * eb) as i64), false);
                }
                if let (Some((a, ea)), Some((b, eb))) =
                    (m1.lowered(EvenGen::Momentum(i)), m2.lowered(EvenGen::Q(i)))
                {
                    push_product(&mut out, &a, &b, c1 * c2 * int((ea * eb) as i64), true);
                }
            }
            pairing_terms(&mut out, m1, c1, m2, c2, gens.k());
        }
    }
    Ok(out)
}

fn check_function(e: &Element, what: &str) -> Result<()> {
    if !e.is_function() {
        return Err(Error::InvalidSpec(format!("{what} must be a polynomial in q, got {e}")));
    }
    Ok(())
}

/// Connection coefficients `Γ^β_{iα}` on `L`, polynomial in the base.
///
/// Stored as `gamma[i][α][β] = Γ^β_{iα}` (zero-based indices).
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionData {
    n: usize,
    k: usize,
    gamma: Vec<Vec<Vec<Element>>>,
}

impl ConnectionData {
    /// The flat connection `Γ = 0`.
    pub fn zero(n: usize, k: usize) -> Self {
        let z = Element::zero(GeneratorSet::darboux(n, k));
        ConnectionData { n, k, gamma: vec![vec![vec![z; k]; k]; n] }
    }

    /// Builds a connection from a nested `[i][α][β]` array.
    pub fn new(n: usize, k: usize, gamma: Vec<Vec<Vec<Element>>>) -> Result<Self> {
        let mut conn = ConnectionData::zero(n, k);
        if gamma.len() != n || gamma.iter().any(|row| row.len() != k || row.iter().any(|r| r.len() != k)) {
            return Err(Error::InvalidSpec(format!("connection must have shape ({n}, {k}, {k})")));
        }
        for (i, row) in gamma.into_iter().enumerate() {
            for (a, col) in row.into_iter().enumerate() {
                for (b, value) in col.into_iter().enumerate() {
                    conn.set(i, a, b, value)?;
                }
            }
        }
        Ok(conn)
    }

    /// Sets `Γ^β_{iα}`.
    pub fn set(&mut self, i: usize, alpha: usize, beta: usize, value: Element) -> Result<()> {
        if i >= self.n || alpha >= self.k || beta >= self.k {
            return Err(Error::InvalidSpec(format!(
                "connection index ({i}, {alpha}, {beta}) out of range for n={}, k={}",
                self.n, self.k
            )));
        }
        check_function(&value, "connection coefficient")?;
        let gens = GeneratorSet::darboux(self.n, self.k);
        if value.gens().n() != self.n || value.gens().k() != self.k {
            return Err(Error::GeneratorMismatch { left: gens, right: value.gens() });
        }
        self.gamma[i][alpha][beta] = value.rebase(gens)?;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `Γ^β_{iα}` as a function over `gens`.
    pub fn coefficient(&self, i: usize, alpha: usize, beta: usize, gens: GeneratorSet) -> Element {
        self.gamma[i][alpha][beta].rebase(gens).expect("functions rebase freely")
    }

    /// Nonzero coefficients as `([i, α, β], Γ^β_{iα})`, zero-based.
    pub fn entries(&self) -> Vec<([usize; 3], Element)> {
        let mut out = Vec::new();
        for (i, row) in self.gamma.iter().enumerate() {
            for (a, col) in row.iter().enumerate() {
                for (b, value) in col.iter().enumerate() {
                    if !value.is_zero() {
                        out.push(([i, a, b], value.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(Element::is_zero)
    }

    fn check_gens(&self, gens: GeneratorSet) -> Result<()> {
        if gens.n() != self.n || gens.k() != self.k {
            return Err(Error::GeneratorMismatch { left: GeneratorSet::darboux(self.n, self.k), right: gens });
        }
        Ok(())
    }

    /// Coefficient table over `gens`, indexed like the storage.
    fn table(&self, gens: GeneratorSet) -> Vec<Vec<Vec<Element>>> {
        self.gamma
            .iter()
            .map(|row| row.iter().map(|col| col.iter().map(|g| g.rebase(gens).expect("function")).collect()).collect())
            .collect()
    }

    /// The curvature of this connection.
    pub fn curvature(&self) -> CurvatureData {
        CurvatureData::of(self)
    }

    /// The even element `Γ^β_{iα} a^α a_β` over `gens`.
    fn shift(&self, i: usize, gens: GeneratorSet) -> Element {
        let mut out = Element::zero(gens);
        for a in 0..self.k {
            for b in 0..self.k {
                let g = &self.gamma[i][a][b];
                if g.is_zero() {
                    continue;
                }
                let g = g.rebase(gens).expect("function");
                out += &(&g * &(&Element::upper(gens, a) * &Element::lower(gens, b)));
            }
        }
        out
    }
}

/// Curvature `R^β_{αij}` of a connection, stored as `r[α][β][i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData {
    n: usize,
    k: usize,
    r: Vec<Vec<Vec<Vec<Element>>>>,
}

impl CurvatureData {
    fn of(conn: &ConnectionData) -> Self {
        let (n, k) = (conn.n, conn.k);
        let g = &conn.gamma;
        let gens = GeneratorSet::darboux(n, k);
        let mut r = vec![vec![vec![vec![Element::zero(gens); n]; n]; k]; k];
        for a in 0..k {
            for b in 0..k {
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = &g[j][a][b].partial(EvenGen::Q(i)) - &g[i][a][b].partial(EvenGen::Q(j));
                        for c in 0..k {
                            acc += &(&g[i][c][b] * &g[j][a][c]);
                            acc -= &(&g[j][c][b] * &g[i][a][c]);
                        }
                        r[a][b][i][j] = acc;
                    }
                }
            }
        }
        CurvatureData { n, k, r }
    }

    /// `R^β_{αij}`.
    pub fn component(&self, alpha: usize, beta: usize, i: usize, j: usize) -> &Element {
        &self.r[alpha][beta][i][j]
    }

    pub fn is_flat(&self) -> bool {
        self.r.iter().flatten().flatten().flatten().all(Element::is_zero)
    }

    /// The even element `R^β_{αij} a_β a^α` over `gens`.
    fn form(&self, i: usize, j: usize, gens: GeneratorSet) -> Element {
        let mut out = Element::zero(gens);
        for a in 0..self.k {
            for b in 0..self.k {
                let c = &self.r[a][b][i][j];
                if c.is_zero() {
                    continue;
                }
                let c = c.rebase(gens).expect("function");
                out += &(&c * &(&Element::lower(gens, b) * &Element::upper(gens, a)));
            }
        }
        out
    }
}

/// Covariant derivative `∇_i`: `∂/∂q^i` plus the connection acting on odd
/// generators by `∇_i a_β = Γ^γ_{iβ} a_γ` and `∇_i a^β = −Γ^β_{iγ} a^γ`.
fn covariant(x: &Element, i: usize, gamma: &[Vec<Vec<Element>>]) -> Element {
    let gens = x.gens();
    let k = gens.k();
    let mut out = x.partial(EvenGen::Q(i));
    for (m, c) in x.terms() {
        let w = m.odd_word();
        for b in bits(w) {
            let rest = w & !(1 << b);
            let old_sign = left_extract_sign(w, b);
            for target in 0..k {
                let (coef, new_bit, negate) = if (b as usize) < k {
                    (&gamma[i][b as usize][target], target as u32, false)
                } else {
                    let beta = b as usize - k;
                    (&gamma[i][target][beta], (k + target) as u32, true)
                };
                if coef.is_zero() || rest & (1 << new_bit) != 0 {
                    continue;
                }
                let new_word = rest | (1 << new_bit);
                let negative = old_sign ^ left_extract_sign(new_word, new_bit) ^ negate;
                let value = if negative { -c.clone() } else { c.clone() };
                out += &(coef * &Element::monomial(gens, m.with_odd(new_word), value));
            }
        }
    }
    out
}

/// The Rothstein–Poisson bracket in the curved basis of `conn`.
pub fn bracket_curved(x: &Element, y: &Element, conn: &ConnectionData) -> Result<Element> {
    require_same(x, y)?;
    require_basis(x, MomentumBasis::Curved)?;
    let gens = x.gens();
    conn.check_gens(gens)?;
    let n = gens.n();
    let gamma = conn.table(gens);
    let curvature = conn.curvature();

    let dx: Vec<Element> = (0..n).map(|i| x.partial(EvenGen::Momentum(i))).collect();
    let dy: Vec<Element> = (0..n).map(|i| y.partial(EvenGen::Momentum(i))).collect();
    let mut out = Element::zero(gens);
    for i in 0..n {
        if !dy[i].is_zero() {
            out += &(&covariant(x, i, &gamma) * &dy[i]);
        }
        if !dx[i].is_zero() {
            out -= &(&dx[i] * &covariant(y, i, &gamma));
        }
    }
    if !curvature.is_flat() {
        for i in 0..n {
            for j in 0..n {
                if dx[i].is_zero() || dy[j].is_zero() {
                    continue;
                }
                let form = curvature.form(i, j, gens);
                if !form.is_zero() {
                    out += &(&form * &(&dx[i] * &dy[j]));
                }
            }
        }
    }
    for (m1, c1) in x.terms() {
        for (m2, c2) in y.terms() {
            pairing_terms(&mut out, m1, c1, m2, c2, gens.k());
        }
    }
    Ok(out)
}

/// Rewrites a curved-basis element in super-Darboux generators.
pub fn to_darboux(x: &Element, conn: &ConnectionData) -> Result<Element> {
    require_basis(x, MomentumBasis::Curved)?;
    conn.check_gens(x.gens())?;
    let target = x.gens().with_basis(MomentumBasis::Darboux);
    if !x.has_momenta() {
        return Ok(x.relabel_momenta(MomentumBasis::Darboux));
    }
    let images: Vec<Element> =
        (0..target.n()).map(|i| &Element::momentum(target, i) + &conn.shift(i, target)).collect();
    Ok(x.substitute_momenta(target, &images))
}

/// Rewrites a super-Darboux element in the curved basis of `conn`.
pub fn to_curved(x: &Element, conn: &ConnectionData) -> Result<Element> {
    require_basis(x, MomentumBasis::Darboux)?;
    conn.check_gens(x.gens())?;
    let target = x.gens().with_basis(MomentumBasis::Curved);
    if !x.has_momenta() {
        return Ok(x.relabel_momenta(MomentumBasis::Curved));
    }
    let images: Vec<Element> =
        (0..target.n()).map(|i| &Element::momentum(target, i) - &conn.shift(i, target)).collect();
    Ok(x.substitute_momenta(target, &images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::{parse_element, OddGen};

    fn el(text: &str, gens: GeneratorSet) -> Element {
        parse_element(text, gens).unwrap()
    }

    #[test]
    fn generator_table() {
        let g = GeneratorSet::darboux(2, 2);
        assert_eq!(bracket(&el("q1", g), &el("r1", g)).unwrap(), Element::one(g));
        assert_eq!(bracket(&el("r1", g), &el("q1", g)).unwrap(), -Element::one(g));
        assert!(bracket(&el("q1", g), &el("r2", g)).unwrap().is_zero());
        assert_eq!(bracket(&el("f1", g), &el("e1", g)).unwrap(), Element::one(g));
        assert_eq!(bracket(&el("e1", g), &el("f1", g)).unwrap(), Element::one(g));
        assert!(bracket(&el("e1", g), &el("e2", g)).unwrap().is_zero());
        assert!(bracket(&el("e1", g), &el("f2", g)).unwrap().is_zero());
        assert!(bracket(&el("q1", g), &el("e1", g)).unwrap().is_zero());
    }

    #[test]
    fn rejects_curved_input() {
        let c = GeneratorSet::curved(1, 1);
        assert!(matches!(bracket(&el("p1", c), &el("q1", c)), Err(Error::BasisMismatch(_))));
        let d = GeneratorSet::darboux(1, 1);
        assert!(bracket_curved(&el("r1", d), &el("q1", d), &ConnectionData::zero(1, 1)).is_err());
    }

    #[test]
    fn odd_pairing_signs() {
        let g = GeneratorSet::darboux(0, 2);
        // {a^1, a_1 a_2} = a_2 and {a^2, a_1 a_2} = -a_1
        assert_eq!(bracket(&el("f1", g), &el("e1*e2", g)).unwrap(), el("e2", g));
        assert_eq!(bracket(&el("f2", g), &el("e1*e2", g)).unwrap(), el("-e1", g));
        // {a_1 a_2, a^2} differentiates from the right
        assert_eq!(bracket(&el("e1*e2", g), &el("f2", g)).unwrap(), el("e1", g));
    }

    #[test]
    fn nonflat_curved_table() {
        let c = GeneratorSet::curved(1, 1);
        let mut conn = ConnectionData::zero(1, 1);
        conn.set(0, 0, 0, el("q1", c)).unwrap();
        assert!(bracket_curved(&el("p1", c), &el("p1", c), &conn).unwrap().is_zero());
        assert_eq!(bracket_curved(&el("p1", c), &el("e1", c), &conn).unwrap(), el("-q1*e1", c));
        assert_eq!(bracket_curved(&el("p1", c), &el("f1", c), &conn).unwrap(), el("q1*f1", c));
        assert_eq!(bracket_curved(&el("q1", c), &el("p1", c), &conn).unwrap(), Element::one(c));
    }

    #[test]
    fn basis_change_examples() {
        let c = GeneratorSet::curved(1, 1);
        let d = GeneratorSet::darboux(1, 1);
        assert_eq!(to_darboux(&el("p1", c), &ConnectionData::zero(1, 1)).unwrap(), el("r1", d));
        let mut conn = ConnectionData::zero(1, 1);
        conn.set(0, 0, 0, Element::one(d)).unwrap();
        assert_eq!(to_darboux(&el("p1", c), &conn).unwrap(), el("r1 + f1*e1", d));
        let x = el("p1^2*e1 + q1*p1*f1", c);
        assert_eq!(to_curved(&to_darboux(&x, &conn).unwrap(), &conn).unwrap(), x);
    }

    #[test]
    fn curvature_is_antisymmetric() {
        let g = GeneratorSet::darboux(2, 2);
        let mut conn = ConnectionData::zero(2, 2);
        conn.set(0, 0, 1, el("q2", g)).unwrap();
        conn.set(1, 1, 0, el("q1", g)).unwrap();
        conn.set(1, 0, 0, el("2", g)).unwrap();
        let r = conn.curvature();
        assert!(!r.is_flat());
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(*r.component(a, b, i, j), -r.component(a, b, j, i).clone());
                    }
                }
            }
        }
    }

    #[test]
    fn curved_lower_generators() {
        let c = GeneratorSet::curved(1, 2);
        let mut conn = ConnectionData::zero(1, 2);
        conn.set(0, 0, 1, Element::one(c)).unwrap();
        // ∇ a_1 = a_2, ∇ a^2 = -a^1
        let got = bracket_curved(&el("p1", c), &Element::odd(c, OddGen::Lower(0)), &conn).unwrap();
        assert_eq!(got, el("-e2", c));
        let got = bracket_curved(&el("p1", c), &el("f2", c), &conn).unwrap();
        assert_eq!(got, el("f1", c));
    }
}
