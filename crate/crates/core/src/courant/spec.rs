use crate::error::{Error, Result};
use crate::rothstein::ConnectionData;
use crate::superalg::{EvenGen, Element, GeneratorSet, MomentumBasis};

/// Polynomial structure data of a Courant algebroid on `L ⊕ L*`.
///
/// Index conventions (zero-based):
/// - `rho_l(α, i)` is `ρ^i(a_α)`, `rho_lstar(α, i)` is `ρ^i(a^α)`;
/// - `c_low(α, β, γ)` is `c_{αβ}^γ`, antisymmetric in `(α, β)`;
/// - `c_up(α, β, γ)` is `c^{αβ}_γ`, antisymmetric in `(α, β)`;
/// - `phi(α, β, γ)` is `φ^{αβγ}` and `psi(α, β, γ)` is `ψ_{αβγ}`, totally
///   antisymmetric.
///
/// Setters keep the antisymmetries: writing one ordering writes every
/// permutation with its sign, and diagonal entries must be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebroidSpec {
    n: usize,
    k: usize,
    rho_l: Vec<Vec<Element>>,
    rho_lstar: Vec<Vec<Element>>,
    c_low: Vec<Vec<Vec<Element>>>,
    c_up: Vec<Vec<Vec<Element>>>,
    phi: Vec<Vec<Vec<Element>>>,
    psi: Vec<Vec<Vec<Element>>>,
    connection: Option<ConnectionData>,
}

fn cube(k: usize, zero: &Element) -> Vec<Vec<Vec<Element>>> {
    vec![vec![vec![zero.clone(); k]; k]; k]
}

const PERMUTATIONS: [([usize; 3], bool); 6] = [
    ([0, 1, 2], false),
    ([1, 2, 0], false),
    ([2, 0, 1], false),
    ([1, 0, 2], true),
    ([0, 2, 1], true),
    ([2, 1, 0], true),
];

fn set_alternating(table: &mut [Vec<Vec<Element>>], idx: [usize; 3], value: Element, what: &str) -> Result<()> {
    let [a, b, c] = idx;
    if a == b || b == c || a == c {
        if value.is_zero() {
            return Ok(());
        }
        return Err(Error::InvalidSpec(format!(
            "{what}[{},{},{}] must vanish: the tensor is totally antisymmetric",
            a + 1,
            b + 1,
            c + 1
        )));
    }
    let neg = -&value;
    for (perm, odd) in PERMUTATIONS {
        let v = if odd { neg.clone() } else { value.clone() };
        table[idx[perm[0]]][idx[perm[1]]][idx[perm[2]]] = v;
    }
    Ok(())
}

impl AlgebroidSpec {
    /// All structure data zero.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let gens = GeneratorSet::new(n, k, MomentumBasis::Darboux)?;
        let zero = Element::zero(gens);
        Ok(AlgebroidSpec {
            n,
            k,
            rho_l: vec![vec![zero.clone(); n]; k],
            rho_lstar: vec![vec![zero.clone(); n]; k],
            c_low: cube(k, &zero),
            c_up: cube(k, &zero),
            phi: cube(k, &zero),
            psi: cube(k, &zero),
            connection: None,
        })
    }

    /// The standard Courant algebroid `TM ⊕ T*M` over `R^n`.
    pub fn standard(n: usize) -> Result<Self> {
        let mut spec = AlgebroidSpec::new(n, n)?;
        for i in 0..n {
            spec.set_rho_l(i, i, Element::one(spec.gens()))?;
        }
        Ok(spec)
    }

    /// The Courant algebroid `T*M ⊕ TM` attached to a bivector `π`: the
    /// anchor of `a_α` is `π^{αi} ∂_i`, `[a_α, a_β] = ∂_γ π^{αβ} a_γ`, the
    /// anchor of `a^α` is `∂_α` and all remaining data vanish.
    ///
    /// `pi[α][β]` is `π^{αβ}` and must be antisymmetric.
    pub fn poisson(n: usize, pi: &[Vec<Element>]) -> Result<Self> {
        let mut spec = AlgebroidSpec::new(n, n)?;
        check_bivector(n, pi)?;
        let gens = spec.gens();
        for a in 0..n {
            spec.set_rho_lstar(a, a, Element::one(gens))?;
            for i in 0..n {
                spec.set_rho_l(a, i, pi[a][i].clone())?;
            }
            for b in a + 1..n {
                for c in 0..n {
                    spec.set_c_low(a, b, c, pi[a][b].partial(EvenGen::Q(c)))?;
                }
            }
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Super-Darboux generator set of the ambient algebra.
    pub fn gens(&self) -> GeneratorSet {
        GeneratorSet::darboux(self.n, self.k)
    }

    fn function(&self, value: Element, what: &str) -> Result<Element> {
        if value.gens().n() != self.n || value.gens().k() != self.k {
            return Err(Error::GeneratorMismatch { left: self.gens(), right: value.gens() });
        }
        if !value.is_function() {
            return Err(Error::InvalidSpec(format!("{what} must be a polynomial in q, got {value}")));
        }
        value.rebase(self.gens())
    }

    fn check_index(&self, idx: &[usize], bounds: &[usize], what: &str) -> Result<()> {
        if idx.iter().zip(bounds).any(|(i, b)| i >= b) {
            return Err(Error::InvalidSpec(format!("{what} index {idx:?} out of range")));
        }
        Ok(())
    }

    pub fn set_rho_l(&mut self, alpha: usize, i: usize, value: Element) -> Result<()> {
        self.check_index(&[alpha, i], &[self.k, self.n], "rho_L")?;
        self.rho_l[alpha][i] = self.function(value, "rho_L")?;
        Ok(())
    }

    pub fn set_rho_lstar(&mut self, alpha: usize, i: usize, value: Element) -> Result<()> {
        self.check_index(&[alpha, i], &[self.k, self.n], "rho_Lstar")?;
        self.rho_lstar[alpha][i] = self.function(value, "rho_Lstar")?;
        Ok(())
    }

    fn set_pair(&mut self, upper: bool, idx: [usize; 3], value: Element) -> Result<()> {
        let what = if upper { "c_up" } else { "c_low" };
        self.check_index(&idx, &[self.k; 3], what)?;
        let value = self.function(value, what)?;
        let [a, b, c] = idx;
        if a == b {
            if value.is_zero() {
                return Ok(());
            }
            return Err(Error::InvalidSpec(format!(
                "{what}[{},{},{}] must vanish: antisymmetric in the first two indices",
                a + 1,
                b + 1,
                c + 1
            )));
        }
        let table = if upper { &mut self.c_up } else { &mut self.c_low };
        table[b][a][c] = -&value;
        table[a][b][c] = value;
        Ok(())
    }

    /// Sets `c_{αβ}^γ` (and `c_{βα}^γ = −c_{αβ}^γ`).
    pub fn set_c_low(&mut self, alpha: usize, beta: usize, gamma: usize, value: Element) -> Result<()> {
        self.set_pair(false, [alpha, beta, gamma], value)
    }

    /// Sets `c^{αβ}_γ` (and `c^{βα}_γ = −c^{αβ}_γ`).
    pub fn set_c_up(&mut self, alpha: usize, beta: usize, gamma: usize, value: Element) -> Result<()> {
        self.set_pair(true, [alpha, beta, gamma], value)
    }

    /// Sets `φ^{αβγ}` and all its permutations.
    pub fn set_phi(&mut self, alpha: usize, beta: usize, gamma: usize, value: Element) -> Result<()> {
        self.check_index(&[alpha, beta, gamma], &[self.k; 3], "phi")?;
        let value = self.function(value, "phi")?;
        set_alternating(&mut self.phi, [alpha, beta, gamma], value, "phi")
    }

    /// Sets `ψ_{αβγ}` and all its permutations.
    pub fn set_psi(&mut self, alpha: usize, beta: usize, gamma: usize, value: Element) -> Result<()> {
        self.check_index(&[alpha, beta, gamma], &[self.k; 3], "psi")?;
        let value = self.function(value, "psi")?;
        set_alternating(&mut self.psi, [alpha, beta, gamma], value, "psi")
    }

    pub fn set_connection(&mut self, conn: Option<ConnectionData>) -> Result<()> {
        if let Some(c) = &conn {
            if c.n() != self.n || c.k() != self.k {
                return Err(Error::InvalidSpec(format!(
                    "connection has dimensions (n={}, k={}), spec has (n={}, k={})",
                    c.n(),
                    c.k(),
                    self.n,
                    self.k
                )));
            }
        }
        self.connection = conn;
        Ok(())
    }

    pub fn rho_l(&self, alpha: usize, i: usize) -> &Element {
        &self.rho_l[alpha][i]
    }

    pub fn rho_lstar(&self, alpha: usize, i: usize) -> &Element {
        &self.rho_lstar[alpha][i]
    }

    pub fn c_low(&self, alpha: usize, beta: usize, gamma: usize) -> &Element {
        &self.c_low[alpha][beta][gamma]
    }

    pub fn c_up(&self, alpha: usize, beta: usize, gamma: usize) -> &Element {
        &self.c_up[alpha][beta][gamma]
    }

    pub fn phi(&self, alpha: usize, beta: usize, gamma: usize) -> &Element {
        &self.phi[alpha][beta][gamma]
    }

    pub fn psi(&self, alpha: usize, beta: usize, gamma: usize) -> &Element {
        &self.psi[alpha][beta][gamma]
    }

    pub fn connection(&self) -> Option<&ConnectionData> {
        self.connection.as_ref()
    }

    /// True for the standard model: `n = k`, `ρ_L` the identity, all other
    /// data zero.
    pub fn is_standard(&self) -> bool {
        if self.n != self.k {
            return false;
        }
        let one = Element::one(self.gens());
        let anchor_ok = (0..self.k)
            .all(|a| (0..self.n).all(|i| if a == i { self.rho_l[a][i] == one } else { self.rho_l[a][i].is_zero() }));
        anchor_ok
            && self.rho_lstar.iter().flatten().all(Element::is_zero)
            && [&self.c_low, &self.c_up, &self.phi, &self.psi]
                .iter()
                .all(|t| t.iter().flatten().flatten().all(Element::is_zero))
    }

    /// The bivector `π` when this spec is the Poisson model of `π`.
    pub fn poisson_bivector(&self) -> Option<Vec<Vec<Element>>> {
        if self.n != self.k {
            return None;
        }
        let pi = self.rho_l.clone();
        if check_bivector(self.n, &pi).is_err() {
            return None;
        }
        let rebuilt = AlgebroidSpec::poisson(self.n, &pi).ok()?;
        let mut me = self.clone();
        me.connection = None;
        (me == rebuilt).then_some(pi)
    }

    /// Canonical list of nonzero structure entries with zero-based indices,
    /// using the representative with increasing antisymmetric indices.
    pub fn entries(&self) -> SpecEntries {
        let mut out = SpecEntries::default();
        let k = self.k;
        for a in 0..k {
            for i in 0..self.n {
                if !self.rho_l[a][i].is_zero() {
                    out.rho_l.push(([a, i], self.rho_l[a][i].clone()));
                }
                if !self.rho_lstar[a][i].is_zero() {
                    out.rho_lstar.push(([a, i], self.rho_lstar[a][i].clone()));
                }
            }
        }
        for a in 0..k {
            for b in a + 1..k {
                for c in 0..k {
                    if !self.c_low[a][b][c].is_zero() {
                        out.c_low.push(([a, b, c], self.c_low[a][b][c].clone()));
                    }
                    if !self.c_up[a][b][c].is_zero() {
                        out.c_up.push(([a, b, c], self.c_up[a][b][c].clone()));
                    }
                    if c > b {
                        if !self.phi[a][b][c].is_zero() {
                            out.phi.push(([a, b, c], self.phi[a][b][c].clone()));
                        }
                        if !self.psi[a][b][c].is_zero() {
                            out.psi.push(([a, b, c], self.psi[a][b][c].clone()));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Nonzero entries of a spec, see [`AlgebroidSpec::entries`].
#[derive(Clone, Debug, Default)]
pub struct SpecEntries {
    pub rho_l: Vec<([usize; 2], Element)>,
    pub rho_lstar: Vec<([usize; 2], Element)>,
    pub c_low: Vec<([usize; 3], Element)>,
    pub c_up: Vec<([usize; 3], Element)>,
    pub phi: Vec<([usize; 3], Element)>,
    pub psi: Vec<([usize; 3], Element)>,
}

fn check_bivector(n: usize, pi: &[Vec<Element>]) -> Result<()> {
    if pi.len() != n || pi.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidSpec(format!("bivector must be an {n}x{n} matrix")));
    }
    for a in 0..n {
        for b in 0..n {
            if pi[a][b] != -&pi[b][a] {
                return Err(Error::InvalidSpec(format!(
                    "bivector is not antisymmetric at ({}, {})",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::parse_element;

    #[test]
    fn setters_enforce_antisymmetry() {
        let mut spec = AlgebroidSpec::new(0, 3).unwrap();
        let g = spec.gens();
        spec.set_c_low(0, 1, 1, Element::one(g)).unwrap();
        assert_eq!(*spec.c_low(1, 0, 1), -Element::one(g));
        assert!(spec.set_c_low(0, 0, 1, Element::one(g)).is_err());
        spec.set_phi(2, 0, 1, Element::from_int(g, 3)).unwrap();
        assert_eq!(*spec.phi(0, 1, 2), Element::from_int(g, 3));
        assert_eq!(*spec.phi(1, 0, 2), Element::from_int(g, -3));
        assert!(spec.set_psi(0, 0, 1, Element::one(g)).is_err());
    }

    #[test]
    fn poisson_round_trip() {
        let g = GeneratorSet::darboux(2, 2);
        let q1 = parse_element("q1", g).unwrap();
        let pi = vec![vec![Element::zero(g), q1.clone()], vec![-&q1, Element::zero(g)]];
        let spec = AlgebroidSpec::poisson(2, &pi).unwrap();
        assert_eq!(spec.poisson_bivector(), Some(pi));
        assert_eq!(*spec.c_low(0, 1, 0), Element::one(g));
        assert!(AlgebroidSpec::standard(2).unwrap().poisson_bivector().is_none());
        assert!(AlgebroidSpec::standard(2).unwrap().is_standard());
    }
}
