//! TOML spec files describing a Courant algebroid `L ⊕ L*`.
//!
//! ```toml
//! [metadata]
//! name = "aff1_point"
//! description = "..."
//!
//! [dimensions]
//! n = 0
//! k = 2
//!
//! [defaults]          # optional
//! truncation = 2
//! seed = 0
//!
//! [rho_l]             # "α,i" = ρ_L^i(a_α)
//! [rho_lstar]         # "α,i" = ρ_{L*}^i(a^α)
//! [c_low]             # "α,β,γ" = c_{αβ}^γ, α < β
//! [c_up]              # "α,β,γ" = c^{αβ}_γ, α < β
//! [phi]               # "α,β,γ" = φ_{αβγ}, α < β < γ
//! [psi]               # "α,β,γ" = ψ^{αβγ}, α < β < γ
//! [connection]        # optional, "i,α,β" = Γ^β_{iα}
//! ```
//!
//! Indices are 1-based and values are strings in the element grammar,
//! polynomial in `q1..qn`. The canonical form lists only nonzero entries in
//! index order and is what [`SpecFile::digest`] hashes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::Spanned;

use crate::courant::AlgebroidSpec;
use crate::error::{Error, Result};
use crate::rothstein::ConnectionData;
use crate::superalg::{parse_element, Element, GeneratorSet};

/// Bundled example specs, in canonical form.
pub const BUNDLED: &[(&str, &str)] = &[
    ("standard_courant_R2", include_str!("../specs/standard_courant_R2.toml")),
    ("standard_courant_R3", include_str!("../specs/standard_courant_R3.toml")),
    ("poisson_R2", include_str!("../specs/poisson_R2.toml")),
    ("poisson_R3", include_str!("../specs/poisson_R3.toml")),
    ("aff1_point", include_str!("../specs/aff1_point.toml")),
    ("su2_phi_point", include_str!("../specs/su2_phi_point.toml")),
    ("abelian_k3_point", include_str!("../specs/abelian_k3_point.toml")),
    ("obstructed_k4_point", include_str!("../specs/obstructed_k4_point.toml")),
    ("curved_R2", include_str!("../specs/curved_R2.toml")),
    ("broken_aff1", include_str!("../specs/broken_aff1.toml")),
];

/// The text of a bundled spec.
pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Defaults {
    fn is_empty(&self) -> bool {
        self.truncation.is_none() && self.seed.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Metadata {
    name: String,
    #[serde(default)]
    description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Dimensions {
    n: usize,
    k: usize,
}

type Table<V> = BTreeMap<String, V>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "V: Deserialize<'de>"))]
struct Document<V> {
    metadata: Metadata,
    dimensions: Dimensions,
    #[serde(default, skip_serializing_if = "Defaults::is_empty")]
    defaults: Defaults,
    #[serde(default = "Table::new")]
    rho_l: Table<V>,
    #[serde(default = "Table::new")]
    rho_lstar: Table<V>,
    #[serde(default = "Table::new")]
    c_low: Table<V>,
    #[serde(default = "Table::new")]
    c_up: Table<V>,
    #[serde(default = "Table::new")]
    phi: Table<V>,
    #[serde(default = "Table::new")]
    psi: Table<V>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    connection: Option<Table<V>>,
}

/// A parsed and validated spec file.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecFile {
    pub name: String,
    pub description: String,
    pub defaults: Defaults,
    pub spec: AlgebroidSpec,
}

/// 1-based line and column of a byte offset.
fn locate(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Reader<'a> {
    text: &'a str,
    gens: GeneratorSet,
}

impl Reader<'_> {
    fn at(&self, offset: usize, message: String) -> Error {
        let (line, column) = locate(self.text, offset);
        Error::Syntax { line, column, message }
    }

    fn indices<const N: usize>(&self, table: &str, key: &str, value: &Spanned<String>) -> Result<[usize; N]> {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        let bad = || self.at(value.span().start, format!("{table}: key \"{key}\" must be {N} comma-separated indices"));
        if parts.len() != N {
            return Err(bad());
        }
        let mut out = [0; N];
        for (slot, p) in out.iter_mut().zip(parts) {
            let i: usize = p.parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(self.at(value.span().start, format!("{table}: indices are 1-based, got \"{key}\"")));
            }
            *slot = i - 1;
        }
        Ok(out)
    }

    fn value(&self, table: &str, value: &Spanned<String>) -> Result<Element> {
        parse_element(value.get_ref(), self.gens).map_err(|e| match e {
            Error::Parse { column, message } => {
                self.at(value.span().start + column, format!("{table}: {message}"))
            }
            other => other,
        })
    }

    fn increasing(&self, table: &str, key: &str, value: &Spanned<String>, idx: &[usize]) -> Result<()> {
        if idx.windows(2).all(|w| w[0] < w[1]) {
            Ok(())
        } else {
            Err(self.at(value.span().start, format!("{table}: antisymmetric indices must increase, got \"{key}\"")))
        }
    }

    fn wrap(&self, value: &Spanned<String>, result: Result<()>) -> Result<()> {
        result.map_err(|e| match e {
            Error::InvalidSpec(m) => self.at(value.span().start, m),
            other => other,
        })
    }
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile> {
        let doc: Document<Spanned<String>> = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| locate(text, s.start));
            Error::Syntax { line, column, message: e.message().to_string() }
        })?;
        let Dimensions { n, k } = doc.dimensions;
        let mut spec = AlgebroidSpec::new(n, k)?;
        let r = Reader { text, gens: spec.gens() };

        for (key, v) in &doc.rho_l {
            let [a, i] = r.indices("rho_l", key, v)?;
            r.wrap(v, spec.set_rho_l(a, i, r.value("rho_l", v)?))?;
        }
        for (key, v) in &doc.rho_lstar {
            let [a, i] = r.indices("rho_lstar", key, v)?;
            r.wrap(v, spec.set_rho_lstar(a, i, r.value("rho_lstar", v)?))?;
        }
        for (key, v) in &doc.c_low {
            let [a, b, c] = r.indices("c_low", key, v)?;
            r.increasing("c_low", key, v, &[a, b])?;
            r.wrap(v, spec.set_c_low(a, b, c, r.value("c_low", v)?))?;
        }
        for (key, v) in &doc.c_up {
            let [a, b, c] = r.indices("c_up", key, v)?;
            r.increasing("c_up", key, v, &[a, b])?;
            r.wrap(v, spec.set_c_up(a, b, c, r.value("c_up", v)?))?;
        }
        for (key, v) in &doc.phi {
            let [a, b, c] = r.indices("phi", key, v)?;
            r.increasing("phi", key, v, &[a, b, c])?;
            r.wrap(v, spec.set_phi(a, b, c, r.value("phi", v)?))?;
        }
        for (key, v) in &doc.psi {
            let [a, b, c] = r.indices("psi", key, v)?;
            r.increasing("psi", key, v, &[a, b, c])?;
            r.wrap(v, spec.set_psi(a, b, c, r.value("psi", v)?))?;
        }
        if let Some(table) = &doc.connection {
            let mut conn = ConnectionData::zero(n, k);
            for (key, v) in table {
                let [i, a, b] = r.indices("connection", key, v)?;
                r.wrap(v, conn.set(i, a, b, r.value("connection", v)?))?;
            }
            spec.set_connection(Some(conn))?;
        }
        Ok(SpecFile {
            name: doc.metadata.name,
            description: doc.metadata.description,
            defaults: doc.defaults,
            spec,
        })
    }

    pub fn load(path: &Path) -> Result<SpecFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::SpecFile(format!("cannot read {}: {e}", path.display())))?;
        SpecFile::parse(&text)
    }

    /// Loads a file path, or a bundled spec when the argument names one.
    pub fn resolve(path_or_name: &str) -> Result<SpecFile> {
        let path = Path::new(path_or_name);
        if !path.exists() {
            if let Some(text) = bundled(path_or_name) {
                return SpecFile::parse(text);
            }
        }
        SpecFile::load(path)
    }

    pub fn new(name: &str, description: &str, spec: AlgebroidSpec) -> SpecFile {
        SpecFile { name: name.into(), description: description.into(), defaults: Defaults::default(), spec }
    }

    pub fn to_canonical(&self) -> String {
        fn key(idx: &[usize]) -> String {
            idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
        }
        fn table<const N: usize>(entries: &[([usize; N], Element)]) -> Table<String> {
            entries.iter().map(|(idx, v)| (key(idx), v.to_string())).collect()
        }
        let entries = self.spec.entries();
        let doc = Document {
            metadata: Metadata { name: self.name.clone(), description: self.description.clone() },
            dimensions: Dimensions { n: self.spec.n(), k: self.spec.k() },
            defaults: self.defaults.clone(),
            rho_l: table(&entries.rho_l),
            rho_lstar: table(&entries.rho_lstar),
            c_low: table(&entries.c_low),
            c_up: table(&entries.c_up),
            phi: table(&entries.phi),
            psi: table(&entries.psi),
            connection: self.spec.connection().map(|c| table(&c.entries())),
        };
        toml::to_string(&doc).expect("spec documents serialize")
    }

    /// SHA-256 of the canonical form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_canonical().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_point_at_the_value() {
        let text = "[metadata]\nname = \"x\"\n\n[dimensions]\nn = 0\nk = 2\n\n[c_low]\n\"1,2,2\" = \"1 + e1\"\n";
        match SpecFile::parse(text) {
            Err(Error::Syntax { line: 9, .. }) => {}
            other => panic!("{other:?}"),
        }
        let text = text.replace("1 + e1", "1 +* 2");
        match SpecFile::parse(&text) {
            Err(Error::Syntax { line: 9, column: 15, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decreasing_keys_are_rejected() {
        let text = "[metadata]\nname = \"x\"\n\n[dimensions]\nn = 0\nk = 2\n\n[c_low]\n\"2,1,2\" = \"1\"\n";
        assert!(matches!(SpecFile::parse(text), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_tables_are_rejected() {
        let text = "[metadata]\nname = \"x\"\n\n[dimensions]\nn = 0\nk = 2\n\n[cup]\n";
        assert!(matches!(SpecFile::parse(text), Err(Error::Syntax { .. })));
    }

    #[test]
    fn bundled_specs_are_canonical() {
        for (name, text) in BUNDLED {
            let file = SpecFile::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(file.to_canonical(), *text, "{name}");
            assert_eq!(file.name, *name);
        }
    }
}
