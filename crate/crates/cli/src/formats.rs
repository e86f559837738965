//! JSON space and chain files.
//!
//! A space file holds `ambient_dim`, `vertices` (coordinate arrays),
//! `triangles` (vertex triples), and optionally `edges` (extra edges
//! beyond the triangle closure), `radial`, `region`, `necks` (neck label
//! to its two body labels) and free-form `metadata`. The canonical writer
//! sorts simplices, keeps only extra edges, and prints every float with 17
//! significant digits.
//!
//! A chain file holds `dim` and `entries`, a list of `[vertex tuple,
//! coefficient]` pairs; coefficients are decimal strings (plain JSON
//! integers are accepted on input).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use fillbound::chains::{Chain, SimplicialComplex};
use fillbound::geom::{MetricComplex, Regions};
use fillbound::Error;
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::Value;

use crate::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default)]
    pub triangles: Vec<[usize; 3]>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub radial: Option<Vec<f64>>,
    #[serde(default)]
    pub region: Option<Vec<String>>,
    #[serde(default)]
    pub necks: BTreeMap<String, [String; 2]>,
    #[serde(default)]
    pub metadata: BTreeMap<String, Value>,
}

fn float(out: &mut String, x: f64) {
    // 17 significant digits round-trip every binary64
    write!(out, "{x:.16e}").expect("write to string");
}

fn float_list(out: &mut String, xs: &[f64]) {
    out.push('[');
    for (i, &x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        float(out, x);
    }
    out.push(']');
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

impl SpaceFile {
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|source| CliError::Json { path: path.display().to_string(), source })
    }

    fn complex(&self) -> fillbound::Result<SimplicialComplex> {
        let simplices = self
            .triangles
            .iter()
            .map(|t| t.to_vec())
            .chain(self.edges.iter().map(|e| e.to_vec()))
            .chain((0..self.vertices.len()).map(|v| vec![v]));
        SimplicialComplex::new(self.vertices.len(), simplices)
    }

    pub fn to_space(&self) -> fillbound::Result<MetricComplex> {
        if self.vertices.iter().any(|v| v.len() != self.ambient_dim) {
            return Err(Error::structural(format!(
                "every vertex needs {} coordinates",
                self.ambient_dim
            )));
        }
        let complex = self.complex()?;
        let regions = match &self.region {
            None if !self.necks.is_empty() => {
                return Err(Error::structural("necks declared without region labels"));
            }
            None => None,
            Some(labels) => Some(Regions::new(labels.clone(), self.necks.clone())?),
        };
        MetricComplex::new(complex, self.vertices.clone(), self.radial.clone(), regions)
    }

    /// Canonical text: sorted triangles, only the edges not implied by
    /// them, fixed float formatting, trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut tris: BTreeSet<[usize; 3]> = BTreeSet::new();
        for t in &self.triangles {
            let mut t = *t;
            t.sort_unstable();
            tris.insert(t);
        }
        let implied: BTreeSet<[usize; 2]> =
            tris.iter().flat_map(|t| [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]).collect();
        let extra: BTreeSet<[usize; 2]> = self
            .edges
            .iter()
            .map(|e| if e[0] <= e[1] { *e } else { [e[1], e[0]] })
            .filter(|e| !implied.contains(e))
            .collect();
        let mut out = String::from("{\n");
        writeln!(out, "  \"ambient_dim\": {},", self.ambient_dim).expect("write");
        out.push_str("  \"vertices\": [");
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            float_list(&mut out, v);
        }
        out.push_str("\n  ],\n  \"triangles\": [");
        for (i, t) in tris.iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            write!(out, "[{},{},{}]", t[0], t[1], t[2]).expect("write");
        }
        out.push_str("\n  ]");
        if !extra.is_empty() {
            out.push_str(",\n  \"edges\": [");
            let items: Vec<String> = extra.iter().map(|e| format!("[{},{}]", e[0], e[1])).collect();
            out.push_str(&items.join(","));
            out.push(']');
        }
        if let Some(r) = &self.radial {
            out.push_str(",\n  \"radial\": ");
            float_list(&mut out, r);
        }
        if let Some(r) = &self.region {
            let items: Vec<String> = r.iter().map(|s| json_str(s)).collect();
            write!(out, ",\n  \"region\": [{}]", items.join(",")).expect("write");
        }
        if !self.necks.is_empty() {
            let items: Vec<String> = self
                .necks
                .iter()
                .map(|(k, [a, b])| format!("{}: [{}, {}]", json_str(k), json_str(a), json_str(b)))
                .collect();
            write!(out, ",\n  \"necks\": {{{}}}", items.join(", ")).expect("write");
        }
        if !self.metadata.is_empty() {
            let m = serde_json::to_string(&self.metadata).expect("metadata serializes");
            write!(out, ",\n  \"metadata\": {m}").expect("write");
        }
        out.push_str("\n}\n");
        out
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChain {
    dim: usize,
    entries: Vec<(Vec<usize>, Value)>,
}

fn coefficient(v: &Value) -> fillbound::Result<BigInt> {
    let parsed = match v {
        Value::String(s) => s.trim().parse::<BigInt>().ok(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string().parse::<BigInt>().ok(),
        _ => None,
    };
    parsed.ok_or_else(|| Error::structural(format!("coefficient {v} is not an integer")))
}

/// Parses a chain file against the simplices of `complex`.
pub fn parse_chain(text: &str, complex: &SimplicialComplex) -> fillbound::Result<Chain> {
    let raw: RawChain =
        serde_json::from_str(text).map_err(|e| Error::structural(format!("malformed chain file: {e}")))?;
    let mut terms = Vec::with_capacity(raw.entries.len());
    for (tuple, v) in &raw.entries {
        if tuple.len() != raw.dim + 1 {
            return Err(Error::structural(format!("tuple {tuple:?} does not have {} vertices", raw.dim + 1)));
        }
        let a = coefficient(v)?;
        if a == BigInt::from(0) {
            return Err(Error::structural(format!("zero coefficient on {tuple:?}")));
        }
        terms.push((tuple.clone(), a));
    }
    let chain = Chain::from_simplices(complex, raw.dim, terms)?;
    Ok(chain)
}

pub fn read_chain(path: &Path, complex: &SimplicialComplex) -> CliResult<Chain> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_chain(&text, complex)?)
}

/// Chain file text with entries in simplex-index order.
pub fn chain_to_json(chain: &Chain, complex: &SimplicialComplex) -> String {
    let mut out = format!("{{\n  \"dim\": {},\n  \"entries\": [", chain.dim());
    for (n, (i, a)) in chain.iter().enumerate() {
        out.push_str(if n == 0 { "\n    " } else { ",\n    " });
        let t: Vec<String> = complex.simplex(chain.dim(), i).iter().map(ToString::to_string).collect();
        write!(out, "[[{}], \"{a}\"]", t.join(",")).expect("write");
    }
    out.push_str(if chain.is_zero() { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

/// Writes `text` to `path` through a temporary file in the same directory
/// and an atomic rename.
pub fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
