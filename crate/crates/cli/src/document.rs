//! The JSON document format for complexes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use projquad::complex::{Colour, TwoColouredComplex, VertexId, VertexRef};
use projquad::setkit::LabelSet;

pub const GENERATOR: &str = "projquad";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: VertexId,
    pub label: Vec<u32>,
    pub color: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub generator: String,
    pub version: String,
}

impl Default for Meta {
    fn default() -> Self {
        Meta {
            generator: GENERATOR.into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub n: u32,
    pub k: u32,
    pub dim: u32,
    pub vertices: Vec<VertexEntry>,
    pub facets: Vec<Vec<VertexId>>,
    pub antipode: Vec<[VertexId; 2]>,
    pub meta: Meta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentError(pub String);

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed document: {}", self.0)
    }
}

impl std::error::Error for DocumentError {}

fn bad<T>(msg: impl Into<String>) -> Result<T, DocumentError> {
    Err(DocumentError(msg.into()))
}

impl ComplexDocument {
    /// Canonical document: ids `1..=N` in `(colour, label)` order, facets
    /// ascending and sorted, antipode pairs listed once each, smaller id first.
    pub fn from_complex(n: u32, k: u32, complex: &TwoColouredComplex) -> Self {
        let (c, _) = complex.canonicalized();
        let vertices = c
            .vertices()
            .map(|v| VertexEntry {
                id: v.id,
                label: v.label.elements().to_vec(),
                color: v.colour.as_str().into(),
            })
            .collect();
        let mut facets: Vec<Vec<VertexId>> = c.facets().iter().map(|f| f.ids().to_vec()).collect();
        facets.sort();
        let antipode = c
            .antipode()
            .map(|a| a.iter().filter(|(v, w)| v < w).map(|(&v, &w)| [v, w]).collect())
            .unwrap_or_default();
        ComplexDocument {
            n,
            k,
            dim: n.saturating_sub(2 * k),
            vertices,
            facets,
            antipode,
            meta: Meta::default(),
        }
    }

    /// Rebuilds the complex. Vertex ids are kept as written. Structural
    /// damage that a check can report (missing facets, a broken antipode) is
    /// let through; anything that cannot be represented is an error.
    pub fn to_complex(&self) -> Result<TwoColouredComplex, DocumentError> {
        if self.k == 0 || self.n < 2 * self.k + 1 {
            return bad(format!("need k >= 1 and n >= 2k+1, got n={}, k={}", self.n, self.k));
        }
        if self.dim != self.n - 2 * self.k {
            return bad(format!("dim is {} but n-2k is {}", self.dim, self.n - 2 * self.k));
        }
        let mut vertices = Vec::with_capacity(self.vertices.len());
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if v.id == 0 || !ids.insert(v.id) {
                return bad(format!("vertex id {} is zero or repeated", v.id));
            }
            let colour = match v.color.as_str() {
                "black" => Colour::Black,
                "white" => Colour::White,
                other => return bad(format!("vertex {} has colour '{other}'", v.id)),
            };
            if v.label.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("label of vertex {} is not strictly ascending", v.id));
            }
            if v.label.iter().any(|&x| x == 0 || x > self.n) {
                return bad(format!("label of vertex {} leaves [1,{}]", v.id, self.n));
            }
            vertices.push(VertexRef::new(v.id, LabelSet::new(v.label.iter().copied()), colour));
        }
        for f in &self.facets {
            if f.is_empty() {
                return bad("empty facet");
            }
            if f.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("facet {f:?} is not strictly ascending"));
            }
            if let Some(v) = f.iter().find(|v| !ids.contains(v)) {
                return bad(format!("facet {f:?} uses unknown vertex {v}"));
            }
        }
        let mut complex =
            TwoColouredComplex::from_facets(vertices, self.facets.iter().cloned()).map_err(|e| DocumentError(e.to_string()))?;
        if !self.antipode.is_empty() {
            let mut map = BTreeMap::new();
            for &[v, w] in &self.antipode {
                if !ids.contains(&v) || !ids.contains(&w) {
                    return bad(format!("antipode pair [{v},{w}] uses an unknown vertex"));
                }
                for (a, b) in [(v, w), (w, v)] {
                    if map.insert(a, b).is_some_and(|old| old != b) {
                        return bad(format!("vertex {a} has two antipodes"));
                    }
                }
            }
            complex.set_antipode_unchecked(map);
        }
        Ok(complex)
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError(e.to_string()))
    }

    /// JSON with one vertex, facet or antipode pair per line.
    pub fn to_json(&self) -> String {
        fn one<T: Serialize>(x: &T) -> String {
            serde_json::to_string(x).expect("plain data serialises")
        }
        fn list<T: Serialize>(items: &[T]) -> String {
            if items.is_empty() {
                return "[]".into();
            }
            let lines: Vec<String> = items.iter().map(|x| format!("    {}", one(x))).collect();
            format!("[\n{}\n  ]", lines.join(",\n"))
        }
        format!(
            "{{\n  \"n\": {},\n  \"k\": {},\n  \"dim\": {},\n  \"vertices\": {},\n  \"facets\": {},\n  \"antipode\": {},\n  \"meta\": {}\n}}\n",
            self.n,
            self.k,
            self.dim,
            list(&self.vertices),
            list(&self.facets),
            list(&self.antipode),
            one(&self.meta)
        )
    }
}
