//! B-orthogonal representations of partial k-trees.
//!
//! Every vertex of a k-tree `H ⊇ G` gets a vector in ℚ^m so that, under a
//! nondegenerate symmetric form `B`:
//!
//! * (C1) `B(v, w) = 0` iff `v ≠ w` and `vw ∈ E(G)`;
//! * (C2) every clique of `H` spans a nondegenerate subspace of full dimension;
//! * (C3) for k-cliques `C, D` of `H`, `dim(span(C)^⊥ ∩ span(D)) ≤ 1`;
//! * (C4) no vertex outside a k-clique lies in its span;
//! * (C5) all vectors together span a space of dimension `min(m, |V(H)|)`.
//!
//! Vectors are placed one vertex at a time in construction order. Each new
//! vector is drawn from `L = span(G-neighbours)^⊥`, which makes orthogonality
//! on edges exact, and is accepted only when a fixed list of generic-position
//! tests passes in exact arithmetic.

mod builder;
mod check;
mod sampler;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, KTreeEmbedding, Vertex};
use crate::linalg::{format_vec, BilinearForm, LinalgError, Rat};

pub use builder::{build_representation, extend_vertex};
pub use check::{check_new_vertex, CheckMode};
pub use sampler::{sample_in_subspace, vertex_rng};
pub use verify::{verify_representation, ConditionReport, ConditionResult, Witness};

/// A generic-position test applied to a candidate vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckTag {
    /// Candidate is not orthogonal to every G-neighbour already placed.
    #[serde(rename = "L")]
    Orthogonality,
    #[serde(rename = "anisotropy")]
    Anisotropy,
    /// Nonzero form value against every placed non-neighbour.
    #[serde(rename = "P1")]
    Pattern,
    /// Each clique through the new vertex is nondegenerate of full dimension.
    #[serde(rename = "a")]
    CliqueNondegenerate,
    /// New k-cliques against existing k-cliques.
    #[serde(rename = "b")]
    NewVersusOld,
    /// New k-cliques against each other.
    #[serde(rename = "c")]
    NewVersusNew,
    /// Candidate outside every existing k-clique span.
    #[serde(rename = "d")]
    OutsideOldCliques,
    /// Placed vertices outside the spans of the new k-cliques.
    #[serde(rename = "e")]
    OutsideNewCliques,
    /// Candidate raises the dimension of the total span.
    #[serde(rename = "f")]
    SpanGrowth,
}

impl CheckTag {
    pub fn label(self) -> &'static str {
        match self {
            CheckTag::Orthogonality => "L",
            CheckTag::Anisotropy => "anisotropy",
            CheckTag::Pattern => "P1",
            CheckTag::CliqueNondegenerate => "a",
            CheckTag::NewVersusOld => "b",
            CheckTag::NewVersusNew => "c",
            CheckTag::OutsideOldCliques => "d",
            CheckTag::OutsideNewCliques => "e",
            CheckTag::SpanGrowth => "f",
        }
    }
}

impl fmt::Display for CheckTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Random sampling policy for new vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Coefficients are drawn uniformly from `[-coord_bound, coord_bound]`.
    pub coord_bound: u64,
    /// Retries allowed per vertex after the first attempt.
    pub max_retries: u32,
    /// Double the coefficient bound after each failed attempt.
    pub grow: bool,
}

pub const DEFAULT_COORD_BOUND: u64 = 1 << 16;
pub const DEFAULT_MAX_RETRIES: u32 = 32;

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            coord_bound: DEFAULT_COORD_BOUND,
            max_retries: DEFAULT_MAX_RETRIES,
            grow: true,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.coord_bound < 2 {
            return Err(BuildError::BadConfig("coord_bound must be at least 2".into()));
        }
        if self.max_retries < 1 {
            return Err(BuildError::BadConfig("max_retries must be at least 1".into()));
        }
        Ok(())
    }
}

/// What happened while placing one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub vertex: Vertex,
    /// Dimension of the space the vector was sampled from.
    pub subspace_dim: usize,
    pub retries: u32,
    /// Failed tests, one entry per rejected candidate.
    pub failed: Vec<Vec<CheckTag>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildTrace {
    pub seed: u64,
    pub records: Vec<VertexRecord>,
}

impl BuildTrace {
    pub fn total_retries(&self) -> u64 {
        self.records.iter().map(|r| u64::from(r.retries)).sum()
    }

    pub fn record(&self, v: Vertex) -> Option<&VertexRecord> {
        self.records.iter().find(|r| r.vertex == v)
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("form dimension {m} is below k+2 = {}", k + 2)]
    DimensionTooSmall { m: usize, k: usize },
    #[error("no acceptable vector for vertex {vertex} after {retries} retries")]
    RetriesExhausted {
        vertex: Vertex,
        retries: u32,
        trace: Box<BuildTrace>,
    },
    #[error("sample space for vertex {0} is the zero subspace")]
    EmptySampleSpace(Vertex),
    #[error("bad sampler config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A (possibly partial) assignment of vectors to the vertices of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub form: BilinearForm,
    pub graph: Graph,
    pub embedding: KTreeEmbedding,
    pub seed: u64,
    vectors: BTreeMap<Vertex, Vec<Rat>>,
    /// Vertices in the order they were assigned.
    placed: Vec<Vertex>,
}

impl Representation {
    /// Empty representation; checks the embedding against `graph` and the
    /// dimension bound `m ≥ k + 2`.
    pub fn new(
        graph: Graph,
        embedding: KTreeEmbedding,
        form: BilinearForm,
        seed: u64,
    ) -> Result<Self, BuildError> {
        embedding.validate(&graph)?;
        if form.dim() < embedding.k + 2 {
            return Err(BuildError::DimensionTooSmall {
                m: form.dim(),
                k: embedding.k,
            });
        }
        Ok(Representation {
            form,
            graph,
            embedding,
            seed,
            vectors: BTreeMap::new(),
            placed: Vec::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.form.dim()
    }

    pub fn k(&self) -> usize {
        self.embedding.k
    }

    pub fn vector(&self, v: Vertex) -> Option<&Vec<Rat>> {
        self.vectors.get(&v)
    }

    pub fn vectors(&self) -> &BTreeMap<Vertex, Vec<Rat>> {
        &self.vectors
    }

    pub fn placed(&self) -> &[Vertex] {
        &self.placed
    }

    pub fn is_complete(&self) -> bool {
        self.vectors.len() == self.embedding.vertex_count()
    }

    /// Adjacency in `G`; dummy vertices are isolated.
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.graph.has_edge(u, v)
    }

    pub(crate) fn assign(&mut self, v: Vertex, vector: Vec<Rat>) {
        if self.vectors.insert(v, vector).is_none() {
            self.placed.push(v);
        }
    }

    /// Overwrites a vector. Intended for tampering in tests and for loading.
    pub fn set_vector(&mut self, v: Vertex, vector: Vec<Rat>) {
        self.assign(v, vector);
    }

    /// Cliques of `H` restricted to the placed vertices: the placed prefix of
    /// the base and every placed `Q ∪ {z}`.
    pub(crate) fn placed_maximal_cliques(&self) -> Vec<Vec<Vertex>> {
        let mut out = Vec::new();
        let base: Vec<Vertex> = self
            .embedding
            .base
            .iter()
            .copied()
            .filter(|v| self.vectors.contains_key(v))
            .collect();
        out.push(base);
        for s in &self.embedding.steps {
            if self.vectors.contains_key(&s.z) {
                let mut c = s.q.clone();
                c.push(s.z);
                out.push(c);
            }
        }
        out
    }

    /// Deduplicated, sorted k-cliques among the placed vertices.
    pub(crate) fn placed_k_cliques(&self) -> Vec<Vec<Vertex>> {
        let k = self.k();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for c in self.placed_maximal_cliques() {
            for s in k_subsets(&c, k) {
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
        out
    }
}

/// Sorted k-subsets of `items`.
pub(crate) fn k_subsets(items: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[Vertex], k: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(&sorted, k, 0, &mut cur, &mut out);
    out
}

/// `{"m", "k", "vectors": {"1": [...], ...}, "seed"}` with vertices in
/// numeric order.
impl Serialize for Representation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Vectors<'a>(&'a BTreeMap<Vertex, Vec<Rat>>);
        impl Serialize for Vectors<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (v, x) in self.0 {
                    map.serialize_entry(&v.to_string(), &format_vec(x))?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("m", &self.m())?;
        map.serialize_entry("k", &self.k())?;
        map.serialize_entry("vectors", &Vectors(&self.vectors))?;
        map.serialize_entry("seed", &self.seed)?;
        map.end()
    }
}
