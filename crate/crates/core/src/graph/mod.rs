//! Simple undirected graphs on vertices `1..=n`, k-tree embeddings and the
//! clique bookkeeping the representation builder needs.

pub mod gen;
mod ktree;
mod treewidth;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

pub use ktree::{CliqueSet, KTreeEmbedding, Step};
pub use treewidth::{exhaustive_treewidth, find_ktree_embedding, EXACT_SEARCH_LIMIT, EXHAUSTIVE_LIMIT};

/// Vertex label, 1-based.
pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph parse error: {0}")]
    Parse(String),
    #[error("graph is not a partial {k}-tree")]
    NotPartialKTree { k: usize },
    #[error("heuristic search found no {k}-tree embedding; exact search is limited to {limit} vertices")]
    Inconclusive { k: usize, limit: usize },
    #[error("width must be at least 1")]
    InvalidWidth,
    #[error("instance has {n} vertices; limit is {limit}")]
    InstanceTooLarge { n: usize, limit: usize },
    #[error("invalid k-tree embedding: {0}")]
    InvalidEmbedding(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BTreeSet<Vertex>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n()
    }

    fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v > self.n() {
            return Err(GraphError::VertexOutOfRange { v, n: self.n() });
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.insert_edge(u, v);
        Ok(())
    }

    /// Inserts without validation; a no-op if the edge exists.
    pub(crate) fn insert_edge(&mut self, u: Vertex, v: Vertex) {
        self.adj[u - 1].insert(v);
        self.adj[v - 1].insert(u);
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && u >= 1 && u <= self.n() && self.adj[u - 1].contains(&v)
    }

    pub fn neighbors(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v - 1].len()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically ordered.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, nb)| {
            let u = i + 1;
            nb.range(u + 1..).map(move |&v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n);
        for u in 1..=n {
            for v in u + 1..=n {
                if !self.has_edge(u, v) {
                    g.insert_edge(u, v);
                }
            }
        }
        g
    }

    /// Same vertices plus `extra` isolated ones labelled `n+1..`.
    pub fn with_isolated(&self, extra: usize) -> Graph {
        let mut g = self.clone();
        g.adj.extend(std::iter::repeat_n(BTreeSet::new(), extra));
        g
    }

    /// Every edge of `self` is an edge of `other` (vertex sets compared by label).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() <= other.n() && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    pub fn is_clique(&self, vs: &[Vertex]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Parses `"n e"` followed by `e` lines `"u v"`. Blank lines and `#`
    /// comments are ignored.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GraphError::Parse("missing header line \"n e\"".into()))?;
        let nums = parse_pair(header)?;
        let (n, e) = (nums.0, nums.1);
        let mut g = Graph::empty(n);
        let mut seen = 0;
        for line in lines {
            let (u, v) = parse_pair(line)?;
            g.add_edge(u, v)?;
            seen += 1;
        }
        if seen != e {
            return Err(GraphError::Parse(format!(
                "header declares {e} edges, found {seen}"
            )));
        }
        Ok(g)
    }

    /// Canonical text form: header then edges sorted, `u < v`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize), GraphError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(GraphError::Parse(format!(
            "expected two integers, got {line:?}"
        )));
    }
    let p = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| GraphError::Parse(format!("bad integer {s:?}")))
    };
    Ok((p(parts[0])?, p(parts[1])?))
}
