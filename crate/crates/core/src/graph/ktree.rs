use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, Vertex};

/// One construction step: `z` is joined to the k-clique `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub z: Vertex,
    pub q: Vec<Vertex>,
}

/// Certificate that a graph is a partial k-tree: a base (k+1)-clique and the
/// ordered steps that grow it into a k-tree `H` containing the graph.
///
/// `dummies` lists isolated padding vertices added when the input had fewer
/// than k+1 vertices; they carry the highest labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTreeEmbedding {
    pub k: usize,
    pub base: Vec<Vertex>,
    pub steps: Vec<Step>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dummies: Vec<Vertex>,
}

/// Cliques of the replayed k-tree that the construction conditions range over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSet {
    /// The base and every `Q ∪ {z}`, each sorted.
    pub maximal_cliques: Vec<Vec<Vertex>>,
    /// All k-subsets of the maximal cliques, deduplicated, each sorted.
    pub k_cliques: Vec<Vec<Vertex>>,
}

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidEmbedding(msg.into())
}

impl KTreeEmbedding {
    /// Number of vertices of `H`, padding included.
    pub fn vertex_count(&self) -> usize {
        self.base.len() + self.steps.len()
    }

    /// Number of vertices of the embedded graph, padding excluded.
    pub fn real_vertex_count(&self) -> usize {
        self.vertex_count() - self.dummies.len()
    }

    pub fn is_dummy(&self, v: Vertex) -> bool {
        self.dummies.contains(&v)
    }

    pub fn construction_order(&self) -> &[Step] {
        &self.steps
    }

    /// Replays the construction and returns the k-tree `H`, checking every
    /// structural invariant along the way.
    pub fn replay(&self) -> Result<Graph, GraphError> {
        let k = self.k;
        if k == 0 {
            return Err(GraphError::InvalidWidth);
        }
        if self.base.len() != k + 1 {
            return Err(invalid(format!(
                "base has {} vertices, expected {}",
                self.base.len(),
                k + 1
            )));
        }
        let total = self.vertex_count();
        let mut h = Graph::empty(total);
        let mut placed = vec![false; total + 1];
        let place = |v: Vertex, placed: &mut Vec<bool>| -> Result<(), GraphError> {
            if v == 0 || v > total {
                return Err(invalid(format!("vertex {v} outside 1..={total}")));
            }
            if placed[v] {
                return Err(invalid(format!("vertex {v} placed twice")));
            }
            placed[v] = true;
            Ok(())
        };
        for &b in &self.base {
            place(b, &mut placed)?;
        }
        for (i, &u) in self.base.iter().enumerate() {
            for &v in &self.base[i + 1..] {
                h.insert_edge(u, v);
            }
        }
        for (idx, step) in self.steps.iter().enumerate() {
            if step.q.len() != k {
                return Err(invalid(format!(
                    "step {idx} attaches to {} vertices, expected {k}",
                    step.q.len()
                )));
            }
            for &w in &step.q {
                if w == 0 || w > total || !placed[w] {
                    return Err(invalid(format!(
                        "step {idx}: vertex {w} of Q not yet placed"
                    )));
                }
            }
            if !h.is_clique(&step.q) {
                return Err(invalid(format!("step {idx}: Q is not a clique")));
            }
            place(step.z, &mut placed)?;
            for &w in &step.q {
                h.insert_edge(step.z, w);
            }
        }
        for d in &self.dummies {
            if *d == 0 || *d > total {
                return Err(invalid(format!("dummy {d} outside 1..={total}")));
            }
        }
        Ok(h)
    }

    /// Checks the embedding against `g`: replay succeeds, vertex counts match
    /// (after padding) and every edge of `g` is an edge of `H`.
    pub fn validate(&self, g: &Graph) -> Result<Graph, GraphError> {
        let h = self.replay()?;
        if self.real_vertex_count() != g.n() {
            return Err(invalid(format!(
                "embedding covers {} real vertices, graph has {}",
                self.real_vertex_count(),
                g.n()
            )));
        }
        if self.dummies.iter().any(|&d| d <= g.n()) {
            return Err(invalid("dummy label collides with a graph vertex"));
        }
        if let Some((u, v)) = g.edges().find(|&(u, v)| !h.has_edge(u, v)) {
            return Err(invalid(format!("edge {u}-{v} of G missing from H")));
        }
        Ok(h)
    }

    pub fn enumerate_cliques(&self) -> CliqueSet {
        let mut maximal = Vec::with_capacity(self.steps.len() + 1);
        let mut base = self.base.clone();
        base.sort_unstable();
        maximal.push(base);
        for s in &self.steps {
            let mut c = s.q.clone();
            c.push(s.z);
            c.sort_unstable();
            maximal.push(c);
        }
        let mut seen = HashSet::new();
        let mut k_cliques = Vec::new();
        for c in &maximal {
            for skip in 0..c.len() {
                let sub: Vec<Vertex> = c
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                if seen.insert(sub.clone()) {
                    k_cliques.push(sub);
                }
            }
        }
        CliqueSet {
            maximal_cliques: maximal,
            k_cliques,
        }
    }

    /// All `S ∪ {z}` for `S ⊆ Q`: exactly the cliques of `H'` that contain
    /// `z`, since `z`'s neighbourhood at insertion is `Q`.
    pub fn cliques_containing_new_vertex(step: &Step) -> Vec<Vec<Vertex>> {
        subsets(&step.q)
            .into_iter()
            .map(|mut s| {
                s.push(step.z);
                s.sort_unstable();
                s
            })
            .collect()
    }
}

/// All subsets of `items`, in binary-counter order (empty set first).
pub(crate) fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    assert!(items.len() < 32, "subset enumeration limited to 31 items");
    (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) != 0)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}
