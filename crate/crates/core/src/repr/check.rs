//! Acceptance tests for a candidate vector of a newly attached vertex.
//!
//! Each test is the exact geometric statement whose failure set on `L` is a
//! proper algebraic subset, so a random point of `L` passes all of them with
//! high probability.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{k_subsets, BuildError, CheckTag, Representation};
use crate::graph::Vertex;
use crate::linalg::{det, rank, BilinearForm, Mat, Rat, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Stop at the first failing test (cheapest tests run first).
    FailFast,
    /// Run every test and report all failures.
    Exhaustive,
}

struct OldClique {
    members: Vec<Vertex>,
    span: Subspace,
    rank: usize,
}

/// Everything about the placed configuration that does not depend on the
/// candidate, computed once per vertex and reused across retries.
pub(crate) struct CheckContext<'a> {
    rep: &'a Representation,
    z: Vertex,
    /// Placed vertices the new vertex attaches to, sorted.
    q: Vec<Vertex>,
    neighbours: Vec<Vertex>,
    non_neighbours: Vec<Vertex>,
    old_cliques: Vec<OldClique>,
    /// k-subsets of `Q ∪ {z}` containing `z`.
    new_cliques: Vec<Vec<Vertex>>,
    /// `span((C ∖ {z}) ∪ {w})` for new k-cliques `C` and placed `w ∉ C`.
    swap_spans: Vec<Subspace>,
    /// Span of all placed vectors, present while fewer than `m` are placed.
    total_span: Option<Subspace>,
    /// `B(q, w)` for `q ∈ Q` and every placed `w`.
    q_products: BTreeMap<(Vertex, Vertex), Rat>,
    /// `span(N_G(z))^⊥` over placed neighbours.
    pub(crate) l: Subspace,
}

fn dot(u: &[Rat], v: &[Rat]) -> Rat {
    crate::linalg::sum_of_products(u.iter().zip(v))
}

/// The vertices `z` is attached to: the earlier base vertices for a base
/// vertex, otherwise the step's `Q`.
pub(crate) fn attachment(rep: &Representation, z: Vertex) -> Option<Vec<Vertex>> {
    let e = &rep.embedding;
    if let Some(i) = e.base.iter().position(|&b| b == z) {
        return Some(e.base[..i].to_vec());
    }
    e.steps.iter().find(|s| s.z == z).map(|s| s.q.clone())
}

impl<'a> CheckContext<'a> {
    pub(crate) fn new(rep: &'a Representation, z: Vertex, q: &[Vertex]) -> Result<Self, BuildError> {
        let m = rep.m();
        let k = rep.k();
        let placed = rep.placed();
        let vec_of = |v: Vertex| rep.vector(v).expect("placed vertex has a vector");
        let mut q = q.to_vec();
        q.sort_unstable();
        if let Some(&w) = q.iter().find(|w| rep.vector(**w).is_none()) {
            return Err(BuildError::Graph(crate::graph::GraphError::InvalidEmbedding(
                format!("vertex {w} of Q is not placed before {z}"),
            )));
        }

        let (neighbours, non_neighbours): (Vec<Vertex>, Vec<Vertex>) = placed
            .iter()
            .copied()
            .filter(|&w| w != z)
            .partition(|&w| rep.adjacent(z, w));
        let nb_vectors: Vec<&Vec<Rat>> = neighbours.iter().map(|&w| vec_of(w)).collect();
        let l = Subspace::span(m, &nb_vectors)?.orthogonal_complement(&rep.form)?;

        let old_cliques = rep
            .placed_k_cliques()
            .into_iter()
            .map(|members| {
                let vs: Vec<&Vec<Rat>> = members.iter().map(|&w| vec_of(w)).collect();
                let span = Subspace::span(m, &vs)?;
                let rank = span.dim();
                Ok(OldClique { members, span, rank })
            })
            .collect::<Result<Vec<_>, BuildError>>()?;

        let mut with_z = q.clone();
        with_z.push(z);
        let new_cliques: Vec<Vec<Vertex>> = if k == 0 {
            Vec::new()
        } else {
            k_subsets(&with_z, k)
                .into_iter()
                .filter(|c| c.contains(&z))
                .collect()
        };

        let mut swap_spans = Vec::new();
        for c in &new_cliques {
            let rest: Vec<Vertex> = c.iter().copied().filter(|&v| v != z).collect();
            for &w in placed.iter().filter(|w| !c.contains(w)) {
                let mut vs: Vec<&Vec<Rat>> = rest.iter().map(|&v| vec_of(v)).collect();
                vs.push(vec_of(w));
                swap_spans.push(Subspace::span(m, &vs)?);
            }
        }

        let total_span = if placed.len() < m {
            let all: Vec<&Vec<Rat>> = placed.iter().map(|&v| vec_of(v)).collect();
            Some(Subspace::span(m, &all)?)
        } else {
            None
        };

        let mut q_products = BTreeMap::new();
        for &a in &q {
            let ka = rep.form.apply(vec_of(a))?;
            for &w in placed {
                q_products.insert((a, w), dot(vec_of(w), &ka));
            }
        }

        Ok(CheckContext {
            rep,
            q_products,
            z,
            q,
            neighbours,
            non_neighbours,
            old_cliques,
            new_cliques,
            swap_spans,
            total_span,
            l,
        })
    }

    fn form(&self) -> &BilinearForm {
        &self.rep.form
    }

    fn vec_of(&self, v: Vertex) -> &[Rat] {
        self.rep.vector(v).expect("placed vertex has a vector")
    }

    /// Runs the tests on `x`; an empty result means accepted.
    pub(crate) fn evaluate(&self, x: &[Rat], mode: CheckMode) -> Result<Vec<CheckTag>, BuildError> {
        let kx = self.form().apply(x)?;
        let bx = |w: Vertex| dot(self.vec_of(w), &kx);
        let mut failed = Vec::new();
        macro_rules! run {
            ($tag:expr, $ok:expr) => {
                if !$ok {
                    failed.push($tag);
                    if mode == CheckMode::FailFast {
                        return Ok(failed);
                    }
                }
            };
        }

        run!(
            CheckTag::Orthogonality,
            self.neighbours.iter().all(|&w| bx(w).is_zero())
        );
        let xx = dot(x, &kx);
        run!(CheckTag::Anisotropy, !xx.is_zero());
        run!(
            CheckTag::Pattern,
            self.non_neighbours.iter().all(|&w| !bx(w).is_zero())
        );
        run!(CheckTag::CliqueNondegenerate, self.cliques_nondegenerate(x, &kx)?);
        run!(
            CheckTag::OutsideOldCliques,
            self.old_cliques
                .iter()
                .map(|c| c.span.contains(x))
                .collect::<Result<Vec<_>, _>>()?
                .iter()
                .all(|inside| !inside)
        );
        let outside_total = match &self.total_span {
            Some(s) => !s.contains(x)?,
            None => true,
        };
        run!(CheckTag::SpanGrowth, outside_total);
        let mut swaps_ok = true;
        for s in &self.swap_spans {
            if s.contains(x)? {
                swaps_ok = false;
                break;
            }
        }
        run!(CheckTag::OutsideNewCliques, swaps_ok);
        run!(CheckTag::NewVersusOld, self.new_versus_old(x, &kx)?);
        run!(CheckTag::NewVersusNew, self.new_versus_new(x, &kx)?);
        Ok(failed)
    }

    /// `B(a, b)` where either side may be the candidate (`None`).
    fn pair(&self, a: Option<Vertex>, b: Option<Vertex>, x: &[Rat], kx: &[Rat]) -> Result<Rat, BuildError> {
        Ok(match (a, b) {
            (None, None) => dot(x, kx),
            (Some(v), None) | (None, Some(v)) => dot(self.vec_of(v), kx),
            (Some(v), Some(w)) => match self.q_products.get(&(v, w)).or_else(|| self.q_products.get(&(w, v))) {
                Some(b) => b.clone(),
                None => self.form().bilinear(self.vec_of(v), self.vec_of(w))?,
            },
        })
    }

    fn slot(&self, v: Vertex) -> Option<Vertex> {
        (v != self.z).then_some(v)
    }

    /// Every `S ∪ {z}` with `S ⊆ Q` has nonsingular Gram matrix: all principal
    /// minors through the last index of the Gram matrix of `Q ∪ {z}`.
    fn cliques_nondegenerate(&self, x: &[Rat], kx: &[Rat]) -> Result<bool, BuildError> {
        let s = self.q.len();
        let slots: Vec<Option<Vertex>> = self.q.iter().map(|&v| Some(v)).chain([None]).collect();
        let mut gram = Mat::zeros(s + 1, s + 1);
        for i in 0..=s {
            for j in i..=s {
                let b = self.pair(slots[i], slots[j], x, kx)?;
                gram[(j, i)] = b.clone();
                gram[(i, j)] = b;
            }
        }
        for mask in 0u32..1 << s {
            let idx: Vec<usize> = (0..s).filter(|i| mask & (1 << i) != 0).chain([s]).collect();
            let mut sub = Mat::zeros(idx.len(), idx.len());
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    sub[(a, b)] = gram[(i, j)].clone();
                }
            }
            if det(&sub)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `dim(span(C)^⊥ ∩ span(D)) = rank(D) − rank([B(c, d)])`.
    fn perp_meet_dim(
        &self,
        c: &[Vertex],
        d: &[Vertex],
        rank_d: usize,
        x: &[Rat],
        kx: &[Rat],
    ) -> Result<usize, BuildError> {
        let mut cross = Mat::zeros(c.len(), d.len());
        for (i, &a) in c.iter().enumerate() {
            for (j, &b) in d.iter().enumerate() {
                cross[(i, j)] = self.pair(self.slot(a), self.slot(b), x, kx)?;
            }
        }
        Ok(rank_d - rank(&cross))
    }

    fn clique_rank(&self, c: &[Vertex], x: &[Rat]) -> usize {
        let rows: Vec<Vec<Rat>> = c
            .iter()
            .map(|&v| if v == self.z { x.to_vec() } else { self.vec_of(v).to_vec() })
            .collect();
        rank(&Mat::from_rows(rows).expect("vectors share the ambient dimension"))
    }

    fn new_versus_old(&self, x: &[Rat], kx: &[Rat]) -> Result<bool, BuildError> {
        for c in &self.new_cliques {
            for d in &self.old_cliques {
                if self.perp_meet_dim(c, &d.members, d.rank, x, kx)? > 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn new_versus_new(&self, x: &[Rat], kx: &[Rat]) -> Result<bool, BuildError> {
        for d in &self.new_cliques {
            let rank_d = self.clique_rank(d, x);
            for c in &self.new_cliques {
                if self.perp_meet_dim(c, d, rank_d, x, kx)? > 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Evaluates every acceptance test for `candidate` as the vector of `z`,
/// against the vertices already placed in `rep`. An empty list means pass.
pub fn check_new_vertex(
    rep: &Representation,
    z: Vertex,
    candidate: &[Rat],
) -> Result<Vec<CheckTag>, BuildError> {
    let q = attachment(rep, z).ok_or_else(|| {
        BuildError::Graph(crate::graph::GraphError::InvalidEmbedding(format!(
            "vertex {z} is not in the embedding"
        )))
    })?;
    CheckContext::new(rep, z, &q)?.evaluate(candidate, CheckMode::Exhaustive)
}
