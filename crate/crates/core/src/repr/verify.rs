//! From-scratch check of the five representation conditions.
//!
//! Uses subspace complements, annihilators and intersections rather than the Gram-rank
//! shortcuts of the incremental checks, so the two routes cross-check.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use super::{k_subsets, Representation};
use crate::graph::Vertex;
use crate::linalg::{Rat, Subspace};

/// One violation: the vertex sets involved and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sets: Vec<Vec<Vertex>>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub pass: bool,
    pub checked: usize,
    pub witnesses: Vec<Witness>,
}

impl ConditionResult {
    fn from_witnesses(checked: usize, witnesses: Vec<Witness>) -> Self {
        ConditionResult {
            pass: witnesses.is_empty(),
            checked,
            witnesses,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// Form vanishes exactly on edges of G.
    pub c1: ConditionResult,
    /// Cliques of H are nondegenerate of full dimension.
    pub c2: ConditionResult,
    /// k-clique pairs meet the orthogonal complement in dimension ≤ 1
    /// (dimension 0 for a clique against itself).
    pub c3: ConditionResult,
    /// Vertices avoid the spans of k-cliques they are not in.
    pub c4: ConditionResult,
    /// Total span has dimension min(m, |V(H)|).
    pub c5: ConditionResult,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.c1.pass && self.c2.pass && self.c3.pass && self.c4.pass && self.c5.pass
    }

    pub fn failed_conditions(&self) -> Vec<&'static str> {
        [
            ("C1", &self.c1),
            ("C2", &self.c2),
            ("C3", &self.c3),
            ("C4", &self.c4),
            ("C5", &self.c5),
        ]
        .into_iter()
        .filter(|(_, r)| !r.pass)
        .map(|(n, _)| n)
        .collect()
    }
}

fn witness(sets: Vec<Vec<Vertex>>, detail: impl Into<String>) -> Witness {
    Witness {
        sets,
        detail: detail.into(),
    }
}

/// Re-checks C1–C5 on a complete representation. The five conditions are
/// evaluated on separate threads over the read-only representation.
pub fn verify_representation(rep: &Representation) -> ConditionReport {
    let n = rep.embedding.vertex_count();
    let vertices: Vec<Vertex> = (1..=n).collect();
    let missing: Vec<Vertex> = vertices
        .iter()
        .copied()
        .filter(|v| rep.vector(*v).is_none())
        .collect();
    if !missing.is_empty() {
        let r = ConditionResult::from_witnesses(
            0,
            vec![witness(vec![missing], "vertices without vectors")],
        );
        return ConditionReport {
            c1: r.clone(),
            c2: r.clone(),
            c3: r.clone(),
            c4: r.clone(),
            c5: r,
        };
    }
    let cliques = rep.embedding.enumerate_cliques();
    std::thread::scope(|s| {
        let c1 = s.spawn(|| check_pattern(rep, &vertices));
        let c2 = s.spawn(|| check_cliques(rep, &cliques.maximal_cliques));
        let c3 = s.spawn(|| check_pairs(rep, &cliques.k_cliques));
        let c4 = s.spawn(|| check_avoidance(rep, &cliques.k_cliques, &vertices));
        let c5 = check_span(rep, &vertices);
        ConditionReport {
            c1: c1.join().expect("C1 checker panicked"),
            c2: c2.join().expect("C2 checker panicked"),
            c3: c3.join().expect("C3 checker panicked"),
            c4: c4.join().expect("C4 checker panicked"),
            c5,
        }
    })
}

fn vectors<'a>(rep: &'a Representation, vs: &[Vertex]) -> Vec<&'a Vec<Rat>> {
    vs.iter()
        .map(|v| rep.vector(*v).expect("checked complete"))
        .collect()
}

fn span(rep: &Representation, vs: &[Vertex]) -> Subspace {
    Subspace::span(rep.m(), &vectors(rep, vs)).expect("vectors have length m")
}

fn check_pattern(rep: &Representation, vertices: &[Vertex]) -> ConditionResult {
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for (i, &v) in vertices.iter().enumerate() {
        for &w in &vertices[i..] {
            checked += 1;
            let b = rep
                .form
                .bilinear(rep.vector(v).unwrap(), rep.vector(w).unwrap())
                .expect("vectors have length m");
            let should_vanish = v != w && rep.adjacent(v, w);
            if b.is_zero() != should_vanish {
                let detail = if should_vanish {
                    format!("B({v},{w}) = {b} but {v}{w} is an edge")
                } else if v == w {
                    format!("B({v},{v}) = 0")
                } else {
                    format!("B({v},{w}) = 0 but {v}{w} is not an edge")
                };
                witnesses.push(witness(vec![vec![v, w]], detail));
            }
        }
    }
    ConditionResult::from_witnesses(checked, witnesses)
}

fn check_cliques(rep: &Representation, maximal: &[Vec<Vertex>]) -> ConditionResult {
    let mut all: BTreeSet<Vec<Vertex>> = BTreeSet::new();
    for c in maximal {
        for size in 1..=c.len() {
            all.extend(k_subsets(c, size));
        }
    }
    let mut witnesses = Vec::new();
    for c in &all {
        let vs = vectors(rep, c);
        let refs: Vec<&[Rat]> = vs.iter().map(|v| v.as_slice()).collect();
        let nondegenerate = rep.form.is_nondegenerate_set(&refs).expect("vectors have length m");
        let dim = span(rep, c).dim();
        if !nondegenerate || dim != c.len() {
            witnesses.push(witness(
                vec![c.clone()],
                format!("span has dimension {dim}, nondegenerate: {nondegenerate}"),
            ));
        }
    }
    ConditionResult::from_witnesses(all.len(), witnesses)
}

fn check_pairs(rep: &Representation, k_cliques: &[Vec<Vertex>]) -> ConditionResult {
    // span(C)^⊥ is carried by its annihilator, so each pair costs one
    // small rank instead of an m × m elimination.
    let spans: Vec<Subspace> = k_cliques.iter().map(|c| span(rep, c)).collect();
    let perp_annihilators: Vec<Subspace> = spans
        .iter()
        .map(|s| s.orthogonal_complement(&rep.form).expect("form matches").annihilator())
        .collect();
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for (i, c) in k_cliques.iter().enumerate() {
        for (j, d) in k_cliques.iter().enumerate() {
            checked += 1;
            let dim = spans[j]
                .dim_annihilated_by(&perp_annihilators[i])
                .expect("same ambient space");
            let limit = if i == j { 0 } else { 1 };
            if dim > limit {
                witnesses.push(witness(
                    vec![c.clone(), d.clone()],
                    format!("dim(span(C)^perp ∩ span(D)) = {dim} > {limit}"),
                ));
            }
        }
    }
    ConditionResult::from_witnesses(checked, witnesses)
}

fn check_avoidance(rep: &Representation, k_cliques: &[Vec<Vertex>], vertices: &[Vertex]) -> ConditionResult {
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for c in k_cliques {
        let s = span(rep, c);
        for &v in vertices.iter().filter(|v| !c.contains(v)) {
            checked += 1;
            if s.contains(rep.vector(v).unwrap()).expect("length m") {
                witnesses.push(witness(
                    vec![c.clone(), vec![v]],
                    format!("vector of {v} lies in the span of the clique"),
                ));
            }
        }
    }
    ConditionResult::from_witnesses(checked, witnesses)
}

fn check_span(rep: &Representation, vertices: &[Vertex]) -> ConditionResult {
    let dim = span(rep, vertices).dim();
    let expected = rep.m().min(vertices.len());
    let witnesses = if dim == expected {
        Vec::new()
    } else {
        vec![witness(
            vec![vertices.to_vec()],
            format!("total span has dimension {dim}, expected {expected}"),
        )]
    };
    ConditionResult::from_witnesses(1, witnesses)
}
