use num_bigint::BigInt;

use super::check::{CheckContext, CheckMode};
use super::sampler::{sample_in_subspace, vertex_rng};
use super::{BuildError, BuildTrace, Representation, SamplerConfig, VertexRecord};
use crate::graph::{Graph, KTreeEmbedding, Vertex};
use crate::linalg::{primitive, BilinearForm, Rat};

/// Builds a representation of `g` along the embedding `e`.
///
/// The base clique is placed by the same extension loop as every later step:
/// the i-th base vertex attaches to the base vertices before it. Steps follow
/// in construction order. Output is a deterministic function of the inputs
/// and `cfg.seed`.
pub fn build_representation(
    g: &Graph,
    e: &KTreeEmbedding,
    form: &BilinearForm,
    cfg: &SamplerConfig,
) -> Result<(Representation, BuildTrace), BuildError> {
    cfg.validate()?;
    let mut rep = Representation::new(g.clone(), e.clone(), form.clone(), cfg.seed)?;
    let mut trace = BuildTrace {
        seed: cfg.seed,
        records: Vec::with_capacity(e.vertex_count()),
    };
    let schedule = e
        .base
        .iter()
        .enumerate()
        .map(|(i, &b)| (b, e.base[..i].to_vec()))
        .chain(e.steps.iter().map(|s| (s.z, s.q.clone())));

    for (z, q) in schedule {
        match extend_vertex(&rep, z, &q, cfg) {
            Ok((x, record)) => {
                trace.records.push(record);
                rep.assign(z, x);
            }
            Err(BuildError::RetriesExhausted {
                vertex,
                retries,
                trace: partial,
            }) => {
                trace.records.extend(partial.records);
                return Err(BuildError::RetriesExhausted {
                    vertex,
                    retries,
                    trace: Box::new(trace),
                });
            }
            Err(other) => return Err(other),
        }
    }
    Ok((rep, trace))
}

/// Chooses the vector of `z`, attached to the placed clique `q`.
///
/// Candidates are drawn from `L = span(placed G-neighbours of z)^⊥` and
/// accepted once every acceptance test passes. Each rejection is recorded and
/// retried, doubling the coefficient bound when `cfg.grow` is set. Accepted
/// vectors are scaled to primitive integer vectors.
pub fn extend_vertex(
    rep: &Representation,
    z: Vertex,
    q: &[Vertex],
    cfg: &SamplerConfig,
) -> Result<(Vec<Rat>, VertexRecord), BuildError> {
    let ctx = CheckContext::new(rep, z, q)?;
    if ctx.l.dim() == 0 {
        return Err(BuildError::EmptySampleSpace(z));
    }
    let mut record = VertexRecord {
        vertex: z,
        subspace_dim: ctx.l.dim(),
        retries: 0,
        failed: Vec::new(),
    };
    let mut rng = vertex_rng(cfg.seed, z);
    let mut bound = BigInt::from(cfg.coord_bound);
    for attempt in 0..=cfg.max_retries {
        let x = primitive(&sample_in_subspace(&ctx.l, &mut rng, &bound)?);
        let failed = ctx.evaluate(&x, CheckMode::FailFast)?;
        if failed.is_empty() {
            record.retries = attempt;
            return Ok((x, record));
        }
        record.failed.push(failed);
        if cfg.grow {
            bound *= 2;
        }
    }
    record.retries = cfg.max_retries;
    Err(BuildError::RetriesExhausted {
        vertex: z,
        retries: cfg.max_retries,
        trace: Box::new(BuildTrace {
            seed: cfg.seed,
            records: vec![record],
        }),
    })
}
