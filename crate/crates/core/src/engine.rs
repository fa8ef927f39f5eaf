//! Matrices in `S(Ḡ; ℚ)` with exact certificates.
//!
//! The input is the graph `Ḡ` whose pattern the matrix must carry. Its
//! complement `G` is embedded in a k-tree, a B-orthogonal representation of
//! `G` is built, and the vectors become the columns of `U`. Then
//! `A = UᵀKU` vanishes off the diagonal exactly on the edges of `G`, i.e. its
//! off-diagonal support is `E(Ḡ)`. With `K = diag(+1×p, −1×q)` and
//! `rank U = m`, Sylvester's law gives `A` the inertia `(p, q, n − m)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{find_ktree_embedding, Graph, GraphError, Vertex};
use crate::linalg::{
    inertia_congruence, inertia_sturm, rank, BilinearForm, Inertia, LinalgError, Mat,
};
use crate::repr::{
    build_representation, verify_representation, BuildError, BuildTrace, ConditionReport,
    Representation, SamplerConfig,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Widths tried, in order, when none is given.
pub const DEFAULT_K_MAX: usize = 4;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("inertia ({p}, {q}) needs k+2 = {} <= p+q <= n = {n}", k + 2)]
    BadInertiaTarget { p: usize, q: usize, k: usize, n: usize },
    #[error("matrix is {rows}x{cols} but the graph has {n} vertices")]
    SizeMismatch { rows: usize, cols: usize, n: usize },
    #[error("no certificate issued: {0}")]
    Uncertified(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Everything needed to re-check a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertiaCertificate {
    pub version: String,
    /// SHA-256 of the canonical text form of `Ḡ`.
    pub graph_hash: String,
    /// SHA-256 of the form matrix JSON.
    pub form_hash: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub seed: u64,
    pub coord_bound: u64,
    pub max_retries: u32,
    /// Requested inertia, when the form was chosen from `(p, q)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Inertia>,
    pub pattern_ok: bool,
    pub conditions_ok: bool,
    pub rank_u: usize,
    pub rank_a: usize,
    pub inertia_a: Inertia,
    pub inertia_method_agreement: bool,
    pub retries_total: u64,
}

/// Off-diagonal support of a matrix compared against a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub n: usize,
    /// Edges of the graph whose entry is zero.
    pub missing: Vec<(Vertex, Vertex)>,
    /// Non-edges whose entry is nonzero.
    pub extra: Vec<(Vertex, Vertex)>,
}

impl PatternReport {
    pub fn pass(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    pub fn violations(&self) -> usize {
        self.missing.len() + self.extra.len()
    }
}

/// The result of one construction.
#[derive(Clone, Debug)]
pub struct Construction {
    pub u: Mat,
    pub a: Mat,
    pub certificate: InertiaCertificate,
    pub representation: Representation,
    pub trace: BuildTrace,
    pub conditions: ConditionReport,
    pub pattern: PatternReport,
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn graph_hash(g: &Graph) -> String {
    hex_digest(g.to_text().as_bytes())
}

pub fn form_hash(form: &BilinearForm) -> String {
    hex_digest(
        serde_json::to_string(form.matrix())
            .expect("matrices serialize")
            .as_bytes(),
    )
}

/// Smallest `k` in `1..=k_max` whose embedding search succeeds on the
/// complement of `g_bar`.
pub fn detect_k(g_bar: &Graph, k_max: usize) -> Result<usize, GraphError> {
    let g = g_bar.complement();
    let mut inconclusive = None;
    for k in 1..=k_max {
        match find_ktree_embedding(&g, k) {
            Ok(_) => return Ok(k),
            Err(e @ GraphError::Inconclusive { .. }) => inconclusive = Some(e),
            Err(GraphError::NotPartialKTree { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(inconclusive.unwrap_or(GraphError::NotPartialKTree { k: k_max }))
}

/// Re-checks that `a` is symmetric, `n × n` and has off-diagonal support
/// exactly `E(g_bar)`. Lists every mismatched pair.
pub fn verify_matrix(a: &Mat, g_bar: &Graph) -> Result<PatternReport, EngineError> {
    let n = g_bar.n();
    if a.rows() != n || a.cols() != n {
        return Err(EngineError::SizeMismatch {
            rows: a.rows(),
            cols: a.cols(),
            n,
        });
    }
    if !a.is_symmetric() {
        return Err(LinalgError::NotSymmetric.into());
    }
    let mut report = PatternReport {
        n,
        ..PatternReport::default()
    };
    for i in 1..=n {
        for j in i + 1..=n {
            let nonzero = !num_traits::Zero::is_zero(&a[(i - 1, j - 1)]);
            match (g_bar.has_edge(i, j), nonzero) {
                (true, false) => report.missing.push((i, j)),
                (false, true) => report.extra.push((i, j)),
                _ => {}
            }
        }
    }
    Ok(report)
}

/// Pattern and both inertia computations for a stand-alone matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixAudit {
    pub pattern: PatternReport,
    pub rank: usize,
    pub inertia_congruence: Inertia,
    pub inertia_sturm: Inertia,
}

impl MatrixAudit {
    pub fn methods_agree(&self) -> bool {
        self.inertia_congruence == self.inertia_sturm
    }

    pub fn pass(&self) -> bool {
        self.pattern.pass() && self.methods_agree()
    }
}

pub fn audit_matrix(a: &Mat, g_bar: &Graph) -> Result<MatrixAudit, EngineError> {
    let pattern = verify_matrix(a, g_bar)?;
    Ok(MatrixAudit {
        pattern,
        rank: rank(a),
        inertia_congruence: inertia_congruence(a)?,
        inertia_sturm: inertia_sturm(a)?,
    })
}

/// Builds `U` and `A = UᵀKU` for the complement of `g_bar` under `form`.
///
/// A certificate is issued only when the pattern matches, C1–C5 re-check
/// from scratch, `rank U = min(m, n)` and both inertia methods agree. For
/// `m > n` the inertia is reported as computed; nothing is claimed about it.
pub fn construct_for_form(
    g_bar: &Graph,
    k: usize,
    form: &BilinearForm,
    cfg: &SamplerConfig,
) -> Result<Construction, EngineError> {
    let n = g_bar.n();
    let m = form.dim();
    let g = g_bar.complement();
    let embedding = find_ktree_embedding(&g, k)?;
    let (representation, trace) = build_representation(&g, &embedding, form, cfg)?;

    // Dummy padding vertices come after 1..=n and are dropped here.
    let columns: Vec<Vec<_>> = (1..=n)
        .map(|v| representation.vector(v).expect("complete").clone())
        .collect();
    let u = Mat::from_columns(m, &columns)?;
    let a = u.transpose().mul(&form.matrix().mul(&u)?)?;

    let pattern = verify_matrix(&a, g_bar)?;
    let conditions = verify_representation(&representation);
    let rank_u = rank(&u);
    let rank_a = rank(&a);
    let by_congruence = inertia_congruence(&a)?;
    let by_sturm = inertia_sturm(&a)?;

    let certificate = InertiaCertificate {
        version: VERSION.to_string(),
        graph_hash: graph_hash(g_bar),
        form_hash: form_hash(form),
        n,
        k,
        m,
        seed: cfg.seed,
        coord_bound: cfg.coord_bound,
        max_retries: cfg.max_retries,
        target: None,
        pattern_ok: pattern.pass(),
        conditions_ok: conditions.all_pass(),
        rank_u,
        rank_a,
        inertia_a: by_congruence,
        inertia_method_agreement: by_congruence == by_sturm,
        retries_total: trace.total_retries(),
    };

    let mut problems = Vec::new();
    if !certificate.pattern_ok {
        problems.push(format!("{} pattern violations", pattern.violations()));
    }
    if !certificate.conditions_ok {
        problems.push(format!(
            "representation fails {}",
            conditions.failed_conditions().join(", ")
        ));
    }
    if rank_u != m.min(n) {
        problems.push(format!("rank U = {rank_u}, expected {}", m.min(n)));
    }
    if !certificate.inertia_method_agreement {
        problems.push(format!(
            "congruence gives {by_congruence}, Sturm gives {by_sturm}"
        ));
    }
    if !problems.is_empty() {
        return Err(EngineError::Uncertified(problems.join("; ")));
    }

    Ok(Construction {
        u,
        a,
        certificate,
        representation,
        trace,
        conditions,
        pattern,
    })
}

fn check_target(g_bar: &Graph, k: usize, p: usize, q: usize) -> Result<(), EngineError> {
    let (m, n) = (p + q, g_bar.n());
    if m < k + 2 || m > n {
        return Err(EngineError::BadInertiaTarget { p, q, k, n });
    }
    Ok(())
}

/// A matrix in `S(g_bar; ℚ)` with exactly `p` positive and `q` negative
/// eigenvalues, for `k + 2 ≤ p + q ≤ n`.
pub fn construct_prescribed_inertia(
    g_bar: &Graph,
    k: usize,
    p: usize,
    q: usize,
    cfg: &SamplerConfig,
) -> Result<Construction, EngineError> {
    check_target(g_bar, k, p, q)?;
    let mut c = construct_for_form(g_bar, k, &BilinearForm::signature(p, q), cfg)?;
    let expected = Inertia::new(p, q, g_bar.n() - p - q);
    if c.certificate.inertia_a != expected {
        return Err(EngineError::Uncertified(format!(
            "inertia {} differs from the target {expected}",
            c.certificate.inertia_a
        )));
    }
    c.certificate.target = Some(expected);
    Ok(c)
}

/// The positive semidefinite corner `(p, q) = (k + 2, 0)`: rank `k + 2`.
pub fn semidefinite_demo(
    g_bar: &Graph,
    k: usize,
    cfg: &SamplerConfig,
) -> Result<Construction, EngineError> {
    construct_prescribed_inertia(g_bar, k, k + 2, 0, cfg)
}

/// One `(m, p, q)` run of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia: Option<Inertia>,
    pub retries: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Every `(p, q)` with `k + 2 ≤ p + q ≤ n`, each built with the same seed.
/// Rows are independent and run in parallel; output order is `(m, p)`.
/// Embedding failures are returned as errors before any row runs.
pub fn sweep(g_bar: &Graph, k: usize, cfg: &SamplerConfig) -> Result<Vec<SweepRow>, EngineError> {
    find_ktree_embedding(&g_bar.complement(), k)?;
    let targets: Vec<(usize, usize)> = (k + 2..=g_bar.n())
        .flat_map(|m| (0..=m).rev().map(move |q| (m - q, q)))
        .collect();
    Ok(targets
        .par_iter()
        .map(|&(p, q)| match construct_prescribed_inertia(g_bar, k, p, q, cfg) {
            Ok(c) => SweepRow {
                m: p + q,
                p,
                q,
                pass: true,
                inertia: Some(c.certificate.inertia_a),
                retries: c.certificate.retries_total,
                error: None,
            },
            Err(e) => SweepRow {
                m: p + q,
                p,
                q,
                pass: false,
                inertia: None,
                retries: match &e {
                    EngineError::Build(BuildError::RetriesExhausted { trace, .. }) => {
                        trace.total_retries()
                    }
                    _ => 0,
                },
                error: Some(e.to_string()),
            },
        })
        .collect())
}
