//! Randomized invariant suites behind `inertia-forge selftest`.
//!
//! Every suite draws from its own ChaCha8 stream of one seed, so a failing
//! instance can be replayed from the seed and the suite name alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{exhaustive_treewidth, find_ktree_embedding, gen, GraphError};
use crate::linalg::{
    det, inertia_congruence_with, inertia_sturm, rank, ratio, BilinearForm, Fault, Mat, Rat,
    Subspace,
};

/// Instance counts for a full run.
pub const FULL_COUNTS: Counts = Counts {
    lemma: 200,
    inertia: 500,
    treewidth: 200,
};

/// Instance counts for `--quick`.
pub const QUICK_COUNTS: Counts = Counts {
    lemma: 20,
    inertia: 50,
    treewidth: 20,
};

/// Largest form dimension drawn by the lemma suites.
pub const MAX_FORM_DIM: usize = 8;
/// Largest matrix order drawn by the inertia suite.
pub const MAX_MATRIX_ORDER: usize = 8;
/// Largest graph drawn by the treewidth suite.
pub const MAX_GRAPH_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub lemma: usize,
    pub inertia: usize,
    pub treewidth: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub counts: Counts,
    pub fault: Fault,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            counts: FULL_COUNTS,
            fault: Fault::None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// The first few failing instances, described.
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.passed == self.total
    }
}

const KEPT_FAILURES: usize = 5;

fn run_suite(
    name: &'static str,
    total: usize,
    rng: &mut ChaCha8Rng,
    mut case: impl FnMut(&mut ChaCha8Rng) -> Result<(), String>,
) -> SuiteResult {
    let mut passed = 0;
    let mut failures = Vec::new();
    for i in 0..total {
        match case(rng) {
            Ok(()) => passed += 1,
            Err(msg) if failures.len() < KEPT_FAILURES => failures.push(format!("#{i}: {msg}")),
            Err(_) => {}
        }
    }
    SuiteResult {
        name,
        passed,
        total,
        failures,
    }
}

pub fn run_selftest(cfg: &SelftestConfig) -> Vec<SuiteResult> {
    let stream = |s: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(s);
        rng
    };
    let c = cfg.counts;
    vec![
        run_suite("lemma2.1", c.lemma, &mut stream(1), check_dimension_and_double_complement),
        run_suite("lemma2.2", c.lemma, &mut stream(2), check_direct_sum),
        run_suite("lemma2.3", c.lemma, &mut stream(3), check_nondegeneracy_duality),
        run_suite("lemma2.4", c.lemma, &mut stream(4), check_cross_complements),
        run_suite("inertia-agreement", c.inertia, &mut stream(5), |rng| {
            check_inertia_agreement(rng, cfg.fault)
        }),
        run_suite("treewidth", c.treewidth, &mut stream(6), check_treewidth_oracle),
    ]
}

fn small_rat<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    // mostly integers, sometimes a proper fraction
    if rng.gen_bool(0.8) {
        ratio(rng.gen_range(-3..=3), 1)
    } else {
        ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
    }
}

fn random_vector<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<Rat> {
    (0..m).map(|_| small_rat(rng)).collect()
}

fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = small_rat(rng);
            a[(j, i)] = x.clone();
            a[(i, j)] = x;
        }
    }
    a
}

/// A random nondegenerate form: a diagonal `±1` signature, a hyperbolic
/// pairing, or a dense symmetric matrix redrawn until nonsingular.
pub fn random_form<R: Rng + ?Sized>(m: usize, rng: &mut R) -> BilinearForm {
    match rng.gen_range(0..3) {
        0 => {
            let p = rng.gen_range(0..=m);
            BilinearForm::signature(p, m - p)
        }
        1 => {
            let mut k = Mat::zeros(m, m);
            for i in (0..m - m % 2).step_by(2) {
                k[(i, i + 1)] = ratio(1, 1);
                k[(i + 1, i)] = ratio(1, 1);
            }
            if m % 2 == 1 {
                k[(m - 1, m - 1)] = ratio(-1, 1);
            }
            BilinearForm::new(k).expect("hyperbolic pairing is nondegenerate")
        }
        _ => loop {
            if let Ok(f) = BilinearForm::new(random_symmetric(m, rng)) {
                return f;
            }
        },
    }
}

/// Span of up to `max_gens` random vectors; may be degenerate or small.
fn random_subspace<R: Rng + ?Sized>(m: usize, max_gens: usize, rng: &mut R) -> Subspace {
    let gens: Vec<Vec<Rat>> = (0..rng.gen_range(0..=max_gens))
        .map(|_| random_vector(m, rng))
        .collect();
    Subspace::span(m, &gens).expect("generators have length m")
}

fn random_dim<R: Rng + ?Sized>(rng: &mut R) -> usize {
    rng.gen_range(1..=MAX_FORM_DIM)
}

fn check_dimension_and_double_complement(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = random_dim(rng);
    let f = random_form(m, rng);
    let w = random_subspace(m, m, rng);
    let perp = w.orthogonal_complement(&f).map_err(|e| e.to_string())?;
    if w.dim() + perp.dim() != m {
        return Err(format!("dim W + dim W^perp = {} + {} != {m}", w.dim(), perp.dim()));
    }
    let back = perp.orthogonal_complement(&f).map_err(|e| e.to_string())?;
    if back != w {
        return Err(format!("double complement changed W (m = {m}, dim W = {})", w.dim()));
    }
    Ok(())
}

fn check_direct_sum(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = random_dim(rng);
    let f = random_form(m, rng);
    let w = loop {
        let w = random_subspace(m, m, rng);
        if w.is_nondegenerate(&f).map_err(|e| e.to_string())? {
            break w;
        }
    };
    let perp = w.orthogonal_complement(&f).map_err(|e| e.to_string())?;
    let stacked: Vec<Vec<Rat>> = w.basis().iter().chain(perp.basis()).cloned().collect();
    let r = if stacked.is_empty() {
        0
    } else {
        rank(&Mat::from_rows(stacked).map_err(|e| e.to_string())?)
    };
    if r != m {
        return Err(format!("basis(W) and basis(W^perp) have rank {r} < {m}"));
    }
    if w.intersection_dim(&perp).map_err(|e| e.to_string())? != 0 {
        return Err("W meets W^perp".into());
    }
    Ok(())
}

fn check_nondegeneracy_duality(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = random_dim(rng);
    let f = random_form(m, rng);
    let w = random_subspace(m, m, rng);
    let perp = w.orthogonal_complement(&f).map_err(|e| e.to_string())?;
    let a = w.is_nondegenerate(&f).map_err(|e| e.to_string())?;
    let b = perp.is_nondegenerate(&f).map_err(|e| e.to_string())?;
    if a != b {
        return Err(format!("W nondegenerate = {a}, W^perp nondegenerate = {b}"));
    }
    Ok(())
}

fn check_cross_complements(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = random_dim(rng);
    let f = random_form(m, rng);
    let d = rng.gen_range(0..=m);
    let full_rank = |rng: &mut ChaCha8Rng| loop {
        let gens: Vec<Vec<Rat>> = (0..d).map(|_| random_vector(m, rng)).collect();
        let s = Subspace::span(m, &gens).expect("generators have length m");
        if s.dim() == d {
            return s;
        }
    };
    let k = full_rank(rng);
    let l = full_rank(rng);
    let kp = k.orthogonal_complement(&f).map_err(|e| e.to_string())?;
    let lp = l.orthogonal_complement(&f).map_err(|e| e.to_string())?;
    let left = l.intersect(&kp).map_err(|e| e.to_string())?.dim();
    let right = lp.intersect(&k).map_err(|e| e.to_string())?.dim();
    if left != right {
        return Err(format!("dim(L ∩ K^perp) = {left}, dim(L^perp ∩ K) = {right}"));
    }
    Ok(())
}

/// Symmetric test matrices: dense, zero-diagonal, hyperbolic blocks hidden by
/// a random congruence, and low-rank Gram matrices.
pub fn random_symmetric_case<R: Rng + ?Sized>(rng: &mut R) -> Mat {
    let n = rng.gen_range(1..=MAX_MATRIX_ORDER);
    match rng.gen_range(0..4) {
        0 => random_symmetric(n, rng),
        1 => {
            let mut a = random_symmetric(n, rng);
            for i in 0..n {
                a[(i, i)] = ratio(0, 1);
            }
            a
        }
        2 => {
            let mut h = Mat::zeros(n, n);
            let pairs = rng.gen_range(0..=n / 2);
            for b in 0..pairs {
                h[(2 * b, 2 * b + 1)] = ratio(1, 1);
                h[(2 * b + 1, 2 * b)] = ratio(1, 1);
            }
            let s = loop {
                let s = Mat::from_rows((0..n).map(|_| random_vector(n, rng)).collect())
                    .expect("square");
                if !det(&s).expect("square").is_zero() {
                    break s;
                }
            };
            s.transpose().mul(&h).and_then(|x| x.mul(&s)).expect("square")
        }
        _ => {
            let r = rng.gen_range(0..=n);
            let u = Mat::from_rows((0..r).map(|_| random_vector(n, rng)).collect());
            let mut signs: Vec<Rat> = (0..r)
                .map(|_| ratio(if rng.gen_bool(0.5) { 1 } else { -1 }, 1))
                .collect();
            signs.shuffle(rng);
            match u {
                Ok(u) => u
                    .transpose()
                    .mul(&Mat::diagonal(&signs))
                    .and_then(|x| x.mul(&u))
                    .expect("conformable"),
                Err(_) => Mat::zeros(n, n),
            }
        }
    }
}

fn check_inertia_agreement(rng: &mut ChaCha8Rng, fault: Fault) -> Result<(), String> {
    let a = random_symmetric_case(rng);
    let by_congruence = inertia_congruence_with(&a, fault).map_err(|e| e.to_string())?;
    let by_sturm = inertia_sturm(&a).map_err(|e| e.to_string())?;
    if by_congruence != by_sturm {
        return Err(format!(
            "order {}: congruence {by_congruence}, Sturm {by_sturm}",
            a.rows()
        ));
    }
    Ok(())
}

fn check_treewidth_oracle(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(2..=MAX_GRAPH_ORDER);
    let g = match rng.gen_range(0..3) {
        0 => gen::random_gnp(n, rng.gen_range(0.1..0.9), rng),
        1 => {
            let k = rng.gen_range(1..=3.min(n - 1).max(1));
            gen::random_partial_ktree(n, k, rng.gen_range(0.3..1.0), rng)
        }
        _ => gen::random_tree(n, rng),
    };
    let tw = exhaustive_treewidth(&g).map_err(|e| e.to_string())?;
    for k in 1..=3 {
        let found = match find_ktree_embedding(&g, k) {
            Ok(e) => {
                e.validate(&g).map_err(|e| format!("k = {k}: {e}"))?;
                true
            }
            Err(GraphError::NotPartialKTree { .. }) => false,
            Err(e) => return Err(format!("k = {k}: {e}")),
        };
        if found != (tw <= k) {
            return Err(format!(
                "{} vertices, treewidth {tw}: embedding for k = {k} {}",
                g.n(),
                if found { "found" } else { "missing" }
            ));
        }
    }
    Ok(())
}
