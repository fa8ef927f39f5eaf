//! Exact inertia by symmetric (Lagrange) congruence diagonalization.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Mat;
use super::LinalgError;

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub p: usize,
    pub q: usize,
    pub z: usize,
}

impl Inertia {
    pub fn new(p: usize, q: usize, z: usize) -> Self {
        Inertia { p, q, z }
    }

    pub fn rank(&self) -> usize {
        self.p + self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q + self.z
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.z)
    }
}

/// Deliberate arithmetic fault, used only to prove the self-test catches a
/// broken diagonalization.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    FlipEliminationSign,
}

pub fn inertia_congruence(a: &Mat) -> Result<Inertia, LinalgError> {
    inertia_congruence_with(a, Fault::None)
}

/// Diagonalizes `a` by simultaneous row and column operations `a ↦ Sᵀ a S`
/// and counts the signs on the resulting diagonal.
///
/// A zero pivot is first replaced by a later nonzero diagonal entry (symmetric
/// swap). If the whole remaining diagonal vanishes but the pivot row does not,
/// row/column `j` is added to row/column `i`, which puts `2·a[i][j] ≠ 0` on the
/// diagonal; this needs characteristic ≠ 2.
#[doc(hidden)]
pub fn inertia_congruence_with(a: &Mat, fault: Fault) -> Result<Inertia, LinalgError> {
    if !a.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = a.rows();
    let mut w = a.clone();
    let mut inertia = Inertia::new(0, 0, 0);

    for i in 0..n {
        if w[(i, i)].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !w[(j, j)].is_zero()) {
                swap_symmetric(&mut w, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !w[(i, j)].is_zero()) {
                add_symmetric(&mut w, i, j);
            } else {
                inertia.z += 1;
                continue;
            }
        }
        let d = w[(i, i)].clone();
        if d.is_positive() {
            inertia.p += 1;
        } else {
            inertia.q += 1;
        }
        for r in i + 1..n {
            if w[(i, r)].is_zero() {
                continue;
            }
            let f = &w[(i, r)] / &d;
            for c in r..n {
                if w[(i, c)].is_zero() {
                    continue;
                }
                let delta = &f * &w[(i, c)];
                let updated = match fault {
                    Fault::None => &w[(r, c)] - &delta,
                    Fault::FlipEliminationSign => &w[(r, c)] + &delta,
                };
                w[(c, r)] = updated.clone();
                w[(r, c)] = updated;
            }
        }
        for r in i + 1..n {
            w[(i, r)] = Zero::zero();
            w[(r, i)] = Zero::zero();
        }
    }
    Ok(inertia)
}

fn swap_symmetric(w: &mut Mat, i: usize, j: usize) {
    let n = w.rows();
    for c in 0..n {
        let t = w[(i, c)].clone();
        w[(i, c)] = w[(j, c)].clone();
        w[(j, c)] = t;
    }
    for r in 0..n {
        let t = w[(r, i)].clone();
        w[(r, i)] = w[(r, j)].clone();
        w[(r, j)] = t;
    }
}

/// Row i += row j, then column i += column j.
fn add_symmetric(w: &mut Mat, i: usize, j: usize) {
    let n = w.rows();
    for c in 0..n {
        let t = w[(j, c)].clone();
        w[(i, c)] += t;
    }
    for r in 0..n {
        let t = w[(r, j)].clone();
        w[(r, i)] += t;
    }
}
