//! Subspaces of ℚ^m in canonical reduced row-echelon form.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::form::BilinearForm;
use super::matrix::{integer_rank, integer_rref, null_space, rref_rows, Mat};
use super::rat::{clear_denominators, Rat};
use super::LinalgError;

/// A subspace of ℚ^m. The basis is kept in reduced row-echelon form with
/// unit pivots, so two subspaces are equal iff their bases are.
#[derive(Clone, Debug)]
pub struct Subspace {
    m: usize,
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    /// `scaled / scale` is `basis`; membership and rank tests use this form.
    scaled: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Subspace {
    pub fn zero(m: usize) -> Self {
        Subspace {
            m,
            basis: Vec::new(),
            pivots: Vec::new(),
            scaled: Vec::new(),
            scale: BigInt::one(),
        }
    }

    pub fn full(m: usize) -> Self {
        Self::span(m, &Mat::identity(m).to_rows()).expect("identity rows have length m")
    }

    /// Span of arbitrary (possibly dependent) vectors of length `m`.
    pub fn span<V: AsRef<[Rat]>>(m: usize, vectors: &[V]) -> Result<Self, LinalgError> {
        let mut rows = Vec::with_capacity(vectors.len());
        for v in vectors {
            let v = v.as_ref();
            if v.len() != m {
                return Err(LinalgError::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
            rows.push(clear_denominators(v).0);
        }
        let (scaled, pivots, scale) = integer_rref(rows, m);
        let basis = scaled
            .iter()
            .map(|row| row.iter().map(|x| Rat::new(x.clone(), scale.clone())).collect())
            .collect();
        Ok(Subspace {
            m,
            basis,
            pivots,
            scaled,
            scale,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    fn same_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.m != other.m {
            return Err(LinalgError::DimensionMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        Ok(())
    }

    /// Membership test. In echelon form the only candidate combination is
    /// `Σ v[pᵢ] bᵢ`, so `v` is inside iff that reproduces every free entry.
    pub fn contains(&self, v: &[Rat]) -> Result<bool, LinalgError> {
        if v.len() != self.m {
            return Err(LinalgError::DimensionMismatch {
                expected: self.m,
                found: v.len(),
            });
        }
        let (x, _) = clear_denominators(v);
        let mut is_pivot = vec![false; self.m];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        for j in (0..self.m).filter(|&j| !is_pivot[j]) {
            let mut combo = BigInt::zero();
            for (row, &p) in self.scaled.iter().zip(&self.pivots) {
                if !x[p].is_zero() && !row[j].is_zero() {
                    combo += &x[p] * &row[j];
                }
            }
            if combo != &self.scale * &x[j] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.same_ambient(other)?;
        let rows: Vec<&Vec<Rat>> = self.basis.iter().chain(&other.basis).collect();
        Subspace::span(self.m, &rows)
    }

    /// `A ∩ B` by the Zassenhaus algorithm: row-reduce `[a | a; b | 0]`; the
    /// rows whose left half vanishes carry a basis of the intersection.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.same_ambient(other)?;
        let m = self.m;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for a in &self.basis {
            let mut row = a.clone();
            row.extend(a.iter().cloned());
            rows.push(row);
        }
        for b in &other.basis {
            let mut row = b.clone();
            row.extend(std::iter::repeat_n(Rat::zero(), m));
            rows.push(row);
        }
        let (reduced, _) = rref_rows(rows, 2 * m);
        let meet: Vec<Vec<Rat>> = reduced
            .into_iter()
            .filter(|row| row[..m].iter().all(Zero::is_zero))
            .map(|row| row[m..].to_vec())
            .collect();
        Subspace::span(m, &meet)
    }

    /// `dim(A ∩ B) = dim A + dim B − dim(A + B)`, with the sum's dimension from
    /// fraction-free rank. Cheaper than [`Subspace::intersect`] when only the
    /// dimension is needed.
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize, LinalgError> {
        self.same_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(0);
        }
        let stacked = self.scaled.iter().chain(&other.scaled).cloned().collect();
        Ok(self.dim() + other.dim() - integer_rank(stacked, self.m))
    }

    /// The annihilator `{y : y · x = 0 ∀ x ∈ W}` under the standard dot
    /// product, independent of any form.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.m);
        }
        let rows = Mat::from_rows(self.basis.clone()).expect("basis rows have length m");
        Subspace::span(self.m, &null_space(&rows)).expect("null space vectors have length m")
    }

    /// `dim {x ∈ self : a · x = 0 ∀ a ∈ A}` given a basis of `A`, which is
    /// `dim self − rank([aᵢ · bⱼ])` over a basis `bⱼ` of this subspace.
    pub fn dim_annihilated_by(&self, annihilator: &Subspace) -> Result<usize, LinalgError> {
        self.same_ambient(annihilator)?;
        if self.dim() == 0 || annihilator.dim() == 0 {
            return Ok(self.dim());
        }
        let pairing: Vec<Vec<BigInt>> = annihilator
            .scaled
            .iter()
            .map(|a| {
                self.scaled
                    .iter()
                    .map(|b| {
                        a.iter()
                            .zip(b)
                            .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                            .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
                    })
                    .collect()
            })
            .collect();
        Ok(self.dim() - integer_rank(pairing, self.dim()))
    }

    /// `W^⊥ = {x : B(x, y) = 0 ∀ y ∈ W}`, the null space of `basis · K`.
    pub fn orthogonal_complement(&self, form: &BilinearForm) -> Result<Subspace, LinalgError> {
        if form.dim() != self.m {
            return Err(LinalgError::DimensionMismatch {
                expected: form.dim(),
                found: self.m,
            });
        }
        if self.basis.is_empty() {
            return Ok(Subspace::full(self.m));
        }
        let rows = self
            .basis
            .iter()
            .map(|b| form.apply(b))
            .collect::<Result<Vec<_>, _>>()?;
        // K is symmetric, so (bᵀK)ᵀ = K b.
        let constraints = Mat::from_rows(rows)?;
        Subspace::span(self.m, &null_space(&constraints))
    }

    /// Whether the restriction of the form to this subspace is nondegenerate.
    pub fn is_nondegenerate(&self, form: &BilinearForm) -> Result<bool, LinalgError> {
        let refs: Vec<&[Rat]> = self.basis.iter().map(Vec::as_slice).collect();
        form.is_nondegenerate_set(&refs)
    }
}
