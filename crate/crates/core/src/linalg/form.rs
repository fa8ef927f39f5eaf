//! Nondegenerate symmetric bilinear forms `B(u, v) = uᵀ K v`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{det, Mat};
use super::rat::{rat, Rat};
use super::LinalgError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(into = "Mat")]
pub struct BilinearForm {
    k: Mat,
}

impl From<BilinearForm> for Mat {
    fn from(f: BilinearForm) -> Mat {
        f.k
    }
}

impl<'de> Deserialize<'de> for BilinearForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let k = Mat::deserialize(d)?;
        BilinearForm::new(k).map_err(serde::de::Error::custom)
    }
}

impl BilinearForm {
    /// Wraps `k`, checking it is symmetric and nonsingular.
    pub fn new(k: Mat) -> Result<Self, LinalgError> {
        if !k.is_square() {
            return Err(LinalgError::NotSquare {
                rows: k.rows(),
                cols: k.cols(),
            });
        }
        if !k.is_symmetric() {
            return Err(LinalgError::NotSymmetric);
        }
        if det(&k)?.is_zero() {
            return Err(LinalgError::Degenerate);
        }
        Ok(BilinearForm { k })
    }

    pub fn identity(m: usize) -> Self {
        BilinearForm { k: Mat::identity(m) }
    }

    /// `diag(+1 × p, −1 × q)`.
    pub fn signature(p: usize, q: usize) -> Self {
        let entries: Vec<Rat> = std::iter::repeat_n(Rat::one(), p)
            .chain(std::iter::repeat_n(rat(-1), q))
            .collect();
        BilinearForm {
            k: Mat::diagonal(&entries),
        }
    }

    pub fn dim(&self) -> usize {
        self.k.rows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.k
    }

    fn check_len(&self, v: &[Rat]) -> Result<(), LinalgError> {
        if v.len() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `K v`; pairing this with `u` gives `B(u, v)`.
    pub fn apply(&self, v: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        self.k.mul_vec(v)
    }

    pub fn bilinear(&self, u: &[Rat], v: &[Rat]) -> Result<Rat, LinalgError> {
        self.check_len(u)?;
        let kv = self.apply(v)?;
        Ok(dot(u, &kv))
    }

    /// Gram matrix `[B(xᵢ, xⱼ)]`.
    pub fn gram(&self, vectors: &[&[Rat]]) -> Result<Mat, LinalgError> {
        let images = vectors
            .iter()
            .map(|v| self.apply(v))
            .collect::<Result<Vec<_>, _>>()?;
        let n = vectors.len();
        let mut g = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let b = dot(vectors[i], &images[j]);
                g[(j, i)] = b.clone();
                g[(i, j)] = b;
            }
        }
        Ok(g)
    }

    /// Cross Gram block `[B(xᵢ, yⱼ)]`.
    pub fn cross_gram(&self, xs: &[&[Rat]], ys: &[&[Rat]]) -> Result<Mat, LinalgError> {
        let images = ys
            .iter()
            .map(|v| self.apply(v))
            .collect::<Result<Vec<_>, _>>()?;
        let mut g = Mat::zeros(xs.len(), ys.len());
        for (i, x) in xs.iter().enumerate() {
            self.check_len(x)?;
            for (j, ky) in images.iter().enumerate() {
                g[(i, j)] = dot(x, ky);
            }
        }
        Ok(g)
    }

    /// True iff the Gram determinant of `vectors` is nonzero. The empty set is
    /// nondegenerate.
    pub fn is_nondegenerate_set(&self, vectors: &[&[Rat]]) -> Result<bool, LinalgError> {
        Ok(!det(&self.gram(vectors)?)?.is_zero())
    }
}

pub(crate) fn dot(u: &[Rat], v: &[Rat]) -> Rat {
    super::rat::sum_of_products(u.iter().zip(v))
}
