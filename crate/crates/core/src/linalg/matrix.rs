//! Dense rational matrices, fraction-free rank/determinant and row reduction.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{clear_denominators, format_rat, parse_rat, rat, sum_of_products, Rat};
use super::LinalgError;

/// Row-major dense matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(m: usize, columns: &[Vec<Rat>]) -> Result<Self, LinalgError> {
        let mut out = Self::zeros(m, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != m {
                return Err(LinalgError::DimensionMismatch {
                    expected: m,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                out[(i, j)] = x.clone();
            }
        }
        Ok(out)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let columns: Vec<Vec<Rat>> = (0..other.cols).map(|j| other.column(j)).collect();
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (j, col) in columns.iter().enumerate() {
                out[(i, j)] = sum_of_products(self.row(i).iter().zip(col));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| sum_of_products(self.row(i).iter().zip(v)))
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).fold(Rat::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Rank over the rationals by fraction-free elimination.
    pub fn rank(&self) -> usize {
        rank(self)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatJson {
    rows: usize,
    cols: usize,
    data: Vec<Vec<String>>,
}

impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatJson {
            rows: self.rows,
            cols: self.cols,
            data: (0..self.rows)
                .map(|i| self.row(i).iter().map(format_rat).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = MatJson::deserialize(d)?;
        if raw.data.len() != raw.rows {
            return Err(D::Error::custom(format!(
                "matrix declares {} rows but has {}",
                raw.rows,
                raw.data.len()
            )));
        }
        let mut rows = Vec::with_capacity(raw.rows);
        for r in &raw.data {
            if r.len() != raw.cols {
                return Err(D::Error::custom(format!(
                    "matrix declares {} columns but a row has {}",
                    raw.cols,
                    r.len()
                )));
            }
            let parsed: Result<Vec<Rat>, _> = r.iter().map(|s| parse_rat(s)).collect();
            rows.push(parsed.map_err(D::Error::custom)?);
        }
        if raw.rows == 0 {
            return Ok(Mat::zeros(0, raw.cols));
        }
        Mat::from_rows(rows).map_err(D::Error::custom)
    }
}

/// Fraction-free (Bareiss) forward elimination on an integer matrix.
///
/// Returns the rank and the last pivot together with the parity of row swaps.
/// For a square full-rank input the last pivot is the determinant up to sign.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> (usize, BigInt, bool) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut swapped = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swapped = !swapped;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, prev, swapped)
}

fn integer_rows(a: &Mat) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..a.rows())
        .map(|i| {
            let (row, s) = clear_denominators(a.row(i));
            scale *= s;
            row
        })
        .collect();
    (rows, scale)
}

/// Rank over the rationals via fraction-free Gaussian elimination.
pub fn rank(a: &Mat) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    let (rows, _) = integer_rows(a);
    bareiss(rows, a.cols()).0
}

/// Determinant via fraction-free elimination.
pub fn det(a: &Mat) -> Result<Rat, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Rat::one());
    }
    let (rows, scale) = integer_rows(a);
    let (r, last, swapped) = bareiss(rows, n);
    if r < n {
        return Ok(Rat::zero());
    }
    let d = Rat::new(last, scale);
    Ok(if swapped { -d } else { d })
}

/// Reduced row-echelon form over the rationals with unit pivots and the pivot
/// columns. Zero rows are dropped.
pub fn rref(a: &Mat) -> (Vec<Vec<Rat>>, Vec<usize>) {
    rref_rows(a.to_rows(), a.cols())
}

pub(crate) fn rref_rows(rows: Vec<Vec<Rat>>, cols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let ints = rows.iter().map(|r| clear_denominators(r).0).collect();
    let (scaled, pivots, d) = integer_rref(ints, cols);
    let reduced = scaled
        .into_iter()
        .map(|row| row.into_iter().map(|x| Rat::new(x, d.clone())).collect())
        .collect();
    (reduced, pivots)
}

/// Fraction-free Gauss–Jordan elimination.
///
/// Returns `(R, pivots, d)` with `d > 0` such that `R / d` is the reduced
/// row-echelon form of the input (zero rows dropped). Every division by the
/// previous pivot is exact, so no gcd is taken until the caller normalizes.
pub(crate) fn integer_rref(
    mut a: Vec<Vec<BigInt>>,
    cols: usize,
) -> (Vec<Vec<BigInt>>, Vec<usize>, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pivot_row = std::mem::take(&mut a[r]);
        let piv = &pivot_row[c];
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let lead = std::mem::take(&mut row[c]);
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let mut v = piv * &row[j];
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    v -= &lead * &pivot_row[j];
                }
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = piv.clone();
        a[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    if prev.is_negative() {
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        prev = -prev;
    }
    (a, pivots, prev)
}

/// Rank of integer rows by fraction-free elimination.
pub(crate) fn integer_rank(rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    bareiss(rows, cols).0
}

/// Basis of `{x : A x = 0}`, one vector per free column, each scaled to a
/// primitive integer vector.
pub fn null_space(a: &Mat) -> Vec<Vec<Rat>> {
    let (rows, pivots) = rref(a);
    let n = a.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            super::rat::primitive(&v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::rat::ratio;
    use super::*;
    use proptest::prelude::*;

    /// Textbook Gauss–Jordan over the rationals, normalizing after every step.
    fn naive_rref(mut rows: Vec<Vec<Rat>>, cols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(p, r);
            let inv = rows[r][c].recip();
            for x in rows[r].iter_mut() {
                *x *= &inv;
            }
            let pr = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r {
                    let f = row[c].clone();
                    for j in 0..cols {
                        row[j] -= &f * &pr[j];
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        prop_oneof![
            3 => Just(0i64).prop_map(rat),
            5 => (-9i64..=9, 1i64..=6).prop_map(|(n, d)| ratio(n, d)),
        ]
    }

    proptest! {
        #[test]
        fn fraction_free_rref_matches_naive(
            (cols, rows) in (1usize..6).prop_flat_map(|c| {
                (Just(c), proptest::collection::vec(proptest::collection::vec(arb_rat(), c), 0..6))
            })
        ) {
            let got = rref_rows(rows.clone(), cols);
            prop_assert_eq!(got, naive_rref(rows.clone(), cols));
            let expected_rank = naive_rref(rows.clone(), cols).1.len();
            if !rows.is_empty() {
                prop_assert_eq!(rank(&Mat::from_rows(rows).unwrap()), expected_rank);
            }
        }
    }


    #[test]
    fn rank_examples() {
        let id4 = Mat::identity(4);
        assert_eq!(rank(&id4), 4);
        let ones = Mat::from_i64(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(rank(&ones), 1);
        let a = Mat::from_i64(&[&[1, 2], &[2, 4], &[0, 1]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(rank(&Mat::zeros(3, 2)), 0);
    }

    #[test]
    fn rank_with_skipped_columns() {
        // pivot columns 0 and 2; column 1 is dependent
        let a = Mat::from_i64(&[&[0, 0, 3, 1], &[2, 4, 1, 0], &[2, 4, 4, 1]]);
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn determinant() {
        let a = Mat::from_i64(&[&[2, 1], &[1, 2]]);
        assert_eq!(det(&a).unwrap(), rat(3));
        let b = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&b).unwrap(), rat(-1));
        let c = Mat::from_rows(vec![
            vec![ratio(1, 2), rat(1)],
            vec![rat(3), ratio(1, 3)],
        ])
        .unwrap();
        assert_eq!(det(&c).unwrap(), ratio(1, 6) - rat(3));
        assert!(det(&Mat::zeros(2, 3)).is_err());
        let s = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(det(&s).unwrap(), rat(0));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = Mat::from_i64(&[&[0, 2, -1, 3], &[1, 0, 4, 2], &[-2, 5, 0, 1], &[3, 1, 1, 0]]);
        assert_eq!(det(&a).unwrap(), cofactor_det(&a));
    }

    fn cofactor_det(a: &Mat) -> Rat {
        let n = a.rows();
        if n == 1 {
            return a[(0, 0)].clone();
        }
        let mut total = Rat::zero();
        for j in 0..n {
            let minor = Mat::from_rows(
                (1..n)
                    .map(|i| (0..n).filter(|&c| c != j).map(|c| a[(i, c)].clone()).collect())
                    .collect(),
            )
            .unwrap();
            let term = &a[(0, j)] * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn null_space_is_annihilated() {
        let a = Mat::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 9]]);
        let ns = null_space(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn json_round_trip() {
        let a = Mat::from_rows(vec![vec![ratio(1, 2), rat(-3)], vec![rat(0), ratio(7, 5)]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"data":[["1/2","-3"],["0","7/5"]]}"#);
        let b: Mat = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<Mat>(r#"{"rows":2,"cols":2,"data":[["1","2"]]}"#).is_err());
    }
}
