//! Dense matrices and the spectral and exact-rank routines built on them.

mod compound;
mod eigen;
mod rank;
mod subset_sums;

pub use compound::{additive_compound, additive_compound_capped, k_subsets, DEFAULT_COMPOUND_CAP};
pub use eigen::{sym_eigenvalues, sym_eigenvalues_with, EigenConfig, Spectrum};
pub use rank::{integer_rank, rank_exact, rank_mod_prime, RANK_PRIMES};
pub use subset_sums::{
    count_subset_sums_at_most, s_stat, smallest_subset_sums, subset_sums_exhaustive,
    threshold_count, SubsetSumWalk, ThresholdCount, EXHAUSTIVE_CAP,
};

use crate::error::{Error, Result};

/// Relative threshold below which an eigenvalue counts as zero.
pub const ZERO_EIGENVALUE_REL: f64 = 1e-8;

/// Dense real symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * m.n + i] = v;
        }
        m
    }

    /// Evaluates `f(i, j)` for `i <= j` and mirrors it.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rejects ragged, non-square or asymmetric input (exact comparison).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter(
                "matrix rows must form a square".into(),
            ));
        }
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        if let Some((i, j)) = pairs.into_iter().find(|&(i, j)| rows[i][j] != rows[j][i]) {
            return Err(Error::NotSymmetric(i, j));
        }
        Ok(SymmetricMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Writes both `(i, j)` and `(j, i)`.
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Rows and columns restricted to `indices`, in the given order.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "order mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        SymmetricMatrix { n: self.n, data }
    }

    /// Exact integer copy, if every entry is an integer.
    pub fn to_integer(&self) -> Option<IntegerMatrix> {
        let data = self
            .data
            .iter()
            .map(|&x| (x.fract() == 0.0 && x.abs() < 9.0e15).then_some(x as i64))
            .collect::<Option<Vec<_>>>()?;
        Some(IntegerMatrix {
            rows: self.n,
            cols: self.n,
            data,
        })
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameter("ragged integer matrix".into()));
        }
        Ok(IntegerMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Matrix product; skips zero entries of `self`, which suits boundary matrices.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(other.row(l)) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Real symmetric copy; fails unless square and exactly symmetric.
    pub fn to_symmetric(&self) -> Result<SymmetricMatrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidParameter(
                "symmetric matrix must be square".into(),
            ));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymmetricMatrix {
            n: self.rows,
            data: self.data.iter().map(|&x| x as f64).collect(),
        })
    }
}

/// `max_i (M(i,i) + Σ_{j≠i} |M(i,j)|)`, an upper bound on `λ_max(M)`.
/// Returns `-inf` for the empty matrix.
pub fn gershgorin_upper(m: &SymmetricMatrix) -> f64 {
    (0..m.order())
        .map(|i| {
            let off: f64 = (0..m.order())
                .filter(|&j| j != i)
                .map(|j| m.get(i, j).abs())
                .sum();
            m.get(i, i) + off
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gershgorin_examples() {
        assert_eq!(
            gershgorin_upper(&SymmetricMatrix::diagonal(&[1.0, 5.0])),
            5.0
        );
        let ones = SymmetricMatrix::from_fn(3, |_, _| 1.0);
        assert_eq!(gershgorin_upper(&ones), 3.0);
    }

    #[test]
    fn symmetric_construction_rejects_asymmetry() {
        let bad = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0]]);
        assert!(matches!(bad, Err(Error::NotSymmetric(0, 1))));
        let ragged = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]);
        assert!(ragged.is_err());
    }

    #[test]
    fn integer_products() {
        let a = IntegerMatrix::from_rows(&[vec![1, -1, 0], vec![0, 1, 1]]).unwrap();
        let ata = a.transpose().mul(&a);
        assert_eq!(
            ata,
            IntegerMatrix::from_rows(&[vec![1, -1, 0], vec![-1, 2, 1], vec![0, 1, 1]]).unwrap()
        );
        assert!(ata.to_symmetric().is_ok());
        assert!(a.to_symmetric().is_err());
    }
}
