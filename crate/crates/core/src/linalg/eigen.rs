use nalgebra::DMatrix;
use serde::Serialize;

use super::SymmetricMatrix;
use crate::error::{Error, Result};

/// Ascending eigenvalues with a certified residual
/// `max_i ‖M v_i − λ_i v_i‖ / ‖M‖_F`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `λ_i`, 1-based.
    pub fn lambda(&self, i: usize) -> f64 {
        self.eigenvalues[i - 1]
    }

    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    /// Number of eigenvalues with `|λ| < threshold`.
    pub fn count_near_zero(&self, threshold: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|l| l.abs() < threshold)
            .count()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EigenConfig {
    /// Accepted residual relative to `‖M‖_F`.
    pub tol: f64,
    /// Largest order handed to the dense solver.
    pub max_order: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            tol: 1e-10,
            max_order: 4000,
        }
    }
}

pub fn sym_eigenvalues(m: &SymmetricMatrix, tol: f64) -> Result<Spectrum> {
    sym_eigenvalues_with(
        m,
        &EigenConfig {
            tol,
            ..EigenConfig::default()
        },
    )
}

/// Dense symmetric eigensolve (Householder tridiagonalization + implicit QR).
/// The residual is measured from the computed eigenvectors, which are then
/// discarded.
pub fn sym_eigenvalues_with(m: &SymmetricMatrix, cfg: &EigenConfig) -> Result<Spectrum> {
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            cfg.tol
        )));
    }
    let n = m.order();
    if n > cfg.max_order {
        return Err(Error::TooLarge {
            order: n,
            cap: cfg.max_order,
        });
    }
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            residual: 0.0,
        });
    }
    let dense = DMatrix::from_row_slice(n, n, m.as_slice());
    let eig = dense
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::NotConverged {
            residual: f64::INFINITY,
            tol: cfg.tol,
        })?;
    let norm = m.frobenius_norm();
    let residual = if norm == 0.0 {
        0.0
    } else {
        (0..n)
            .map(|i| {
                let v = eig.eigenvectors.column(i);
                (&dense * v - v * eig.eigenvalues[i]).norm()
            })
            .fold(0.0, f64::max)
            / norm
    };
    if residual > cfg.tol {
        return Err(Error::NotConverged {
            residual,
            tol: cfg.tol,
        });
    }
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum {
        eigenvalues,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn scalar_matrix() {
        let s = sym_eigenvalues(&SymmetricMatrix::diagonal(&[3.0; 3]), 1e-10).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 3.0, 3.0]);
    }

    #[test]
    fn laplacian_of_k3() {
        // det(L - x) = -x (x - 3)^2.
        let l = SymmetricMatrix::from_fn(3, |i, j| if i == j { 2.0 } else { -1.0 });
        let s = sym_eigenvalues(&l, 1e-10).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 3.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        assert!(s.residual <= 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        let nan = SymmetricMatrix::diagonal(&[f64::NAN, 1.0]);
        assert!(matches!(
            sym_eigenvalues(&nan, 1e-10),
            Err(Error::NonFinite)
        ));
        let big = SymmetricMatrix::zeros(5);
        let cfg = EigenConfig {
            tol: 1e-10,
            max_order: 4,
        };
        assert!(matches!(
            sym_eigenvalues_with(&big, &cfg),
            Err(Error::TooLarge { order: 5, cap: 4 })
        ));
        assert!(sym_eigenvalues(&big, 0.0).is_err());
        assert!(sym_eigenvalues(&SymmetricMatrix::zeros(0), 1e-10)
            .unwrap()
            .is_empty());
    }
}
