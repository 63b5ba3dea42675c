use std::collections::HashMap;

use itertools::Itertools;

use super::SymmetricMatrix;
use crate::complex::{binomial, incidence_sign};
use crate::error::{Error, Result};

pub const DEFAULT_COMPOUND_CAP: usize = 4000;

/// The `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

pub fn additive_compound(m: &SymmetricMatrix, k: usize) -> Result<SymmetricMatrix> {
    additive_compound_capped(m, k, DEFAULT_COMPOUND_CAP)
}

/// `M^{[k]}`, indexed by the lexicographically sorted `k`-subsets of `0..n`:
/// the diagonal holds `Σ_{i∈σ} M(i,i)`, and for `σ ∖ τ = {i}`, `τ ∖ σ = {j}`
/// the entry is `(σ:σ∩τ)(τ:σ∩τ) M(i,j)`.
pub fn additive_compound_capped(
    m: &SymmetricMatrix,
    k: usize,
    cap: usize,
) -> Result<SymmetricMatrix> {
    let n = m.order();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!(
            "compound order {k} outside 1..={n}"
        )));
    }
    let size = binomial(n, k);
    if size > cap as u64 {
        return Err(Error::TooLarge {
            order: size as usize,
            cap,
        });
    }
    let subsets = k_subsets(n, k);
    let index: HashMap<&[usize], usize> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let mut out = SymmetricMatrix::zeros(subsets.len());
    for (a, sigma) in subsets.iter().enumerate() {
        out.set(a, a, sigma.iter().map(|&i| m.get(i, i)).sum());
        for &i in sigma {
            let sign_sigma = incidence_sign(sigma, &i);
            let rest: Vec<usize> = sigma.iter().copied().filter(|&v| v != i).collect();
            for j in (0..n).filter(|j| !sigma.contains(j)) {
                let mut tau = rest.clone();
                tau.insert(tau.partition_point(|&v| v < j), j);
                let b = index[tau.as_slice()];
                if b > a {
                    let sign = sign_sigma * incidence_sign(&tau, &j);
                    out.set(a, b, sign as f64 * m.get(i, j));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compound_of_diagonal_is_subset_sums() {
        let c = additive_compound(&SymmetricMatrix::diagonal(&[1.0, 2.0, 3.0]), 2).unwrap();
        assert_eq!(c, SymmetricMatrix::diagonal(&[3.0, 4.0, 5.0]));
    }

    #[test]
    fn first_compound_is_identity_map() {
        let m = SymmetricMatrix::from_fn(4, |i, j| (i * 7 + j * 3) as f64 - 4.5);
        assert_eq!(additive_compound(&m, 1).unwrap(), m);
    }

    #[test]
    fn full_compound_is_trace() {
        let m = SymmetricMatrix::from_fn(3, |i, j| if i == j { i as f64 + 1.0 } else { 0.5 });
        let c = additive_compound(&m, 3).unwrap();
        assert_eq!(c.order(), 1);
        assert_eq!(c.get(0, 0), 6.0);
    }

    #[test]
    fn caps_and_ranges() {
        let m = SymmetricMatrix::identity(10);
        assert!(matches!(
            additive_compound_capped(&m, 5, 100),
            Err(Error::TooLarge {
                order: 252,
                cap: 100
            })
        ));
        assert!(additive_compound(&m, 0).is_err());
        assert!(additive_compound(&m, 11).is_err());
    }
}
