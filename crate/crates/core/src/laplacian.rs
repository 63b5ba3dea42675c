//! Signed boundary matrices, combinatorial Laplacians (built from boundaries
//! and, independently, from face adjacency), graph Laplacians, the `Q − P`
//! split of `L_k`, and reduced real Betti numbers.

use serde::Serialize;

use crate::complex::{incidence_sign, with_vertex, Graph, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::linalg::{
    integer_rank, sym_eigenvalues, IntegerMatrix, SymmetricMatrix, ZERO_EIGENVALUE_REL,
};

/// `∂_k(X)`, rows indexed by `X(k-1)` and columns by `X(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub k: usize,
    pub matrix: IntegerMatrix,
}

pub fn boundary_matrix(x: &SimplicialComplex, k: usize) -> BoundaryMatrix {
    let rows = x.faces_of_dim(k as isize - 1);
    let cols = x.faces(k);
    let mut matrix = IntegerMatrix::zeros(rows.len(), cols.len());
    for (c, tau) in cols.iter().enumerate() {
        for &v in tau.vertices() {
            let facet = tau.without_vertex(v);
            let r = x
                .index_of(facet.vertices())
                .expect("complex is downward closed");
            matrix.set(r, c, incidence_sign(tau.vertices(), &v));
        }
    }
    BoundaryMatrix { k, matrix }
}

/// `∂_{k+1} ∂_{k+1}^T + ∂_k^T ∂_k` as an exact integer matrix.
pub fn laplacian_integer(x: &SimplicialComplex, k: usize) -> IntegerMatrix {
    let down = boundary_matrix(x, k).matrix;
    let up = boundary_matrix(x, k + 1).matrix;
    up.mul(&up.transpose()).add(&down.transpose().mul(&down))
}

pub fn laplacian_from_boundaries(x: &SimplicialComplex, k: usize) -> SymmetricMatrix {
    laplacian_integer(x, k)
        .to_symmetric()
        .expect("Gram sums are symmetric")
}

/// A pair of `k`-faces sharing `k` vertices: `τ = σ ∖ {w} ∪ {u}`.
struct LowerPair {
    col: usize,
    removed: VertexId,
    added: VertexId,
    /// `(σ:σ∩τ)(τ:σ∩τ)`.
    sign: i64,
}

fn lower_pairs(x: &SimplicialComplex, sigma: &[VertexId]) -> Vec<LowerPair> {
    let mut out = Vec::new();
    for &w in sigma {
        let rest: Vec<VertexId> = sigma.iter().copied().filter(|&v| v != w).collect();
        for &u in x.vertices() {
            if u == w || sigma.binary_search(&u).is_ok() {
                continue;
            }
            let tau = with_vertex(&rest, u);
            if let Some(col) = x.index_of(&tau) {
                let sign = incidence_sign(sigma, &w) * incidence_sign(&tau, &u);
                out.push(LowerPair {
                    col,
                    removed: w,
                    added: u,
                    sign,
                });
            }
        }
    }
    out
}

/// `L_k` from face adjacency alone: `deg_X(σ) + k + 1` on the diagonal and
/// `(σ:σ∩τ)(τ:σ∩τ)` when `|σ ∩ τ| = k` and `σ ∪ τ ∉ X`.
pub fn laplacian_explicit(x: &SimplicialComplex, k: usize) -> SymmetricMatrix {
    let faces = x.faces(k);
    let mut m = SymmetricMatrix::zeros(faces.len());
    for (a, sigma) in faces.iter().enumerate() {
        let s = sigma.vertices();
        m.set(a, a, (x.degree(s) + k + 1) as f64);
        for pair in lower_pairs(x, s) {
            if !x.in_link(s, pair.added) {
                m.set(a, pair.col, pair.sign as f64);
            }
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianSource {
    Boundaries,
    Explicit,
}

/// `L_k = Q − P` with both parts.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianBundle {
    pub k: usize,
    pub laplacian: SymmetricMatrix,
    pub p: SymmetricMatrix,
    pub q: SymmetricMatrix,
    pub built_from: LaplacianSource,
}

/// Splits `L_k` by whether the symmetric difference of two lower-adjacent,
/// non-upper-adjacent faces is an edge (`P`) or not (`Q`). Fails only if
/// `Q − P` differs from `L_k`.
pub fn pq_decomposition(
    x: &SimplicialComplex,
    k: usize,
    source: LaplacianSource,
) -> Result<LaplacianBundle> {
    let faces = x.faces(k);
    let graph_degree: std::collections::HashMap<VertexId, usize> =
        x.vertices().iter().map(|&v| (v, x.degree(&[v]))).collect();
    let mut p = SymmetricMatrix::zeros(faces.len());
    let mut q = SymmetricMatrix::zeros(faces.len());
    for (a, sigma) in faces.iter().enumerate() {
        let s = sigma.vertices();
        let deg_sum: usize = s.iter().map(|v| graph_degree[v]).sum();
        p.set(a, a, deg_sum as f64 - x.degree(s) as f64);
        q.set(a, a, (deg_sum + k + 1) as f64);
        for pair in lower_pairs(x, s) {
            if x.in_link(s, pair.added) {
                continue;
            }
            let mut diff = [pair.removed, pair.added];
            diff.sort_unstable();
            if x.contains(&diff) {
                p.set(a, pair.col, -pair.sign as f64);
            } else {
                q.set(a, pair.col, pair.sign as f64);
            }
        }
    }
    let laplacian = match source {
        LaplacianSource::Boundaries => laplacian_from_boundaries(x, k),
        LaplacianSource::Explicit => laplacian_explicit(x, k),
    };
    if q.sub(&p) != laplacian {
        return Err(Error::IdentityViolated(format!("Q - P != L_{k}")));
    }
    Ok(LaplacianBundle {
        k,
        laplacian,
        p,
        q,
        built_from: source,
    })
}

/// `L(G)`, indexed by `G`'s vertex order.
pub fn graph_laplacian(g: &Graph) -> SymmetricMatrix {
    let v = g.vertices();
    SymmetricMatrix::from_fn(v.len(), |i, j| {
        if i == j {
            g.degree(v[i]) as f64
        } else if g.has_edge(v[i], v[j]) {
            -1.0
        } else {
            0.0
        }
    })
}

/// `L(G) + J`: `deg + 1` on the diagonal, `1` on non-edges, `0` on edges.
pub fn graph_laplacian_plus_j(g: &Graph) -> SymmetricMatrix {
    let v = g.vertices();
    SymmetricMatrix::from_fn(v.len(), |i, j| {
        if i == j {
            g.degree(v[i]) as f64 + 1.0
        } else if g.has_edge(v[i], v[j]) {
            0.0
        } else {
            1.0
        }
    })
}

/// `b̃_0..=b̃_kmax` from boundary ranks alone.
pub fn betti_from_boundaries(x: &SimplicialComplex, kmax: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=kmax + 1)
        .map(|k| integer_rank(&boundary_matrix(x, k).matrix))
        .collect();
    (0..=kmax)
        .map(|k| x.f(k) - ranks[k] - ranks[k + 1])
        .collect()
}

/// `dim ker L_k` by exact rank of the integer Laplacian.
pub fn laplacian_nullity(x: &SimplicialComplex, k: usize) -> usize {
    x.f(k) - integer_rank(&laplacian_integer(x, k))
}

/// Number of eigenvalues of `L_k` below `1e-8 ‖L_k‖_F`.
pub fn spectral_nullity(x: &SimplicialComplex, k: usize) -> Result<usize> {
    let l = laplacian_from_boundaries(x, k);
    let spec = sym_eigenvalues(&l, 1e-10)?;
    Ok(spec.count_near_zero(ZERO_EIGENVALUE_REL * l.frobenius_norm()))
}

/// Reduced real Betti numbers `b̃_0..=b̃_kmax`, each checked against the
/// exact nullity of `L_k`.
pub fn betti_numbers(x: &SimplicialComplex, kmax: usize) -> Result<Vec<usize>> {
    let betti = betti_from_boundaries(x, kmax);
    for (k, &b) in betti.iter().enumerate() {
        let nullity = laplacian_nullity(x, k);
        if nullity != b {
            return Err(Error::IdentityViolated(format!(
                "b̃_{k} = {b} from boundary ranks but dim ker L_{k} = {nullity}"
            )));
        }
    }
    Ok(betti)
}
