//! Finite abstract simplicial complexes and the combinatorial quantities
//! attached to them: links, skeleta, face degrees, flag and neighborhood
//! complexes, the partition `σ[0..=k+1]` of near-link vertices, and
//! missing-face counts.
//!
//! Faces are stored per dimension in lexicographic order. That order is the
//! row/column index of every matrix built elsewhere in the crate.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex label. The linear order used for incidence signs is the integer order.
pub type VertexId = u32;

/// A face, stored as a strictly increasing list of vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts and deduplicates `vertices`.
    pub fn new(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|σ| - 1`; the empty simplex has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn with_vertex(&self, v: VertexId) -> Simplex {
        Simplex(with_vertex(&self.0, v))
    }

    pub fn without_vertex(&self, v: VertexId) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    /// The codimension-one faces, in the order of the removed vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.0.iter().map(move |&v| self.without_vertex(v))
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }
}

impl Borrow<[VertexId]> for Simplex {
    fn borrow(&self) -> &[VertexId] {
        &self.0
    }
}

impl From<Vec<VertexId>> for Simplex {
    fn from(v: Vec<VertexId>) -> Self {
        Simplex::new(v)
    }
}

impl<const N: usize> From<[VertexId; N]> for Simplex {
    fn from(v: [VertexId; N]) -> Self {
        Simplex::new(v.to_vec())
    }
}

/// Sorted insertion of `v` into the increasing list `face`.
pub(crate) fn with_vertex(face: &[VertexId], v: VertexId) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(face.len() + 1);
    let pos = face.partition_point(|&w| w < v);
    out.extend_from_slice(&face[..pos]);
    out.push(v);
    out.extend_from_slice(&face[pos..]);
    out
}

/// The incidence sign `(τ:σ)` where `σ = τ ∖ {removed}`: `-1` raised to the
/// number of elements of `τ` smaller than `removed`.
pub fn incidence_sign<T: Ord>(face: &[T], removed: &T) -> i64 {
    let pos = face.partition_point(|w| w < removed);
    debug_assert!(pos < face.len() && &face[pos] == removed);
    if pos % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// A finite simple graph on labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<VertexId>,
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Graph {
    /// Repeated edges collapse to one; loops and unknown endpoints are rejected.
    pub fn new(vertices: Vec<VertexId>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for &v in &vertices {
            if adjacency.insert(v, BTreeSet::new()).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
        }
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            for w in [u, v] {
                if !adjacency.contains_key(&w) {
                    return Err(Error::UnknownVertex {
                        vertex: w,
                        face: vec![u, v],
                    });
                }
            }
            adjacency.get_mut(&u).unwrap().insert(v);
            adjacency.get_mut(&v).unwrap().insert(u);
        }
        let vertices = adjacency.keys().copied().collect();
        Ok(Graph {
            vertices,
            adjacency,
        })
    }

    pub fn complete(vertices: Vec<VertexId>) -> Self {
        let edges: Vec<_> = vertices.iter().copied().tuple_combinations().collect();
        Graph::new(vertices, &edges).expect("complete graph on distinct labels")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    /// Neighbors of `v`; empty for an unknown vertex.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency
            .get(&v)
            .into_iter()
            .flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency.get(&u).is_some_and(|s| s.contains(&v))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_complete(&self) -> bool {
        let n = self.order();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }
}

/// A finite simplicial complex, closed under taking subsets, always
/// containing the empty face.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<VertexId>,
    /// `faces[d + 1]` is `X(d)`, sorted.
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.faces == other.faces
    }
}

impl Eq for SimplicialComplex {}

/// Default cap on the number of materialized faces.
pub const DEFAULT_FACE_CAP: usize = 2_000_000;

impl SimplicialComplex {
    /// Smallest complex on `vertices` containing every face in `maximal`.
    pub fn from_maximal_faces(vertices: Vec<VertexId>, maximal: Vec<Simplex>) -> Result<Self> {
        Self::from_maximal_faces_up_to(vertices, maximal, None, usize::MAX)
    }

    /// As [`from_maximal_faces`](Self::from_maximal_faces), keeping only faces
    /// of dimension at most `max_dim`. Fails once more than `face_cap` faces
    /// would be stored.
    pub fn from_maximal_faces_up_to(
        vertices: Vec<VertexId>,
        maximal: Vec<Simplex>,
        max_dim: Option<usize>,
        face_cap: usize,
    ) -> Result<Self> {
        let known = distinct_vertices(&vertices)?;
        let mut sets: Vec<HashSet<Simplex>> = vec![HashSet::new()];
        sets[0].insert(Simplex::empty());
        let mut stored = 1usize;
        let mut insert = |sets: &mut Vec<HashSet<Simplex>>, s: Simplex| -> Result<()> {
            let slot = s.len();
            if sets.len() <= slot {
                sets.resize_with(slot + 1, HashSet::new);
            }
            if sets[slot].insert(s) {
                stored += 1;
                if stored > face_cap {
                    return Err(Error::FaceBudget { cap: face_cap });
                }
            }
            Ok(())
        };
        for &v in &vertices {
            insert(&mut sets, Simplex(vec![v]))?;
        }
        for face in maximal {
            if let Some(&bad) = face.vertices().iter().find(|v| !known.contains(v)) {
                return Err(Error::UnknownVertex {
                    vertex: bad,
                    face: face.into_vec(),
                });
            }
            let top = max_dim.map_or(face.len(), |d| face.len().min(d + 1));
            for size in 2..=top {
                for sub in face.vertices().iter().copied().combinations(size) {
                    insert(&mut sets, Simplex(sub))?;
                }
            }
        }
        Ok(Self::from_sets(vertices, sets))
    }

    fn from_sets(mut vertices: Vec<VertexId>, sets: Vec<HashSet<Simplex>>) -> Self {
        vertices.sort_unstable();
        let mut faces: Vec<Vec<Simplex>> = sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<_> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        while faces.len() > 1 && faces.last().is_some_and(Vec::is_empty) {
            faces.pop();
        }
        let index = faces
            .iter()
            .map(|fs| {
                fs.iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, s)| (s, i))
                    .collect()
            })
            .collect();
        SimplicialComplex {
            vertices,
            faces,
            index,
        }
    }

    /// The full simplex on `vertices`.
    pub fn full_simplex(vertices: Vec<VertexId>) -> Result<Self> {
        let face = Simplex::new(vertices.clone());
        Self::from_maximal_faces(vertices, vec![face])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Top dimension (`-1` for the void-of-vertices complex).
    pub fn dim(&self) -> isize {
        self.faces.len() as isize - 2
    }

    /// `X(dim)` for `dim >= -1`; empty beyond the top dimension.
    pub fn faces_of_dim(&self, dim: isize) -> &[Simplex] {
        usize::try_from(dim + 1)
            .ok()
            .and_then(|slot| self.faces.get(slot))
            .map_or(&[], Vec::as_slice)
    }

    /// `X(k)` for `k >= 0`.
    pub fn faces(&self, k: usize) -> &[Simplex] {
        self.faces_of_dim(k as isize)
    }

    /// `f_k(X)`.
    pub fn f(&self, k: usize) -> usize {
        self.faces(k).len()
    }

    /// Face counts `(f_{-1}, f_0, ..., f_dim)`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn iter_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    pub fn contains(&self, face: &[VertexId]) -> bool {
        self.index_of(face).is_some()
    }

    /// Position of `face` within `X(dim face)`.
    pub fn index_of(&self, face: &[VertexId]) -> Option<usize> {
        self.index.get(face.len())?.get(face).copied()
    }

    /// `u ∈ lk_X(τ)`: `u ∉ τ` and `τ ∪ {u} ∈ X`.
    pub fn in_link(&self, tau: &[VertexId], u: VertexId) -> bool {
        tau.binary_search(&u).is_err() && self.contains(&with_vertex(tau, u))
    }

    /// `deg_X(σ)`: the number of `(k+1)`-faces containing the `k`-face `σ`.
    pub fn degree(&self, sigma: &[VertexId]) -> usize {
        self.vertices
            .iter()
            .filter(|&&u| self.in_link(sigma, u))
            .count()
    }

    /// Faces not strictly contained in another face. The empty face is
    /// reported only when the complex has no vertices.
    pub fn maximal_faces(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (slot, fs) in self.faces.iter().enumerate() {
            for face in fs {
                if slot == 0 && !self.vertices.is_empty() {
                    continue;
                }
                if !self
                    .vertices
                    .iter()
                    .any(|&u| self.in_link(face.vertices(), u))
                {
                    out.push(face.clone());
                }
            }
        }
        out
    }

    /// `lk_X(σ) = {τ ∈ X : σ ∪ τ ∈ X, σ ∩ τ = ∅}`, as a complex on the
    /// vertices that occur in it.
    pub fn link(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        if !self.contains(sigma.vertices()) {
            return Err(Error::NotAFace(sigma.vertices().to_vec()));
        }
        let mut sets: Vec<HashSet<Simplex>> = Vec::new();
        for fs in self.faces.iter().skip(sigma.len()) {
            for eta in fs.iter().filter(|eta| sigma.is_subset_of(eta)) {
                let tau = Simplex(
                    eta.vertices()
                        .iter()
                        .copied()
                        .filter(|&v| !sigma.contains(v))
                        .collect(),
                );
                if sets.len() <= tau.len() {
                    sets.resize_with(tau.len() + 1, HashSet::new);
                }
                sets[tau.len()].insert(tau);
            }
        }
        let vertices = sets
            .get(1)
            .map(|s| s.iter().map(|f| f.vertices()[0]).collect())
            .unwrap_or_default();
        Ok(Self::from_sets(vertices, sets))
    }

    /// Faces of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let faces: Vec<_> = self.faces.iter().take(k + 2).cloned().collect();
        let index = self.index.iter().take(k + 2).cloned().collect();
        let mut out = SimplicialComplex {
            vertices: self.vertices.clone(),
            faces,
            index,
        };
        while out.faces.len() > 1 && out.faces.last().is_some_and(Vec::is_empty) {
            out.faces.pop();
            out.index.pop();
        }
        out
    }

    /// `G_X`: vertices of `X` with edge set `X(1)`.
    pub fn underlying_graph(&self) -> Graph {
        let edges: Vec<_> = self.faces(1).iter().map(|e| (e.0[0], e.0[1])).collect();
        Graph::new(self.vertices.clone(), &edges).expect("1-faces are valid edges")
    }

    /// Checks that every face of `self` is a face of `ambient`.
    pub fn check_subcomplex_of(&self, ambient: &SimplicialComplex) -> Result<()> {
        match self.iter_faces().find(|f| !ambient.contains(f.vertices())) {
            Some(f) => Err(Error::NotSubcomplex(f.vertices().to_vec())),
            None => Ok(()),
        }
    }

    /// Checks downward closure, the singleton axiom, and the index order.
    pub fn check_invariants(&self) -> Result<()> {
        for &v in &self.vertices {
            if !self.contains(&[v]) {
                return Err(Error::IdentityViolated(format!("singleton {v} missing")));
            }
        }
        if self.faces_of_dim(-1) != [Simplex::empty()] {
            return Err(Error::IdentityViolated("X(-1) must be {∅}".into()));
        }
        for (slot, fs) in self.faces.iter().enumerate() {
            if !fs.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::IdentityViolated(format!(
                    "X({}) not sorted",
                    slot as isize - 1
                )));
            }
            for face in fs {
                if face.len() != slot {
                    return Err(Error::IdentityViolated(format!("{face:?} in wrong slot")));
                }
                if let Some(f) = face.facets().find(|f| !self.contains(f.vertices())) {
                    return Err(Error::IdentityViolated(format!(
                        "{face:?} lacks facet {f:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The complex written as its maximal faces, in the on-disk layout.
    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            vertices: self.vertices.clone(),
            maximal_faces: self
                .maximal_faces()
                .into_iter()
                .filter(|f| !f.is_empty())
                .map(Simplex::into_vec)
                .collect(),
        }
    }
}

fn distinct_vertices(vertices: &[VertexId]) -> Result<HashSet<VertexId>> {
    let mut seen = HashSet::with_capacity(vertices.len());
    for &v in vertices {
        if !seen.insert(v) {
            return Err(Error::DuplicateVertex(v));
        }
    }
    Ok(seen)
}

/// On-disk complex layout: `{"vertices": [...], "maximal_faces": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub vertices: Vec<VertexId>,
    pub maximal_faces: Vec<Vec<VertexId>>,
}

impl ComplexFile {
    pub fn into_complex(self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_maximal_faces(
            self.vertices,
            self.maximal_faces.into_iter().map(Simplex::new).collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain integer arrays serialize")
    }
}

/// Clique complex of `g`.
pub fn flag_complex(g: &Graph) -> SimplicialComplex {
    flag_complex_up_to(g, None)
}

/// Cliques of `g` with at most `max_dim + 1` vertices, enumerated by
/// extending each clique only with larger vertices.
pub fn flag_complex_up_to(g: &Graph, max_dim: Option<usize>) -> SimplicialComplex {
    let max_size = max_dim.map_or(usize::MAX, |d| d + 1);
    let mut sets: Vec<HashSet<Simplex>> = vec![HashSet::from([Simplex::empty()])];
    fn extend(
        g: &Graph,
        clique: &mut Vec<VertexId>,
        candidates: &[VertexId],
        max_size: usize,
        sets: &mut Vec<HashSet<Simplex>>,
    ) {
        if sets.len() <= clique.len() {
            sets.resize_with(clique.len() + 1, HashSet::new);
        }
        sets[clique.len()].insert(Simplex(clique.clone()));
        if clique.len() == max_size {
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let next: Vec<VertexId> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| g.has_edge(v, w))
                .collect();
            clique.push(v);
            extend(g, clique, &next, max_size, sets);
            clique.pop();
        }
    }
    let mut clique = Vec::new();
    for (i, &v) in g.vertices().iter().enumerate() {
        let candidates: Vec<VertexId> = g.vertices()[i + 1..]
            .iter()
            .copied()
            .filter(|&w| g.has_edge(v, w))
            .collect();
        clique.push(v);
        extend(g, &mut clique, &candidates, max_size, &mut sets);
        clique.pop();
    }
    SimplicialComplex::from_sets(g.vertices().to_vec(), sets)
}

/// `N[G]`: subsets of `V(G)` with a common neighbor. Its vertex set is the
/// set of vertices lying in some neighborhood.
pub fn neighborhood_complex(g: &Graph) -> SimplicialComplex {
    neighborhood_complex_up_to(g, None, usize::MAX).expect("uncapped construction")
}

/// `N[G]` materialized up to dimension `max_dim`.
pub fn neighborhood_complex_up_to(
    g: &Graph,
    max_dim: Option<usize>,
    face_cap: usize,
) -> Result<SimplicialComplex> {
    let mut vertices = BTreeSet::new();
    let mut maximal = Vec::new();
    for &v in g.vertices() {
        let nb: Vec<VertexId> = g.neighbors(v).collect();
        if !nb.is_empty() {
            vertices.extend(nb.iter().copied());
            maximal.push(Simplex(nb));
        }
    }
    maximal.sort_unstable();
    maximal.dedup();
    SimplicialComplex::from_maximal_faces_up_to(
        vertices.into_iter().collect(),
        maximal,
        max_dim,
        face_cap,
    )
}

/// `|σ[0]|, ..., |σ[k+1]|` for a `k`-face `σ`, with the vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPartition {
    pub sigma: Simplex,
    pub counts: Vec<usize>,
    pub witnesses: Vec<Vec<VertexId>>,
}

impl SigmaPartition {
    /// `Σ_j |σ[j]|`.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `Σ_j (j+1) |σ[j]|`.
    pub fn weighted(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .map(|(j, c)| (j + 1) * c)
            .sum()
    }

    /// `Σ_j j |σ[j]|`.
    pub fn j_weighted(&self) -> usize {
        self.counts.iter().enumerate().map(|(j, c)| j * c).sum()
    }
}

/// `|{w ∈ σ : u ∈ lk_X(σ ∖ {w})}|`.
fn facet_link_hits(x: &SimplicialComplex, sigma: &[VertexId], u: VertexId) -> usize {
    sigma
        .iter()
        .filter(|&&w| {
            let rest: Vec<VertexId> = sigma.iter().copied().filter(|&v| v != w).collect();
            x.in_link(&rest, u)
        })
        .count()
}

/// Evaluates all three membership clauses for every `u ∈ V ∖ σ`. The
/// "adjacent to every vertex of σ" clause is applied literally for every `j`.
pub fn sigma_partition(x: &SimplicialComplex, sigma: &Simplex) -> Result<SigmaPartition> {
    if sigma.is_empty() || !x.contains(sigma.vertices()) {
        return Err(Error::NotAFace(sigma.vertices().to_vec()));
    }
    let s = sigma.vertices();
    let mut witnesses = vec![Vec::new(); s.len() + 1];
    for &u in x.vertices() {
        if sigma.contains(u) || x.in_link(s, u) {
            continue;
        }
        if !s.iter().all(|&v| x.in_link(&[v], u)) {
            continue;
        }
        witnesses[facet_link_hits(x, s, u)].push(u);
    }
    let counts = witnesses.iter().map(Vec::len).collect();
    Ok(SigmaPartition {
        sigma: sigma.clone(),
        counts,
        witnesses,
    })
}

/// `Δ(k) = max_{σ ∈ X(k)} Σ_j (j+1) |σ[j]|`.
pub fn max_weighted_sigma_defect(x: &SimplicialComplex, k: usize) -> Result<usize> {
    let faces = x.faces(k);
    if faces.is_empty() {
        return Err(Error::NoFaces(k));
    }
    faces
        .iter()
        .map(|s| sigma_partition(x, s).map(|p| p.weighted()))
        .try_fold(0, |m, w| w.map(|w| m.max(w)))
}

/// `D_k(X, j)`: the largest number of `u ∈ V ∖ σ` with `u ∉ lk(σ)` and exactly
/// `j` of the facets `σ ∖ {w}` having `u` in their link, over `σ ∈ X(k)`.
/// Zero when `X(k)` is empty.
pub fn dk_parameter(x: &SimplicialComplex, k: usize, j: usize) -> Result<usize> {
    if k < 1 || j < 1 || j > k + 1 {
        return Err(Error::InvalidParameter(format!(
            "D_k(X, j) needs k >= 1 and 1 <= j <= k+1, got k={k}, j={j}"
        )));
    }
    Ok(x.faces(k)
        .iter()
        .map(|sigma| {
            let s = sigma.vertices();
            x.vertices()
                .iter()
                .filter(|&&u| !sigma.contains(u) && !x.in_link(s, u))
                .filter(|&&u| facet_link_hits(x, s, u) == j)
                .count()
        })
        .max()
        .unwrap_or(0))
}

/// `|C(V, k+1) ∖ X(k)|` for the vertex universe `V`.
pub fn missing_face_count(x: &SimplicialComplex, universe: &[VertexId], k: usize) -> u64 {
    let total = binomial(universe.len(), k + 1);
    let universe: HashSet<VertexId> = universe.iter().copied().collect();
    let present = if x.vertices().iter().all(|v| universe.contains(v)) {
        x.f(k)
    } else {
        x.faces(k)
            .iter()
            .filter(|f| f.vertices().iter().all(|v| universe.contains(v)))
            .count()
    };
    total - present as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(vertices: &[VertexId], maximal: &[&[VertexId]]) -> SimplicialComplex {
        SimplicialComplex::from_maximal_faces(
            vertices.to_vec(),
            maximal.iter().map(|f| Simplex::new(f.to_vec())).collect(),
        )
        .unwrap()
    }

    fn faces_of(x: &SimplicialComplex) -> Vec<Vec<VertexId>> {
        x.iter_faces().map(|f| f.vertices().to_vec()).collect()
    }

    fn triangle_boundary() -> SimplicialComplex {
        cx(&[1, 2, 3], &[&[1, 2], &[1, 3], &[2, 3]])
    }

    #[test]
    fn closure_of_full_simplex() {
        let x = cx(&[1, 2, 3], &[&[1, 2, 3]]);
        assert_eq!(
            faces_of(&x),
            vec![
                vec![],
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
        assert_eq!(triangle_boundary().f_vector(), vec![1, 3, 3]);
        let isolated = cx(&[1, 2, 3, 4], &[]);
        assert_eq!(isolated.f_vector(), vec![1, 4]);
        assert_eq!(isolated.f(1), 0);
        x.check_invariants().unwrap();
    }

    #[test]
    fn construction_errors() {
        let dup = SimplicialComplex::from_maximal_faces(vec![1, 1], vec![]);
        assert!(matches!(dup, Err(Error::DuplicateVertex(1))));
        let unknown =
            SimplicialComplex::from_maximal_faces(vec![1, 2], vec![Simplex::from([1, 5])]);
        assert!(matches!(
            unknown,
            Err(Error::UnknownVertex { vertex: 5, .. })
        ));
        let capped = SimplicialComplex::from_maximal_faces_up_to(
            (0..10).collect(),
            vec![Simplex::new((0..10).collect())],
            None,
            100,
        );
        assert!(matches!(capped, Err(Error::FaceBudget { cap: 100 })));
    }

    #[test]
    fn links() {
        let full = cx(&[1, 2, 3], &[&[1, 2, 3]]);
        let lk = full.link(&Simplex::from([1])).unwrap();
        assert_eq!(faces_of(&lk), vec![vec![], vec![2], vec![3], vec![2, 3]]);

        let tb = triangle_boundary();
        let lk = tb.link(&Simplex::from([1, 2])).unwrap();
        assert_eq!(faces_of(&lk), vec![Vec::<VertexId>::new()]);
        let lk = tb.link(&Simplex::from([3])).unwrap();
        assert_eq!(faces_of(&lk), vec![vec![], vec![1], vec![2]]);

        assert!(matches!(
            tb.link(&Simplex::from([1, 2, 3])),
            Err(Error::NotAFace(_))
        ));
    }

    #[test]
    fn skeleta_and_graphs() {
        let full = cx(&[1, 2, 3], &[&[1, 2, 3]]);
        assert_eq!(full.skeleton(1), triangle_boundary());
        assert_eq!(
            triangle_boundary().underlying_graph(),
            Graph::complete(vec![1, 2, 3])
        );
        assert_eq!(full.skeleton(0).f_vector(), vec![1, 3]);
    }

    #[test]
    fn flag_complexes() {
        let k3 = Graph::complete(vec![1, 2, 3]);
        assert_eq!(flag_complex(&k3), cx(&[1, 2, 3], &[&[1, 2, 3]]));

        let path = Graph::new(vec![1, 2, 3], &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(
            faces_of(&flag_complex(&path)),
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![2, 3]]
        );

        let k4_minus =
            Graph::new(vec![1, 2, 3, 4], &[(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        let maximal: Vec<_> = flag_complex(&k4_minus)
            .maximal_faces()
            .into_iter()
            .map(Simplex::into_vec)
            .collect();
        assert_eq!(maximal, vec![vec![1, 3, 4], vec![2, 3, 4]]);
    }

    #[test]
    fn neighborhood_complexes() {
        assert_eq!(
            neighborhood_complex(&Graph::complete(vec![1, 2, 3])),
            triangle_boundary()
        );

        let c4 = Graph::new(vec![1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let maximal: Vec<_> = neighborhood_complex(&c4)
            .maximal_faces()
            .into_iter()
            .map(Simplex::into_vec)
            .collect();
        assert_eq!(maximal, vec![vec![1, 3], vec![2, 4]]);

        let star = Graph::new(vec![0, 1, 2, 3], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let maximal: Vec<_> = neighborhood_complex(&star)
            .maximal_faces()
            .into_iter()
            .map(Simplex::into_vec)
            .collect();
        assert_eq!(maximal, vec![vec![0], vec![1, 2, 3]]);

        let lonely = Graph::new(vec![0, 1, 2], &[(0, 1)]).unwrap();
        assert_eq!(neighborhood_complex(&lonely).vertices(), &[0, 1]);
    }

    #[test]
    fn sigma_partitions() {
        let tb = triangle_boundary();
        let p = sigma_partition(&tb, &Simplex::from([1, 2])).unwrap();
        assert_eq!(p.counts, vec![0, 0, 1]);
        assert_eq!(p.witnesses[2], vec![3]);

        let p0 = sigma_partition(&tb, &Simplex::from([2])).unwrap();
        assert_eq!(p0.counts, vec![0, 0]);

        let flag =
            flag_complex(&Graph::new(vec![0, 1, 2, 3], &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap());
        for sigma in flag.iter_faces().skip(1) {
            assert_eq!(sigma_partition(&flag, sigma).unwrap().total(), 0);
        }
        assert!(sigma_partition(&tb, &Simplex::from([1, 2, 3])).is_err());
    }

    #[test]
    fn weighted_defects_and_dk() {
        let tb = triangle_boundary();
        assert_eq!(max_weighted_sigma_defect(&tb, 1).unwrap(), 3);
        assert!(matches!(
            max_weighted_sigma_defect(&tb, 2),
            Err(Error::NoFaces(2))
        ));
        let full = cx(&[1, 2, 3], &[&[1, 2, 3]]);
        assert_eq!(max_weighted_sigma_defect(&full, 1).unwrap(), 0);

        assert_eq!(dk_parameter(&tb, 1, 2).unwrap(), 1);
        assert_eq!(dk_parameter(&tb, 1, 1).unwrap(), 0);
        let two = cx(&[1, 2, 3, 4, 5, 6], &[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(dk_parameter(&two, 1, 1).unwrap(), 0);
        assert!(dk_parameter(&tb, 0, 1).is_err());
        assert!(dk_parameter(&tb, 1, 0).is_err());
    }

    #[test]
    fn missing_faces() {
        let tb = triangle_boundary();
        assert_eq!(missing_face_count(&tb, &[1, 2, 3], 2), 1);
        let full = SimplicialComplex::full_simplex((0..5).collect()).unwrap();
        for k in 0..5 {
            assert_eq!(missing_face_count(&full, &[0, 1, 2, 3, 4], k), 0);
        }
        let c4 = Graph::new(vec![1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert_eq!(
            missing_face_count(&neighborhood_complex(&c4), &[1, 2, 3, 4], 1),
            4
        );
        // Universe smaller than the complex: only faces inside the universe count.
        assert_eq!(missing_face_count(&full, &[0, 1, 2], 1), 0);
    }

    #[test]
    fn incidence_signs() {
        assert_eq!(incidence_sign(&[1, 2], &1), 1);
        assert_eq!(incidence_sign(&[1, 2], &2), -1);
        assert_eq!(incidence_sign(&[1, 2, 3], &3), 1);
        assert_eq!(binomial(45, 2), 990);
        assert_eq!(binomial(3, 4), 0);
    }
}
