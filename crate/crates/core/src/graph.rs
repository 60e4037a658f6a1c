//! Weighted plumbing trees and their intersection forms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0}-{1} closes a cycle")]
    CycleDetected(VertexId, VertexId),
    #[error("edge {0}-{1} appears more than once")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex id {0} is out of range or repeated")]
    BadId(i64),
    #[error("graph has {0} connected components")]
    Disconnected(usize),
    #[error("blowing down vertex {0} would create a loop or multi-edge")]
    CycleCreated(VertexId),
}

/// A weighted forest. Vertex ids are dense, `0..len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlumbingGraph {
    name: Option<String>,
    weights: Vec<i64>,
    adjacency: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
}

impl PlumbingGraph {
    /// Builds a graph from vertex weights (vertex `i` has weight `weights[i]`)
    /// and undirected edges. Rejects loops, repeated edges and cycles.
    pub fn new(weights: Vec<i64>, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let n = weights.len();
        let mut uf = UnionFind::new(n);
        let mut seen = BTreeSet::new();
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(GraphError::BadId(id as i64));
                }
            }
            if u == v {
                return Err(GraphError::CycleDetected(u, v));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            if !uf.union(u, v) {
                return Err(GraphError::CycleDetected(e.0, e.1));
            }
            canon.push(e);
        }
        canon.sort_unstable();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        Ok(PlumbingGraph {
            name: None,
            weights,
            adjacency,
            edges: canon,
        })
    }

    /// Like [`PlumbingGraph::new`], but vertices carry arbitrary distinct ids
    /// which are renumbered densely in increasing order.
    pub fn from_labeled(vertices: &[(i64, i64)], edges: &[(i64, i64)]) -> Result<Self, GraphError> {
        let mut ids: Vec<(i64, i64)> = vertices.to_vec();
        ids.sort_unstable_by_key(|&(id, _)| id);
        for w in ids.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GraphError::BadId(w[0].0));
            }
        }
        let index = |id: i64| -> Result<VertexId, GraphError> {
            ids.binary_search_by_key(&id, |&(i, _)| i)
                .map_err(|_| GraphError::BadId(id))
        };
        let dense = edges
            .iter()
            .map(|&(u, v)| Ok((index(u)?, index(v)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        PlumbingGraph::new(ids.iter().map(|&(_, w)| w).collect(), &dense)
    }

    /// The empty graph, whose boundary is `S^3`.
    pub fn empty() -> Self {
        PlumbingGraph {
            name: None,
            weights: Vec::new(),
            adjacency: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// A star: a center of weight `center` and one path per entry of `rays`,
    /// listed from the vertex adjacent to the center outward. Vertex 0 is the
    /// center; ray vertices follow in order.
    pub fn star(center: i64, rays: &[Vec<i64>]) -> Self {
        let mut weights = vec![center];
        let mut edges = Vec::new();
        for ray in rays {
            let mut prev = 0;
            for &w in ray {
                let id = weights.len();
                weights.push(w);
                edges.push((prev, id));
                prev = id;
            }
        }
        PlumbingGraph::new(weights, &edges).expect("a star is a tree")
    }

    /// A path with the given weights in order.
    pub fn path(weights: &[i64]) -> Self {
        let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i)).collect();
        PlumbingGraph::new(weights.to_vec(), &edges).expect("a path is a tree")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, v: VertexId) -> i64 {
        self.weights[v]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.len());
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        (0..self.len()).filter(|&v| uf.find(v) == v).count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        let n = self.len();
        let mut entries = vec![0i64; n * n];
        for v in 0..n {
            entries[v * n + v] = self.weights[v];
        }
        for &(u, v) in &self.edges {
            entries[u * n + v] = 1;
            entries[v * n + u] = 1;
        }
        IntersectionMatrix { n, entries }
    }

    /// `det(M(G))`, exact.
    pub fn determinant(&self) -> BigInt {
        self.intersection_matrix().determinant()
    }

    /// `|det M(G)| = 1`. The empty graph counts as a homology sphere.
    pub fn is_homology_sphere(&self) -> Result<bool, GraphError> {
        let components = self.component_count();
        if components > 1 {
            return Err(GraphError::Disconnected(components));
        }
        Ok(self.determinant().abs().is_one())
    }

    pub fn is_negative_definite(&self) -> bool {
        self.intersection_matrix().is_negative_definite()
    }

    /// Vertices with `m(v) > -deg(v)`, in increasing id order.
    pub fn bad_vertices(&self) -> Vec<VertexId> {
        (0..self.len())
            .filter(|&v| self.weights[v] > -(self.degree(v) as i64))
            .collect()
    }

    /// Repeatedly blows down `-1` vertices of degree at most two (lowest id
    /// first) until none remain.
    pub fn blow_down(&self) -> Result<PlumbingGraph, GraphError> {
        let mut g = self.clone();
        while let Some(v) = (0..g.len()).find(|&v| g.weights[v] == -1 && g.degree(v) <= 2) {
            g = g.blow_down_at(v)?;
        }
        Ok(g)
    }

    /// Blows down the single `-1` vertex `v` (degree at most two).
    pub fn blow_down_at(&self, v: VertexId) -> Result<PlumbingGraph, GraphError> {
        assert_eq!(self.weights[v], -1, "vertex {v} is not a -1 vertex");
        let nbrs = self.adjacency[v].clone();
        assert!(nbrs.len() <= 2, "vertex {v} has degree {}", nbrs.len());
        let mut weights = self.weights.clone();
        for &w in &nbrs {
            weights[w] += 1;
        }
        let mut edges: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| a != v && b != v)
            .collect();
        if let [a, b] = nbrs[..] {
            let e = (a.min(b), a.max(b));
            if a == b || edges.contains(&e) {
                return Err(GraphError::CycleCreated(v));
            }
            edges.push(e);
        }
        weights.remove(v);
        let shift = |x: VertexId| if x > v { x - 1 } else { x };
        let edges: Vec<_> = edges
            .into_iter()
            .map(|(a, b)| (shift(a), shift(b)))
            .collect();
        let mut out =
            PlumbingGraph::new(weights, &edges).map_err(|_| GraphError::CycleCreated(v))?;
        out.name = self.name.clone();
        Ok(out)
    }
}

impl fmt::Display for PlumbingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} weights={:?} edges={:?}",
            self.name.as_deref().unwrap_or("G"),
            self.weights,
            self.edges
        )
    }
}

/// Symmetric integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntersectionMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntersectionMatrix {
            n,
            entries: rows.concat(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.to_vec())
            .collect()
    }

    fn big(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect()
    }

    /// Fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut a = self.big();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        let det = a[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Leading principal minors `D_1, ..., D_k` computed by Bareiss
    /// elimination without pivoting. Stops after the first zero minor, since
    /// later ones cannot be read off the elimination.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let n = self.n;
        let mut a = self.big();
        let mut prev = BigInt::one();
        let mut minors = Vec::with_capacity(n);
        for k in 0..n {
            minors.push(a[k][k].clone());
            if a[k][k].is_zero() {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        minors
    }

    /// `(-1)^k D_k > 0` for every leading minor.
    pub fn is_negative_definite(&self) -> bool {
        let minors = self.leading_minors();
        minors.len() == self.n
            && minors.iter().enumerate().all(|(k, d)| {
                if k % 2 == 0 {
                    d.is_negative()
                } else {
                    d.is_positive()
                }
            })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
