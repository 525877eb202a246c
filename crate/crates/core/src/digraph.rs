//! Finite multidigraphs, finite walks and the digraph/matrix dictionary.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::matrix::{AdjacencyMatrix, RelatorMatrix, SquareMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("edge {edge} endpoint {vertex} is out of range for {vertex_count} vertices")]
    EndpointOutOfRange { edge: usize, vertex: usize, vertex_count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("start vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),
    #[error("edge {edge} at step {step} does not start where the walk currently is (vertex {at})")]
    Discontinuous { step: usize, edge: usize, at: usize },
    #[error("walk {index} starts at vertex {start} but the previous walk ends at vertex {previous_end}")]
    NotComposable { index: usize, previous_end: usize, start: usize },
    #[error("a segment must contain at least one walk")]
    EmptySegment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
}

/// Finite digraph with parallel edges and loops. Vertices are `0..vertex_count`;
/// edge identity is its position in the edge list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Digraph {
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self, DigraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out = Vec::new();
        for (k, (s, t)) in edges.into_iter().enumerate() {
            for v in [s, t] {
                if v >= vertex_count {
                    return Err(DigraphError::EndpointOutOfRange { edge: k, vertex: v, vertex_count });
                }
            }
            out.push(Edge { source: s, target: t });
        }
        Ok(Digraph { vertex_count, edges: out })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Digraph { vertex_count, edges: Vec::new() }
    }

    /// One vertex with `n` loops.
    pub fn rose(n: usize) -> Self {
        Digraph { vertex_count: 1, edges: vec![Edge { source: 0, target: 0 }; n] }
    }

    /// Loop at vertex 0, plus edges 0 -> 1 and 1 -> 0.
    pub fn golden_mean() -> Self {
        Digraph::new(2, [(0, 0), (0, 1), (1, 0)]).unwrap()
    }

    /// Ashley's eight-vertex digraph: the sum of the permutation matrices of
    /// (12345678) and (1)(2)(374865).
    pub fn ashley() -> Self {
        let mut adj = SquareMatrix::zeros(8);
        for i in 0..8 {
            adj.set(i, (i + 1) % 8, adj.get(i, (i + 1) % 8) + 1);
        }
        for (a, b) in [(1, 1), (2, 2), (3, 7), (7, 4), (4, 8), (8, 6), (6, 5), (5, 3)] {
            adj.set(a - 1, b - 1, adj.get(a - 1, b - 1) + 1);
        }
        Digraph::from_adjacency(&AdjacencyMatrix::new(adj).unwrap())
    }

    /// Edges are enumerated in row-major order of the matrix.
    pub fn from_adjacency(adj: &AdjacencyMatrix) -> Self {
        let m = adj.matrix();
        let n = m.size();
        let mut edges = Vec::new();
        for v in 0..n {
            for w in 0..n {
                for _ in 0..m.get(v, w) {
                    edges.push(Edge { source: v, target: w });
                }
            }
        }
        Digraph { vertex_count: n, edges }
    }

    pub fn from_relator(rel: &RelatorMatrix) -> Self {
        Self::from_adjacency(&rel.to_adjacency())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(move |(_, e)| e.source == v).map(|(k, _)| k)
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(move |(_, e)| e.target == v).map(|(k, _)| k)
    }

    pub fn adjacency_matrix(&self) -> AdjacencyMatrix {
        let mut m = SquareMatrix::zeros(self.vertex_count);
        for e in &self.edges {
            m.set(e.source, e.target, m.get(e.source, e.target) + 1);
        }
        AdjacencyMatrix::new(m).unwrap()
    }

    pub fn relator_matrix(&self) -> RelatorMatrix {
        self.adjacency_matrix().to_relator()
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`. Edge order is kept.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.vertex_count);
        Digraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| Edge { source: perm[e.source], target: perm[e.target] })
                .collect(),
        }
    }

    fn successors(&self) -> Vec<Vec<(usize, u64)>> {
        let mut succ = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            succ[e.source].push((e.target, 1));
        }
        succ
    }

    fn predecessors(&self) -> Vec<Vec<(usize, u64)>> {
        let mut pred = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            pred[e.target].push((e.source, 1));
        }
        pred
    }

    /// No vertex has exactly one infinite forward walk or exactly one
    /// infinite backward walk.
    pub fn is_udaf(&self) -> bool {
        let succ = self.successors();
        let pred = self.predecessors();
        single_infinite_walk_free(&succ, &pred) && single_infinite_walk_free(&pred, &succ)
    }

    /// Every ordered pair of vertices is joined by a directed walk.
    pub fn is_strongly_connected(&self) -> bool {
        if self.vertex_count <= 1 {
            return true;
        }
        let succ = self.successors();
        let pred = self.predecessors();
        reach_all(&succ, 0) && reach_all(&pred, 0)
    }

    /// Strongly connected components, each sorted, ordered by least member.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        let succ = self.successors();
        let pred = self.predecessors();
        // Kosaraju, iterative.
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some((v, i)) = stack.pop() {
                if i < succ[v].len() {
                    stack.push((v, i + 1));
                    let w = succ[v][i].0;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(v);
                }
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for &root in order.iter().rev() {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![root];
            comp[root] = id;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &(w, _) in &pred[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps.sort();
        comps
    }

    /// The subdigraph of vertices and edges that lie on bi-infinite walks.
    pub fn core(&self) -> Core {
        let succ = self.successors();
        let pred = self.predecessors();
        let forward = live_vertices(&succ);
        let backward = live_vertices(&pred);
        let vertex_map: Vec<usize> =
            (0..self.vertex_count).filter(|&v| forward[v] && backward[v]).collect();
        let mut index = vec![usize::MAX; self.vertex_count];
        for (k, &v) in vertex_map.iter().enumerate() {
            index[v] = k;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if backward[e.source] && forward[e.target] {
                edges.push(Edge { source: index[e.source], target: index[e.target] });
                edge_map.push(k);
            }
        }
        Core {
            digraph: Digraph { vertex_count: vertex_map.len(), edges },
            vertex_map,
            edge_map,
        }
    }

    /// `tr(Adj^k)` for `k = 1..=k_max`.
    pub fn trace_sequence(&self, k_max: usize) -> Vec<BigUint> {
        let n = self.vertex_count;
        let adj = self.adjacency_matrix();
        let a: Vec<Vec<BigUint>> = (0..n)
            .map(|i| (0..n).map(|j| BigUint::from(adj.matrix().get(i, j) as u64)).collect())
            .collect();
        let mut power = a.clone();
        let mut out = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            if k > 1 {
                power = mat_mul(&power, &a);
            }
            out.push((0..n).fold(BigUint::zero(), |acc, i| acc + &power[i][i]));
        }
        out
    }

    /// A vertex bijection `perm` with `self.permuted(&perm)` having the same
    /// adjacency matrix as `other`, if one exists.
    pub fn isomorphism_to(&self, other: &Digraph) -> Option<Vec<usize>> {
        if self.vertex_count != other.vertex_count || self.edges.len() != other.edges.len() {
            return None;
        }
        let a = self.adjacency_matrix();
        let b = other.adjacency_matrix();
        let (a, b) = (a.matrix(), b.matrix());
        let n = self.vertex_count;
        let signature = |m: &SquareMatrix, v: usize| -> (i64, i64, i64) {
            let out: i64 = m.row(v).iter().sum();
            let inn: i64 = (0..n).map(|u| m.get(u, v)).sum();
            (m.get(v, v), out, inn)
        };
        let sa: Vec<_> = (0..n).map(|v| signature(a, v)).collect();
        let sb: Vec<_> = (0..n).map(|v| signature(b, v)).collect();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn assign(
            v: usize,
            n: usize,
            a: &SquareMatrix,
            b: &SquareMatrix,
            sa: &[(i64, i64, i64)],
            sb: &[(i64, i64, i64)],
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if v == n {
                return true;
            }
            for w in 0..n {
                if used[w] || sa[v] != sb[w] {
                    continue;
                }
                let consistent = (0..v)
                    .all(|u| a.get(u, v) == b.get(perm[u], w) && a.get(v, u) == b.get(w, perm[u]));
                if !consistent {
                    continue;
                }
                perm[v] = w;
                used[w] = true;
                if assign(v + 1, n, a, b, sa, sb, perm, used) {
                    return true;
                }
                used[w] = false;
            }
            false
        }
        if assign(0, n, a, b, &sa, &sb, &mut perm, &mut used) {
            Some(perm)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Digraph) -> bool {
        self.isomorphism_to(other).is_some()
    }

    pub fn walk(&self, start: usize, edges: Vec<usize>) -> Result<FiniteWalk, WalkError> {
        if start >= self.vertex_count {
            return Err(WalkError::NoSuchVertex(start));
        }
        let mut at = start;
        for (step, &e) in edges.iter().enumerate() {
            let edge = *self.edges.get(e).ok_or(WalkError::NoSuchEdge(e))?;
            if edge.source != at {
                return Err(WalkError::Discontinuous { step, edge: e, at });
            }
            at = edge.target;
        }
        Ok(FiniteWalk { start, end: at, edges })
    }

    /// All walks of length `len`, ordered by (start vertex, edge sequence).
    pub fn walks_of_length(&self, len: usize) -> Vec<FiniteWalk> {
        let out_lists: Vec<Vec<usize>> =
            (0..self.vertex_count).map(|v| self.out_edges(v).collect()).collect();
        let mut current: Vec<FiniteWalk> = (0..self.vertex_count)
            .map(|v| FiniteWalk { start: v, end: v, edges: Vec::new() })
            .collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &current {
                for &e in &out_lists[w.end] {
                    let mut edges = w.edges.clone();
                    edges.push(e);
                    next.push(FiniteWalk { start: w.start, end: self.edges[e].target, edges });
                }
            }
            current = next;
        }
        current
    }
}

/// Result of [`Digraph::core`]: the core and its inclusion into the original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Core {
    pub digraph: Digraph,
    /// Core vertex index -> original vertex index (ascending).
    pub vertex_map: Vec<usize>,
    /// Core edge index -> original edge index (ascending).
    pub edge_map: Vec<usize>,
}

/// A finite walk: a start vertex and a composable edge sequence.
/// Length-0 walks are the identities at their vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWalk {
    start: usize,
    end: usize,
    edges: Vec<usize>,
}

impl FiniteWalk {
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertices visited, `len() + 1` of them.
    pub fn vertices(&self, d: &Digraph) -> Vec<usize> {
        let mut out = vec![self.start];
        out.extend(self.edges.iter().map(|&e| d.edge(e).target));
        out
    }
}

/// Concatenate a finite window of a generalised walk. Returns the flattened
/// walk and the index offsets: `offsets[0] = base` and
/// `offsets[k + 1] = offsets[k] + segment[k].len()`.
pub fn flatten_segment(
    segment: &[FiniteWalk],
    base: i64,
) -> Result<(FiniteWalk, Vec<i64>), WalkError> {
    let first = segment.first().ok_or(WalkError::EmptySegment)?;
    let mut edges = Vec::new();
    let mut offsets = Vec::with_capacity(segment.len() + 1);
    offsets.push(base);
    let mut at = first.start;
    for (k, w) in segment.iter().enumerate() {
        if w.start != at {
            return Err(WalkError::NotComposable { index: k, previous_end: at, start: w.start });
        }
        edges.extend_from_slice(&w.edges);
        offsets.push(offsets[k] + w.len() as i64);
        at = w.end;
    }
    Ok((FiniteWalk { start: first.start, end: at, edges }, offsets))
}

/// UDAF test directly on an adjacency matrix.
pub(crate) fn adjacency_is_udaf(adj: &SquareMatrix) -> bool {
    let n = adj.size();
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for v in 0..n {
        for w in 0..n {
            let c = adj.get(v, w);
            if c > 0 {
                succ[v].push((w, c as u64));
                pred[w].push((v, c as u64));
            }
        }
    }
    single_infinite_walk_free(&succ, &pred) && single_infinite_walk_free(&pred, &succ)
}

/// Vertices with an infinite walk in the direction of `succ`, i.e. that can
/// reach a cycle.
fn live_vertices(succ: &[Vec<(usize, u64)>]) -> Vec<bool> {
    let n = succ.len();
    let mut pred: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    let mut degree = vec![0u64; n];
    for (v, list) in succ.iter().enumerate() {
        for &(w, c) in list {
            degree[v] += c;
            pred[w].push((v, c));
        }
    }
    let mut live = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] == 0).collect();
    for &v in &queue {
        live[v] = false;
    }
    while let Some(v) = queue.pop_front() {
        for &(u, c) in &pred[v] {
            if !live[u] {
                continue;
            }
            degree[u] -= c;
            if degree[u] == 0 {
                live[u] = false;
                queue.push_back(u);
            }
        }
    }
    live
}

/// True iff no vertex has exactly one infinite walk in the `succ` direction.
/// A live vertex has exactly one such walk iff no live vertex reachable from
/// it has two or more live successor edges.
fn single_infinite_walk_free(succ: &[Vec<(usize, u64)>], pred: &[Vec<(usize, u64)>]) -> bool {
    let n = succ.len();
    let live = live_vertices(succ);
    let mut good = vec![false; n];
    let mut stack = Vec::new();
    for v in 0..n {
        if !live[v] {
            continue;
        }
        let live_out: u64 = succ[v].iter().filter(|&&(w, _)| live[w]).map(|&(_, c)| c).sum();
        if live_out >= 2 {
            good[v] = true;
            stack.push(v);
        }
    }
    while let Some(v) = stack.pop() {
        for &(u, _) in &pred[v] {
            if live[u] && !good[u] {
                good[u] = true;
                stack.push(u);
            }
        }
    }
    (0..n).all(|v| !live[v] || good[v])
}

fn reach_all(succ: &[Vec<(usize, u64)>], root: usize) -> bool {
    let mut seen = vec![false; succ.len()];
    seen[root] = true;
    let mut stack = vec![root];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(w, _) in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == succ.len()
}

fn mat_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = a.len();
    let mut out = vec![vec![BigUint::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}
