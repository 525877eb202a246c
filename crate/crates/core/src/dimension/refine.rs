//! Vertex multisets on the core of a digraph and the refinement relation.

use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use super::snf::{solve_row_combination, to_big};
use crate::digraph::Digraph;
use crate::text::format_multiset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefineError {
    #[error("vertex {0} has count zero")]
    ZeroCount(usize),
    #[error("vertex {vertex} out of range for {size} core vertices")]
    VertexOutOfRange { vertex: usize, size: usize },
    #[error("multiset has {found} entries but the core has {expected} vertices")]
    SizeMismatch { expected: usize, found: usize },
    #[error("count overflow")]
    Overflow,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Counts indexed by core vertex (0-based, in core order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexMultiset {
    pub counts: Vec<u64>,
}

impl VertexMultiset {
    pub fn new(counts: Vec<u64>) -> Self {
        VertexMultiset { counts }
    }

    pub fn zero(n: usize) -> Self {
        VertexMultiset { counts: vec![0; n] }
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut m = Self::zero(n);
        m.counts[v] = 1;
        m
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl std::fmt::Display for VertexMultiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_multiset(&self.counts))
    }
}

fn core_adjacency(d: &Digraph) -> Vec<Vec<u64>> {
    let core = d.core().digraph;
    core.adjacency_matrix().matrix().rows().into_iter().map(|r| r.into_iter().map(|x| x as u64).collect()).collect()
}

fn check_size(m: &VertexMultiset, n: usize) -> Result<(), RefineError> {
    if m.counts.len() != n {
        return Err(RefineError::SizeMismatch { expected: n, found: m.counts.len() });
    }
    Ok(())
}

fn refine_with(adj: &[Vec<u64>], m: &VertexMultiset, v: usize, steps: usize) -> Result<VertexMultiset, RefineError> {
    let n = adj.len();
    check_size(m, n)?;
    if v >= n {
        return Err(RefineError::VertexOutOfRange { vertex: v, size: n });
    }
    if m.counts[v] == 0 {
        return Err(RefineError::ZeroCount(v));
    }
    if steps == 0 {
        return Ok(m.clone());
    }
    let mut ends = vec![0u64; n];
    ends[v] = 1;
    for _ in 0..steps {
        let mut next = vec![0u64; n];
        for (u, &c) in ends.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (w, &a) in adj[u].iter().enumerate() {
                next[w] = c.checked_mul(a).and_then(|x| next[w].checked_add(x)).ok_or(RefineError::Overflow)?;
            }
        }
        ends = next;
    }
    let mut out = m.counts.clone();
    out[v] -= 1;
    for (o, e) in out.iter_mut().zip(ends) {
        *o = o.checked_add(e).ok_or(RefineError::Overflow)?;
    }
    Ok(VertexMultiset::new(out))
}

/// Replace one copy of `v` by the endpoints of all length-`steps` walks
/// from `v` in the core.
pub fn standard_refinement(
    m: &VertexMultiset,
    v: usize,
    steps: usize,
    d: &Digraph,
) -> Result<VertexMultiset, RefineError> {
    refine_with(&core_adjacency(d), m, v, steps)
}

/// `m1 ~ m2` for a digraph with strongly connected core: both empty, or
/// both nonempty with `m2 - m1` in the row lattice of the core relator.
pub fn sim_d_equivalent(m1: &VertexMultiset, m2: &VertexMultiset, d: &Digraph) -> Result<bool, RefineError> {
    let core = d.core().digraph;
    if !core.is_strongly_connected() {
        return Err(RefineError::Unsupported("core is not strongly connected".into()));
    }
    let n = core.vertex_count();
    check_size(m1, n)?;
    check_size(m2, n)?;
    match (m1.is_empty(), m2.is_empty()) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    Ok(refiner_witness(m1, m2, &core).is_some())
}

/// Integer coefficients `y` with `y * Rel = m2 - m1` over the core of `d`.
pub fn refiner_witness(m1: &VertexMultiset, m2: &VertexMultiset, core: &Digraph) -> Option<Vec<BigInt>> {
    let rel = core.relator_matrix();
    let diff: Vec<BigInt> =
        m1.counts.iter().zip(&m2.counts).map(|(&a, &b)| BigInt::from(b) - BigInt::from(a)).collect();
    solve_row_combination(&to_big(&rel.matrix().rows()), &diff)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonRefinement {
    pub multiset: VertexMultiset,
    /// Number of standard one-step refinements applied to each input.
    pub depths: (usize, usize),
}

fn closure(adj: &[Vec<u64>], start: &VertexMultiset, depth: usize, cap: u64) -> HashMap<VertexMultiset, usize> {
    let mut seen = HashMap::new();
    seen.insert(start.clone(), 0);
    let mut frontier = vec![start.clone()];
    for level in 1..=depth {
        let mut next = Vec::new();
        for m in &frontier {
            for v in 0..adj.len() {
                if m.counts[v] == 0 {
                    continue;
                }
                let Ok(r) = refine_with(adj, m, v, 1) else { continue };
                if r.counts.iter().any(|&c| c > cap) || seen.contains_key(&r) {
                    continue;
                }
                seen.insert(r.clone(), level);
                next.push(r);
            }
        }
        frontier = next;
    }
    seen
}

/// Breadth-first search for a common refinement using standard one-step
/// refinements, at most `depth_bound` on each side, with every count at most
/// `entry_cap`. `None` is inconclusive.
pub fn common_refinement_search(
    m1: &VertexMultiset,
    m2: &VertexMultiset,
    d: &Digraph,
    depth_bound: usize,
    entry_cap: u64,
) -> Option<CommonRefinement> {
    let adj = core_adjacency(d);
    if m1.counts.len() != adj.len() || m2.counts.len() != adj.len() {
        return None;
    }
    let first = closure(&adj, m1, depth_bound, entry_cap);
    let second = closure(&adj, m2, depth_bound, entry_cap);
    first
        .iter()
        .filter_map(|(m, &d1)| second.get(m).map(|&d2| (d1 + d2, d1.max(d2), m, (d1, d2))))
        .min()
        .map(|(_, _, m, depths)| CommonRefinement { multiset: m.clone(), depths })
}
