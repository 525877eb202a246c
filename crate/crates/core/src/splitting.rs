//! State splittings, past-future digraphs and their standard foldings.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::digraph::Digraph;

pub const DEFAULT_PF_VERTEX_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("edge {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("edge {0} appears in two blocks")]
    RepeatedEdge(usize),
    #[error("edges {0} and {1} share a block but not a source vertex")]
    NotOutAdmissible(usize, usize),
    #[error("edges {0} and {1} share a block but not a target vertex")]
    NotInAdmissible(usize, usize),
    #[error("past-future digraph would have {projected} vertices, above the cap of {cap}")]
    TooLarge { projected: BigUint, cap: u64 },
    #[error("past index must be <= 0 and future index >= 0")]
    InvalidRange,
}

/// A partition of the edge set into blocks. Blocks are sorted and ordered
/// by their least edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePartition {
    blocks: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl EdgePartition {
    /// Blocks over `edge_count` edges; unlisted edges become singletons.
    pub fn from_blocks(edge_count: usize, blocks: Vec<Vec<usize>>) -> Result<Self, SplitError> {
        let mut seen = vec![false; edge_count];
        let mut all: Vec<Vec<usize>> = Vec::new();
        for mut b in blocks {
            for &e in &b {
                if e >= edge_count {
                    return Err(SplitError::EdgeOutOfRange(e));
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(SplitError::RepeatedEdge(e));
                }
            }
            if !b.is_empty() {
                b.sort_unstable();
                all.push(b);
            }
        }
        all.extend((0..edge_count).filter(|&e| !seen[e]).map(|e| vec![e]));
        all.sort();
        let mut class_of = vec![0; edge_count];
        for (k, b) in all.iter().enumerate() {
            for &e in b {
                class_of[e] = k;
            }
        }
        Ok(EdgePartition { blocks: all, class_of })
    }

    pub fn discrete(edge_count: usize) -> Self {
        Self::from_blocks(edge_count, Vec::new()).unwrap()
    }

    /// One block per source vertex.
    pub fn by_source(d: &Digraph) -> Self {
        let blocks = (0..d.vertex_count()).map(|v| d.out_edges(v).collect()).collect();
        Self::from_blocks(d.edge_count(), blocks).unwrap()
    }

    /// One block per target vertex.
    pub fn by_target(d: &Digraph) -> Self {
        let blocks = (0..d.vertex_count()).map(|v| d.in_edges(v).collect()).collect();
        Self::from_blocks(d.edge_count(), blocks).unwrap()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.class_of[e]
    }

    pub fn edge_count(&self) -> usize {
        self.class_of.len()
    }
}

/// A digraph homomorphism from `domain` to `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledFolding {
    pub domain: Digraph,
    pub target: Digraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl LabeledFolding {
    pub fn identity(d: &Digraph) -> Self {
        LabeledFolding {
            domain: d.clone(),
            target: d.clone(),
            vertex_map: (0..d.vertex_count()).collect(),
            edge_map: (0..d.edge_count()).collect(),
        }
    }
}

/// Sources and targets commute with the vertex and edge maps.
pub fn is_homomorphism(f: &LabeledFolding) -> bool {
    if f.vertex_map.len() != f.domain.vertex_count() || f.edge_map.len() != f.domain.edge_count() {
        return false;
    }
    if f.vertex_map.iter().any(|&v| v >= f.target.vertex_count())
        || f.edge_map.iter().any(|&e| e >= f.target.edge_count())
    {
        return false;
    }
    f.domain.edges().iter().zip(&f.edge_map).all(|(e, &img)| {
        let t = f.target.edge(img);
        t.source == f.vertex_map[e.source] && t.target == f.vertex_map[e.target]
    })
}

fn check_admissible(d: &Digraph, p: &EdgePartition, by_source: bool) -> Result<(), SplitError> {
    if p.edge_count() != d.edge_count() {
        return Err(SplitError::EdgeOutOfRange(p.edge_count().max(d.edge_count())));
    }
    for b in p.blocks() {
        let key = |e: usize| if by_source { d.edge(e).source } else { d.edge(e).target };
        if let Some(&bad) = b.iter().find(|&&e| key(e) != key(b[0])) {
            return Err(if by_source {
                SplitError::NotOutAdmissible(b[0], bad)
            } else {
                SplitError::NotInAdmissible(b[0], bad)
            });
        }
    }
    Ok(())
}

/// Out-splitting: one vertex per class, an edge `(e1, [e2])` from `[e1]` to
/// `[e2]` whenever `e1` ends where `e2` starts. Edges are ordered by `e1`,
/// then by class.
pub fn out_split(d: &Digraph, p: &EdgePartition) -> Result<(Digraph, LabeledFolding), SplitError> {
    check_admissible(d, p, true)?;
    let classes = p.blocks();
    let mut edges = Vec::new();
    let mut edge_map = Vec::new();
    for (e1, edge) in d.edges().iter().enumerate() {
        for (c2, block) in classes.iter().enumerate() {
            if d.edge(block[0]).source == edge.target {
                edges.push((p.class_of(e1), c2));
                edge_map.push(e1);
            }
        }
    }
    let s = Digraph::new(classes.len(), edges).expect("class indices in range");
    let vertex_map = classes.iter().map(|b| d.edge(b[0]).source).collect();
    let f = LabeledFolding { domain: s.clone(), target: d.clone(), vertex_map, edge_map };
    Ok((s, f))
}

/// In-splitting: one vertex per class, an edge `([e1], e2)` from `[e1]` to
/// `[e2]` whenever `e1` ends where `e2` starts. Edges are ordered by class,
/// then by `e2`.
pub fn in_split(d: &Digraph, p: &EdgePartition) -> Result<(Digraph, LabeledFolding), SplitError> {
    check_admissible(d, p, false)?;
    let classes = p.blocks();
    let mut edges = Vec::new();
    let mut edge_map = Vec::new();
    for (c1, block) in classes.iter().enumerate() {
        let end = d.edge(block[0]).target;
        for e2 in d.out_edges(end) {
            edges.push((c1, p.class_of(e2)));
            edge_map.push(e2);
        }
    }
    let s = Digraph::new(classes.len(), edges).expect("class indices in range");
    let vertex_map = classes.iter().map(|b| d.edge(b[0]).target).collect();
    let f = LabeledFolding { domain: s.clone(), target: d.clone(), vertex_map, edge_map };
    Ok((s, f))
}

/// Number of walks of length `len`: the entry sum of `Adj^len`.
pub fn walk_count(d: &Digraph, len: usize) -> BigUint {
    let mut counts: Vec<BigUint> = vec![BigUint::from(1u32); d.vertex_count()];
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); d.vertex_count()];
        for e in d.edges() {
            next[e.source] += &counts[e.target];
        }
        counts = next;
    }
    counts.into_iter().sum()
}

/// `PF(D, past, future)`: vertices are walks of length `future - past`,
/// edges walks one longer, from their prefix to their suffix. The folding
/// reads each walk at offset `-past`.
pub fn past_future_digraph(
    d: &Digraph,
    past: i64,
    future: i64,
    vertex_cap: u64,
) -> Result<(Digraph, LabeledFolding), SplitError> {
    if past > 0 || future < 0 {
        return Err(SplitError::InvalidRange);
    }
    let len = (future - past) as usize;
    let projected = walk_count(d, len);
    if projected.to_u64().is_none_or(|n| n > vertex_cap) {
        return Err(SplitError::TooLarge { projected, cap: vertex_cap });
    }
    let offset = (-past) as usize;
    let vertices = d.walks_of_length(len);
    let index: HashMap<(usize, &[usize]), usize> =
        vertices.iter().enumerate().map(|(k, w)| ((w.start(), w.edges()), k)).collect();
    let mut edges = Vec::new();
    let mut edge_map = Vec::new();
    for h in d.walks_of_length(len + 1) {
        let es = h.edges();
        let prefix = index[&(h.start(), &es[..len])];
        let suffix = index[&(d.edge(es[0]).target, &es[1..])];
        edges.push((prefix, suffix));
        edge_map.push(es[offset]);
    }
    let vertex_map = vertices.iter().map(|w| w.vertices(d)[offset]).collect();
    let s = Digraph::new(vertices.len(), edges).expect("walk indices in range");
    let f = LabeledFolding { domain: s.clone(), target: d.clone(), vertex_map, edge_map };
    Ok((s, f))
}
