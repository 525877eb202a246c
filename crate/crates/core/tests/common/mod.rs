#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use udaf::moves::DeadSide;
use udaf::{apply_move, Digraph, Move, RelatorMatrix};

pub fn rel(rows: &[&[i64]]) -> RelatorMatrix {
    RelatorMatrix::from_rows(rows).unwrap()
}

pub fn random_digraph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Digraph {
    let n = rng.gen_range(1..=max_vertices);
    let e = rng.gen_range(0..=max_edges);
    let edges: Vec<(usize, usize)> = (0..e).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    Digraph::new(n, edges).unwrap()
}

/// Rejection-samples a strongly connected UDAF digraph.
pub fn random_strong_udaf<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Digraph {
    loop {
        let d = random_digraph(rng, max_vertices, max_edges);
        if d.edge_count() > 0 && d.is_strongly_connected() && d.is_udaf() {
            return d;
        }
    }
}

/// Rejection-samples an UDAF relator matrix with nonnegative adjacency.
pub fn random_udaf_relator<R: Rng>(rng: &mut R, max_size: usize, max_entry: i64) -> RelatorMatrix {
    loop {
        let n = rng.gen_range(1..=max_size);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let a = if rng.gen_bool(0.5) { rng.gen_range(0..=max_entry.min(3)) } else { 0 };
                        if i == j { a - 1 } else { a }
                    })
                    .collect()
            })
            .collect();
        let m = RelatorMatrix::from_rows(&rows).unwrap();
        if m.is_udaf() {
            return m;
        }
    }
}

/// A uniformly chosen move shape; it may well be illegal for `m`.
pub fn random_move<R: Rng>(rng: &mut R, m: &RelatorMatrix) -> Move {
    let n = m.size();
    if n == 0 {
        let side = if rng.gen_bool(0.5) { DeadSide::Row } else { DeadSide::Col };
        return if rng.gen_bool(0.5) { Move::AddCross(1) } else { Move::InsertDead { pos: 1, side, entries: vec![] } };
    }
    let pos = |rng: &mut R| rng.gen_range(1..=n);
    let pair = |rng: &mut R| {
        let i = rng.gen_range(1..=n);
        let mut j = rng.gen_range(1..=n);
        if n > 1 {
            while j == i {
                j = rng.gen_range(1..=n);
            }
        }
        (i, j)
    };
    match rng.gen_range(0..9) {
        0 => Move::AddCross(rng.gen_range(1..=n + 1)),
        1 => Move::RemoveCross(pos(rng)),
        2 => {
            let (i, j) = pair(rng);
            Move::AddRow(i, j)
        }
        3 => {
            let (i, j) = pair(rng);
            Move::SubRow(i, j)
        }
        4 => {
            let (i, j) = pair(rng);
            Move::AddCol(i, j)
        }
        5 => {
            let (i, j) = pair(rng);
            Move::SubCol(i, j)
        }
        6 => {
            let mut b: Vec<usize> = (1..=n).collect();
            b.shuffle(rng);
            Move::Permute(b)
        }
        7 => Move::delete_dead(pos(rng)),
        _ => {
            let side = if rng.gen_bool(0.5) { DeadSide::Row } else { DeadSide::Col };
            let entries = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            Move::InsertDead { pos: rng.gen_range(1..=n + 1), side, entries }
        }
    }
}

/// Up to `len` legal moves from `start`, staying within the size and entry
/// bounds. Returns the applied moves and the matrices visited.
pub fn random_legal_walk<R: Rng>(
    rng: &mut R,
    start: &RelatorMatrix,
    len: usize,
    max_size: usize,
    max_entry: u64,
) -> (Vec<Move>, Vec<RelatorMatrix>) {
    let mut cur = start.clone();
    let mut moves = Vec::new();
    let mut visited = vec![cur.clone()];
    let mut attempts = 0;
    while moves.len() < len && attempts < 200 * len.max(1) {
        attempts += 1;
        let mv = random_move(rng, &cur);
        let Ok(out) = apply_move(&cur, &mv) else { continue };
        if out.result.size() > max_size || out.result.matrix().max_abs_entry() > max_entry {
            continue;
        }
        cur = out.result;
        moves.push(out.applied);
        visited.push(cur.clone());
    }
    (moves, visited)
}

pub fn random_partition<R: Rng>(rng: &mut R, d: &Digraph, by_source: bool) -> Vec<Vec<usize>> {
    let mut blocks = Vec::new();
    for v in 0..d.vertex_count() {
        let mut es: Vec<usize> = if by_source { d.out_edges(v).collect() } else { d.in_edges(v).collect() };
        es.shuffle(rng);
        let k = if es.is_empty() { 1 } else { rng.gen_range(1..=es.len()) };
        let mut parts = vec![Vec::new(); k];
        for (idx, e) in es.into_iter().enumerate() {
            let slot = if idx < k { idx } else { rng.gen_range(0..k) };
            parts[slot].push(e);
        }
        blocks.extend(parts.into_iter().filter(|p| !p.is_empty()));
    }
    blocks
}
