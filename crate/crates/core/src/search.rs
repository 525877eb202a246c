//! Bounded breadth-first search for move scripts between relator matrices.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::certificate::MoveScript;
use crate::dimension::{check_det_compatible, weak_udaf_equivalent_relators};
use crate::matrix::RelatorMatrix;
use crate::moves::{apply_move, Move};

/// Matrices up to this size are deduplicated up to simultaneous
/// permutation; larger ones only up to equality.
pub const EXACT_CANONICAL_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_steps: usize,
    pub max_matrix_size: usize,
    pub max_entry_abs: u64,
    pub max_states: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_steps: 8, max_matrix_size: 9, max_entry_abs: 64, max_states: 5_000_000 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    /// Worker threads for frontier expansion; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Restrict to size-preserving moves.
    pub no_cross: bool,
    /// Also enumerate dead-index deletions, which shorten some scripts.
    pub dead_moves: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneReason {
    DetIncompatible,
    WeakInvariantsDiffer,
}

impl std::fmt::Display for PruneReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PruneReason::DetIncompatible => "det-incompatible",
            PruneReason::WeakInvariantsDiffer => "weak-invariants-differ",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(MoveScript),
    ExhaustedWithinBudget { states: usize, depth: usize, state_limit_hit: bool },
    PrunedImpossible(PruneReason),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("budget field `{0}` must be positive")]
    ZeroBudget(&'static str),
    #[error("{0} is not an UDAF relator matrix")]
    NotUdaf(&'static str),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

/// Least matrix under simultaneous row and column permutations for sizes up
/// to [`EXACT_CANONICAL_LIMIT`]; the matrix itself above that.
pub fn canonical_form(m: &RelatorMatrix) -> RelatorMatrix {
    if m.size() <= EXACT_CANONICAL_LIMIT {
        m.canonical_form()
    } else {
        m.clone()
    }
}

fn canonical_with_perm(m: &RelatorMatrix) -> (RelatorMatrix, Vec<usize>) {
    if m.size() <= EXACT_CANONICAL_LIMIT {
        m.canonical_form_with_perm()
    } else {
        (m.clone(), (0..m.size()).collect())
    }
}

/// Size then zigzag LEB128 entries.
fn encode(m: &RelatorMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(1 + m.size() * m.size());
    let mut push = |x: u64| {
        let mut x = x;
        loop {
            let byte = (x & 0x7f) as u8;
            x >>= 7;
            if x == 0 {
                out.push(byte);
                break;
            }
            out.push(byte | 0x80);
        }
    };
    push(m.size() as u64);
    for &v in m.matrix().entries() {
        push(((v << 1) ^ (v >> 63)) as u64);
    }
    out
}

/// Candidate moves in the fixed enumeration order.
fn candidate_moves(m: &RelatorMatrix, options: &SearchOptions) -> Vec<Move> {
    let (budget, no_cross) = (&options.budget, options.no_cross);
    let n = m.size();
    let mut out = Vec::new();
    if !no_cross && n < budget.max_matrix_size {
        out.extend((1..=n + 1).map(Move::AddCross));
    }
    if !no_cross {
        out.extend((1..=n).map(Move::RemoveCross));
    }
    let pairs: Vec<(usize, usize)> =
        (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    out.extend(pairs.iter().filter(|&&(i, j)| m.get(i - 1, j - 1) != 0).map(|&(i, j)| Move::AddRow(i, j)));
    out.extend(pairs.iter().map(|&(i, j)| Move::SubRow(i, j)));
    out.extend(pairs.iter().filter(|&&(i, j)| m.get(i - 1, j - 1) != 0).map(|&(i, j)| Move::AddCol(i, j)));
    out.extend(pairs.iter().map(|&(i, j)| Move::SubCol(i, j)));
    if !no_cross && options.dead_moves {
        out.extend((1..=n).map(Move::delete_dead));
    }
    out
}

fn successors(m: &RelatorMatrix, options: &SearchOptions) -> Vec<(Move, RelatorMatrix, Vec<u8>)> {
    let budget = &options.budget;
    candidate_moves(m, options)
        .into_iter()
        .filter_map(|mv| {
            let out = apply_move(m, &mv).ok()?;
            if out.result.matrix().max_abs_entry() > budget.max_entry_abs {
                return None;
            }
            let key = encode(&canonical_form(&out.result));
            Some((mv, out.result, key))
        })
        .collect()
}

/// Permutation move taking `from` to `to`, given equal canonical forms.
fn aligning_permutation(from: &RelatorMatrix, to: &RelatorMatrix) -> Option<Move> {
    if from == to {
        return None;
    }
    let (_, p_from) = canonical_with_perm(from);
    let (_, p_to) = canonical_with_perm(to);
    let mut to_inv = vec![0; p_to.len()];
    for (v, &w) in p_to.iter().enumerate() {
        to_inv[w] = v;
    }
    Some(Move::Permute(p_from.iter().map(|&w| to_inv[w] + 1).collect()))
}

struct Node {
    parent: usize,
    mv: Option<Move>,
}

fn path_to(nodes: &[Node], mut k: usize) -> Vec<Move> {
    let mut moves = Vec::new();
    while let Some(mv) = &nodes[k].mv {
        moves.push(mv.clone());
        k = nodes[k].parent;
    }
    moves.reverse();
    moves
}

fn found(a: &RelatorMatrix, b: &RelatorMatrix, reached: &RelatorMatrix, mut moves: Vec<Move>) -> SearchOutcome {
    moves.extend(aligning_permutation(reached, b));
    SearchOutcome::Found(MoveScript { initial: a.clone(), moves, claimed_final: b.clone() })
}

/// Breadth-first search from `a` for a script ending at `b`. Results are
/// identical for every worker count: each level is expanded in parallel and
/// merged in frontier order.
pub fn find_certificate(
    a: &RelatorMatrix,
    b: &RelatorMatrix,
    options: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let budget = &options.budget;
    for (name, value) in [
        ("max_steps", budget.max_steps as u64),
        ("max_matrix_size", budget.max_matrix_size as u64),
        ("max_entry_abs", budget.max_entry_abs),
        ("max_states", budget.max_states as u64),
    ] {
        if value == 0 {
            return Err(SearchError::ZeroBudget(name));
        }
    }
    if !a.is_udaf() {
        return Err(SearchError::NotUdaf("source"));
    }
    if !b.is_udaf() {
        return Err(SearchError::NotUdaf("target"));
    }
    if !check_det_compatible(a, b) {
        return Ok(SearchOutcome::PrunedImpossible(PruneReason::DetIncompatible));
    }
    if let Ok(false) = weak_udaf_equivalent_relators(a, b) {
        return Ok(SearchOutcome::PrunedImpossible(PruneReason::WeakInvariantsDiffer));
    }
    let run = || search_levels(a, b, options);
    match options.jobs {
        None => Ok(run()),
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| SearchError::Pool(e.to_string()))?;
            Ok(pool.install(run))
        }
    }
}

fn search_levels(a: &RelatorMatrix, b: &RelatorMatrix, options: &SearchOptions) -> SearchOutcome {
    let budget = &options.budget;
    let goal = encode(&canonical_form(b));
    let start_key = encode(&canonical_form(a));
    if start_key == goal {
        return found(a, b, a, Vec::new());
    }
    let mut seen: HashSet<Vec<u8>> = HashSet::from([start_key]);
    let mut nodes = vec![Node { parent: 0, mv: None }];
    let mut frontier: Vec<(usize, RelatorMatrix)> = vec![(0, a.clone())];
    for depth in 1..=budget.max_steps {
        let expanded: Vec<Vec<(Move, RelatorMatrix, Vec<u8>)>> = frontier
            .par_iter()
            .map(|(_, m)| successors(m, options))
            .collect();
        let mut next = Vec::new();
        for ((parent, _), succ) in frontier.iter().zip(expanded) {
            for (mv, m, key) in succ {
                if !seen.insert(key.clone()) {
                    continue;
                }
                nodes.push(Node { parent: *parent, mv: Some(mv) });
                let id = nodes.len() - 1;
                if key == goal {
                    return found(a, b, &m, path_to(&nodes, id));
                }
                if seen.len() >= budget.max_states {
                    return SearchOutcome::ExhaustedWithinBudget {
                        states: seen.len(),
                        depth,
                        state_limit_hit: true,
                    };
                }
                next.push((id, m));
            }
        }
        if next.is_empty() {
            return SearchOutcome::ExhaustedWithinBudget { states: seen.len(), depth, state_limit_hit: false };
        }
        frontier = next;
    }
    SearchOutcome::ExhaustedWithinBudget { states: seen.len(), depth: budget.max_steps, state_limit_hit: false }
}
