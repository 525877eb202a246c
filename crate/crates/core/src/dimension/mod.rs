//! Dimension monoid and group of an UDAF digraph, computed from the relator
//! matrix of its core, and the weak equivalence decision built on them.

pub mod refine;
pub mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::digraph::{Core, Digraph};
use crate::matrix::RelatorMatrix;

pub use refine::{
    common_refinement_search, refiner_witness, sim_d_equivalent, standard_refinement, CommonRefinement, RefineError,
    VertexMultiset,
};
pub use snf::{smith_normal_form, solve_row_combination, Smith};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn unsupported(msg: impl Into<String>) -> DimensionError {
    DimensionError::Unsupported(msg.into())
}

/// Free rank and invariant factors (entries `>= 2`, each dividing the next)
/// of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupInvariants {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl GroupInvariants {
    pub fn trivial() -> Self {
        GroupInvariants { free_rank: 0, invariant_factors: Vec::new() }
    }

    /// The group presented by `Z^cols` modulo the row span of `rows`.
    pub fn of_row_lattice(rows: &[Vec<i64>], cols: usize) -> Self {
        if cols == 0 {
            return Self::trivial();
        }
        let input = if rows.is_empty() { vec![vec![0; cols]] } else { rows.to_vec() };
        let smith = smith_normal_form(&snf::to_big(&input));
        let nonzero = smith.diagonal.iter().filter(|d| !d.is_zero()).count();
        GroupInvariants {
            free_rank: cols - nonzero,
            invariant_factors: smith.diagonal.into_iter().filter(|d| *d > BigInt::one()).collect(),
        }
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.invariant_factors.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", factors.join(", "))?;
        if self.free_rank > 0 {
            write!(f, " + Z^{}", self.free_rank)?;
        }
        Ok(())
    }
}

/// Weak equivalence data: one group per strongly connected component of
/// the core, sorted. The dimension monoid is the product of the groups, each
/// with an isolated zero adjoined.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentInvariants(pub Vec<GroupInvariants>);

impl fmt::Display for ComponentInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [single] => write!(f, "{single}"),
            many => {
                let parts: Vec<String> = many.iter().map(|g| g.to_string()).collect();
                write!(f, "{{{}}}", parts.join("; "))
            }
        }
    }
}

/// Generators are core vertices; generator `v` satisfies `v = sum_w Adj(v,w) w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidPresentation {
    /// Original vertex index of each generator.
    pub generators: Vec<usize>,
    /// Row `k` holds the coefficients of the right-hand side for generator `k`.
    pub relations: Vec<Vec<i64>>,
}

impl fmt::Display for MonoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |k: usize| format!("v{}", self.generators[k] + 1);
        for (k, row) in self.relations.iter().enumerate() {
            let terms: Vec<String> = row
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(w, &c)| if c == 1 { name(w) } else { format!("{c}{}", name(w)) })
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            writeln!(f, "{} = {rhs}", name(k))?;
        }
        Ok(())
    }
}

pub fn dimension_monoid_presentation(d: &Digraph) -> MonoidPresentation {
    let core = d.core();
    MonoidPresentation {
        generators: core.vertex_map.clone(),
        relations: core.digraph.adjacency_matrix().matrix().rows(),
    }
}

/// Rows of the relator matrix of the core, one per core vertex.
pub fn elementary_refiner_rows(d: &Digraph) -> Vec<Vec<i64>> {
    d.core().digraph.relator_matrix().matrix().rows()
}

fn require_udaf(d: &Digraph) -> Result<Core, DimensionError> {
    if !d.is_udaf() {
        return Err(unsupported("digraph is not UDAF"));
    }
    Ok(d.core())
}

/// Group invariants of the dimension group of an UDAF digraph whose core is
/// strongly connected with at least one edge.
pub fn dimension_group_invariants(d: &Digraph) -> Result<GroupInvariants, DimensionError> {
    let core = require_udaf(d)?;
    if core.digraph.edge_count() == 0 {
        return Err(unsupported("core is empty"));
    }
    if !core.digraph.is_strongly_connected() {
        return Err(unsupported("core is not strongly connected"));
    }
    let rel = core.digraph.relator_matrix();
    Ok(GroupInvariants::of_row_lattice(&rel.matrix().rows(), rel.size()))
}

/// Per-component invariants of an UDAF digraph whose core is a disjoint
/// union of strongly connected digraphs. An empty core has no components.
pub fn component_invariants(d: &Digraph) -> Result<ComponentInvariants, DimensionError> {
    let core = require_udaf(d)?.digraph;
    let comps = core.strongly_connected_components();
    let mut which = vec![0; core.vertex_count()];
    for (k, c) in comps.iter().enumerate() {
        for &v in c {
            which[v] = k;
        }
    }
    if core.edges().iter().any(|e| which[e.source] != which[e.target]) {
        return Err(unsupported("core is not a disjoint union of strongly connected digraphs"));
    }
    let rel = core.relator_matrix();
    let mut out: Vec<GroupInvariants> = comps
        .iter()
        .map(|c| {
            let rows: Vec<Vec<i64>> =
                c.iter().map(|&v| c.iter().map(|&w| rel.get(v, w)).collect()).collect();
            GroupInvariants::of_row_lattice(&rows, c.len())
        })
        .collect();
    out.sort();
    Ok(ComponentInvariants(out))
}

/// Both digraphs must be UDAF with cores that are disjoint unions of
/// strongly connected digraphs; anything else is `Unsupported`.
pub fn weak_udaf_equivalent(d1: &Digraph, d2: &Digraph) -> Result<bool, DimensionError> {
    Ok(component_invariants(d1)? == component_invariants(d2)?)
}

pub fn weak_udaf_equivalent_relators(a: &RelatorMatrix, b: &RelatorMatrix) -> Result<bool, DimensionError> {
    weak_udaf_equivalent(&Digraph::from_relator(a), &Digraph::from_relator(b))
}

/// `(-1)^n det(A) == (-1)^m det(B)`. A `false` result rules out strong
/// equivalence; `true` rules out nothing.
pub fn check_det_compatible(a: &RelatorMatrix, b: &RelatorMatrix) -> bool {
    a.signed_determinant() == b.signed_determinant()
}
