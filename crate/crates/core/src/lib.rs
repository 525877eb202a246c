//! Digraphs up to flow equivalence: UDAF digraphs, relator matrices, the
//! move calculus, certificates, dimension-group invariants and splittings.

pub mod builtin;
pub mod certificate;
pub mod digraph;
pub mod dimension;
pub mod matrix;
pub mod moves;
pub mod search;
pub mod splitting;
pub mod text;

pub use digraph::{Core, Digraph, Edge, FiniteWalk};
pub use matrix::{AdjacencyMatrix, MatrixError, RelatorMatrix, SquareMatrix};
pub use moves::{apply_move, invert_move, DeadSide, Move, MoveError, MoveOutcome};
pub use certificate::{parse_script, serialize_script, verify_script, MoveScript, VerificationReport};
