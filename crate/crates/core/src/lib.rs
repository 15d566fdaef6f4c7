//! Distance-count matrices of graphs.
//!
//! A distance-count matrix (DCM) has one row per node; entry `(i, k)` counts
//! the nodes at shortest-path distance exactly `k` to node `i`. Its row-wise
//! prefix sums form the cumulative matrix (CDCM). This crate computes both
//! from graphs, screens candidate matrices with sound necessary conditions,
//! decides exactly (by pruned backtracking) whether a small matrix is the
//! (C)DCM of some graph, realizes degree sequences and good sequences as
//! graphs, and builds the three-partition gadget matrix/graph pair that ties
//! matrix recognition to exact cover search.

pub mod generate;
pub mod graph;
pub mod matrices;
pub mod recognizer;
pub mod reduction;
pub mod screening;
pub mod sequences;

pub use graph::{Distance, DistanceRow, Graph, GraphError, Orientation};
pub use matrices::{
    canonical_rows, cdcm_of, cdcm_to_dcm, dcm_of, dcm_to_cdcm, goodness, Candidate, CdcMatrix,
    DcMatrix, GoodnessVerdict, MatrixError, MatrixKind,
};
pub use recognizer::{
    recognize, verify_witness, MatchPolicy, RecognitionOutcome, SearchLimits, SearchStats,
    UnknownReason,
};
pub use reduction::{
    build_gadget, build_matrix, solve_tpp, validate_instance, GadgetLayout, NodeRole, TppError,
    TppInstance, TppOutcome, TppSolution, TppViolation, ValidationLevel,
};
pub use screening::{
    check_basic, check_columns_graphical, check_predecessor_bounds, in_degrees, screen, BoundMode,
    PredecessorBoundConfig, Rule, ScreenReport,
};
pub use sequences::{
    erdos_gallai_check, havel_hakimi, indegree_realize, realize_good_sequence, DegreeSequence,
    GoodSequence, HhRejection, SequenceError,
};
