//! Panel fusion: matching two weighted panels by solving bipartite
//! min-cost transportation problems, either as one graph or through
//! iterative relaxed partitioning.

// NaN-rejecting checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eval;
pub mod flow;
pub mod fusion;
pub mod graph;
pub mod panel;
pub mod pipeline;
