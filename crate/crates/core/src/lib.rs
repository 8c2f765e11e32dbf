//! Combinatorics of Legendrian mountain ranges and their connected sums.
//!
//! - [`mountain_range`]: peak sets, valleys, membership and stabilization.
//! - [`composite`]: connected-sum classes as tuples modulo stabilization
//!   transfer, exact fiber enumeration and window-truncated quotient posets.
//! - [`poset_analysis`]: peaks, valleys and maximal nonsimple points.
//! - [`paths`]: path words, realization, multi-path and connecting-path checks.
//! - [`simplicity`]: the peak-count criterion, window oracle, witnesses and
//!   canonical forms for powers of two-peak knots.
//! - [`io`], [`render`], [`report`], [`cli`]: documents, diagrams and the
//!   command-line surface.

pub mod cli;
pub mod composite;
mod dsu;
pub mod io;
pub mod mountain_range;
pub mod paths;
pub mod poset_analysis;
pub mod render;
pub mod report;
pub mod simplicity;

pub use composite::{
    build_quotient, canonicalize_tuple, enumerate_fiber, peaks_of_sum, relation_neighbors,
    sum_invariants, FiberClass, QuotientPoset, SumSpec, Summand, TupleClass,
};
pub use mountain_range::{KnotId, MountainRange, Peak, Point, Sign, SimpleClass, Valley};
pub use paths::{PathLetter, PathWord};
pub use simplicity::{criterion, simplicity_in_window, CriterionCase, CriterionVerdict};
