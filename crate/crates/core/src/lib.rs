//! Markov polynomials from weighted Markov snake graphs.
//!
//! The numerator of the Markov polynomial `M_{a/b}` is the sum of the weight
//! monomials of the perfect matchings of the snake graph. This crate computes
//! it three ways (enumeration, a transfer DP, Vieta mutation), computes the
//! Newton polygon, and builds an explicit perfect matching for each of its
//! lattice points.

pub mod cli;
pub mod constructor;
pub mod matchings;
pub mod newton;
pub mod oracle;
pub mod poly;
pub mod render;
pub mod saturation;
pub mod snake;
pub mod words;

pub use constructor::{match_for_point, Construction, ConstructionState, RewriteOp};
pub use matchings::{enumerate_matchings, numerator_dp, Matching, NumeratorPoly};
pub use newton::{lattice_points, LatticePoint, NewtonPolygon};
pub use poly::{Monomial, TriPoly};
pub use snake::{build_snake, SnakeGraph};
pub use words::RationalIndex;
