//! Discovery, execution, comparison and classification of network
//! generators.
//!
//! A generator is a scoring expression over edge-local variables (see
//! [`expr`]). [`synthesis`] grows a network by repeatedly sampling candidate
//! non-edges and picking one with probability proportional to its score.
//! [`dissimilarity`] compares networks through four topological profiles,
//! normalized against an Erdős–Rényi baseline, and [`evolution`] searches
//! generator space to reproduce a target network. [`atlas`] maps a set of
//! generators into families through pairwise dissimilarity, a 2-D SMACOF
//! embedding and structural pattern rules.

pub mod atlas;
pub mod cli;
pub mod dissimilarity;
pub mod error;
pub mod evolution;
pub mod expr;
pub mod graph;
pub mod seed;
pub mod synthesis;

pub use error::{Error, Result};
pub use expr::{parse_generator, program_length, Expr};
pub use graph::Network;
