//! Numerical engine for quasi-norms on weak Orlicz and weak Lebesgue spaces.
//!
//! Functions live on bounded 1-D intervals as finitely many smooth pieces
//! ([`realfn::PiecewiseFunction`]). On top of their distribution functions the
//! crate evaluates the strong and weak Lebesgue and Orlicz norms
//! ([`norms`]), estimates skew von Neumann-Jordan type constants by seeded
//! supremum search ([`constants`]) and audits published bounds for these
//! constants against independently computed values ([`audit`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod constants;
pub mod error;
pub mod nfunc;
pub mod norms;
pub mod quad;
pub mod realfn;
pub mod search;

pub use error::{Error, Result};
pub use nfunc::{NFunction, OrliczIndices};
pub use norms::{SpaceKind, SpaceSpec};
pub use realfn::PiecewiseFunction;

/// Engine version echoed into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
