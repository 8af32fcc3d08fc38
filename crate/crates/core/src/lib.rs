//! Partition regularity of Diophantine equations: exact linear criteria,
//! necessary conditions for nonlinear equations, and brute-force coloring
//! experiments.

pub mod error;
pub mod filters;
pub mod linalg;
pub mod linear;
pub mod model;
pub mod parser;
pub mod search;
pub mod univariate;

pub use error::{Error, Result};
pub use filters::{analyze, run_all_filters, Analysis, FilterResult};
pub use linalg::{columns_condition, in_span, zero_sum_subsets, ColumnsCertificate, QMatrix};
pub use linear::{Certificate, OrderedPartition, Status, Verdict};
pub use model::{Equation, Monomial, Polynomial};
pub use parser::{parse, pretty, ParseError};
pub use univariate::UniPoly;
