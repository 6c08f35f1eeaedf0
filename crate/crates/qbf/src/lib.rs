//! Closed prenex quantified 3-CNF formulas.
//!
//! Variables are numbered `1..=n` as in QDIMACS and literals are signed
//! integers. The prefix is stored outermost first; [`Qbf::innermost`] and
//! [`GammaLedger`] expose the innermost-first numbering used by the graph
//! reduction, where quantifier 1 is the one closest to the matrix.

mod formula;
mod gamma;
mod qdimacs;

pub use formula::{Qbf, QbfError, Quantifier};
pub use gamma::{gamma, GammaError, GammaLedger};
pub use qdimacs::{parse_qdimacs, write_qdimacs, ParseError};
