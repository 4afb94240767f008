//! Symbolic and numeric toolkit for Fock-space mass operators.

pub mod error;
pub mod expr;
pub mod fock;
pub mod masslab;
pub mod measure;
pub mod parser;
pub mod pdo;
pub mod relations;
pub mod scalar;
pub mod wick;

pub use error::{MassError, MeasureError, NumericError, ParseError, SymbolicError};
pub use expr::{canonicalize, Expr, Label, MultiIndex, Term};
pub use parser::{parse, parse_with, render, ParseConfig};
pub use scalar::{fmt_q, Atoms, Scalar, Q};
