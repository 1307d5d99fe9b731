//! Exact verification toolkit for q-supercongruences modulo cyclotomic and
//! parametric moduli, the classical supercongruences they specialize to, and the
//! basic hypergeometric identities used to derive them.

pub mod error;
pub mod numbers;
pub mod param;
pub mod qpoly;
pub mod terms;
pub mod eval;
pub mod qseries;
pub mod engine;
pub mod registry;
pub mod supercong;
pub mod powerseries;

pub use error::{Error, Result};
