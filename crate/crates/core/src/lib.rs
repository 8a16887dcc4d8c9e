//! Finite unions of closed intervals over the nonnegative rationals, the weak
//! monadic structure of finite sets, and the translations between their
//! first-order theories.

pub mod checks;
pub mod cli;
pub mod error;
pub mod fci;
pub mod finset;
pub mod oracle;
pub mod order;
pub mod semantics;
pub mod syntax;
pub mod transforms;

pub use error::{Error, Result};
pub use fci::{FciSet, Segment};
pub use finset::FinSet;
pub use order::Point;
pub use syntax::{classify, parse, Class, Formula, Op, Signature, Term};
