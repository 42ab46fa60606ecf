//! Exact arithmetic for combinatorial wreath products `A ≀_X B`.

pub mod abelian;
pub mod bs;
pub mod error;
pub mod finite;
pub mod induced;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod wreath;

pub use error::{Error, Result};
