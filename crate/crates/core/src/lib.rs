//! Exact homotopy colimits of finite diagrams over simplex categories.

pub mod category;
pub mod chain;
pub mod diagram;
pub mod error;
pub mod gen;
pub mod hocolim;
pub mod io;
pub mod linalg;
pub mod simplicial;
pub mod values;

pub use error::{Error, Result};
