//! Exact computations for plane curve germs, finite map germs and their discriminants.

pub mod algebra;
pub mod error;
pub mod newton;
pub mod puiseux;
pub mod local;
pub mod discriminant;
pub mod lab;

pub use error::{GermError, Result};
