//! Finitely presented Lawvere 1- and 2-theories and their finite models.

pub mod algebras;
pub mod cat_model;
pub mod dsl;
pub mod eh;
pub mod equality;
pub mod error;
pub mod fincat;
pub mod internal_hom;
pub mod lax;
pub mod finset;
pub mod rewrite;
pub mod search;
pub mod sigma;
pub mod term;
pub mod theory;
pub mod two_cells;

pub use error::{Error, Result, Violation};
