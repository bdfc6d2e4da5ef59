//! Exact crossed modules and 2-crossed modules of commutative algebras.
//!
//! The crate covers algebras and actions ([`algebra`], [`action`], [`maps`]),
//! crossed and 2-crossed modules ([`crossed`]), the simplex algebras Λ₁–Λ₃
//! ([`simplex`]) and the homotopy groupoids of crossed module maps
//! ([`cm_homotopy`]) and 2-crossed module maps ([`tcm_homotopy`]).

pub mod action;
pub mod algebra;
pub mod cm_homotopy;
pub mod crossed;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod maps;
pub mod random;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod simplex;
pub mod tcm_homotopy;

pub use action::Action;
pub use algebra::{Algebra, Element, Key};
pub use error::{Error, Result};
pub use maps::{BilinearMap, LinearMap};
pub use report::{Check, Report, Status};
pub use sampling::{Coverage, Policy};
pub use scalar::{Ring, Scalar};
