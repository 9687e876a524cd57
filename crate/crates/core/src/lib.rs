//! Exact deformation theory with differential graded Lie algebras over ℚ.

pub mod artin;
pub mod ce;
pub mod deformation;
pub mod dgla;
pub mod equivariant;
pub mod error;
pub mod examples;
pub mod free;
pub mod graded;
pub mod io;
pub mod homotopy;
pub mod kuranishi;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod semiuniversal;

pub use dgla::{Dgla, DglaBuilder, DglaMorphism};
pub use error::{Error, Result};
pub use graded::{GradedMap, GradedVectorSpace};
pub use linalg::{Matrix, Subspace, Vector};
pub use rational::Rational;
