//! Exact Γ-homology of algebras over binary quadratic Koszul operads.

pub mod algebra;
pub mod coeff;
pub mod complex;
pub mod error;
pub mod koszul;
pub mod operad;
pub mod perm;

pub use error::{Error, Result};
pub use algebra::{CoefficientModule, FiniteAlgebra};
pub use coeff::{Field, HomologySummary, Integers, PrimeField, Rationals, Ring, RingSpec, SparseMatrix};
pub use complex::{AssembledComplex, Context, Section, Truncation};
pub use koszul::KoszulData;
pub use operad::{Operad, Presentation};
pub use perm::{BarTuple, Perm};
