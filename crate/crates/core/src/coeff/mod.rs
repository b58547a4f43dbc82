//! Coefficient rings, sparse matrices and homology extraction.

pub mod homology;
pub mod linalg;
pub mod matrix;
pub mod ring;
pub mod snf;

pub use homology::{homology_at, rank_over, HomologyRing, HomologySummary};
pub use matrix::{SVec, SparseMatrix};
pub use ring::{Field, Integers, PrimeField, Rationals, Ring, RingSpec};
pub use snf::smith_normal_form;
