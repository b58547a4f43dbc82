use serde::{Deserialize, Serialize};

use crate::coeff::linalg;
use crate::coeff::matrix::SparseMatrix;
use crate::coeff::ring::{Integers, PrimeField, Rationals, Ring, RingSpec};
use crate::coeff::snf::smith_normal_form;
use crate::error::{Error, Result};

/// Betti number and torsion of one homology group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub degree: i64,
    pub betti: usize,
    /// Invariant factors greater than one (only over the integers).
    pub torsion: Vec<i128>,
}

/// Rings over which homology can be extracted.
pub trait HomologyRing: Ring {
    /// Rank of `m` and, over the integers, its invariant factors.
    fn rank_and_factors(&self, m: &SparseMatrix<Self::El>) -> Result<(usize, Vec<i128>)>;
}

impl HomologyRing for Integers {
    fn rank_and_factors(&self, m: &SparseMatrix<i128>) -> Result<(usize, Vec<i128>)> {
        let f = smith_normal_form(m)?;
        Ok((f.len(), f))
    }
}

impl HomologyRing for Rationals {
    fn rank_and_factors(&self, m: &SparseMatrix<Self::El>) -> Result<(usize, Vec<i128>)> {
        Ok((linalg::rank(self, m), Vec::new()))
    }
}

impl HomologyRing for PrimeField {
    fn rank_and_factors(&self, m: &SparseMatrix<u64>) -> Result<(usize, Vec<i128>)> {
        Ok((linalg::rank(self, m), Vec::new()))
    }
}

/// Rank of an integer-entry matrix over a field; rejects the integers.
pub fn rank_over(spec: RingSpec, m: &SparseMatrix<i128>) -> Result<usize> {
    match spec.validate()? {
        RingSpec::Integers => Err(Error::NotAField("Z (use smith_normal_form)".into())),
        RingSpec::Rationals => {
            let q = Rationals;
            Ok(linalg::rank(&q, &m.map(&q, |v| crate::coeff::ring::from_i128(&q, *v))))
        }
        RingSpec::PrimeField(p) => {
            let f = PrimeField::new(p)?;
            Ok(linalg::rank(&f, &m.map(&f, |v| crate::coeff::ring::from_i128(&f, *v))))
        }
    }
}

/// Checks `d_out * d_in == 0` and matching dimensions.
pub fn check_composable<R: Ring>(
    ring: &R,
    d_in: &SparseMatrix<R::El>,
    d_out: &SparseMatrix<R::El>,
    degree: i64,
) -> Result<()> {
    if d_in.n_rows() != d_out.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "degree {degree}: incoming differential has {} rows, outgoing has {} columns",
            d_in.n_rows(),
            d_out.n_cols()
        )));
    }
    let comp = d_out.mul(ring, d_in)?;
    if !comp.is_zero() {
        return Err(Error::NonzeroComposite { degree, nonzero: comp.nnz() });
    }
    Ok(())
}

/// Homology at the middle of `C_{d+1} --d_in--> C_d --d_out--> C_{d-1}`.
///
/// Over the integers the kernel of `d_out` is a direct summand, so the torsion
/// of `ker d_out / im d_in` equals the torsion of the cokernel of `d_in`.
pub fn homology_at<R: HomologyRing>(
    ring: &R,
    d_in: &SparseMatrix<R::El>,
    d_out: &SparseMatrix<R::El>,
    degree: i64,
) -> Result<HomologySummary> {
    check_composable(ring, d_in, d_out, degree)?;
    let (rank_out, _) = ring.rank_and_factors(d_out)?;
    let (rank_in, factors) = ring.rank_and_factors(d_in)?;
    let kernel_dim = d_out.n_cols() - rank_out;
    Ok(HomologySummary {
        degree,
        betti: kernel_dim - rank_in,
        torsion: factors.into_iter().filter(|&d| d > 1).collect(),
    })
}
