//! The Γ-homology chain complex `E ⊗ (K P ⊠ C_*(EΣ_•)) ∘ A`, the smaller
//! Koszul complex `E ⊗ K P ∘ A`, and the cochain variant.

mod coinvariant;
mod gamma;

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::{CoefficientModule, FiniteAlgebra};
use crate::coeff::homology::{check_composable, homology_at, HomologyRing, HomologySummary};
use crate::coeff::ring::Ring;
use crate::coeff::SparseMatrix;
use crate::error::{Error, Result};
use crate::koszul::KoszulData;
use crate::perm::BarTuple;

pub use coinvariant::assemble_koszul;
pub use gamma::{assemble_cochain, assemble_gamma, gamma_differential, GammaGenerator};

/// Which representative of each `Σ_r`-orbit of bar tuples is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Section {
    /// `w_0 = id`.
    #[default]
    First,
    /// `w_t = id`.
    Last,
}

/// Which generators are assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Total degrees `0..=d_max + 1`, enough for homology in degrees `0..=d_max`.
    Degree(usize),
    /// Arity at most `r_max` and bar degree at most `t_max`.
    Box { r_max: usize, t_max: usize },
}

impl Truncation {
    pub fn max_arity(self) -> usize {
        match self {
            Truncation::Degree(d) => d + 2,
            Truncation::Box { r_max, .. } => r_max,
        }
    }

    pub fn max_degree(self) -> usize {
        match self {
            Truncation::Degree(d) => d + 1,
            Truncation::Box { r_max, t_max } => r_max - 1 + t_max,
        }
    }

    pub(crate) fn admits(self, r: usize, t: usize) -> bool {
        match self {
            Truncation::Degree(d) => r - 1 + t <= d + 1,
            Truncation::Box { r_max, t_max } => r <= r_max && t <= t_max,
        }
    }

    /// Degrees whose homology is fully determined by the assembled generators.
    pub fn homology_degrees(self) -> usize {
        match self {
            Truncation::Degree(d) => d + 1,
            Truncation::Box { .. } => 0,
        }
    }
}

/// Everything the differential needs, over one ground ring.
pub struct Context<'a, R: Ring> {
    pub ring: &'a R,
    /// `koszul[r - 1]` is `K P(r)`.
    pub koszul: &'a [KoszulData<R::El>],
    pub algebra: &'a FiniteAlgebra,
    pub module: &'a CoefficientModule,
}

impl<R: Ring> Context<'_, R> {
    pub fn validate(&self, max_arity: usize) -> Result<()> {
        if self.koszul.len() < max_arity {
            return Err(Error::MissingKoszul(self.koszul.len() + 1));
        }
        if self.module.algebra_dim != self.algebra.dim {
            return Err(Error::DimensionMismatch("module is over an algebra of another dimension".into()));
        }
        if self.module.gen_dim != self.algebra.gen_dim {
            return Err(Error::DimensionMismatch("module and algebra use different generators".into()));
        }
        if let Some(k2) = self.koszul.get(1) {
            if k2.dim != self.algebra.gen_dim {
                return Err(Error::DimensionMismatch(format!(
                    "K P(2) has dimension {} but the algebra has {} generators",
                    k2.dim, self.algebra.gen_dim
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    /// `diffs[d]` maps degree `d` to `d - 1`.
    Homological,
    /// `diffs[d]` maps degree `d` to `d + 1`.
    Cohomological,
}

/// Generators per degree and the differentials between them.
#[derive(Debug, Clone)]
pub struct AssembledComplex<E> {
    pub name: String,
    pub grading: Grading,
    pub generators: Vec<Vec<String>>,
    pub diffs: Vec<SparseMatrix<E>>,
    /// Homology is reported for degrees `0..valid_degrees`.
    pub valid_degrees: usize,
}

impl<E: Clone + PartialEq> AssembledComplex<E> {
    pub fn ranks(&self) -> Vec<usize> {
        self.generators.iter().map(Vec::len).collect()
    }

    /// Verifies that consecutive differentials compose to zero.
    pub fn check_closure<R: Ring<El = E>>(&self, ring: &R) -> Result<()> {
        for d in 1..self.diffs.len() {
            let (first, second) = match self.grading {
                Grading::Homological => (&self.diffs[d], &self.diffs[d - 1]),
                Grading::Cohomological => (&self.diffs[d - 1], &self.diffs[d]),
            };
            check_composable(ring, first, second, d as i64)?;
        }
        Ok(())
    }

    /// Homology (or cohomology) in degrees `0..valid_degrees`.
    pub fn homology<R: HomologyRing<El = E>>(&self, ring: &R) -> Result<Vec<HomologySummary>> {
        (0..self.valid_degrees)
            .map(|d| {
                let (d_in, d_out) = match self.grading {
                    Grading::Homological => (&self.diffs[d + 1], &self.diffs[d]),
                    Grading::Cohomological => {
                        let prev = if d == 0 {
                            SparseMatrix::zero(self.generators[0].len(), 0)
                        } else {
                            self.diffs[d - 1].clone()
                        };
                        return homology_at(ring, &prev, &self.diffs[d], d as i64);
                    }
                };
                homology_at(ring, d_in, d_out, d as i64)
            })
            .collect()
    }

    /// Text dump: generator descriptors per degree, then each differential
    /// as `rows cols` followed by `row col value` lines.
    pub fn dump<R: Ring<El = E>>(&self, ring: &R) -> String {
        let mut s = String::new();
        let grading = match self.grading {
            Grading::Homological => "homological",
            Grading::Cohomological => "cohomological",
        };
        let _ = writeln!(s, "complex {} {grading}", self.name);
        for (d, gens) in self.generators.iter().enumerate() {
            let _ = writeln!(s, "generators {d} {}", gens.len());
            for g in gens {
                let _ = writeln!(s, "{g}");
            }
        }
        for (d, m) in self.diffs.iter().enumerate() {
            let _ = write!(s, "differential {d}\n{}", m.dump(ring));
        }
        s.push_str("end\n");
        s
    }
}

/// The homogeneous bar complex `C_*(EΣ_n)` in degrees `0..=t_max`, with
/// homology valid below `t_max`.
pub fn e_sigma<R: Ring>(ring: &R, n: usize, t_max: usize) -> Result<AssembledComplex<R::El>> {
    let all = crate::perm::Perm::all(n);
    let mut gens: Vec<Vec<BarTuple>> = vec![all.iter().map(|w| BarTuple::new(vec![w.clone()])).collect::<Result<_>>()?];
    for t in 1..=t_max {
        let next = gens[t - 1]
            .iter()
            .flat_map(|b| {
                all.iter().map(move |w| {
                    let mut ws = b.perms().to_vec();
                    ws.push(w.clone());
                    ws
                })
            })
            .map(BarTuple::new)
            .collect::<Result<_>>()?;
        gens.push(next);
    }
    let mut diffs = vec![SparseMatrix::zero(0, gens[0].len())];
    for t in 1..=t_max {
        let index: HashMap<&BarTuple, usize> = gens[t - 1].iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut triplets = Vec::new();
        for (col, b) in gens[t].iter().enumerate() {
            for (s, face) in b.differential() {
                triplets.push((index[&face], col, ring.from_i64(s)));
            }
        }
        diffs.push(SparseMatrix::from_triplets(ring, gens[t - 1].len(), gens[t].len(), triplets)?);
    }
    let complex = AssembledComplex {
        name: format!("ESigma{n}"),
        grading: Grading::Homological,
        generators: gens.iter().map(|g| g.iter().map(ToString::to_string).collect()).collect(),
        diffs,
        valid_degrees: t_max,
    };
    complex.check_closure(ring)?;
    Ok(complex)
}
