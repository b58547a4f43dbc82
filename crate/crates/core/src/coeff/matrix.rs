use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::coeff::ring::Ring;
use crate::error::{Error, Result};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SVec<E> = Vec<(usize, E)>;

/// `y + alpha * x` for sparse vectors.
pub fn axpy<R: Ring>(ring: &R, y: &SVec<R::El>, alpha: &R::El, x: &SVec<R::El>) -> SVec<R::El> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            let v = ring.mul(alpha, &x[j].1);
            if !ring.is_zero(&v) {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = ring.add(&y[i].1, &ring.mul(alpha, &x[j].1));
            if !ring.is_zero(&v) {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<R: Ring>(ring: &R, alpha: &R::El, x: &SVec<R::El>) -> SVec<R::El> {
    x.iter()
        .filter_map(|(i, v)| {
            let w = ring.mul(alpha, v);
            (!ring.is_zero(&w)).then_some((*i, w))
        })
        .collect()
}

/// Accumulates (index, value) pairs, merging duplicates and dropping zeros.
#[derive(Debug, Clone)]
pub struct Accumulator<E> {
    map: BTreeMap<usize, E>,
}

impl<E: Clone> Default for Accumulator<E> {
    fn default() -> Self {
        Accumulator { map: BTreeMap::new() }
    }
}

impl<E: Clone> Accumulator<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add<R: Ring<El = E>>(&mut self, ring: &R, idx: usize, v: E) {
        if ring.is_zero(&v) {
            return;
        }
        match self.map.get_mut(&idx) {
            Some(slot) => *slot = ring.add(slot, &v),
            None => {
                self.map.insert(idx, v);
            }
        }
    }

    pub fn into_svec<R: Ring<El = E>>(self, ring: &R) -> SVec<E> {
        self.map
            .into_iter()
            .filter(|(_, v)| !ring.is_zero(v))
            .collect()
    }
}

/// A column-major sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<E> {
    n_rows: usize,
    n_cols: usize,
    cols: Vec<SVec<E>>,
}

impl<E: Clone + PartialEq> SparseMatrix<E> {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix { n_rows, n_cols, cols: vec![Vec::new(); n_cols] }
    }

    /// Builds from sorted, zero-free columns.
    pub fn from_columns(n_rows: usize, cols: Vec<SVec<E>>) -> Result<Self> {
        for (j, c) in cols.iter().enumerate() {
            if c.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Invalid(format!("column {j} not strictly sorted")));
            }
            if c.last().is_some_and(|(i, _)| *i >= n_rows) {
                return Err(Error::DimensionMismatch(format!("row index out of range in column {j}")));
            }
        }
        Ok(SparseMatrix { n_rows, n_cols: cols.len(), cols })
    }

    pub fn from_triplets<R: Ring<El = E>>(
        ring: &R,
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, E)>,
    ) -> Result<Self> {
        let mut acc: Vec<Accumulator<E>> = vec![Accumulator::new(); n_cols];
        for (i, j, v) in triplets {
            if i >= n_rows || j >= n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i},{j}) outside {n_rows}x{n_cols}"
                )));
            }
            acc[j].add(ring, i, v);
        }
        let cols = acc.into_iter().map(|a| a.into_svec(ring)).collect();
        Ok(SparseMatrix { n_rows, n_cols, cols })
    }

    pub fn identity<R: Ring<El = E>>(ring: &R, n: usize) -> Self {
        SparseMatrix { n_rows: n, n_cols: n, cols: (0..n).map(|i| vec![(i, ring.one())]).collect() }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn col(&self, j: usize) -> &SVec<E> {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SVec<E>] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &E)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SVec<E>> = vec![Vec::new(); self.n_rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                cols[*i].push((j, v.clone()));
            }
        }
        SparseMatrix { n_rows: self.n_cols, n_cols: self.n_rows, cols }
    }

    /// `self * rhs`.
    pub fn mul<R: Ring<El = E>>(&self, ring: &R, rhs: &SparseMatrix<E>) -> Result<Self> {
        if self.n_cols != rhs.n_rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        let cols = rhs
            .cols
            .iter()
            .map(|c| {
                let mut acc = Accumulator::new();
                for (k, b) in c {
                    for (i, a) in &self.cols[*k] {
                        acc.add(ring, *i, ring.mul(a, b));
                    }
                }
                acc.into_svec(ring)
            })
            .collect();
        Ok(SparseMatrix { n_rows: self.n_rows, n_cols: rhs.n_cols, cols })
    }

    pub fn map<R: Ring>(&self, ring: &R, f: impl Fn(&E) -> R::El) -> SparseMatrix<R::El> {
        let cols = self
            .cols
            .iter()
            .map(|c| {
                c.iter()
                    .filter_map(|(i, v)| {
                        let w = f(v);
                        (!ring.is_zero(&w)).then_some((*i, w))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix { n_rows: self.n_rows, n_cols: self.n_cols, cols }
    }

    /// Text dump: header `rows cols`, then one `row col value` line per entry.
    pub fn dump<R: Ring<El = E>>(&self, ring: &R) -> String {
        let mut s = format!("{} {}\n", self.n_rows, self.n_cols);
        for (i, j, v) in self.triplets() {
            let _ = writeln!(s, "{i} {j} {}", ring.format(v));
        }
        s
    }

    pub fn parse_dump<R: Ring<El = E>>(ring: &R, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix dump".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        if dims.len() != 2 {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let mut trips = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad entry line {line:?}")));
            }
            let i = parts[0].parse().map_err(|_| Error::Parse(line.to_string()))?;
            let j = parts[1].parse().map_err(|_| Error::Parse(line.to_string()))?;
            trips.push((i, j, ring.parse(parts[2])?));
        }
        Self::from_triplets(ring, dims[0], dims[1], trips)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ring::Integers;

    #[test]
    fn triplets_merge_and_drop_zero() {
        let m = SparseMatrix::from_triplets(&Integers, 2, 2, [(0, 0, 1), (0, 0, -1), (1, 1, 2), (1, 1, 3)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.col(1), &vec![(1, 5)]);
    }

    #[test]
    fn dump_roundtrip() {
        let m = SparseMatrix::from_triplets(&Integers, 3, 2, [(2, 0, -4), (0, 1, 7)]).unwrap();
        let text = m.dump(&Integers);
        assert_eq!(text, "3 2\n2 0 -4\n0 1 7\n");
        assert_eq!(SparseMatrix::parse_dump(&Integers, &text).unwrap(), m);
    }

    #[test]
    fn multiply() {
        let a = SparseMatrix::from_triplets(&Integers, 1, 2, [(0, 0, 1), (0, 1, 1)]).unwrap();
        let b = SparseMatrix::from_triplets(&Integers, 2, 1, [(0, 0, 1), (1, 0, -1)]).unwrap();
        assert!(a.mul(&Integers, &b).unwrap().is_zero());
        assert!(a.mul(&Integers, &a).is_err());
    }
}
