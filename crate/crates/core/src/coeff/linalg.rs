//! Exact linear algebra over fields on sparse vectors.

use std::collections::{BTreeMap, HashMap};

use crate::coeff::matrix::{axpy, scale, Accumulator, SVec, SparseMatrix};
use crate::coeff::ring::Field;

/// Rank of a sparse matrix over a field, by column reduction.
pub fn rank<F: Field>(field: &F, m: &SparseMatrix<F::El>) -> usize {
    // pivot columns keyed by their lowest (largest-index) row, normalised to 1 there
    let mut pivots: HashMap<usize, SVec<F::El>> = HashMap::new();
    let mut rank = 0;
    for col in m.columns() {
        let mut v = col.clone();
        while let Some((low, lv)) = v.last().cloned() {
            match pivots.get(&low) {
                Some(p) => {
                    let neg = field.neg(&lv);
                    v = axpy(field, &v, &neg, p);
                }
                None => {
                    let inv = field.inv(&lv);
                    pivots.insert(low, scale(field, &inv, &v));
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// A subspace of `F^n` held in reduced row echelon form.
///
/// Pivots are the smallest index of each row; every row has a 1 at its pivot
/// and zeros at every other pivot column.
#[derive(Debug, Clone)]
pub struct RowEchelon<F: Field> {
    field: F,
    rows: BTreeMap<usize, SVec<F::El>>,
}

impl<F: Field> RowEchelon<F> {
    pub fn new(field: F) -> Self {
        RowEchelon { field, rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows.contains_key(&c)
    }

    pub fn rows(&self) -> impl Iterator<Item = &SVec<F::El>> {
        self.rows.values()
    }

    pub fn into_rows(self) -> Vec<SVec<F::El>> {
        self.rows.into_values().collect()
    }

    /// Normal form of `v` modulo the subspace (no entries in pivot columns).
    pub fn reduce(&self, v: &SVec<F::El>) -> SVec<F::El> {
        let f = &self.field;
        let mut acc = Accumulator::new();
        for (i, x) in v {
            acc.add(f, *i, x.clone());
        }
        for (i, x) in v {
            if let Some(row) = self.rows.get(i) {
                let neg = f.neg(x);
                for (j, y) in row {
                    acc.add(f, *j, f.mul(&neg, y));
                }
            }
        }
        acc.into_svec(f)
    }

    /// Coordinates of `v` against the echelon rows (indexed by pivot order),
    /// or `None` if `v` is not in the span.
    pub fn coords(&self, v: &SVec<F::El>) -> Option<SVec<F::El>> {
        if !self.reduce(v).is_empty() {
            return None;
        }
        let index: HashMap<usize, usize> = self.rows.keys().enumerate().map(|(k, p)| (*p, k)).collect();
        Some(
            v.iter()
                .filter_map(|(i, x)| index.get(i).map(|k| (*k, x.clone())))
                .collect(),
        )
    }

    /// Inserts `v`; returns the new pivot if it enlarged the subspace.
    pub fn insert(&mut self, v: &SVec<F::El>) -> Option<usize> {
        let f = self.field.clone();
        let r = self.reduce(v);
        let (pivot, lead) = r.first().cloned()?;
        let r = scale(&f, &f.inv(&lead), &r);
        let touched: Vec<usize> = self
            .rows
            .iter()
            .filter(|(_, row)| row.iter().any(|(j, _)| *j == pivot))
            .map(|(p, _)| *p)
            .collect();
        for p in touched {
            let row = &self.rows[&p];
            let c = row.iter().find(|(j, _)| *j == pivot).map(|(_, x)| x.clone()).unwrap();
            let updated = axpy(&f, row, &f.neg(&c), &r);
            self.rows.insert(p, updated);
        }
        self.rows.insert(pivot, r);
        Some(pivot)
    }
}

/// Reduced row echelon basis of the kernel of the map whose columns are
/// `columns` (each a sparse vector in the target).
pub fn kernel<F: Field>(field: &F, columns: &[SVec<F::El>]) -> Vec<SVec<F::El>> {
    let n = columns.len();
    // rows of the matrix as vectors over the source basis
    let mut row_map: BTreeMap<usize, Vec<(usize, F::El)>> = BTreeMap::new();
    for (j, c) in columns.iter().enumerate() {
        for (i, x) in c {
            row_map.entry(*i).or_default().push((j, x.clone()));
        }
    }
    let mut ech = RowEchelon::new(field.clone());
    for row in row_map.values() {
        ech.insert(row);
    }
    let mut kernel = RowEchelon::new(field.clone());
    for free in (0..n).filter(|c| !ech.is_pivot(*c)) {
        let mut acc = Accumulator::new();
        acc.add(field, free, field.one());
        for (p, row) in &ech.rows {
            if let Some((_, x)) = row.iter().find(|(j, _)| *j == free) {
                acc.add(field, *p, field.neg(x));
            }
        }
        kernel.insert(&acc.into_svec(field));
    }
    kernel.into_rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ring::{PrimeField, Rationals, Ring};

    fn q(n: i64) -> num_rational::BigRational {
        Rationals.from_i64(n)
    }

    #[test]
    fn rank_examples() {
        let zero = SparseMatrix::<u64>::zero(3, 3);
        assert_eq!(rank(&PrimeField::new(5).unwrap(), &zero), 0);
        let id = SparseMatrix::from_triplets(&Rationals, 4, 4, (0..4).map(|i| (i, i, q(1)))).unwrap();
        assert_eq!(rank(&Rationals, &id), 4);
        let f5 = PrimeField::new(5).unwrap();
        let m = SparseMatrix::from_triplets(&f5, 2, 2, [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]).unwrap();
        assert_eq!(rank(&f5, &m), 1);
    }

    #[test]
    fn kernel_of_sum_map() {
        // (x, y, z) -> x + y + z
        let cols = vec![vec![(0, q(1))], vec![(0, q(1))], vec![(0, q(1))]];
        let k = kernel(&Rationals, &cols);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![(0, q(1)), (2, q(-1))]);
        assert_eq!(k[1], vec![(1, q(1)), (2, q(-1))]);
    }

    #[test]
    fn echelon_coords() {
        let mut e = RowEchelon::new(Rationals);
        e.insert(&vec![(0, q(2)), (1, q(2))]);
        e.insert(&vec![(1, q(1)), (2, q(1))]);
        let v = vec![(0, q(1)), (1, q(2)), (2, q(1))];
        assert_eq!(e.coords(&v).unwrap(), vec![(0, q(1)), (1, q(2))]);
        assert!(e.coords(&vec![(2, q(1))]).is_none());
    }
}
