//! Sparse Smith normal form over the integers.
//!
//! Elimination picks, at each step, a nonzero entry of least absolute value,
//! breaking ties by Markowitz cost `(row_len - 1) * (col_len - 1)` and then by
//! position. Row and column clearing use Euclidean steps until the pivot
//! divides everything in its row and column.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use crate::coeff::matrix::SparseMatrix;
use crate::error::{Error, Result};

struct Work {
    rows: Vec<BTreeMap<usize, i128>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Work {
    fn new(m: &SparseMatrix<i128>) -> Self {
        let mut rows = vec![BTreeMap::new(); m.n_rows()];
        let mut cols = vec![BTreeSet::new(); m.n_cols()];
        for (i, j, v) in m.triplets() {
            rows[i].insert(j, *v);
            cols[j].insert(i);
        }
        Work { rows, cols }
    }

    fn set(&mut self, i: usize, j: usize, v: i128) {
        if v == 0 {
            self.rows[i].remove(&j);
            self.cols[j].remove(&i);
        } else {
            self.rows[i].insert(j, v);
            self.cols[j].insert(i);
        }
    }

    /// row `dst` -= q * row `src`
    fn row_sub(&mut self, dst: usize, src: usize, q: i128) -> Result<()> {
        let src_row: Vec<(usize, i128)> = self.rows[src].iter().map(|(j, v)| (*j, *v)).collect();
        for (j, v) in src_row {
            let cur = self.rows[dst].get(&j).copied().unwrap_or(0);
            let new = q
                .checked_mul(v)
                .and_then(|x| cur.checked_sub(x))
                .ok_or(Error::Overflow("smith normal form"))?;
            self.set(dst, j, new);
        }
        Ok(())
    }

    fn best_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(u128, usize, usize, usize)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                let cost = (row.len() - 1) * (self.cols[*j].len() - 1);
                let key = (v.unsigned_abs(), cost, i, *j);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                    if key.0 == 1 && key.1 == 0 {
                        return Some((i, *j));
                    }
                }
            }
        }
        best.map(|(_, _, i, j)| (i, j))
    }
}

/// Nonzero invariant factors `d1 | d2 | ...` (all positive); their count is the rank.
pub fn smith_normal_form(m: &SparseMatrix<i128>) -> Result<Vec<i128>> {
    let mut w = Work::new(m);
    let mut diag = Vec::new();
    while let Some((mut r, mut c)) = w.best_pivot() {
        loop {
            let p = w.rows[r][&c];
            // clear column c below/above the pivot
            let others: Vec<usize> = w.cols[c].iter().copied().filter(|&i| i != r).collect();
            let mut smaller: Option<(i128, usize)> = None;
            for i in others {
                let v = w.rows[i][&c];
                let q = v / p;
                if q != 0 {
                    w.row_sub(i, r, q)?;
                }
                if let Some(&rem) = w.rows[i].get(&c) {
                    if smaller.is_none_or(|(a, _)| rem.abs() < a) {
                        smaller = Some((rem.abs(), i));
                    }
                }
            }
            if let Some((_, i)) = smaller {
                r = i;
                continue;
            }
            // column c holds only the pivot, so column operations touch row r alone
            let row_entries: Vec<(usize, i128)> =
                w.rows[r].iter().filter(|(j, _)| **j != c).map(|(j, v)| (*j, *v)).collect();
            let mut smaller: Option<(i128, usize)> = None;
            for (j, v) in row_entries {
                let rem = v % p;
                w.set(r, j, rem);
                if rem != 0 && smaller.is_none_or(|(a, _)| rem.abs() < a) {
                    smaller = Some((rem.abs(), j));
                }
            }
            match smaller {
                Some((_, j)) => c = j,
                None => break,
            }
        }
        diag.push(w.rows[r][&c].abs());
        w.set(r, c, 0);
    }
    Ok(divisibility_chain(diag))
}

/// Normalises a list of positive diagonal entries into invariant factor form.
pub fn divisibility_chain(mut d: Vec<i128>) -> Vec<i128> {
    d.sort_unstable();
    let start = d.iter().position(|&x| x != 1).unwrap_or(d.len());
    let n = d.len();
    for i in start..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = d[i] / g * d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d.sort_unstable();
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ring::Integers;

    fn mat(rows: &[&[i128]]) -> SparseMatrix<i128> {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let trips = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, *v)));
        SparseMatrix::from_triplets(&Integers, rows.len(), n_cols, trips).unwrap()
    }

    #[test]
    fn diag_examples() {
        assert_eq!(smith_normal_form(&mat(&[&[2, 0], &[0, 3]])).unwrap(), vec![1, 6]);
        assert_eq!(smith_normal_form(&mat(&[&[1, 0], &[0, 1]])).unwrap(), vec![1, 1]);
        assert_eq!(smith_normal_form(&mat(&[&[2]])).unwrap(), vec![2]);
        assert!(smith_normal_form(&SparseMatrix::zero(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn needs_euclid() {
        // gcd structure forces remainder steps
        assert_eq!(smith_normal_form(&mat(&[&[4, 6], &[6, 9]])).unwrap(), vec![1]);
        assert_eq!(smith_normal_form(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).unwrap(), vec![2, 6, 12]);
    }

    #[test]
    fn chain() {
        assert_eq!(divisibility_chain(vec![4, 6, 1]), vec![1, 2, 12]);
    }
}
