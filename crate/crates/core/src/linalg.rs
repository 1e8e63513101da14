//! Sparse exact linear algebra over the rationals.
//!
//! Matrices are stored as sparse rows. Elimination is Gauss–Jordan with the
//! first available pivot in column order, which makes every result a
//! deterministic function of the input.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::superalg::Rational;

pub type SparseVector = BTreeMap<usize, Rational>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVector>,
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solve {
    /// A solution with all free variables set to zero.
    Solution(SparseVector),
    /// A row vector `y` with `yᵀA = 0` and `yᵀb ≠ 0`.
    Inconsistent(SparseVector),
}

fn axpy(target: &mut SparseVector, factor: &Rational, source: &SparseVector) {
    for (&j, v) in source {
        let entry = target.entry(j).or_insert_with(Rational::zero);
        *entry += factor * v;
        if entry.is_zero() {
            target.remove(&j);
        }
    }
}

/// Reduces `rows` in place on the columns `0..ncols`, returning pivot columns.
/// Row `i < pivots.len()` has its leading one at `pivots[i]`.
fn gauss_jordan(rows: &mut [SparseVector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        let Some(found) = (next..rows.len()).find(|&r| rows[r].contains_key(&col)) else {
            continue;
        };
        rows.swap(next, found);
        let inv = Rational::one() / &rows[next][&col];
        for v in rows[next].values_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next {
                continue;
            }
            if let Some(f) = row.get(&col).cloned() {
                axpy(row, &-f, &pivot_row);
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    pivots
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![SparseVector::new(); nrows] }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(nrows: usize, columns: &[SparseVector]) -> Self {
        let mut m = SparseMatrix::zeros(nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (&i, v) in col {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i < self.nrows && j < self.ncols, "index out of range");
        if value.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, value);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// Keeps only the rows for which `keep` holds, in order.
    pub fn select_rows(&self, mut keep: impl FnMut(usize) -> bool) -> SparseMatrix {
        let rows: Vec<SparseVector> =
            self.rows.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, r)| r.clone()).collect();
        SparseMatrix { nrows: rows.len(), ncols: self.ncols, rows }
    }

    pub fn mul_vec(&self, x: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Rational::zero();
            for (j, v) in row {
                if let Some(xj) = x.get(j) {
                    acc += v * xj;
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        out
    }

    /// `yᵀ A` as a sparse row.
    pub fn left_mul(&self, y: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (&i, yi) in y {
            axpy(&mut out, yi, &self.rows[i]);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        gauss_jordan(&mut rows, self.ncols).len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// A basis of the right kernel, one vector per free column in order.
    pub fn kernel(&self) -> Vec<SparseVector> {
        let mut rows = self.rows.clone();
        let pivots = gauss_jordan(&mut rows, self.ncols);
        let mut is_pivot = vec![None; self.ncols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = SparseVector::new();
            v.insert(free, Rational::one());
            for (r, &c) in pivots.iter().enumerate() {
                if let Some(x) = rows[r].get(&free) {
                    v.insert(c, -x.clone());
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `A x = b` exactly.
    pub fn solve(&self, b: &SparseVector) -> Solve {
        let rhs = self.ncols;
        let mut rows: Vec<SparseVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                if let Some(v) = b.get(&i) {
                    r.insert(rhs, v.clone());
                }
                r.insert(rhs + 1 + i, Rational::one());
                r
            })
            .collect();
        let pivots = gauss_jordan(&mut rows, self.ncols);
        for row in &rows[pivots.len()..] {
            if row.contains_key(&rhs) {
                let certificate = row.range(rhs + 1..).map(|(&j, v)| (j - rhs - 1, v.clone())).collect();
                return Solve::Inconsistent(certificate);
            }
        }
        let mut x = SparseVector::new();
        for (r, &c) in pivots.iter().enumerate() {
            if let Some(v) = rows[r].get(&rhs) {
                x.insert(c, v.clone());
            }
        }
        Solve::Solution(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::{int, rat};

    fn vec_of(entries: &[(usize, i64)]) -> SparseVector {
        entries.iter().map(|&(i, v)| (i, int(v))).collect()
    }

    fn matrix(rows: &[&[i64]]) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, int(v));
            }
        }
        m
    }

    #[test]
    fn rank_and_kernel() {
        let m = matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).is_empty());
    }

    #[test]
    fn solve_consistent_system() {
        let m = matrix(&[&[2, 0], &[0, 3], &[1, 1]]);
        let b = vec_of(&[(0, 1), (1, 1)]);
        let b = {
            let mut b = b;
            b.insert(2, rat(1, 2) + rat(1, 3));
            b
        };
        match m.solve(&b) {
            Solve::Solution(x) => assert_eq!(m.mul_vec(&x), b),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inconsistent_system_has_certificate() {
        let m = matrix(&[&[1, 1], &[2, 2]]);
        let b = vec_of(&[(0, 1)]);
        match m.solve(&b) {
            Solve::Inconsistent(y) => {
                assert!(m.left_mul(&y).is_empty());
                let yb: Rational = y.iter().filter_map(|(i, v)| b.get(i).map(|bi| v * bi)).sum();
                assert!(!yb.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variables_are_zero() {
        let m = matrix(&[&[1, 1, 0]]);
        assert_eq!(m.solve(&vec_of(&[(0, 5)])), Solve::Solution(vec_of(&[(0, 5)])));
        assert_eq!(m.solve(&SparseVector::new()), Solve::Solution(SparseVector::new()));
    }
}
