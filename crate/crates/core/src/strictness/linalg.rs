//! Dense matrices over F_q with sequential and data-parallel rank kernels.
//!
//! Rows are flat `u64` buffers with one field element per `degree` slots.
//! The parallel kernel splits the elimination of each pivot column across
//! the remaining rows; the benchmark suite compares both.

use std::sync::Arc;

use crate::fq::{mulmod, FqElem, FqField};

#[derive(Debug, Clone)]
pub struct FqMatrix {
    field: Arc<FqField>,
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl FqMatrix {
    pub fn new(field: &Arc<FqField>, cols: usize) -> FqMatrix {
        FqMatrix {
            field: field.clone(),
            cols,
            rows: Vec::new(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn push_row(&mut self, entries: Vec<FqElem>) {
        debug_assert_eq!(entries.len(), self.cols);
        let m = self.field.degree();
        let mut row = Vec::with_capacity(self.cols * m);
        for e in entries {
            debug_assert_eq!(e.0.len(), m);
            row.extend_from_slice(&e.0);
        }
        self.rows.push(row);
    }

    fn entry_is_zero(&self, row: &[u64], col: usize) -> bool {
        let m = self.field.degree();
        row[col * m..(col + 1) * m].iter().all(|&c| c == 0)
    }

    fn entry(&self, row: &[u64], col: usize) -> FqElem {
        let m = self.field.degree();
        FqElem(row[col * m..(col + 1) * m].to_vec())
    }

    /// Scales a row in place.
    fn scale_row(&self, row: &mut [u64], factor: &FqElem, from_col: usize) {
        let m = self.field.degree();
        let p = self.field.p();
        if m == 1 {
            let f = factor.0[0];
            for c in row[from_col..].iter_mut() {
                *c = mulmod(*c, f, p);
            }
            return;
        }
        for chunk in row[from_col * m..].chunks_mut(m) {
            let prod = self.field.mul(&FqElem(chunk.to_vec()), factor);
            chunk.copy_from_slice(&prod.0);
        }
    }

    /// row -= factor * pivot, starting at `from_col`.
    fn row_axpy(field: &FqField, row: &mut [u64], pivot: &[u64], factor: &FqElem, from_col: usize) {
        let m = field.degree();
        let p = field.p();
        if m == 1 {
            let f = factor.0[0];
            for (d, s) in row[from_col..].iter_mut().zip(&pivot[from_col..]) {
                *d = (*d + p - mulmod(f, *s, p)) % p;
            }
            return;
        }
        let start = from_col * m;
        for (dc, sc) in row[start..].chunks_mut(m).zip(pivot[start..].chunks(m)) {
            let prod = field.mul(&FqElem(sc.to_vec()), factor);
            for (x, y) in dc.iter_mut().zip(prod.0) {
                *x = (*x + p - y) % p;
            }
        }
    }

    /// Rank by Gaussian elimination; dispatches to the parallel kernel for
    /// large matrices when the `parallel` feature is enabled. The entry
    /// threshold sits between the measured crossover points (the row-split
    /// loses at 459x351 and wins at 1024x768).
    pub fn rank(mut self) -> usize {
        #[cfg(feature = "parallel")]
        {
            if self.rows.len() * self.cols >= 1 << 19 {
                return self.rank_par_impl();
            }
        }
        self.rank_seq_impl()
    }

    pub fn rank_seq(mut self) -> usize {
        self.rank_seq_impl()
    }

    #[cfg(feature = "parallel")]
    pub fn rank_par(mut self) -> usize {
        self.rank_par_impl()
    }

    fn rank_seq_impl(&mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows.len() {
                break;
            }
            let Some(pivot_at) = (rank..self.rows.len()).find(|&r| !self.entry_is_zero(&self.rows[r], col))
            else {
                continue;
            };
            self.rows.swap(rank, pivot_at);
            let inv = self
                .field
                .invert(&self.entry(&self.rows[rank], col))
                .expect("nonzero pivot");
            let mut pivot_row = std::mem::take(&mut self.rows[rank]);
            self.scale_row(&mut pivot_row, &inv, col);
            self.rows[rank] = pivot_row;
            let (before, after) = self.rows.split_at_mut(rank + 1);
            let pivot_row = &before[rank];
            for row in after.iter_mut() {
                if !Self::entry_is_zero_static(self.field.degree(), row, col) {
                    let factor = Self::entry_static(self.field.degree(), row, col);
                    Self::row_axpy(&self.field, row, pivot_row, &factor, col);
                }
            }
            rank += 1;
        }
        rank
    }

    #[cfg(feature = "parallel")]
    fn rank_par_impl(&mut self) -> usize {
        use rayon::prelude::*;
        let mut rank = 0;
        let m = self.field.degree();
        for col in 0..self.cols {
            if rank == self.rows.len() {
                break;
            }
            let Some(pivot_at) = (rank..self.rows.len()).find(|&r| !self.entry_is_zero(&self.rows[r], col))
            else {
                continue;
            };
            self.rows.swap(rank, pivot_at);
            let inv = self
                .field
                .invert(&self.entry(&self.rows[rank], col))
                .expect("nonzero pivot");
            let mut pivot_row = std::mem::take(&mut self.rows[rank]);
            self.scale_row(&mut pivot_row, &inv, col);
            self.rows[rank] = pivot_row;
            let (before, after) = self.rows.split_at_mut(rank + 1);
            let pivot_row = &before[rank];
            let field = &self.field;
            after.par_iter_mut().for_each(|row| {
                if !Self::entry_is_zero_static(m, row, col) {
                    let factor = Self::entry_static(m, row, col);
                    Self::row_axpy(field, row, pivot_row, &factor, col);
                }
            });
            rank += 1;
        }
        rank
    }

    fn entry_is_zero_static(m: usize, row: &[u64], col: usize) -> bool {
        row[col * m..(col + 1) * m].iter().all(|&c| c == 0)
    }

    fn entry_static(m: usize, row: &[u64], col: usize) -> FqElem {
        FqElem(row[col * m..(col + 1) * m].to_vec())
    }
}

/// One nonzero kernel vector of a small square system, or None when the
/// matrix is invertible.
#[allow(clippy::needless_range_loop)]
pub fn kernel_vector(field: &Arc<FqField>, a: &[Vec<FqElem>]) -> Option<Vec<FqElem>> {
    let n = a.len();
    let mut rows: Vec<Vec<FqElem>> = a.to_vec();
    let mut pivot_col_of_row = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot_at) = (rank..n).find(|&r| !field.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, pivot_at);
        let inv = field.invert(&rows[rank][col]).expect("nonzero pivot");
        for j in 0..n {
            rows[rank][j] = field.mul(&rows[rank][j], &inv);
        }
        for r in 0..n {
            if r != rank && !field.is_zero(&rows[r][col]) {
                let factor = rows[r][col].clone();
                for j in 0..n {
                    let t = field.mul(&factor, &rows[rank][j]);
                    rows[r][j] = field.sub(&rows[r][j], &t);
                }
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
    }
    if rank == n {
        return None;
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let free_col = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![field.zero(); n];
    x[free_col] = field.one();
    for (row, &pc) in pivot_col_of_row.iter().enumerate() {
        // x[pc] = -rows[row][free_col]
        x[pc] = field.neg(&rows[row][free_col]);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_over_f3() {
        let f3 = FqField::prime(3);
        let mut m = FqMatrix::new(&f3, 3);
        m.push_row(vec![f3.from_u64(1), f3.from_u64(2), f3.from_u64(0)]);
        m.push_row(vec![f3.from_u64(2), f3.from_u64(1), f3.from_u64(0)]);
        m.push_row(vec![f3.from_u64(0), f3.from_u64(0), f3.from_u64(1)]);
        // row2 = 2*row1 mod 3, so rank is 2
        assert_eq!(m.rank_seq(), 2);
    }

    #[test]
    fn rank_over_f9_extension() {
        let f9 = FqField::extension(3, 2).unwrap();
        let w = f9.element_from_index(3);
        let mut m = FqMatrix::new(&f9, 2);
        m.push_row(vec![w.clone(), f9.one()]);
        m.push_row(vec![f9.mul(&w, &w), w.clone()]); // w * row0
        assert_eq!(m.clone().rank_seq(), 1);
        let mut m2 = FqMatrix::new(&f9, 2);
        m2.push_row(vec![w.clone(), f9.one()]);
        m2.push_row(vec![f9.one(), w]);
        assert_eq!(m2.rank_seq(), 2);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_rank_matches_sequential() {
        let f5 = FqField::prime(5);
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) % 5
        };
        let mut m = FqMatrix::new(&f5, 40);
        for _ in 0..120 {
            m.push_row((0..40).map(|_| f5.from_u64(next())).collect());
        }
        assert_eq!(m.clone().rank_seq(), m.rank_par());
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let f3 = FqField::prime(3);
        let a = vec![
            vec![f3.from_u64(1), f3.from_u64(1)],
            vec![f3.from_u64(2), f3.from_u64(2)],
        ];
        let k = kernel_vector(&f3, &a).unwrap();
        // check A k = 0 and k != 0
        assert!(k.iter().any(|c| !f3.is_zero(c)));
        for row in &a {
            let mut acc = f3.zero();
            for (c, x) in row.iter().zip(&k) {
                acc = f3.add(&acc, &f3.mul(c, x));
            }
            assert!(f3.is_zero(&acc));
        }
        let id = vec![
            vec![f3.one(), f3.zero()],
            vec![f3.zero(), f3.one()],
        ];
        assert!(kernel_vector(&f3, &id).is_none());
    }
}
