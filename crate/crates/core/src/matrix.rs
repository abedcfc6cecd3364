//! Small square matrices over W with unit-pivot Gaussian inversion.

use crate::error::{Error, Result};
use crate::scalar::{Ctx, PadicScalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WMatrix {
    ctx: Ctx,
    n: usize,
    rows: Vec<Vec<PadicScalar>>,
}

impl WMatrix {
    pub fn from_rows(ctx: &Ctx, rows: Vec<Vec<PadicScalar>>) -> Result<WMatrix> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::ShapeMismatch("matrix must be square".into()));
            }
            for entry in row {
                if !entry.context().same_as(ctx) {
                    return Err(Error::ContextMismatch);
                }
            }
        }
        Ok(WMatrix { ctx: ctx.clone(), n, rows })
    }

    pub fn from_integers(ctx: &Ctx, rows: &[Vec<i64>]) -> Result<WMatrix> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| PadicScalar::from_integer(ctx, x)).collect())
            .collect();
        Self::from_rows(ctx, rows)
    }

    pub fn identity(ctx: &Ctx, n: usize) -> WMatrix {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            PadicScalar::one(ctx)
                        } else {
                            PadicScalar::zero(ctx)
                        }
                    })
                    .collect()
            })
            .collect();
        WMatrix { ctx: ctx.clone(), n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn entry(&self, i: usize, j: usize) -> &PadicScalar {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<PadicScalar>] {
        &self.rows
    }

    /// Every entry must be a unit or have a zero representative.
    pub fn entries_unit_or_zero(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|c| c.is_unit() || c.is_zero_rep())
    }

    /// Inverse over the local ring W. Fails with `NonUnitDeterminant` when
    /// no unit pivot can be found in some column.
    #[allow(clippy::needless_range_loop)]
    pub fn invert(&self) -> Result<WMatrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = WMatrix::identity(&self.ctx, n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r][col].is_unit())
                .ok_or(Error::NonUnitDeterminant)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = a[col][col].invert()?;
            for j in 0..n {
                a[col][j] = a[col][j].mul_raw(&scale);
                inv[col][j] = inv[col][j].mul_raw(&scale);
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero_rep() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let t = factor.mul_raw(&a[col][j]);
                    a[r][j] = a[r][j].sub(&t)?;
                    let t = factor.mul_raw(&inv[col][j]);
                    inv[r][j] = inv[r][j].sub(&t)?;
                }
            }
        }
        Ok(WMatrix { ctx: self.ctx.clone(), n, rows: inv })
    }

    #[allow(clippy::needless_range_loop)]
    pub fn mul(&self, other: &WMatrix) -> Result<WMatrix> {
        if self.n != other.n || !self.ctx.same_as(&other.ctx) {
            return Err(Error::ShapeMismatch("matrix size mismatch".into()));
        }
        let n = self.n;
        let mut rows = vec![vec![PadicScalar::zero(&self.ctx); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = PadicScalar::zero(&self.ctx);
                for k in 0..n {
                    acc = acc.add(&self.rows[i][k].mul_raw(&other.rows[k][j]))?;
                }
                rows[i][j] = acc;
            }
        }
        Ok(WMatrix { ctx: self.ctx.clone(), n, rows })
    }

    pub fn with_precision(&self, target: &Ctx) -> Result<WMatrix> {
        let move_scalar = |c: &PadicScalar| {
            if target.precision() >= self.ctx.precision() {
                c.lift_precision(target)
            } else {
                c.reduce_precision(target)
            }
        };
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(move_scalar).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        WMatrix::from_rows(target, rows)
    }
}
