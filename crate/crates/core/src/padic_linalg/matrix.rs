use std::fmt;

use crate::error::{Error, Result};

use super::context::PAdicContext;

/// Dense matrix of residues modulo `p^N`, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ZpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    ctx: PAdicContext,
}

impl fmt::Debug for ZpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZpMatrix {}x{} over {:?}", self.rows, self.cols, self.ctx)?;
        for i in 0..self.rows {
            let row: Vec<i128> = self.row(i).iter().map(|&x| self.ctx.lift(x)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl ZpMatrix {
    pub fn zeros(ctx: &PAdicContext, rows: usize, cols: usize) -> Self {
        ZpMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            ctx: *ctx,
        }
    }

    pub fn identity(ctx: &PAdicContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        let one = ctx.from_u64(1);
        for i in 0..n {
            m.data[i * n + i] = one;
        }
        m
    }

    pub fn from_fn(ctx: &PAdicContext, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(ctx.from_u64(f(i, j)));
            }
        }
        ZpMatrix {
            rows,
            cols,
            data,
            ctx: *ctx,
        }
    }

    /// Rows of signed integers, reduced into the context.
    pub fn from_i64_rows(ctx: &PAdicContext, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self::from_fn(ctx, rows.len(), cols, |i, j| ctx.from_i64(rows[i][j])))
    }

    pub fn diagonal(ctx: &PAdicContext, rows: usize, cols: usize, diag: &[u64]) -> Self {
        let mut m = Self::zeros(ctx, rows, cols);
        for (i, &d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, ctx.from_u64(d));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }
    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_same_shape(&self, other: &ZpMatrix, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ZpMatrix) -> Result<ZpMatrix> {
        self.check_same_shape(other, "add")?;
        let ctx = self.ctx;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ctx.add(a, b)).collect();
        Ok(ZpMatrix { data, ..self.clone() })
    }

    pub fn sub(&self, other: &ZpMatrix) -> Result<ZpMatrix> {
        self.check_same_shape(other, "sub")?;
        let ctx = self.ctx;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ctx.sub(a, b)).collect();
        Ok(ZpMatrix { data, ..self.clone() })
    }

    pub fn scale(&self, c: u64) -> ZpMatrix {
        let ctx = self.ctx;
        let data = self.data.iter().map(|&a| ctx.mul(a, c)).collect();
        ZpMatrix { data, ..self.clone() }
    }

    /// `self - I` for a square matrix.
    pub fn minus_identity(&self) -> ZpMatrix {
        assert_eq!(self.rows, self.cols, "minus_identity needs a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = self.ctx.sub(out.get(i, i), 1 % self.ctx.modulus());
            out.set(i, i, v);
        }
        out
    }

    pub fn mul(&self, other: &ZpMatrix) -> Result<ZpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ctx = self.ctx;
        let m = ctx.modulus() as u128;
        let n = other.cols;
        let mut out = vec![0u64; self.rows * n];
        // Accumulate in u128 and reduce lazily: each product is below 2^124,
        // so at most 15 products can be summed before a reduction.
        let mut acc = vec![0u128; n];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut pending = 0;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let a = a as u128;
                let row = &other.data[k * n..(k + 1) * n];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot += a * b as u128;
                }
                pending += 1;
                if pending == 15 {
                    acc.iter_mut().for_each(|s| *s %= m);
                    pending = 0;
                }
            }
            for (o, s) in out[i * n..(i + 1) * n].iter_mut().zip(&acc) {
                *o = (s % m) as u64;
            }
        }
        Ok(ZpMatrix {
            rows: self.rows,
            cols: n,
            data: out,
            ctx,
        })
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let ctx = self.ctx;
        (0..self.rows)
            .map(|i| {
                let mut s: u128 = 0;
                let m = ctx.modulus() as u128;
                for (k, &a) in self.row(i).iter().enumerate() {
                    s = (s + a as u128 * v[k] as u128) % m;
                }
                s as u64
            })
            .collect()
    }

    /// Square-and-multiply power.
    pub fn pow(&self, mut exp: u64) -> ZpMatrix {
        assert_eq!(self.rows, self.cols, "pow needs a square matrix");
        let mut acc = ZpMatrix::identity(&self.ctx, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("square");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("square");
            }
        }
        acc
    }

    pub fn transpose(&self) -> ZpMatrix {
        ZpMatrix::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hconcat(&self, other: &ZpMatrix) -> Result<ZpMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hconcat: {} rows vs {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        Ok(ZpMatrix::from_fn(&self.ctx, self.rows, cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    pub fn vconcat(&self, other: &ZpMatrix) -> Result<ZpMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vconcat: {} cols vs {} cols",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ZpMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
            ctx: self.ctx,
        })
    }

    pub fn from_columns(ctx: &PAdicContext, rows: usize, columns: &[Vec<u64>]) -> ZpMatrix {
        let mut m = ZpMatrix::zeros(ctx, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> ZpMatrix {
        ZpMatrix::from_fn(&self.ctx, rows.len(), self.cols, |i, j| self.get(rows[i], j))
    }

    pub fn select_columns(&self, cols: &[usize]) -> ZpMatrix {
        ZpMatrix::from_fn(&self.ctx, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &ZpMatrix) -> ZpMatrix {
        let mut out = ZpMatrix::zeros(&self.ctx, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Block matrix assembled from a grid of equally sized blocks.
    pub fn from_blocks(ctx: &PAdicContext, blocks: &[Vec<ZpMatrix>], block_rows: usize, block_cols: usize) -> ZpMatrix {
        let br = blocks.len();
        let bc = blocks.first().map_or(0, Vec::len);
        let mut out = ZpMatrix::zeros(ctx, br * block_rows, bc * block_cols);
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                debug_assert_eq!((block.rows, block.cols), (block_rows, block_cols));
                for i in 0..block_rows {
                    let dst = (bi * block_rows + i) * out.cols + bj * block_cols;
                    out.data[dst..dst + block_cols].copy_from_slice(block.row(i));
                }
            }
        }
        out
    }

    /// Reinterpret the entries (via their symmetric lifts) in another context.
    pub fn to_context(&self, ctx: &PAdicContext) -> ZpMatrix {
        let data = self.data.iter().map(|&a| self.ctx.reduce_into(a, ctx)).collect();
        ZpMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
            ctx: *ctx,
        }
    }

    /// Minimum valuation over all entries; `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<u32> {
        self.data.iter().filter_map(|&a| self.ctx.valuation(a)).min()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: u64) {
        if factor == 0 {
            return;
        }
        let ctx = self.ctx;
        let c = self.cols;
        for j in 0..c {
            let s = self.data[src * c + j];
            if s != 0 {
                let d = self.data[dst * c + j];
                self.data[dst * c + j] = ctx.mul_add(d, factor, s);
            }
        }
    }

    /// col[dst] += factor * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, factor: u64) {
        if factor == 0 {
            return;
        }
        let ctx = self.ctx;
        let c = self.cols;
        for i in 0..self.rows {
            let s = self.data[i * c + src];
            if s != 0 {
                let d = self.data[i * c + dst];
                self.data[i * c + dst] = ctx.mul_add(d, factor, s);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, factor: u64) {
        let ctx = self.ctx;
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = ctx.mul(*x, factor);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, factor: u64) {
        let ctx = self.ctx;
        let c = self.cols;
        for i in 0..self.rows {
            self.data[i * c + j] = ctx.mul(self.data[i * c + j], factor);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PAdicContext {
        PAdicContext::new(3, 8, 2).unwrap()
    }

    #[test]
    fn multiplication_and_power() {
        let c = ctx();
        let a = ZpMatrix::from_i64_rows(&c, &[vec![1, 1], vec![0, 1]]).unwrap();
        let a5 = a.pow(5);
        assert_eq!(a5, ZpMatrix::from_i64_rows(&c, &[vec![1, 5], vec![0, 1]]).unwrap());
        let b = ZpMatrix::from_i64_rows(&c, &[vec![2, -1], vec![3, 4]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, ZpMatrix::from_i64_rows(&c, &[vec![5, 3], vec![3, 4]]).unwrap());
    }

    #[test]
    fn lazy_reduction_matches_naive() {
        let c = PAdicContext::new(3, 39, 2).unwrap();
        let big = c.modulus() - 1;
        let a = ZpMatrix::from_fn(&c, 3, 40, |_, _| big);
        let b = ZpMatrix::from_fn(&c, 40, 2, |_, _| big);
        let ab = a.mul(&b).unwrap();
        // (-1)(-1) summed 40 times
        assert!(ab.as_slice().iter().all(|&x| x == 40));
    }

    #[test]
    fn shape_errors() {
        let c = ctx();
        let a = ZpMatrix::zeros(&c, 2, 3);
        assert!(a.mul(&a).is_err());
        assert!(a.add(&ZpMatrix::zeros(&c, 3, 2)).is_err());
        assert!(a.hconcat(&ZpMatrix::zeros(&c, 3, 1)).is_err());
    }

    #[test]
    fn blocks() {
        let c = ctx();
        let i2 = ZpMatrix::identity(&c, 2);
        let z = ZpMatrix::zeros(&c, 2, 2);
        let m = ZpMatrix::from_blocks(&c, &[vec![i2.clone(), z.clone()], vec![z, i2]], 2, 2);
        assert_eq!(m, ZpMatrix::identity(&c, 4));
    }
}
