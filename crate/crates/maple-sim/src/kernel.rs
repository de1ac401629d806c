//! Row-wise-product (Gustavson) sparse matrix multiplication on CSR, plus
//! an independent dense triple-loop oracle.
//!
//! Multiplying row `i` of `A` works entirely off CSR metadata: the columns
//! of `A`'s row (`k'` indices) select rows of `B`, whose columns (`j'`
//! indices) address the output row. Each product
//! `A.value[i][k'] * B.value[k'][j']` is a partial sum accumulated into
//! slot `j'` of a row accumulator, and the finished row of `C` is the
//! accumulator drained in ascending column order.
//!
//! Accumulation order is pinned to ascending `k'`, then ascending `j'`, so
//! floating-point results are reproducible and bit-identical across every
//! execution model in this crate.

use crate::csr::{CsrMatrix, CsrRow, DenseMatrix, DENSE_CAPACITY_LIMIT};
use crate::error::{Error, Result};

/// Dense accumulator for a single output row.
///
/// Mirrors a register file with one slot per output column: `occupied`
/// marks slots written during the current row and `touched` remembers them
/// in insertion order so clearing is O(nnz), not O(width). Slots that
/// cancel to exactly 0.0 stay occupied — the output keeps the entry.
#[derive(Debug, Clone)]
pub struct SparseRowAccumulator {
    width: usize,
    slots: Vec<f64>,
    occupied: Vec<bool>,
    touched: Vec<usize>,
}

impl SparseRowAccumulator {
    pub fn new(width: usize) -> Self {
        SparseRowAccumulator {
            width,
            slots: vec![0.0; width],
            occupied: vec![false; width],
            touched: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of distinct columns written since the last clear/drain.
    pub fn occupied_count(&self) -> usize {
        self.touched.len()
    }

    pub fn accumulate(&mut self, col: usize, v: f64) {
        if self.occupied[col] {
            self.slots[col] += v;
        } else {
            self.occupied[col] = true;
            self.slots[col] = v;
            self.touched.push(col);
        }
    }

    pub fn clear(&mut self) {
        for &col in &self.touched {
            self.occupied[col] = false;
            self.slots[col] = 0.0;
        }
        self.touched.clear();
    }

    /// Extract the occupied slots in ascending column order and reset.
    pub fn drain_sorted(&mut self) -> CsrRow {
        self.touched.sort_unstable();
        let mut row = CsrRow {
            col_id: Vec::with_capacity(self.touched.len()),
            value: Vec::with_capacity(self.touched.len()),
        };
        for &col in &self.touched {
            row.col_id.push(col);
            row.value.push(self.slots[col]);
            self.occupied[col] = false;
            self.slots[col] = 0.0;
        }
        self.touched.clear();
        row
    }
}

/// The `k'` indices of row `i`: the column ids of `A`'s row, which select
/// the rows of `B` that participate in the product.
pub fn derive_k_indices(a: &CsrMatrix, i: usize) -> Result<&[usize]> {
    if i >= a.rows {
        return Err(Error::Bounds(format!(
            "row {} out of range for {} rows",
            i, a.rows
        )));
    }
    Ok(a.row_col_ids(i))
}

/// For each `k'` of row `i`, the `j'` indices it contributes: the column
/// ids of `B`'s row `k'`. Pairs with empty `j'` lists are retained;
/// filtering them is the intersection logic's job.
pub fn derive_j_indices<'b>(
    a: &CsrMatrix,
    b: &'b CsrMatrix,
    i: usize,
) -> Result<Vec<(usize, &'b [usize])>> {
    check_shapes(a, b)?;
    Ok(derive_k_indices(a, i)?
        .iter()
        .map(|&k| (k, b.row_col_ids(k)))
        .collect())
}

fn check_shapes(a: &CsrMatrix, b: &CsrMatrix) -> Result<()> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

/// Accumulate row `i` of `A * B` into `acc`, visiting products in
/// ascending `k'` then ascending `j'` order. Returns the number of scalar
/// multiplications performed. The caller provides a cleared accumulator of
/// width `B.cols`.
pub fn row_product(
    a: &CsrMatrix,
    b: &CsrMatrix,
    i: usize,
    acc: &mut SparseRowAccumulator,
) -> Result<usize> {
    row_product_with(a, b, i, acc, |_, _| {})
}

/// [`row_product`] with an observer called once per product as
/// `(k', j')`; used to audit exactly which partial sums were formed.
pub fn row_product_with(
    a: &CsrMatrix,
    b: &CsrMatrix,
    i: usize,
    acc: &mut SparseRowAccumulator,
    mut observe: impl FnMut(usize, usize),
) -> Result<usize> {
    check_shapes(a, b)?;
    if acc.width() != b.cols {
        return Err(Error::Shape(format!(
            "accumulator width {} does not match B.cols {}",
            acc.width(),
            b.cols
        )));
    }
    if i >= a.rows {
        return Err(Error::Bounds(format!(
            "row {} out of range for {} rows",
            i, a.rows
        )));
    }
    let mut multiplications = 0;
    for (k_prime, a_val) in a.iter_row(i) {
        for (j_prime, b_val) in b.iter_row(k_prime) {
            acc.accumulate(j_prime, a_val * b_val);
            observe(k_prime, j_prime);
            multiplications += 1;
        }
    }
    Ok(multiplications)
}

/// Full Gustavson multiply: every row of `A` times the matching rows of
/// `B`, one accumulator pass per row, rows drained in column order.
///
/// Entries that cancel to exactly 0.0 are kept in the output pattern so
/// event-count predictions stay deterministic; value comparisons neutralize
/// them through [`crate::csr::matrices_equal`]'s zero floor.
pub fn spgemm_reference(a: &CsrMatrix, b: &CsrMatrix) -> Result<CsrMatrix> {
    check_shapes(a, b)?;
    let mut acc = SparseRowAccumulator::new(b.cols);
    let mut rows = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        row_product(a, b, i, &mut acc)?;
        rows.push(acc.drain_sorted());
    }
    Ok(CsrMatrix::from_rows(a.rows, b.cols, rows))
}

/// Textbook dense triple loop, accumulating over `k` in index order.
/// Deliberately independent of the CSR path so it can act as its oracle.
pub fn dense_matmul_oracle(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let cells = a
        .rows
        .checked_mul(b.cols)
        .filter(|&c| c <= DENSE_CAPACITY_LIMIT);
    if cells.is_none() {
        return Err(Error::Capacity(format!(
            "{}x{} result exceeds the dense cell limit",
            a.rows, b.cols
        )));
    }
    let mut c = DenseMatrix::zero(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let a_ik = a.get(i, k);
            if a_ik == 0.0 {
                continue;
            }
            for j in 0..b.cols {
                let prod = a_ik * b.get(k, j);
                if prod != 0.0 {
                    c.data[i * b.cols + j] += prod;
                }
            }
        }
    }
    Ok(c)
}
