//! Compressed sparse row matrices and the handful of conversions the
//! simulator needs around them.
//!
//! A [`CsrMatrix`] is the classic three-vector layout: `value` holds the
//! nonzeros row by row, `col_id` the column of each stored value, and
//! `row_ptr` (length `rows + 1`) the offset of each row's first entry.
//! `row_ptr[i + 1] - row_ptr[i]` is therefore the nonzero count of row `i`,
//! which is exactly the quantity the modeled hardware derives from adjacent
//! row-pointer entries.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::error::{Error, Result};

/// Entries with magnitude at or below this floor are treated as zero by
/// [`matrices_equal`]. Stored zeros themselves are kept in the structure
/// (validation only warns about them).
pub const ZERO_FLOOR: f64 = 1e-12;

/// Desk-scale guard for dense materialization: `rows * cols` may not exceed
/// this when converting to a dense matrix.
pub const DENSE_CAPACITY_LIMIT: usize = 100_000_000;

/// Sparse matrix in compressed sparse row form.
///
/// Fields are public so that deliberately corrupted instances can be built
/// for validation; every constructor in this crate produces valid matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub rows: usize,
    pub cols: usize,
    pub value: Vec<f64>,
    pub col_id: Vec<usize>,
    pub row_ptr: Vec<usize>,
}

/// One entry of a matrix in coordinate form, 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub val: f64,
}

impl Triplet {
    pub fn new(row: usize, col: usize, val: f64) -> Self {
        Triplet { row, col, val }
    }
}

/// Row-major dense matrix, used as the oracle-side representation.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

/// One output row as parallel value/column vectors, sorted by column.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsrRow {
    pub col_id: Vec<usize>,
    pub value: Vec<f64>,
}

impl CsrRow {
    pub fn len(&self) -> usize {
        self.col_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.col_id.is_empty()
    }
}

impl CsrMatrix {
    /// Empty matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        CsrMatrix {
            rows,
            cols,
            value: Vec::new(),
            col_id: Vec::new(),
            row_ptr: vec![0; rows + 1],
        }
    }

    pub fn nnz(&self) -> usize {
        self.value.len()
    }

    /// Offset range of row `i` into `value` / `col_id`.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_ptr[i]..self.row_ptr[i + 1]
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn row_col_ids(&self, i: usize) -> &[usize] {
        &self.col_id[self.row_range(i)]
    }

    pub fn row_values(&self, i: usize) -> &[f64] {
        &self.value[self.row_range(i)]
    }

    /// Iterate row `i` as `(col, value)` pairs in ascending column order.
    pub fn iter_row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.row_col_ids(i)
            .iter()
            .copied()
            .zip(self.row_values(i).iter().copied())
    }

    /// All stored entries as triplets, row-major.
    pub fn triplets(&self) -> Vec<Triplet> {
        let mut out = Vec::with_capacity(self.nnz());
        for i in 0..self.rows {
            for (j, v) in self.iter_row(i) {
                out.push(Triplet::new(i, j, v));
            }
        }
        out
    }

    /// Assemble a matrix from per-row buffers produced in row order.
    pub fn from_rows(rows: usize, cols: usize, row_bufs: Vec<CsrRow>) -> Self {
        assert_eq!(row_bufs.len(), rows, "one buffer per row required");
        let nnz = row_bufs.iter().map(|r| r.len()).sum();
        let mut value = Vec::with_capacity(nnz);
        let mut col_id = Vec::with_capacity(nnz);
        let mut row_ptr = Vec::with_capacity(rows + 1);
        row_ptr.push(0);
        for row in row_bufs {
            col_id.extend_from_slice(&row.col_id);
            value.extend_from_slice(&row.value);
            row_ptr.push(col_id.len());
        }
        CsrMatrix {
            rows,
            cols,
            value,
            col_id,
            row_ptr,
        }
    }
}

/// Build a valid CSR matrix from coordinate entries.
///
/// Duplicate coordinates are summed (Matrix Market convention); column ids
/// end up strictly increasing within each row.
pub fn csr_from_triplets(triplets: &[Triplet], rows: usize, cols: usize) -> Result<CsrMatrix> {
    for t in triplets {
        if t.row >= rows || t.col >= cols {
            return Err(Error::Bounds(format!(
                "triplet ({}, {}) outside {}x{} matrix",
                t.row, t.col, rows, cols
            )));
        }
    }
    let mut sorted: Vec<Triplet> = triplets.to_vec();
    sorted.sort_by_key(|t| (t.row, t.col));

    let mut value = Vec::with_capacity(sorted.len());
    let mut col_id = Vec::with_capacity(sorted.len());
    let mut row_ptr = vec![0usize; rows + 1];
    let mut last: Option<(usize, usize)> = None;
    for t in sorted {
        if last == Some((t.row, t.col)) {
            *value.last_mut().unwrap() += t.val;
            continue;
        }
        value.push(t.val);
        col_id.push(t.col);
        row_ptr[t.row + 1] += 1;
        last = Some((t.row, t.col));
    }
    for i in 0..rows {
        row_ptr[i + 1] += row_ptr[i];
    }
    Ok(CsrMatrix {
        rows,
        cols,
        value,
        col_id,
        row_ptr,
    })
}

/// Severity of a validation finding. Stored zeros are legal but suspicious,
/// so they only warn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// The structural rules a CSR matrix can break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// `row_ptr[0] != 0`.
    RowPtrStart,
    /// `row_ptr` decreases somewhere.
    RowPtrMonotonicity,
    /// Array lengths disagree: `row_ptr` is not `rows + 1` long, or
    /// `value`/`col_id` lengths differ, or `row_ptr[rows]` misses them.
    LengthMismatch,
    /// A column id is `>= cols`.
    ColIdOutOfRange,
    /// Column ids within a row are out of order.
    ColIdUnsorted,
    /// The same column appears twice within a row.
    ColIdDuplicate,
    /// An explicitly stored 0.0 (warning only).
    StoredZero,
}

impl ViolationKind {
    pub fn severity(self) -> Severity {
        match self {
            ViolationKind::StoredZero => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ViolationKind::RowPtrStart => "row_ptr[0] != 0",
            ViolationKind::RowPtrMonotonicity => "row_ptr non-decreasing",
            ViolationKind::LengthMismatch => "length mismatch",
            ViolationKind::ColIdOutOfRange => "col_id out of range",
            ViolationKind::ColIdUnsorted => "strictly increasing col_id",
            ViolationKind::ColIdDuplicate => "duplicate col_id",
            ViolationKind::StoredZero => "stored zero",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

/// Outcome of [`validate_csr`]: every broken invariant, with stored zeros
/// downgraded to warnings.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// True when no error-severity violation was found (warnings allowed).
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    /// True when nothing at all was flagged.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.kind.severity() == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.kind.severity() == Severity::Warning)
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, detail: String) {
        self.violations.push(Violation { kind, detail });
    }
}

/// Check every structural invariant of `m` and report all findings.
///
/// Never panics, even on thoroughly corrupted inputs; per-row checks are
/// skipped for rows whose offsets cannot be trusted.
pub fn validate_csr(m: &CsrMatrix) -> ValidationReport {
    let mut report = ValidationReport::default();

    if m.value.len() != m.col_id.len() {
        report.push(
            ViolationKind::LengthMismatch,
            format!(
                "value has {} entries but col_id has {}",
                m.value.len(),
                m.col_id.len()
            ),
        );
    }
    if m.row_ptr.len() != m.rows + 1 {
        report.push(
            ViolationKind::LengthMismatch,
            format!(
                "row_ptr has length {}, expected rows + 1 = {}",
                m.row_ptr.len(),
                m.rows + 1
            ),
        );
    } else if m.row_ptr[m.rows] != m.col_id.len() {
        report.push(
            ViolationKind::LengthMismatch,
            format!(
                "row_ptr[{}] = {} but {} entries are stored",
                m.rows,
                m.row_ptr[m.rows],
                m.col_id.len()
            ),
        );
    }
    if m.row_ptr.first().copied().unwrap_or(0) != 0 {
        report.push(
            ViolationKind::RowPtrStart,
            format!("row_ptr[0] = {}, expected 0", m.row_ptr[0]),
        );
    }
    for w in m.row_ptr.windows(2).enumerate() {
        let (i, pair) = w;
        if pair[1] < pair[0] {
            report.push(
                ViolationKind::RowPtrMonotonicity,
                format!(
                    "row_ptr[{}] = {} > row_ptr[{}] = {}",
                    i,
                    pair[0],
                    i + 1,
                    pair[1]
                ),
            );
        }
    }

    // Per-row column checks, bounds-guarded so corrupt offsets cannot panic.
    let nrows = m.row_ptr.len().saturating_sub(1);
    for i in 0..nrows.min(m.rows) {
        let lo = m.row_ptr[i];
        let hi = m.row_ptr[i + 1];
        if lo > hi || hi > m.col_id.len() {
            continue;
        }
        let cols = &m.col_id[lo..hi];
        for (off, &c) in cols.iter().enumerate() {
            if c >= m.cols {
                report.push(
                    ViolationKind::ColIdOutOfRange,
                    format!("row {} has col_id {} >= cols {}", i, c, m.cols),
                );
            }
            if off > 0 {
                let prev = cols[off - 1];
                if c < prev {
                    report.push(
                        ViolationKind::ColIdUnsorted,
                        format!("row {} has col_id {} after {}", i, c, prev),
                    );
                } else if c == prev {
                    report.push(
                        ViolationKind::ColIdDuplicate,
                        format!("row {} stores col_id {} twice", i, c),
                    );
                }
            }
        }
    }

    for (idx, &v) in m.value.iter().enumerate() {
        if v == 0.0 {
            report.push(
                ViolationKind::StoredZero,
                format!("value[{}] is an explicit zero", idx),
            );
        }
    }

    report
}

/// Expand to a dense row-major matrix. Guarded against runaway sizes.
pub fn to_dense(m: &CsrMatrix) -> Result<DenseMatrix> {
    let cells = m
        .rows
        .checked_mul(m.cols)
        .filter(|&c| c <= DENSE_CAPACITY_LIMIT)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "{}x{} dense matrix exceeds the {} cell limit",
                m.rows, m.cols, DENSE_CAPACITY_LIMIT
            ))
        })?;
    let mut data = vec![0.0; cells];
    for i in 0..m.rows {
        for (j, v) in m.iter_row(i) {
            data[i * m.cols + j] = v;
        }
    }
    Ok(DenseMatrix {
        rows: m.rows,
        cols: m.cols,
        data,
    })
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Nonzero entries as triplets, row-major.
    pub fn nonzero_triplets(&self) -> Vec<Triplet> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.push(Triplet::new(i, j, v));
                }
            }
        }
        out
    }
}

/// Deterministic random matrix with close-to-exact nonzero count.
///
/// Exactly `round(density * rows * cols)` distinct cells are sampled
/// (Floyd's algorithm, so dense targets work too) and filled with values
/// uniform in `[1, 2)` — nonzero by construction. The same seed always
/// yields the same matrix.
pub fn generate_synthetic(rows: usize, cols: usize, density: f64, seed: u64) -> CsrMatrix {
    assert!(
        density > 0.0 && density <= 1.0,
        "density must be in (0, 1], got {}",
        density
    );
    let total = rows * cols;
    let target = ((density * rows as f64 * cols as f64).round() as usize).min(total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut chosen = HashSet::with_capacity(target * 2);
    let mut cells = Vec::with_capacity(target);
    for upper in (total - target)..total {
        let candidate = rng.gen_range(0..=upper);
        let pick = if chosen.insert(candidate) {
            candidate
        } else {
            chosen.insert(upper);
            upper
        };
        cells.push(pick);
    }
    // values are drawn in cell order so the result is independent of the
    // hash set's iteration order
    cells.sort_unstable();

    let mut value = Vec::with_capacity(target);
    let mut col_id = Vec::with_capacity(target);
    let mut row_ptr = vec![0usize; rows + 1];
    for cell in cells {
        let (i, j) = (cell / cols, cell % cols);
        value.push(rng.gen_range(1.0..2.0));
        col_id.push(j);
        row_ptr[i + 1] += 1;
    }
    for i in 0..rows {
        row_ptr[i + 1] += row_ptr[i];
    }
    CsrMatrix {
        rows,
        cols,
        value,
        col_id,
        row_ptr,
    }
}

/// Compare two matrices after dropping entries at or below [`ZERO_FLOOR`].
///
/// True iff the dimensions match, the surviving sparsity patterns are
/// identical, and each surviving value pair satisfies
/// `|a - b| <= rel_tol * max(|a|, |b|)`.
pub fn matrices_equal(a: &CsrMatrix, b: &CsrMatrix, rel_tol: f64) -> bool {
    if a.rows != b.rows || a.cols != b.cols {
        return false;
    }
    for i in 0..a.rows {
        let mut lhs = a.iter_row(i).filter(|(_, v)| v.abs() > ZERO_FLOOR);
        let mut rhs = b.iter_row(i).filter(|(_, v)| v.abs() > ZERO_FLOOR);
        loop {
            match (lhs.next(), rhs.next()) {
                (None, None) => break,
                (Some((ja, va)), Some((jb, vb))) => {
                    if ja != jb {
                        return false;
                    }
                    if (va - vb).abs() > rel_tol * va.abs().max(vb.abs()) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}
