//! Matrix Market (`.mtx`) ingestion.
//!
//! Supports the `coordinate` format with `real`, `integer`, or `pattern`
//! fields and `general` or `symmetric` symmetry — the subset SuiteSparse
//! matrices actually use. Indices are 1-based on disk and 0-based in memory.

use crate::csr::{csr_from_triplets, CsrMatrix, Triplet};
use crate::error::{Error, Result};

/// Parse Matrix Market text into a CSR matrix.
///
/// Symmetric inputs are expanded to general form (off-diagonal entries are
/// mirrored, diagonals stored once); duplicate coordinates are summed;
/// `pattern` entries get value 1.0.
pub fn parse_matrix_market(text: &str) -> Result<CsrMatrix> {
    let mut lines = text.lines();

    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty Matrix Market input".into()))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() < 4 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::Parse(format!(
            "malformed Matrix Market header: {:?}",
            header
        )));
    }
    let format = &fields[2];
    let field = &fields[3];
    let symmetry = fields.get(4).map(String::as_str).unwrap_or("general");

    if format != "coordinate" {
        return Err(Error::Unsupported(format!(
            "only coordinate format is supported, got {:?}",
            format
        )));
    }
    let pattern = match field.as_str() {
        "real" | "integer" => false,
        "pattern" => true,
        other => {
            return Err(Error::Unsupported(format!(
                "unsupported field type {:?}",
                other
            )))
        }
    };
    let symmetric = match symmetry {
        "general" => false,
        "symmetric" => true,
        other => {
            return Err(Error::Unsupported(format!(
                "unsupported symmetry {:?}",
                other
            )))
        }
    };

    // skip comments and blank lines up to the size line
    let mut size_line = None;
    for line in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_line = Some(trimmed);
        break;
    }
    let size_line =
        size_line.ok_or_else(|| Error::Parse("missing Matrix Market size line".into()))?;
    let dims: Vec<usize> = size_line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad size line token {:?}", tok)))
        })
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(Error::Parse(format!(
            "size line must be `rows cols entries`, got {:?}",
            size_line
        )));
    }
    let (rows, cols, declared) = (dims[0], dims[1], dims[2]);

    let mut triplets = Vec::with_capacity(if symmetric { declared * 2 } else { declared });
    let mut seen = 0usize;
    for line in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        let expected = if pattern { 2 } else { 3 };
        if toks.len() < expected {
            return Err(Error::Parse(format!("short entry line {:?}", trimmed)));
        }
        let i: usize = toks[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad row index {:?}", toks[0])))?;
        let j: usize = toks[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad column index {:?}", toks[1])))?;
        if i < 1 || i > rows || j < 1 || j > cols {
            return Err(Error::Bounds(format!(
                "entry ({}, {}) outside declared {}x{} shape",
                i, j, rows, cols
            )));
        }
        let v = if pattern {
            1.0
        } else {
            toks[2]
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad value {:?}", toks[2])))?
        };
        triplets.push(Triplet::new(i - 1, j - 1, v));
        if symmetric && i != j {
            triplets.push(Triplet::new(j - 1, i - 1, v));
        }
        seen += 1;
    }
    if seen != declared {
        return Err(Error::Parse(format!(
            "size line declared {} entries but {} were found",
            declared, seen
        )));
    }

    csr_from_triplets(&triplets, rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csr::validate_csr;

    #[test]
    fn parses_diagonal() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    % a comment\n\
                    2 2 2\n\
                    1 1 5.0\n\
                    2 2 3.0\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!((m.rows, m.cols), (2, 2));
        assert_eq!(m.value, vec![5.0, 3.0]);
        assert_eq!(m.col_id, vec![0, 1]);
        assert_eq!(m.row_ptr, vec![0, 1, 2]);
    }

    #[test]
    fn expands_symmetric_off_diagonal() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n\
                    2 2 1\n\
                    2 1 4.0\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.value, vec![4.0, 4.0]);
        assert_eq!(m.col_id, vec![1, 0]);
        assert_eq!(m.row_ptr, vec![0, 1, 2]);
    }

    #[test]
    fn symmetric_diagonal_stored_once() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n\
                    2 2 2\n\
                    1 1 2.0\n\
                    2 1 4.0\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.row_values(0), &[2.0, 4.0]);
    }

    #[test]
    fn parses_two_entry_fixture_file() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    4 4 2\n\
                    1 2 1.5\n\
                    1 3 2.5\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.row_values(0), &[1.5, 2.5]);
        assert_eq!(m.row_col_ids(0), &[1, 2]);
        assert!(validate_csr(&m).is_clean());
    }

    #[test]
    fn parse_validate_dense_triplet_round_trip() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    3 4 3\n\
                    1 2 1.5\n\
                    2 4 -2.0\n\
                    3 1 0.25\n";
        let parsed = parse_matrix_market(text).unwrap();
        assert!(validate_csr(&parsed).is_clean());
        let dense = crate::csr::to_dense(&parsed).unwrap();
        let back = crate::csr::csr_from_triplets(&dense.nonzero_triplets(), 3, 4).unwrap();
        assert!(crate::csr::matrices_equal(&parsed, &back, 0.0));
    }

    #[test]
    fn pattern_entries_become_ones() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n\
                    2 3 2\n\
                    1 3\n\
                    2 1\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.value, vec![1.0, 1.0]);
    }

    #[test]
    fn sums_duplicate_coordinates() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    1 1 2\n\
                    1 1 1.0\n\
                    1 1 2.0\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.value, vec![3.0]);
    }

    #[test]
    fn rejects_malformed_header() {
        let err = parse_matrix_market("%%NotMatrixMarket nope\n1 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn rejects_complex_field() {
        let err = parse_matrix_market(
            "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1.0 0.0\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn rejects_out_of_range_coordinate() {
        let err =
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n")
                .unwrap_err();
        assert!(matches!(err, Error::Bounds(_)));
    }

    #[test]
    fn rejects_entry_count_mismatch() {
        let err =
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n")
                .unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }
}
