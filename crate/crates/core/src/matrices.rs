//! DCM/CDCM construction, conversions, canonical form, and the goodness
//! predicate on integer sequences.
//!
//! Matrices are stored dense, full n-by-n including trailing zero columns.
//! A matrix value is a *candidate*: squareness is enforced at construction,
//! the semantic invariants of true (C)DCMs are checked by `screening`.

use std::fmt;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("column 0 must be all ones, row {row} starts with {value}")]
    MalformedColumnZero { row: usize, value: u64 },
    #[error("row {row} decreases at column {col}; not a cumulative matrix")]
    DecreasingRow { row: usize, col: usize },
    #[error("row {row} overflows while accumulating at column {col}")]
    Overflow { row: usize, col: usize },
    #[error("empty matrix text")]
    EmptyText,
    #[error("line {0}: expected kind marker `DCM` or `CDCM`")]
    BadKindMarker(usize),
    #[error("line {0}: expected whitespace-separated non-negative integers")]
    BadRow(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Dcm,
    Cdcm,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixKind::Dcm => write!(f, "DCM"),
            MatrixKind::Cdcm => write!(f, "CDCM"),
        }
    }
}

fn check_square(rows: &[Vec<u64>]) -> Result<(), MatrixError> {
    let n = rows.len();
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(MatrixError::NotSquare { rows: n, row, cols: r.len() });
        }
    }
    Ok(())
}

/// Rows sorted ascending lexicographically; the canonical representative of
/// a matrix's row-permutation class.
pub fn canonical_rows(rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut sorted = rows.to_vec();
    sorted.sort();
    sorted
}

macro_rules! count_matrix {
    ($name:ident, $kind:expr) => {
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name {
            rows: Vec<Vec<u64>>,
        }

        impl $name {
            pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self, MatrixError> {
                check_square(&rows)?;
                Ok(Self { rows })
            }

            pub fn n(&self) -> usize {
                self.rows.len()
            }

            pub fn rows(&self) -> &[Vec<u64>] {
                &self.rows
            }

            pub fn row(&self, i: usize) -> &[u64] {
                &self.rows[i]
            }

            pub fn kind(&self) -> MatrixKind {
                $kind
            }

            /// Rows sorted ascending lexicographically. Idempotent.
            pub fn canonicalize(&self) -> Self {
                Self { rows: canonical_rows(&self.rows) }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                writeln!(f, "{}", $kind)?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                    writeln!(f, "{}", cells.join(" "))?;
                }
                Ok(())
            }
        }
    };
}

count_matrix!(DcMatrix, MatrixKind::Dcm);
count_matrix!(CdcMatrix, MatrixKind::Cdcm);

/// Borrowed candidate matrix of either kind, for screening and recognition.
#[derive(Debug, Clone, Copy)]
pub enum Candidate<'a> {
    Dcm(&'a DcMatrix),
    Cdcm(&'a CdcMatrix),
}

impl<'a> Candidate<'a> {
    pub fn kind(&self) -> MatrixKind {
        match self {
            Candidate::Dcm(_) => MatrixKind::Dcm,
            Candidate::Cdcm(_) => MatrixKind::Cdcm,
        }
    }

    pub fn rows(&self) -> &'a [Vec<u64>] {
        match self {
            Candidate::Dcm(m) => m.rows(),
            Candidate::Cdcm(m) => m.rows(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows().len()
    }
}

/// The distance-count matrix: entry `(i, k)` is the number of nodes at
/// distance exactly `k` to node `i`.
pub fn dcm_of(g: &Graph) -> DcMatrix {
    let n = g.node_count();
    let rows = (0..n)
        .map(|i| g.distances_to(i).expect("node in range").level_counts())
        .collect();
    DcMatrix { rows }
}

/// The cumulative distance-count matrix: entry `(i, k)` is the number of
/// nodes at distance at most `k` to node `i`.
pub fn cdcm_of(g: &Graph) -> CdcMatrix {
    dcm_to_cdcm(&dcm_of(g)).expect("freshly computed DCM has column 0 all ones")
}

/// Row-wise prefix sums.
pub fn dcm_to_cdcm(n_mat: &DcMatrix) -> Result<CdcMatrix, MatrixError> {
    let mut rows = Vec::with_capacity(n_mat.n());
    for (i, src) in n_mat.rows().iter().enumerate() {
        match src.first() {
            Some(&1) => {}
            Some(&value) => return Err(MatrixError::MalformedColumnZero { row: i, value }),
            None => {}
        }
        let mut acc: u64 = 0;
        let mut row = Vec::with_capacity(src.len());
        for (col, &v) in src.iter().enumerate() {
            acc = acc
                .checked_add(v)
                .ok_or(MatrixError::Overflow { row: i, col })?;
            row.push(acc);
        }
        rows.push(row);
    }
    Ok(CdcMatrix { rows })
}

/// Row-wise first differences, with the column-0 entry kept as-is.
pub fn cdcm_to_dcm(m_mat: &CdcMatrix) -> Result<DcMatrix, MatrixError> {
    let mut rows = Vec::with_capacity(m_mat.n());
    for (i, src) in m_mat.rows().iter().enumerate() {
        let mut row = Vec::with_capacity(src.len());
        let mut prev: u64 = 0;
        for (col, &v) in src.iter().enumerate() {
            if v < prev {
                return Err(MatrixError::DecreasingRow { row: i, col });
            }
            row.push(v - prev);
            prev = v;
        }
        rows.push(row);
    }
    Ok(DcMatrix { rows })
}

/// Verdict of the good-sequence predicate: starts at 1, strictly increases,
/// then stays constant at some plateau value `k <= n`; very good iff `k = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoodnessVerdict {
    NotGood,
    Good {
        /// The constant value `k` the sequence reaches.
        plateau_value: u64,
        /// First index `j` at which the plateau value is attained.
        plateau_start: usize,
        very_good: bool,
    },
}

impl GoodnessVerdict {
    pub fn is_good(&self) -> bool {
        matches!(self, GoodnessVerdict::Good { .. })
    }

    pub fn is_very_good(&self) -> bool {
        matches!(self, GoodnessVerdict::Good { very_good: true, .. })
    }
}

/// Classify a sequence per the good-sequence definition. Sequences that are
/// empty, do not start at 1, or whose plateau exceeds the length are not good.
pub fn goodness(seq: &[u64]) -> GoodnessVerdict {
    if seq.is_empty() || seq[0] != 1 {
        return GoodnessVerdict::NotGood;
    }
    let mut j = 0;
    while j + 1 < seq.len() && seq[j + 1] > seq[j] {
        j += 1;
    }
    let k = seq[j];
    if seq[j..].iter().any(|&v| v != k) {
        return GoodnessVerdict::NotGood;
    }
    if k > seq.len() as u64 {
        return GoodnessVerdict::NotGood;
    }
    GoodnessVerdict::Good {
        plateau_value: k,
        plateau_start: j,
        very_good: k == seq.len() as u64,
    }
}

/// Parsed matrix text: the kind marker plus raw square rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedMatrix {
    pub kind: MatrixKind,
    pub rows: Vec<Vec<u64>>,
}

impl ParsedMatrix {
    pub fn into_dcm(self) -> Result<DcMatrix, MatrixError> {
        DcMatrix::from_rows(self.rows)
    }

    pub fn into_cdcm(self) -> Result<CdcMatrix, MatrixError> {
        CdcMatrix::from_rows(self.rows)
    }
}

/// Parse the matrix text format: a `DCM` or `CDCM` marker line, then n lines
/// of n whitespace-separated non-negative integers; `#` lines are comments.
pub fn parse_matrix(text: &str) -> Result<ParsedMatrix, MatrixError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));

    let (marker_no, marker) = lines.next().ok_or(MatrixError::EmptyText)?;
    let kind = match marker {
        "DCM" => MatrixKind::Dcm,
        "CDCM" => MatrixKind::Cdcm,
        _ => return Err(MatrixError::BadKindMarker(marker_no)),
    };

    let mut rows = Vec::new();
    for (line_no, line) in lines {
        let row: Result<Vec<u64>, _> = line.split_whitespace().map(str::parse).collect();
        match row {
            Ok(row) => rows.push(row),
            Err(_) => return Err(MatrixError::BadRow(line_no)),
        }
    }
    check_square(&rows)?;
    Ok(ParsedMatrix { kind, rows })
}
