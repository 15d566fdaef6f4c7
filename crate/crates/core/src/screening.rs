//! Necessary-condition screening for (C)DCM candidates.
//!
//! Screening is sound: a matrix that really is the (C)DCM of some graph is
//! never rejected. It makes no completeness claim.

use std::fmt;

use crate::graph::Orientation;
use crate::matrices::{dcm_to_cdcm, goodness, Candidate, CdcMatrix, DcMatrix, MatrixKind};
use crate::sequences::{erdos_gallai_check, DegreeSequence};

/// Rule identifiers carried by rejection records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    ColumnZero,
    Goodness,
    VeryGood,
    PredecessorCount,
    PredecessorSum,
    PredecessorSubset,
    ColumnGraphical,
    Conversion,
}

impl Rule {
    pub fn id(&self) -> &'static str {
        match self {
            Rule::ColumnZero => "column-zero",
            Rule::Goodness => "goodness",
            Rule::VeryGood => "very-good",
            Rule::PredecessorCount => "predecessor-count",
            Rule::PredecessorSum => "predecessor-sum",
            Rule::PredecessorSubset => "predecessor-subset",
            Rule::ColumnGraphical => "column-graphical",
            Rule::Conversion => "conversion",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub rule: Rule,
    pub row: Option<usize>,
    pub column: Option<usize>,
    pub detail: String,
}

/// Outcome of a screening run: rejected iff any failure was recorded. Notes
/// flag rows where the exact subset search exhausted its budget and the
/// relaxed verdict was kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScreenReport {
    pub failures: Vec<Failure>,
    pub budget_exhausted_rows: Vec<usize>,
}

impl ScreenReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn push(&mut self, rule: Rule, row: Option<usize>, column: Option<usize>, detail: String) {
        self.failures.push(Failure { rule, row, column, detail });
    }

    fn merge(&mut self, other: ScreenReport) {
        self.failures.extend(other.failures);
        self.budget_exhausted_rows.extend(other.budget_exhausted_rows);
    }

    /// Human-readable rendering: `PASS` or one `REJECT` line per failure.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for &row in &self.budget_exhausted_rows {
            out.push_str(&format!(
                "# note: row {row}: subset search budget exhausted, relaxed verdict kept\n"
            ));
        }
        if self.passed() {
            out.push_str("PASS\n");
            return out;
        }
        for f in &self.failures {
            out.push_str(&format!("REJECT {}", f.rule));
            if let Some(row) = f.row {
                out.push_str(&format!(" row={row}"));
            }
            if let Some(col) = f.column {
                out.push_str(&format!(" col={col}"));
            }
            out.push_str(&format!(" {}\n", f.detail));
        }
        out
    }

    /// Line-oriented key=value rendering, one record per failure.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for &row in &self.budget_exhausted_rows {
            out.push_str(&format!("note=budget-exhausted row={row}\n"));
        }
        for f in &self.failures {
            out.push_str(&format!("rule={}", f.rule));
            if let Some(row) = f.row {
                out.push_str(&format!(" row={row}"));
            }
            if let Some(col) = f.column {
                out.push_str(&format!(" col={col}"));
            }
            out.push_str(&format!(" detail={}\n", f.detail));
        }
        out
    }
}

/// How hard the predecessor-bound check tries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// Polynomial relaxation: candidate count and top-values sum only.
    Relaxed,
    /// Additionally search for an actual witness subset by branch and bound.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredecessorBoundConfig {
    pub mode: BoundMode,
    /// Node-expansion limit for the exact subset search, per row. On
    /// exhaustion the relaxed verdict is kept and the row is flagged.
    pub budget: u64,
}

impl Default for PredecessorBoundConfig {
    fn default() -> Self {
        PredecessorBoundConfig { mode: BoundMode::Relaxed, budget: 1_000_000 }
    }
}

/// In-degrees a true CDCM would imply: `m_1(i) - 1` per row (0 when the row
/// is too short or already malformed).
pub fn in_degrees(m: &CdcMatrix) -> Vec<u64> {
    m.rows()
        .iter()
        .map(|row| row.get(1).copied().unwrap_or(1).saturating_sub(1))
        .collect()
}

/// Structural row checks: column 0 all ones and every row good (very good
/// when `require_strong` asserts the graph would be strongly connected).
pub fn check_basic(m: &CdcMatrix, require_strong: bool) -> ScreenReport {
    let mut report = ScreenReport::default();
    for (i, row) in m.rows().iter().enumerate() {
        if row.first() != Some(&1) {
            report.push(
                Rule::ColumnZero,
                Some(i),
                Some(0),
                format!("expected 1, found {}", row.first().copied().unwrap_or(0)),
            );
            continue;
        }
        let verdict = goodness(row);
        if !verdict.is_good() {
            report.push(Rule::Goodness, Some(i), None, "row is not a good sequence".into());
        } else if require_strong && !verdict.is_very_good() {
            report.push(
                Rule::VeryGood,
                Some(i),
                None,
                "row plateau below n, impossible for a strongly connected graph".into(),
            );
        }
    }
    report
}

/// Predecessor bounds per row: with `v = m_1(i) - 1`, a true CDCM admits `v`
/// distinct other rows whose entries, shifted one column right, are termwise
/// below row `i` and whose shifted termwise sum dominates row `i`.
///
/// For directed candidates the sum side carries a `+1` self term: the
/// cumulative ball of radius p around i is covered by the balls of radius
/// p-1 around its predecessors plus possibly i itself (i lies in such a ball
/// only when some predecessor is reachable back from i, guaranteed for
/// undirected rows with p >= 2 but not in general).
pub fn check_predecessor_bounds(
    m: &CdcMatrix,
    cfg: &PredecessorBoundConfig,
    mode: Orientation,
) -> ScreenReport {
    let mut report = ScreenReport::default();
    let n = m.n();
    let rows = m.rows();
    let self_term: u128 = match mode {
        Orientation::Directed => 1,
        Orientation::Undirected => 0,
    };
    for i in 0..n {
        if n < 2 {
            break;
        }
        let nu = rows[i][1].saturating_sub(1);
        if nu == 0 {
            // A good row with m_1 = 1 is constant 1; nothing left to check.
            continue;
        }
        let nu = nu.min(n as u64) as usize;
        let candidates: Vec<usize> = (0..n)
            .filter(|&j| j != i && (1..n).all(|p| rows[j][p - 1] <= rows[i][p]))
            .collect();
        if candidates.len() < nu {
            report.push(
                Rule::PredecessorCount,
                Some(i),
                None,
                format!("needs {nu} feasible predecessor rows, only {} exist", candidates.len()),
            );
            continue;
        }
        // Relaxed sum bound: even the nu largest candidate values must cover.
        let mut relaxed_failed = false;
        for p in 2..n {
            let mut col: Vec<u64> = candidates.iter().map(|&j| rows[j][p - 1]).collect();
            col.sort_unstable_by(|a, b| b.cmp(a));
            let top: u128 = col.iter().take(nu).map(|&v| v as u128).sum();
            if top + self_term < rows[i][p] as u128 {
                report.push(
                    Rule::PredecessorSum,
                    Some(i),
                    Some(p),
                    format!(
                        "largest {nu} candidate sums reach {}, row needs {}",
                        top + self_term,
                        rows[i][p]
                    ),
                );
                relaxed_failed = true;
                break;
            }
        }
        if relaxed_failed || cfg.mode == BoundMode::Relaxed {
            continue;
        }
        match find_subset(rows, i, &candidates, nu, self_term, cfg.budget) {
            SubsetSearch::Found => {}
            SubsetSearch::Exhausted => {
                report.push(
                    Rule::PredecessorSubset,
                    Some(i),
                    None,
                    format!("no {nu}-subset of candidate rows dominates the row"),
                );
            }
            SubsetSearch::BudgetExceeded => {
                report.budget_exhausted_rows.push(i);
            }
        }
    }
    report
}

enum SubsetSearch {
    Found,
    Exhausted,
    BudgetExceeded,
}

/// Branch-and-bound search for a nu-subset of candidate rows whose shifted
/// termwise sum (plus the self term) covers row i at every column.
fn find_subset(
    rows: &[Vec<u64>],
    i: usize,
    candidates: &[usize],
    nu: usize,
    self_term: u128,
    budget: u64,
) -> SubsetSearch {
    let n = rows[i].len();
    // Shifted candidate values: cand_vals[c][p] participates at column p+1.
    let cand_vals: Vec<&[u64]> = candidates.iter().map(|&j| rows[j].as_slice()).collect();
    // Suffix maxima per column, for the optimistic bound.
    let mut suffix_max = vec![vec![0u64; n]; candidates.len() + 1];
    for c in (0..candidates.len()).rev() {
        for p in 0..n {
            suffix_max[c][p] = suffix_max[c + 1][p].max(cand_vals[c][p]);
        }
    }
    let mut search = SubsetSearcher {
        row: &rows[i],
        cand_vals,
        suffix_max,
        self_term,
        budget,
        spent: 0,
        sums: vec![0u128; n],
    };
    match search.descend(0, nu) {
        Some(true) => SubsetSearch::Found,
        Some(false) => SubsetSearch::Exhausted,
        None => SubsetSearch::BudgetExceeded,
    }
}

struct SubsetSearcher<'a> {
    row: &'a [u64],
    cand_vals: Vec<&'a [u64]>,
    suffix_max: Vec<Vec<u64>>,
    self_term: u128,
    budget: u64,
    spent: u64,
    sums: Vec<u128>,
}

impl SubsetSearcher<'_> {
    /// `None` means the budget tripped; otherwise whether a subset exists.
    fn descend(&mut self, next: usize, left: usize) -> Option<bool> {
        self.spent += 1;
        if self.spent > self.budget {
            return None;
        }
        let n = self.row.len();
        if left == 0 {
            return Some(
                (2..n).all(|p| self.sums[p - 1] + self.self_term >= self.row[p] as u128),
            );
        }
        if self.cand_vals.len() - next < left {
            return Some(false);
        }
        // Optimistic per-column bound with the remaining slots.
        for p in 2..n {
            let best = self.sums[p - 1]
                + (left as u128) * (self.suffix_max[next][p - 1] as u128)
                + self.self_term;
            if best < self.row[p] as u128 {
                return Some(false);
            }
        }
        for pick in [true, false] {
            let result = if pick {
                for p in 0..n {
                    self.sums[p] += self.cand_vals[next][p] as u128;
                }
                let r = self.descend(next + 1, left - 1);
                for p in 0..n {
                    self.sums[p] -= self.cand_vals[next][p] as u128;
                }
                r
            } else {
                self.descend(next + 1, left)
            };
            match result {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
        }
        Some(false)
    }
}

/// Every column k >= 1 of an undirected DCM, sorted nonincreasingly, must be
/// a graphical degree sequence (it is the degree sequence of the k-th power).
/// Rejects on the first failing column.
pub fn check_columns_graphical(n_mat: &DcMatrix) -> ScreenReport {
    let mut report = ScreenReport::default();
    let n = n_mat.n();
    for k in 1..n {
        let column: Vec<u64> = n_mat.rows().iter().map(|row| row[k]).collect();
        let d = DegreeSequence::new(column);
        if !erdos_gallai_check(&d) {
            report.push(
                Rule::ColumnGraphical,
                None,
                Some(k),
                "column is not a graphical degree sequence".into(),
            );
            break;
        }
    }
    report
}

/// Full screening pipeline: normalize to CDCM, run the structural checks,
/// predecessor bounds, and (for undirected DCM input) the column rule.
/// Failures aggregate; the result is a rejection iff any rule fired.
pub fn screen(
    candidate: Candidate<'_>,
    mode: Orientation,
    cfg: &PredecessorBoundConfig,
) -> ScreenReport {
    let mut report = ScreenReport::default();
    let cumulative = match candidate {
        Candidate::Cdcm(m) => m.clone(),
        Candidate::Dcm(n_mat) => match dcm_to_cdcm(n_mat) {
            Ok(m) => m,
            Err(err) => {
                report.push(Rule::Conversion, None, None, err.to_string());
                return report;
            }
        },
    };

    let basic = check_basic(&cumulative, false);
    let basic_passed = basic.passed();
    report.merge(basic);
    if basic_passed {
        report.merge(check_predecessor_bounds(&cumulative, cfg, mode));
    }
    if mode == Orientation::Undirected && candidate.kind() == MatrixKind::Dcm {
        if let Candidate::Dcm(n_mat) = candidate {
            report.merge(check_columns_graphical(n_mat));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::matrices::{cdcm_of, dcm_of};

    fn exact_cfg() -> PredecessorBoundConfig {
        PredecessorBoundConfig { mode: BoundMode::Exact, budget: 1_000_000 }
    }

    #[test]
    fn rejects_bad_column_zero() {
        let m = CdcMatrix::from_rows(vec![vec![2, 2], vec![1, 2]]).unwrap();
        let report = check_basic(&m, false);
        assert_eq!(report.failures[0].rule, Rule::ColumnZero);
    }

    #[test]
    fn rejects_non_good_row() {
        let m = CdcMatrix::from_rows(vec![
            vec![1, 2, 2, 3],
            vec![1, 2, 3, 4],
            vec![1, 1, 1, 1],
            vec![1, 4, 4, 4],
        ])
        .unwrap();
        let report = check_basic(&m, false);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].rule, Rule::Goodness);
        assert_eq!(report.failures[0].row, Some(0));
    }

    #[test]
    fn require_strong_flags_short_plateau() {
        let m = CdcMatrix::from_rows(vec![vec![1, 2, 2], vec![1, 2, 2], vec![1, 1, 1]]).unwrap();
        assert!(check_basic(&m, false).passed());
        let report = check_basic(&m, true);
        assert!(!report.passed());
        assert!(report.failures.iter().all(|f| f.rule == Rule::VeryGood));
    }

    #[test]
    fn directed_cycle_passes_predecessor_bounds() {
        // The directed 3-cycle needs the +1 self term on the sum side.
        let g = Graph::directed(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let m = cdcm_of(&g);
        for cfg in [PredecessorBoundConfig::default(), exact_cfg()] {
            let report = check_predecessor_bounds(&m, &cfg, Orientation::Directed);
            assert!(report.passed(), "{:?}", report.failures);
        }
    }

    #[test]
    fn directed_chain_passes_predecessor_bounds() {
        let g = Graph::directed(3, &[(2, 1), (1, 0)]).unwrap();
        let m = cdcm_of(&g);
        let report = check_predecessor_bounds(&m, &exact_cfg(), Orientation::Directed);
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn starved_row_fails_predecessor_bounds() {
        // Row 0 claims two in-neighbors and full growth, but the other rows
        // stay tiny: no subset can cover it.
        let m = CdcMatrix::from_rows(vec![
            vec![1, 3, 6, 6, 6, 6],
            vec![1, 1, 1, 1, 1, 1],
            vec![1, 1, 1, 1, 1, 1],
            vec![1, 1, 1, 1, 1, 1],
            vec![1, 1, 1, 1, 1, 1],
            vec![1, 1, 1, 1, 1, 1],
        ])
        .unwrap();
        let relaxed =
            check_predecessor_bounds(&m, &PredecessorBoundConfig::default(), Orientation::Directed);
        assert!(!relaxed.passed());
        assert_eq!(relaxed.failures[0].rule, Rule::PredecessorSum);
        let exact = check_predecessor_bounds(&m, &exact_cfg(), Orientation::Directed);
        assert!(!exact.passed());
    }

    #[test]
    fn columns_graphical_rejects_odd_column() {
        let n_mat = DcMatrix::from_rows(vec![
            vec![1, 3, 0],
            vec![1, 1, 0],
            vec![1, 1, 0],
        ])
        .unwrap();
        let report = check_columns_graphical(&n_mat);
        assert!(!report.passed());
        assert_eq!(report.failures[0].column, Some(1));
    }

    #[test]
    fn screen_rejects_all_zero() {
        let z = DcMatrix::from_rows(vec![vec![0, 0], vec![0, 0]]).unwrap();
        let report = screen(
            Candidate::Dcm(&z),
            Orientation::Directed,
            &PredecessorBoundConfig::default(),
        );
        assert!(!report.passed());
        assert_eq!(report.failures[0].rule, Rule::Conversion);
    }

    #[test]
    fn screen_accepts_true_matrices() {
        let g = Graph::undirected(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let n_mat = dcm_of(&g);
        let m_mat = cdcm_of(&g);
        for cfg in [PredecessorBoundConfig::default(), exact_cfg()] {
            assert!(screen(Candidate::Dcm(&n_mat), Orientation::Undirected, &cfg).passed());
            assert!(screen(Candidate::Cdcm(&m_mat), Orientation::Undirected, &cfg).passed());
        }
    }

    #[test]
    fn budget_exhaustion_keeps_relaxed_verdict() {
        let g = Graph::undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let m = cdcm_of(&g);
        let cfg = PredecessorBoundConfig { mode: BoundMode::Exact, budget: 1 };
        let report = check_predecessor_bounds(&m, &cfg, Orientation::Undirected);
        assert!(report.passed());
        assert!(!report.budget_exhausted_rows.is_empty());
    }

    #[test]
    fn report_rendering() {
        let mut report = ScreenReport::default();
        assert_eq!(report.render_text(), "PASS\n");
        report.push(Rule::Goodness, Some(3), None, "row is not a good sequence".into());
        assert_eq!(
            report.render_text(),
            "REJECT goodness row=3 row is not a good sequence\n"
        );
        assert_eq!(
            report.render_machine(),
            "rule=goodness row=3 detail=row is not a good sequence\n"
        );
    }
}
