//! The three-partition problem and its matrix/graph reduction artifacts.
//!
//! An instance is a nonincreasing list of 3m positive integers with total s
//! and per-group target t = s/m. `build_matrix` emits the candidate matrix
//! whose DCM-hood encodes the partition question; `build_gadget` realizes a
//! witness graph from a concrete solution.

use std::fmt;

use thiserror::Error;

use crate::graph::Graph;
use crate::matrices::DcMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TppError {
    #[error("instance must contain a positive multiple of three entries, got {0}")]
    BadLength(usize),
    #[error("entries must be positive, found 0 at position {0}")]
    ZeroEntry(usize),
    #[error("arithmetic overflow while transforming the instance")]
    Overflow,
    #[error("scale factor must be at least 1")]
    BadScale,
    #[error("group sum t = {s}/{m} is not an integer")]
    FractionalTarget { s: u128, m: usize },
    #[error("target t = {t} is too small, need t >= {min}")]
    TargetTooSmall { t: u64, min: u64 },
    #[error("matrix would have {n} rows, limit is {limit}")]
    TooLarge { n: u128, limit: usize },
    #[error("solution is not a valid partition: {0}")]
    InvalidSolution(String),
    #[error("line {0}: malformed input")]
    BadLine(usize),
    #[error("expected a group-count line followed by one line of 3m integers")]
    BadShape,
}

/// First rule an instance violates at some validation level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TppViolation {
    FractionalTarget,
    LowerBound { index: usize },
    UpperBound { index: usize },
    NotDistinct { index: usize },
    TargetBelowFour,
    MinBelowThreshold { threshold: u64 },
    GapBelowThreshold { index: usize, threshold: u64 },
}

impl fmt::Display for TppViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TppViolation::FractionalTarget => write!(f, "t = s/m is not an integer"),
            TppViolation::LowerBound { index } => {
                write!(f, "entry {index} is not above t/4")
            }
            TppViolation::UpperBound { index } => {
                write!(f, "entry {index} is not below t/2")
            }
            TppViolation::NotDistinct { index } => {
                write!(f, "entries {index} and {} are equal", index + 1)
            }
            TppViolation::TargetBelowFour => write!(f, "t is below 4"),
            TppViolation::MinBelowThreshold { threshold } => {
                write!(f, "smallest entry is below {threshold}")
            }
            TppViolation::GapBelowThreshold { index, threshold } => {
                write!(f, "gap after entry {index} is below {threshold}")
            }
        }
    }
}

/// Validation strictness, cumulative from left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationLevel {
    /// Positive, nonincreasing, length 3m, integer t.
    Lenient,
    /// Additionally t/4 < a_i < t/2 for every entry.
    Tpp,
    /// Additionally distinct entries, t >= 4, smallest entry >= K, and all
    /// consecutive gaps >= K.
    Hardened(u64),
}

/// A candidate three-partition instance: 3m positive integers, kept sorted
/// nonincreasingly. The target t = s/m may be fractional until validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TppInstance {
    values: Vec<u64>,
    m: usize,
}

impl TppInstance {
    pub fn new(mut values: Vec<u64>) -> Result<TppInstance, TppError> {
        if values.is_empty() || !values.len().is_multiple_of(3) {
            return Err(TppError::BadLength(values.len()));
        }
        if let Some(pos) = values.iter().position(|&v| v == 0) {
            return Err(TppError::ZeroEntry(pos));
        }
        values.sort_unstable_by(|a, b| b.cmp(a));
        let m = values.len() / 3;
        Ok(TppInstance { values, m })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn group_count(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total sum s of the entries.
    pub fn sum(&self) -> u128 {
        self.values.iter().map(|&v| v as u128).sum()
    }

    /// The per-group target t = s/m when it is an integer.
    pub fn target(&self) -> Option<u64> {
        let s = self.sum();
        let m = self.m as u128;
        if s.is_multiple_of(m) {
            u64::try_from(s / m).ok()
        } else {
            None
        }
    }

    /// Multiply every entry by k; preserves the partition verdict.
    pub fn scale(&self, k: u64) -> Result<TppInstance, TppError> {
        if k == 0 {
            return Err(TppError::BadScale);
        }
        let values = self
            .values
            .iter()
            .map(|&v| v.checked_mul(k).ok_or(TppError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        TppInstance::new(values)
    }

    /// Add c to every entry; t grows by 3c and the verdict is preserved.
    pub fn shift(&self, c: u64) -> Result<TppInstance, TppError> {
        let values = self
            .values
            .iter()
            .map(|&v| v.checked_add(c).ok_or(TppError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        TppInstance::new(values)
    }
}

/// Check an instance against a validation level, reporting the first
/// violated rule. The instance type already guarantees positivity, length
/// 3m, and nonincreasing order.
pub fn validate_instance(
    inst: &TppInstance,
    level: ValidationLevel,
) -> Result<(), TppViolation> {
    let t = match inst.target() {
        Some(t) => t,
        None => return Err(TppViolation::FractionalTarget),
    };
    if level == ValidationLevel::Lenient {
        return Ok(());
    }
    let t = t as u128;
    for (i, &a) in inst.values().iter().enumerate() {
        let a = a as u128;
        if 4 * a <= t {
            return Err(TppViolation::LowerBound { index: i });
        }
        if 2 * a >= t {
            return Err(TppViolation::UpperBound { index: i });
        }
    }
    let threshold = match level {
        ValidationLevel::Hardened(k) => k,
        _ => return Ok(()),
    };
    let vals = inst.values();
    for i in 0..vals.len() - 1 {
        if vals[i] == vals[i + 1] {
            return Err(TppViolation::NotDistinct { index: i });
        }
    }
    if t < 4 {
        return Err(TppViolation::TargetBelowFour);
    }
    if *vals.last().expect("nonempty") < threshold {
        return Err(TppViolation::MinBelowThreshold { threshold });
    }
    for i in 0..vals.len() - 1 {
        if vals[i] - vals[i + 1] < threshold {
            return Err(TppViolation::GapBelowThreshold { index: i, threshold });
        }
    }
    Ok(())
}

/// A partition of the index set into triples, each summing to t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TppSolution {
    triples: Vec<[usize; 3]>,
}

impl TppSolution {
    pub fn new(triples: Vec<[usize; 3]>) -> TppSolution {
        TppSolution { triples }
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Verify this is a disjoint cover of all indices with per-triple sum t.
    pub fn validate_for(&self, inst: &TppInstance) -> Result<(), TppError> {
        let t = inst
            .target()
            .ok_or(TppError::FractionalTarget { s: inst.sum(), m: inst.group_count() })?;
        if self.triples.len() != inst.group_count() {
            return Err(TppError::InvalidSolution(format!(
                "expected {} triples, got {}",
                inst.group_count(),
                self.triples.len()
            )));
        }
        let mut used = vec![false; inst.len()];
        for triple in &self.triples {
            let mut sum: u128 = 0;
            for &idx in triple {
                if idx >= inst.len() {
                    return Err(TppError::InvalidSolution(format!("index {idx} out of range")));
                }
                if used[idx] {
                    return Err(TppError::InvalidSolution(format!("index {idx} reused")));
                }
                used[idx] = true;
                sum += inst.values()[idx] as u128;
            }
            if sum != t as u128 {
                return Err(TppError::InvalidSolution(format!(
                    "triple {:?} sums to {sum}, target is {t}",
                    triple
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of the exact solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TppOutcome {
    Positive(TppSolution),
    Negative,
    /// The instance exceeds the search budget (3m > 24); no verdict.
    Unknown,
}

const SOLVE_BUDGET_LEN: usize = 24;

/// Exact three-partition decision by triple enumeration plus exact cover
/// over the index set. Deterministic: always covers the smallest uncovered
/// index, trying partner pairs in ascending index order, so the reported
/// solution is the lexicographically least one. A fractional target is
/// immediately negative.
pub fn solve_tpp(inst: &TppInstance) -> TppOutcome {
    if inst.len() > SOLVE_BUDGET_LEN {
        return TppOutcome::Unknown;
    }
    let t = match inst.target() {
        Some(t) => t as u128,
        None => return TppOutcome::Negative,
    };
    let len = inst.len();
    let vals = inst.values();
    // triples_with[i] lists sum-t triples whose smallest index is i.
    let mut triples_with: Vec<Vec<[usize; 3]>> = vec![Vec::new(); len];
    for i in 0..len {
        for j in i + 1..len {
            for k in j + 1..len {
                if vals[i] as u128 + vals[j] as u128 + vals[k] as u128 == t {
                    triples_with[i].push([i, j, k]);
                }
            }
        }
    }

    fn cover(
        triples_with: &[Vec<[usize; 3]>],
        used: &mut Vec<bool>,
        chosen: &mut Vec<[usize; 3]>,
    ) -> bool {
        let next = match used.iter().position(|&u| !u) {
            Some(i) => i,
            None => return true,
        };
        for triple in &triples_with[next] {
            if triple.iter().any(|&idx| used[idx]) {
                continue;
            }
            for &idx in triple {
                used[idx] = true;
            }
            chosen.push(*triple);
            if cover(triples_with, used, chosen) {
                return true;
            }
            chosen.pop();
            for &idx in triple {
                used[idx] = false;
            }
        }
        false
    }

    let mut used = vec![false; len];
    let mut chosen = Vec::new();
    if cover(&triples_with, &mut used, &mut chosen) {
        TppOutcome::Positive(TppSolution::new(chosen))
    } else {
        TppOutcome::Negative
    }
}

/// Node-role map of the gadget graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetLayout {
    roles: Vec<NodeRole>,
}

impl GadgetLayout {
    pub fn roles(&self) -> &[NodeRole] {
        &self.roles
    }

    pub fn role(&self, node: usize) -> NodeRole {
        self.roles[node]
    }
}

/// Role of a gadget node: a value node `x_i`, a chain node `y_u^j` (slot u of
/// group j), or the hub `z_j` of group j. All indices 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    X { index: usize },
    Y { group: usize, slot: usize },
    Z { group: usize },
}

impl fmt::Display for NodeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRole::X { index } => write!(f, "x_{index}"),
            NodeRole::Y { group, slot } => write!(f, "y_{slot}^{group}"),
            NodeRole::Z { group } => write!(f, "z_{group}"),
        }
    }
}

const MATRIX_SIZE_LIMIT: usize = 4096;

fn layout_size(inst: &TppInstance) -> Result<(usize, u64), TppError> {
    let s = inst.sum();
    let m = inst.group_count();
    let t = inst
        .target()
        .ok_or(TppError::FractionalTarget { s, m })?;
    let min_t = inst.values()[0] + 1;
    if t < min_t {
        return Err(TppError::TargetTooSmall { t, min: min_t });
    }
    let n = 4 * m as u128 + s;
    if n > MATRIX_SIZE_LIMIT as u128 {
        return Err(TppError::TooLarge { n, limit: MATRIX_SIZE_LIMIT });
    }
    Ok((n as usize, t))
}

/// The candidate matrix of an instance, on n = 4m + s rows: one row
/// `[1, a_i, 1, t-a_i, 2, 0, ...]` per value, then s rows
/// `[1, 2, t-1, 2, 0, ...]`, then m rows `[1, t, 3, 0, ...]`. Every row sums
/// to t + 4. Requires an integer t with t >= a_1 + 1.
pub fn build_matrix(inst: &TppInstance) -> Result<DcMatrix, TppError> {
    let (n, t) = layout_size(inst)?;
    let m = inst.group_count();
    let s = n - 4 * m;
    let mut rows = Vec::with_capacity(n);
    let template = |prefix: &[u64]| {
        let mut row = vec![0u64; n];
        row[..prefix.len()].copy_from_slice(prefix);
        row
    };
    for &a in inst.values() {
        rows.push(template(&[1, a, 1, t - a, 2]));
    }
    for _ in 0..s {
        rows.push(template(&[1, 2, t - 1, 2]));
    }
    for _ in 0..m {
        rows.push(template(&[1, t, 3]));
    }
    Ok(DcMatrix::from_rows(rows).expect("rows built square"))
}

/// Realize the witness graph of a solved instance: for each triple, its three
/// value nodes attach to consecutive blocks of the group's t chain nodes
/// (blocks in ascending index order of the triple), and every chain node
/// attaches to the group hub. Nodes are numbered value nodes first (input
/// order), then chain nodes grouped by group, then hubs.
pub fn build_gadget(
    inst: &TppInstance,
    solution: &TppSolution,
) -> Result<(Graph, GadgetLayout), TppError> {
    solution.validate_for(inst)?;
    let (n, t) = layout_size(inst)?;
    let t = t as usize;
    let m = inst.group_count();
    let s = n - 4 * m;
    let y_base = 3 * m;
    let z_base = y_base + s;

    let mut roles = vec![NodeRole::Z { group: 0 }; n];
    for (i, role) in roles.iter_mut().enumerate().take(3 * m) {
        *role = NodeRole::X { index: i };
    }
    let mut edges = Vec::new();
    for (group, triple) in solution.triples().iter().enumerate() {
        let mut members = *triple;
        members.sort_unstable();
        let group_y = y_base + group * t;
        for (slot, role) in roles[group_y..group_y + t].iter_mut().enumerate() {
            *role = NodeRole::Y { group, slot };
        }
        let hub = z_base + group;
        roles[hub] = NodeRole::Z { group };
        let mut slot = group_y;
        for &idx in &members {
            for _ in 0..inst.values()[idx] {
                edges.push((idx, slot));
                slot += 1;
            }
        }
        debug_assert_eq!(slot, group_y + t);
        for y in group_y..group_y + t {
            edges.push((y, hub));
        }
    }
    let graph = Graph::undirected(n, &edges).expect("gadget edges are distinct");
    Ok((graph, GadgetLayout { roles }))
}

/// Parse the TPP text format: a line holding m, then one line of 3m
/// integers in any order; `#` lines are comments.
pub fn parse_tpp(text: &str) -> Result<TppInstance, TppError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));
    let (m_line, m_text) = lines.next().ok_or(TppError::BadShape)?;
    let m: usize = m_text.parse().map_err(|_| TppError::BadLine(m_line))?;
    let (v_line, values_text) = lines.next().ok_or(TppError::BadShape)?;
    let values: Vec<u64> = values_text
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| TppError::BadLine(v_line))?;
    if lines.next().is_some() {
        return Err(TppError::BadShape);
    }
    if values.len() != 3 * m {
        return Err(TppError::BadLength(values.len()));
    }
    TppInstance::new(values)
}

/// Parse a solution file: m lines, three 0-based indices each. Anything
/// after a `#` is a comment, matching what the solver prints.
pub fn parse_solution(text: &str) -> Result<TppSolution, TppError> {
    let mut triples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| TppError::BadLine(idx + 1))?;
        let triple: [usize; 3] =
            nums.try_into().map_err(|_| TppError::BadLine(idx + 1))?;
        triples.push(triple);
    }
    Ok(TppSolution::new(triples))
}
