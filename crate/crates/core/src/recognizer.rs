//! Exact recognition: is this matrix the (C)DCM of some graph?
//!
//! The search pins node in-degrees from column 1, decides in-neighbour sets
//! node by node, and prunes on three sound rules:
//!
//! * finalized prefix: once every node within distance k-1 of row i (in the
//!   partial transpose) has its in-set fixed, the level counts of row i up
//!   to k can never change again and must equal the target exactly;
//! * pessimistic bound: arcs are only ever added, so partial cumulative
//!   counts never exceed the target's;
//! * optimistic bound: cumulative counts in the partial graph extended by
//!   every still-possible arc must reach the target's.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Graph, Orientation};
use crate::matrices::{canonical_rows, cdcm_of, cdcm_to_dcm, dcm_of, Candidate, MatrixKind};
use crate::screening::{screen, PredecessorBoundConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchPolicy {
    /// Row i of the matrix must be the row of node i of the witness.
    FixedRows,
    /// Rows match as a multiset; the search runs on the canonical form.
    UpToPermutation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: usize,
    pub time_budget: Duration,
    pub expansion_budget: u64,
    pub policy: MatchPolicy,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 10,
            time_budget: Duration::from_secs(60),
            expansion_budget: u64::MAX,
            policy: MatchPolicy::FixedRows,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    /// Applied in-set decisions, including undone ones.
    pub expansions: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    /// The matrix is larger than `max_nodes`; the search was not attempted.
    NodeLimit,
    TimeBudget,
    ExpansionBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecognitionOutcome {
    Yes { witness: Graph, stats: SearchStats },
    No { stats: SearchStats },
    Unknown { reason: UnknownReason, stats: SearchStats },
}

impl RecognitionOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, RecognitionOutcome::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, RecognitionOutcome::No { .. })
    }

    pub fn witness(&self) -> Option<&Graph> {
        match self {
            RecognitionOutcome::Yes { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            RecognitionOutcome::Yes { stats, .. }
            | RecognitionOutcome::No { stats }
            | RecognitionOutcome::Unknown { stats, .. } => *stats,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("witness has {graph} nodes but the matrix has {matrix} rows")]
    DimensionMismatch { graph: usize, matrix: usize },
}

/// Recompute the (C)DCM of `g` and compare against the candidate under the
/// given policy. Independent of the search.
pub fn verify_witness(
    g: &Graph,
    candidate: Candidate<'_>,
    policy: MatchPolicy,
) -> Result<bool, WitnessError> {
    if g.node_count() != candidate.n() {
        return Err(WitnessError::DimensionMismatch {
            graph: g.node_count(),
            matrix: candidate.n(),
        });
    }
    let computed = match candidate.kind() {
        MatrixKind::Dcm => dcm_of(g).rows().to_vec(),
        MatrixKind::Cdcm => cdcm_of(g).rows().to_vec(),
    };
    Ok(match policy {
        MatchPolicy::FixedRows => computed == candidate.rows(),
        MatchPolicy::UpToPermutation => {
            canonical_rows(&computed) == canonical_rows(candidate.rows())
        }
    })
}

/// Decide whether the candidate is the (C)DCM of some graph of the given
/// orientation. Sound in both directions: a `Yes` carries a verified witness
/// and a `No` means the pruned search exhausted the space. Budget trips
/// yield `Unknown`.
pub fn recognize(
    candidate: Candidate<'_>,
    mode: Orientation,
    limits: &SearchLimits,
) -> RecognitionOutcome {
    let start = Instant::now();
    let zero = |start: Instant| SearchStats { expansions: 0, elapsed: start.elapsed() };

    // Normalize to DCM rows; a decreasing cumulative row disqualifies.
    let dcm_rows: Vec<Vec<u64>> = match candidate {
        Candidate::Dcm(m) => m.rows().to_vec(),
        Candidate::Cdcm(m) => match cdcm_to_dcm(m) {
            Ok(n_mat) => n_mat.rows().to_vec(),
            Err(_) => return RecognitionOutcome::No { stats: zero(start) },
        },
    };
    let n = dcm_rows.len();
    if n > limits.max_nodes {
        return RecognitionOutcome::Unknown { reason: UnknownReason::NodeLimit, stats: zero(start) };
    }

    // Screening is sound, so a rejection here is a definite No; it also
    // guarantees the prefix sums below stay in range.
    if !screen(candidate, mode, &PredecessorBoundConfig::default()).passed() {
        return RecognitionOutcome::No { stats: zero(start) };
    }

    let target: Vec<Vec<u64>> = match limits.policy {
        MatchPolicy::FixedRows => dcm_rows,
        MatchPolicy::UpToPermutation => canonical_rows(&dcm_rows),
    };
    let cum_target: Vec<Vec<u64>> = target
        .iter()
        .map(|row| {
            row.iter()
                .scan(0u64, |acc, &v| {
                    *acc += v;
                    Some(*acc)
                })
                .collect()
        })
        .collect();
    let nu: Vec<usize> = target
        .iter()
        .map(|row| row.get(1).copied().unwrap_or(0) as usize)
        .collect();

    if nu.iter().any(|&d| d > n.saturating_sub(1)) {
        return RecognitionOutcome::No { stats: zero(start) };
    }
    if mode == Orientation::Undirected && nu.iter().sum::<usize>() % 2 != 0 {
        return RecognitionOutcome::No { stats: zero(start) };
    }

    let mut searcher = Searcher {
        target: &target,
        cum_target: &cum_target,
        n,
        mode,
        nu: &nu,
        partial_preds: vec![Vec::new(); n],
        decided: vec![false; n],
        decided_count: 0,
        expansions: 0,
        expansion_budget: limits.expansion_budget,
        deadline: start + limits.time_budget,
        witness_arcs: None,
    };
    match searcher.search() {
        StepResult::Found => {
            let witness = searcher.build_witness();
            debug_assert_eq!(dcm_of(&witness).rows(), &target[..]);
            RecognitionOutcome::Yes {
                witness,
                stats: SearchStats { expansions: searcher.expansions, elapsed: start.elapsed() },
            }
        }
        StepResult::Exhausted => RecognitionOutcome::No {
            stats: SearchStats { expansions: searcher.expansions, elapsed: start.elapsed() },
        },
        StepResult::Aborted(reason) => RecognitionOutcome::Unknown {
            reason,
            stats: SearchStats { expansions: searcher.expansions, elapsed: start.elapsed() },
        },
    }
}

enum StepResult {
    Found,
    Exhausted,
    Aborted(UnknownReason),
}

struct Searcher<'a> {
    target: &'a [Vec<u64>],
    cum_target: &'a [Vec<u64>],
    n: usize,
    mode: Orientation,
    nu: &'a [usize],
    /// Transpose adjacency of the partial graph: partial_preds[v] lists the
    /// tails of arcs into v (symmetric for undirected edges).
    partial_preds: Vec<Vec<usize>>,
    decided: Vec<bool>,
    decided_count: usize,
    expansions: u64,
    expansion_budget: u64,
    deadline: Instant,
    witness_arcs: Option<Vec<(usize, usize)>>,
}

impl<'a> Searcher<'a> {
    fn search(&mut self) -> StepResult {
        if self.decided_count == self.n {
            return if self.leaf_matches() {
                self.freeze_witness();
                StepResult::Found
            } else {
                StepResult::Exhausted
            };
        }
        let node = self.next_node();
        let candidates: Vec<usize> = match self.mode {
            Orientation::Directed => (0..self.n).filter(|&y| y != node).collect(),
            Orientation::Undirected => (0..self.n)
                .filter(|&w| {
                    w != node
                        && !self.decided[w]
                        && self.partial_preds[w].len() < self.nu[w]
                })
                .collect(),
        };
        let needed = match self.mode {
            Orientation::Directed => self.nu[node],
            Orientation::Undirected => self.nu[node] - self.partial_preds[node].len(),
        };
        if candidates.len() < needed {
            return StepResult::Exhausted;
        }
        let mut chosen = Vec::with_capacity(needed);
        self.choose(node, &candidates, 0, needed, &mut chosen)
    }

    /// Enumerate `needed`-subsets of `candidates` in ascending order and
    /// recurse on each consistent extension.
    fn choose(
        &mut self,
        node: usize,
        candidates: &[usize],
        from: usize,
        left: usize,
        chosen: &mut Vec<usize>,
    ) -> StepResult {
        if left == 0 {
            self.apply(node, chosen);
            self.expansions += 1;
            if self.expansions > self.expansion_budget {
                self.unapply(node, chosen);
                return StepResult::Aborted(UnknownReason::ExpansionBudget);
            }
            if self.expansions.is_multiple_of(256) && Instant::now() > self.deadline {
                self.unapply(node, chosen);
                return StepResult::Aborted(UnknownReason::TimeBudget);
            }
            let result = if self.consistent() { self.search() } else { StepResult::Exhausted };
            self.unapply(node, chosen);
            return result;
        }
        if candidates.len() - from < left {
            return StepResult::Exhausted;
        }
        for idx in from..=candidates.len() - left {
            chosen.push(candidates[idx]);
            match self.choose(node, candidates, idx + 1, left - 1, chosen) {
                StepResult::Exhausted => {}
                other => {
                    chosen.pop();
                    return other;
                }
            }
            chosen.pop();
        }
        StepResult::Exhausted
    }

    fn apply(&mut self, node: usize, chosen: &[usize]) {
        for &w in chosen {
            self.partial_preds[node].push(w);
            if self.mode == Orientation::Undirected {
                self.partial_preds[w].push(node);
            }
        }
        self.decided[node] = true;
        self.decided_count += 1;
    }

    fn unapply(&mut self, node: usize, chosen: &[usize]) {
        self.decided[node] = false;
        self.decided_count -= 1;
        for &w in chosen.iter().rev() {
            self.partial_preds[node].pop();
            if self.mode == Orientation::Undirected {
                self.partial_preds[w].pop();
            }
        }
    }

    /// Next head to decide: the undecided node referenced most often by the
    /// in-sets chosen so far, so the decided region stays predecessor-closed
    /// and distance prefixes finalize early. Ties: smaller pinned in-degree,
    /// then smaller id.
    fn next_node(&self) -> usize {
        let mut appearances = vec![0usize; self.n];
        for (v, preds) in self.partial_preds.iter().enumerate() {
            if self.decided[v] {
                for &w in preds {
                    appearances[w] += 1;
                }
            }
        }
        (0..self.n)
            .filter(|&v| !self.decided[v])
            .min_by_key(|&v| (usize::MAX - appearances[v], self.nu[v], v))
            .expect("an undecided node exists")
    }

    /// All three pruning rules over every row; true when the partial graph
    /// can still be completed to match the target.
    fn consistent(&self) -> bool {
        let n = self.n;
        let mut levels = vec![usize::MAX; n];
        let mut queue = Vec::with_capacity(n);
        for i in 0..n {
            // Pessimistic BFS over arcs chosen so far.
            levels.iter_mut().for_each(|l| *l = usize::MAX);
            levels[i] = 0;
            queue.clear();
            queue.push(i);
            let mut head = 0;
            let mut final_limit = if self.decided[i] { usize::MAX } else { 0 };
            while head < queue.len() {
                let v = queue[head];
                head += 1;
                let next = levels[v] + 1;
                for &w in &self.partial_preds[v] {
                    if levels[w] == usize::MAX {
                        levels[w] = next;
                        if !self.decided[w] {
                            final_limit = final_limit.min(next);
                        }
                        queue.push(w);
                    }
                }
            }
            let mut counts = vec![0u64; n];
            for &l in levels.iter() {
                if l < n {
                    counts[l] += 1;
                }
            }
            let mut cum = 0u64;
            for (k, &count) in counts.iter().enumerate() {
                cum += count;
                if k <= final_limit {
                    if count != self.target[i][k] {
                        return false;
                    }
                } else if cum > self.cum_target[i][k] {
                    return false;
                }
            }

            // Optimistic BFS: add every arc that could still appear.
            levels.iter_mut().for_each(|l| *l = usize::MAX);
            levels[i] = 0;
            queue.clear();
            queue.push(i);
            let mut head = 0;
            while head < queue.len() {
                let v = queue[head];
                head += 1;
                let next = levels[v] + 1;
                let expand_all = !self.decided[v]
                    && match self.mode {
                        Orientation::Directed => self.nu[v] > 0,
                        Orientation::Undirected => self.partial_preds[v].len() < self.nu[v],
                    };
                if expand_all {
                    for (w, level) in levels.iter_mut().enumerate() {
                        if *level == usize::MAX && self.possible_tail(w, v) {
                            *level = next;
                            queue.push(w);
                        }
                    }
                }
                for &w in &self.partial_preds[v] {
                    if levels[w] == usize::MAX {
                        levels[w] = next;
                        queue.push(w);
                    }
                }
            }
            let mut counts_opt = vec![0u64; n];
            for &l in levels.iter() {
                if l < n {
                    counts_opt[l] += 1;
                }
            }
            let mut cum_opt = 0u64;
            for (k, &count) in counts_opt.iter().enumerate() {
                cum_opt += count;
                if cum_opt < self.cum_target[i][k] {
                    return false;
                }
            }
        }
        true
    }

    /// Could an arc `w -> v` still be added, given v is undecided and open?
    fn possible_tail(&self, w: usize, v: usize) -> bool {
        if w == v {
            return false;
        }
        match self.mode {
            Orientation::Directed => true,
            // A future undirected edge needs both endpoints undecided and
            // below their degree pins.
            Orientation::Undirected => {
                !self.decided[w] && self.partial_preds[w].len() < self.nu[w]
            }
        }
    }

    fn leaf_matches(&self) -> bool {
        for i in 0..self.n {
            let counts = self.row_counts(i);
            if counts != self.target[i] {
                return false;
            }
        }
        true
    }

    fn row_counts(&self, i: usize) -> Vec<u64> {
        let n = self.n;
        let mut levels = vec![usize::MAX; n];
        levels[i] = 0;
        let mut queue = vec![i];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &w in &self.partial_preds[v] {
                if levels[w] == usize::MAX {
                    levels[w] = levels[v] + 1;
                    queue.push(w);
                }
            }
        }
        let mut counts = vec![0u64; n];
        for &l in levels.iter() {
            if l < n {
                counts[l] += 1;
            }
        }
        counts
    }

    fn freeze_witness(&mut self) {
        let mut arcs = Vec::new();
        for (v, preds) in self.partial_preds.iter().enumerate() {
            for &w in preds {
                arcs.push((w, v));
            }
        }
        self.witness_arcs = Some(arcs);
    }

    fn build_witness(&self) -> Graph {
        let arcs = self.witness_arcs.as_ref().expect("witness frozen on Found");
        match self.mode {
            Orientation::Directed => {
                Graph::directed(self.n, arcs).expect("search emits a simple graph")
            }
            Orientation::Undirected => {
                let edges: Vec<(usize, usize)> =
                    arcs.iter().copied().filter(|&(x, y)| x < y).collect();
                Graph::undirected(self.n, &edges).expect("search emits a simple graph")
            }
        }
    }
}
