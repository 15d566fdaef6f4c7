//! Degree-sequence realizability and good-sequence realization.

use std::fmt;

use thiserror::Error;

use crate::graph::Graph;
use crate::matrices::{goodness, GoodnessVerdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("in-degree {degree} at position {index} needs {degree} distinct tails, only {available} nodes available without a self-loop")]
    IndegreeTooLarge { index: usize, degree: u64, available: usize },
    #[error("sequence is not good")]
    NotGood,
    #[error("line {0}: expected whitespace-separated non-negative integers")]
    BadLine(usize),
    #[error("expected exactly one data line")]
    NotOneLine,
}

/// A degree sequence: naturals arranged nonincreasingly at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    values: Vec<u64>,
}

impl DegreeSequence {
    pub fn new(mut values: Vec<u64>) -> DegreeSequence {
        values.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Havel-Hakimi rejection: the reduction drove an entry negative at the given
/// 1-based elimination round (0 when some entry already exceeds p-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HhRejection {
    pub step: usize,
}

impl fmt::Display for HhRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a graphical degree sequence (failed at step {})", self.step)
    }
}

/// Erdős–Gallai test: the sum is even and every prefix inequality
/// `sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(k, d_i)` holds.
pub fn erdos_gallai_check(d: &DegreeSequence) -> bool {
    let vals = d.values();
    let p = vals.len();
    let total: u128 = vals.iter().map(|&v| v as u128).sum();
    if !total.is_multiple_of(2) {
        return false;
    }
    let mut prefix: u128 = 0;
    for k in 1..=p {
        prefix += vals[k - 1] as u128;
        let k128 = k as u128;
        let tail: u128 = vals[k..].iter().map(|&v| (v as u128).min(k128)).sum();
        if prefix > k128 * (k128 - 1) + tail {
            return false;
        }
    }
    true
}

/// Havel-Hakimi: constructively realize a degree sequence as an undirected
/// graph, or reject. Node `i` of the result has degree `values[i]`. The node
/// with the largest residual degree is wired to the next-largest residuals,
/// ties broken by smallest node id.
pub fn havel_hakimi(d: &DegreeSequence) -> Result<Graph, HhRejection> {
    let vals = d.values();
    let p = vals.len();
    if vals.iter().any(|&v| v as u128 > p.saturating_sub(1) as u128) {
        return Err(HhRejection { step: 0 });
    }
    // (residual, id), re-sorted every round; p is small in practice.
    let mut residual: Vec<(u64, usize)> = vals.iter().copied().zip(0..).collect();
    let mut edges = Vec::new();
    let mut step = 0;
    loop {
        residual.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let (need, center) = residual[0];
        if need == 0 {
            break;
        }
        step += 1;
        residual[0].0 = 0;
        for slot in residual[1..].iter_mut().take(need as usize) {
            if slot.0 == 0 {
                return Err(HhRejection { step });
            }
            slot.0 -= 1;
            edges.push((center, slot.1));
        }
    }
    Ok(Graph::undirected(p, &edges).expect("elimination never repeats an edge"))
}

/// Realize a nonincreasing natural sequence as the in-degree sequence of a
/// directed graph: node `i` receives arcs from the `d_i` smallest ids other
/// than `i`. Refuses `d_i > p-1` (no self-loops).
pub fn indegree_realize(d: &DegreeSequence) -> Result<Graph, SequenceError> {
    let vals = d.values();
    let p = vals.len();
    let mut arcs = Vec::new();
    for (i, &deg) in vals.iter().enumerate() {
        if deg as u128 > p.saturating_sub(1) as u128 {
            return Err(SequenceError::IndegreeTooLarge {
                index: i,
                degree: deg,
                available: p.saturating_sub(1),
            });
        }
        let tails = (0..p).filter(|&t| t != i).take(deg as usize);
        arcs.extend(tails.map(|t| (t, i)));
    }
    Ok(Graph::directed(p, &arcs).expect("distinct tails per head"))
}

/// A sequence validated as good: starts at 1, strictly increases, then is
/// constant at its plateau value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodSequence {
    values: Vec<u64>,
    plateau_value: u64,
}

impl GoodSequence {
    pub fn new(values: Vec<u64>) -> Result<GoodSequence, SequenceError> {
        match goodness(&values) {
            GoodnessVerdict::Good { plateau_value, .. } => {
                Ok(GoodSequence { values, plateau_value })
            }
            GoodnessVerdict::NotGood => Err(SequenceError::NotGood),
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn plateau_value(&self) -> u64 {
        self.plateau_value
    }
}

/// Build an undirected graph whose CDCM row 0 equals the good sequence: a
/// chain of stars sized by the consecutive differences, rooted at node 0.
/// When the plateau value k is below the length, the tree uses nodes `0..k`
/// and the remaining nodes stay isolated.
pub fn realize_good_sequence(a: &GoodSequence) -> Graph {
    let vals = a.values();
    let n = vals.len();
    let mut edges = Vec::new();
    // Star i hangs off the lowest-id leaf of star i-1; the first hangs off 0.
    let mut carrier = 0usize;
    let mut next_id = 1usize;
    for w in vals.windows(2) {
        let width = (w[1] - w[0]) as usize;
        if width == 0 {
            break;
        }
        for leaf in next_id..next_id + width {
            edges.push((carrier, leaf));
        }
        carrier = next_id;
        next_id += width;
    }
    Graph::undirected(n, &edges).expect("fresh star leaves never collide")
}

/// Parse the sequence text format: one line of whitespace-separated
/// non-negative integers; `#` lines are comments.
pub fn parse_sequence(text: &str) -> Result<Vec<u64>, SequenceError> {
    let mut data = None;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if data.is_some() {
            return Err(SequenceError::NotOneLine);
        }
        let row: Result<Vec<u64>, _> = line.split_whitespace().map(str::parse).collect();
        data = Some(row.map_err(|_| SequenceError::BadLine(idx + 1))?);
    }
    data.ok_or(SequenceError::NotOneLine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::cdcm_of;

    #[test]
    fn erdos_gallai_basics() {
        assert!(erdos_gallai_check(&DegreeSequence::new(vec![2, 2, 2])));
        assert!(!erdos_gallai_check(&DegreeSequence::new(vec![3, 1, 1])));
        // Length-1 sequences: only [0] is graphical.
        assert!(erdos_gallai_check(&DegreeSequence::new(vec![0])));
        assert!(!erdos_gallai_check(&DegreeSequence::new(vec![2])));
    }

    #[test]
    fn havel_hakimi_triangle() {
        let g = havel_hakimi(&DegreeSequence::new(vec![2, 2, 2])).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn havel_hakimi_rejects_odd_sum() {
        let err = havel_hakimi(&DegreeSequence::new(vec![1, 1, 1])).unwrap_err();
        assert_eq!(err, HhRejection { step: 2 });
        let err = havel_hakimi(&DegreeSequence::new(vec![3, 1])).unwrap_err();
        assert_eq!(err.step, 0);
    }

    #[test]
    fn indegree_realize_examples() {
        let g = indegree_realize(&DegreeSequence::new(vec![1, 1])).unwrap();
        let mut arcs: Vec<_> = g.arcs().collect();
        arcs.sort_unstable();
        assert_eq!(arcs, vec![(0, 1), (1, 0)]);

        let empty = indegree_realize(&DegreeSequence::new(vec![0, 0, 0])).unwrap();
        assert_eq!(empty.arc_count(), 0);

        assert!(matches!(
            indegree_realize(&DegreeSequence::new(vec![2, 0])),
            Err(SequenceError::IndegreeTooLarge { .. })
        ));
    }

    #[test]
    fn indegree_realize_round_trips() {
        // Every valid nonincreasing sequence with p <= 5 realizes exactly.
        for p in 1usize..=5 {
            let mut seq = vec![0u64; p];
            loop {
                let d = DegreeSequence::new(seq.clone());
                if seq.iter().all(|&v| v < p as u64) {
                    let g = indegree_realize(&d).unwrap();
                    let got = DegreeSequence::new((0..p).map(|i| g.in_degree(i) as u64).collect());
                    assert_eq!(got, d);
                }
                // Advance through all sequences with entries <= p.
                let mut pos = 0;
                loop {
                    if pos == p {
                        break;
                    }
                    if seq[pos] < p as u64 {
                        seq[pos] += 1;
                        for s in seq.iter_mut().take(pos) {
                            *s = 0;
                        }
                        break;
                    }
                    pos += 1;
                }
                if pos == p {
                    break;
                }
            }
        }
    }

    #[test]
    fn good_sequence_star_chain() {
        let a = GoodSequence::new(vec![1, 3, 6, 8, 8, 8, 8, 8]).unwrap();
        let g = realize_good_sequence(&a);
        let mut edges = g.edges();
        edges.sort_unstable();
        assert_eq!(
            edges,
            vec![(0, 1), (0, 2), (1, 3), (1, 4), (1, 5), (3, 6), (3, 7)]
        );
        assert_eq!(cdcm_of(&g).row(0), a.values());
    }

    #[test]
    fn good_sequence_trivia() {
        let single = GoodSequence::new(vec![1]).unwrap();
        let g = realize_good_sequence(&single);
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.arc_count(), 0);

        // Good but not very good: plateau 1, two isolated extras.
        let flat = GoodSequence::new(vec![1, 1, 1]).unwrap();
        let g = realize_good_sequence(&flat);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.arc_count(), 0);
        assert_eq!(cdcm_of(&g).row(0), flat.values());

        assert_eq!(GoodSequence::new(vec![1, 2, 2, 3]), Err(SequenceError::NotGood));
    }

    #[test]
    fn parse_sequence_text() {
        assert_eq!(parse_sequence("# c\n2 2 2\n").unwrap(), vec![2, 2, 2]);
        assert_eq!(parse_sequence(""), Err(SequenceError::NotOneLine));
        assert_eq!(parse_sequence("1 1\n2 2\n"), Err(SequenceError::NotOneLine));
        assert_eq!(parse_sequence("1 -2\n"), Err(SequenceError::BadLine(1)));
    }
}
