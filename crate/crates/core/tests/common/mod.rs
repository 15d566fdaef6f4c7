//! Shared fixtures and independent oracles for the integration suites.

#![allow(dead_code)]

use dcm_core::{Distance, Graph, Orientation};

/// The 8-node, 15-arc strongly connected reference digraph whose
/// distance-count rows are pinned in `reference_dcm_rows`.
pub fn reference_digraph() -> Graph {
    Graph::directed(
        8,
        &[
            (0, 3),
            (0, 4),
            (3, 4),
            (4, 0),
            (4, 6),
            (6, 7),
            (7, 1),
            (7, 2),
            (2, 7),
            (1, 6),
            (6, 5),
            (5, 3),
            (3, 2),
            (2, 4),
            (1, 0),
        ],
    )
    .expect("fixture arcs are valid")
}

pub fn reference_dcm_rows() -> Vec<Vec<u64>> {
    vec![
        vec![1, 2, 3, 2, 0, 0, 0, 0],
        vec![1, 1, 2, 2, 2, 0, 0, 0],
        vec![1, 2, 3, 2, 0, 0, 0, 0],
        vec![1, 2, 3, 2, 0, 0, 0, 0],
        vec![1, 3, 3, 1, 0, 0, 0, 0],
        vec![1, 1, 2, 4, 0, 0, 0, 0],
        vec![1, 2, 4, 1, 0, 0, 0, 0],
        vec![1, 2, 3, 2, 0, 0, 0, 0],
    ]
}

pub fn reference_cdcm_rows() -> Vec<Vec<u64>> {
    vec![
        vec![1, 3, 6, 8, 8, 8, 8, 8],
        vec![1, 2, 4, 6, 8, 8, 8, 8],
        vec![1, 3, 6, 8, 8, 8, 8, 8],
        vec![1, 3, 6, 8, 8, 8, 8, 8],
        vec![1, 4, 7, 8, 8, 8, 8, 8],
        vec![1, 2, 4, 8, 8, 8, 8, 8],
        vec![1, 3, 7, 8, 8, 8, 8, 8],
        vec![1, 3, 6, 8, 8, 8, 8, 8],
    ]
}

/// Distance oracle independent of the BFS implementation: repeated boolean
/// adjacency products. `result[x][y]` is the least walk length from x to y.
pub fn oracle_distance_matrix(g: &Graph) -> Vec<Vec<Distance>> {
    let n = g.node_count();
    let mut adj = vec![vec![false; n]; n];
    for (x, y) in g.arcs() {
        adj[x][y] = true;
    }
    let mut dist = vec![vec![Distance::INFINITE; n]; n];
    let mut reach = vec![vec![false; n]; n];
    for (x, row) in reach.iter_mut().enumerate() {
        row[x] = true;
        dist[x][x] = Distance::finite(0);
    }
    for step in 1..n {
        let mut next = vec![vec![false; n]; n];
        for x in 0..n {
            for mid in 0..n {
                if reach[x][mid] {
                    for y in 0..n {
                        if adj[mid][y] {
                            next[x][y] = true;
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if next[x][y] && !dist[x][y].is_finite() {
                    dist[x][y] = Distance::finite(step);
                }
            }
        }
        reach = next;
    }
    dist
}

/// Every labeled graph on `n` nodes of the given orientation.
pub fn all_graphs(n: usize, mode: Orientation) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = match mode {
        Orientation::Directed => (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect(),
        Orientation::Undirected => (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .collect(),
    };
    assert!(pairs.len() < 26, "enumeration domain too large");
    let mut graphs = Vec::with_capacity(1 << pairs.len());
    for mask in 0u32..(1 << pairs.len()) {
        let chosen: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(idx, _)| mask & (1 << idx) != 0)
            .map(|(_, &p)| p)
            .collect();
        let g = match mode {
            Orientation::Directed => Graph::directed(n, &chosen),
            Orientation::Undirected => Graph::undirected(n, &chosen),
        };
        graphs.push(g.expect("enumerated pairs are simple"));
    }
    graphs
}

/// Connected components of the underlying undirected structure; returns the
/// component id of every node.
pub fn components(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in g.successors(v).iter().chain(g.predecessors(v)) {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Definitional three-partition oracle: enumerate every unordered partition
/// of the index set into triples and test the sums directly.
pub fn tpp_oracle(values: &[u64]) -> bool {
    assert!(values.len().is_multiple_of(3) && !values.is_empty());
    let m = values.len() / 3;
    let s: u128 = values.iter().map(|&v| v as u128).sum();
    if !s.is_multiple_of(m as u128) {
        return false;
    }
    let t = s / m as u128;
    fn partitions(used: &mut Vec<bool>, values: &[u64], t: u128) -> bool {
        let first = match used.iter().position(|&u| !u) {
            Some(i) => i,
            None => return true,
        };
        used[first] = true;
        let free: Vec<usize> = (0..values.len()).filter(|&i| !used[i]).collect();
        for (a_pos, &a) in free.iter().enumerate() {
            for &b in &free[a_pos + 1..] {
                used[a] = true;
                used[b] = true;
                let sum = values[first] as u128 + values[a] as u128 + values[b] as u128;
                if sum == t && partitions(used, values, t) {
                    return true;
                }
                used[a] = false;
                used[b] = false;
            }
        }
        used[first] = false;
        false
    }
    partitions(&mut vec![false; values.len()], values, t)
}

/// Exhaustively generate every good sequence of the given length.
pub fn all_good_sequences(n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for k in 1..=n as u64 {
        // Strictly increasing runs from 1 to k over subsets of 2..k.
        let middle: Vec<u64> = (2..k).collect();
        let subsets = 1u32 << middle.len();
        for mask in 0..subsets {
            let mut seq = vec![1u64];
            for (idx, &v) in middle.iter().enumerate() {
                if mask & (1 << idx) != 0 {
                    seq.push(v);
                }
            }
            if k > 1 {
                seq.push(k);
            }
            if seq.len() > n {
                continue;
            }
            seq.resize(n, k);
            out.push(seq);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every nonincreasing sequence of the given length over `0..=max`.
pub fn nonincreasing_sequences(len: usize, max: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, len: usize, cap: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=cap).rev() {
            prefix.push(v);
            extend(prefix, len, v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), len, max, &mut out);
    out
}
