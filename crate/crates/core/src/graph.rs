//! Graph representation, BFS distances, neighbourhoods, powers, connectivity.
//!
//! Distances are always computed *to* a target node (BFS on the transpose);
//! for undirected graphs this coincides with distances from it.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Whether arcs are one-way or stored as symmetric pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Directed,
    Undirected,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Directed => write!(f, "directed"),
            Orientation::Undirected => write!(f, "undirected"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range (graph has {n} nodes)")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop at node {0} is not allowed")]
    SelfLoop(usize),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("operation requires an undirected graph")]
    DirectedInput,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphParseError {
    #[error("missing header line `D <n>` or `U <n>`")]
    MissingHeader,
    #[error("line {0}: bad header, expected `D <n>` or `U <n>`")]
    BadHeader(usize),
    #[error("line {0}: expected `<tail> <head>`")]
    BadArc(usize),
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        source: GraphError,
    },
}

/// A shortest-path distance. `Distance::INFINITE` marks unreachable pairs and
/// compares strictly greater than every finite distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(usize);

impl Distance {
    pub const INFINITE: Distance = Distance(usize::MAX);

    pub fn finite(k: usize) -> Distance {
        assert!(k < usize::MAX, "finite distance overflow");
        Distance(k)
    }

    pub fn is_finite(self) -> bool {
        self != Self::INFINITE
    }

    pub fn as_finite(self) -> Option<usize> {
        if self.is_finite() {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_finite() {
            Some(k) => write!(f, "{k}"),
            None => write!(f, "inf"),
        }
    }
}

/// All distances to one target node: `dist[y] = d(y, target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRow {
    target: usize,
    dist: Vec<Distance>,
}

impl DistanceRow {
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn dist(&self) -> &[Distance] {
        &self.dist
    }

    /// Count of nodes at each exact distance `0..n`; unreachable nodes are
    /// counted nowhere.
    pub fn level_counts(&self) -> Vec<u64> {
        let n = self.dist.len();
        let mut counts = vec![0u64; n];
        for d in &self.dist {
            if let Some(k) = d.as_finite() {
                counts[k] += 1;
            }
        }
        counts
    }
}

/// A finite loop-free graph on nodes `0..n`. Undirected graphs store each
/// edge as a symmetric arc pair; one BFS code path serves both orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    orientation: Orientation,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Directed graph from a list of arcs `(tail, head)`.
    pub fn directed(n: usize, arcs: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Self::build(n, Orientation::Directed, arcs)
    }

    /// Undirected graph from a list of edges, each given once in either order.
    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Self::build(n, Orientation::Undirected, edges)
    }

    fn build(n: usize, orientation: Orientation, arcs: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph {
            n,
            orientation,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        };
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        for &(x, y) in arcs {
            for node in [x, y] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if x == y {
                return Err(GraphError::SelfLoop(x));
            }
            let key = match orientation {
                Orientation::Directed => (x, y),
                Orientation::Undirected => (x.min(y), x.max(y)),
            };
            if !seen.insert(key) {
                return Err(GraphError::DuplicateArc(x, y));
            }
            g.out_adj[x].push(y);
            g.in_adj[y].push(x);
            if orientation == Orientation::Undirected {
                g.out_adj[y].push(x);
                g.in_adj[x].push(y);
            }
        }
        for adj in g.out_adj.iter_mut().chain(g.in_adj.iter_mut()) {
            adj.sort_unstable();
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Number of ordered arcs (an undirected edge counts twice).
    pub fn arc_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    /// Undirected edges as canonical `(min, max)` pairs; for a directed graph
    /// this is just the arc list.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.orientation {
            Orientation::Directed => self.arcs().collect(),
            Orientation::Undirected => self
                .arcs()
                .filter(|&(x, y)| x < y)
                .collect(),
        }
    }

    /// All ordered arcs, both directions for undirected graphs.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(x, heads)| heads.iter().map(move |&y| (x, y)))
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.out_adj[i]
    }

    pub fn predecessors(&self, i: usize) -> &[usize] {
        &self.in_adj[i]
    }

    pub fn has_arc(&self, x: usize, y: usize) -> bool {
        self.out_adj[x].binary_search(&y).is_ok()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.in_adj[i].len()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_adj[i].len()
    }

    /// Degree of a node in an undirected graph (equals its in-degree).
    pub fn degree(&self, i: usize) -> usize {
        self.in_adj[i].len()
    }

    fn check_node(&self, i: usize) -> Result<(), GraphError> {
        if i < self.n {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node: i, n: self.n })
        }
    }

    /// BFS distances of every node *to* `i` (i.e. on the transpose graph).
    pub fn distances_to(&self, i: usize) -> Result<DistanceRow, GraphError> {
        self.check_node(i)?;
        let mut dist = vec![Distance::INFINITE; self.n];
        dist[i] = Distance::finite(0);
        let mut queue = VecDeque::from([i]);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].as_finite().expect("queued node is reached") + 1;
            for &p in &self.in_adj[v] {
                if !dist[p].is_finite() {
                    dist[p] = Distance::finite(next);
                    queue.push_back(p);
                }
            }
        }
        Ok(DistanceRow { target: i, dist })
    }

    /// Maximum finite distance of any node to `i`; 0 when nothing else
    /// reaches `i`.
    pub fn eccentricity(&self, i: usize) -> Result<u64, GraphError> {
        let row = self.distances_to(i)?;
        Ok(row
            .dist()
            .iter()
            .filter_map(|d| d.as_finite())
            .max()
            .unwrap_or(0) as u64)
    }

    /// Maximum eccentricity over all nodes (infinite distances ignored).
    pub fn diameter(&self) -> u64 {
        (0..self.n)
            .map(|i| self.eccentricity(i).expect("node in range"))
            .max()
            .unwrap_or(0)
    }

    /// True iff every pairwise distance is finite.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let forward = self.reach_count(0, &self.out_adj);
        let backward = self.reach_count(0, &self.in_adj);
        forward == self.n && backward == self.n
    }

    fn reach_count(&self, start: usize, adj: &[Vec<usize>]) -> usize {
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count
    }

    /// The p-neighbourhood of `xs`: all nodes at distance at most `p` to some
    /// member of `xs`. Multi-source BFS on the transpose.
    pub fn neighborhood_set(
        &self,
        xs: &BTreeSet<usize>,
        p: usize,
    ) -> Result<BTreeSet<usize>, GraphError> {
        let mut dist = vec![Distance::INFINITE; self.n];
        let mut queue = VecDeque::new();
        for &i in xs {
            self.check_node(i)?;
            if !dist[i].is_finite() {
                dist[i] = Distance::finite(0);
                queue.push_back(i);
            }
        }
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].as_finite().expect("queued node is reached");
            if dv == p {
                continue;
            }
            for &w in &self.in_adj[v] {
                if !dist[w].is_finite() {
                    dist[w] = Distance::finite(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok((0..self.n).filter(|&v| dist[v].is_finite()).collect())
    }

    /// The k-th power: same nodes, an edge `i -- j` iff `d(i, j) = k`.
    /// Undirected input only.
    pub fn power(&self, k: usize) -> Result<Graph, GraphError> {
        if self.orientation != Orientation::Undirected {
            return Err(GraphError::DirectedInput);
        }
        let mut edges = Vec::new();
        for i in 0..self.n {
            let row = self.distances_to(i)?;
            for j in i + 1..self.n {
                if row.dist()[j] == Distance::finite(k) {
                    edges.push((i, j));
                }
            }
        }
        Graph::undirected(self.n, &edges)
    }

    /// Parse the graph text format: header `D <n>` or `U <n>`, then one
    /// `<tail> <head>` pair per line; `#` lines are comments.
    pub fn parse(text: &str) -> Result<Graph, GraphParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, line)| (idx + 1, line.trim()))
            .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));

        let (header_no, header) = lines.next().ok_or(GraphParseError::MissingHeader)?;
        let mut parts = header.split_whitespace();
        let orientation = match parts.next() {
            Some("D") => Orientation::Directed,
            Some("U") => Orientation::Undirected,
            _ => return Err(GraphParseError::BadHeader(header_no)),
        };
        let n: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(GraphParseError::BadHeader(header_no))?;
        if parts.next().is_some() {
            return Err(GraphParseError::BadHeader(header_no));
        }

        let mut arcs = Vec::new();
        let mut arc_lines = Vec::new();
        for (line_no, line) in lines {
            let mut parts = line.split_whitespace();
            let arc = (|| {
                let x: usize = parts.next()?.parse().ok()?;
                let y: usize = parts.next()?.parse().ok()?;
                if parts.next().is_some() {
                    return None;
                }
                Some((x, y))
            })();
            match arc {
                Some(arc) => {
                    arcs.push(arc);
                    arc_lines.push(line_no);
                }
                None => return Err(GraphParseError::BadArc(line_no)),
            }
        }

        match Self::build(n, orientation, &arcs) {
            Ok(g) => Ok(g),
            Err(source) => {
                // Attribute the failure to the first line that introduces it.
                let at = (0..arcs.len())
                    .find(|&idx| Self::build(n, orientation, &arcs[..=idx]).is_err());
                Err(GraphParseError::Invalid {
                    line: at.map(|idx| arc_lines[idx]).unwrap_or(0),
                    source,
                })
            }
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.orientation {
            Orientation::Directed => "D",
            Orientation::Undirected => "U",
        };
        writeln!(f, "{tag} {}", self.n)?;
        for (x, y) in self.edges() {
            writeln!(f, "{x} {y}")?;
        }
        Ok(())
    }
}
