//! Seeded random graph generation, shared by the test suites and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Orientation};

/// Default seed for reproducible tooling.
pub const DEFAULT_SEED: u64 = 0x5eed_dc11;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph on `n` nodes with independent arc probability `density`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64, mode: Orientation) -> Graph {
    let mut pairs = Vec::new();
    match mode {
        Orientation::Directed => {
            for x in 0..n {
                for y in 0..n {
                    if x != y && rng.gen_bool(density) {
                        pairs.push((x, y));
                    }
                }
            }
            Graph::directed(n, &pairs).expect("generated arcs are simple")
        }
        Orientation::Undirected => {
            for x in 0..n {
                for y in x + 1..n {
                    if rng.gen_bool(density) {
                        pairs.push((x, y));
                    }
                }
            }
            Graph::undirected(n, &pairs).expect("generated edges are simple")
        }
    }
}
