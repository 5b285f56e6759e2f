//! Random instances for tests, benchmarks and the command line.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::words::DOWord;

/// Uniform random labeled tree via a random Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    if n < 2 {
        return g;
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &p in &prufer {
        degree[p] += 1;
    }
    for &p in &prufer {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always remains");
        g.set_edge(leaf, p, true);
        degree[leaf] -= 1;
        degree[p] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    g.set_edge(rest[0], rest[1], true);
    g
}

/// Erdős–Rényi graph with edge probability `p`.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// A random tree overlaid with independent extra edges of probability `p`.
pub fn random_connected_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = random_tree(n, rng);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(p) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// Uniformly shuffled double occurrence word over `n` letters.
pub fn random_word<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DOWord {
    let mut letters: Vec<usize> = (0..2 * n).map(|i| i / 2).collect();
    letters.shuffle(rng);
    DOWord::from_letters(letters).expect("every letter placed twice")
}
