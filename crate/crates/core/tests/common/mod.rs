//! Random graph generators shared by the integration tests.
#![allow(dead_code)]

use hrgm::UndirectedGraph;
use rand::seq::IndexedRandom;
use rand::Rng;

/// Connected chordal graph: each new vertex joins a nonempty subset of an
/// existing clique, so the reverse insertion order is a perfect elimination order.
pub fn random_chordal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UndirectedGraph {
    let mut cliques: Vec<Vec<usize>> = vec![vec![1]];
    let mut edges = Vec::new();
    for v in 2..=d {
        let base = cliques.choose(rng).expect("nonempty").clone();
        let mut nbrs: Vec<usize> = base.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        if nbrs.is_empty() {
            nbrs.push(*base.choose(rng).expect("nonempty"));
        }
        edges.extend(nbrs.iter().map(|&u| (u, v)));
        nbrs.push(v);
        cliques.push(nbrs);
    }
    UndirectedGraph::new(d, &edges).expect("valid edges")
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected<R: Rng + ?Sized>(d: usize, p: f64, rng: &mut R) -> UndirectedGraph {
    let mut edges = Vec::new();
    for v in 2..=d {
        edges.push((rng.random_range(1..v), v));
    }
    for i in 1..=d {
        for j in i + 1..=d {
            if !edges.contains(&(i, j)) && rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    UndirectedGraph::new(d, &edges).expect("valid edges")
}
