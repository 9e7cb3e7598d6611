//! Helpers shared by the integration suites: random labeled trees and the
//! deliberately independent brute-force checks used as second routes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use stemspan::graph::Graph;
use stemspan::tree::TreeSubgraph;
use stemspan::Edge;

/// Decodes a sequence over 0..n into the edge list of a labeled tree.
pub fn sequence_tree(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &a in seq {
        degree[a] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &a in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always remains");
        edges.push((leaf, a));
        degree[leaf] = 0;
        degree[a] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    assert_eq!(rest.len(), 2);
    edges.push((rest[0], rest[1]));
    edges
}

/// A uniform random labeled tree on `n` vertices, as a spanning tree of
/// itself.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> TreeSubgraph {
    let host;
    if n == 1 {
        host = Arc::new(Graph::new(1, &[]).unwrap());
        return TreeSubgraph::singleton(host, 0).unwrap();
    }
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.random_range(0..n)).collect();
    let pairs = sequence_tree(&seq, n);
    host = Arc::new(Graph::new(n, &pairs).unwrap());
    let edges: Vec<Edge> = host.edges().to_vec();
    TreeSubgraph::from_edges(host, edges).unwrap()
}

/// Independent claw check: enumerate every 4-subset and test it for an
/// induced star on three non-adjacent endpoints. A different route from the
/// per-neighborhood triple scan in the library.
pub fn claw_free_by_subsets(g: &Graph) -> bool {
    let n = g.order();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let quad = [a, b, c, d];
                    for (ci, &center) in quad.iter().enumerate() {
                        let mut others = quad.to_vec();
                        others.remove(ci);
                        let star = others.iter().all(|&x| g.has_edge(center, x));
                        let independent = !g.has_edge(others[0], others[1])
                            && !g.has_edge(others[0], others[2])
                            && !g.has_edge(others[1], others[2]);
                        if star && independent {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Independent maximum-independent-set size by bitmask enumeration.
pub fn mis_by_bitmask(g: &Graph) -> usize {
    let n = g.order();
    assert!(n <= 20);
    let mut adj = vec![0u32; n];
    for e in g.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let mut ok = true;
        for v in 0..n {
            if mask & (1 << v) != 0 && adj[v] & mask != 0 {
                ok = false;
                break;
            }
        }
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}
