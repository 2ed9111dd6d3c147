//! Graph generators and small exact oracles shared by the integration tests.
#![allow(dead_code)]

use critex::{EdgeIndexedGraph, GraphBuilder, VertexId};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

/// `(u, v, i(u->v), i(v->u))`
pub type EdgeSpec = (usize, usize, u64, u64);

pub fn build(n: usize, edges: &[EdgeSpec]) -> EdgeIndexedGraph {
    let mut b = GraphBuilder::new();
    let vs: Vec<VertexId> = (0..n).map(|k| b.add_vertex(format!("v{k}")).unwrap()).collect();
    for &(u, v, a, c) in edges {
        b.add_edge(vs[u], vs[v], a, c).unwrap();
    }
    b.build()
}

/// Connected multigraph: a random spanning tree plus `extra` random edges
/// (loops and parallel edges allowed), indices drawn from `1..=max_index`.
pub fn random_edges<R: Rng>(rng: &mut R, n: usize, extra: usize, max_index: u64) -> Vec<EdgeSpec> {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, rng.gen_range(1..=max_index), rng.gen_range(1..=max_index)));
    }
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        edges.push((u, v, rng.gen_range(1..=max_index), rng.gen_range(1..=max_index)));
    }
    edges
}

/// Connected unweighted multigraph on `n` vertices with every degree ≥ 2.
pub fn random_min_degree_two<R: Rng>(rng: &mut R, n: usize) -> EdgeIndexedGraph {
    let extra = rng.gen_range(0..=3);
    let mut edges = random_edges(rng, n, extra, 1);
    loop {
        let mut degree = vec![0usize; n];
        for &(u, v, _, _) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        match (0..n).find(|&v| degree[v] < 2) {
            None => break,
            Some(v) => {
                let w = rng.gen_range(0..n);
                edges.push((v, w, 1, 1));
            }
        }
    }
    build(n, &edges)
}

/// Exact `det` of an integer matrix by fraction-free elimination.
pub fn int_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Dense transfer matrix written straight from its definition.
pub fn dense_transfer(g: &EdgeIndexedGraph) -> Vec<Vec<u64>> {
    let n = g.oriented_edge_count();
    let mut b = vec![vec![0u64; n]; n];
    for e in g.edge_ids() {
        for f in g.edge_ids() {
            let (ee, ff) = (g.edge(e), g.edge(f));
            if ff.origin != ee.terminus {
                continue;
            }
            b[e.0][f.0] = if f == ee.reverse { ff.index - 1 } else { ff.index };
        }
    }
    b
}

pub fn mobius(n: u64) -> i64 {
    let (mut n, mut mu, mut p) = (n, 1i64, 2u64);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        -mu
    } else {
        mu
    }
}
