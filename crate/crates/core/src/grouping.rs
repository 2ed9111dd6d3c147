//! Finite groupings of edge-indexed graphs.
//!
//! A connected edge-indexed graph admits a finite grouping exactly when there
//! is a positive integer vertex function `N` with
//! `i(e) / i(ē) = N(∂₀e) / N(∂₁e)` on every oriented edge. Such an `N` is
//! unique up to scaling; we report it normalized to `gcd = 1`. When none
//! exists, a closed walk whose ratio product differs from 1 is returned.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeIndexedGraph, VertexId};

/// Integral vertex ordering, indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    pub values: Vec<BigUint>,
}

impl VertexOrdering {
    pub fn get(&self, v: VertexId) -> &BigUint {
        &self.values[v.0]
    }

    pub fn is_normalized(&self) -> bool {
        self.values.iter().fold(BigUint::zero(), |g, x| g.gcd(x)).is_one()
    }

    pub fn normalized(&self) -> Self {
        let g = self.values.iter().fold(BigUint::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return self.clone();
        }
        Self { values: self.values.iter().map(|x| x / &g).collect() }
    }
}

/// No integral vertex ordering exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoGrouping {
    /// Closed walk (edge sequence) on which `Π i(e)/i(ē) ≠ 1`.
    pub witness: Vec<EdgeId>,
    pub ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupingOutcome {
    Ordering(VertexOrdering),
    NoGrouping(NoGrouping),
}

impl GroupingOutcome {
    pub fn ordering(&self) -> Option<&VertexOrdering> {
        match self {
            GroupingOutcome::Ordering(n) => Some(n),
            GroupingOutcome::NoGrouping(_) => None,
        }
    }

    pub fn admits_finite_grouping(&self) -> bool {
        matches!(self, GroupingOutcome::Ordering(_))
    }
}

/// `i(e) / i(ē)`
pub fn edge_ratio(graph: &EdgeIndexedGraph, e: EdgeId) -> BigRational {
    let edge = graph.edge(e);
    BigRational::new(edge.index.into(), graph.edge(edge.reverse).index.into())
}

/// Product of `i(e)/i(ē)` along a walk.
pub fn walk_ratio(graph: &EdgeIndexedGraph, walk: &[EdgeId]) -> BigRational {
    walk.iter().fold(BigRational::one(), |acc, &e| acc * edge_ratio(graph, e))
}

pub fn find_vertex_ordering(graph: &EdgeIndexedGraph) -> Result<GroupingOutcome> {
    find_vertex_ordering_from(graph, VertexId(0))
}

/// Propagates `N` along a breadth-first spanning tree rooted at `root` and
/// checks every non-tree edge.
pub fn find_vertex_ordering_from(graph: &EdgeIndexedGraph, root: VertexId) -> Result<GroupingOutcome> {
    graph.require_connected()?;
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(GroupingOutcome::Ordering(VertexOrdering { values: Vec::new() }));
    }
    let mut value: Vec<Option<BigRational>> = vec![None; n];
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut tree_edge = vec![false; graph.oriented_edge_count()];
    value[root.0] = Some(BigRational::one());
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let nu = value[u.0].clone().expect("visited");
        for &e in graph.outgoing(u) {
            let w = graph.edge(e).terminus;
            if value[w.0].is_none() {
                // N(w) = N(u) · i(ē) / i(e)
                value[w.0] = Some(&nu / edge_ratio(graph, e));
                parent_edge[w.0] = Some(e);
                tree_edge[e.0] = true;
                tree_edge[graph.edge(e).reverse.0] = true;
                queue.push_back(w);
            }
        }
    }
    for e in graph.edge_ids() {
        if tree_edge[e.0] {
            continue;
        }
        let edge = graph.edge(e);
        let nu = value[edge.origin.0].as_ref().expect("connected");
        let nw = value[edge.terminus.0].as_ref().expect("connected");
        if edge_ratio(graph, e) != nu / nw {
            let witness = fundamental_cycle(graph, &parent_edge, e);
            let ratio = walk_ratio(graph, &witness);
            return Ok(GroupingOutcome::NoGrouping(NoGrouping { witness, ratio }));
        }
    }
    let values: Vec<BigRational> = value.into_iter().map(|v| v.expect("connected")).collect();
    let lcm = values.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let ints: Vec<BigUint> = values
        .iter()
        .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer().to_biguint().expect("positive"))
        .collect();
    Ok(GroupingOutcome::Ordering(VertexOrdering { values: ints }.normalized()))
}

fn root_path(graph: &EdgeIndexedGraph, parent_edge: &[Option<EdgeId>], mut v: VertexId) -> Vec<EdgeId> {
    let mut path = Vec::new();
    while let Some(e) = parent_edge[v.0] {
        path.push(e);
        v = graph.edge(e).origin;
    }
    path.reverse();
    path
}

/// Tree path to `∂₀e`, then `e`, then back along the tree from `∂₁e`, with the
/// common prefix of the two tree paths removed.
fn fundamental_cycle(graph: &EdgeIndexedGraph, parent_edge: &[Option<EdgeId>], e: EdgeId) -> Vec<EdgeId> {
    let edge = graph.edge(e);
    let to_u = root_path(graph, parent_edge, edge.origin);
    let to_w = root_path(graph, parent_edge, edge.terminus);
    let common = to_u.iter().zip(&to_w).take_while(|(a, b)| a == b).count();
    let mut cycle: Vec<EdgeId> = to_u[common..].to_vec();
    cycle.push(e);
    cycle.extend(to_w[common..].iter().rev().map(|&f| graph.edge(f).reverse));
    cycle
}

/// Checks the ordering equation on every oriented edge.
pub fn verify_ordering(graph: &EdgeIndexedGraph, ordering: &VertexOrdering) -> Result<bool> {
    if ordering.values.len() != graph.vertex_count() {
        let missing = graph.vertices().nth(ordering.values.len()).map(|v| graph.name(v).to_string());
        return Err(Error::UnknownVertex(missing.unwrap_or_default()));
    }
    Ok(graph.edge_ids().all(|e| {
        let edge = graph.edge(e);
        let back = graph.edge(edge.reverse).index;
        let (n_end, n_start) = (ordering.get(edge.terminus), ordering.get(edge.origin));
        // i(e) N(∂₁e) = i(ē) N(∂₀e)
        let small = n_end.to_u64().zip(n_start.to_u64()).map(|(a, b)| {
            u128::from(a) * u128::from(edge.index) == u128::from(b) * u128::from(back)
        });
        small.unwrap_or_else(|| n_end * edge.index == n_start * back)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, complete_graph, cycle_graph, parse_graph};

    #[test]
    fn unweighted_gives_all_ones() {
        for g in [cycle_graph(4), complete_graph(4), bouquet(3)] {
            let n = find_vertex_ordering(&g).unwrap();
            let n = n.ordering().unwrap();
            assert!(n.values.iter().all(|x| x.is_one()));
            assert!(verify_ordering(&g, n).unwrap());
        }
    }

    #[test]
    fn unbalanced_loop_has_no_grouping() {
        let g = parse_graph("v a\ne a a 1 2").unwrap();
        match find_vertex_ordering(&g).unwrap() {
            GroupingOutcome::NoGrouping(ng) => {
                assert_eq!(ng.witness.len(), 1);
                assert_eq!(ng.ratio, BigRational::new(1.into(), 2.into()));
            }
            other => panic!("expected NoGrouping, got {other:?}"),
        }
    }

    #[test]
    fn witness_is_a_closed_walk() {
        let g = parse_graph("v a\nv b\nv c\ne a b 2 1\ne b c 1 1\ne c a 1 1").unwrap();
        let GroupingOutcome::NoGrouping(ng) = find_vertex_ordering(&g).unwrap() else {
            panic!("triangle with one unbalanced edge has no grouping");
        };
        let w = &ng.witness;
        for k in 0..w.len() {
            assert_eq!(g.edge(w[k]).terminus, g.edge(w[(k + 1) % w.len()]).origin);
        }
        assert_ne!(ng.ratio, BigRational::one());
    }

    #[test]
    fn scaled_ordering_verifies_but_is_not_normalized() {
        let g = cycle_graph(3);
        let sevens = VertexOrdering { values: vec![BigUint::from(7u8); 3] };
        assert!(verify_ordering(&g, &sevens).unwrap());
        assert!(!sevens.is_normalized());
        assert_eq!(sevens.normalized().values, vec![BigUint::one(); 3]);
    }

    #[test]
    fn errors() {
        let g = parse_graph("v a\nv b").unwrap();
        assert_eq!(find_vertex_ordering(&g), Err(Error::Disconnected));
        let short = VertexOrdering { values: vec![BigUint::one()] };
        assert!(verify_ordering(&cycle_graph(3), &short).is_err());
    }
}
