//! Finite edge-indexed graphs.
//!
//! A graph is a multigraph (loops and parallel edges allowed) whose undirected
//! edges are stored as pairs of oriented edges `e`, `ē`. Every oriented edge
//! carries a positive integer index `i(e)`. The index of `e` counts how many
//! lifts of `e` leave a lift of its origin in the universal covering tree, so
//! the degree of a lifted vertex is the sum of the indices of the edges leaving
//! it (see [`EdgeIndexedGraph::cover_degree`]).
//!
//! Text format, one directive per line:
//!
//! ```text
//! # comment
//! v <name>
//! e <u> <v> <i(u->v)> <i(v->u)>
//! base <name>
//! t <name>
//! ```
//!
//! `t` marks a truncated vertex: a vertex whose neighbourhood has been cut off
//! when a larger (possibly infinite) graph was truncated.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedEdge {
    pub origin: VertexId,
    pub terminus: VertexId,
    pub reverse: EdgeId,
    pub index: u64,
}

#[derive(Debug, Clone)]
pub struct EdgeIndexedGraph {
    names: Vec<String>,
    /// Built on the first by-name query.
    lookup: OnceLock<HashMap<String, VertexId>>,
    edges: Vec<OrientedEdge>,
    outgoing: Adjacency,
    incoming: Adjacency,
    truncated: Vec<bool>,
    base: Option<VertexId>,
}

/// Edge lists per vertex in compressed form, each list in edge-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Adjacency {
    offsets: Vec<usize>,
    edges: Vec<EdgeId>,
}

impl Adjacency {
    fn new(vertex_count: usize, edges: &[OrientedEdge], key: impl Fn(&OrientedEdge) -> VertexId) -> Self {
        let mut offsets = vec![0; vertex_count + 1];
        for e in edges {
            offsets[key(e).0 + 1] += 1;
        }
        for v in 0..vertex_count {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut list = vec![EdgeId(0); edges.len()];
        for (k, e) in edges.iter().enumerate() {
            let slot = &mut fill[key(e).0];
            list[*slot] = EdgeId(k);
            *slot += 1;
        }
        Adjacency { offsets, edges: list }
    }

    fn get(&self, v: VertexId) -> &[EdgeId] {
        &self.edges[self.offsets[v.0]..self.offsets[v.0 + 1]]
    }
}

/// Incremental constructor; the finished graph is immutable.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    names: Vec<String>,
    /// Covers every name unless `stale`.
    lookup: HashMap<String, VertexId>,
    stale: bool,
    edges: Vec<OrientedEdge>,
    truncated: Vec<bool>,
    base: Option<VertexId>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        self.refresh();
        if self.lookup.contains_key(&name) {
            return Err(Error::DuplicateVertex(name));
        }
        let id = VertexId(self.names.len());
        self.lookup.insert(name.clone(), id);
        self.names.push(name);
        self.truncated.push(false);
        Ok(id)
    }

    /// Adds a vertex whose name the caller guarantees to be new, skipping the
    /// name index. Used for large generated graphs.
    pub(crate) fn add_generated_vertex(&mut self, name: String) -> VertexId {
        let id = VertexId(self.names.len());
        self.names.push(name);
        self.truncated.push(false);
        self.stale = true;
        id
    }

    fn refresh(&mut self) {
        if self.stale {
            self.lookup = index_names(&self.names);
            self.stale = false;
        }
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        if self.stale {
            return self.names.iter().position(|n| n == name).map(VertexId);
        }
        self.lookup.get(name).copied()
    }

    /// Adds the oriented pair `u -> v` (index `forward`) and `v -> u`
    /// (index `backward`). Returns the id of the `u -> v` edge.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, forward: u64, backward: u64) -> Result<EdgeId> {
        for id in [u, v] {
            if id.0 >= self.names.len() {
                return Err(Error::UnknownVertex(format!("#{}", id.0)));
            }
        }
        for index in [forward, backward] {
            if index == 0 {
                return Err(Error::InvalidIndex(0));
            }
        }
        let e = EdgeId(self.edges.len());
        let r = EdgeId(e.0 + 1);
        self.edges.push(OrientedEdge { origin: u, terminus: v, reverse: r, index: forward });
        self.edges.push(OrientedEdge { origin: v, terminus: u, reverse: e, index: backward });
        Ok(e)
    }

    pub fn add_edge_by_name(&mut self, u: &str, v: &str, forward: u64, backward: u64) -> Result<EdgeId> {
        let a = self.vertex(u).ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
        let b = self.vertex(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
        self.add_edge(a, b, forward, backward)
    }

    pub fn set_base(&mut self, v: VertexId) {
        self.base = Some(v);
    }

    pub fn mark_truncated(&mut self, v: VertexId) {
        self.truncated[v.0] = true;
    }

    pub fn build(self) -> EdgeIndexedGraph {
        let n = self.names.len();
        let outgoing = Adjacency::new(n, &self.edges, |e| e.origin);
        let incoming = Adjacency::new(n, &self.edges, |e| e.terminus);
        EdgeIndexedGraph {
            names: self.names,
            lookup: if self.stale { OnceLock::new() } else { OnceLock::from(self.lookup) },
            edges: self.edges,
            outgoing,
            incoming,
            truncated: self.truncated,
            base: self.base,
        }
    }
}

impl EdgeIndexedGraph {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn oriented_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of undirected edges `|EA|`.
    pub fn edge_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &OrientedEdge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[OrientedEdge] {
        &self.edges
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.lookup.get_or_init(|| index_names(&self.names)).get(name).copied()
    }

    pub fn require_vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn base(&self) -> Option<VertexId> {
        self.base
    }

    pub fn is_truncated(&self, v: VertexId) -> bool {
        self.truncated[v.0]
    }

    pub fn has_truncation(&self) -> bool {
        self.truncated.iter().any(|&t| t)
    }

    /// Oriented edges `e` with `∂₀e = v`.
    pub fn outgoing(&self, v: VertexId) -> &[EdgeId] {
        self.outgoing.get(v)
    }

    /// Oriented edges `e` with `∂₁e = v`.
    pub fn incoming(&self, v: VertexId) -> &[EdgeId] {
        self.incoming.get(v)
    }

    /// Undirected degree; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.outgoing.get(v).len()
    }

    /// Degree of any lift of `v` in the universal covering tree:
    /// the sum of `i(e)` over edges leaving `v`.
    pub fn cover_degree(&self, v: VertexId) -> u64 {
        self.outgoing.get(v).iter().map(|&e| self.edges[e.0].index).sum()
    }

    /// True when every non-truncated vertex lifts to a vertex of degree `q + 1`.
    pub fn is_regular_cover(&self, q: u64) -> bool {
        self.vertices()
            .filter(|&v| !self.is_truncated(v))
            .all(|v| self.cover_degree(v) == q + 1)
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.index == 1)
    }

    pub fn is_connected(&self) -> bool {
        if self.names.is_empty() {
            return true;
        }
        self.distances_from(VertexId(0)).iter().all(Option::is_some)
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Breadth-first graph distances from `source`.
    pub fn distances_from(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.names.len()];
        let mut queue = VecDeque::new();
        dist[source.0] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v.0].unwrap_or(0);
            for &e in self.outgoing.get(v) {
                let w = self.edges[e.0].terminus;
                if dist[w.0].is_none() {
                    dist[w.0] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest depth `d` such that every vertex at distance `< d` from
    /// `source` is not truncated. `None` when no truncated vertex is reachable.
    pub fn exact_radius(&self, source: VertexId) -> Option<usize> {
        self.distances_from(source)
            .iter()
            .zip(&self.truncated)
            .filter_map(|(d, &t)| if t { *d } else { None })
            .min()
    }

    /// Canonical text form (see module docs). Vertex and edge order follow
    /// construction order; no trailing newline.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::with_capacity(self.names.len() + self.edges.len() / 2 + 1);
        for name in &self.names {
            lines.push(format!("v {name}"));
        }
        for pair in self.edges.chunks(2) {
            lines.push(format!(
                "e {} {} {} {}",
                self.names[pair[0].origin.0], self.names[pair[0].terminus.0], pair[0].index, pair[1].index
            ));
        }
        if let Some(b) = self.base {
            lines.push(format!("base {}", self.names[b.0]));
        }
        for (name, &t) in self.names.iter().zip(&self.truncated) {
            if t {
                lines.push(format!("t {name}"));
            }
        }
        lines.join("\n")
    }

    /// Order-independent form: vertex lines and normalized edge lines, both sorted.
    /// Two graphs that differ only by the order of their directives have the same
    /// canonical form.
    pub fn canonical_form(&self) -> String {
        let mut vertices: Vec<String> = self.names.iter().map(|n| format!("v {n}")).collect();
        vertices.sort();
        let mut edges: Vec<String> = self
            .edges
            .chunks(2)
            .map(|pair| {
                let (a, b) = (&self.names[pair[0].origin.0], &self.names[pair[0].terminus.0]);
                let (ia, ib) = (pair[0].index, pair[1].index);
                if (a, ia) <= (b, ib) {
                    format!("e {a} {b} {ia} {ib}")
                } else {
                    format!("e {b} {a} {ib} {ia}")
                }
            })
            .collect();
        edges.sort();
        vertices.extend(edges);
        vertices.join("\n")
    }

    /// Copy of the graph with one vertex renamed.
    pub fn renamed(&self, from: &str, to: &str) -> Result<Self> {
        let v = self.require_vertex(from)?;
        if from != to && self.vertex(to).is_some() {
            return Err(Error::DuplicateVertex(to.to_string()));
        }
        let mut g = self.clone();
        g.names[v.0] = to.to_string();
        g.lookup = OnceLock::new();
        Ok(g)
    }

    /// Closed walk as a space-separated list `u->v` of its edges.
    pub fn describe_edges(&self, walk: &[EdgeId]) -> String {
        walk.iter()
            .map(|&e| {
                let edge = &self.edges[e.0];
                format!("{}->{}", self.names[edge.origin.0], self.names[edge.terminus.0])
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn index_names(names: &[String]) -> HashMap<String, VertexId> {
    names.iter().enumerate().map(|(k, n)| (n.clone(), VertexId(k))).collect()
}

impl PartialEq for EdgeIndexedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.edges == other.edges
            && self.truncated == other.truncated
            && self.base == other.base
    }
}

impl Eq for EdgeIndexedGraph {}

impl fmt::Display for EdgeIndexedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses the line format described in the module docs. Disconnected graphs are
/// accepted; callers that need connectivity check it themselves.
pub fn parse_graph(text: &str) -> Result<EdgeIndexedGraph> {
    let mut builder = GraphBuilder::new();
    let mut base = None;
    let mut truncated = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "v" => {
                if fields.len() != 2 {
                    return Err(parse_err("expected `v <name>`".into()));
                }
                builder.add_vertex(fields[1])?;
            }
            "e" => {
                if fields.len() != 5 {
                    return Err(parse_err("expected `e <u> <v> <i_uv> <i_vu>`".into()));
                }
                let forward = parse_index(fields[3], line_no)?;
                let backward = parse_index(fields[4], line_no)?;
                builder.add_edge_by_name(fields[1], fields[2], forward, backward)?;
            }
            "base" => {
                if fields.len() != 2 {
                    return Err(parse_err("expected `base <name>`".into()));
                }
                base = Some(fields[1].to_string());
            }
            "t" => {
                if fields.len() != 2 {
                    return Err(parse_err("expected `t <name>`".into()));
                }
                truncated.push(fields[1].to_string());
            }
            other => return Err(parse_err(format!("unknown directive `{other}`"))),
        }
    }
    if let Some(name) = base {
        let v = builder.vertex(&name).ok_or(Error::UnknownVertex(name))?;
        builder.set_base(v);
    }
    for name in truncated {
        let v = builder.vertex(&name).ok_or(Error::UnknownVertex(name))?;
        builder.mark_truncated(v);
    }
    Ok(builder.build())
}

fn parse_index(field: &str, line: usize) -> Result<u64> {
    let value: i128 = field
        .parse()
        .map_err(|_| Error::Parse { line, message: format!("index `{field}` is not an integer") })?;
    if value < 1 || value > u64::MAX as i128 {
        return Err(Error::InvalidIndex(value));
    }
    Ok(value as u64)
}

pub fn serialize_graph(graph: &EdgeIndexedGraph) -> String {
    graph.to_text()
}

/// A vertex of a particular graph, validated on construction.
#[derive(Debug, Clone, Copy)]
pub struct MergePoint<'a> {
    pub graph: &'a EdgeIndexedGraph,
    pub vertex: VertexId,
}

impl<'a> MergePoint<'a> {
    pub fn new(graph: &'a EdgeIndexedGraph, name: &str) -> Result<Self> {
        Ok(Self { graph, vertex: graph.require_vertex(name)? })
    }
}

/// Wedge of two graphs: the disjoint union with `x` and `y` identified.
///
/// Vertices of `g1` keep their names and the merged vertex is named after `x`.
/// Vertices of `g2` whose names clash get `'` appended until unique. Edge order
/// is all of `g1` followed by all of `g2`; the base vertex of `g1` is kept.
pub fn merge(g1: &EdgeIndexedGraph, x: &str, g2: &EdgeIndexedGraph, y: &str) -> Result<EdgeIndexedGraph> {
    let left = MergePoint::new(g1, x)?;
    let right = MergePoint::new(g2, y)?;
    Ok(merge_at(left, right).0)
}

/// [`merge`] on validated handles; also returns where each vertex of the
/// right-hand graph ended up.
pub fn merge_at(left: MergePoint<'_>, right: MergePoint<'_>) -> (EdgeIndexedGraph, Vec<VertexId>) {
    let (g1, g2) = (left.graph, right.graph);
    let mut builder = GraphBuilder::new();
    for v in g1.vertices() {
        builder.add_vertex(g1.name(v)).expect("names of a valid graph are unique");
        if g1.is_truncated(v) {
            builder.mark_truncated(v);
        }
    }
    let mut map = Vec::with_capacity(g2.vertex_count());
    for v in g2.vertices() {
        if v == right.vertex {
            map.push(left.vertex);
            continue;
        }
        let mut name = g2.name(v).to_string();
        while builder.vertex(&name).is_some() {
            name.push('\'');
        }
        map.push(builder.add_vertex(name).expect("fresh name"));
    }
    for v in g2.vertices() {
        if g2.is_truncated(v) {
            builder.mark_truncated(map[v.0]);
        }
    }
    for pair in g1.edges().chunks(2) {
        builder.add_edge(pair[0].origin, pair[0].terminus, pair[0].index, pair[1].index).expect("valid edge");
    }
    for pair in g2.edges().chunks(2) {
        builder
            .add_edge(map[pair[0].origin.0], map[pair[0].terminus.0], pair[0].index, pair[1].index)
            .expect("valid edge");
    }
    if let Some(b) = g1.base() {
        builder.set_base(b);
    }
    (builder.build(), map)
}

/// Cycle `C_n` on vertices `c0..c{n-1}` with all indices 1.
pub fn cycle_graph(n: usize) -> EdgeIndexedGraph {
    assert!(n >= 1, "cycle length must be positive");
    let mut b = GraphBuilder::new();
    let vs: Vec<VertexId> = (0..n).map(|k| b.add_vertex(format!("c{k}")).unwrap()).collect();
    for k in 0..n {
        b.add_edge(vs[k], vs[(k + 1) % n], 1, 1).unwrap();
    }
    b.build()
}

/// Complete graph `K_n` with all indices 1.
pub fn complete_graph(n: usize) -> EdgeIndexedGraph {
    let mut b = GraphBuilder::new();
    let vs: Vec<VertexId> = (0..n).map(|k| b.add_vertex(format!("k{k}")).unwrap()).collect();
    for i in 0..n {
        for j in i + 1..n {
            b.add_edge(vs[i], vs[j], 1, 1).unwrap();
        }
    }
    b.build()
}

/// One vertex `o` carrying `loops` loops, all indices 1.
pub fn bouquet(loops: usize) -> EdgeIndexedGraph {
    let mut b = GraphBuilder::new();
    let o = b.add_vertex("o").unwrap();
    for _ in 0..loops {
        b.add_edge(o, o, 1, 1).unwrap();
    }
    b.build()
}
