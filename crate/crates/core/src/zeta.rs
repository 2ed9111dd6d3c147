//! Ihara zeta functions of finite graphs.
//!
//! For a finite connected graph `A` with no vertex of degree 1,
//!
//! ```text
//! Z_A(u) = Π_[P] (1 - u^l(P))^-1
//!        = 1 / ((1 - u²)^(χ-1) · det(I - Adj·u + Q·u²))
//!        = 1 / det(I - u·W)
//! ```
//!
//! where `χ = |EA| - |VA| + 1`, `Q = diag(deg - 1)` and `W` is the
//! non-backtracking matrix on oriented edges. The two determinants are
//! computed independently and compared as exact polynomials.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeIndexedGraph, GraphBuilder, VertexId};
use crate::growth::{ln_biguint, transfer_operator, transitions};
use crate::poly::{self, IntPolynomial, IsolatedRoot};
use crate::series::TruncatedSeries;
use crate::Guard;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyData {
    /// Loops contribute 2 to the diagonal.
    pub adjacency: Vec<Vec<i64>>,
    /// `deg(v) - 1` per vertex.
    pub q_diagonal: Vec<i64>,
    /// `|EA| - |VA| + 1`.
    pub chi: i64,
}

fn require_zeta_input(graph: &EdgeIndexedGraph) -> Result<()> {
    graph.require_connected()?;
    if !graph.is_unweighted() {
        return Err(Error::Weighted);
    }
    if let Some(v) = graph.vertices().find(|&v| graph.degree(v) == 1) {
        return Err(Error::DegreeOne(graph.name(v).to_string()));
    }
    if graph.edge_count() < graph.vertex_count() {
        return Err(Error::Acyclic);
    }
    Ok(())
}

pub fn adjacency_matrices(graph: &EdgeIndexedGraph) -> Result<AdjacencyData> {
    require_zeta_input(graph)?;
    let n = graph.vertex_count();
    let mut adjacency = vec![vec![0i64; n]; n];
    // Each oriented edge adds 1 at (origin, terminus); a loop has two orientations.
    for e in graph.edges() {
        adjacency[e.origin.0][e.terminus.0] += 1;
    }
    let q_diagonal = graph.vertices().map(|v| graph.degree(v) as i64 - 1).collect();
    let chi = graph.edge_count() as i64 - n as i64 + 1;
    Ok(AdjacencyData { adjacency, q_diagonal, chi })
}

/// `det(I - Adj·u + Q·u²)`.
pub fn vertex_determinant(data: &AdjacencyData) -> IntPolynomial {
    let n = data.adjacency.len();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = i64::from(i == j);
                    let quad = if i == j { data.q_diagonal[i] } else { 0 };
                    IntPolynomial::from_i64s(&[diag, -data.adjacency[i][j], quad])
                })
                .collect()
        })
        .collect();
    poly::determinant(m)
}

/// `det(I - u·W)`.
pub fn edge_determinant(graph: &EdgeIndexedGraph) -> IntPolynomial {
    transfer_operator(graph).reversed_characteristic()
}

/// `(1 - u²)^k`
pub fn one_minus_u2_pow(k: u32) -> IntPolynomial {
    IntPolynomial::from_i64s(&[1, 0, -1]).pow(k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub chi: i64,
    /// `det(I - Adj·u + Q·u²)`.
    pub det_poly: IntPolynomial,
    /// `det(I - u·W)`.
    pub w_poly: IntPolynomial,
    /// `w_poly == (1 - u²)^(|EA|-|VA|) · det_poly`.
    pub bass_identity: bool,
    /// Radius of convergence `R_A`: smallest positive root of `w_poly`.
    pub radius: IsolatedRoot,
    pub lambda_max: f64,
    /// Gcd of prime lengths.
    pub period: u64,
    /// `π_A(n)` for `n = 1..=max_len` (entry `k` holds `n = k + 1`).
    pub prime_counts: Vec<BigUint>,
    /// `N_A(m)` for `m = 1..=max_len`.
    pub cycle_counts: Vec<BigUint>,
}

/// Both determinant formulas, the radius of convergence, and prime counts up to `max_len`.
pub fn ihara_zeta(graph: &EdgeIndexedGraph, max_len: usize) -> Result<ZetaReport> {
    let data = adjacency_matrices(graph)?;
    let det_poly = vertex_determinant(&data);
    let w_poly = edge_determinant(graph);
    let excess = (graph.edge_count() - graph.vertex_count()) as u32;
    let bass_identity = w_poly == &one_minus_u2_pow(excess) * &det_poly;
    let max_degree = graph.vertices().map(|v| graph.degree(v)).max().unwrap_or(1);
    let tol = BigRational::new(BigInt::one(), BigInt::from(max_degree) * BigInt::from(10u64.pow(12)));
    let radius = poly::smallest_positive_root(&w_poly, &tol).ok_or(Error::Acyclic)?;
    let lambda_max = match radius.exact() {
        Some(r) => poly::rational_to_f64(&r.recip()),
        None => 1.0 / radius.approx(),
    };
    let cycle_counts = cycle_counts(graph, max_len)?;
    let prime_counts = primes_from_cycle_counts(&cycle_counts);
    Ok(ZetaReport {
        vertex_count: graph.vertex_count(),
        edge_count: graph.edge_count(),
        chi: data.chi,
        det_poly,
        w_poly,
        bass_identity,
        radius,
        lambda_max,
        period: period(graph)?,
        prime_counts,
        cycle_counts,
    })
}

/// `N_A(m) = trace(W^m)` for `m = 1..=max_len`.
pub fn cycle_counts(graph: &EdgeIndexedGraph, max_len: usize) -> Result<Vec<BigUint>> {
    if !graph.is_unweighted() {
        return Err(Error::Weighted);
    }
    Ok(transfer_operator(graph).traces(max_len))
}

/// Gcd of the lengths of closed non-backtracking cycles, read off the traces
/// up to the dimension of `W` (every cycle of the line digraph is a union of
/// simple ones, which are no longer than that).
pub fn period(graph: &EdgeIndexedGraph) -> Result<u64> {
    let counts = cycle_counts(graph, graph.oriented_edge_count())?;
    let g = counts
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(0u64, |g, (k, _)| g.gcd(&(k as u64 + 1)));
    Ok(g)
}

/// Direct enumeration of closed non-backtracking tail-less edge sequences.
pub fn brute_force_cycle_counts(graph: &EdgeIndexedGraph, max_len: usize, guard: Guard) -> Result<Vec<BigUint>> {
    let mut counts = vec![0u64; max_len];
    let mut steps = 0u64;
    let mut path = Vec::with_capacity(max_len);
    for start in graph.edge_ids() {
        path.clear();
        path.push(start);
        walk(graph, &mut path, max_len, &mut steps, guard, &mut |p| {
            counts[p.len() - 1] += 1;
        })?;
    }
    Ok(counts.into_iter().map(BigUint::from).collect())
}

/// Depth-first extension of `path`; calls `found` on every prefix that closes
/// up into a tail-less cycle. Only edges `≥ path[0]` are used when `min_first`.
fn walk_filtered(
    graph: &EdgeIndexedGraph,
    path: &mut Vec<EdgeId>,
    max_len: usize,
    min_first: bool,
    steps: &mut u64,
    guard: Guard,
    found: &mut dyn FnMut(&[EdgeId]),
) -> Result<()> {
    *steps += 1;
    if *steps > guard.0 {
        return Err(Error::GuardExceeded { limit: guard.0 });
    }
    let first = path[0];
    let last = *path.last().unwrap();
    let closes = graph.edge(last).terminus == graph.edge(first).origin && graph.edge(last).reverse != first;
    if closes {
        found(path);
    }
    if path.len() == max_len {
        return Ok(());
    }
    for &f in graph.outgoing(graph.edge(last).terminus) {
        if f == graph.edge(last).reverse || (min_first && f < first) {
            continue;
        }
        path.push(f);
        walk_filtered(graph, path, max_len, min_first, steps, guard, found)?;
        path.pop();
    }
    Ok(())
}

fn walk(
    graph: &EdgeIndexedGraph,
    path: &mut Vec<EdgeId>,
    max_len: usize,
    steps: &mut u64,
    guard: Guard,
    found: &mut dyn FnMut(&[EdgeId]),
) -> Result<()> {
    walk_filtered(graph, path, max_len, false, steps, guard, found)
}

/// Equivalence classes of primitive closed non-backtracking tail-less cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    /// Rotation-minimal representatives, sorted by length then lexicographically.
    pub primes: Vec<Vec<EdgeId>>,
    /// `π_A(n)` for `n = 1..=max_len` (entry `k` holds `n = k + 1`).
    pub counts: Vec<u64>,
    /// Gcd of the lengths found (0 if none).
    pub period: u64,
}

fn is_rotation_minimal(seq: &[EdgeId]) -> bool {
    let n = seq.len();
    (1..n).all(|r| {
        let rotated = seq[r..].iter().chain(&seq[..r]);
        seq.iter().le(rotated)
    })
}

fn is_primitive(seq: &[EdgeId]) -> bool {
    let n = seq.len();
    (1..n).filter(|&d| n.is_multiple_of(d)).all(|d| (0..n).any(|k| seq[k] != seq[(k + d) % n]))
}

pub fn enumerate_primes(graph: &EdgeIndexedGraph, max_len: usize, guard: Guard) -> Result<PrimeTable> {
    if !graph.is_unweighted() {
        return Err(Error::Weighted);
    }
    let mut primes: Vec<Vec<EdgeId>> = Vec::new();
    let mut steps = 0u64;
    let mut path = Vec::with_capacity(max_len);
    for start in graph.edge_ids() {
        path.clear();
        path.push(start);
        walk_filtered(graph, &mut path, max_len, true, &mut steps, guard, &mut |p| {
            if is_rotation_minimal(p) && is_primitive(p) {
                primes.push(p.to_vec());
            }
        })?;
    }
    primes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut counts = vec![0u64; max_len];
    for p in &primes {
        counts[p.len() - 1] += 1;
    }
    let period = primes.iter().fold(0u64, |g, p| g.gcd(&(p.len() as u64)));
    Ok(PrimeTable { primes, counts, period })
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Inverts `N(m) = Σ_{d | m} d·π(d)`.
pub fn primes_from_cycle_counts(counts: &[BigUint]) -> Vec<BigUint> {
    (1..=counts.len() as u64)
        .map(|n| {
            let mut acc = BigInt::zero();
            for d in (1..=n).filter(|d| n % d == 0) {
                let term = BigInt::from(counts[d as usize - 1].clone());
                match mobius(n / d) {
                    1 => acc += term,
                    -1 => acc -= term,
                    _ => {}
                }
            }
            let (q, r) = acc.div_rem(&BigInt::from(n));
            debug_assert!(r.is_zero());
            q.to_biguint().expect("prime counts are nonnegative")
        })
        .collect()
}

/// `1 / det(I - u·W)` as a truncated series.
pub fn zeta_series(w_poly: &IntPolynomial, degree: usize) -> Result<TruncatedSeries> {
    TruncatedSeries::one(degree).div(&TruncatedSeries::from_poly(w_poly, degree))
}

/// `Π (1 - u^l(P))^-1` over the given prime lengths, truncated.
pub fn euler_product(prime_counts: &[u64], degree: usize) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(degree);
    for (k, &count) in prime_counts.iter().enumerate() {
        let len = k + 1;
        if len > degree {
            break;
        }
        // (1 - u^len)^-1 = Σ_j u^(j·len)
        let mut factor = TruncatedSeries::zero(degree);
        let mut coeffs = factor.coeffs().to_vec();
        for j in (0..=degree).step_by(len) {
            coeffs[j] = BigRational::one();
        }
        factor = TruncatedSeries::new(coeffs, degree);
        for _ in 0..count {
            acc = acc.mul(&factor)?;
        }
    }
    Ok(acc)
}

/// `u · d/du log Z(u) = -u·p'(u)/p(u)` for `Z = 1/p`.
pub fn log_derivative_series(w_poly: &IntPolynomial, degree: usize) -> Result<TruncatedSeries> {
    let p = TruncatedSeries::from_poly(w_poly, degree);
    let dp = TruncatedSeries::from_poly(&w_poly.derivative(), degree);
    let ratio = dp.div(&p)?;
    Ok(ratio.shift().scale(&-BigRational::one()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PgtTable {
    pub period: u64,
    pub radius: f64,
    /// `(n, n·Δ·π(nΔ)·R^(nΔ))` for `n = 1..=nmax`.
    pub rows: Vec<(usize, f64)>,
    /// Value the rows approach: `Δ`, since all `Δ` eigenvalues `λ_max·ζ` with
    /// `ζ^Δ = 1` contribute equally at lengths divisible by `Δ`.
    pub limit: f64,
    /// Largest `|value - limit|` over the last ten rows.
    pub tail_deviation: f64,
}

/// Prime geodesic theorem check from exact prime counts.
pub fn pgt_check(graph: &EdgeIndexedGraph, nmax: usize) -> Result<PgtTable> {
    require_zeta_input(graph)?;
    if graph.vertices().all(|v| graph.degree(v) == 2) {
        return Err(Error::DegenerateSpectrum);
    }
    let report = ihara_zeta(graph, 1)?;
    let period = report.period as usize;
    let radius = report.radius.approx();
    let counts = cycle_counts(graph, nmax * period)?;
    let primes = primes_from_cycle_counts(&counts);
    let ln_lambda = report.lambda_max.ln();
    let rows: Vec<(usize, f64)> = (1..=nmax)
        .map(|n| {
            let len = n * period;
            let pi = &primes[len - 1];
            let value = if pi.is_zero() {
                0.0
            } else {
                ((len as f64).ln() + ln_biguint(pi) - len as f64 * ln_lambda).exp()
            };
            (n, value)
        })
        .collect();
    let limit = report.period as f64;
    let tail_deviation = rows.iter().rev().take(10).map(|(_, v)| (v - limit).abs()).fold(0.0, f64::max);
    Ok(PgtTable { period: report.period, radius, rows, limit, tail_deviation })
}

/// Two cycles of lengths `a` and `b` joined by a path with `n` edges.
///
/// Vertices: `a0..a{a-1}`, `b0..b{b-1}`, and path interior `x1..x{n-1}`; the
/// path runs from `a0` to `b0`. A cycle of length 1 is a loop and of length 2
/// a pair of parallel edges.
pub fn dumbbell(a: usize, b: usize, n: usize) -> Result<EdgeIndexedGraph> {
    if a == 0 || b == 0 || n == 0 {
        return Err(Error::InvalidArgument("dumbbell parameters must be positive".into()));
    }
    let mut g = GraphBuilder::new();
    let ring = |g: &mut GraphBuilder, prefix: &str, len: usize| -> Vec<VertexId> {
        let vs: Vec<VertexId> = (0..len).map(|k| g.add_vertex(format!("{prefix}{k}")).unwrap()).collect();
        for k in 0..len {
            g.add_edge(vs[k], vs[(k + 1) % len], 1, 1).unwrap();
        }
        vs
    };
    let left = ring(&mut g, "a", a);
    let right = ring(&mut g, "b", b);
    let mut prev = left[0];
    for k in 1..n {
        let v = g.add_vertex(format!("x{k}"))?;
        g.add_edge(prev, v, 1, 1)?;
        prev = v;
    }
    g.add_edge(prev, right[0], 1, 1)?;
    g.set_base(left[0]);
    Ok(g.build())
}

/// Walk helper shared with tests: does `seq` close up without backtracking?
pub fn is_tailless_cycle(graph: &EdgeIndexedGraph, seq: &[EdgeId]) -> bool {
    let n = seq.len();
    n > 0
        && (0..n).all(|k| {
            let (e, f) = (seq[k], seq[(k + 1) % n]);
            graph.edge(e).terminus == graph.edge(f).origin && graph.edge(e).reverse != f
        })
}

/// Exposed so callers can reuse the transition structure without a matrix.
pub fn non_backtracking_successors(graph: &EdgeIndexedGraph, e: EdgeId) -> Vec<EdgeId> {
    transitions(graph, e).map(|(f, _)| f).collect()
}
