//! Orbit growth in the universal covering tree of an edge-indexed graph.
//!
//! Geodesics in the covering tree project to walks in the quotient that never
//! step from `e` to `ē` *along the same lift*. A step from `e` to `f ≠ ē`
//! (with `∂₀f = ∂₁e`) has `i(f)` lifts; a step from `e` back along `ē` has
//! `i(ē) - 1` lifts, since one of the `i(ē)` lifts is the edge we arrived on.
//! The resulting non-negative integer matrix is the [`TransferOperator`]; with
//! all indices equal to 1 it is the non-backtracking (Hashimoto) matrix.
//!
//! The second half of the module builds the ray quotients that realize every
//! exponent in `[0, ½ log q]`: a ray `x0, x1, ...` where `x_n -> x_{n-1}` has
//! index `q` for `n` in a chosen set `I`, decorated with regular trees so that
//! the cover is the `(q+1)`-regular tree.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeIndexedGraph, GraphBuilder, VertexId};
use crate::grouping::{verify_ordering, VertexOrdering};
use crate::poly::{self, IntPolynomial, IsolatedRoot};
use crate::Guard;

/// Weighted non-backtracking steps out of `e`: `(f, weight)` pairs with nonzero weight.
pub fn transitions(graph: &EdgeIndexedGraph, e: EdgeId) -> impl Iterator<Item = (EdgeId, u64)> + '_ {
    let edge = graph.edge(e);
    let back = edge.reverse;
    graph.outgoing(edge.terminus).iter().filter_map(move |&f| {
        let w = graph.edge(f).index;
        let w = if f == back { w - 1 } else { w };
        (w > 0).then_some((f, w))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferOperator {
    rows: Vec<Vec<(EdgeId, u64)>>,
}

pub fn transfer_operator(graph: &EdgeIndexedGraph) -> TransferOperator {
    TransferOperator { rows: graph.edge_ids().map(|e| transitions(graph, e).collect()).collect() }
}

impl TransferOperator {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, e: EdgeId, f: EdgeId) -> u64 {
        self.rows[e.0].iter().filter(|(g, _)| *g == f).map(|(_, w)| w).sum()
    }

    pub fn row(&self, e: EdgeId) -> &[(EdgeId, u64)] {
        &self.rows[e.0]
    }

    pub fn row_sum(&self, e: EdgeId) -> u64 {
        self.rows[e.0].iter().map(|(_, w)| w).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let n = self.dimension();
        let mut m = vec![vec![0; n]; n];
        for (e, row) in self.rows.iter().enumerate() {
            for &(f, w) in row {
                m[e][f.0] += w;
            }
        }
        m
    }

    /// `det(I - u·B)` by fraction-free elimination over `Z[u]`.
    pub fn reversed_characteristic(&self) -> IntPolynomial {
        let n = self.dimension();
        let mut m = vec![vec![IntPolynomial::zero(); n]; n];
        for (e, row) in m.iter_mut().enumerate() {
            row[e] = IntPolynomial::one();
            for &(f, w) in &self.rows[e] {
                row[f.0] = &row[f.0] - &IntPolynomial::monomial(BigInt::from(w), 1);
            }
        }
        poly::determinant(m)
    }

    /// `trace(B^m)` for `m = 1..=max_len`, by propagating each basis vector.
    pub fn traces(&self, max_len: usize) -> Vec<BigUint> {
        let n = self.dimension();
        let mut out = vec![BigUint::zero(); max_len];
        for start in 0..n {
            let mut vec: BTreeMap<usize, BigUint> = BTreeMap::from([(start, BigUint::one())]);
            for slot in out.iter_mut() {
                let mut next: BTreeMap<usize, BigUint> = BTreeMap::new();
                for (e, mass) in &vec {
                    for &(f, w) in &self.rows[*e] {
                        *next.entry(f.0).or_default() += mass * w;
                    }
                }
                vec = next;
                if let Some(m) = vec.get(&start) {
                    *slot += m;
                }
            }
        }
        out
    }
}

/// Weighted closed non-backtracking cycle counts `trace(B^m)`, `m = 1..=max_len`.
pub fn weighted_cycle_counts(graph: &EdgeIndexedGraph, max_len: usize) -> Vec<BigUint> {
    transfer_operator(graph).traces(max_len)
}

/// Number of lifts of each vertex at each distance from a fixed lift of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereCounts {
    pub base: VertexId,
    /// `levels[m][v] = S_m(v)`; vertices with zero count are omitted.
    pub levels: Vec<BTreeMap<VertexId, BigUint>>,
}

impl SphereCounts {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn get(&self, m: usize, v: VertexId) -> BigUint {
        self.levels[m].get(&v).cloned().unwrap_or_default()
    }

    /// `Σ_v S_m(v)`: the size of the sphere of radius `m` in the cover.
    pub fn sphere_size(&self, m: usize) -> BigUint {
        self.levels[m].values().sum()
    }

    /// `S_m(base)` for `m = 0..=depth`.
    pub fn base_series(&self) -> Vec<BigUint> {
        (0..self.levels.len()).map(|m| self.get(m, self.base)).collect()
    }

    /// Cumulative lifts of the base within distance `n`, for `n = 0..=depth`.
    pub fn cumulative_orbit(&self) -> Vec<BigUint> {
        let mut acc = BigUint::zero();
        self.base_series()
            .into_iter()
            .map(|s| {
                acc += s;
                acc.clone()
            })
            .collect()
    }
}

/// Dynamic program over oriented-edge masses. Refuses depths that would step
/// out of a truncated vertex.
pub fn sphere_counts(graph: &EdgeIndexedGraph, base: VertexId, depth: usize) -> Result<SphereCounts> {
    if let Some(radius) = graph.exact_radius(base) {
        if depth > radius {
            return Err(Error::DepthExceedsTruncation { depth, radius });
        }
    }
    let mut levels = vec![BTreeMap::from([(base, BigUint::one())])];
    let mut mass = vec![BigUint::zero(); graph.oriented_edge_count()];
    let mut active: Vec<EdgeId> = Vec::new();
    for &e in graph.outgoing(base) {
        if mass[e.0].is_zero() {
            active.push(e);
        }
        mass[e.0] += graph.edge(e).index;
    }
    let mut next_mass = vec![BigUint::zero(); graph.oriented_edge_count()];
    let mut acc = vec![BigUint::zero(); graph.vertex_count()];
    let mut touched: Vec<VertexId> = Vec::new();
    for m in 1..=depth {
        for &e in &active {
            let v = graph.edge(e).terminus;
            if acc[v.0].is_zero() {
                touched.push(v);
            }
            acc[v.0] += &mass[e.0];
        }
        touched.sort_unstable();
        levels.push(touched.drain(..).map(|v| (v, std::mem::take(&mut acc[v.0]))).collect());
        if m == depth {
            break;
        }
        let mut next_active = Vec::new();
        for &e in &active {
            let here = std::mem::take(&mut mass[e.0]);
            for (f, w) in transitions(graph, e) {
                if next_mass[f.0].is_zero() {
                    next_active.push(f);
                }
                if w == 1 {
                    next_mass[f.0] += &here;
                } else {
                    next_mass[f.0] += &here * w;
                }
            }
        }
        std::mem::swap(&mut mass, &mut next_mass);
        active = next_active;
    }
    Ok(SphereCounts { base, levels })
}

/// Closed walks at `v` in the weighted non-backtracking sense: `S_m(v)` for
/// `m = 1..=max_len` (entry `k` holds `m = k + 1`).
pub fn based_closed_walk_counts(graph: &EdgeIndexedGraph, v: VertexId, max_len: usize) -> Result<Vec<BigUint>> {
    let counts = sphere_counts(graph, v, max_len)?;
    Ok((1..=max_len).map(|m| counts.get(m, v)).collect())
}

/// Density of a partition set, exact when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    Exact(BigRational),
    Approx(f64),
}

impl Density {
    pub fn to_f64(&self) -> f64 {
        match self {
            Density::Exact(r) => poly::rational_to_f64(r),
            Density::Approx(x) => *x,
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Exact(r) => write!(f, "{r}"),
            Density::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// The set `I ⊂ {1, 2, ...}` of ray positions whose up-edge has index `q`.
///
/// Text form: `0110(10)` is the prefix `0110` followed by `10` repeated;
/// `(1)` is all of `{1, 2, ...}`; `beatty:3/5` and `beatty:0.61803` are
/// Beatty sets `{n : ⌊nθ⌋ - ⌊(n-1)θ⌋ = 1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSpec {
    Periodic { prefix: Vec<bool>, period: Vec<bool> },
    BeattyRational(BigRational),
    BeattyReal(f64),
}

impl PartitionSpec {
    pub fn periodic(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidPartition("empty period".into()));
        }
        Ok(PartitionSpec::Periodic { prefix, period })
    }

    pub fn beatty(theta: BigRational) -> Result<Self> {
        if theta < BigRational::zero() || theta > BigRational::one() {
            return Err(Error::InvalidPartition(format!("theta {theta} outside [0, 1]")));
        }
        Ok(PartitionSpec::BeattyRational(theta))
    }

    pub fn beatty_real(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidPartition(format!("theta {theta} outside [0, 1]")));
        }
        Ok(PartitionSpec::BeattyReal(theta))
    }

    /// `a_n`: whether `n ∈ I` (`n ≥ 1`).
    pub fn contains(&self, n: u64) -> bool {
        assert!(n >= 1, "positions start at 1");
        match self {
            PartitionSpec::Periodic { prefix, period } => {
                let k = (n - 1) as usize;
                if k < prefix.len() {
                    prefix[k]
                } else {
                    period[(k - prefix.len()) % period.len()]
                }
            }
            PartitionSpec::BeattyRational(theta) => {
                let floor = |m: u64| (theta * BigRational::from_integer(BigInt::from(m))).floor();
                floor(n) != floor(n - 1)
            }
            PartitionSpec::BeattyReal(theta) => (n as f64 * theta).floor() != ((n - 1) as f64 * theta).floor(),
        }
    }

    /// `a_1, ..., a_n`.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        (1..=n as u64).map(|k| self.contains(k)).collect()
    }

    /// Partial sums `s_0, ..., s_n` with `s_k = #(I ∩ [1, k])`.
    pub fn partial_sums(&self, n: usize) -> Vec<u64> {
        let mut s = vec![0];
        for k in 1..=n as u64 {
            let last = *s.last().unwrap();
            s.push(last + u64::from(self.contains(k)));
        }
        s
    }

    /// `lim s_n / n`.
    pub fn density(&self) -> Density {
        match self {
            PartitionSpec::Periodic { period, .. } => {
                let ones = period.iter().filter(|&&b| b).count();
                Density::Exact(BigRational::new(ones.into(), period.len().into()))
            }
            PartitionSpec::BeattyRational(theta) => Density::Exact(theta.clone()),
            PartitionSpec::BeattyReal(theta) => Density::Approx(*theta),
        }
    }
}

fn bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidPartition(format!("unexpected `{other}`"))),
        })
        .collect()
}

fn bit_string(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

impl FromStr for PartitionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(theta) = s.strip_prefix("beatty:") {
            if let Some((n, d)) = theta.split_once('/') {
                let parse = |x: &str| {
                    x.trim().parse::<BigInt>().map_err(|_| Error::InvalidPartition(format!("bad rational `{theta}`")))
                };
                let (n, d) = (parse(n)?, parse(d)?);
                if d.is_zero() {
                    return Err(Error::InvalidPartition("zero denominator".into()));
                }
                return PartitionSpec::beatty(BigRational::new(n, d));
            }
            let x: f64 = theta.parse().map_err(|_| Error::InvalidPartition(format!("bad number `{theta}`")))?;
            return PartitionSpec::beatty_real(x);
        }
        let open = s.find('(').ok_or_else(|| Error::InvalidPartition(format!("`{s}` has no `(period)`")))?;
        let inner = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::InvalidPartition(format!("`{s}` must end with `)`")))?;
        PartitionSpec::periodic(bits(&s[..open])?, bits(inner)?)
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionSpec::Periodic { prefix, period } => write!(f, "{}({})", bit_string(prefix), bit_string(period)),
            PartitionSpec::BeattyRational(t) => write!(f, "beatty:{t}"),
            PartitionSpec::BeattyReal(t) => write!(f, "beatty:{t}"),
        }
    }
}

/// A critical exponent written as `coefficient · log q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalExponent {
    pub q: u64,
    pub log_q_multiple: Density,
}

impl CriticalExponent {
    pub fn value(&self) -> f64 {
        self.log_q_multiple.to_f64() * (self.q as f64).ln()
    }
}

impl fmt::Display for CriticalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·log {} = {:.15}", self.log_q_multiple, self.q, self.value())
    }
}

/// `(density(I) / 2) · log q`, exact in the density.
pub fn exact_delta_of_partition(q: u64, partition: &PartitionSpec) -> CriticalExponent {
    let half = |d: Density| match d {
        Density::Exact(r) => Density::Exact(r / BigRational::from_integer(2.into())),
        Density::Approx(x) => Density::Approx(x / 2.0),
    };
    CriticalExponent { q, log_q_multiple: half(partition.density()) }
}

/// Largest denominator accepted when recognizing `2δ / log q` as a rational.
const MAX_RECOGNIZED_DENOMINATOR: u64 = 10_000;

/// Beatty partition of density `2δ / log q`. The density is recognized as an
/// exact rational when one with denominator at most 10⁴ lies within 10⁻¹³
/// of the floating-point value.
pub fn target_partition(delta: f64, q: u64) -> Result<PartitionSpec> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q must be at least 2, got {q}")));
    }
    let max = 0.5 * (q as f64).ln();
    let slack = 1e-12 * max.max(1.0);
    if !delta.is_finite() || delta < -slack || delta > max + slack {
        return Err(Error::DeltaOutOfRange { delta, max });
    }
    let theta = (2.0 * delta / (q as f64).ln()).clamp(0.0, 1.0);
    let exact = BigRational::from_float(theta).expect("finite");
    let eps = BigRational::from_float(1e-13).expect("finite");
    let zero = BigRational::zero();
    let one = BigRational::one();
    let lo = (&exact - &eps).max(zero);
    let hi = (&exact + &eps).min(one);
    let candidate = poly::simplest_between(&lo, &hi);
    if *candidate.denom() <= BigInt::from(MAX_RECOGNIZED_DENOMINATOR) {
        PartitionSpec::beatty(candidate)
    } else {
        PartitionSpec::beatty_real(theta)
    }
}

/// Beatty partition for `δ = c · log q`, with `c ∈ [0, ½]` given exactly.
pub fn target_partition_exact(log_q_multiple: &BigRational) -> Result<PartitionSpec> {
    let half = BigRational::new(1.into(), 2.into());
    if *log_q_multiple < BigRational::zero() || *log_q_multiple > half {
        return Err(Error::DeltaOutOfRange { delta: poly::rational_to_f64(log_q_multiple), max: 0.5 });
    }
    PartitionSpec::beatty(log_q_multiple * BigRational::from_integer(2.into()))
}

/// Lifts of `x0` at distance `2n` from a fixed lift: `(q-1)·q^(s_n - 1)` when
/// `n ∈ I`, else 0.
pub fn predicted_orbit_count(q: u64, partition: &PartitionSpec, n: u64) -> BigUint {
    assert!(q >= 2 && n >= 1);
    if !partition.contains(n) {
        return BigUint::zero();
    }
    let s_n = (1..=n).filter(|&k| partition.contains(k)).count() as u32;
    BigUint::from(q - 1) * BigUint::from(q).pow(s_n - 1)
}

/// Cumulative lifts of `x0` within distance `d`, for `d = 0..=max_distance`,
/// from the closed form (odd distances contribute nothing).
pub fn closed_form_cumulative_counts(q: u64, partition: &PartitionSpec, max_distance: usize) -> Vec<BigUint> {
    let indicator = partition.indicator(max_distance / 2);
    let mut power = BigUint::one(); // q^(s_n - 1) once s_n >= 1
    let mut seen_one = false;
    let mut acc = BigUint::one();
    let mut out = vec![acc.clone()];
    for d in 1..=max_distance {
        if d % 2 == 0 && indicator[d / 2 - 1] {
            if seen_one {
                power *= q;
            }
            seen_one = true;
            acc += &power * (q - 1);
        }
        out.push(acc.clone());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEstimate {
    /// `log(count(n)) / n` at the largest `n`.
    pub value: f64,
    /// `(n, log(count(n)) / n)` for the last ten `n`.
    pub tail: Vec<(usize, f64)>,
    pub all_zero: bool,
}

pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Growth-rate estimate from cumulative counts `counts[n] = #{orbit points within distance n}`.
pub fn estimate_delta(counts: &[BigUint]) -> DeltaEstimate {
    let rate = |n: usize| if counts[n].is_zero() { 0.0 } else { ln_biguint(&counts[n]) / n as f64 };
    let all_zero = counts.iter().all(Zero::is_zero);
    let last = counts.len().saturating_sub(1);
    if all_zero || last == 0 {
        return DeltaEstimate { value: 0.0, tail: Vec::new(), all_zero };
    }
    let first = last.saturating_sub(9).max(1);
    let tail: Vec<(usize, f64)> = (first..=last).map(|n| (n, rate(n))).collect();
    DeltaEstimate { value: rate(last), tail, all_zero }
}

/// Critical exponent of a finite quotient from the spectral radius of its
/// transfer operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDelta {
    /// `log λ_max`.
    pub value: f64,
    pub lambda_max: f64,
    /// `det(I - u·B)`.
    pub certificate: IntPolynomial,
    /// Smallest positive root of the certificate, `1/λ_max`.
    pub radius: IsolatedRoot,
}

impl SpectralDelta {
    /// `λ_max` as an exact rational when the radius was certified exactly.
    pub fn exact_lambda(&self) -> Option<BigRational> {
        self.radius.exact().map(|r| r.recip())
    }
}

pub fn spectral_delta(graph: &EdgeIndexedGraph) -> Result<SpectralDelta> {
    graph.require_connected()?;
    if let Some(v) = graph.vertices().find(|&v| graph.degree(v) == 1) {
        return Err(Error::DegreeOne(graph.name(v).to_string()));
    }
    if graph.edge_count() < graph.vertex_count() {
        return Err(Error::Acyclic);
    }
    let b = transfer_operator(graph);
    let certificate = b.reversed_characteristic();
    let max_degree = graph.vertices().map(|v| graph.cover_degree(v)).max().unwrap_or(1);
    // λ_max ≤ max cover degree, so u* ≥ 1/max_degree and this width keeps |Δδ| ≤ 1e-12.
    let tol = BigRational::new(BigInt::one(), BigInt::from(max_degree) * BigInt::from(10u64.pow(12)));
    let radius = poly::smallest_positive_root(&certificate, &tol).ok_or(Error::Acyclic)?;
    let lambda_max = match radius.exact() {
        Some(r) => poly::rational_to_f64(&r.recip()),
        None => 1.0 / radius.approx(),
    };
    Ok(SpectralDelta { value: lambda_max.ln(), lambda_max, certificate, radius })
}

/// The truncated ray quotient realizing a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct RayQuotient {
    pub graph: EdgeIndexedGraph,
    pub depth: usize,
    pub q: u64,
    pub partition: PartitionSpec,
    /// `x0, ..., x_depth`.
    pub ray: Vec<VertexId>,
    /// `s_0, ..., s_depth`.
    pub partial_sums: Vec<u64>,
    pub ordering: VertexOrdering,
}

/// Builds the ray `x0..x_depth` with `i(x_n -> x_{n-1}) = q` exactly for
/// `n ∈ I`, a `(q+1)`-regular tree minus one branch hanging at `x0`, and a
/// regular tree minus two branches hanging at each `x_n` with `n ∉ I`.
/// Everything is expanded to graph distance `depth` from `x0`; vertices at
/// exactly that distance are flagged truncated.
pub fn build_ray_quotient(q: u64, partition: &PartitionSpec, depth: usize, guard: Guard) -> Result<RayQuotient> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q must be at least 2, got {q}")));
    }
    if depth < 1 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let estimate = (q as f64).powi(depth as i32) * 2.0;
    if estimate > guard.0 as f64 {
        return Err(Error::GuardExceeded { limit: guard.0 });
    }
    let indicator = partition.indicator(depth);
    let partial_sums = partition.partial_sums(depth);
    let mut b = GraphBuilder::new();
    let ray: Vec<VertexId> = (0..=depth).map(|n| b.add_vertex(format!("x{n}")).unwrap()).collect();
    let mut n_values: Vec<BigUint> = partial_sums.iter().map(|&s| BigUint::from(q).pow(s as u32)).collect();
    for n in 1..=depth {
        let up = if indicator[n - 1] { q } else { 1 };
        b.add_edge(ray[n - 1], ray[n], 1, up)?;
    }
    let hang = |b: &mut GraphBuilder, n_values: &mut Vec<BigUint>, root: VertexId, label: String, first: u64, at: usize| {
        // Breadth-first expansion; every non-root vertex has q children.
        let mut frontier = vec![(root, label, first)];
        for dist in at + 1..=depth {
            let mut next = Vec::new();
            for (parent, name, children) in frontier {
                for c in 0..children {
                    let child_name = format!("{name}.{c}");
                    let child = b.add_generated_vertex(child_name.clone());
                    n_values.push(n_values[root.0].clone());
                    b.add_edge(parent, child, 1, 1).unwrap();
                    if dist == depth {
                        b.mark_truncated(child);
                    }
                    next.push((child, child_name, q));
                }
            }
            frontier = next;
        }
    };
    hang(&mut b, &mut n_values, ray[0], "y".into(), q, 0);
    for n in 1..depth {
        if !indicator[n - 1] {
            hang(&mut b, &mut n_values, ray[n], format!("z{n}"), q - 1, n);
        }
    }
    b.mark_truncated(ray[depth]);
    b.set_base(ray[0]);
    let graph = b.build();
    let ordering = VertexOrdering { values: n_values };
    if !verify_ordering(&graph, &ordering)? {
        return Err(Error::InvalidArgument("ray ordering failed to verify".into()));
    }
    Ok(RayQuotient { graph, depth, q, partition: partition.clone(), ray, partial_sums, ordering })
}

/// Everything the construction produces for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub quotient: RayQuotient,
    pub exponent: CriticalExponent,
    /// `predicted_orbit_count(n)` for `n = 1..=depth`.
    pub predicted: Vec<BigUint>,
}

pub fn construct(q: u64, partition: &PartitionSpec, depth: usize, guard: Guard) -> Result<Construction> {
    let quotient = build_ray_quotient(q, partition, depth, guard)?;
    let predicted = (1..=depth as u64).map(|n| predicted_orbit_count(q, partition, n)).collect();
    Ok(Construction { exponent: exact_delta_of_partition(q, partition), quotient, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, complete_graph, cycle_graph, parse_graph};

    fn sample_ray(q: u64) -> RayQuotient {
        let p: PartitionSpec = "100110(0)".parse().unwrap();
        build_ray_quotient(q, &p, 6, Guard::DEFAULT).unwrap()
    }

    #[test]
    fn single_edge_operator() {
        let g = parse_graph("v a\nv b\ne a b 3 5").unwrap();
        let b = transfer_operator(&g);
        assert_eq!(b.to_dense(), vec![vec![0, 4], vec![2, 0]]);
    }

    #[test]
    fn hashimoto_on_cycle() {
        let b = transfer_operator(&cycle_graph(3));
        assert_eq!(b.dimension(), 6);
        for e in cycle_graph(3).edge_ids() {
            assert_eq!(b.row_sum(e), 1);
            assert_eq!(b.entry(e, cycle_graph(3).edge(e).reverse), 0);
        }
    }

    #[test]
    fn sample_ray_shape() {
        for q in [2, 3] {
            let rq = sample_ray(q);
            let g = &rq.graph;
            for n in 1..=6 {
                let down = g.outgoing(rq.ray[n]).iter().find(|&&e| g.edge(e).terminus == rq.ray[n - 1]).unwrap();
                let expected = if [1, 4, 5].contains(&n) { q } else { 1 };
                assert_eq!(g.edge(*down).index, expected);
                assert_eq!(g.edge(g.edge(*down).reverse).index, 1);
            }
            let n: Vec<u64> = rq.ray.iter().map(|&v| rq.ordering.get(v).try_into().unwrap()).collect();
            assert_eq!(n, vec![1, q, q, q, q * q, q * q * q, q * q * q]);
            assert!(g.is_regular_cover(q));
            assert_eq!(g.cover_degree(rq.ray[1]), q + 1);
            assert_eq!(g.cover_degree(rq.ray[2]), q + 1);
            let b = transfer_operator(g);
            for e in g.edge_ids() {
                let end = g.edge(e).terminus;
                if !g.is_truncated(end) {
                    assert_eq!(b.row_sum(e), q);
                }
            }
        }
    }

    #[test]
    fn sphere_law_on_bouquet() {
        let g = bouquet(2);
        let s = sphere_counts(&g, VertexId(0), 8).unwrap();
        for m in 1..=8 {
            assert_eq!(s.sphere_size(m), BigUint::from(4u32 * 3u32.pow(m as u32 - 1)));
        }
    }

    #[test]
    fn odd_partition_orbit() {
        let odds: PartitionSpec = "(10)".parse().unwrap();
        let rq = build_ray_quotient(2, &odds, 6, Guard::DEFAULT).unwrap();
        let s = sphere_counts(&rq.graph, rq.ray[0], 6).unwrap();
        assert_eq!(s.get(6, rq.ray[0]), BigUint::from(2u8));
        for m in [1, 3, 5] {
            assert!(s.get(m, rq.ray[0]).is_zero());
        }
        assert_eq!(predicted_orbit_count(2, &odds, 3), BigUint::from(2u8));
        assert!(predicted_orbit_count(2, &odds, 2).is_zero());
        let all: PartitionSpec = "(1)".parse().unwrap();
        assert_eq!(predicted_orbit_count(2, &all, 1), BigUint::one());
        assert_eq!(sphere_counts(&rq.graph, rq.ray[0], 7), Err(Error::DepthExceedsTruncation { depth: 7, radius: 6 }));
    }

    #[test]
    fn closed_form_matches_predicted() {
        let p: PartitionSpec = "01(101)".parse().unwrap();
        let c = closed_form_cumulative_counts(3, &p, 20);
        let mut acc = BigUint::one();
        for (d, count) in c.iter().enumerate().skip(1) {
            if d % 2 == 0 {
                acc += predicted_orbit_count(3, &p, d as u64 / 2);
            }
            assert_eq!(*count, acc);
        }
    }

    #[test]
    fn target_partitions() {
        let q = 2;
        let lq = (q as f64).ln();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(target_partition(0.0, q).unwrap(), PartitionSpec::BeattyRational(BigRational::zero()));
        assert_eq!(target_partition(0.5 * lq, q).unwrap(), PartitionSpec::BeattyRational(BigRational::one()));
        let quarter = target_partition(0.25 * lq, q).unwrap();
        assert_eq!(quarter, PartitionSpec::BeattyRational(half.clone()));
        assert_eq!(quarter.indicator(6), vec![false, true, false, true, false, true]);
        assert!(target_partition(lq, q).is_err());
        assert!(target_partition(-0.1, q).is_err());
        let golden = target_partition(0.5 * lq * 0.618_033_988_749_894_8, q).unwrap();
        assert!(matches!(golden, PartitionSpec::BeattyReal(_)));
        assert_eq!(target_partition_exact(&half).unwrap().density(), Density::Exact(BigRational::one()));
    }

    #[test]
    fn exact_deltas() {
        let alt: PartitionSpec = "(10)".parse().unwrap();
        let d = exact_delta_of_partition(5, &alt);
        assert_eq!(d.log_q_multiple, Density::Exact(BigRational::new(1.into(), 4.into())));
        assert!((d.value() - 0.25 * 5f64.ln()).abs() < 1e-15);
        let mut last = -1.0;
        for k in 0..=10 {
            let p = PartitionSpec::beatty(BigRational::new(k.into(), 10.into())).unwrap();
            let v = exact_delta_of_partition(3, &p).value();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn partition_text() {
        for s in ["0110(10)", "(1)", "beatty:3/5", "beatty:0.25"] {
            let p: PartitionSpec = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("0110".parse::<PartitionSpec>().is_err());
        assert!("01()".parse::<PartitionSpec>().is_err());
        assert!("beatty:3/2".parse::<PartitionSpec>().is_err());
        assert!("beatty:1/0".parse::<PartitionSpec>().is_err());
        let beatty: PartitionSpec = "beatty:3/5".parse().unwrap();
        assert_eq!(beatty.partial_sums(5), vec![0, 0, 1, 1, 2, 3]);
    }

    #[test]
    fn estimates() {
        let s = sphere_counts(&bouquet(2), VertexId(0), 20).unwrap();
        let est = estimate_delta(&s.cumulative_orbit());
        assert!((est.value - 3f64.ln()).abs() < 0.1);
        assert_eq!(est.tail.len(), 10);
        let c5 = sphere_counts(&cycle_graph(5), VertexId(0), 300).unwrap().cumulative_orbit();
        let (near, far) = (estimate_delta(&c5[..=60]).value, estimate_delta(&c5).value);
        assert!(far < near && far < 0.02);
        assert!(estimate_delta(&vec![BigUint::zero(); 3]).all_zero);
    }

    #[test]
    fn spectral() {
        let k4 = spectral_delta(&complete_graph(4)).unwrap();
        assert_eq!(k4.exact_lambda(), Some(BigRational::from_integer(2.into())));
        let b2 = spectral_delta(&bouquet(2)).unwrap();
        assert_eq!(b2.exact_lambda(), Some(BigRational::from_integer(3.into())));
        let c5 = spectral_delta(&cycle_graph(5)).unwrap();
        assert_eq!(c5.value, 0.0);
        let path = parse_graph("v a\nv b\ne a b 1 1").unwrap();
        assert!(matches!(spectral_delta(&path), Err(Error::DegreeOne(_))));
    }

    #[test]
    fn guard_limits_construction() {
        let all: PartitionSpec = "(1)".parse().unwrap();
        assert_eq!(build_ray_quotient(3, &all, 12, Guard(1000)), Err(Error::GuardExceeded { limit: 1000 }));
        assert!(build_ray_quotient(1, &all, 3, Guard::DEFAULT).is_err());
    }
}
