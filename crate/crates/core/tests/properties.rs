mod common;

use critex::graph::{bouquet, complete_graph, cycle_graph, merge, parse_graph, serialize_graph};
use critex::grouping::{find_vertex_ordering, find_vertex_ordering_from, verify_ordering};
use critex::growth::{
    build_ray_quotient, estimate_delta, exact_delta_of_partition, sphere_counts, spectral_delta, transfer_operator,
    PartitionSpec,
};
use critex::series::{merge_genfun, solve_unit_product, TruncatedSeries, UnitProductOutcome};
use critex::zeta::{cycle_counts, dumbbell, enumerate_primes, period};
use critex::{EdgeId, EdgeIndexedGraph, Guard, VertexId};
use common::{build, random_edges, random_min_degree_two, EdgeSpec};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn edge_specs() -> impl Strategy<Value = (usize, Vec<EdgeSpec>)> {
    (1usize..=5, 0usize..=4, any::<u64>()).prop_map(|(n, extra, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (n, random_edges(&mut rng, n, extra, 4))
    })
}

fn assert_involutive(g: &EdgeIndexedGraph) {
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let back = g.edge(edge.reverse);
        assert_eq!(back.reverse, e);
        assert_ne!(edge.reverse, e);
        assert_eq!((back.origin, back.terminus), (edge.terminus, edge.origin));
    }
}

fn prefixed(n: usize, edges: &[EdgeSpec], prefix: &str) -> EdgeIndexedGraph {
    let mut g = build(n, edges);
    for k in 0..n {
        g = g.renamed(&format!("v{k}"), &format!("{prefix}{k}")).unwrap();
    }
    g
}

// graph_core

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_round_trips((n, edges) in edge_specs()) {
        let g = build(n, &edges);
        assert_involutive(&g);
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.canonical_form(), g.canonical_form());
    }

    #[test]
    fn merge_is_commutative((n1, e1) in edge_specs(), (n2, e2) in edge_specs(), x in 0usize..5, y in 0usize..5) {
        let (x, y) = (x % n1, y % n2);
        let (g1, g2) = (prefixed(n1, &e1, "a"), prefixed(n2, &e2, "b"));
        let (xn, yn) = (format!("a{x}"), format!("b{y}"));
        let left = merge(&g1, &xn, &g2, &yn).unwrap().renamed(&xn, "m").unwrap();
        let right = merge(&g2, &yn, &g1, &xn).unwrap().renamed(&yn, "m").unwrap();
        assert_involutive(&left);
        prop_assert_eq!(left.canonical_form(), right.canonical_form());
    }

    #[test]
    fn merged_cover_degree_adds((n1, e1) in edge_specs(), (n2, e2) in edge_specs(), x in 0usize..5, y in 0usize..5) {
        let (x, y) = (x % n1, y % n2);
        let (g1, g2) = (build(n1, &e1), build(n2, &e2));
        let (xn, yn) = (format!("v{x}"), format!("v{y}"));
        let m = merge(&g1, &xn, &g2, &yn).unwrap();
        prop_assert_eq!(m.vertex_count(), n1 + n2 - 1);
        prop_assert_eq!(
            m.cover_degree(m.vertex(&xn).unwrap()),
            g1.cover_degree(VertexId(x)) + g2.cover_degree(VertexId(y))
        );
    }
}

// grouping

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ordering_is_unique_across_roots((n, edges) in edge_specs()) {
        let g = build(n, &edges);
        let reference = find_vertex_ordering(&g).unwrap();
        for root in g.vertices() {
            let other = find_vertex_ordering_from(&g, root).unwrap();
            prop_assert_eq!(other.admits_finite_grouping(), reference.admits_finite_grouping());
            if let (Some(a), Some(b)) = (reference.ordering(), other.ordering()) {
                prop_assert!(verify_ordering(&g, b).unwrap());
                prop_assert_eq!(a.normalized(), b.normalized());
            }
        }
    }

    #[test]
    fn scaling_an_edge_pair_changes_nothing((n, edges) in edge_specs(), pick in any::<prop::sample::Index>(), c in 2u64..=5) {
        let k = pick.index(edges.len().max(1));
        let mut scaled = edges.clone();
        if let Some(e) = scaled.get_mut(k) {
            e.2 *= c;
            e.3 *= c;
        }
        let (before, after) = (find_vertex_ordering(&build(n, &edges)).unwrap(), find_vertex_ordering(&build(n, &scaled)).unwrap());
        prop_assert_eq!(before.admits_finite_grouping(), after.admits_finite_grouping());
        if let (Some(a), Some(b)) = (before.ordering(), after.ordering()) {
            prop_assert_eq!(a.normalized(), b.normalized());
        }
    }
}

// growth

#[test]
fn row_sums_are_cover_degree_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let extra = rng.gen_range(0..=4);
        let g = build(n, &random_edges(&mut rng, n, extra, 4));
        let b = transfer_operator(&g);
        for e in g.edge_ids() {
            assert_eq!(b.row_sum(e), g.cover_degree(g.edge(e).terminus) - 1);
        }
    }
}

/// Counts lifts of each vertex at every distance by walking the covering tree
/// itself: a child reached along `f` sees `i(e)` lifts of each outgoing `e`,
/// one fewer when `e` is the reverse of `f`.
fn cover_tree_counts(g: &EdgeIndexedGraph, base: VertexId, depth: usize) -> Vec<Vec<u64>> {
    let mut counts = vec![vec![0u64; g.vertex_count()]; depth + 1];
    fn walk(g: &EdgeIndexedGraph, v: VertexId, via: Option<EdgeId>, d: usize, depth: usize, counts: &mut [Vec<u64>]) {
        counts[d][v.0] += 1;
        if d == depth {
            return;
        }
        for &e in g.outgoing(v) {
            let edge = g.edge(e);
            let lifts = edge.index - u64::from(via.map(|f| g.edge(f).reverse) == Some(e));
            for _ in 0..lifts {
                walk(g, edge.terminus, Some(e), d + 1, depth, counts);
            }
        }
    }
    walk(g, base, None, 0, depth, &mut counts);
    counts
}

#[test]
fn sphere_counts_match_the_covering_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let n = rng.gen_range(1..=4);
        let extra = rng.gen_range(0..=2);
        let g = build(n, &random_edges(&mut rng, n, extra, 3));
        let depth = 5;
        let s = sphere_counts(&g, VertexId(0), depth).unwrap();
        let tree = cover_tree_counts(&g, VertexId(0), depth);
        for (m, row) in tree.iter().enumerate() {
            for v in g.vertices() {
                assert_eq!(s.get(m, v), BigUint::from(row[v.0]), "m={m} v={v:?}\n{g}");
            }
        }
    }
    // The odd partition at q = 2, up to distance 6.
    let p: PartitionSpec = "(10)".parse().unwrap();
    let rq = build_ray_quotient(2, &p, 6, Guard::DEFAULT).unwrap();
    let s = sphere_counts(&rq.graph, rq.ray[0], 6).unwrap();
    let tree = cover_tree_counts(&rq.graph, rq.ray[0], 6);
    assert_eq!(s.get(6, rq.ray[0]), BigUint::from(tree[6][rq.ray[0].0]));
    assert_eq!(tree[6].iter().sum::<u64>(), 3 * 32);
}

#[test]
fn sphere_law_on_regular_covers() {
    let mut cases: Vec<(EdgeIndexedGraph, VertexId, u64, usize)> =
        vec![(complete_graph(4), VertexId(0), 2, 12), (bouquet(2), VertexId(0), 3, 10), (cycle_graph(5), VertexId(0), 1, 20)];
    for spec in ["(1)", "(0)", "(10)", "1(011)", "(0110)"] {
        for q in [2u64, 3] {
            let rq = build_ray_quotient(q, &spec.parse().unwrap(), 7, Guard::DEFAULT).unwrap();
            let x0 = rq.ray[0];
            cases.push((rq.graph, x0, q, 7));
        }
    }
    for (g, base, q, depth) in cases {
        assert!(g.is_regular_cover(q));
        let s = sphere_counts(&g, base, depth).unwrap();
        for m in 1..=depth {
            assert_eq!(s.sphere_size(m), BigUint::from((q + 1) * q.pow(m as u32 - 1)), "q={q} m={m}");
        }
    }
}

#[test]
fn orbit_estimate_agrees_with_spectrum() {
    for g in [complete_graph(4), bouquet(2), dumbbell(3, 3, 1).unwrap()] {
        let s = sphere_counts(&g, VertexId(0), 30).unwrap();
        let estimate = estimate_delta(&s.cumulative_orbit()).value;
        let spectral = spectral_delta(&g).unwrap().value;
        let ratio = (estimate - spectral).exp();
        assert!((ratio - 1.0).abs() < 0.05, "estimate {estimate} vs spectral {spectral}\n{g}");
    }
}

#[test]
fn exact_delta_is_monotone_in_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let d = rng.gen_range(1..=60i64);
        let (a, b) = (rng.gen_range(0..=d), rng.gen_range(0..=d));
        let (lo, hi) = (a.min(b), a.max(b));
        for q in [2u64, 3, 5] {
            let delta = |n: i64| {
                exact_delta_of_partition(q, &PartitionSpec::beatty(BigRational::new(n.into(), d.into())).unwrap()).value()
            };
            assert!(delta(lo) <= delta(hi));
        }
    }
}

// series

fn nonneg_series(degree: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(0i64..=4, degree).prop_map(move |c| {
        let mut coeffs = vec![0i64];
        coeffs.extend(c);
        TruncatedSeries::from_integers(&coeffs, degree)
    })
}

fn bump(s: &TruncatedSeries, k: usize, by: i64) -> TruncatedSeries {
    let mut coeffs = s.coeffs().to_vec();
    coeffs[k] += BigRational::from_integer(by.into());
    TruncatedSeries::new(coeffs, s.degree())
}

/// Alternating products over compositions of `m`, both starting letters.
fn telescoped(fx: &TruncatedSeries, fy: &TruncatedSeries, m: usize) -> BigRational {
    fn go(m: usize, turn: bool, fx: &TruncatedSeries, fy: &TruncatedSeries) -> BigRational {
        let f = if turn { fx } else { fy };
        let mut total = BigRational::zero();
        for k in 1..=m {
            let c = f.coeff(k);
            if c.is_zero() {
                continue;
            }
            total += if k == m { c.clone() } else { c * go(m - k, !turn, fx, fy) };
        }
        total
    }
    go(m, true, fx, fy) + go(m, false, fx, fy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn merge_genfun_is_symmetric(fx in nonneg_series(10), fy in nonneg_series(10)) {
        prop_assert_eq!(merge_genfun(&fx, &fy).unwrap(), merge_genfun(&fy, &fx).unwrap());
    }

    #[test]
    fn merge_genfun_satisfies_its_defining_identity(fx in nonneg_series(10), fy in nonneg_series(10)) {
        let h = merge_genfun(&fx, &fy).unwrap();
        let prod = fx.mul(&fy).unwrap();
        let lhs = TruncatedSeries::one(10).sub(&prod).unwrap().mul(&h).unwrap();
        let two = BigRational::from_integer(2.into());
        let rhs = fx.add(&fy).unwrap().add(&prod.scale(&two)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn merge_genfun_telescopes(fx in nonneg_series(8), fy in nonneg_series(8)) {
        let h = merge_genfun(&fx, &fy).unwrap();
        for m in 1..=8 {
            prop_assert_eq!(h.coeff(m), &telescoped(&fx, &fy, m));
        }
    }

    #[test]
    fn unit_product_root_is_antitone(fx in nonneg_series(30), fy in nonneg_series(30), k in 1usize..=30, by in 1i64..=3) {
        let root = |a: &TruncatedSeries, b: &TruncatedSeries| match solve_unit_product(a, b, 1e-12).unwrap() {
            UnitProductOutcome::Root(r) => r.u,
            UnitProductOutcome::NoRoot => f64::INFINITY,
        };
        let bigger = bump(&fx, k, by);
        prop_assert!(root(&bigger, &fy) <= root(&fx, &fy) + 1e-11);
        prop_assert!(root(&fx, &bump(&fy, k, by)) <= root(&fx, &fy) + 1e-11);
    }

    #[test]
    fn division_undoes_multiplication(a in nonneg_series(12), b in nonneg_series(12), c0 in 1i64..=3) {
        let unit = bump(&b, 0, c0);
        let prod = a.mul(&unit).unwrap();
        prop_assert_eq!(prod.div(&unit).unwrap(), a);
    }
}

// zeta

#[test]
fn divisor_identity_and_period() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut graphs = vec![cycle_graph(4), complete_graph(4), bouquet(2), dumbbell(3, 4, 2).unwrap()];
    for _ in 0..25 {
        let n = rng.gen_range(1..=5);
        graphs.push(random_min_degree_two(&mut rng, n));
    }
    let l = 9;
    for g in &graphs {
        let counts = cycle_counts(g, l).unwrap();
        let primes = enumerate_primes(g, l, Guard::DEFAULT).unwrap();
        let delta = period(g).unwrap();
        for m in 1..=l {
            let sum: BigUint =
                (1..=m).filter(|d| m % d == 0).map(|d| BigUint::from(d as u64) * primes.counts[d - 1]).sum();
            assert_eq!(sum, counts[m - 1], "m={m}\n{g}");
            if primes.counts[m - 1] > 0 {
                assert_eq!(m as u64 % delta, 0, "Δ={delta} m={m}\n{g}");
            }
        }
    }
}

#[test]
fn perron_value_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut graphs = vec![cycle_graph(3), complete_graph(4), complete_graph(5), bouquet(3), dumbbell(3, 3, 1).unwrap()];
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        graphs.push(random_min_degree_two(&mut rng, n));
    }
    for g in &graphs {
        let lambda = spectral_delta(g).unwrap().lambda_max;
        let max_degree = g.vertices().map(|v| g.degree(v)).max().unwrap() as f64;
        assert!(lambda >= 1.0 - 1e-9 && lambda <= max_degree - 1.0 + 1e-9, "λ={lambda}\n{g}");
        let regular = g.vertices().all(|v| g.degree(v) as f64 == max_degree);
        assert_eq!((lambda - (max_degree - 1.0)).abs() < 1e-9, regular, "λ={lambda}\n{g}");
    }
}

#[test]
fn series_helpers_agree_with_integers() {
    let ones: Vec<BigInt> = vec![BigInt::one(); 6];
    let s = TruncatedSeries::from_integers(&ones, 5);
    let inv = TruncatedSeries::one(5).div(&s).unwrap();
    let expected = TruncatedSeries::from_integers(&[1, -1, 0, 0, 0, 0], 5);
    assert_eq!(inv, expected);
}
