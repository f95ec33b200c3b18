use proptest::prelude::*;

use hyperphi::diversity::{hill_of_counts, HyperedgeComposition};
use hyperphi::homophily::{analyze, score_edge, AnalysisOptions, BucketStatus};
use hyperphi::hsbm::{generate_hsbm_with_kinds, EdgeKind, HsbmConfig};
use hyperphi::hypergraph::{parse_hypergraph, write_hypergraph, IngestOptions};
use hyperphi::null_model::{
    estimate_from_population, exact_from_population, BaselineEstimate, Population, SamplerConfig,
};
use hyperphi::Hypergraph;

fn counts() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..20, 1..8)
}

/// Small fully labeled hypergraph with edges of size 1..=5.
fn hypergraph() -> impl Strategy<Value = Hypergraph> {
    (6usize..25, 1u32..4).prop_flat_map(|(n, m)| {
        let labels = prop::collection::vec(0..m, n);
        let edges = prop::collection::vec(prop::collection::btree_set(0..n, 1..=5), 1..40);
        (labels, edges).prop_map(|(labels, edges)| {
            let edges = edges.into_iter().map(|e| e.into_iter().collect()).collect();
            Hypergraph::from_attributes(labels, None, edges).unwrap()
        })
    })
}

fn quick() -> AnalysisOptions {
    AnalysisOptions::with_sampler(SamplerConfig { samples: 2000, seed: 3, ..SamplerConfig::default() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hill_within_bounds(c in counts(), q in 0.0f64..6.0) {
        let d = hill_of_counts(c.iter().copied(), q);
        prop_assert!(d >= 1.0 && d <= c.len() as f64);
    }

    #[test]
    fn hill_permutation_invariant(c in counts(), q in 0.0f64..4.0, shift in 0usize..8) {
        let mut r = c.clone();
        let len = r.len();
        r.rotate_left(shift % len);
        r.reverse();
        let a = hill_of_counts(c.iter().copied(), q);
        let b = hill_of_counts(r.iter().copied(), q);
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn hill_replication_invariant(c in counts(), q in 0.0f64..4.0, t in 2u32..5) {
        let a = hill_of_counts(c.iter().copied(), q);
        let b = hill_of_counts(c.iter().map(|x| x * t), q);
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn hill_non_increasing_in_order(c in counts(), q in 0.0f64..4.0, dq in 0.01f64..2.0) {
        let lo = hill_of_counts(c.iter().copied(), q);
        let hi = hill_of_counts(c.iter().copied(), q + dq);
        prop_assert!(hi <= lo + 1e-12);
    }

    #[test]
    fn hill_continuous_at_order_one(c in counts()) {
        let at = hill_of_counts(c.iter().copied(), 1.0);
        for q in [1.0 - 1e-6, 1.0 + 1e-6] {
            prop_assert!((hill_of_counts(c.iter().copied(), q) - at).abs() <= 1e-4);
        }
    }

    #[test]
    fn composition_routes_agree(attrs in prop::collection::vec(0u32..6, 1..15)) {
        let c = HyperedgeComposition::from_attributes(attrs.iter().copied()).unwrap();
        prop_assert_eq!(c.size() as usize, attrs.len());
        let mut dense = vec![0u32; 6];
        for &a in &attrs { dense[a as usize] += 1; }
        prop_assert_eq!(c.perplexity(), HyperedgeComposition::from_counts(&dense).unwrap().perplexity());
    }

    #[test]
    fn text_format_round_trip(h in hypergraph()) {
        let (mut e, mut l) = (Vec::new(), Vec::new());
        write_hypergraph(&h, &mut e, &mut l, None::<Vec<u8>>).unwrap();
        let back = parse_hypergraph(&e[..], &l[..], None::<&[u8]>, &IngestOptions::default()).unwrap();
        prop_assert_eq!(back.hypergraph.edges(), h.edges());
        prop_assert_eq!(back.hypergraph.labels(), h.labels());
    }

    #[test]
    fn k_degree_sum_identity(h in hypergraph(), k in 1usize..6) {
        let edges_of_k = h.edges().iter().filter(|e| e.len() == k).count() as u64;
        prop_assert_eq!(h.k_degrees(k).total(), k as u64 * edges_of_k);
        let sub = h.k_uniform_sub(k);
        prop_assert!(sub.edge_sizes().keys().all(|&s| s == k));
        prop_assert_eq!(sub.node_count(), h.node_count());
    }

    #[test]
    fn exact_baseline_scale_invariant(
        raw in prop::collection::vec((1u32..6, 0u32..3), 4..8),
        k in 2usize..4,
        scale in 0.1f64..50.0,
    ) {
        let w: Vec<f64> = raw.iter().map(|x| x.0 as f64).collect();
        let a: Vec<u32> = raw.iter().map(|x| x.1).collect();
        let scaled: Vec<f64> = w.iter().map(|x| x * scale).collect();
        let one = exact_from_population(&Population::new(&w, &a).unwrap(), k, 1.0).unwrap();
        let two = exact_from_population(&Population::new(&scaled, &a).unwrap(), k, 1.0).unwrap();
        prop_assert!((one - two).abs() < 1e-10);
        prop_assert!(one >= 1.0 && one <= (k as f64).min(3.0) + 1e-12);
    }

    #[test]
    fn score_within_floor_and_one(b in 1.01f64..10.0, k in 2usize..12, frac in 0.0f64..1.0, m in 1usize..12) {
        prop_assume!(b <= k as f64);
        let m = m.min(k);
        let observed = 1.0 + frac * (m as f64 - 1.0);
        let base = BaselineEstimate { k, mean: b, std_error: 0.0, samples: 1, seed: 0, diversity_order: 1.0 };
        let s = score_edge(observed, &base, m, 1e-9).unwrap();
        prop_assert!(s.phi <= 1.0 + 1e-12);
        prop_assert!(s.phi >= s.phi_min - 1e-12);
        prop_assert!((s.gap - s.phi * s.gap_max).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn global_phi_is_weighted_per_size_mean(h in hypergraph()) {
        let Ok(r) = analyze(&h, &quick()) else { return Ok(()) };
        let mut num = 0.0;
        let mut den = 0usize;
        for row in r.per_k.iter().filter(|row| row.status == BucketStatus::Scored) {
            num += row.phi_k.unwrap() * row.edge_count as f64;
            den += row.edge_count;
        }
        prop_assert_eq!(den, r.edges_scored);
        prop_assert!((num / den as f64 - r.global_phi).abs() < 1e-12);
        prop_assert_eq!(r.edges_scored + r.edges_excluded, r.edge_total);
        prop_assert_eq!(r.exclusions.total(), r.edges_excluded);
    }

    #[test]
    fn relabeling_leaves_scores_unchanged(h in hypergraph(), shift in 1u32..3) {
        let m = h.num_attributes() as u32;
        let mapping: Vec<u32> = (0..m).map(|a| (a + shift) % m).collect();
        let g = h.relabel_attributes(&mapping).unwrap();
        match (analyze(&h, &quick()), analyze(&g, &quick())) {
            (Ok(a), Ok(b)) => {
                prop_assert!((a.global_phi - b.global_phi).abs() < 1e-12);
                prop_assert_eq!(a.edges_scored, b.edges_scored);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "relabeling changed scorability"),
        }
    }
}

#[test]
fn std_error_shrinks_with_root_n() {
    let w: Vec<f64> = (1..=30).map(|i| (i % 7 + 1) as f64).collect();
    let a: Vec<u32> = (0..30).map(|i| i % 4).collect();
    let pop = Population::new(&w, &a).unwrap();
    let se = |n: usize| {
        estimate_from_population(&pop, 4, &SamplerConfig { samples: n, seed: 1, ..SamplerConfig::default() })
            .unwrap()
            .std_error
    };
    let (s3, s4, s5) = (se(1_000), se(10_000), se(100_000));
    let root10 = 10f64.sqrt();
    for ratio in [s3 / s4, s4 / s5] {
        assert!(ratio / root10 > 0.5 && ratio / root10 < 2.0, "ratio {ratio}");
    }
}

#[test]
fn estimates_independent_of_thread_count() {
    let w: Vec<f64> = (0..200).map(|i| (i % 11 + 1) as f64).collect();
    let a: Vec<u32> = (0..200).map(|i| i % 5).collect();
    let pop = Population::new(&w, &a).unwrap();
    let cfg = SamplerConfig { samples: 20_000, seed: 77, ..SamplerConfig::default() };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_from_population(&pop, 6, &cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn structured_edge_share_tracks_p() {
    for p in [-0.8, -0.3, 0.2, 0.6] {
        let cfg = HsbmConfig { num_nodes: 400, num_attributes: 4, k: 4, num_edges: 4000, p, seed: 21 };
        let (_, kinds) = generate_hsbm_with_kinds(&cfg).unwrap();
        let target = if p > 0.0 { EdgeKind::Pure } else { EdgeKind::Balanced };
        let share = kinds.iter().filter(|&&k| k == target).count() as f64 / kinds.len() as f64;
        let q = f64::abs(p);
        let se = (q * (1.0 - q) / kinds.len() as f64).sqrt();
        assert!((share - q).abs() <= 4.0 * se, "p={p}: share {share}");
    }
}
