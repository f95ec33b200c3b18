//! Checks against values computed by independent means: hand counts,
//! closed forms and a subset dynamic program for the null model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperphi::homophily::{analyze, AnalysisOptions};
use hyperphi::null_model::{
    estimate_from_population, exact_baseline, exact_from_population, sample_weighted_k_set, Population, SamplerConfig,
};
use hyperphi::Hypergraph;

/// Entropy perplexity straight from the definition.
fn perplexity_oracle(attrs: &[u32]) -> f64 {
    let n = attrs.len() as f64;
    let mut h = 0.0;
    for a in 0..=*attrs.iter().max().unwrap() {
        let c = attrs.iter().filter(|&&x| x == a).count() as f64;
        if c > 0.0 {
            h -= c / n * (c / n).log2();
        }
    }
    2f64.powf(h)
}

/// Probability of every subset under sequential weighted draws without
/// replacement, via P(S) = sum over last-drawn v of P(S - v) * w_v / (W - w(S - v)).
fn set_probabilities(weights: &[f64]) -> Vec<f64> {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let mut prob = vec![0.0; 1 << n];
    let mut mass = vec![0.0; 1 << n];
    prob[0] = 1.0;
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        mass[mask] = mass[mask & (mask - 1)] + weights[low];
        for (v, &w) in weights.iter().enumerate() {
            if mask & (1 << v) != 0 {
                let rest = mask ^ (1 << v);
                prob[mask] += prob[rest] * w / (total - mass[rest]);
            }
        }
    }
    prob
}

fn baseline_oracle(weights: &[f64], attrs: &[u32], k: usize) -> f64 {
    let prob = set_probabilities(weights);
    (0usize..prob.len())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| {
            let members: Vec<u32> = (0..weights.len()).filter(|v| m & (1 << v) != 0).map(|v| attrs[v]).collect();
            prob[m] * perplexity_oracle(&members)
        })
        .sum()
}

#[test]
fn pair_probability_matches_closed_form() {
    // P({0,1}) = 2/4 * 1/2 + 1/4 * 2/3 = 5/12
    let weights = [2.0, 1.0, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draws = 1_000_000;
    let mut hits = 0u64;
    for _ in 0..draws {
        if sample_weighted_k_set(&weights, 2, &mut rng).unwrap() == [0, 1] {
            hits += 1;
        }
    }
    let p = 5.0 / 12.0;
    let se = (p * (1.0 - p) / draws as f64).sqrt();
    let freq = hits as f64 / draws as f64;
    assert!((freq - p).abs() <= 3.0 * se, "freq {freq} vs {p}");
    assert!((set_probabilities(&weights)[0b011] - p).abs() < 1e-15);
}

#[test]
fn uniform_two_by_two_baseline() {
    // Four equal-weight nodes A A B B, pairs: 2 of 6 are pure, 4 give D = 2.
    let h = Hypergraph::from_attributes(vec![0, 0, 1, 1], None, vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3]])
        .unwrap();
    let exact = exact_baseline(&h, 2, 1.0).unwrap();
    assert!((exact - 5.0 / 3.0).abs() < 1e-12);
    let est =
        hyperphi::estimate_baseline(&h, 2, &SamplerConfig { samples: 100_000, ..SamplerConfig::default() }).unwrap();
    assert!((est.mean - 5.0 / 3.0).abs() <= 3.0 * est.std_error);
}

#[test]
fn weighted_triple_baseline() {
    // Weights [2,1,1], attributes A B B: P(pure {1,2}) = 1/6, otherwise D = 2.
    let pop = Population::new(&[2.0, 1.0, 1.0], &[0, 1, 1]).unwrap();
    let want = 2.0 * 5.0 / 6.0 + 1.0 / 6.0;
    assert!((exact_from_population(&pop, 2, 1.0).unwrap() - want).abs() < 1e-12);
    assert!((baseline_oracle(&[2.0, 1.0, 1.0], &[0, 1, 1], 2) - want).abs() < 1e-12);
}

#[test]
fn exact_enumeration_matches_subset_program() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..60 {
        let k = rng.random_range(2..=4usize);
        let n = rng.random_range(k..=8usize);
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..=6u32) as f64).collect();
        let attrs: Vec<u32> = (0..n).map(|_| rng.random_range(0..3u32)).collect();
        let pop = Population::new(&weights, &attrs).unwrap();
        let ours = exact_from_population(&pop, k, 1.0).unwrap();
        let oracle = baseline_oracle(&weights, &attrs, k);
        assert!((ours - oracle).abs() < 1e-10, "k={k} n={n}: {ours} vs {oracle}");
    }
}

#[test]
fn monte_carlo_converges_to_oracle() {
    let weights = [5.0, 1.0, 3.0, 2.0, 2.0, 4.0, 1.0];
    let attrs = [0, 0, 1, 1, 2, 2, 0];
    let pop = Population::new(&weights, &attrs).unwrap();
    for k in 2..=4 {
        let oracle = baseline_oracle(&weights, &attrs, k);
        let est = estimate_from_population(
            &pop,
            k,
            &SamplerConfig { samples: 200_000, seed: k as u64, ..Default::default() },
        )
        .unwrap();
        assert!((est.mean - oracle).abs() <= 3.0 * est.std_error, "k={k}");
    }
}

#[test]
fn star_degrees_by_hand() {
    // Centre 0 joins three triangles and one pair.
    let h = Hypergraph::from_attributes(
        vec![0, 1, 1, 0, 0, 1, 1, 0],
        None,
        vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6], vec![0, 7]],
    )
    .unwrap();
    assert_eq!(h.k_degrees(3).degrees(), &[3, 1, 1, 1, 1, 1, 1, 0]);
    assert_eq!(h.k_degrees(2).degrees(), &[1, 0, 0, 0, 0, 0, 0, 1]);
    assert_eq!(h.total_degrees(), vec![4, 1, 1, 1, 1, 1, 1, 1]);
    assert_eq!(h.k_degrees(3).total(), 9);
}

#[test]
fn score_on_known_baseline() {
    // Exact k=2 baseline on A A B B with equal weights is 5/3.
    // Pure pair: phi = 1. Mixed pair: phi = (5/3 - 2) / (5/3 - 1) = -1/2.
    let h = Hypergraph::from_attributes(vec![0, 0, 1, 1], None, vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3]])
        .unwrap();
    let opts = AnalysisOptions {
        emit_per_edge: true,
        ..AnalysisOptions::with_sampler(SamplerConfig { samples: 200_000, ..Default::default() })
    };
    let r = analyze(&h, &opts).unwrap();
    let per_edge = r.per_edge.unwrap();
    assert!((per_edge[0].score.phi - 1.0).abs() < 1e-12);
    assert!((per_edge[2].score.phi + 0.5).abs() < 0.02);
    assert!((r.global_phi - 0.25).abs() < 0.01);
}
