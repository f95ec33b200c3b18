use super::{Population, Tally, Weighting};
use crate::diversity::check_order;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest `n^k` the enumeration accepts.
pub const EXACT_STATE_LIMIT: f64 = 1e7;

/// Exact expectation of the size-`k` null-model diversity of `h`, by
/// enumeration of ordered draws. Only feasible on tiny populations.
pub fn exact_baseline(h: &Hypergraph, k: usize, diversity_order: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Argument(format!("baselines need k >= 2, got {k}")));
    }
    exact_from_population(&Population::from_hypergraph(h, k, Weighting::KDegree), k, diversity_order)
}

/// Sums, over every ordered k-tuple of distinct nodes, the probability
/// `prod_j w_j / (W - sum_{l<j} w_l)` times the tuple's diversity.
pub fn exact_from_population(population: &Population, k: usize, diversity_order: f64) -> Result<f64> {
    check_order(diversity_order)?;
    let n = population.len();
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if n < k {
        return Err(Error::InsufficientPopulation { k, available: n });
    }
    let states = (n as f64).powi(k as i32);
    if states > EXACT_STATE_LIMIT {
        return Err(Error::Capacity { states, limit: EXACT_STATE_LIMIT });
    }
    let mut walk = Walk {
        weights: population.weights(),
        classes: population.classes(),
        order: diversity_order,
        k,
        used: vec![false; n],
        path: Vec::with_capacity(k),
        tally: Tally::new(population.attribute_count()),
        total: 0.0,
    };
    let mass: f64 = population.weights().iter().sum();
    walk.descend(1.0, mass);
    Ok(walk.total)
}

struct Walk<'a> {
    weights: &'a [f64],
    classes: &'a [u32],
    order: f64,
    k: usize,
    used: Vec<bool>,
    path: Vec<usize>,
    tally: Tally,
    total: f64,
}

impl Walk<'_> {
    fn descend(&mut self, probability: f64, remaining: f64) {
        if self.path.len() == self.k {
            let classes = self.classes;
            let d = self.tally.diversity(self.path.iter().map(|&i| classes[i]), self.order);
            self.total += probability * d;
            return;
        }
        for i in 0..self.weights.len() {
            if self.used[i] {
                continue;
            }
            let w = self.weights[i];
            self.used[i] = true;
            self.path.push(i);
            self.descend(probability * w / remaining, remaining - w);
            self.path.pop();
            self.used[i] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_two_by_two_is_five_thirds() {
        let pop = Population::new(&[1.0; 4], &[0, 0, 1, 1]).unwrap();
        let b = exact_from_population(&pop, 2, 1.0).unwrap();
        assert!((b - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pure_population_is_one() {
        let pop = Population::new(&[3.0, 1.0, 2.0], &[7, 7, 7]).unwrap();
        assert_eq!(exact_from_population(&pop, 3, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn weighted_pair_matches_hand_enumeration() {
        // Ordered pairs from weights [2,1,1]: P({0,1}) = P({0,2}) = 5/12, P({1,2}) = 1/6.
        let pop = Population::new(&[2.0, 1.0, 1.0], &[0, 1, 1]).unwrap();
        let b = exact_from_population(&pop, 2, 1.0).unwrap();
        assert!((b - (10.0 / 12.0 * 2.0 + 1.0 / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn guard_rejects_large_state_spaces() {
        let pop = Population::new(&vec![1.0; 60], &vec![0; 60]).unwrap();
        assert!(matches!(exact_from_population(&pop, 4, 1.0), Err(Error::Capacity { .. })));
    }
}
