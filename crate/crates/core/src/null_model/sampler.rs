//! Sequential proportional-to-weight sampling without replacement.
//!
//! Each draw picks one of the remaining items with probability proportional
//! to its weight, then removes it. Draws are served by a Fenwick tree so one
//! k-set costs O(k log n). The tree is restored from a journal of overwritten
//! cells after every k-set, which keeps the state bit-identical between sets.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct WeightedSampler {
    weights: Vec<f64>,
    tree: Vec<f64>,
    total: f64,
    positive: usize,
    taken: Vec<bool>,
    journal: Vec<(usize, f64)>,
}

impl WeightedSampler {
    pub fn new(weights: &[f64]) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Argument(format!("weights must be finite and non-negative, got {w}")));
        }
        let n = weights.len();
        let mut tree = vec![0.0; n + 1];
        for (i, &w) in weights.iter().enumerate() {
            tree[i + 1] += w;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i + 1];
            }
        }
        Ok(Self {
            weights: weights.to_vec(),
            tree,
            total: weights.iter().sum(),
            positive: weights.iter().filter(|&&w| w > 0.0).count(),
            taken: vec![false; n],
            journal: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.positive
    }

    fn subtract(&mut self, index: usize, amount: f64) {
        let n = self.weights.len();
        let mut i = index + 1;
        while i <= n {
            self.journal.push((i, self.tree[i]));
            self.tree[i] -= amount;
            i += i & i.wrapping_neg();
        }
    }

    fn restore(&mut self, drawn: &[usize]) {
        while let Some((i, value)) = self.journal.pop() {
            self.tree[i] = value;
        }
        for &i in drawn {
            self.taken[i] = false;
        }
    }

    /// Smallest index whose running weight exceeds `target`.
    fn locate(&self, mut target: f64) -> usize {
        let n = self.weights.len();
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }

    /// Draws `k` distinct indices into `out` (in draw order).
    ///
    /// The sampler is left exactly as it was before the call.
    pub fn draw_into<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R, out: &mut Vec<usize>) -> Result<()> {
        if k > self.positive {
            return Err(Error::InsufficientPopulation { k, available: self.positive });
        }
        out.clear();
        let mut removed = 0.0;
        for _ in 0..k {
            let remaining = self.total - removed;
            let target = rng.random::<f64>() * remaining;
            let mut index = self.locate(target);
            if index >= self.weights.len() || self.taken[index] || self.weights[index] == 0.0 {
                // Rounding pushed the target past the live mass; fall back to
                // the last item still available.
                index = (0..self.weights.len())
                    .rev()
                    .find(|&i| self.weights[i] > 0.0 && !self.taken[i])
                    .expect("positive_count guarantees a live item");
            }
            let w = self.weights[index];
            self.subtract(index, w);
            self.taken[index] = true;
            removed += w;
            out.push(index);
        }
        self.restore(out);
        Ok(())
    }
}

/// Draws `k` distinct indices from `weights`, each successive draw
/// proportional to weight among the indices not drawn yet. The result is
/// sorted.
pub fn sample_weighted_k_set<R: Rng + ?Sized>(weights: &[f64], k: usize, rng: &mut R) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let mut sampler = WeightedSampler::new(weights)?;
    let mut out = Vec::with_capacity(k);
    sampler.draw_into(k, rng, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn forced_outcomes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert_eq!(sample_weighted_k_set(&[1.0; 5], 5, &mut rng).unwrap(), vec![0, 1, 2, 3, 4]);
            assert_eq!(sample_weighted_k_set(&[1.0, 0.0, 0.0], 1, &mut rng).unwrap(), vec![0]);
            assert_eq!(sample_weighted_k_set(&[0.0, 2.0, 0.0, 3.0], 2, &mut rng).unwrap(), vec![1, 3]);
        }
    }

    #[test]
    fn insufficient_population() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(
            sample_weighted_k_set(&[1.0, 0.0, 1.0], 3, &mut rng),
            Err(Error::InsufficientPopulation { k: 3, available: 2 })
        ));
        assert!(sample_weighted_k_set(&[1.0, -1.0], 1, &mut rng).is_err());
    }

    #[test]
    fn state_is_restored_between_draws() {
        let weights = [0.3, 1.7, 2.9, 0.0, 0.1, 5.5, 1.0];
        let fresh = WeightedSampler::new(&weights).unwrap();
        let mut s = fresh.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut out = Vec::new();
        for _ in 0..1000 {
            s.draw_into(4, &mut rng, &mut out).unwrap();
            assert_eq!(out.len(), 4);
        }
        assert_eq!(s.tree, fresh.tree);
    }

    #[test]
    fn single_draw_matches_weights() {
        let weights = [1.0, 2.0, 3.0, 0.0, 4.0];
        let mut s = WeightedSampler::new(&weights).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut hits = [0usize; 5];
        let mut out = Vec::new();
        let n = 200_000;
        for _ in 0..n {
            s.draw_into(1, &mut rng, &mut out).unwrap();
            hits[out[0]] += 1;
        }
        assert_eq!(hits[3], 0);
        for (i, &w) in weights.iter().enumerate() {
            let p = w / 10.0;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((hits[i] as f64 / n as f64 - p).abs() <= 4.0 * se + 1e-12);
        }
    }
}
