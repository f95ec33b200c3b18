use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Newman's categorical assortativity over the size-2 edges of `h`.
///
/// Each pair contributes once in each orientation to the mixing matrix
/// `e_ij`; with `a_i` its row sums, `r = (sum_i e_ii - sum_i a_i^2) /
/// (1 - sum_i a_i^2)`.
pub fn newman_assortativity(h: &Hypergraph) -> Result<f64> {
    let pairs: Vec<(u32, u32)> = h
        .edges()
        .iter()
        .filter(|e| e.len() == 2)
        .map(|e| {
            let a = h.attribute(e[0]).expect("labeled");
            let b = h.attribute(e[1]).expect("labeled");
            (a, b)
        })
        .collect();
    if pairs.is_empty() {
        return Err(Error::EmptyAnalysis("no size-2 hyperedges".into()));
    }
    let mut classes: Vec<u32> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    classes.sort_unstable();
    classes.dedup();
    let m = classes.len();
    let index = |a: u32| classes.binary_search(&a).expect("present");

    let mut mixing = vec![0u64; m * m];
    for &(a, b) in &pairs {
        let (i, j) = (index(a), index(b));
        mixing[i * m + j] += 1;
        mixing[j * m + i] += 1;
    }
    let total = (2 * pairs.len()) as f64;
    let trace: f64 = (0..m).map(|i| mixing[i * m + i] as f64).sum::<f64>() / total;
    let expected: f64 = (0..m)
        .map(|i| {
            let a = mixing[i * m..(i + 1) * m].iter().sum::<u64>() as f64 / total;
            a * a
        })
        .sum();
    let denominator = 1.0 - expected;
    if denominator.abs() < 1e-15 {
        return Err(Error::Degenerate("every pairwise edge endpoint has the same attribute".into()));
    }
    Ok((trace - expected) / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfectly_assortative() {
        let h = Hypergraph::from_attributes(vec![0, 0, 1, 1], None, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(newman_assortativity(&h).unwrap(), 1.0);
    }

    #[test]
    fn perfectly_disassortative() {
        let h = Hypergraph::from_attributes(vec![0, 1], None, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(newman_assortativity(&h).unwrap(), -1.0);
    }

    #[test]
    fn mixed_four_node_example() {
        let h = Hypergraph::from_attributes(vec![0, 0, 1, 1], None, vec![vec![0, 1], vec![2, 3], vec![0, 2]]).unwrap();
        assert!((newman_assortativity(&h).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let h = Hypergraph::from_attributes(vec![0, 1, 1], None, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(newman_assortativity(&h), Err(Error::EmptyAnalysis(_))));
        let flat = Hypergraph::from_attributes(vec![0, 0], None, vec![vec![0, 1]]).unwrap();
        assert!(matches!(newman_assortativity(&flat), Err(Error::Degenerate(_))));
    }
}
