use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Digraph;

/// With probability 1/3 for both directions, each of the three states of a
/// pair is equally likely.
pub const DEFAULT_ANTIPARALLEL_PROB: f64 = 1.0 / 3.0;

/// Random digraph with complete underlying graph. Each unordered pair gets
/// both directions with probability `antiparallel_prob`, otherwise one
/// direction chosen uniformly. Deterministic in `seed`.
pub fn gen_random_diam1(n: usize, antiparallel_prob: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1));
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(antiparallel_prob) {
                edges.push((u, v));
                edges.push((v, u));
            } else if rng.gen_bool(0.5) {
                edges.push((u, v));
            } else {
                edges.push((v, u));
            }
        }
    }
    Digraph::new(n, edges).expect("pair states never repeat an edge")
}

/// Every digraph on `n` vertices with complete underlying graph:
/// `3^(n(n−1)/2)` of them.
pub fn enumerate_diam1(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    (0..total).map(move |mut code| {
        let mut edges = Vec::with_capacity(2 * pairs.len());
        for &(u, v) in &pairs {
            match code % 3 {
                0 => edges.push((u, v)),
                1 => edges.push((v, u)),
                _ => edges.extend([(u, v), (v, u)]),
            }
            code /= 3;
        }
        Digraph::new(n, edges).expect("pair states never repeat an edge")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Distance;
    use std::collections::HashSet;

    #[test]
    fn fully_antiparallel() {
        let g = gen_random_diam1(2, 1.0, 9);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn always_underlying_complete_and_seeded() {
        for seed in 0..20 {
            let g = gen_random_diam1(5, DEFAULT_ANTIPARALLEL_PROB, seed);
            assert_eq!(g.underlying_diameter(), Distance::Finite(1));
            assert_eq!(g, gen_random_diam1(5, DEFAULT_ANTIPARALLEL_PROB, seed));
        }
        assert_ne!(gen_random_diam1(12, 0.3, 1), gen_random_diam1(12, 0.3, 2));
        assert!(!gen_random_diam1(12, 0.0, 1).has_antiparallel_pair());
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        assert_eq!(enumerate_diam1(1).count(), 1);
        assert_eq!(enumerate_diam1(2).count(), 3);
        assert_eq!(enumerate_diam1(3).count(), 27);
        let all: Vec<Digraph> = enumerate_diam1(4).collect();
        assert_eq!(all.len(), 729);
        assert!(all.iter().all(Digraph::is_underlying_complete));
        let distinct: HashSet<Vec<(usize, usize)>> = all.iter().map(|g| g.edges().collect()).collect();
        assert_eq!(distinct.len(), 729);
    }
}
