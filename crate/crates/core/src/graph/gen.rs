//! Random graph generators for tests and the self-test runner.

use rand::seq::SliceRandom;
use rand::Rng;

use super::Graph;

/// Random k-tree on `n ≥ k+1` vertices with shuffled labels: start from a
/// (k+1)-clique and repeatedly join a new vertex to a random k-subset of a
/// random existing maximal clique.
pub fn random_ktree<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Graph {
    assert!(k >= 1 && n > k, "a k-tree needs at least k+1 vertices");
    let mut labels: Vec<usize> = (1..=n).collect();
    labels.shuffle(rng);
    let mut g = Graph::empty(n);
    let mut cliques: Vec<Vec<usize>> = vec![labels[..=k].to_vec()];
    for i in 0..=k {
        for j in i + 1..=k {
            g.insert_edge(labels[i], labels[j]);
        }
    }
    for &z in &labels[k + 1..] {
        let host = &cliques[rng.gen_range(0..cliques.len())];
        let drop = rng.gen_range(0..=k);
        let mut q: Vec<usize> = host
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, &v)| v)
            .collect();
        for &w in &q {
            g.insert_edge(z, w);
        }
        q.push(z);
        cliques.push(q);
    }
    g
}

/// Random subgraph of a random k-tree keeping each edge with probability `keep`.
pub fn random_partial_ktree<R: Rng + ?Sized>(n: usize, k: usize, keep: f64, rng: &mut R) -> Graph {
    let h = random_ktree(n, k, rng);
    let mut g = Graph::empty(n);
    for (u, v) in h.edges() {
        if rng.gen_bool(keep) {
            g.insert_edge(u, v);
        }
    }
    g
}

/// Uniformly random labelled tree (random 1-tree).
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    if n == 1 {
        return Graph::empty(1);
    }
    random_ktree(n, 1, rng)
}

/// Erdős–Rényi `G(n, p)`.
pub fn random_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                g.insert_edge(u, v);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::super::find_ktree_embedding;
    use super::*;

    #[test]
    fn ktree_edge_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=3 {
            for n in k + 1..12 {
                let g = random_ktree(n, k, &mut rng);
                // k(k+1)/2 for the base plus k per added vertex
                assert_eq!(g.edge_count(), k * (k + 1) / 2 + k * (n - k - 1));
                find_ktree_embedding(&g, k).unwrap().validate(&g).unwrap();
            }
        }
    }

    #[test]
    fn trees_are_connected_with_n_minus_one_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = random_tree(10, &mut rng);
        assert_eq!(g.edge_count(), 9);
        let mut seen = [false; 11];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        assert!(seen[1..].iter().all(|&s| s));
    }
}
