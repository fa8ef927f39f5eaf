//! Elimination-order search for k-tree embeddings, plus the exhaustive
//! treewidth oracle.

use std::collections::{BTreeSet, HashSet};

use super::ktree::{KTreeEmbedding, Step};
use super::{Graph, GraphError, Vertex};

/// Largest vertex count handled by the exact embedding search.
pub const EXACT_SEARCH_LIMIT: usize = 20;
/// Largest vertex count accepted by [`exhaustive_treewidth`].
pub const EXHAUSTIVE_LIMIT: usize = 10;

/// One eliminated vertex with its higher neighbourhood in the filled graph.
struct Eliminated {
    v: Vertex,
    higher: Vec<Vertex>,
}

/// Finds a k-tree containing `g`.
///
/// Up to [`EXACT_SEARCH_LIMIT`] vertices the search over elimination orders is
/// exhaustive (memoized on the eliminated set), so failure proves treewidth
/// greater than `k`. Larger graphs use a greedy min-fill heuristic whose
/// failure is reported as [`GraphError::Inconclusive`].
///
/// Vertices with higher labels are eliminated first, so the construction
/// places low labels first. Graphs with fewer than k+1 vertices are padded with
/// isolated dummies.
pub fn find_ktree_embedding(g: &Graph, k: usize) -> Result<KTreeEmbedding, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidWidth);
    }
    let n = g.n();
    let (padded, dummies) = if n < k + 1 {
        (g.with_isolated(k + 1 - n), (n + 1..=k + 1).collect())
    } else {
        (g.clone(), Vec::new())
    };
    let order = if padded.n() <= EXACT_SEARCH_LIMIT {
        exact_elimination(&padded, k).ok_or(GraphError::NotPartialKTree { k })?
    } else {
        greedy_elimination(&padded, k).ok_or(GraphError::Inconclusive {
            k,
            limit: EXACT_SEARCH_LIMIT,
        })?
    };
    let mut e = embedding_from_elimination(padded.n(), k, order);
    e.dummies = dummies;
    debug_assert!(e.validate(g).is_ok());
    Ok(e)
}

/// Turns an elimination order (stopping at k+1 remaining vertices) into
/// construction steps. Each higher neighbourhood is padded to a k-clique using
/// the clique of its earliest-eliminated member, which contains it.
fn embedding_from_elimination(n: usize, k: usize, order: Vec<Eliminated>) -> KTreeEmbedding {
    let eliminated: HashSet<Vertex> = order.iter().map(|e| e.v).collect();
    let base: Vec<Vertex> = (1..=n).filter(|v| !eliminated.contains(v)).collect();
    debug_assert_eq!(base.len(), k + 1);

    // position in elimination order, and the k-clique each vertex attached to
    let mut elim_pos = vec![usize::MAX; n + 1];
    for (i, e) in order.iter().enumerate() {
        elim_pos[e.v] = i;
    }
    let mut attached: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    let mut steps = Vec::with_capacity(order.len());

    for e in order.iter().rev() {
        // earliest eliminated among the higher neighbours; base vertices count as never eliminated
        let parent = e.higher.iter().copied().min_by_key(|&u| elim_pos[u]);
        let host: Vec<Vertex> = match parent {
            Some(u) if elim_pos[u] != usize::MAX => {
                let mut h = attached[u].clone();
                h.push(u);
                h
            }
            _ => base.clone(),
        };
        let mut q: BTreeSet<Vertex> = e.higher.iter().copied().collect();
        for &w in &host {
            if q.len() == k {
                break;
            }
            q.insert(w);
        }
        debug_assert_eq!(q.len(), k);
        let q: Vec<Vertex> = q.into_iter().collect();
        attached[e.v] = q.clone();
        steps.push(Step { z: e.v, q });
    }
    KTreeEmbedding {
        k,
        base,
        steps,
        dummies: Vec::new(),
    }
}

fn bits(mut x: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(i)
        }
    })
}

/// Vertices outside `gone ∪ {v}` reachable from `v` through `gone`: the
/// neighbourhood of `v` in the filled graph after eliminating `gone`.
fn reach_through(adj: &[u32], gone: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut out = 0u32;
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for w in bits(adj[u] & !seen) {
            seen |= 1 << w;
            if gone & (1 << w) != 0 {
                stack.push(w);
            } else {
                out |= 1 << w;
            }
        }
    }
    out
}

fn masks(g: &Graph) -> Vec<u32> {
    (1..=g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << (w - 1)))
        .collect()
}

struct ExactSearch<'a> {
    adj: &'a [u32],
    n: usize,
    k: usize,
    failed: HashSet<u32>,
    path: Vec<(usize, u32)>,
}

impl ExactSearch<'_> {
    fn is_clique(&self, gone: u32, set: u32) -> bool {
        bits(set).all(|u| {
            let nb = reach_through(self.adj, gone, u);
            (set & !(1 << u)) & !nb == 0
        })
    }

    fn run(&mut self, gone: u32) -> bool {
        if self.n - gone.count_ones() as usize <= self.k + 1 {
            return true;
        }
        if self.failed.contains(&gone) {
            return false;
        }
        let live: Vec<usize> = (0..self.n).rev().filter(|&v| gone & (1 << v) == 0).collect();
        let cands: Vec<(usize, u32)> = live
            .iter()
            .map(|&v| (v, reach_through(self.adj, gone, v)))
            .filter(|(_, q)| q.count_ones() as usize <= self.k)
            .collect();
        // a simplicial vertex of low degree can always be eliminated first
        if let Some(&(v, q)) = cands.iter().find(|(_, q)| self.is_clique(gone, *q)) {
            self.path.push((v, q));
            if self.run(gone | 1 << v) {
                return true;
            }
            self.path.pop();
            self.failed.insert(gone);
            return false;
        }
        for (v, q) in cands {
            self.path.push((v, q));
            if self.run(gone | 1 << v) {
                return true;
            }
            self.path.pop();
        }
        self.failed.insert(gone);
        false
    }
}

fn exact_elimination(g: &Graph, k: usize) -> Option<Vec<Eliminated>> {
    let adj = masks(g);
    let mut search = ExactSearch {
        adj: &adj,
        n: g.n(),
        k,
        failed: HashSet::new(),
        path: Vec::new(),
    };
    if !search.run(0) {
        return None;
    }
    Some(
        search
            .path
            .into_iter()
            .map(|(v, q)| Eliminated {
                v: v + 1,
                higher: bits(q).map(|w| w + 1).collect(),
            })
            .collect(),
    )
}

/// Greedy elimination: among vertices of current degree ≤ k pick the one
/// creating the fewest fill edges (ties to the highest label).
fn greedy_elimination(g: &Graph, k: usize) -> Option<Vec<Eliminated>> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = (1..=n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive: BTreeSet<Vertex> = (1..=n).collect();
    let mut order = Vec::new();
    while alive.len() > k + 1 {
        let fill = |v: Vertex| -> usize {
            let nb: Vec<Vertex> = adj[v - 1].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a - 1].contains(&b) {
                        missing += 1;
                    }
                }
            }
            missing
        };
        let v = alive
            .iter()
            .rev()
            .copied()
            .filter(|&v| adj[v - 1].len() <= k)
            .min_by_key(|&v| fill(v))?;
        let higher: Vec<Vertex> = adj[v - 1].iter().copied().collect();
        for (i, &a) in higher.iter().enumerate() {
            adj[a - 1].remove(&v);
            for &b in &higher[i + 1..] {
                adj[a - 1].insert(b);
                adj[b - 1].insert(a);
            }
        }
        adj[v - 1].clear();
        alive.remove(&v);
        order.push(Eliminated { v, higher });
    }
    Some(order)
}

/// Exact treewidth by dynamic programming over eliminated vertex sets:
/// `tw(S) = min_{v∈S} max(tw(S∖v), |N_fill(S∖v, v)|)`.
pub fn exhaustive_treewidth(g: &Graph) -> Result<usize, GraphError> {
    let n = g.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(GraphError::InstanceTooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<Vec<usize>> = (1..=n)
        .map(|v| g.neighbors(v).iter().map(|w| w - 1).collect())
        .collect();
    // fill-neighbourhood size of v after eliminating the set `before`
    let fill_degree = |before: usize, v: usize| -> usize {
        let mut seen = vec![false; n];
        seen[v] = true;
        let mut queue = std::collections::VecDeque::from([v]);
        let mut count = 0;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                if before >> w & 1 == 1 {
                    queue.push_back(w);
                } else {
                    count += 1;
                }
            }
        }
        count
    };
    let full = (1usize << n) - 1;
    let mut tw = vec![i64::MAX; full + 1];
    tw[0] = -1;
    for set in 1..=full {
        for v in 0..n {
            if set >> v & 1 == 0 {
                continue;
            }
            let rest = set & !(1 << v);
            let cost = tw[rest].max(fill_degree(rest, v) as i64);
            tw[set] = tw[set].min(cost);
        }
    }
    Ok(tw[full] as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(exhaustive_treewidth(&path(4)).unwrap(), 1);
        assert_eq!(exhaustive_treewidth(&cycle(5)).unwrap(), 2);
        assert_eq!(exhaustive_treewidth(&Graph::complete(5)).unwrap(), 4);
        assert_eq!(exhaustive_treewidth(&Graph::empty(3)).unwrap(), 0);
        assert_eq!(
            exhaustive_treewidth(&Graph::empty(11)),
            Err(GraphError::InstanceTooLarge { n: 11, limit: 10 })
        );
    }

    #[test]
    fn path_embedding_matches_construction_example() {
        let e = find_ktree_embedding(&path(3), 1).unwrap();
        assert_eq!(e.base, vec![1, 2]);
        assert_eq!(e.steps, vec![Step { z: 3, q: vec![2] }]);
    }

    #[test]
    fn star_embedding() {
        // centre 1, leaves 2, 3, 4
        let g = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let e = find_ktree_embedding(&g, 1).unwrap();
        assert_eq!(e.base, vec![1, 2]);
        assert_eq!(
            e.steps,
            vec![Step { z: 3, q: vec![1] }, Step { z: 4, q: vec![1] }]
        );
    }

    #[test]
    fn cycle_embeddings() {
        let c4 = cycle(4);
        assert_eq!(
            find_ktree_embedding(&c4, 1),
            Err(GraphError::NotPartialKTree { k: 1 })
        );
        let e = find_ktree_embedding(&c4, 2).unwrap();
        assert_eq!(e.base, vec![1, 2, 3]);
        assert_eq!(e.steps, vec![Step { z: 4, q: vec![1, 3] }]);
        e.validate(&c4).unwrap();
    }

    #[test]
    fn complete_graph_needs_full_width() {
        assert_eq!(
            find_ktree_embedding(&Graph::complete(4), 2),
            Err(GraphError::NotPartialKTree { k: 2 })
        );
        assert!(find_ktree_embedding(&Graph::complete(4), 3).is_ok());
    }

    #[test]
    fn trees_are_partial_one_trees() {
        let g = Graph::from_edges(7, &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (6, 7)]).unwrap();
        let e = find_ktree_embedding(&g, 1).unwrap();
        e.validate(&g).unwrap();
        // leaves go in after their neighbour
        for s in &e.steps {
            if g.degree(s.z) == 1 {
                assert_eq!(s.q, g.neighbors(s.z).iter().copied().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn disconnected_and_small_inputs() {
        let g = Graph::from_edges(5, &[(1, 2), (4, 5)]).unwrap();
        find_ktree_embedding(&g, 1).unwrap().validate(&g).unwrap();
        find_ktree_embedding(&g, 3).unwrap().validate(&g).unwrap();

        let single = Graph::empty(1);
        let e = find_ktree_embedding(&single, 1).unwrap();
        assert_eq!(e.base, vec![1, 2]);
        assert_eq!(e.dummies, vec![2]);
        e.validate(&single).unwrap();

        let e = find_ktree_embedding(&Graph::from_edges(2, &[(1, 2)]).unwrap(), 3).unwrap();
        assert_eq!(e.dummies, vec![3, 4]);
        assert_eq!(e.vertex_count(), 4);
        assert_eq!(find_ktree_embedding(&single, 0), Err(GraphError::InvalidWidth));
    }

    #[test]
    fn heuristic_regime() {
        // long path: greedy succeeds
        let p = path(30);
        find_ktree_embedding(&p, 1).unwrap().validate(&p).unwrap();
        // a 30-cycle has treewidth 2; greedy cannot do it with k = 1
        assert_eq!(
            find_ktree_embedding(&cycle(30), 1),
            Err(GraphError::Inconclusive { k: 1, limit: EXACT_SEARCH_LIMIT })
        );
        let c = cycle(30);
        find_ktree_embedding(&c, 2).unwrap().validate(&c).unwrap();
    }
}
