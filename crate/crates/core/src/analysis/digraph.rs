//! Interaction digraphs, neighbourhoods and distances.
//!
//! Distances are measured on the symmetric closure of the digraph. For
//! clique-tree networks the closure changes nothing.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::network::{Configuration, Dynamics, NetworkSpec};

/// Default limit on `n * k^n` for perturbation-based extraction.
pub const DEFAULT_EMPIRICAL_BUDGET: u128 = 10_000_000;

/// Edge `(u, v)` means `u` influences `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionDigraph {
    out_edges: Vec<Vec<usize>>,
}

impl InteractionDigraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out_edges = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), n });
            }
            out_edges[u].push(v);
        }
        for list in &mut out_edges {
            list.sort_unstable();
            list.dedup();
        }
        Ok(InteractionDigraph { out_edges })
    }

    pub fn n(&self) -> usize {
        self.out_edges.len()
    }

    pub fn out_edges(&self, u: usize) -> &[usize] {
        &self.out_edges[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_edges
            .get(u)
            .is_some_and(|l| l.binary_search(&v).is_ok())
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    fn undirected(&self) -> Vec<Vec<usize>> {
        let mut adj = self.out_edges.clone();
        for (u, v) in self.edges() {
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

/// Reads the digraph off the neighbour lists. Exact for sum rules, as every
/// coefficient is 1 and hence nonzero modulo `k`.
pub fn semantic_digraph(network: &NetworkSpec) -> InteractionDigraph {
    let mut out_edges = vec![Vec::new(); network.n()];
    for (v, rule) in network.rules().iter().enumerate() {
        for &u in rule.neighbors() {
            out_edges[u].push(v);
        }
    }
    // v ascends, so every list is already sorted.
    InteractionDigraph { out_edges }
}

pub fn empirical_digraph<D: Dynamics + ?Sized>(network: &D) -> Result<InteractionDigraph> {
    empirical_digraph_with_budget(network, DEFAULT_EMPIRICAL_BUDGET)
}

/// Finds `(u, v)` whenever two configurations differing only at `u` give
/// different values of `f_v`, by trying every configuration and every
/// alternative symbol at every position.
pub fn empirical_digraph_with_budget<D: Dynamics + ?Sized>(
    network: &D,
    budget: u128,
) -> Result<InteractionDigraph> {
    let n = network.size();
    let k = network.alphabet();
    let total = (k as u128)
        .checked_pow(n as u32)
        .ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    let required = total.saturating_mul(n as u128);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut found = vec![vec![false; n]; n];
    let mut base = vec![0; n];
    let mut other = vec![0; n];
    for idx in 0..total as u64 {
        let x = Configuration::from_index(idx, n, k);
        network.step_into(x.symbols(), &mut base);
        let mut y = x.into_inner();
        for u in 0..n {
            let orig = y[u];
            // Pairs are symmetric, so only try larger symbols.
            for s in orig as usize + 1..k {
                y[u] = s as u8;
                network.step_into(&y, &mut other);
                for v in 0..n {
                    if base[v] != other[v] {
                        found[u][v] = true;
                    }
                }
            }
            y[u] = orig;
        }
    }
    let edges = found.iter().enumerate().flat_map(|(u, row)| {
        row.iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(move |(v, _)| (u, v))
    });
    InteractionDigraph::from_edges(n, edges)
}

/// BFS distances from `u` over the symmetric closure; `None` if unreachable.
pub fn distances_from(g: &InteractionDigraph, u: usize) -> Result<Vec<Option<usize>>> {
    if u >= g.n() {
        return Err(Error::IndexOutOfRange { index: u, n: g.n() });
    }
    Ok(bfs(&g.undirected(), u))
}

fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn distance_matrix(g: &InteractionDigraph) -> Vec<Vec<Option<usize>>> {
    let adj = g.undirected();
    (0..g.n()).map(|u| bfs(&adj, u)).collect()
}

/// `N_r(u)`: automata within `r` edges of `u`, sorted.
pub fn neighbourhood(g: &InteractionDigraph, u: usize, r: usize) -> Result<Vec<usize>> {
    let dist = distances_from(g, u)?;
    Ok(dist
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_some_and(|d| d <= r))
        .map(|(v, _)| v)
        .collect())
}

/// Largest BFS eccentricity.
pub fn diameter(g: &InteractionDigraph) -> Result<usize> {
    let mut best = 0;
    for row in distance_matrix(g) {
        for d in row {
            best = best.max(d.ok_or(Error::Disconnected)?);
        }
    }
    Ok(best)
}

pub fn network_diameter(network: &NetworkSpec) -> Result<usize> {
    diameter(&semantic_digraph(network))
}

/// Diameter of a line of cliques of size `n`: `(n - 1) / k`.
pub fn predicted_diameter(k: usize, n: usize) -> Result<usize> {
    if k < 2 || n <= 1 || n % k != 1 {
        return Err(Error::InvalidNetwork(format!(
            "line plans need n = 1 mod k with n > 1 (got k = {k}, n = {n})"
        )));
    }
    Ok((n - 1) / k)
}

/// A failure of the multiplicity property: `j` lies in `N_{r+1}(i)` but
/// the number of `v` in `N_1(i)` with `j` in `N_r(v)` is not 1 mod k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityViolation {
    pub i: usize,
    pub r: usize,
    pub j: usize,
    pub count: usize,
}

/// Checks, for every `i`, `r <= diameter` and `j` in `N_{r+1}(i)`, that
/// `j` is reached through exactly `1 mod k` of the neighbours of `i`.
/// This is the counting fact behind each automaton holding the sum over its
/// radius-`r` neighbourhood after `r` steps.
pub fn check_multiplicity(g: &InteractionDigraph, k: usize) -> Result<Option<MultiplicityViolation>> {
    let dist = distance_matrix(g);
    let diam = diameter(g)?;
    let n = g.n();
    for i in 0..n {
        let ball1: Vec<usize> = (0..n).filter(|&v| dist[i][v] <= Some(1)).collect();
        for r in 0..=diam {
            for j in 0..n {
                if dist[i][j] > Some(r + 1) {
                    continue;
                }
                let count = ball1.iter().filter(|&&v| dist[v][j] <= Some(r)).count();
                if count % k != 1 {
                    return Ok(Some(MultiplicityViolation { i, r, j, count }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_ct, make_plan, CliqueTreePlan, PlanShape};
    use crate::network::LocalRule;

    fn example_eleven() -> NetworkSpec {
        build_ct(&CliqueTreePlan::explicit(2, vec![0, 1, 2, 0, 8]).unwrap()).unwrap()
    }

    #[test]
    fn seed_network_has_one_self_loop() {
        let g = semantic_digraph(&build_ct(&CliqueTreePlan::explicit(2, vec![]).unwrap()).unwrap());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!(diameter(&g).unwrap(), 0);
    }

    #[test]
    fn example_eleven_digraph() {
        let g = semantic_digraph(&example_eleven());
        assert_eq!(g.edge_count(), 41);
        assert!(g.has_edge(8, 9) && g.has_edge(9, 8));
        assert!(!g.has_edge(3, 5));
        for (u, v) in g.edges() {
            assert!(g.has_edge(v, u));
        }
        assert_eq!(diameter(&g).unwrap(), 4);
    }

    #[test]
    fn neighbourhoods() {
        let g = semantic_digraph(&example_eleven());
        assert_eq!(neighbourhood(&g, 3, 1).unwrap(), vec![1, 3, 4]);
        assert_eq!(neighbourhood(&g, 7, 0).unwrap(), vec![7]);
        assert_eq!(neighbourhood(&g, 9, 2).unwrap(), vec![0, 7, 8, 9, 10]);
        assert_eq!(neighbourhood(&g, 0, 4).unwrap(), (0..11).collect::<Vec<_>>());
        assert!(neighbourhood(&g, 11, 1).is_err());
        for u in 0..11 {
            for r in 0..5 {
                let a = neighbourhood(&g, u, r).unwrap();
                let b = neighbourhood(&g, u, r + 1).unwrap();
                assert!(a.iter().all(|v| b.contains(v)));
            }
        }
    }

    #[test]
    fn diameters() {
        let single = semantic_digraph(&build_ct(&make_plan(5, 1, PlanShape::Line).unwrap()).unwrap());
        assert_eq!(diameter(&single).unwrap(), 1);
        let disconnected = InteractionDigraph::from_edges(2, [(0, 0), (1, 1)]).unwrap();
        assert_eq!(diameter(&disconnected), Err(Error::Disconnected));
        for c in 2..6 {
            let star = semantic_digraph(&build_ct(&make_plan(3, c, PlanShape::Star).unwrap()).unwrap());
            assert_eq!(diameter(&star).unwrap(), 2);
        }
    }

    #[test]
    fn predicted() {
        assert_eq!(predicted_diameter(2, 289).unwrap(), 144);
        assert_eq!(predicted_diameter(3, 289).unwrap(), 96);
        assert_eq!(predicted_diameter(4, 289).unwrap(), 72);
        assert!(predicted_diameter(2, 10).is_err());
        assert!(predicted_diameter(2, 1).is_err());
    }

    #[test]
    fn empirical_matches_semantic() {
        let f = build_ct(&make_plan(2, 2, PlanShape::Random(5)).unwrap()).unwrap();
        assert_eq!(empirical_digraph(&f).unwrap(), semantic_digraph(&f));
        let constant = NetworkSpec::new(
            2,
            vec![LocalRule::new(vec![], 1), LocalRule::new(vec![], 0)],
        )
        .unwrap();
        assert_eq!(empirical_digraph(&constant).unwrap().edge_count(), 0);
        assert!(matches!(
            empirical_digraph_with_budget(&f, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn multiplicity_holds_on_examples() {
        let g = semantic_digraph(&example_eleven());
        assert_eq!(check_multiplicity(&g, 2).unwrap(), None);
        // A 4-cycle (not a clique tree) has pairs reached through two neighbours.
        let square = InteractionDigraph::from_edges(
            4,
            (0..4).flat_map(|i| [(i, i), (i, (i + 1) % 4), ((i + 1) % 4, i)]),
        )
        .unwrap();
        assert!(check_multiplicity(&square, 2).unwrap().is_some());
    }
}
