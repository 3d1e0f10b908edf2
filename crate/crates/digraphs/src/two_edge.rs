use gpsofic_combinat::{kernel_of, Partition};

use crate::TestDigraph;

/// Cut edges, two-edge-connected components and the forest they form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoEdgeReport {
    /// Vertex partition into two-edge-connected components.
    pub components: Partition,
    /// Ids of the cut edges, ascending.
    pub cut_edges: Vec<usize>,
    /// Forest edges between component indices (one per cut edge).
    pub forest_edges: Vec<(usize, usize)>,
    /// Leaves of the forest, an isolated node counting as two.
    pub leaf_count: usize,
}

impl TwoEdgeReport {
    #[must_use]
    pub fn is_two_edge_connected(&self, t: &TestDigraph) -> bool {
        self.cut_edges.is_empty() && t.is_connected()
    }
}

/// Bridge finding on the undirected multigraph underlying `t` (low-link DFS
/// that skips the tree edge by index, so parallel edges are never cut edges).
#[must_use]
pub fn two_edge_connected(t: &TestDigraph) -> TwoEdgeReport {
    let n = t.n_vertices();
    let adj = t.undirected_adjacency();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; t.edges().len()];
    let mut clock = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, edge used to enter, next adjacency position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        while let Some(top) = stack.last_mut() {
            let (v, via) = (top.0, top.1);
            if top.2 < adj[v].len() {
                let (w, k) = adj[v][top.2];
                top.2 += 1;
                if k == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    stack.push((w, k, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        is_cut[via] = true;
                    }
                }
            }
        }
    }

    // components after deleting cut edges
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], mut v: usize) -> usize {
        while root[v] != v {
            root[v] = root[root[v]];
            v = root[v];
        }
        v
    }
    for (k, e) in t.edges().iter().enumerate() {
        if !is_cut[k] {
            let (a, b) = (find(&mut root, e.source), find(&mut root, e.target));
            if a != b {
                root[a.max(b)] = a.min(b);
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|v| find(&mut root, v)).collect();
    let components = kernel_of(&labels);

    let mut cut_edges = Vec::new();
    let mut forest_edges = Vec::new();
    let mut degree = vec![0usize; components.n_blocks()];
    for (k, e) in t.edges().iter().enumerate() {
        if is_cut[k] {
            cut_edges.push(e.id);
            let (a, b) = (components.block_of(e.source), components.block_of(e.target));
            forest_edges.push((a, b));
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    cut_edges.sort_unstable();
    let leaf_count = degree
        .iter()
        .map(|&d| match d {
            0 => 2,
            1 => 1,
            _ => 0,
        })
        .sum();
    TwoEdgeReport {
        components,
        cut_edges,
        forest_edges,
        leaf_count,
    }
}
