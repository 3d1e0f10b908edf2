use gpsofic_combinat::{kernel_of, Partition};

use crate::GraphError;

/// A directed edge.  `id` is stable under quotients and colour restrictions so
/// parallel edges remain distinguishable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    pub colour: usize,
    pub label: String,
}

/// Finite directed multigraph with coloured, labelled edges and optional
/// diagonal loop labels per vertex.
///
/// A vertex may carry several loop labels; they are multiplied in the stored
/// order, which after a quotient is ascending original vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestDigraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    loop_labels: Vec<Vec<String>>,
    vertex_names: Vec<String>,
}

impl TestDigraph {
    /// Builds a digraph with vertices named `0..n`.
    pub fn new(n_vertices: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let names = (0..n_vertices).map(|v| v.to_string()).collect();
        Self::with_names(names, edges, vec![Vec::new(); n_vertices])
    }

    pub fn with_names(
        vertex_names: Vec<String>,
        edges: Vec<Edge>,
        loop_labels: Vec<Vec<String>>,
    ) -> Result<Self, GraphError> {
        let n = vertex_names.len();
        for e in &edges {
            for v in [e.source, e.target] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
        }
        if loop_labels.len() != n {
            return Err(GraphError::VertexOutOfRange {
                vertex: loop_labels.len(),
                n,
            });
        }
        Ok(TestDigraph {
            n_vertices: n,
            edges,
            loop_labels,
            vertex_names,
        })
    }

    /// Convenience constructor from `(source, target, colour)` triples; edge
    /// `k` gets id `k` and label `X{k}`.
    pub fn from_triples(
        n_vertices: usize,
        triples: &[(usize, usize, usize)],
    ) -> Result<Self, GraphError> {
        let edges = triples
            .iter()
            .enumerate()
            .map(|(k, &(source, target, colour))| Edge {
                id: k,
                source,
                target,
                colour,
                label: format!("X{k}"),
            })
            .collect();
        Self::new(n_vertices, edges)
    }

    #[must_use]
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    #[must_use]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[must_use]
    pub fn edge_by_id(&self, id: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    #[must_use]
    pub fn loop_labels(&self, v: usize) -> &[String] {
        &self.loop_labels[v]
    }

    #[must_use]
    pub fn has_loop_labels(&self) -> bool {
        self.loop_labels.iter().any(|l| !l.is_empty())
    }

    pub fn set_loop_labels(&mut self, v: usize, labels: Vec<String>) {
        self.loop_labels[v] = labels;
    }

    /// Drops every loop label (the digraph `T` underlying `T` with loops).
    #[must_use]
    pub fn without_loops(&self) -> Self {
        let mut out = self.clone();
        out.loop_labels.iter_mut().for_each(Vec::clear);
        out
    }

    #[must_use]
    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    /// Colours used by at least one edge, ascending.
    #[must_use]
    pub fn colours_used(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.edges.iter().map(|e| e.colour).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    #[must_use]
    pub fn n_components(&self) -> usize {
        components(self).n_blocks()
    }

    #[must_use]
    pub fn is_connected(&self) -> bool {
        self.n_components() <= 1
    }

    /// Undirected adjacency: for each vertex, `(neighbour, edge index)` pairs.
    /// Self-loops appear once.
    #[must_use]
    pub fn undirected_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.source].push((e.target, k));
            if e.source != e.target {
                adj[e.target].push((e.source, k));
            }
        }
        adj
    }
}

/// Weakly connected components.
#[must_use]
pub fn components(t: &TestDigraph) -> Partition {
    components_skipping(t, None)
}

pub(crate) fn components_skipping(t: &TestDigraph, skip: Option<usize>) -> Partition {
    let mut root: Vec<usize> = (0..t.n_vertices).collect();
    fn find(root: &mut [usize], mut v: usize) -> usize {
        while root[v] != v {
            root[v] = root[root[v]];
            v = root[v];
        }
        v
    }
    for (k, e) in t.edges.iter().enumerate() {
        if Some(k) == skip {
            continue;
        }
        let (a, b) = (find(&mut root, e.source), find(&mut root, e.target));
        if a != b {
            root[a.max(b)] = a.min(b);
        }
    }
    let labels: Vec<usize> = (0..t.n_vertices).map(|v| find(&mut root, v)).collect();
    kernel_of(&labels)
}

/// `T / p`: vertices are the blocks of `p`; edges keep ids, colours and labels.
/// Loop labels of merged vertices are concatenated in ascending vertex order.
pub fn quotient(t: &TestDigraph, p: &Partition) -> Result<TestDigraph, GraphError> {
    if p.ground_size() != t.n_vertices {
        return Err(GraphError::Partition(
            gpsofic_combinat::PartitionError::GroundSizeMismatch {
                left: t.n_vertices,
                right: p.ground_size(),
            },
        ));
    }
    let blocks = p.blocks();
    let names = blocks
        .iter()
        .map(|b| {
            if b.len() == 1 {
                t.vertex_names[b[0]].clone()
            } else {
                let inner: Vec<&str> = b.iter().map(|&v| t.vertex_names[v].as_str()).collect();
                format!("{{{}}}", inner.join(","))
            }
        })
        .collect();
    let loops = blocks
        .iter()
        .map(|b| {
            b.iter()
                .flat_map(|&v| t.loop_labels[v].iter().cloned())
                .collect()
        })
        .collect();
    let edges = t
        .edges
        .iter()
        .map(|e| Edge {
            source: p.block_of(e.source),
            target: p.block_of(e.target),
            ..e.clone()
        })
        .collect();
    TestDigraph::with_names(names, edges, loops)
}

/// `T|_C`: same vertices, only edges whose colour is accepted by `keep`.
#[must_use]
pub fn restrict_colours(t: &TestDigraph, keep: impl Fn(usize) -> bool) -> TestDigraph {
    TestDigraph {
        edges: t.edges.iter().filter(|e| keep(e.colour)).cloned().collect(),
        ..t.clone()
    }
}
