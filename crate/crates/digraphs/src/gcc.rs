use gpsofic_combinat::{Partition, PartitionTuple};

use crate::digraph::components;
use crate::{quotient, restrict_colours, GraphError, StringAssignment, TestDigraph};

fn check_colours(t: &TestDigraph, a: &StringAssignment) -> Result<(), GraphError> {
    match t.edges().iter().find(|e| e.colour >= a.n_colours()) {
        Some(e) => Err(GraphError::UnknownColour(e.colour)),
        None => Ok(()),
    }
}

/// `rho_s`: components of the subgraph of edges whose colour does not act on `s`.
pub fn rho(t: &TestDigraph, a: &StringAssignment, s: usize) -> Result<Partition, GraphError> {
    if s >= a.n_strings() {
        return Err(GraphError::UnknownString(s));
    }
    check_colours(t, a)?;
    Ok(components(&restrict_colours(t, |c| !a.acts_on(c, s))))
}

/// `pi_c`: meet of `pi_s` over the strings of colour `c`.
pub fn pi_colour(
    pi: &PartitionTuple,
    a: &StringAssignment,
    c: usize,
) -> Result<Partition, GraphError> {
    if c >= a.n_colours() {
        return Err(GraphError::UnknownColour(c));
    }
    check_tuple(pi, a)?;
    let ss = a.strings_of(c);
    let mut acc = pi.get(ss[0]).clone();
    for &s in &ss[1..] {
        acc = acc.meet(pi.get(s))?;
    }
    Ok(acc)
}

fn check_tuple(pi: &PartitionTuple, a: &StringAssignment) -> Result<(), GraphError> {
    if pi.len() == a.n_strings() {
        Ok(())
    } else {
        Err(GraphError::TupleLength {
            got: pi.len(),
            expected: a.n_strings(),
        })
    }
}

/// `T_{pi,c} = (T|_c) / pi_c`.
pub fn colour_quotient(
    t: &TestDigraph,
    a: &StringAssignment,
    pi: &PartitionTuple,
    c: usize,
) -> Result<TestDigraph, GraphError> {
    let pc = pi_colour(pi, a, c)?;
    quotient(&restrict_colours(t, |x| x == c), &pc)
}

/// `(T|_{C_s}) / pi_s`.
pub fn string_quotient(
    t: &TestDigraph,
    a: &StringAssignment,
    pi: &PartitionTuple,
    s: usize,
) -> Result<TestDigraph, GraphError> {
    check_tuple(pi, a)?;
    if s >= a.n_strings() {
        return Err(GraphError::UnknownString(s));
    }
    quotient(&restrict_colours(t, |c| a.acts_on(c, s)), pi.get(s))
}

/// Undirected bipartite multigraph; left and right vertices are numbered
/// separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteMultigraph {
    pub n_left: usize,
    pub n_right: usize,
    /// `(left, right)` pairs; repeated pairs are parallel edges.
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteMultigraph {
    #[must_use]
    pub fn n_vertices(&self) -> usize {
        self.n_left + self.n_right
    }

    #[must_use]
    pub fn is_connected(&self) -> bool {
        let n = self.n_vertices();
        if n == 0 {
            return true;
        }
        let mut root: Vec<usize> = (0..n).collect();
        fn find(root: &mut [usize], mut v: usize) -> usize {
            while root[v] != v {
                root[v] = root[root[v]];
                v = root[v];
            }
            v
        }
        let mut merges = 0;
        for &(l, r) in &self.edges {
            let (x, y) = (find(&mut root, l), find(&mut root, self.n_left + r));
            if x != y {
                root[x.max(y)] = x.min(y);
                merges += 1;
            }
        }
        merges == n - 1
    }

    /// Connected with `|E| = |V| - 1`; a parallel pair is a 2-cycle and so
    /// already excluded by the edge count.
    #[must_use]
    pub fn is_tree(&self) -> bool {
        self.n_vertices() >= 1 && self.edges.len() + 1 == self.n_vertices() && self.is_connected()
    }

    #[must_use]
    pub fn multiplicity(&self, left: usize, right: usize) -> usize {
        self.edges.iter().filter(|&&e| e == (left, right)).count()
    }
}

/// A connected component of `T_{pi,c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredComponent {
    pub colour: usize,
    /// Original vertices of `T` lying in this component, ascending.
    pub vertices: Vec<usize>,
}

/// A vertex of `T_{pi,c}`, viewed as an edge of the GCC.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GccEdge {
    pub colour: usize,
    /// The block of `pi_c` (original vertices) this edge stands for.
    pub block: Vec<usize>,
    pub component: usize,
    pub quotient_vertex: usize,
}

/// Graph of coloured components for one string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gcc {
    pub string: usize,
    /// Blocks of `pi_s`: the vertices of `(T|_{C_s}) / pi_s`.
    pub quotient_vertices: Vec<Vec<usize>>,
    /// Components of `T_{pi,c}` for `c` in `C_s`, grouped by colour ascending.
    pub components: Vec<ColouredComponent>,
    pub edges: Vec<GccEdge>,
}

impl Gcc {
    #[must_use]
    pub fn graph(&self) -> BipartiteMultigraph {
        BipartiteMultigraph {
            n_left: self.quotient_vertices.len(),
            n_right: self.components.len(),
            edges: self
                .edges
                .iter()
                .map(|e| (e.quotient_vertex, e.component))
                .collect(),
        }
    }

    #[must_use]
    pub fn is_tree(&self) -> bool {
        self.graph().is_tree()
    }

    #[must_use]
    pub fn quotient_vertex_of(&self, v: usize) -> Option<usize> {
        self.quotient_vertices.iter().position(|b| b.contains(&v))
    }

    /// Component of colour `c` containing original vertex `v`.
    #[must_use]
    pub fn component_of(&self, c: usize, v: usize) -> Option<usize> {
        self.components
            .iter()
            .position(|k| k.colour == c && k.vertices.contains(&v))
    }

    /// GCC edge standing for the `pi_c`-block of `v`.
    #[must_use]
    pub fn edge_of(&self, c: usize, v: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| e.colour == c && e.block.contains(&v))
    }

    /// Number of parallel edges between a quotient vertex and a component.
    #[must_use]
    pub fn multiplicity(&self, quotient_vertex: usize, component: usize) -> usize {
        self.graph().multiplicity(quotient_vertex, component)
    }
}

/// Builds `GCC(T, pi, s)`.  Every string involved (`s` and all strings of
/// colours acting on `s`) must carry a partition above its floor `rho`.
pub fn gcc(
    t: &TestDigraph,
    a: &StringAssignment,
    pi: &PartitionTuple,
    s: usize,
) -> Result<Gcc, GraphError> {
    check_tuple(pi, a)?;
    if s >= a.n_strings() {
        return Err(GraphError::UnknownString(s));
    }
    let mut involved = vec![s];
    for &c in a.colours_of(s) {
        involved.extend_from_slice(a.strings_of(c));
    }
    involved.sort_unstable();
    involved.dedup();
    for &u in &involved {
        if !rho(t, a, u)?.leq(pi.get(u))? {
            return Err(GraphError::BelowFloor { string: u });
        }
    }
    Ok(gcc_unchecked(t, a, pi, s))
}

pub(crate) fn gcc_unchecked(
    t: &TestDigraph,
    a: &StringAssignment,
    pi: &PartitionTuple,
    s: usize,
) -> Gcc {
    let ps = pi.get(s);
    let mut components_out = Vec::new();
    let mut edges = Vec::new();
    for &c in a.colours_of(s) {
        let pc = pi_colour(pi, a, c).expect("tuple checked");
        let tq = quotient(&restrict_colours(t, |x| x == c), &pc).expect("sizes match");
        let comp = components(&tq);
        let offset = components_out.len();
        let mut verts = vec![Vec::new(); comp.n_blocks()];
        for v in 0..t.n_vertices() {
            verts[comp.block_of(pc.block_of(v))].push(v);
        }
        components_out.extend(verts.into_iter().map(|vertices| ColouredComponent {
            colour: c,
            vertices,
        }));
        for (b, block) in pc.blocks().into_iter().enumerate() {
            edges.push(GccEdge {
                colour: c,
                component: offset + comp.block_of(b),
                quotient_vertex: ps.block_of(block[0]),
                block,
            });
        }
    }
    Gcc {
        string: s,
        quotient_vertices: ps.blocks(),
        components: components_out,
        edges,
    }
}

/// Vertex of a GCC: a block of `pi_s` or a coloured component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GccVertex {
    Quotient(usize),
    Component(usize),
}

/// A walk in a GCC: `vertices.len() == edges.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GccWalk {
    pub vertices: Vec<GccVertex>,
    pub edges: Vec<usize>,
}

/// The walk induced in `GCC(T, pi, s)` by a walk of edges of `T`: each edge
/// whose colour acts on `s` contributes the GCC edges of its endpoints'
/// `pi_c`-blocks through its component.
pub fn induced_walk(
    t: &TestDigraph,
    a: &StringAssignment,
    pi: &PartitionTuple,
    s: usize,
    edge_ids: &[usize],
) -> Result<(Gcc, GccWalk), GraphError> {
    let g = gcc(t, a, pi, s)?;
    let walk_edges: Vec<_> = edge_ids
        .iter()
        .map(|&id| t.edge_by_id(id).ok_or(GraphError::UnknownEdge(id)))
        .collect::<Result<_, _>>()?;
    let Some(first) = walk_edges.first() else {
        return Err(GraphError::NotAWalk("empty".into()));
    };
    let ps = pi.get(s);
    let start = ps.block_of(first.source);
    let mut walk = GccWalk {
        vertices: vec![GccVertex::Quotient(start)],
        edges: Vec::new(),
    };
    let mut here = start;
    for e in walk_edges.into_iter().filter(|e| a.acts_on(e.colour, s)) {
        if ps.block_of(e.source) != here {
            return Err(GraphError::NotAWalk(format!(
                "edge {} does not start where the walk is",
                e.id
            )));
        }
        let comp = g
            .component_of(e.colour, e.source)
            .expect("component exists");
        let out_edge = g.edge_of(e.colour, e.source).expect("edge exists");
        let in_edge = g.edge_of(e.colour, e.target).expect("edge exists");
        here = ps.block_of(e.target);
        walk.edges.extend([out_edge, in_edge]);
        walk.vertices
            .extend([GccVertex::Component(comp), GccVertex::Quotient(here)]);
    }
    Ok((g, walk))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> StringAssignment {
        StringAssignment::new(vec!["1".into()], vec!["a".into()], &[(0, 0)]).unwrap()
    }

    #[test]
    fn single_edge_gcc_is_a_path() {
        let t = TestDigraph::from_triples(2, &[(0, 1, 0)]).unwrap();
        let a = single();
        let pi = PartitionTuple::new(vec![Partition::bottom(2)]).unwrap();
        let g = gcc(&t, &a, &pi, 0).unwrap();
        assert_eq!(g.quotient_vertices.len(), 2);
        assert_eq!(g.components.len(), 1);
        assert_eq!(g.edges.len(), 2);
        assert!(g.is_tree());
    }

    #[test]
    fn below_floor_is_rejected() {
        let a = StringAssignment::new(
            vec!["1".into(), "2".into()],
            vec!["a".into(), "b".into()],
            &[(0, 0), (1, 1)],
        )
        .unwrap();
        let t = TestDigraph::from_triples(2, &[(0, 1, 1)]).unwrap();
        // colour b does not act on string 0, so rho_0 merges the endpoints
        let pi = PartitionTuple::new(vec![Partition::bottom(2), Partition::bottom(2)]).unwrap();
        assert_eq!(
            gcc(&t, &a, &pi, 0).unwrap_err(),
            GraphError::BelowFloor { string: 0 }
        );
    }

    #[test]
    fn tree_check() {
        let one = BipartiteMultigraph {
            n_left: 1,
            n_right: 0,
            edges: vec![],
        };
        assert!(one.is_tree());
        let parallel = BipartiteMultigraph {
            n_left: 1,
            n_right: 1,
            edges: vec![(0, 0), (0, 0)],
        };
        assert!(!parallel.is_tree());
        let disconnected = BipartiteMultigraph {
            n_left: 2,
            n_right: 2,
            edges: vec![(0, 0), (0, 0), (1, 1)],
        };
        assert!(!disconnected.is_tree());
    }

    #[test]
    fn pi_colour_of_single_string_colour() {
        let a = single();
        let p = Partition::from_blocks(3, [vec![0, 2], vec![1]]).unwrap();
        let pi = PartitionTuple::new(vec![p.clone()]).unwrap();
        assert_eq!(pi_colour(&pi, &a, 0).unwrap(), p);
    }
}
