//! Golden data: the six-vertex, three-colour worked example with every
//! structure derived from it (floors, colour partitions, quotient digraphs,
//! graphs of coloured components, tree claims and an induced walk).
//!
//! Vertices, strings and colours are referred to by their names so the
//! expected values read the same way the example is drawn.
#![forbid(unsafe_code)]

use gpsofic_combinat::{Partition, PartitionTuple};
use gpsofic_digraphs::fixture::{load_str, FixtureError};
use gpsofic_digraphs::{ColourGraph, StringAssignment, TestDigraph};

pub const APPENDIX_JSON: &str = include_str!("../data/appendix.json");

/// Blocks of vertex names.
pub type NamedBlocks = Vec<Vec<&'static str>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientKind {
    /// `(T restricted to colour c) / pi_c`
    Colour(&'static str),
    /// `(T restricted to the colours acting on s) / pi_s`
    String(&'static str),
}

#[derive(Clone, Debug)]
pub struct QuotientShape {
    pub kind: QuotientKind,
    pub vertices: NamedBlocks,
    /// `(label, source vertex, target vertex)` with vertices indexing `vertices`.
    pub edges: Vec<(&'static str, usize, usize)>,
}

/// One class of parallel GCC edges.
#[derive(Clone, Debug)]
pub struct GccMultiplicity {
    pub colour: &'static str,
    /// Original vertices of the coloured component.
    pub component: Vec<&'static str>,
    pub quotient_vertex: Vec<&'static str>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct GccExpectation {
    pub string: &'static str,
    pub edges: Vec<GccMultiplicity>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkStep {
    Quotient(Vec<&'static str>),
    Component(&'static str, Vec<&'static str>),
}

#[derive(Clone, Debug)]
pub struct WalkExpectation {
    pub string: &'static str,
    pub vertices: Vec<WalkStep>,
    /// `(colour, pi_c block)` for each GCC edge traversed.
    pub edges: Vec<(&'static str, Vec<&'static str>)>,
}

#[derive(Clone, Debug)]
pub struct AppendixExpected {
    pub rho: Vec<(&'static str, NamedBlocks)>,
    /// Colour partitions when every string carries its floor.
    pub pi_colour: Vec<(&'static str, NamedBlocks)>,
    pub quotients: Vec<QuotientShape>,
    pub gccs: Vec<GccExpectation>,
    /// Tree flag of each GCC when every string carries its floor.
    pub rho_trees: Vec<(&'static str, bool)>,
    /// A coarser tuple for which every GCC is a tree.
    pub sigma: Vec<(&'static str, NamedBlocks)>,
    pub walk: Vec<&'static str>,
    pub walks: Vec<WalkExpectation>,
    /// `(string, colour, block)` of the GCC edge the walk uses twice.
    pub repeated_edge: (&'static str, &'static str, Vec<&'static str>),
}

pub fn load_appendix_example(
) -> Result<(ColourGraph, StringAssignment, TestDigraph, AppendixExpected), FixtureError> {
    let f = load_str(APPENDIX_JSON)?;
    Ok((f.colour_graph, f.assignment, f.digraph, appendix_expected()))
}

/// Converts named blocks to a partition of the digraph's vertices.
///
/// # Panics
/// On a name that is not a vertex or blocks that do not partition the vertices.
#[must_use]
pub fn partition_of(t: &TestDigraph, blocks: &[Vec<&str>]) -> Partition {
    let idx: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| b.iter().map(|n| vertex_index(t, n)).collect())
        .collect();
    Partition::from_blocks(t.n_vertices(), idx).expect("named blocks form a partition")
}

/// # Panics
/// On an unknown vertex name.
#[must_use]
pub fn vertex_index(t: &TestDigraph, name: &str) -> usize {
    t.vertex_names()
        .iter()
        .position(|v| v == name)
        .unwrap_or_else(|| panic!("no vertex `{name}`"))
}

/// Tuple indexed by the assignment's strings.
///
/// # Panics
/// If a string is missing.
#[must_use]
pub fn tuple_of(
    t: &TestDigraph,
    a: &StringAssignment,
    named: &[(&str, NamedBlocks)],
) -> PartitionTuple {
    let parts = a
        .strings()
        .iter()
        .map(|s| {
            let (_, blocks) = named
                .iter()
                .find(|(n, _)| n == s)
                .expect("every string present");
            partition_of(t, blocks)
        })
        .collect();
    PartitionTuple::new(parts).expect("same ground set")
}

fn blocks(b: &[&[&'static str]]) -> NamedBlocks {
    b.iter().map(|x| x.to_vec()).collect()
}

fn m(
    colour: &'static str,
    component: &[&'static str],
    quotient_vertex: &[&'static str],
    multiplicity: usize,
) -> GccMultiplicity {
    GccMultiplicity {
        colour,
        component: component.to_vec(),
        quotient_vertex: quotient_vertex.to_vec(),
        multiplicity,
    }
}

#[must_use]
pub fn appendix_expected() -> AppendixExpected {
    let all = ["1", "2", "3", "4", "5", "6"];
    let singletons = || all.iter().map(|v| vec![*v]).collect::<NamedBlocks>();
    let rho1 = blocks(&[&["1", "2", "3", "4", "5"], &["6"]]);
    let rho2 = blocks(&[&["1", "2"], &["3"], &["4"], &["5"], &["6"]]);
    let rho3 = blocks(&[&["1"], &["2", "3", "4"], &["5", "6"]]);

    let quotients = vec![
        QuotientShape {
            kind: QuotientKind::Colour("B"),
            vertices: rho2.clone(),
            edges: vec![("X3", 0, 1), ("X4", 1, 2), ("X8", 3, 4)],
        },
        QuotientShape {
            kind: QuotientKind::Colour("G"),
            vertices: singletons(),
            edges: vec![("X2", 1, 2), ("X5", 2, 4), ("X6", 3, 0), ("X7", 3, 4)],
        },
        QuotientShape {
            kind: QuotientKind::Colour("R"),
            vertices: rho3.clone(),
            edges: vec![("X1", 0, 1)],
        },
        QuotientShape {
            kind: QuotientKind::String("1"),
            vertices: rho1.clone(),
            edges: vec![("X3", 0, 0), ("X4", 0, 0), ("X8", 0, 1)],
        },
        QuotientShape {
            kind: QuotientKind::String("2"),
            vertices: rho2.clone(),
            edges: vec![
                ("X2", 0, 1),
                ("X3", 0, 1),
                ("X4", 1, 2),
                ("X5", 1, 3),
                ("X6", 2, 0),
                ("X7", 2, 3),
                ("X8", 3, 4),
            ],
        },
        QuotientShape {
            kind: QuotientKind::String("3"),
            vertices: rho3.clone(),
            edges: vec![
                ("X1", 0, 1),
                ("X2", 1, 1),
                ("X5", 1, 2),
                ("X6", 1, 0),
                ("X7", 1, 2),
            ],
        },
    ];

    let b1 = ["1", "2", "3", "4"];
    let g1 = ["1", "2", "3", "4", "5"];
    let gccs = vec![
        GccExpectation {
            string: "2",
            edges: vec![
                m("B", &b1, &["1", "2"], 1),
                m("B", &b1, &["3"], 1),
                m("B", &b1, &["4"], 1),
                m("B", &["5", "6"], &["5"], 1),
                m("B", &["5", "6"], &["6"], 1),
                m("G", &g1, &["1", "2"], 2),
                m("G", &g1, &["3"], 1),
                m("G", &g1, &["4"], 1),
                m("G", &g1, &["5"], 1),
                m("G", &["6"], &["6"], 1),
            ],
        },
        GccExpectation {
            string: "3",
            edges: vec![
                m("G", &g1, &["1"], 1),
                m("G", &g1, &["2", "3", "4"], 3),
                m("G", &g1, &["5", "6"], 1),
                m("G", &["6"], &["5", "6"], 1),
                m("R", &b1, &["1"], 1),
                m("R", &b1, &["2", "3", "4"], 1),
                m("R", &["5", "6"], &["5", "6"], 1),
            ],
        },
    ];

    let q = |v: &[&'static str]| WalkStep::Quotient(v.to_vec());
    let c = |col: &'static str, v: &[&'static str]| WalkStep::Component(col, v.to_vec());
    let walks = vec![
        WalkExpectation {
            string: "2",
            vertices: vec![
                q(&["1", "2"]),
                c("B", &b1),
                q(&["3"]),
                c("B", &b1),
                q(&["4"]),
                c("G", &g1),
                q(&["5"]),
                c("B", &["5", "6"]),
                q(&["6"]),
            ],
            edges: vec![
                ("B", vec!["1", "2"]),
                ("B", vec!["3"]),
                ("B", vec!["3"]),
                ("B", vec!["4"]),
                ("G", vec!["4"]),
                ("G", vec!["5"]),
                ("B", vec!["5"]),
                ("B", vec!["6"]),
            ],
        },
        WalkExpectation {
            string: "3",
            vertices: vec![
                q(&["1"]),
                c("R", &b1),
                q(&["2", "3", "4"]),
                c("G", &g1),
                q(&["5", "6"]),
            ],
            edges: vec![
                ("R", vec!["1"]),
                ("R", vec!["2", "3", "4"]),
                ("G", vec!["4"]),
                ("G", vec!["5"]),
            ],
        },
    ];

    AppendixExpected {
        rho: vec![("1", rho1), ("2", rho2.clone()), ("3", rho3.clone())],
        pi_colour: vec![("B", rho2), ("G", singletons()), ("R", rho3)],
        quotients,
        gccs,
        rho_trees: vec![("1", false), ("2", false), ("3", false)],
        sigma: vec![
            ("1", blocks(&[&["1", "2", "3", "4", "5"], &["6"]])),
            ("2", blocks(&[&["1", "2", "3", "4"], &["5"], &["6"]])),
            ("3", blocks(&[&["1", "2", "3", "4"], &["5", "6"]])),
        ],
        walk: vec!["X1", "X3", "X4", "X7", "X8"],
        walks,
        repeated_edge: ("2", "B", vec!["3"]),
    }
}
