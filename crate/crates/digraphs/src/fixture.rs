//! JSON fixture format for coloured test digraphs together with the colour
//! graph and string assignment they are evaluated over.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{ColourGraph, Edge, GraphError, StringAssignment, TestDigraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureEdge {
    pub src: String,
    pub dst: String,
    pub colour: String,
    pub label: String,
}

/// A loop entry may be a single label or a list applied in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LoopLabels {
    One(String),
    Many(Vec<String>),
}

impl LoopLabels {
    fn into_vec(self) -> Vec<String> {
        match self {
            LoopLabels::One(s) => vec![s],
            LoopLabels::Many(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphFixture {
    pub name: String,
    pub colours: Vec<String>,
    /// Adjacency lists of the colour graph; absent colours are isolated.
    #[serde(default)]
    pub colour_graph: BTreeMap<String, Vec<String>>,
    pub strings: Vec<String>,
    /// Colour name -> names of the strings it acts on.
    pub assignment: BTreeMap<String, Vec<String>>,
    pub vertices: Vec<String>,
    pub edges: Vec<FixtureEdge>,
    #[serde(default)]
    pub loops: BTreeMap<String, LoopLabels>,
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
}

impl From<serde_json::Error> for FixtureError {
    fn from(e: serde_json::Error) -> Self {
        FixtureError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// Parsed and validated fixture.
#[derive(Clone, Debug)]
pub struct LoadedFixture {
    pub name: String,
    pub colour_graph: ColourGraph,
    pub assignment: StringAssignment,
    pub digraph: TestDigraph,
}

impl DigraphFixture {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        Ok(serde_json::from_str(text)?)
    }

    #[must_use]
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes")
    }

    /// Resolves names and checks every structural invariant: symmetric
    /// loop-free colour graph, nonempty `S_c`, adjacent colours have disjoint
    /// strings and non-adjacent ones share one, and edge endpoints exist.
    pub fn load(&self) -> Result<LoadedFixture, FixtureError> {
        let colour_graph = ColourGraph::from_adjacency(self.colours.clone(), &self.colour_graph)?;
        let assignment = StringAssignment::from_names(
            self.strings.clone(),
            self.colours.clone(),
            &self.assignment,
        )?;
        assignment.validate_for(&colour_graph)?;
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v) {
                return Err(FixtureError::DuplicateVertex(v.clone()));
            }
        }
        let vertex = |name: &str| {
            self.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| GraphError::UnknownName(name.to_string()))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (id, e) in self.edges.iter().enumerate() {
            let colour = colour_graph
                .index_of(&e.colour)
                .ok_or_else(|| GraphError::UnknownName(e.colour.clone()))?;
            edges.push(Edge {
                id,
                source: vertex(&e.src)?,
                target: vertex(&e.dst)?,
                colour,
                label: e.label.clone(),
            });
        }
        let mut loops = vec![Vec::new(); self.vertices.len()];
        for (v, labels) in &self.loops {
            loops[vertex(v)?] = labels.clone().into_vec();
        }
        let digraph = TestDigraph::with_names(self.vertices.clone(), edges, loops)?;
        Ok(LoadedFixture {
            name: self.name.clone(),
            colour_graph,
            assignment,
            digraph,
        })
    }
}

pub fn load_str(text: &str) -> Result<LoadedFixture, FixtureError> {
    DigraphFixture::parse(text)?.load()
}
