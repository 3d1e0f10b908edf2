//! JSON artifacts exchanged between subcommands: string assignments and
//! matrices over cyclotomic integers.

use std::collections::BTreeMap;

use gpsofic_algnum::{CycInt, CycMatrix};
use gpsofic_digraphs::{ColourGraph, StringAssignment};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Parse failure of a JSON artifact, with its position.
pub fn json_error(e: &serde_json::Error) -> CliError {
    CliError::schema(format!("line {}, column {}", e.line(), e.column()), e)
}

/// A colour graph together with a string assignment over it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentFile {
    pub colours: Vec<String>,
    #[serde(default)]
    pub colour_graph: BTreeMap<String, Vec<String>>,
    pub strings: Vec<String>,
    pub assignment: BTreeMap<String, Vec<String>>,
}

impl AssignmentFile {
    pub fn from_parts(g: &ColourGraph, a: &StringAssignment) -> AssignmentFile {
        let names = g.names();
        let colour_graph = (0..names.len())
            .map(|c| {
                (
                    names[c].clone(),
                    (0..names.len())
                        .filter(|&d| g.adjacent(c, d))
                        .map(|d| names[d].clone())
                        .collect(),
                )
            })
            .collect();
        let assignment = (0..a.n_colours())
            .map(|c| {
                (
                    a.colours()[c].clone(),
                    a.strings_of(c)
                        .iter()
                        .map(|&s| a.strings()[s].clone())
                        .collect(),
                )
            })
            .collect();
        AssignmentFile {
            colours: names.to_vec(),
            colour_graph,
            strings: a.strings().to_vec(),
            assignment,
        }
    }

    /// Builds and checks both structures.
    pub fn load(&self) -> Result<(ColourGraph, StringAssignment), gpsofic_digraphs::GraphError> {
        let g = ColourGraph::from_adjacency(self.colours.clone(), &self.colour_graph)?;
        let a = StringAssignment::from_names(
            self.strings.clone(),
            self.colours.clone(),
            &self.assignment,
        )?;
        a.validate_for(&g)?;
        Ok((g, a))
    }
}

/// One matrix; `entries[i][j]` lists the coefficients of `1, z, z^2, ...`
/// with `z = exp(2 pi i / conductor)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub conductor: u32,
    pub entries: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub matrices: Vec<MatrixEntry>,
}

impl MatrixEntry {
    pub fn from_matrix(m: &CycMatrix) -> Result<MatrixEntry, CliError> {
        let conductor = m.conductor();
        let mut entries = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let mut row = Vec::with_capacity(m.cols());
            for j in 0..m.cols() {
                let mut c = m.get(i, j).coeffs_at(conductor)?;
                while c.last() == Some(&0) {
                    c.pop();
                }
                row.push(c);
            }
            entries.push(row);
        }
        Ok(MatrixEntry { conductor, entries })
    }

    pub fn to_matrix(&self, path: &str) -> Result<CycMatrix, CliError> {
        let rows = self.entries.len();
        let cols = self.entries.first().map_or(0, Vec::len);
        if rows == 0 || self.entries.iter().any(|r| r.len() != cols) {
            return Err(CliError::schema(
                format!("{path}.entries"),
                "rows must be nonempty and of equal length",
            ));
        }
        let mut flat = Vec::with_capacity(rows * cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                flat.push(CycInt::from_coeffs(self.conductor, c).map_err(|e| match e {
                    gpsofic_algnum::AlgError::Resource(m) => CliError::Resource(m),
                    other => CliError::schema(format!("{path}.entries[{i}][{j}]"), other),
                })?);
            }
        }
        Ok(CycMatrix::from_entries(rows, cols, flat)?)
    }
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<MatrixFile, CliError> {
        serde_json::from_str(text).map_err(|e| json_error(&e))
    }

    pub fn matrices(&self) -> Result<Vec<CycMatrix>, CliError> {
        self.matrices
            .iter()
            .enumerate()
            .map(|(k, m)| m.to_matrix(&format!("matrices[{k}]")))
            .collect()
    }
}
