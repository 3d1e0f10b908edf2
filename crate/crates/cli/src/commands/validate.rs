use std::path::Path;

use gpsofic_algnum::galois_orbit;
use gpsofic_digraphs::fixture::{DigraphFixture, FixtureError};
use gpsofic_digraphs::two_edge_connected;

use super::{algebra, experiment, strings, traffic, Kind};
use crate::config::{self, Source};
use crate::files::{json_error, AssignmentFile, MatrixFile};
use crate::output::Table;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub kind: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["check", "status", "detail"]);
        for c in &self.checks {
            t.push(vec![
                c.name.clone(),
                if c.passed { "pass" } else { "fail" }.into(),
                c.detail.clone(),
            ]);
        }
        t
    }

    fn push(&mut self, name: &str, result: Result<String, String>) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

/// Reads a fixture, assignment, matrix or config file and checks its
/// invariants.  Syntax errors are returned as errors with their position;
/// invariant violations are failed checks in the report.
pub fn validate_path(path: &Path) -> Result<ValidationReport, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if path.extension().is_some_and(|e| e == "toml") {
        return validate_config(&Source::load(&path.display().to_string())?);
    }
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| json_error(&e))?;
    let has = |k: &str| value.get(k).is_some();
    if has("vertices") {
        Ok(validate_fixture(&text))
    } else if has("matrices") {
        validate_matrices(&text)
    } else if has("assignment") {
        Ok(validate_assignment(&text))
    } else {
        Err(CliError::schema(
            "<root>",
            "not a digraph fixture, assignment or matrix file",
        ))
    }
}

fn validate_fixture(text: &str) -> ValidationReport {
    let mut report = ValidationReport {
        kind: "digraph fixture".into(),
        checks: Vec::new(),
    };
    let parsed = match DigraphFixture::parse(text) {
        Ok(f) => f,
        Err(e) => {
            report.push("parse", Err(e.to_string()));
            return report;
        }
    };
    report.push("parse", Ok(format!("`{}`", parsed.name)));
    match parsed.load() {
        Ok(f) => {
            report.push(
                "structure",
                Ok(format!(
                    "{} colours, {} strings, {} vertices, {} edges",
                    f.assignment.n_colours(),
                    f.assignment.n_strings(),
                    f.digraph.n_vertices(),
                    f.digraph.edges().len()
                )),
            );
            let cut = two_edge_connected(&f.digraph).cut_edges.len();
            report.checks.push(Check {
                name: "two-edge-connected".into(),
                passed: true,
                detail: format!("{} ({cut} cut edges; informational)", cut == 0),
            });
        }
        Err(FixtureError::Graph(e)) => report.push("structure", Err(e.to_string())),
        Err(e) => report.push("structure", Err(e.to_string())),
    }
    report
}

fn validate_assignment(text: &str) -> ValidationReport {
    let mut report = ValidationReport {
        kind: "string assignment".into(),
        checks: Vec::new(),
    };
    match serde_json::from_str::<AssignmentFile>(text) {
        Err(e) => report.push("parse", Err(format!("{e}"))),
        Ok(f) => {
            report.push(
                "parse",
                Ok(format!(
                    "{} colours, {} strings",
                    f.colours.len(),
                    f.strings.len()
                )),
            );
            report.push(
                "structure",
                f.load()
                    .map(|_| "colour graph and strings agree".to_string())
                    .map_err(|e| e.to_string()),
            );
        }
    }
    report
}

fn validate_matrices(text: &str) -> Result<ValidationReport, CliError> {
    let mut report = ValidationReport {
        kind: "matrix file".into(),
        checks: Vec::new(),
    };
    let file = MatrixFile::parse(text)?;
    for (k, entry) in file.matrices.iter().enumerate() {
        let name = format!("matrices[{k}]");
        let result = entry.to_matrix(&name).map(|m| {
            let o = galois_orbit(&m);
            format!(
                "{}x{} over conductor {}, Galois orbit {}",
                m.rows(),
                m.cols(),
                m.conductor(),
                o.size
            )
        });
        report.push(&name, result.map_err(|e| e.to_string()));
    }
    Ok(report)
}

fn validate_config(src: &Source) -> Result<ValidationReport, CliError> {
    let h = config::header(&src.text)?;
    let mut report = ValidationReport {
        kind: "config".into(),
        checks: Vec::new(),
    };
    report.push("schema", Ok(format!("version {}", config::SCHEMA_VERSION)));
    let Some(name) = h.kind else {
        report.push("kind", Err("no `kind`; only the header was checked".into()));
        return Ok(report);
    };
    let kind = Kind::from_name(&name)
        .ok_or_else(|| CliError::schema("kind", format!("unknown kind `{name}`")))?;
    let result = match kind {
        Kind::AssignStrings => strings::check(src),
        Kind::TrafficExpect | Kind::TrafficMc => traffic::check(src, kind),
        Kind::Simulate | Kind::IndependenceTest => experiment::check(src),
        Kind::Detplus | Kind::Microstates | Kind::DfExperiment => algebra::check(src, kind),
    };
    match result {
        Ok(()) => report.push("body", Ok(format!("valid `{name}` config"))),
        Err(e @ CliError::Schema { .. }) => return Err(e),
        Err(e) => report.push("body", Err(e.to_string())),
    }
    Ok(report)
}
