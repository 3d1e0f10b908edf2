use gpsofic_digraphs::{build_string_assignment, minimize_strings};
use serde::Deserialize;

use super::{body, Artifact, Output};
use crate::config::{GraphSpec, Source};
use crate::files::AssignmentFile;
use crate::CliError;

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignConfig {
    graph: GraphSpec,
    /// Merge strings while the assignment stays valid.
    #[serde(default = "yes")]
    minimize: bool,
}

pub(crate) fn assign(src: &Source) -> Result<Artifact, CliError> {
    let cfg: AssignConfig = body(src)?;
    let g = cfg.graph.build("graph")?;
    let mut a = build_string_assignment(&g);
    if cfg.minimize {
        a = minimize_strings(&a, &g)?;
    }
    a.validate_for(&g)?;
    let file = AssignmentFile::from_parts(&g, &a);
    let json = serde_json::to_string_pretty(&file).expect("assignment serializes") + "\n";
    let summary = vec![format!(
        "{} colours on {} strings",
        a.n_colours(),
        a.n_strings()
    )];
    Ok(Artifact {
        main: Output::Json(json),
        extra: Vec::new(),
        summary,
    })
}

pub(crate) fn check(src: &Source) -> Result<(), CliError> {
    let cfg: AssignConfig = body(src)?;
    cfg.graph.build("graph").map(|_| ())
}
