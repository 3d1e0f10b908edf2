mod algebra;
mod experiment;
mod strings;
mod traffic;
mod validate;

use std::path::{Path, PathBuf};

pub use validate::{validate_path, Check, ValidationReport};

use crate::config::{self, Source};
use crate::output::{sha256_hex, write_atomic, Manifest, OutputRecord, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    AssignStrings,
    TrafficExpect,
    TrafficMc,
    Simulate,
    IndependenceTest,
    Detplus,
    Microstates,
    DfExperiment,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::AssignStrings,
        Kind::TrafficExpect,
        Kind::TrafficMc,
        Kind::Simulate,
        Kind::IndependenceTest,
        Kind::Detplus,
        Kind::Microstates,
        Kind::DfExperiment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::AssignStrings => "assign-strings",
            Kind::TrafficExpect => "traffic-expect",
            Kind::TrafficMc => "traffic-mc",
            Kind::Simulate => "simulate",
            Kind::IndependenceTest => "independence-test",
            Kind::Detplus => "detplus",
            Kind::Microstates => "microstates",
            Kind::DfExperiment => "df-experiment",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunArgs {
    /// Path to a TOML config, or the name of a shipped preset.
    pub config: String,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// The main artifact of a command, side files (relative to the main output's
/// directory) and a short summary.
pub(crate) struct Artifact {
    pub main: Output,
    pub extra: Vec<(PathBuf, Output)>,
    pub summary: Vec<String>,
}

pub(crate) enum Output {
    Csv(Table),
    Json(String),
}

impl Output {
    fn bytes(&self) -> Result<(Vec<u8>, Option<usize>), CliError> {
        match self {
            Output::Csv(t) => Ok((t.to_csv()?, Some(t.rows.len()))),
            Output::Json(s) => Ok((s.clone().into_bytes(), None)),
        }
    }
}

impl Artifact {
    pub fn csv(table: Table) -> Artifact {
        Artifact {
            main: Output::Csv(table),
            extra: Vec::new(),
            summary: Vec::new(),
        }
    }
}

/// Parses the kind-specific part of a config.
pub(crate) fn body<T: serde::de::DeserializeOwned>(src: &Source) -> Result<T, CliError> {
    Ok(config::parse::<T>(&src.text)?.1)
}

fn execute(kind: Kind, src: &Source, seed: u64) -> Result<Artifact, CliError> {
    match kind {
        Kind::AssignStrings => strings::assign(src),
        Kind::TrafficExpect => traffic::expect(src, seed),
        Kind::TrafficMc => traffic::monte_carlo(src, seed),
        Kind::Simulate => experiment::simulate(src, seed),
        Kind::IndependenceTest => experiment::independence_test(src, seed),
        Kind::Detplus => algebra::detplus(src),
        Kind::Microstates => algebra::microstates(src),
        Kind::DfExperiment => algebra::df_experiment(src),
    }
}

fn write(path: &Path, output: &Output) -> Result<OutputRecord, CliError> {
    let (bytes, rows) = output.bytes()?;
    write_atomic(path, &bytes)?;
    Ok(OutputRecord {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
        rows,
    })
}

/// Runs one subcommand end to end and returns the manifest that was written
/// next to the main output, plus the command's summary lines.
pub fn run(kind: Kind, args: &RunArgs) -> Result<(Manifest, Vec<String>), CliError> {
    let src = Source::load(&args.config)?;
    let header = config::header(&src.text)?;
    if let Some(k) = &header.kind {
        if k != kind.name() {
            return Err(CliError::schema(
                "kind",
                format!("config is for `{k}`, not `{}`", kind.name()),
            ));
        }
    }
    let seed = args.seed.or(header.seed).unwrap_or(0);
    let out = match (&args.out, &header.out) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => src.resolve(p),
        (None, None) => {
            return Err(CliError::schema(
                "out",
                "no output path; pass --out or set `out`",
            ))
        }
    };
    let artifact = execute(kind, &src, seed)?;
    let mut outputs = vec![write(&out, &artifact.main)?];
    let out_dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
    for (p, o) in &artifact.extra {
        outputs.push(write(&out_dir.join(p), o)?);
    }
    let manifest = Manifest {
        tool: "gpsofic",
        version: env!("CARGO_PKG_VERSION"),
        schema: config::SCHEMA_VERSION,
        command: kind.name().to_string(),
        config: src.name.clone(),
        config_sha256: sha256_hex(src.text.as_bytes()),
        seed,
        outputs,
    };
    write_atomic(&Manifest::path_for(&out), manifest.to_json().as_bytes())?;
    Ok((manifest, artifact.summary))
}
