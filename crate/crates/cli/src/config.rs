//! Loading of versioned TOML configs.  Unknown keys, wrong types and a
//! missing or unsupported `schema` are reported with the offending key path.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Configs shipped with the binary, addressable by name instead of a path.
pub const PRESETS: &[(&str, &str)] = &[(
    "two-free-M2",
    include_str!("../../../configs/two-free-M2.toml"),
)];

/// Raw text of a config and the directory relative paths resolve against.
#[derive(Debug, Clone)]
pub struct Source {
    pub text: String,
    pub base: PathBuf,
    pub name: String,
}

impl Source {
    pub fn load(spec: &str) -> Result<Source, CliError> {
        let path = Path::new(spec);
        if !path.exists() {
            if let Some((name, text)) = PRESETS.iter().find(|(n, _)| *n == spec) {
                return Ok(Source {
                    text: (*text).to_string(),
                    base: PathBuf::from("."),
                    name: (*name).to_string(),
                });
            }
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Source {
            text,
            base,
            name: spec.to_string(),
        })
    }

    pub fn resolve(&self, relative: &str) -> PathBuf {
        let p = Path::new(relative);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn toml_error(text: &str, path: String, e: &toml::de::Error) -> CliError {
    let message = match e.span() {
        Some(span) => {
            let (line, column) = line_column(text, span.start);
            format!("{} (line {line}, column {column})", e.message())
        }
        None => e.message().to_string(),
    };
    CliError::Schema {
        path: if path.is_empty() || path == "." {
            "<root>".into()
        } else {
            path
        },
        message,
    }
}

/// Fields every config may carry.
#[derive(Debug, Clone, Deserialize)]
pub struct Header {
    pub schema: Option<u32>,
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<String>,
}

pub fn header(text: &str) -> Result<Header, CliError> {
    let header: Header = parse_untyped(text)?;
    match header.schema {
        None => Err(CliError::schema("schema", "missing schema version")),
        Some(SCHEMA_VERSION) => Ok(header),
        Some(v) => Err(CliError::schema(
            "schema",
            format!("unsupported schema version {v}, expected {SCHEMA_VERSION}"),
        )),
    }
}

fn parse_untyped<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = toml::Deserializer::parse(text).map_err(|e| toml_error(text, String::new(), &e))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        toml_error(text, path, e.inner())
    })
}

const HEADER_KEYS: [&str; 4] = ["schema", "kind", "seed", "out"];

/// Parses `text` against the schema of `T` after checking the header; the
/// header keys are removed before the typed pass.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<(Header, T), CliError> {
    let h = header(text)?;
    let mut table: toml::Table = parse_untyped(text)?;
    for k in HEADER_KEYS {
        table.remove(k);
    }
    let body = serde_path_to_error::deserialize(toml::Value::Table(table)).map_err(|e| {
        let path = e.path().to_string();
        CliError::Schema {
            path: if path == "." { "<root>".into() } else { path },
            message: e.inner().message().to_string(),
        }
    })?;
    Ok((h, body))
}

/// A colour graph given by colour names and the edges between them.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub colours: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
}

impl GraphSpec {
    pub fn build(&self, path: &str) -> Result<gpsofic_digraphs::ColourGraph, CliError> {
        let idx = |name: &str, i: usize| {
            self.colours.iter().position(|c| c == name).ok_or_else(|| {
                CliError::schema(
                    format!("{path}.edges[{i}]"),
                    format!("unknown colour `{name}`"),
                )
            })
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, [a, b]) in self.edges.iter().enumerate() {
            edges.push((idx(a, i)?, idx(b, i)?));
        }
        gpsofic_digraphs::ColourGraph::new(self.colours.clone(), &edges)
            .map_err(|e| CliError::schema(path, e))
    }
}

/// Explicit strings and the colours acting on each.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringsSpec {
    pub names: Vec<String>,
    pub assignment: BTreeMap<String, Vec<String>>,
}

/// A complex matrix as rows of real parts and optional rows of imaginary parts.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixSpec {
    pub fn build(&self, path: &str) -> Result<nalgebra::DMatrix<num_complex::Complex64>, CliError> {
        let n = self.re.len();
        if n == 0 || self.re.iter().any(|r| r.len() != n) {
            return Err(CliError::schema(
                format!("{path}.re"),
                "matrix must be square and nonempty",
            ));
        }
        if let Some(im) = &self.im {
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(CliError::schema(
                    format!("{path}.im"),
                    "imaginary part must match the real part",
                ));
            }
        }
        Ok(nalgebra::DMatrix::from_fn(n, n, |i, j| {
            num_complex::Complex64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }
}
