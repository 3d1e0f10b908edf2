use std::collections::BTreeMap;

use gpsofic_digraphs::fixture::{load_str, FixtureError, LoadedFixture};
use gpsofic_permmodel::{keyed_rng, tag, ColourPermutations};
use gpsofic_traffic::{
    expected_trace, trace_tau, Complex, DenseMatrix, Labels, Mode, Model, Operand,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Deserialize;

use super::{body, Artifact};
use crate::config::{MatrixSpec, Source};
use crate::output::{num, Table};
use crate::CliError;

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeSpec {
    #[default]
    Exact,
    Leading,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectConfig {
    /// `appendix` or a path to a digraph fixture.
    fixture: String,
    #[serde(rename = "N")]
    n: usize,
    #[serde(default)]
    mode: ModeSpec,
    /// Payloads by label handle; missing handles get seeded random entries.
    #[serde(default)]
    labels: BTreeMap<String, MatrixSpec>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct McConfig {
    fixture: String,
    #[serde(rename = "N")]
    n: usize,
    trials: usize,
    /// Also compute the exact expectation for comparison.
    #[serde(default = "yes")]
    exact: bool,
    #[serde(default)]
    labels: BTreeMap<String, MatrixSpec>,
}

fn load_fixture(src: &Source, spec: &str) -> Result<LoadedFixture, CliError> {
    let text = if spec == "appendix" {
        gpsofic_fixtures::APPENDIX_JSON.to_string()
    } else {
        let path = src.resolve(spec);
        std::fs::read_to_string(&path).map_err(|e| CliError::io(path, e))?
    };
    load_str(&text).map_err(|e| match e {
        FixtureError::Parse {
            line,
            column,
            message,
        } => CliError::schema(
            "fixture",
            format!("{message} (line {line}, column {column})"),
        ),
        other => CliError::schema("fixture", other),
    })
}

/// Payloads for every handle used by the fixture.  Edge labels act on the
/// strings of their colour; loop labels are diagonal on the whole space.
fn build_labels(
    f: &LoadedFixture,
    n: usize,
    seed: u64,
    given: &BTreeMap<String, MatrixSpec>,
) -> Result<Labels, CliError> {
    let a = &f.assignment;
    let t = &f.digraph;
    if n == 0 {
        return Err(CliError::schema("N", "must be positive"));
    }
    let all: Vec<usize> = (0..a.n_strings()).collect();
    let mut supports: BTreeMap<String, (Vec<usize>, bool)> = BTreeMap::new();
    for e in t.edges() {
        let base = e.label.strip_suffix('*').unwrap_or(&e.label).to_string();
        supports
            .entry(base)
            .or_insert_with(|| (a.strings_of(e.colour).to_vec(), false));
    }
    for v in 0..t.n_vertices() {
        for h in t.loop_labels(v) {
            let base = h.strip_suffix('*').unwrap_or(h).to_string();
            supports.entry(base).or_insert_with(|| (all.clone(), true));
        }
    }
    if let Some(k) = given.keys().find(|k| !supports.contains_key(*k)) {
        return Err(CliError::schema(
            format!("labels.{k}"),
            "no such label in the fixture",
        ));
    }
    let mut labels = Labels::new();
    for (i, (handle, (support, diagonal))) in supports.iter().enumerate() {
        let d = n
            .checked_pow(support.len() as u32)
            .filter(|&d| d <= 4096)
            .ok_or_else(|| {
                CliError::Resource(format!(
                    "label `{handle}` would need {n}^{} rows",
                    support.len()
                ))
            })?;
        let m = match given.get(handle) {
            Some(spec) => {
                let m = spec.build(&format!("labels.{handle}"))?;
                if m.nrows() != d {
                    return Err(CliError::schema(
                        format!("labels.{handle}"),
                        format!("expected a {d}x{d} matrix"),
                    ));
                }
                m
            }
            None => {
                let mut r = keyed_rng(seed, &[tag::LABEL, i as u64]);
                let mut z = || Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
                if *diagonal {
                    DenseMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |_, _| z()))
                } else {
                    DenseMatrix::from_fn(d, d, |_, _| z())
                }
            }
        };
        labels.insert(handle.clone(), Operand::new(support.clone(), m)?);
    }
    Ok(labels)
}

pub(crate) fn expect(src: &Source, seed: u64) -> Result<Artifact, CliError> {
    let cfg: ExpectConfig = body(src)?;
    let f = load_fixture(src, &cfg.fixture)?;
    let labels = build_labels(&f, cfg.n, seed, &cfg.labels)?;
    let model = Model::new(&f.assignment, cfg.n, &labels);
    let mode = match cfg.mode {
        ModeSpec::Exact => Mode::Exact,
        ModeSpec::Leading => Mode::Leading,
    };
    let report = expected_trace(&f.digraph, &model, mode)?;
    let mut table = Table::new(&["partition_tuple", "expected_gamma_re", "expected_gamma_im"]);
    for (pi, z) in &report.terms {
        table.push(vec![pi.to_string(), num(z.re), num(z.im)]);
    }
    table.push(vec![
        "total".into(),
        num(report.value.re),
        num(report.value.im),
    ]);
    let mut summary = vec![format!(
        "expected trace {} over {} tuples",
        report.value,
        report.terms.len()
    )];
    for (reason, count) in &report.dropped {
        summary.push(format!("dropped {count} tuples: {reason}"));
    }
    Ok(Artifact {
        summary,
        ..Artifact::csv(table)
    })
}

pub(crate) fn monte_carlo(src: &Source, seed: u64) -> Result<Artifact, CliError> {
    let cfg: McConfig = body(src)?;
    if cfg.trials < 2 {
        return Err(CliError::schema("trials", "need at least 2 trials"));
    }
    let f = load_fixture(src, &cfg.fixture)?;
    let labels = build_labels(&f, cfg.n, seed, &cfg.labels)?;
    let model = Model::new(&f.assignment, cfg.n, &labels);
    let values: Vec<Complex> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let perms = ColourPermutations::draw(&f.assignment, cfg.n, seed, trial as u64);
            trace_tau(&f.digraph, &model.with_permutations(&perms.perms))
        })
        .collect::<Result<_, _>>()?;
    let k = values.len() as f64;
    let mean = values.iter().fold(Complex::new(0.0, 0.0), |acc, z| acc + z) / k;
    let spread = values.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (k - 1.0);
    let std_error = (spread / k).sqrt();
    let mut table = Table::new(&[
        "N",
        "trials",
        "tau_mean_re",
        "tau_mean_im",
        "tau_std_error",
        "expected_tau_re",
        "expected_tau_im",
        "abs_deviation",
    ]);
    let mut row = vec![
        cfg.n.to_string(),
        cfg.trials.to_string(),
        num(mean.re),
        num(mean.im),
        num(std_error),
    ];
    let mut summary = vec![format!("mean trace {mean} +- {std_error}")];
    if cfg.exact {
        let exact = expected_trace(&f.digraph, &model, Mode::Exact)?.value;
        row.extend([num(exact.re), num(exact.im), num((mean - exact).norm())]);
        summary.push(format!("exact expectation {exact}"));
    } else {
        row.extend([String::new(), String::new(), String::new()]);
    }
    table.push(row);
    Ok(Artifact {
        summary,
        ..Artifact::csv(table)
    })
}

pub(crate) fn check(src: &Source, kind: super::Kind) -> Result<(), CliError> {
    let fixture = if kind == super::Kind::TrafficMc {
        body::<McConfig>(src)?.fixture
    } else {
        body::<ExpectConfig>(src)?.fixture
    };
    load_fixture(src, &fixture).map(|_| ())
}
