use std::collections::BTreeMap;

use gpsofic_digraphs::StringAssignment;
use gpsofic_permmodel::{
    independence_experiment, ExperimentConfig, LetterSpec, PermError, Source as GenSource,
    WordSpec, DEFAULT_DENSE_CAP,
};
use serde::Deserialize;

use super::{body, Artifact};
use crate::config::{GraphSpec, MatrixSpec, Source, StringsSpec};
use crate::output::{num, Table};
use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
enum GeneratorSpec {
    CrossedProduct { n: u32 },
    CrossedProductSpan { n: u32, combinations: Vec<Vec<i64>> },
    RandomUnitNorm { count: usize },
    Matrices { matrices: Vec<MatrixSpec> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LetterFileSpec {
    colour: String,
    generators: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WordFileSpec {
    name: String,
    letters: Vec<LetterFileSpec>,
}

fn default_epsilon() -> f64 {
    0.1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    graph: GraphSpec,
    /// Built from the colour graph and minimized when absent.
    strings: Option<StringsSpec>,
    generators: BTreeMap<String, GeneratorSpec>,
    words: Vec<WordFileSpec>,
    #[serde(rename = "N_schedule")]
    n_schedule: Vec<usize>,
    trials: usize,
    norm_cap: f64,
    #[serde(default = "default_epsilon")]
    epsilon: f64,
    dense_cap: Option<usize>,
}

fn build(src: &Source, seed: u64) -> Result<ExperimentConfig, CliError> {
    let file: ExperimentFile = body(src)?;
    let graph = file.graph.build("graph")?;
    let colours = graph.names().to_vec();
    let colour_index = |name: &str, path: String| {
        colours
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::schema(path, format!("unknown colour `{name}`")))
    };
    let assignment = match &file.strings {
        Some(s) => {
            let a = StringAssignment::from_names(s.names.clone(), colours.clone(), &s.assignment)
                .map_err(|e| CliError::schema("strings", e))?;
            a.validate_for(&graph)
                .map_err(|e| CliError::schema("strings", e))?;
            Some(a)
        }
        None => None,
    };
    for name in file.generators.keys() {
        colour_index(name, format!("generators.{name}"))?;
    }
    let mut sources = Vec::with_capacity(colours.len());
    for c in &colours {
        let path = format!("generators.{c}");
        let spec = file
            .generators
            .get(c)
            .ok_or_else(|| CliError::schema(&path, "missing generators for this colour"))?;
        sources.push(match spec {
            GeneratorSpec::CrossedProduct { n } => GenSource::CrossedProduct { n: *n },
            GeneratorSpec::CrossedProductSpan { n, combinations } => {
                GenSource::CrossedProductSpan {
                    n: *n,
                    combinations: combinations.clone(),
                }
            }
            GeneratorSpec::RandomUnitNorm { count } => GenSource::RandomUnitNorm { count: *count },
            GeneratorSpec::Matrices { matrices } => GenSource::Matrices(
                matrices
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.build(&format!("{path}.matrices[{i}]")))
                    .collect::<Result<_, _>>()?,
            ),
        });
    }
    let mut words = Vec::with_capacity(file.words.len());
    for (w, spec) in file.words.iter().enumerate() {
        let mut letters = Vec::with_capacity(spec.letters.len());
        for (l, letter) in spec.letters.iter().enumerate() {
            let colour = colour_index(&letter.colour, format!("words[{w}].letters[{l}].colour"))?;
            letters.push(LetterSpec {
                colour,
                generators: letter.generators.clone(),
            });
        }
        words.push(WordSpec {
            name: spec.name.clone(),
            letters,
        });
    }
    let mut cfg = ExperimentConfig::new(graph, assignment, sources, words)
        .map_err(|e| CliError::schema("strings", e))?;
    cfg.n_schedule = file.n_schedule;
    cfg.trials = file.trials;
    cfg.seed = seed;
    cfg.norm_cap = file.norm_cap;
    cfg.epsilon = file.epsilon;
    cfg.dense_cap = file.dense_cap.unwrap_or(DEFAULT_DENSE_CAP);
    if !(cfg.norm_cap > 0.0) {
        return Err(CliError::schema("norm_cap", "must be positive"));
    }
    cfg.validate().map_err(|e| match e {
        PermError::NotReduced(c) => {
            CliError::schema("words", format!("colour word {c:?} is not reduced"))
        }
        PermError::Input(m) => CliError::schema("<root>", m),
        other => other.into(),
    })?;
    Ok(cfg)
}

const STATISTIC: &str = "centered_word_2norm_sq";

pub(crate) fn simulate(src: &Source, seed: u64) -> Result<Artifact, CliError> {
    let cfg = build(src, seed)?;
    let report = independence_experiment(&cfg)?;
    let mut table = Table::new(&["word", "N", "trial", STATISTIC]);
    for v in &report.values {
        table.push(vec![
            cfg.words[v.word].name.clone(),
            v.n.to_string(),
            v.trial.to_string(),
            num(v.value),
        ]);
    }
    let summary = vec![format!("{} values", report.values.len())];
    Ok(Artifact {
        summary,
        ..Artifact::csv(table)
    })
}

pub(crate) fn independence_test(src: &Source, seed: u64) -> Result<Artifact, CliError> {
    let cfg = build(src, seed)?;
    let report = independence_experiment(&cfg)?;
    let mut table = Table::new(&[
        "word",
        "N",
        "trials",
        "mean_centered_word_2norm_sq",
        "median_centered_word_2norm_sq",
        "std_centered_word_2norm_sq",
        "min_centered_word_2norm_sq",
        "max_centered_word_2norm_sq",
        "concentration_tail_bound",
        "monotone_path_fraction",
    ]);
    let mut summary = Vec::new();
    for r in &report.rows {
        let frac = report
            .monotone_fraction
            .iter()
            .find(|(w, _)| *w == r.word)
            .map_or(f64::NAN, |(_, f)| *f);
        table.push(vec![
            r.word.clone(),
            r.n.to_string(),
            r.trials.to_string(),
            num(r.mean),
            num(r.median),
            num(r.std),
            num(r.min),
            num(r.max),
            num(r.tail_bound),
            num(frac),
        ]);
    }
    for w in &cfg.words {
        let med = report.medians(&w.name);
        let decreasing = med.windows(2).all(|p| p[1] < p[0]);
        summary.push(format!(
            "{}: medians {med:?} {}",
            w.name,
            if decreasing {
                "strictly decreasing"
            } else {
                "not monotone"
            }
        ));
    }
    Ok(Artifact {
        summary,
        ..Artifact::csv(table)
    })
}

pub(crate) fn check(src: &Source) -> Result<(), CliError> {
    build(src, 0).map(|_| ())
}
