use gpsofic_algnum::{crossed_product_generators, crossed_product_microstate, operator_norm_upper};
use gpsofic_digraphs::{build_string_assignment, minimize_strings, ColourGraph, StringAssignment};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::operand::DEFAULT_DENSE_CAP;
use crate::perms::{keyed_rng, tag};
use crate::word::{place_microstate, Factor, PermModel, WordLetter};
use crate::{ColourPermutations, PermError};

/// Where a colour's generator matrices come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// The crossed-product unitaries `u` (index 0) and `v` (index 1) of `M_n`, of size `n^2`.
    CrossedProduct { n: u32 },
    /// Integer combinations of the `n^2` GNS matrices of `M_n`, each
    /// coefficient list indexed by `chi * n + g`.
    CrossedProductSpan { n: u32, combinations: Vec<Vec<i64>> },
    /// Fixed matrices whose size divides `N`.
    Matrices(Vec<DMatrix<Complex64>>),
    /// `count` random matrices of size `N` and operator norm 1, redrawn per trial.
    RandomUnitNorm { count: usize },
}

impl Source {
    /// Generators at size `n` for one trial, before placement on strings.
    pub fn generators(
        &self,
        n: usize,
        seed: u64,
        trial: u64,
        colour: usize,
    ) -> Result<Vec<DMatrix<Complex64>>, PermError> {
        match self {
            Source::CrossedProduct { n: k } => {
                let (u, v) = crossed_product_generators(*k)?;
                Ok(vec![u.to_dense(), v.to_dense()])
            }
            Source::CrossedProductSpan { n: k, combinations } => {
                let basis: Vec<DMatrix<Complex64>> = crossed_product_microstate(*k)?
                    .iter()
                    .map(|m| m.to_dense())
                    .collect();
                combinations
                    .iter()
                    .map(|c| {
                        if c.len() != basis.len() {
                            return Err(PermError::Input(format!(
                                "{} coefficients for {} basis matrices",
                                c.len(),
                                basis.len()
                            )));
                        }
                        Ok(basis.iter().zip(c).fold(
                            DMatrix::zeros(basis[0].nrows(), basis[0].ncols()),
                            |acc, (b, &x)| acc + b * Complex64::new(x as f64, 0.0),
                        ))
                    })
                    .collect()
            }
            Source::Matrices(ms) => Ok(ms.clone()),
            Source::RandomUnitNorm { count } => Ok((0..*count)
                .map(|i| {
                    let mut r = keyed_rng(
                        seed,
                        &[tag::GENERATOR, trial, colour as u64, n as u64, i as u64],
                    );
                    let m = DMatrix::from_fn(n, n, |_, _| {
                        Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
                    });
                    let norm = operator_norm_upper(&m);
                    m.unscale(norm)
                })
                .collect()),
        }
    }
}

/// A letter of a word: a colour and the generator indices multiplied in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterSpec {
    pub colour: usize,
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSpec {
    pub name: String,
    pub letters: Vec<LetterSpec>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub graph: ColourGraph,
    pub assignment: StringAssignment,
    /// One per colour.
    pub sources: Vec<Source>,
    pub words: Vec<WordSpec>,
    pub n_schedule: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub norm_cap: f64,
    pub dense_cap: usize,
    /// Deviation used in the reported concentration bound.
    pub epsilon: f64,
}

impl ExperimentConfig {
    /// Builds and minimizes a string assignment when none is given.
    pub fn new(
        graph: ColourGraph,
        assignment: Option<StringAssignment>,
        sources: Vec<Source>,
        words: Vec<WordSpec>,
    ) -> Result<ExperimentConfig, PermError> {
        let assignment = match assignment {
            Some(a) => {
                a.validate_for(&graph)?;
                a
            }
            None => minimize_strings(&build_string_assignment(&graph), &graph)?,
        };
        Ok(ExperimentConfig {
            graph,
            assignment,
            sources,
            words,
            n_schedule: vec![4, 8, 16, 32],
            trials: 20,
            seed: 0,
            norm_cap: 1.0,
            dense_cap: DEFAULT_DENSE_CAP,
            epsilon: 0.1,
        })
    }

    pub fn validate(&self) -> Result<(), PermError> {
        if self.sources.len() != self.assignment.n_colours() {
            return Err(PermError::Input(format!(
                "{} sources for {} colours",
                self.sources.len(),
                self.assignment.n_colours()
            )));
        }
        if self.words.is_empty() || self.n_schedule.is_empty() || self.trials == 0 {
            return Err(PermError::Input(
                "words, N schedule and trials must be nonempty".into(),
            ));
        }
        for w in &self.words {
            if w.letters
                .iter()
                .any(|l| l.colour >= self.assignment.n_colours())
            {
                return Err(PermError::Input(format!(
                    "word `{}` uses an unknown colour",
                    w.name
                )));
            }
            let colours: Vec<usize> = w.letters.iter().map(|l| l.colour).collect();
            if !gpsofic_digraphs::is_g_reduced(&colours, &self.graph) {
                return Err(PermError::NotReduced(colours));
            }
        }
        for &n in &self.n_schedule {
            crate::Space::new(n, self.assignment.n_strings()).check_cap(self.dense_cap)?;
        }
        Ok(())
    }

    /// `2 sum_j exp(-N^{#S_{c_j}} eps^2 / (64 m^2 L^2))` with `m` the word length and
    /// `L = (2R)^(factors)` bounding the Lipschitz constant of the statistic.
    pub fn tail_bound(&self, word: &WordSpec, n: usize) -> f64 {
        let m = word.letters.len() as f64;
        let factors: usize = word.letters.iter().map(|l| l.generators.len()).sum();
        let l = (2.0 * self.norm_cap).powi(factors as i32);
        let s: f64 = word
            .letters
            .iter()
            .map(|letter| {
                let dim = (n as f64).powi(self.assignment.strings_of(letter.colour).len() as i32);
                (-dim * self.epsilon * self.epsilon / (64.0 * m * m * l * l)).exp()
            })
            .sum();
        (2.0 * s).min(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialValue {
    pub word: usize,
    pub n: usize,
    pub trial: usize,
    /// `||Delta[(Y_1 - Delta Y_1) ... ]||_2^2`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub word: String,
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub values: Vec<TrialValue>,
    pub rows: Vec<SummaryRow>,
    /// Per word, the fraction of trials whose values strictly decrease along the N schedule.
    pub monotone_fraction: Vec<(String, f64)>,
}

impl ExperimentReport {
    pub fn medians(&self, word: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.word == word)
            .map(|r| r.median)
            .collect()
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn trial_values(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<TrialValue>, PermError> {
    let mut out = Vec::new();
    for &n in &cfg.n_schedule {
        let perms = ColourPermutations::draw(&cfg.assignment, n, cfg.seed, trial as u64);
        let mut placed = Vec::with_capacity(cfg.sources.len());
        for (c, src) in cfg.sources.iter().enumerate() {
            let gens = src.generators(n, cfg.seed, trial as u64, c)?;
            placed.push(
                gens.iter()
                    .map(|g| place_microstate(&cfg.assignment, c, g, n))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        let mut model = PermModel::new(&cfg.graph, &cfg.assignment, n);
        model.dense_cap = cfg.dense_cap;
        model.norm_cap = Some(cfg.norm_cap);
        for (w, spec) in cfg.words.iter().enumerate() {
            let letters = spec
                .letters
                .iter()
                .map(|l| {
                    let factors = l
                        .generators
                        .iter()
                        .map(|&g| {
                            placed[l.colour]
                                .get(g)
                                .cloned()
                                .map(Factor::plain)
                                .ok_or_else(|| {
                                    PermError::Input(format!(
                                        "word `{}` uses generator {g} of colour {}",
                                        spec.name, l.colour
                                    ))
                                })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(WordLetter {
                        colour: l.colour,
                        factors,
                    })
                })
                .collect::<Result<Vec<_>, PermError>>()?;
            let v = model.centered_word_norm(&letters, &perms)?;
            out.push(TrialValue {
                word: w,
                n,
                trial,
                value: v * v,
            });
        }
    }
    Ok(out)
}

/// Runs every trial, in parallel, with results independent of the thread count.
pub fn independence_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, PermError> {
    cfg.validate()?;
    let per_trial: Vec<Vec<TrialValue>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial_values(cfg, t))
        .collect::<Result<_, _>>()?;
    let mut values: Vec<TrialValue> = per_trial.into_iter().flatten().collect();
    values.sort_by_key(|v| (v.word, v.n, v.trial));

    let mut rows = Vec::new();
    let mut monotone_fraction = Vec::new();
    for (w, spec) in cfg.words.iter().enumerate() {
        for &n in &cfg.n_schedule {
            let vs: Vec<f64> = values
                .iter()
                .filter(|v| v.word == w && v.n == n)
                .map(|v| v.value)
                .collect();
            let k = vs.len() as f64;
            let mean = vs.iter().sum::<f64>() / k;
            let var = if vs.len() > 1 {
                vs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
            } else {
                0.0
            };
            rows.push(SummaryRow {
                word: spec.name.clone(),
                n,
                trials: vs.len(),
                mean,
                median: median(&vs),
                std: var.sqrt(),
                min: vs.iter().copied().fold(f64::INFINITY, f64::min),
                max: vs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                tail_bound: cfg.tail_bound(spec, n),
            });
        }
        let decreasing = (0..cfg.trials)
            .filter(|&t| {
                let path: Vec<f64> = cfg
                    .n_schedule
                    .iter()
                    .map(|&n| {
                        values
                            .iter()
                            .find(|v| v.word == w && v.n == n && v.trial == t)
                            .map(|v| v.value)
                            .unwrap_or(f64::NAN)
                    })
                    .collect();
                path.windows(2).all(|p| p[1] < p[0])
            })
            .count();
        monotone_fraction.push((spec.name.clone(), decreasing as f64 / cfg.trials as f64));
    }
    Ok(ExperimentReport {
        values,
        rows,
        monotone_fraction,
    })
}

/// Two non-adjacent colours, each carrying the same two elements `x`, `y` of
/// `M_2` built from its crossed-product microstates, with the word `x(a) x(b) y(a)`.
/// Single unitaries would give a statistic supported on multiples of `2/N`,
/// so the letters are dense combinations.
pub fn two_free_m2_config() -> Result<ExperimentConfig, PermError> {
    let graph = ColourGraph::edgeless(vec!["a".into(), "b".into()]);
    let words = vec![WordSpec {
        name: TWO_FREE_M2_WORD.into(),
        letters: vec![
            LetterSpec {
                colour: 0,
                generators: vec![0],
            },
            LetterSpec {
                colour: 1,
                generators: vec![0],
            },
            LetterSpec {
                colour: 0,
                generators: vec![1],
            },
        ],
    }];
    let source = Source::CrossedProductSpan {
        n: 2,
        combinations: vec![vec![0, 1, 2, -1], vec![0, 2, -1, 1]],
    };
    let mut cfg = ExperimentConfig::new(graph, None, vec![source.clone(), source], words)?;
    cfg.norm_cap = 4.0;
    Ok(cfg)
}

pub const TWO_FREE_M2_WORD: &str = "x_a.x_b.y_a";
