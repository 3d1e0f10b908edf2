use gpsofic_algnum::singular_values;
use gpsofic_digraphs::{is_g_reduced, ColourGraph, StringAssignment};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::operand::{delta, norm2, pad, Space, TensorOperand, DEFAULT_DENSE_CAP};
use crate::{ColourPermutations, PermError};

/// `Lambda X` inside a letter; `diag` is the ambient diagonal `Lambda` (identity when absent).
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub diag: Option<DVector<Complex64>>,
    pub op: TensorOperand,
}

impl Factor {
    pub fn plain(op: TensorOperand) -> Factor {
        Factor { diag: None, op }
    }
}

/// One `Y_i`: a colour and the factors whose conjugated product it is.
#[derive(Debug, Clone, PartialEq)]
pub struct WordLetter {
    pub colour: usize,
    pub factors: Vec<Factor>,
}

/// The data fixed across trials of the permutation model.
#[derive(Debug, Clone)]
pub struct PermModel<'a> {
    pub graph: &'a ColourGraph,
    pub assignment: &'a StringAssignment,
    pub n: usize,
    pub dense_cap: usize,
    /// Declared bound on the operator norm of every operand.
    pub norm_cap: Option<f64>,
}

impl<'a> PermModel<'a> {
    pub fn new(
        graph: &'a ColourGraph,
        assignment: &'a StringAssignment,
        n: usize,
    ) -> PermModel<'a> {
        PermModel {
            graph,
            assignment,
            n,
            dense_cap: DEFAULT_DENSE_CAP,
            norm_cap: None,
        }
    }

    pub fn space(&self) -> Space {
        Space::new(self.n, self.assignment.n_strings())
    }

    /// Rejects non-reduced words and operands that do not fit their colour.
    pub fn check_word(&self, letters: &[WordLetter]) -> Result<(), PermError> {
        if letters.is_empty() {
            return Err(PermError::Input("empty word".into()));
        }
        let colours: Vec<usize> = letters.iter().map(|l| l.colour).collect();
        if colours.iter().any(|&c| c >= self.assignment.n_colours()) {
            return Err(PermError::Input("colour out of range".into()));
        }
        if !is_g_reduced(&colours, self.graph) {
            return Err(PermError::NotReduced(colours));
        }
        let d = self.space().dim();
        for l in letters {
            let support = self.assignment.strings_of(l.colour);
            for f in &l.factors {
                if f.op.support != support || f.op.n != self.n {
                    return Err(PermError::Dimension(format!(
                        "operand for colour {} must act on strings {support:?} with N = {}",
                        l.colour, self.n
                    )));
                }
                if f.diag.as_ref().is_some_and(|v| v.len() != d) {
                    return Err(PermError::Dimension(format!(
                        "diagonal factor must have length {d}"
                    )));
                }
                if let Some(r) = self.norm_cap {
                    let norm = singular_values(&f.op.payload)
                        .first()
                        .copied()
                        .unwrap_or(0.0);
                    if norm > r * (1.0 + 1e-9) {
                        return Err(PermError::NormCap { norm, cap: r });
                    }
                }
            }
        }
        Ok(())
    }

    /// The conjugated ambient products `Y_i`.
    pub fn letters_ambient(
        &self,
        letters: &[WordLetter],
        perms: &ColourPermutations,
    ) -> Result<Vec<DMatrix<Complex64>>, PermError> {
        self.check_word(letters)?;
        let space = self.space();
        space.check_cap(self.dense_cap)?;
        let d = space.dim();
        letters
            .iter()
            .map(|l| {
                let mut y = DMatrix::<Complex64>::identity(d, d);
                for f in &l.factors {
                    if let Some(v) = &f.diag {
                        for (mut col, &lambda) in y.column_iter_mut().zip(v.iter()) {
                            col *= lambda;
                        }
                    }
                    y *= f.op.conjugate(perms.get(l.colour))?.ambient(&space)?;
                }
                Ok(y)
            })
            .collect()
    }

    /// `||Delta[(Y_1 - Delta Y_1) ... (Y_k - Delta Y_k)]||_2`.
    pub fn centered_word_norm(
        &self,
        letters: &[WordLetter],
        perms: &ColourPermutations,
    ) -> Result<f64, PermError> {
        let ys = self.letters_ambient(letters, perms)?;
        let d = self.space().dim();
        let mut z = DMatrix::<Complex64>::identity(d, d);
        for y in &ys {
            z *= y - delta(y);
        }
        Ok(norm2(&delta(&z)))
    }
}

/// A microstate of size dividing `N` placed on the first string of its
/// colour, padded by identities, and extended to the colour's strings.
pub fn place_microstate(
    assignment: &StringAssignment,
    colour: usize,
    x: &DMatrix<Complex64>,
    n: usize,
) -> Result<TensorOperand, PermError> {
    let support = assignment.strings_of(colour);
    let first = *support
        .first()
        .ok_or_else(|| PermError::Input(format!("colour {colour} has no strings")))?;
    TensorOperand::new(vec![first], pad(x, n)?, n)?.lift(support)
}

/// The lifted, permutation-conjugated microstates, one list per colour.
pub fn graph_product_microstates(
    assignment: &StringAssignment,
    sources: &[Vec<DMatrix<Complex64>>],
    n: usize,
    perms: &ColourPermutations,
) -> Result<Vec<Vec<TensorOperand>>, PermError> {
    if sources.len() != assignment.n_colours() {
        return Err(PermError::Input(format!(
            "{} sources for {} colours",
            sources.len(),
            assignment.n_colours()
        )));
    }
    sources
        .iter()
        .enumerate()
        .map(|(c, xs)| {
            xs.iter()
                .map(|x| place_microstate(assignment, c, x, n)?.conjugate(perms.get(c)))
                .collect()
        })
        .collect()
}
