use std::collections::BTreeMap;

use gpsofic_algnum::diag_deviation;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::poly::check_tuple;
use crate::{NcPoly, ProbError, Variables, Word};

/// Default highest word length recorded in a law.
pub const DEFAULT_DEGREE_CAP: usize = 6;

/// Normalized-trace moments of a matrix tuple, up to a degree cap.
#[derive(Debug, Clone, PartialEq)]
pub struct Law {
    pub vars: Variables,
    pub cap: usize,
    moments: BTreeMap<Word, Complex64>,
}

impl Law {
    pub fn from_matrices(
        x: &[DMatrix<Complex64>],
        vars: &Variables,
        cap: usize,
    ) -> Result<Law, ProbError> {
        let n = check_tuple(x, vars.len())?;
        let letters = vars.letters();
        let factors: Vec<DMatrix<Complex64>> = letters
            .iter()
            .map(|l| {
                if l.adjoint {
                    x[l.var].adjoint()
                } else {
                    x[l.var].clone()
                }
            })
            .collect();
        let mut moments = BTreeMap::new();
        let mut stack: Vec<(Word, DMatrix<Complex64>)> =
            vec![(Vec::new(), DMatrix::identity(n, n))];
        while let Some((w, m)) = stack.pop() {
            moments.insert(w.clone(), m.trace() / n as f64);
            if w.len() < cap {
                for (l, f) in letters.iter().zip(&factors) {
                    let mut next = w.clone();
                    next.push(*l);
                    stack.push((next, &m * f));
                }
            }
        }
        Ok(Law {
            vars: vars.clone(),
            cap,
            moments,
        })
    }

    pub fn moment(&self, w: &[crate::Letter]) -> Option<Complex64> {
        self.moments.get(w).copied()
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    /// Value of the law on a polynomial of degree at most the cap.
    pub fn apply(&self, p: &NcPoly) -> Result<Complex64, ProbError> {
        let p = p.normalized(&self.vars)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, c) in p.terms() {
            let m = self.moment(w).ok_or(ProbError::DegreeCap {
                cap: self.cap,
                degree: w.len(),
            })?;
            acc += m * c.to_complex();
        }
        Ok(acc)
    }

    /// Largest deviation from `tau(w*) = conj(tau(w))`.
    pub fn adjoint_defect(&self) -> f64 {
        self.moments
            .iter()
            .map(|(w, m)| {
                let star: Word = w
                    .iter()
                    .rev()
                    .map(|l| {
                        if self.vars.self_adjoint[l.var] {
                            *l
                        } else {
                            l.star()
                        }
                    })
                    .collect();
                (self.moments[&star] - m.conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Gram matrix `tau(v* w)` over words of length at most half the cap.
    pub fn moment_matrix(&self) -> DMatrix<Complex64> {
        let half: Vec<&Word> = self
            .moments
            .keys()
            .filter(|w| 2 * w.len() <= self.cap)
            .collect();
        DMatrix::from_fn(half.len(), half.len(), |i, j| {
            let mut w: Word = half[i]
                .iter()
                .rev()
                .map(|l| {
                    if self.vars.self_adjoint[l.var] {
                        *l
                    } else {
                        l.star()
                    }
                })
                .collect();
            w.extend_from_slice(half[j]);
            self.moments[&w]
        })
    }

    pub fn min_moment_eigenvalue(&self) -> f64 {
        let g = self.moment_matrix();
        g.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `||Delta(P(X)) - tr(P(X)) 1||_2` for each polynomial.
pub fn diag_constancy(polys: &[NcPoly], x: &[DMatrix<Complex64>]) -> Result<Vec<f64>, ProbError> {
    polys
        .iter()
        .map(|p| Ok(diag_deviation(&p.evaluate(x)?)))
        .collect()
}
