use std::collections::BTreeMap;
use std::fmt;

use gpsofic_algnum::{CycInt, CycMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ProbError;

/// One variable or its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub var: usize,
    pub adjoint: bool,
}

impl Letter {
    pub fn new(var: usize) -> Letter {
        Letter {
            var,
            adjoint: false,
        }
    }

    pub fn star(self) -> Letter {
        Letter {
            var: self.var,
            adjoint: !self.adjoint,
        }
    }
}

pub type Word = Vec<Letter>;

/// Which of the variables `s1..sr` are self-adjoint; the others come with a
/// distinct adjoint `s_i*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variables {
    pub self_adjoint: Vec<bool>,
}

impl Variables {
    pub fn self_adjoint(r: usize) -> Variables {
        Variables {
            self_adjoint: vec![true; r],
        }
    }

    pub fn general(r: usize) -> Variables {
        Variables {
            self_adjoint: vec![false; r],
        }
    }

    pub fn len(&self) -> usize {
        self.self_adjoint.len()
    }

    pub fn is_empty(&self) -> bool {
        self.self_adjoint.is_empty()
    }

    /// Letters available, adjoints of self-adjoint variables excluded.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (v, &sa) in self.self_adjoint.iter().enumerate() {
            out.push(Letter::new(v));
            if !sa {
                out.push(Letter::new(v).star());
            }
        }
        out
    }

    fn normalize(&self, l: Letter) -> Letter {
        if self.self_adjoint[l.var] {
            Letter::new(l.var)
        } else {
            l
        }
    }
}

/// A noncommutative polynomial with cyclotomic integer coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, CycInt>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn constant(c: CycInt) -> NcPoly {
        NcPoly::monomial(Vec::new(), c)
    }

    pub fn one() -> NcPoly {
        NcPoly::constant(CycInt::one())
    }

    pub fn var(i: usize) -> NcPoly {
        NcPoly::monomial(vec![Letter::new(i)], CycInt::one())
    }

    pub fn monomial(word: Word, c: CycInt) -> NcPoly {
        let mut p = NcPoly::zero();
        p.add_term(word, c);
        p
    }

    pub fn add_term(&mut self, word: Word, c: CycInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(word).or_default();
        *entry = &*entry + &c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CycInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Largest variable index plus one.
    pub fn arity(&self) -> usize {
        self.terms
            .keys()
            .flatten()
            .map(|l| l.var + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn has_adjoint_letters(&self) -> bool {
        self.terms.keys().flatten().any(|l| l.adjoint)
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        self.add(&other.scale(&CycInt::from_int(-1)))
    }

    pub fn scale(&self, c: &CycInt) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, d) in &self.terms {
            out.add_term(w.clone(), d * c);
        }
        out
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            for (v, d) in &other.terms {
                let mut word = w.clone();
                word.extend_from_slice(v);
                out.add_term(word, c * d);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> NcPoly {
        (0..e).fold(NcPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn adjoint(&self, vars: &Variables) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(
                w.iter().rev().map(|l| vars.normalize(l.star())).collect(),
                c.conj(),
            );
        }
        out
    }

    /// Rewrites adjoints of self-adjoint variables as the variables themselves.
    pub fn normalized(&self, vars: &Variables) -> Result<NcPoly, ProbError> {
        if self.arity() > vars.len() {
            return Err(ProbError::Arity {
                expected: vars.len(),
                found: self.arity(),
            });
        }
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.iter().map(|&l| vars.normalize(l)).collect(), c.clone());
        }
        Ok(out)
    }

    pub fn parse(text: &str, vars: &Variables) -> Result<NcPoly, ProbError> {
        crate::parse::parse_poly(text, vars)
    }

    pub fn evaluate(&self, x: &[DMatrix<Complex64>]) -> Result<DMatrix<Complex64>, ProbError> {
        let n = check_tuple(x, self.arity())?;
        let mut out = DMatrix::zeros(n, n);
        for (w, c) in &self.terms {
            out += word_value(w, x, n) * c.to_complex();
        }
        Ok(out)
    }

    pub fn evaluate_exact(&self, x: &[CycMatrix]) -> Result<CycMatrix, ProbError> {
        if x.len() < self.arity() {
            return Err(ProbError::Arity {
                expected: self.arity(),
                found: x.len(),
            });
        }
        let n = x.first().map(|m| m.rows()).unwrap_or(1);
        if x.iter().any(|m| !m.is_square() || m.rows() != n) {
            return Err(ProbError::Dimension(
                "tuple entries must share a square size".into(),
            ));
        }
        let mut out = CycMatrix::zeros(n, n);
        for (w, c) in &self.terms {
            let mut m = CycMatrix::identity(n);
            for l in w {
                let f = if l.adjoint {
                    x[l.var].adjoint()
                } else {
                    x[l.var].clone()
                };
                m = m.try_mul(&f)?;
            }
            out = out.try_add(&m.scale(c)?)?;
        }
        Ok(out)
    }
}

pub(crate) fn check_tuple(x: &[DMatrix<Complex64>], arity: usize) -> Result<usize, ProbError> {
    if x.len() < arity {
        return Err(ProbError::Arity {
            expected: arity,
            found: x.len(),
        });
    }
    let n = x.first().map(|m| m.nrows()).unwrap_or(1);
    if x.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(ProbError::Dimension(
            "tuple entries must share a square size".into(),
        ));
    }
    Ok(n)
}

pub(crate) fn word_value(w: &[Letter], x: &[DMatrix<Complex64>], n: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::identity(n, n);
    for l in w {
        m = if l.adjoint {
            m * x[l.var].adjoint()
        } else {
            m * &x[l.var]
        };
    }
    m
}

/// Evaluates a matrix of polynomials blockwise.
pub fn evaluate_matrix(
    entries: &[Vec<NcPoly>],
    x: &[DMatrix<Complex64>],
) -> Result<DMatrix<Complex64>, ProbError> {
    let rows = entries.len();
    let cols = entries.first().map(|r| r.len()).unwrap_or(0);
    if entries.iter().any(|r| r.len() != cols) {
        return Err(ProbError::Dimension("ragged polynomial matrix".into()));
    }
    let arity = entries
        .iter()
        .flatten()
        .map(|p| p.arity())
        .max()
        .unwrap_or(0);
    let n = check_tuple(x, arity)?;
    let mut out = DMatrix::zeros(rows * n, cols * n);
    for (i, row) in entries.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            out.view_mut((i * n, j * n), (n, n))
                .copy_from(&p.evaluate(x)?);
        }
    }
    Ok(out)
}

pub(crate) fn write_word(f: &mut fmt::Formatter<'_>, w: &[Letter]) -> fmt::Result {
    for (k, l) in w.iter().enumerate() {
        if k > 0 {
            write!(f, " ")?;
        }
        write!(f, "s{}{}", l.var + 1, if l.adjoint { "*" } else { "" })?;
    }
    Ok(())
}

pub(crate) fn write_coefficient(
    f: &mut fmt::Formatter<'_>,
    c: &CycInt,
    first: bool,
    bare: bool,
) -> fmt::Result {
    match c.as_integer() {
        Some(a) => {
            let sign = if a < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let sep = if first { "" } else { " " };
            write!(f, "{sep}{sign}{sep}")?;
            if a.abs() != 1 || bare {
                write!(f, "{}", a.abs())?;
            }
            Ok(())
        }
        None => {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}")
        }
    }
}

/// Text in the same grammar the parser reads.
impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            write_coefficient(f, c, k == 0, w.is_empty())?;
            if !w.is_empty() {
                let plain_unit = c.as_integer().map(|a| a.abs() == 1).unwrap_or(false);
                if !plain_unit {
                    write!(f, " ")?;
                }
                write_word(f, w)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
