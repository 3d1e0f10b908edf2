use std::collections::BTreeMap;
use std::fmt;

use gpsofic_algnum::{det_plus, singular_values, CycInt, RankThreshold};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::poly::{check_tuple, word_value, write_coefficient, write_word};
use crate::{Letter, NcPoly, ProbError, Word};

/// An element of the algebraic tensor square, a sum of `c a (x) b` over word pairs.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NcBiPoly {
    terms: BTreeMap<(Word, Word), CycInt>,
}

impl NcBiPoly {
    pub fn zero() -> NcBiPoly {
        NcBiPoly::default()
    }

    /// `1 (x) 1`.
    pub fn one() -> NcBiPoly {
        NcBiPoly::elementary(&NcPoly::one(), &NcPoly::one())
    }

    /// `p (x) q`, expanded over monomials.
    pub fn elementary(p: &NcPoly, q: &NcPoly) -> NcBiPoly {
        let mut out = NcBiPoly::zero();
        for (a, c) in p.terms() {
            for (b, d) in q.terms() {
                out.add_term(a.clone(), b.clone(), c * d);
            }
        }
        out
    }

    pub fn add_term(&mut self, left: Word, right: Word, c: CycInt) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let entry = self.terms.entry(key.clone()).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &CycInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &NcBiPoly) -> NcBiPoly {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcBiPoly) -> NcBiPoly {
        self.add(&other.scale(&CycInt::from_int(-1)))
    }

    pub fn scale(&self, c: &CycInt) -> NcBiPoly {
        let mut out = NcBiPoly::zero();
        for ((a, b), d) in &self.terms {
            out.add_term(a.clone(), b.clone(), d * c);
        }
        out
    }

    /// Outer bimodule action `p . (a (x) b) . q = p a (x) b q`.
    pub fn act(&self, p: &NcPoly, q: &NcPoly) -> NcBiPoly {
        let mut out = NcBiPoly::zero();
        for ((a, b), c) in &self.terms {
            for (u, cu) in p.terms() {
                for (v, cv) in q.terms() {
                    let left: Word = u.iter().chain(a).copied().collect();
                    let right: Word = b.iter().chain(v).copied().collect();
                    out.add_term(left, right, &(c * cu) * cv);
                }
            }
        }
        out
    }

    /// Product in the tensor product with the opposite algebra:
    /// `(a (x) b)(c (x) d) = ac (x) db`.
    pub fn mul_op(&self, other: &NcBiPoly) -> NcBiPoly {
        let mut out = NcBiPoly::zero();
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &other.terms {
                let left: Word = a.iter().chain(x).copied().collect();
                let right: Word = y.iter().chain(b).copied().collect();
                out.add_term(left, right, c * d);
            }
        }
        out
    }

    fn arity(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|(a, b)| a.iter().chain(b))
            .map(|l| l.var + 1)
            .max()
            .unwrap_or(0)
    }

    /// `sum c A(a) (x) A(b)^T` as an `N^2 x N^2` matrix.
    pub fn evaluate(&self, x: &[DMatrix<Complex64>]) -> Result<DMatrix<Complex64>, ProbError> {
        let n = check_tuple(x, self.arity())?;
        let mut out = DMatrix::zeros(n * n, n * n);
        for ((a, b), c) in &self.terms {
            let left = word_value(a, x, n) * c.to_complex();
            let right = word_value(b, x, n).transpose();
            out += left.kronecker(&right);
        }
        Ok(out)
    }

    /// `sum c A(a) E A(b)`, the pairing with a direction `E`.
    pub fn contract(
        &self,
        x: &[DMatrix<Complex64>],
        e: &DMatrix<Complex64>,
    ) -> Result<DMatrix<Complex64>, ProbError> {
        let n = check_tuple(x, self.arity())?;
        if e.shape() != (n, n) {
            return Err(ProbError::Dimension(
                "direction must match the tuple size".into(),
            ));
        }
        let mut out = DMatrix::zeros(n, n);
        for ((a, b), c) in &self.terms {
            out += word_value(a, x, n) * e * word_value(b, x, n) * c.to_complex();
        }
        Ok(out)
    }
}

impl fmt::Display for NcBiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.terms.iter().enumerate() {
            let bare = c.as_integer().map(|x| x.abs() != 1).unwrap_or(true);
            write_coefficient(f, c, k == 0, false)?;
            if bare {
                write!(f, " ")?;
            }
            if a.is_empty() {
                write!(f, "1")?;
            } else {
                write_word(f, a)?;
            }
            write!(f, " (x) ")?;
            if b.is_empty() {
                write!(f, "1")?;
            } else {
                write_word(f, b)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NcBiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The derivation with `d_i(s_j) = [i = j] 1 (x) 1`.
pub fn free_difference_quotient(p: &NcPoly, i: usize) -> Result<NcBiPoly, ProbError> {
    if p.has_adjoint_letters() {
        return Err(ProbError::NotSelfAdjoint);
    }
    let target = Letter::new(i);
    let mut out = NcBiPoly::zero();
    for (w, c) in p.terms() {
        for (pos, l) in w.iter().enumerate() {
            if *l == target {
                out.add_term(w[..pos].to_vec(), w[pos + 1..].to_vec(), c.clone());
            }
        }
    }
    Ok(out)
}

/// Matrix over the tensor square; row 0 holds `s_j (x) 1 - 1 (x) s_j`, row
/// `1 + k` holds the quotients of the `k`-th relation.
#[derive(Debug, Clone, PartialEq)]
pub struct DfMatrix {
    pub entries: Vec<Vec<NcBiPoly>>,
}

impl DfMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map(|r| r.len()).unwrap_or(0)
    }

    /// Block matrix of size `rows N^2 x cols N^2`.
    pub fn evaluate(&self, x: &[DMatrix<Complex64>]) -> Result<DMatrix<Complex64>, ProbError> {
        let n = check_tuple(x, 0)?;
        let b = n * n;
        let mut out = DMatrix::zeros(self.rows() * b, self.cols() * b);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, q) in row.iter().enumerate() {
                out.view_mut((i * b, j * b), (b, b))
                    .copy_from(&q.evaluate(x)?);
            }
        }
        Ok(out)
    }
}

pub fn build_df(relations: &[NcPoly], r: usize) -> Result<DfMatrix, ProbError> {
    if r == 0 {
        return Err(ProbError::Arity {
            expected: 1,
            found: 0,
        });
    }
    if let Some(p) = relations.iter().find(|p| p.arity() > r) {
        return Err(ProbError::Arity {
            expected: r,
            found: p.arity(),
        });
    }
    let mut entries = Vec::with_capacity(relations.len() + 1);
    entries.push(
        (0..r)
            .map(|j| {
                NcBiPoly::elementary(&NcPoly::var(j), &NcPoly::one())
                    .sub(&NcBiPoly::elementary(&NcPoly::one(), &NcPoly::var(j)))
            })
            .collect(),
    );
    for p in relations {
        entries.push(
            (0..r)
                .map(|j| free_difference_quotient(p, j))
                .collect::<Result<_, _>>()?,
        );
    }
    Ok(DfMatrix { entries })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankDefect {
    /// Kernel dimension divided by `N^2`.
    pub kernel_fraction: f64,
    pub nullity: usize,
    pub rank: usize,
    pub det_plus: f64,
    pub smallest_nonzero: Option<f64>,
    pub largest: f64,
    /// Largest singular value treated as zero, if any.
    pub largest_dropped: Option<f64>,
}

pub fn rank_defect_report(
    df: &DMatrix<Complex64>,
    n: usize,
    threshold: RankThreshold,
) -> RankDefect {
    let dp = det_plus(df, threshold);
    let nullity = df.ncols() - dp.rank;
    RankDefect {
        kernel_fraction: nullity as f64 / (n * n) as f64,
        nullity,
        rank: dp.rank,
        det_plus: dp.value,
        smallest_nonzero: dp.smallest_kept,
        largest: singular_values(df).first().copied().unwrap_or(0.0),
        largest_dropped: dp.largest_dropped,
    }
}
