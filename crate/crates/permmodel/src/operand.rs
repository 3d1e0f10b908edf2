use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::PermError;

/// Default bound on the side length of materialized ambient matrices.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// `[N]^S` with the first string as the most significant digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    pub n: usize,
    pub n_strings: usize,
}

impl Space {
    pub fn new(n: usize, n_strings: usize) -> Space {
        Space { n, n_strings }
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.n_strings as u32)
    }

    pub fn dim_of(&self, support: &[usize]) -> usize {
        self.n.pow(support.len() as u32)
    }

    /// Fails when the ambient matrix would exceed `cap` rows.
    pub fn check_cap(&self, cap: usize) -> Result<(), PermError> {
        match self.n.checked_pow(self.n_strings as u32) {
            Some(d) if d <= cap => Ok(()),
            _ => Err(PermError::Resource(format!(
                "ambient dimension {}^{} exceeds the dense cap {cap}",
                self.n, self.n_strings
            ))),
        }
    }
}

/// Digits of `a` on the strings of `from`, re-read as an index on `onto`, a
/// subset of `from`.
fn restrict_index(n: usize, a: usize, from: &[usize], onto: &[usize]) -> usize {
    let mut digits = vec![0; from.len()];
    let mut rest = a;
    for d in digits.iter_mut().rev() {
        *d = rest % n;
        rest /= n;
    }
    from.iter()
        .zip(&digits)
        .filter(|(s, _)| onto.contains(s))
        .fold(0, |acc, (_, &d)| acc * n + d)
}

fn agree_off(n: usize, a: usize, b: usize, len: usize, keep: &[bool]) -> bool {
    let (mut x, mut y) = (a, b);
    for k in (0..len).rev() {
        if !keep[k] && x % n != y % n {
            return false;
        }
        x /= n;
        y /= n;
    }
    true
}

/// A matrix on `[N]^support`, acting as the identity on every other string.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorOperand {
    pub support: Vec<usize>,
    pub payload: DMatrix<Complex64>,
    pub n: usize,
}

impl TensorOperand {
    pub fn new(
        mut support: Vec<usize>,
        payload: DMatrix<Complex64>,
        n: usize,
    ) -> Result<TensorOperand, PermError> {
        support.sort_unstable();
        support.dedup();
        let d = n.pow(support.len() as u32);
        if payload.shape() != (d, d) {
            return Err(PermError::Dimension(format!(
                "payload on {} strings with N = {n} must be {d}x{d}, got {}x{}",
                support.len(),
                payload.nrows(),
                payload.ncols()
            )));
        }
        Ok(TensorOperand {
            support,
            payload,
            n,
        })
    }

    pub fn dim(&self) -> usize {
        self.payload.nrows()
    }

    /// Identity-extends onto a larger set of strings.
    pub fn lift(&self, target: &[usize]) -> Result<TensorOperand, PermError> {
        let mut target = target.to_vec();
        target.sort_unstable();
        target.dedup();
        if let Some(s) = self.support.iter().find(|s| !target.contains(s)) {
            return Err(PermError::Input(format!(
                "string {s} of the support is not in the target"
            )));
        }
        if target == self.support {
            return Ok(self.clone());
        }
        let d = self.n.pow(target.len() as u32);
        let keep: Vec<bool> = target.iter().map(|s| self.support.contains(s)).collect();
        let local: Vec<usize> = (0..d)
            .map(|a| restrict_index(self.n, a, &target, &self.support))
            .collect();
        let payload = DMatrix::from_fn(d, d, |a, b| {
            if agree_off(self.n, a, b, target.len(), &keep) {
                self.payload[(local[a], local[b])]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(TensorOperand {
            support: target,
            payload,
            n: self.n,
        })
    }

    /// `Sigma^* X Sigma` for `Sigma[x, y] = [x = perm[y]]`.
    pub fn conjugate(&self, perm: &[usize]) -> Result<TensorOperand, PermError> {
        if perm.len() != self.dim() {
            return Err(PermError::Dimension(format!(
                "permutation of {} points for a {}-dimensional operand",
                perm.len(),
                self.dim()
            )));
        }
        let d = self.dim();
        let payload = DMatrix::from_fn(d, d, |i, j| self.payload[(perm[i], perm[j])]);
        Ok(TensorOperand {
            support: self.support.clone(),
            payload,
            n: self.n,
        })
    }

    /// The matrix on all of `space`.
    pub fn ambient(&self, space: &Space) -> Result<DMatrix<Complex64>, PermError> {
        if self.n != space.n {
            return Err(PermError::Dimension(format!(
                "operand has N = {}, space has N = {}",
                self.n, space.n
            )));
        }
        let all: Vec<usize> = (0..space.n_strings).collect();
        Ok(self.lift(&all)?.payload)
    }

    pub fn delta(&self) -> TensorOperand {
        TensorOperand {
            support: self.support.clone(),
            payload: delta(&self.payload),
            n: self.n,
        }
    }
}

/// Conditional expectation onto the diagonal.
pub fn delta(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        m.nrows().min(m.ncols()),
        (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]),
    ))
}

/// `(tr |M|^2)^(1/2)` with the normalized trace.
pub fn norm2(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    (m.iter().map(|z| z.norm_sqr()).sum::<f64>() / m.nrows() as f64).sqrt()
}

pub fn normalized_trace(m: &DMatrix<Complex64>) -> Complex64 {
    m.trace() / m.nrows() as f64
}

/// `x (x) I_{n / x.dim}`, the padding used to bring a microstate to size `n`.
pub fn pad(x: &DMatrix<Complex64>, n: usize) -> Result<DMatrix<Complex64>, PermError> {
    let d = x.nrows();
    if d == 0 || n % d != 0 {
        return Err(PermError::Dimension(format!(
            "cannot pad a {d}x{d} matrix to size {n}"
        )));
    }
    Ok(x.kronecker(&DMatrix::identity(n / d, n / d)))
}
