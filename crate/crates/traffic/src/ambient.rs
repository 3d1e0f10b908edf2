use std::collections::BTreeMap;

use crate::{Complex, DenseMatrix, TrafficError};

/// Index arithmetic on `[N]^S`: the first string is the most significant
/// digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub n: usize,
    pub n_strings: usize,
}

impl Ambient {
    #[must_use]
    pub fn new(n: usize, n_strings: usize) -> Self {
        Ambient { n, n_strings }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.n.pow(self.n_strings as u32)
    }

    #[must_use]
    pub fn coordinate(&self, a: usize, s: usize) -> usize {
        (a / self.n.pow((self.n_strings - 1 - s) as u32)) % self.n
    }

    #[must_use]
    pub fn compose(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &x| acc * self.n + x)
    }

    /// Index of `a` restricted to `support` (ascending strings) in `[N]^support`.
    #[must_use]
    pub fn restrict(&self, a: usize, support: &[usize]) -> usize {
        support
            .iter()
            .fold(0, |acc, &s| acc * self.n + self.coordinate(a, s))
    }

    /// Whether `a` and `b` agree on every string outside `support`.
    #[must_use]
    pub fn agree_off(&self, a: usize, b: usize, support: &[usize]) -> bool {
        (0..self.n_strings)
            .all(|s| support.contains(&s) || self.coordinate(a, s) == self.coordinate(b, s))
    }
}

/// A matrix acting on the strings in `support` (ascending), identity
/// elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct Operand {
    pub support: Vec<usize>,
    pub matrix: DenseMatrix,
}

impl Operand {
    pub fn new(mut support: Vec<usize>, matrix: DenseMatrix) -> Result<Self, TrafficError> {
        support.sort_unstable();
        support.dedup();
        if !matrix.is_square() {
            return Err(TrafficError::Dimension(format!(
                "{}x{} matrix is not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Operand { support, matrix })
    }

    #[must_use]
    pub fn adjoint(&self) -> Self {
        Operand {
            support: self.support.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn check(&self, amb: &Ambient) -> Result<(), TrafficError> {
        if let Some(&s) = self.support.iter().find(|&&s| s >= amb.n_strings) {
            return Err(TrafficError::Dimension(format!(
                "support string {s} out of range"
            )));
        }
        let want = amb.n.pow(self.support.len() as u32);
        if self.matrix.nrows() != want {
            return Err(TrafficError::Dimension(format!(
                "operand on {} strings must be {want}x{want}, got {}x{}",
                self.support.len(),
                self.matrix.nrows(),
                self.matrix.ncols()
            )));
        }
        Ok(())
    }

    /// Entry of `perm^* X perm (x) I` at ambient indices `(a, b)`; `perm`
    /// maps local indices and defaults to the identity.
    #[must_use]
    pub fn entry(&self, amb: &Ambient, a: usize, b: usize, perm: Option<&[usize]>) -> Complex {
        if !amb.agree_off(a, b, &self.support) {
            return Complex::new(0.0, 0.0);
        }
        let (mut x, mut y) = (
            amb.restrict(a, &self.support),
            amb.restrict(b, &self.support),
        );
        if let Some(p) = perm {
            x = p[x];
            y = p[y];
        }
        self.matrix[(x, y)]
    }

    /// The full `N^S x N^S` matrix.
    #[must_use]
    pub fn embed(&self, amb: &Ambient, perm: Option<&[usize]>) -> DenseMatrix {
        let d = amb.dim();
        DenseMatrix::from_fn(d, d, |a, b| self.entry(amb, a, b, perm))
    }
}

/// Matrix payloads keyed by label handle.  A handle ending in `*` resolves to
/// the adjoint of the base handle unless it is present itself.
#[derive(Clone, Debug, Default)]
pub struct Labels {
    map: BTreeMap<String, Operand>,
}

impl Labels {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, handle: impl Into<String>, op: Operand) {
        self.map.insert(handle.into(), op);
    }

    #[must_use]
    pub fn with(mut self, handle: impl Into<String>, op: Operand) -> Self {
        self.insert(handle, op);
        self
    }

    pub fn get(&self, handle: &str) -> Result<Operand, TrafficError> {
        if let Some(op) = self.map.get(handle) {
            return Ok(op.clone());
        }
        if let Some(base) = handle.strip_suffix('*') {
            if let Some(op) = self.map.get(base) {
                return Ok(op.adjoint());
            }
        }
        Err(TrafficError::MissingLabel(handle.to_string()))
    }

    pub fn handles(&self) -> impl Iterator<Item = &String> {
        self.map.keys()
    }
}
