use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;

use crate::cyclotomic::{
    descend, field, normalize_conductor, promote, smaller_conductors, CycInt, DEFAULT_MAX_CONDUCTOR,
};
use crate::AlgError;

/// Dense matrix over `Z[zeta_m]`; every entry is kept at the shared conductor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    conductor: u32,
    /// Row-major, each entry a coefficient vector of length `phi(conductor)`.
    data: Vec<Vec<i64>>,
}

impl CycMatrix {
    pub fn zeros(rows: usize, cols: usize) -> CycMatrix {
        CycMatrix {
            rows,
            cols,
            conductor: 1,
            data: vec![vec![0]; rows * cols],
        }
    }

    pub fn identity(n: usize) -> CycMatrix {
        let mut m = CycMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i][0] = 1;
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: Vec<CycInt>,
    ) -> Result<CycMatrix, AlgError> {
        if entries.len() != rows * cols {
            return Err(AlgError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let m = entries.iter().fold(1u32, |acc, e| acc.lcm(&e.conductor()));
        if m > DEFAULT_MAX_CONDUCTOR {
            return Err(AlgError::Resource(format!(
                "conductor {m} exceeds the maximum {DEFAULT_MAX_CONDUCTOR}"
            )));
        }
        let data = entries
            .iter()
            .map(|e| promote(e.conductor(), m, e.coeffs()))
            .collect();
        Ok(CycMatrix {
            rows,
            cols,
            conductor: m,
            data,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycInt,
    ) -> Result<CycMatrix, AlgError> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        CycMatrix::from_entries(rows, cols, entries)
    }

    pub fn from_integers(rows: usize, cols: usize, values: &[i64]) -> Result<CycMatrix, AlgError> {
        CycMatrix::from_entries(
            rows,
            cols,
            values.iter().map(|&a| CycInt::from_int(a)).collect(),
        )
    }

    /// Permutation matrix with ones at `(perm[j], j)`.
    pub fn permutation(perm: &[usize]) -> CycMatrix {
        let n = perm.len();
        let mut m = CycMatrix::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * n + j][0] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn get(&self, i: usize, j: usize) -> CycInt {
        CycInt::lowest(self.conductor, self.data[i * self.cols + j].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.iter().all(|&x| x == 0))
    }

    fn entry_is_zero(&self, k: usize) -> bool {
        self.data[k].iter().all(|&x| x == 0)
    }

    /// Drops the shared conductor to the least one holding every entry.
    fn settle(mut self) -> CycMatrix {
        'next: for d in smaller_conductors(self.conductor) {
            let mut lowered = Vec::with_capacity(self.data.len());
            for e in &self.data {
                match descend(self.conductor, d, e) {
                    Some(c) => lowered.push(c),
                    None => continue 'next,
                }
            }
            self.conductor = d;
            self.data = lowered;
            return self;
        }
        self
    }

    fn at_conductor(&self, m: u32) -> Vec<Vec<i64>> {
        self.data
            .iter()
            .map(|e| promote(self.conductor, m, e))
            .collect()
    }

    fn common(&self, other: &CycMatrix) -> Result<u32, AlgError> {
        let m = normalize_conductor(self.conductor.lcm(&other.conductor));
        if m > DEFAULT_MAX_CONDUCTOR {
            return Err(AlgError::Resource(format!(
                "conductor {m} exceeds the maximum {DEFAULT_MAX_CONDUCTOR}"
            )));
        }
        Ok(m)
    }

    fn same_shape(&self, other: &CycMatrix) -> Result<(), AlgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(AlgError::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &CycMatrix,
        op: impl Fn(i64, i64) -> i64,
    ) -> Result<CycMatrix, AlgError> {
        self.same_shape(other)?;
        let m = self.common(other)?;
        let a = self.at_conductor(m);
        let b = other.at_conductor(m);
        let data = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| op(*p, *q)).collect())
            .collect();
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: m,
            data,
        }
        .settle())
    }

    pub fn try_add(&self, other: &CycMatrix) -> Result<CycMatrix, AlgError> {
        self.zip_with(other, |p, q| p + q)
    }

    pub fn try_sub(&self, other: &CycMatrix) -> Result<CycMatrix, AlgError> {
        self.zip_with(other, |p, q| p - q)
    }

    pub fn try_mul(&self, other: &CycMatrix) -> Result<CycMatrix, AlgError> {
        if self.cols != other.rows {
            return Err(AlgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let m = self.common(other)?;
        let f = field(m);
        let a = self.at_conductor(m);
        let b = other.at_conductor(m);
        let mut data = vec![vec![0i64; f.degree]; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = &a[i * self.cols + k];
                if x.iter().all(|&v| v == 0) {
                    continue;
                }
                for j in 0..other.cols {
                    let y = &b[k * other.cols + j];
                    if y.iter().all(|&v| v == 0) {
                        continue;
                    }
                    let p = f.mul(x, y);
                    for (acc, v) in data[i * other.cols + j].iter_mut().zip(p) {
                        *acc += v;
                    }
                }
            }
        }
        Ok(CycMatrix {
            rows: self.rows,
            cols: other.cols,
            conductor: m,
            data,
        }
        .settle())
    }

    pub fn scale(&self, c: &CycInt) -> Result<CycMatrix, AlgError> {
        let m = normalize_conductor(self.conductor.lcm(&c.conductor()));
        if m > DEFAULT_MAX_CONDUCTOR {
            return Err(AlgError::Resource(format!(
                "conductor {m} exceeds the maximum {DEFAULT_MAX_CONDUCTOR}"
            )));
        }
        let f = field(m);
        let cc = promote(c.conductor(), m, c.coeffs());
        let data = self.at_conductor(m).iter().map(|e| f.mul(e, &cc)).collect();
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: m,
            data,
        }
        .settle())
    }

    /// Entrywise image under `zeta_m -> zeta_m^k` at the stored conductor.
    pub fn galois(&self, k: i64) -> CycMatrix {
        let f = field(self.conductor);
        let data = self.data.iter().map(|e| f.galois(e, k)).collect();
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            data,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CycMatrix {
        let f = field(self.conductor);
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(f.galois(&self.data[i * self.cols + j], -1));
            }
        }
        CycMatrix {
            rows: self.cols,
            cols: self.rows,
            conductor: self.conductor,
            data,
        }
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        CycMatrix {
            rows: self.cols,
            cols: self.rows,
            conductor: self.conductor,
            data,
        }
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &CycMatrix) -> Result<CycMatrix, AlgError> {
        let m = self.common(other)?;
        let f = field(m);
        let a = self.at_conductor(m);
        let b = other.at_conductor(m);
        let (rows, cols) = (self.rows * other.rows, self.cols * other.cols);
        let mut data = vec![vec![0i64; f.degree]; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = &a[i * self.cols + j];
                if x.iter().all(|&v| v == 0) {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        data[(i * other.rows + p) * cols + j * other.cols + q] =
                            f.mul(x, &b[p * other.cols + q]);
                    }
                }
            }
        }
        Ok(CycMatrix {
            rows,
            cols,
            conductor: m,
            data,
        }
        .settle())
    }

    /// Block-diagonal matrix with the given blocks in order.
    pub fn block_diagonal(blocks: &[CycMatrix]) -> Result<CycMatrix, AlgError> {
        let m = blocks.iter().fold(1u32, |acc, b| acc.lcm(&b.conductor));
        if m > DEFAULT_MAX_CONDUCTOR {
            return Err(AlgError::Resource(format!(
                "conductor {m} exceeds the maximum {DEFAULT_MAX_CONDUCTOR}"
            )));
        }
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let degree = field(m).degree;
        let mut data = vec![vec![0i64; degree]; rows * cols];
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            let lifted = b.at_conductor(m);
            for i in 0..b.rows {
                for j in 0..b.cols {
                    data[(r0 + i) * cols + c0 + j] = lifted[i * b.cols + j].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(CycMatrix {
            rows,
            cols,
            conductor: m,
            data,
        })
    }

    /// `P^T A P` for the permutation matrix of `perm`, i.e. entry `(i, j)` is `A[perm[i], perm[j]]`.
    pub fn permute(&self, perm: &[usize]) -> Result<CycMatrix, AlgError> {
        if !self.is_square() || perm.len() != self.rows {
            return Err(AlgError::Dimension(
                "permutation size does not match".into(),
            ));
        }
        let n = self.rows;
        let mut data = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                data.push(self.data[pi * n + pj].clone());
            }
        }
        Ok(CycMatrix {
            rows: n,
            cols: n,
            conductor: self.conductor,
            data,
        })
    }

    pub fn trace(&self) -> CycInt {
        let mut acc = vec![0i64; field(self.conductor).degree];
        for i in 0..self.rows.min(self.cols) {
            for (a, v) in acc.iter_mut().zip(&self.data[i * self.cols + i]) {
                *a += v;
            }
        }
        CycInt::lowest(self.conductor, acc)
    }

    pub fn diagonal(&self) -> Vec<CycInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// Count of nonzero entries in each row.
    pub fn row_support(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !self.entry_is_zero(i * self.cols + j))
                    .count()
            })
            .collect()
    }

    pub fn col_support(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .filter(|&i| !self.entry_is_zero(i * self.cols + j))
                    .count()
            })
            .collect()
    }

    /// Numeric matrix at `zeta_m = exp(2 pi i k / m)`.
    pub fn embed(&self, k: i64) -> DMatrix<Complex64> {
        let f = field(self.conductor);
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            f.embed(&self.data[i * self.cols + j], k)
        })
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        self.embed(1)
    }

    /// Largest absolute coefficient, a rough size measure for overflow guards.
    pub fn max_coefficient(&self) -> i64 {
        self.data
            .iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or(0)
    }
}

macro_rules! forward_mat_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl std::ops::$tr for &CycMatrix {
            type Output = CycMatrix;
            fn $method(self, rhs: &CycMatrix) -> CycMatrix {
                self.$try(rhs)
                    .expect("compatible shapes and conductor within the default cap")
            }
        }
    };
}

forward_mat_op!(Add, add, try_add);
forward_mat_op!(Sub, sub, try_sub);
forward_mat_op!(Mul, mul, try_mul);

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "CycMatrix {}x{} over Z[zeta_{}]",
            self.rows, self.cols, self.conductor
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
