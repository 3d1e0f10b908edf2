use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;

use crate::{AlgError, CycInt, CycMatrix};

/// A basis element `zeta^phase u_chi v_g` of the crossed product of the dual
/// of `Z/n` by `Z/n`, where `v_g u_chi v_g^* = zeta^(-chi g) u_chi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrossedElement {
    pub n: u32,
    pub phase: u32,
    pub chi: u32,
    pub g: u32,
}

impl CrossedElement {
    pub fn new(n: u32, phase: i64, chi: i64, g: i64) -> CrossedElement {
        let r = |x: i64| x.rem_euclid(n as i64) as u32;
        CrossedElement {
            n,
            phase: r(phase),
            chi: r(chi),
            g: r(g),
        }
    }

    pub fn identity(n: u32) -> CrossedElement {
        CrossedElement::new(n, 0, 0, 0)
    }

    pub fn mul(&self, other: &CrossedElement) -> CrossedElement {
        assert_eq!(self.n, other.n, "elements of different crossed products");
        let twist = other.chi as i64 * self.g as i64;
        CrossedElement::new(
            self.n,
            self.phase as i64 + other.phase as i64 - twist,
            self.chi as i64 + other.chi as i64,
            self.g as i64 + other.g as i64,
        )
    }

    pub fn adjoint(&self) -> CrossedElement {
        CrossedElement::new(
            self.n,
            -(self.phase as i64) - self.chi as i64 * self.g as i64,
            -(self.chi as i64),
            -(self.g as i64),
        )
    }

    pub fn coefficient(&self) -> CycInt {
        CycInt::root_of_unity(self.n, self.phase as i64)
            .expect("conductor of a crossed product is small")
    }

    /// The canonical trace: the coefficient on the identity, zero elsewhere.
    pub fn trace(&self) -> CycInt {
        if self.chi == 0 && self.g == 0 {
            self.coefficient()
        } else {
            CycInt::zero()
        }
    }

    /// Left regular representation on the basis `u_theta v_h`, indexed `theta * n + h`.
    pub fn matrix(&self) -> Result<CycMatrix, AlgError> {
        let n = self.n as usize;
        let mut entries = vec![CycInt::zero(); n * n * n * n];
        for theta in 0..n {
            for h in 0..n {
                let image = self.mul(&CrossedElement::new(self.n, 0, theta as i64, h as i64));
                let row = image.chi as usize * n + image.g as usize;
                let col = theta * n + h;
                entries[row * n * n + col] = image.coefficient();
            }
        }
        CycMatrix::from_entries(n * n, n * n, entries)
    }
}

/// The `n^2` matrices `pi(u_chi v_g)`, indexed `chi * n + g`; each is a
/// generalized permutation matrix with entries in `{0}` and the `n`-th roots of unity.
pub fn crossed_product_microstate(n: u32) -> Result<Vec<CycMatrix>, AlgError> {
    if n == 0 {
        return Err(AlgError::Input("crossed product needs n >= 1".into()));
    }
    let mut out = Vec::with_capacity((n * n) as usize);
    for chi in 0..n {
        for g in 0..n {
            out.push(CrossedElement::new(n, 0, chi as i64, g as i64).matrix()?);
        }
    }
    Ok(out)
}

/// `(pi(u_1), pi(v_1))`, which generate the whole matrix algebra.
pub fn crossed_product_generators(n: u32) -> Result<(CycMatrix, CycMatrix), AlgError> {
    Ok((
        CrossedElement::new(n, 0, 1, 0).matrix()?,
        CrossedElement::new(n, 0, 0, 1).matrix()?,
    ))
}

/// Smallest multiplicities `t_j` with `t_j dims_j / sum_i t_i dims_i = weights_j`.
pub fn multiplicity_schedule(
    dims: &[usize],
    weights: &[Ratio<i64>],
) -> Result<Vec<usize>, AlgError> {
    if dims.len() != weights.len() || dims.is_empty() {
        return Err(AlgError::Input("one weight per part is required".into()));
    }
    if dims.iter().any(|&d| d == 0) {
        return Err(AlgError::Input("parts must have positive dimension".into()));
    }
    if weights.iter().any(|w| *w <= Ratio::from_integer(0)) {
        return Err(AlgError::Input("weights must be positive".into()));
    }
    if weights.iter().copied().sum::<Ratio<i64>>() != Ratio::from_integer(1) {
        return Err(AlgError::Input("weights must sum to 1".into()));
    }
    let per_dim: Vec<Ratio<i64>> = weights
        .iter()
        .zip(dims)
        .map(|(w, &d)| w / d as i64)
        .collect();
    let den = per_dim.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<i64> = per_dim.iter().map(|q| (q * den).to_integer()).collect();
    let g = scaled.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    Ok(scaled.iter().map(|&x| (x / g) as usize).collect())
}

/// For each part `j` and generator `x`, the block matrix holding `x` repeated
/// `t_j` times in part `j`'s block and zeros elsewhere; then one block
/// identity projection per part.
pub fn direct_sum_microstates(
    parts: &[Vec<CycMatrix>],
    multiplicities: &[usize],
) -> Result<Vec<CycMatrix>, AlgError> {
    if parts.len() != multiplicities.len() || parts.is_empty() {
        return Err(AlgError::Input(
            "one multiplicity per part is required".into(),
        ));
    }
    let mut dims = Vec::with_capacity(parts.len());
    for p in parts {
        let d = p.first().map(|x| x.rows()).unwrap_or(1);
        if p.iter().any(|x| !x.is_square() || x.rows() != d) {
            return Err(AlgError::Dimension(
                "microstates of one part must share a square size".into(),
            ));
        }
        dims.push(d);
    }
    let block = |j: usize, x: &CycMatrix| -> Result<CycMatrix, AlgError> {
        let mut blocks = Vec::new();
        for (i, (&d, &t)) in dims.iter().zip(multiplicities).enumerate() {
            if i == j {
                blocks.extend(std::iter::repeat_n(x.clone(), t));
            } else {
                blocks.push(CycMatrix::zeros(d * t, d * t));
            }
        }
        CycMatrix::block_diagonal(&blocks)
    };
    let mut out = Vec::new();
    for (j, p) in parts.iter().enumerate() {
        for x in p {
            out.push(block(j, x)?);
        }
    }
    for (j, &d) in dims.iter().enumerate() {
        out.push(block(j, &CycMatrix::identity(d))?);
    }
    Ok(out)
}

/// `(A_i (x) I, I (x) B_j)`.
pub fn tensor_microstates(a: &[CycMatrix], b: &[CycMatrix]) -> Result<Vec<CycMatrix>, AlgError> {
    let da = square_size(a)?;
    let db = square_size(b)?;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let ib = CycMatrix::identity(db);
    let ia = CycMatrix::identity(da);
    for x in a {
        out.push(x.kron(&ib)?);
    }
    for y in b {
        out.push(ia.kron(y)?);
    }
    Ok(out)
}

fn square_size(xs: &[CycMatrix]) -> Result<usize, AlgError> {
    let d = xs.first().map(|x| x.rows()).unwrap_or(1);
    if xs.iter().any(|x| !x.is_square() || x.rows() != d) {
        return Err(AlgError::Dimension(
            "tuple entries must share a square size".into(),
        ));
    }
    Ok(d)
}

/// `||Delta(X) - tr(X) 1||_2` with the normalized trace and 2-norm.
pub fn diag_deviation(x: &DMatrix<Complex64>) -> f64 {
    let n = x.nrows().min(x.ncols());
    if n == 0 {
        return 0.0;
    }
    let tr: Complex64 = (0..n).map(|i| x[(i, i)]).sum::<Complex64>() / n as f64;
    ((0..n).map(|i| (x[(i, i)] - tr).norm_sqr()).sum::<f64>() / n as f64).sqrt()
}

/// Exact test that every diagonal entry is the same.
pub fn diagonal_is_constant(x: &CycMatrix) -> bool {
    let d = x.diagonal();
    d.windows(2).all(|w| w[0] == w[1])
}
