use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cyclotomic::units;
use crate::{AlgError, CycMatrix};

/// Relative factor applied to the largest singular value to make an upper
/// estimate of an operator norm from a double-precision SVD.
const NORM_SLACK: f64 = 1e-9;

/// Rank decision for pseudo-determinants: singular values at or below
/// `factor * max(rows, cols) * eps * sigma_max` count as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankThreshold {
    pub factor: f64,
}

impl Default for RankThreshold {
    fn default() -> Self {
        RankThreshold { factor: 1.0 }
    }
}

impl RankThreshold {
    pub fn cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.factor * rows.max(cols) as f64 * f64::EPSILON * sigma_max
    }
}

/// Pseudo-determinant with the data that decided it.
#[derive(Debug, Clone, PartialEq)]
pub struct DetPlus {
    /// Product of the singular values kept as nonzero.
    pub value: f64,
    pub log_value: f64,
    pub rank: usize,
    /// `min(rows, cols)`.
    pub size: usize,
    pub cutoff: f64,
    /// Smallest singular value kept, if any.
    pub smallest_kept: Option<f64>,
    /// Largest singular value discarded as kernel, if any.
    pub largest_dropped: Option<f64>,
}

impl DetPlus {
    /// Kernel dimension of `|A|` on the domain side.
    pub fn nullity(&self, cols: usize) -> usize {
        cols - self.rank
    }
}

/// Singular values, descending.
pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Product of the nonzero singular values; the zero map gets the empty product 1.
pub fn det_plus(a: &DMatrix<Complex64>, threshold: RankThreshold) -> DetPlus {
    let s = singular_values(a);
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let cutoff = threshold.cutoff(a.nrows(), a.ncols(), sigma_max);
    let kept: Vec<f64> = s.iter().copied().filter(|&x| x > cutoff).collect();
    let log_value: f64 = kept.iter().map(|x| x.ln()).sum();
    DetPlus {
        value: log_value.exp(),
        log_value,
        rank: kept.len(),
        size: s.len(),
        cutoff,
        smallest_kept: kept.last().copied(),
        largest_dropped: s.iter().copied().find(|&x| x <= cutoff),
    }
}

/// Upper estimate of the operator norm.
pub fn operator_norm_upper(a: &DMatrix<Complex64>) -> f64 {
    let s = singular_values(a).first().copied().unwrap_or(0.0);
    s * (1.0 + NORM_SLACK) + 1e-12
}

/// The Galois conjugates of a matrix under `zeta_m -> zeta_m^k`.
#[derive(Debug, Clone)]
pub struct GaloisOrbit {
    pub base: CycMatrix,
    /// Units `k` mod the conductor, in increasing order, matching `conjugates`.
    pub units: Vec<u32>,
    pub conjugates: Vec<CycMatrix>,
    /// Number of distinct conjugates.
    pub size: usize,
    /// Upper estimate of the largest operator norm over the orbit.
    pub norm_bound: f64,
}

pub fn galois_orbit(a: &CycMatrix) -> GaloisOrbit {
    let units = units(a.conductor());
    let conjugates: Vec<CycMatrix> = units.iter().map(|&k| a.galois(k as i64)).collect();
    let mut distinct: Vec<&CycMatrix> = Vec::new();
    for c in &conjugates {
        if !distinct.contains(&c) {
            distinct.push(c);
        }
    }
    let size = distinct.len();
    let norm_bound = distinct
        .iter()
        .map(|c| operator_norm_upper(&c.to_dense()))
        .fold(0.0, f64::max);
    GaloisOrbit {
        base: a.clone(),
        units,
        conjugates,
        size,
        norm_bound,
    }
}

/// `C^(1 - d^2)`; a zero matrix has bound 1.
pub fn orbit_lower_bound(norm_bound: f64, orbit_size: usize) -> f64 {
    if norm_bound == 0.0 {
        return 1.0;
    }
    let d = orbit_size as f64;
    norm_bound.powf(1.0 - d * d)
}

pub fn galois_certificate_bound(orbit: &GaloisOrbit) -> f64 {
    orbit_lower_bound(orbit.norm_bound, orbit.size)
}

/// Relative slack allowed when comparing a computed root of a
/// pseudo-determinant against a certified lower bound.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub dim: usize,
    pub det_plus: DetPlus,
    /// `det_plus^(1/dim)`.
    pub root: f64,
    pub orbit_size: usize,
    pub norm_bound: f64,
    pub bound: f64,
    pub holds: bool,
    /// The matrix is zero, so the statement is vacuous.
    pub degenerate: bool,
}

/// Compares `det_plus(A)^(1/N)` with the orbit bound for a square matrix.
pub fn certify(a: &CycMatrix, threshold: RankThreshold) -> Result<Certificate, AlgError> {
    if !a.is_square() {
        return Err(AlgError::Dimension(format!(
            "certificate needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let orbit = galois_orbit(a);
    let bound = galois_certificate_bound(&orbit);
    Ok(certificate_from(
        a.rows(),
        det_plus(&a.to_dense(), threshold),
        orbit.size,
        orbit.norm_bound,
        bound,
        a.is_zero(),
    ))
}

fn certificate_from(
    dim: usize,
    dp: DetPlus,
    orbit_size: usize,
    norm_bound: f64,
    bound: f64,
    degenerate: bool,
) -> Certificate {
    let root = if dim == 0 {
        1.0
    } else {
        (dp.log_value / dim as f64).exp()
    };
    let holds = root >= bound * (1.0 - CERTIFICATE_TOLERANCE);
    Certificate {
        dim,
        det_plus: dp,
        root,
        orbit_size,
        norm_bound,
        bound,
        holds,
        degenerate,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiminfRow {
    pub index: usize,
    pub certificate: Certificate,
}

/// Per-index certificates for `P(X^(k))` plus one bound valid for every row.
#[derive(Debug, Clone, PartialEq)]
pub struct LiminfTable {
    pub rows: Vec<LiminfRow>,
    /// `C^(1 - d^2)` with `C`, `d` the largest seen over the sequence.
    pub uniform_bound: f64,
    pub max_orbit_size: usize,
    pub max_norm_bound: f64,
    pub all_hold: bool,
}

/// `evaluate` maps a microstate tuple to the matrix `P(X)`.
pub fn liminf_certificate<F>(
    sequence: &[Vec<CycMatrix>],
    evaluate: F,
    threshold: RankThreshold,
) -> Result<LiminfTable, AlgError>
where
    F: Fn(&[CycMatrix]) -> Result<CycMatrix, AlgError>,
{
    let mut values = Vec::with_capacity(sequence.len());
    let (mut d, mut c) = (1usize, 0.0f64);
    for x in sequence {
        let p = evaluate(x)?;
        if !p.is_square() {
            return Err(AlgError::Dimension(
                "polynomial value must be square".into(),
            ));
        }
        let orbit = galois_orbit(&p);
        d = d.max(orbit.size);
        c = c.max(orbit.norm_bound);
        values.push(p);
    }
    let uniform_bound = orbit_lower_bound(c, d);
    let mut rows = Vec::with_capacity(values.len());
    for (index, p) in values.iter().enumerate() {
        let dp = det_plus(&p.to_dense(), threshold);
        let cert = certificate_from(p.rows(), dp, d, c, uniform_bound, p.is_zero());
        rows.push(LiminfRow {
            index,
            certificate: cert,
        });
    }
    let all_hold = rows.iter().all(|r| r.certificate.holds);
    Ok(LiminfTable {
        rows,
        uniform_bound,
        max_orbit_size: d,
        max_norm_bound: c,
        all_hold,
    })
}
