//! Elements of `Z[zeta_m]` in the power basis modulo the cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;

use crate::AlgError;

/// Largest conductor accepted by the arithmetic unless a caller raises it.
pub const DEFAULT_MAX_CONDUCTOR: u32 = 360;

/// Conductors congruent to 2 mod 4 describe the same ring as half of them.
pub(crate) fn normalize_conductor(m: u32) -> u32 {
    if m % 4 == 2 {
        m / 2
    } else {
        m
    }
}

/// Representatives of `(Z/mZ)*`, starting with 1.
pub fn units(m: u32) -> Vec<u32> {
    if m <= 2 {
        return vec![1];
    }
    (1..m).filter(|k| k.gcd(&m) == 1).collect()
}

/// Cyclotomic polynomial data for one conductor.
#[derive(Debug)]
pub(crate) struct Field {
    pub m: u32,
    pub degree: usize,
    /// Monic minimal polynomial, lowest coefficient first.
    modulus: Vec<i64>,
    /// `zeta^j` reduced, for `j < m`.
    powers: Vec<Vec<i64>>,
}

impl Field {
    fn build(m: u32) -> Field {
        let modulus = cyclotomic_polynomial(m);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        for j in 0..m as usize {
            let mut raw = vec![0i64; j + 1];
            raw[j] = 1;
            powers.push(reduce_with(&modulus, raw));
        }
        Field {
            m,
            degree,
            modulus,
            powers,
        }
    }

    pub fn reduce(&self, raw: Vec<i64>) -> Vec<i64> {
        reduce_with(&self.modulus, raw)
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
            return vec![0; self.degree];
        }
        let mut raw = vec![0i64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                raw[i + j] += x * y;
            }
        }
        self.reduce(raw)
    }

    /// `zeta^k` reduced.
    pub fn power(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.m as i64) as usize]
    }

    /// Image of `sum a_j zeta^j` under `zeta -> zeta^k`.
    pub fn galois(&self, a: &[i64], k: i64) -> Vec<i64> {
        let mut out = vec![0i64; self.degree];
        for (j, &x) in a.iter().enumerate() {
            if x != 0 {
                for (o, p) in out.iter_mut().zip(self.power(j as i64 * k)) {
                    *o += x * p;
                }
            }
        }
        out
    }

    pub fn embed(&self, a: &[i64], k: i64) -> Complex64 {
        let base = std::f64::consts::TAU * k as f64 / self.m as f64;
        a.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(j, &x)| Complex64::from_polar(x as f64, base * j as f64))
            .sum()
    }
}

fn reduce_with(modulus: &[i64], mut raw: Vec<i64>) -> Vec<i64> {
    let deg = modulus.len() - 1;
    while raw.len() > deg {
        let top = raw.pop().expect("nonempty");
        if top != 0 {
            let shift = raw.len() - deg;
            for (i, &c) in modulus[..deg].iter().enumerate() {
                raw[shift + i] -= top * c;
            }
        }
    }
    raw.resize(deg, 0);
    raw
}

/// Divides by monic `d`, assuming exact divisibility.
fn div_exact(num: &[i64], d: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = d.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &x) in d.iter().enumerate() {
            rem[i + j] -= c * x;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            p = div_exact(&p, &field(d).modulus);
        }
    }
    p
}

pub(crate) fn field(m: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("field cache").get(&m) {
        return f.clone();
    }
    // built outside the lock: construction recurses into smaller conductors
    let f = Arc::new(Field::build(m));
    cache
        .lock()
        .expect("field cache")
        .entry(m)
        .or_insert(f)
        .clone()
}

/// Solves for coordinates of an element of `Z[zeta_m]` in the power basis of
/// a subring `Z[zeta_d]`.
struct Subfield {
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    inverse: Vec<Vec<Ratio<i128>>>,
}

impl Subfield {
    fn build(m: u32, d: u32) -> Subfield {
        let big = field(m);
        let small = field(d);
        let step = (m / d) as i64;
        let rows: Vec<Vec<i64>> = (0..small.degree)
            .map(|i| big.power(i as i64 * step).to_vec())
            .collect();
        let r = rows.len();
        let mut work: Vec<Vec<Ratio<i128>>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| Ratio::from_integer(x as i128))
                    .collect()
            })
            .collect();
        let mut pivots = Vec::with_capacity(r);
        let mut rank = 0;
        for col in 0..big.degree {
            if rank == r {
                break;
            }
            let Some(p) = (rank..r).find(|&i| work[i][col] != Ratio::from_integer(0)) else {
                continue;
            };
            work.swap(rank, p);
            let lead = work[rank][col];
            for x in work[rank].iter_mut() {
                *x /= lead;
            }
            for i in 0..r {
                if i != rank {
                    let f = work[i][col];
                    if f != Ratio::from_integer(0) {
                        let pivot_row = work[rank].clone();
                        for (x, y) in work[i].iter_mut().zip(pivot_row) {
                            *x -= f * y;
                        }
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        assert_eq!(rank, r, "power basis of a subfield is independent");
        // invert the square block of `rows` on the pivot columns
        let mut aug: Vec<Vec<Ratio<i128>>> = (0..r)
            .map(|i| {
                let mut v: Vec<Ratio<i128>> = pivots
                    .iter()
                    .map(|&c| Ratio::from_integer(rows[i][c] as i128))
                    .collect();
                v.extend((0..r).map(|j| Ratio::from_integer((i == j) as i128)));
                v
            })
            .collect();
        for col in 0..r {
            let p = (col..r)
                .find(|&i| aug[i][col] != Ratio::from_integer(0))
                .expect("invertible");
            aug.swap(col, p);
            let lead = aug[col][col];
            for x in aug[col].iter_mut() {
                *x /= lead;
            }
            for i in 0..r {
                if i != col {
                    let f = aug[i][col];
                    if f != Ratio::from_integer(0) {
                        let pivot_row = aug[col].clone();
                        for (x, y) in aug[i].iter_mut().zip(pivot_row) {
                            *x -= f * y;
                        }
                    }
                }
            }
        }
        let inverse = aug.into_iter().map(|row| row[r..].to_vec()).collect();
        Subfield {
            rows,
            pivots,
            inverse,
        }
    }

    /// Coordinates `c` with `c . rows = x`, if they exist and are integral.
    fn solve(&self, x: &[i64]) -> Option<Vec<i64>> {
        let r = self.rows.len();
        let mut c = Vec::with_capacity(r);
        for j in 0..r {
            let mut acc = Ratio::from_integer(0i128);
            for (i, &p) in self.pivots.iter().enumerate() {
                if x[p] != 0 {
                    acc += self.inverse[i][j] * Ratio::from_integer(x[p] as i128);
                }
            }
            if !acc.is_integer() {
                return None;
            }
            c.push(i64::try_from(acc.to_integer()).ok()?);
        }
        let mut back = vec![0i64; x.len()];
        for (ci, row) in c.iter().zip(&self.rows) {
            for (b, v) in back.iter_mut().zip(row) {
                *b += ci * v;
            }
        }
        (back == x).then_some(c)
    }
}

fn subfield(m: u32, d: u32) -> Arc<Subfield> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Subfield>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("subfield cache").get(&(m, d)) {
        return s.clone();
    }
    let s = Arc::new(Subfield::build(m, d));
    cache
        .lock()
        .expect("subfield cache")
        .entry((m, d))
        .or_insert(s)
        .clone()
}

/// Normalized proper divisors of `m`, ascending.
pub(crate) fn smaller_conductors(m: u32) -> Vec<u32> {
    (1..m).filter(|d| m % d == 0 && d % 4 != 2).collect()
}

/// Rewrites an element at conductor `m` over `Z[zeta_d]`, if it lies there.
pub(crate) fn descend(m: u32, d: u32, coeffs: &[i64]) -> Option<Vec<i64>> {
    if d == m {
        return Some(coeffs.to_vec());
    }
    subfield(m, d).solve(coeffs)
}

/// Rewrites an element at conductor `d` over `Z[zeta_m]` for `d | m`.
pub(crate) fn promote(d: u32, m: u32, coeffs: &[i64]) -> Vec<i64> {
    if d == m {
        return coeffs.to_vec();
    }
    let big = field(m);
    let step = (m / d) as i64;
    let mut out = vec![0i64; big.degree];
    for (j, &x) in coeffs.iter().enumerate() {
        if x != 0 {
            for (o, p) in out.iter_mut().zip(big.power(j as i64 * step)) {
                *o += x * p;
            }
        }
    }
    out
}

/// A cyclotomic integer, stored at the smallest conductor whose ring holds it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    conductor: u32,
    coeffs: Vec<i64>,
}

impl CycInt {
    pub fn zero() -> CycInt {
        CycInt {
            conductor: 1,
            coeffs: vec![0],
        }
    }

    pub fn one() -> CycInt {
        CycInt::from_int(1)
    }

    pub fn from_int(a: i64) -> CycInt {
        CycInt {
            conductor: 1,
            coeffs: vec![a],
        }
    }

    /// `zeta_m^k` with `zeta_m = exp(2 pi i / m)`.
    pub fn root_of_unity(m: u32, k: i64) -> Result<CycInt, AlgError> {
        let mut c = vec![0i64; (k.rem_euclid(m.max(1) as i64) + 1) as usize];
        *c.last_mut().expect("nonempty") = 1;
        CycInt::from_coeffs(m, &c)
    }

    /// `sum_j coeffs[j] zeta_m^j`; any length, any conductor up to the default cap.
    pub fn from_coeffs(m: u32, coeffs: &[i64]) -> Result<CycInt, AlgError> {
        CycInt::from_coeffs_capped(m, coeffs, DEFAULT_MAX_CONDUCTOR)
    }

    pub fn from_coeffs_capped(m: u32, coeffs: &[i64], cap: u32) -> Result<CycInt, AlgError> {
        if m == 0 {
            return Err(AlgError::Input("conductor must be positive".into()));
        }
        let n = normalize_conductor(m);
        if n > cap {
            return Err(AlgError::Resource(format!(
                "conductor {m} exceeds the maximum {cap}"
            )));
        }
        let f = field(n);
        let mut acc = vec![0i64; f.degree];
        for (j, &x) in coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let j = (j as u32 % m) as i64;
            // zeta_m = -zeta_n^((n+1)/2) when m = 2n with n odd
            let (sign, k) = if n == m {
                (1, j)
            } else {
                (if j % 2 == 0 { 1 } else { -1 }, j * ((n as i64 + 1) / 2))
            };
            for (a, p) in acc.iter_mut().zip(f.power(k)) {
                *a += sign * x * p;
            }
        }
        Ok(CycInt::lowest(n, acc))
    }

    /// Moves an element given at conductor `m` down to its own conductor.
    pub(crate) fn lowest(m: u32, coeffs: Vec<i64>) -> CycInt {
        for d in smaller_conductors(m) {
            if let Some(c) = descend(m, d, &coeffs) {
                return CycInt {
                    conductor: d,
                    coeffs: c,
                };
            }
        }
        CycInt {
            conductor: m,
            coeffs,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coefficients at the stored conductor.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficients at a conductor that is a multiple of this element's own.
    pub fn coeffs_at(&self, m: u32) -> Result<Vec<i64>, AlgError> {
        let m = normalize_conductor(m);
        if m % self.conductor != 0 {
            return Err(AlgError::Input(format!(
                "conductor {} does not divide {m}",
                self.conductor
            )));
        }
        Ok(promote(self.conductor, m, &self.coeffs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0)
    }

    pub fn as_integer(&self) -> Option<i64> {
        (self.conductor == 1).then(|| self.coeffs[0])
    }

    fn binary(
        &self,
        other: &CycInt,
        cap: u32,
        op: impl Fn(&Field, &[i64], &[i64]) -> Vec<i64>,
    ) -> Result<CycInt, AlgError> {
        let m = self.conductor.lcm(&other.conductor);
        if m > cap {
            return Err(AlgError::Resource(format!(
                "conductor {m} exceeds the maximum {cap}"
            )));
        }
        let f = field(m);
        let a = promote(self.conductor, m, &self.coeffs);
        let b = promote(other.conductor, m, &other.coeffs);
        Ok(CycInt::lowest(m, op(&f, &a, &b)))
    }

    pub fn try_add(&self, other: &CycInt) -> Result<CycInt, AlgError> {
        self.binary(other, DEFAULT_MAX_CONDUCTOR, |_, a, b| {
            a.iter().zip(b).map(|(x, y)| x + y).collect()
        })
    }

    pub fn try_sub(&self, other: &CycInt) -> Result<CycInt, AlgError> {
        self.binary(other, DEFAULT_MAX_CONDUCTOR, |_, a, b| {
            a.iter().zip(b).map(|(x, y)| x - y).collect()
        })
    }

    pub fn try_mul(&self, other: &CycInt) -> Result<CycInt, AlgError> {
        self.binary(other, DEFAULT_MAX_CONDUCTOR, |f, a, b| f.mul(a, b))
    }

    pub fn scale(&self, k: i64) -> CycInt {
        CycInt::lowest(self.conductor, self.coeffs.iter().map(|x| x * k).collect())
    }

    pub fn pow(&self, e: u32) -> CycInt {
        let f = field(self.conductor);
        let mut acc = f.power(0).to_vec();
        for _ in 0..e {
            acc = f.mul(&acc, &self.coeffs);
        }
        CycInt::lowest(self.conductor, acc)
    }

    /// Image under the automorphism `zeta_m -> zeta_m^k`; `k` must be a unit mod the conductor.
    pub fn galois(&self, k: i64) -> CycInt {
        let f = field(self.conductor);
        CycInt {
            conductor: self.conductor,
            coeffs: f.galois(&self.coeffs, k),
        }
    }

    pub fn conj(&self) -> CycInt {
        self.galois(-1)
    }

    /// Value at `zeta_m = exp(2 pi i / m)`.
    pub fn to_complex(&self) -> Complex64 {
        field(self.conductor).embed(&self.coeffs, 1)
    }
}

impl Default for CycInt {
    fn default() -> Self {
        CycInt::zero()
    }
}

impl From<i64> for CycInt {
    fn from(a: i64) -> Self {
        CycInt::from_int(a)
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl std::ops::$tr for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$try(rhs).expect("conductor within the default cap")
            }
        }
        impl std::ops::$tr for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl std::ops::Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

impl std::ops::Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Integers print plainly, everything else as `c(m; a0,a1,...)`.
impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.as_integer() {
            return write!(f, "{a}");
        }
        let body: Vec<String> = self.coeffs.iter().map(|x| x.to_string()).collect();
        write!(f, "c({}; {})", self.conductor, body.join(","))
    }
}

impl FromStr for CycInt {
    type Err = AlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || AlgError::Input(format!("not a cyclotomic integer: `{s}`"));
        if let Ok(a) = s.parse::<i64>() {
            return Ok(CycInt::from_int(a));
        }
        let inner = s
            .strip_prefix("c(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (m, rest) = inner.split_once(';').ok_or_else(bad)?;
        let m: u32 = m.trim().parse().map_err(|_| bad())?;
        let coeffs = rest
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        CycInt::from_coeffs(m, &coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32, k: i64) -> CycInt {
        CycInt::root_of_unity(m, k).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
        // famous first coefficient outside {-1,0,1}
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn small_identities() {
        assert_eq!(z(3, 1) + z(3, 2), CycInt::from_int(-1));
        assert_eq!(z(4, 1).pow(2), CycInt::from_int(-1));
        assert_eq!(z(6, 1) * z(6, 5), CycInt::one());
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(z(2, 1), CycInt::from_int(-1));
        assert_eq!(z(12, 3), z(4, 1));
        assert_eq!(z(12, 3).conductor(), 4);
    }

    #[test]
    fn descends_to_real_subfields() {
        // zeta_8 + zeta_8^7 = sqrt 2 lives at conductor 8, but zeta_8^2 lives at 4
        let s = z(8, 1) + z(8, 7);
        assert_eq!(s.conductor(), 8);
        assert_eq!((&s * &s), CycInt::from_int(2));
        assert_eq!(z(8, 2).conductor(), 4);
        // zeta_5 + zeta_5^4 is real but still needs conductor 5
        let g = z(5, 1) + z(5, 4);
        assert_eq!(g.conductor(), 5);
        assert!((g.to_complex().re - 2.0 * (std::f64::consts::TAU / 5.0).cos()).abs() < 1e-14);
    }

    #[test]
    fn galois_and_conjugation_agree_with_embeddings() {
        let x = CycInt::from_coeffs(12, &[2, -1, 0, 3, 1]).unwrap();
        assert!((x.conj().to_complex() - x.to_complex().conj()).norm() < 1e-12);
        for k in units(x.conductor()) {
            let direct = field(x.conductor()).embed(x.coeffs(), k as i64);
            assert!((x.galois(k as i64).to_complex() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn parse_and_display() {
        let x: CycInt = "c(3; 1,2)".parse().unwrap();
        assert_eq!(x.to_string(), "c(3; 1,2)");
        assert_eq!("7".parse::<CycInt>().unwrap(), CycInt::from_int(7));
        assert_eq!("c(6; 0,1)".parse::<CycInt>().unwrap(), z(6, 1));
        assert!("c(3 1)".parse::<CycInt>().is_err());
    }

    #[test]
    fn conductor_cap_is_a_resource_error() {
        assert!(matches!(
            CycInt::from_coeffs(361, &[0, 1]),
            Err(AlgError::Resource(_))
        ));
        assert!(matches!(
            z(16, 1).try_mul(&z(45, 1)),
            Err(AlgError::Resource(_))
        ));
        assert_eq!(z(8, 1).try_mul(&z(45, 1)).unwrap().conductor(), 360);
    }
}
