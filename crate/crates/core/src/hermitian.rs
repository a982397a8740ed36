//! Dense complex matrices: certified inertia of Hermitian matrices by cyclic
//! Jacobi rotations, and a full-pivoting linear solver.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Width of the band around the zero threshold in which a classification is uncertain.
pub const UNCERTAIN_BAND: f64 = 16.0;

const HERMITIAN_TOL: f64 = 1e-9;
const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Self::from_row_major(r, c, rows.concat())
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
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

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.iter().map(Complex64::conj).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|&z| z * k).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::invalid("matrix shapes differ"));
        }
        Ok(Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::invalid("inner dimensions differ"));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::invalid("vector length differs from column count"));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.rows.min(self.cols) {
            for j in 0..=i {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Signature and nullity of a Hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InertiaResult {
    pub signature: i64,
    pub nullity: usize,
    /// False when some eigenvalue falls inside the uncertainty band around the threshold.
    pub certified: bool,
    /// Smallest `|lambda| / scale` among eigenvalues classified nonzero (infinite if none).
    pub min_gap: f64,
}

impl InertiaResult {
    pub fn positive(&self, dim: usize) -> usize {
        let nonzero = dim - self.nullity;
        ((nonzero as i64 + self.signature) / 2) as usize
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(jacobi(m))
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * m.norm_inf() {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

fn jacobi(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows;
    let mut a = m.clone();
    // start from the exactly Hermitian part
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in 0..i {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let norm = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return vec![0.0; n];
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_TOL * norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }
    (0..n).map(|i| a[(i, i)].re).collect()
}

/// Annihilates entry `(p, q)` with a phase change followed by a real plane rotation.
fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows;
    let b = a[(p, q)];
    let apq = b.norm();
    if apq == 0.0 {
        return;
    }
    let e = b / apq;
    for r in 0..n {
        a[(r, q)] *= e.conj();
    }
    for r in 0..n {
        a[(q, r)] *= e;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    for r in 0..n {
        let (arp, arq) = (a[(r, p)], a[(r, q)]);
        a[(r, p)] = arp * c - arq * s;
        a[(r, q)] = arp * s + arq * c;
    }
    for r in 0..n {
        let (apr, aqr) = (a[(p, r)], a[(q, r)]);
        a[(p, r)] = apr * c - aqr * s;
        a[(q, r)] = apr * s + aqr * c;
    }
    a[(p, q)] = Complex64::zero();
    a[(q, p)] = Complex64::zero();
    a[(p, p)] = Complex64::new(app - t * apq, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * apq, 0.0);
}

/// Inertia with the zero threshold `tau * ||M||_inf`.
pub fn inertia(m: &ComplexMatrix, tau: f64) -> Result<InertiaResult> {
    inertia_scaled(m, tau, m.norm_inf())
}

/// Inertia with the zero threshold `tau * scale`.
///
/// `scale` should bound the round-off magnitude of the entries; callers that
/// assemble a matrix from cancelling sums pass the sum of absolute contributions.
pub fn inertia_scaled(m: &ComplexMatrix, tau: f64, scale: f64) -> Result<InertiaResult> {
    if !(tau > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let eig = hermitian_eigenvalues(m)?;
    Ok(classify(&eig, tau, scale))
}

fn classify(eig: &[f64], tau: f64, scale: f64) -> InertiaResult {
    let thr = tau * scale;
    let (lo, hi) = (thr / UNCERTAIN_BAND, thr * UNCERTAIN_BAND);
    let mut res = InertiaResult {
        signature: 0,
        nullity: 0,
        certified: true,
        min_gap: f64::INFINITY,
    };
    for &l in eig {
        if l.abs() > lo && l.abs() < hi {
            res.certified = false;
        }
        if l > thr {
            res.signature += 1;
        } else if l < -thr {
            res.signature -= 1;
        } else {
            res.nullity += 1;
            continue;
        }
        if scale > 0.0 {
            res.min_gap = res.min_gap.min(l.abs() / scale);
        }
    }
    res
}

/// Exact signature and nullity of a symmetric integer matrix.
pub fn integer_inertia(m: &[Vec<i64>]) -> Result<(i64, usize)> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::NonSquare {
            rows: n,
            cols: m.first().map_or(0, Vec::len),
        });
    }
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::NotHermitian {
                    defect: (m[i][j] - m[j][i]).abs() as f64,
                });
            }
        }
    }
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut sig, mut nul) = (0i64, 0usize);
    // symmetric Gaussian elimination by congruences
    while let Some(&k) = active.first() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let k = match pivot {
            Some(p) => p,
            None => match active.iter().skip(1).copied().find(|&j| !a[k][j].is_zero()) {
                Some(j) => {
                    // replace e_k by e_k + e_j: the new diagonal entry is 2 a_kj
                    for r in 0..n {
                        let v = a[r][j].clone();
                        a[r][k] += v;
                    }
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    k
                }
                None => {
                    if active.iter().all(|&j| a[k][j].is_zero()) {
                        nul += 1;
                        active.retain(|&x| x != k);
                        continue;
                    }
                    unreachable!("row with nonzero entry outside active set");
                }
            },
        };
        let d = a[k][k].clone();
        if d.is_positive() {
            sig += 1;
        } else {
            sig -= 1;
        }
        active.retain(|&x| x != k);
        for &i in &active {
            let f = &a[i][k] / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
            a[i][k] = BigRational::zero();
        }
        for &j in &active {
            a[k][j] = BigRational::zero();
        }
    }
    Ok((sig, nul))
}

/// Outcome of [`solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Unique(Vec<Complex64>),
    NoSolution,
    NonUnique {
        particular: Vec<Complex64>,
        kernel: Vec<Vec<Complex64>>,
    },
}

/// Solves `M x = b` by Gauss-Jordan elimination with full pivoting; pivots
/// below `tau * max|M_ij|` count as zero.
pub fn solve(m: &ComplexMatrix, b: &[Complex64], tau: f64) -> Result<Solution> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if b.len() != n {
        return Err(Error::invalid(format!(
            "right-hand side has length {}, expected {n}",
            b.len()
        )));
    }
    let mut a = m.clone();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let pivot_tol = tau * m.max_abs();
    let mut rank = 0;
    for k in 0..n {
        let mut best = (k, k, 0.0);
        for i in k..n {
            for j in k..n {
                let v = a[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 == 0.0 || best.2 <= pivot_tol {
            break;
        }
        let (pi, pj, _) = best;
        if pi != k {
            for c in 0..n {
                a.data.swap(k * n + c, pi * n + c);
            }
            rhs.swap(k, pi);
        }
        if pj != k {
            for r in 0..n {
                a.data.swap(r * n + k, r * n + pj);
            }
            perm.swap(k, pj);
        }
        let inv = a[(k, k)].inv();
        for c in 0..n {
            a[(k, c)] *= inv;
        }
        rhs[k] *= inv;
        for r in 0..n {
            if r == k {
                continue;
            }
            let f = a[(r, k)];
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = a[(k, c)];
                a[(r, c)] -= f * v;
            }
            let v = rhs[k];
            rhs[r] -= f * v;
        }
        rank += 1;
    }
    let b_norm = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let consistency_tol = tau * b_norm * n.max(1) as f64;
    if rhs[rank..].iter().any(|z| z.norm() > consistency_tol) {
        return Ok(Solution::NoSolution);
    }
    let mut particular = vec![Complex64::zero(); n];
    for k in 0..rank {
        particular[perm[k]] = rhs[k];
    }
    if rank == n {
        return Ok(Solution::Unique(particular));
    }
    let kernel = (rank..n)
        .map(|f| {
            let mut v = vec![Complex64::zero(); n];
            v[perm[f]] = Complex64::new(1.0, 0.0);
            for k in 0..rank {
                v[perm[k]] = -a[(k, f)];
            }
            v
        })
        .collect();
    Ok(Solution::NonUnique { particular, kernel })
}
