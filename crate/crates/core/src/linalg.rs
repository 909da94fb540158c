//! Dense complex Hermitian linear algebra.
//!
//! Operators are small (a handful of dimensions), so everything is dense and
//! the eigensolver is a cyclic complex Jacobi sweep. Every spectral matrix
//! function goes through [`Spectrum`], which also fixes the rank cutoff used
//! for pseudo-inverses.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Entrywise tolerance for `A[i][j] == conj(A[j][i])`.
pub const TOL_HERM: f64 = 1e-10;

/// Relative rank cutoff: eigenvalues at or below `EPS_RANK_REL * max(eigenvalue)`
/// are outside the support.
pub const EPS_RANK_REL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Component magnitude below which an eigenvector entry is treated as zero
/// when fixing its phase.
const PHASE_PIVOT_TOL: f64 = 1e-8;

/// A square complex matrix that is Hermitian within [`TOL_HERM`].
///
/// The stored matrix is exactly Hermitian: construction replaces the input
/// with its Hermitian part once the tolerance check has passed.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    m: DMatrix<C64>,
}

/// Largest entrywise deviation `|A[i][j] - conj(A[j][i])|`.
pub fn hermiticity_residual(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).scale(0.5)
}

impl HermitianOperator {
    /// Validates shape, finiteness and Hermitian symmetry.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for row in 0..m.nrows() {
            for col in 0..m.ncols() {
                let z = m[(row, col)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        let residual = hermiticity_residual(&m);
        if residual > TOL_HERM {
            return Err(Error::NonHermitianInput { residual });
        }
        Ok(Self {
            m: hermitian_part(&m),
        })
    }

    /// Takes the Hermitian part of an arbitrary square matrix without checking
    /// how far it was from Hermitian.
    pub fn hermitian_part_of(m: &DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self {
            m: hermitian_part(m),
        }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            m: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(values[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// `|v⟩⟨v|` (not normalized).
    pub fn outer(v: &DVector<C64>) -> Self {
        Self { m: v * v.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            m: self.m.map(|z| z * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            m: &self.m + &other.m,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            m: &self.m - &other.m,
        }
    }

    /// `A + s·I`.
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.m.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += C64::new(s, 0.0);
        }
        Self { m }
    }

    /// `self · middle · self`, Hermitian by construction.
    pub fn sandwich(&self, middle: &Self) -> Self {
        Self::hermitian_part_of(&(&self.m * &middle.m * &self.m))
    }

    /// `U · self · U†` for a unitary (or any square) `u`.
    pub fn conjugate_by(&self, u: &DMatrix<C64>) -> Self {
        Self::hermitian_part_of(&(u * &self.m * u.adjoint()))
    }

    /// `⟨v|A|v⟩`, real for Hermitian `A`.
    pub fn expectation(&self, v: &DVector<C64>) -> f64 {
        (v.adjoint() * &self.m * v)[(0, 0)].re
    }

    pub fn eig(&self) -> Result<Spectrum> {
        eig(self)
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.eigenvalues[0])
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eig()?.eigenvalues.last().expect("dim >= 1"))
    }
}

/// Eigen-decomposition `A = V diag(λ) V†` with descending eigenvalues.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, in eigenvalue order.
    pub eigenvectors: DMatrix<C64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues at or below this value are outside the support.
    pub fn rank_cutoff(&self) -> f64 {
        EPS_RANK_REL * self.eigenvalues[0].max(0.0)
    }

    pub fn rank(&self) -> usize {
        let cut = self.rank_cutoff();
        self.eigenvalues.iter().filter(|&&l| l > cut).count()
    }

    /// `V diag(values) V†`.
    pub fn compose(&self, values: &[f64]) -> HermitianOperator {
        let v = &self.eigenvectors;
        let n = self.dim();
        let mut scaled = v.clone();
        for (j, &f) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= f;
            }
        }
        HermitianOperator::hermitian_part_of(&(scaled * v.adjoint()))
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.compose(&self.eigenvalues)
    }

    /// Applies `f` to every eigenvalue, or only to the support when
    /// `support_only` (everything else maps to zero).
    pub fn map(&self, f: impl Fn(f64) -> f64, support_only: bool) -> Result<HermitianOperator> {
        let cut = self.rank_cutoff();
        let mut values = Vec::with_capacity(self.dim());
        for &l in &self.eigenvalues {
            if support_only && (l <= cut || self.eigenvalues[0] <= 0.0) {
                values.push(0.0);
                continue;
            }
            let y = f(l);
            if !y.is_finite() {
                return Err(Error::DomainError { eigenvalue: l });
            }
            values.push(y);
        }
        Ok(self.compose(&values))
    }

    pub fn support_projector(&self) -> HermitianOperator {
        let cut = self.rank_cutoff();
        let positive = self.eigenvalues[0] > 0.0;
        let values: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if positive && l > cut { 1.0 } else { 0.0 })
            .collect();
        self.compose(&values)
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back in descending order (stable for ties) and every
/// eigenvector has its first component of magnitude above 1e-8 made real
/// and positive.
pub fn eig(a: &HermitianOperator) -> Result<Spectrum> {
    let n = a.dim();
    let mut m = a.m.clone();
    let mut v = DMatrix::<C64>::identity(n, n);
    let scale = a.frobenius_norm();

    let mut converged = n == 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= 1e-15 * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut eigenvectors = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let pivot = (0..n)
            .map(|i| v[(i, src)])
            .find(|z| z.norm() > PHASE_PIVOT_TOL)
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        for i in 0..n {
            eigenvectors[(i, dst)] = v[(i, src)] * phase;
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation zeroing `m[(p, q)]`; accumulates the rotation into `v`.
fn rotate(m: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize) {
    let g = m[(p, q)];
    let mag = g.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip rotations that cannot change anything at working precision.
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = C64::new(0.0, 0.0);
        m[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = g / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // W = diag(1, e^{-iφ}) · [[c, s], [-s, c]] acting on (p, q).
    let w_pp = C64::new(c, 0.0);
    let w_pq = C64::new(s, 0.0);
    let w_qp = phase.conj() * (-s);
    let w_qq = phase.conj() * c;

    let n = m.nrows();
    for k in 0..n {
        let kp = m[(k, p)];
        let kq = m[(k, q)];
        m[(k, p)] = kp * w_pp + kq * w_qp;
        m[(k, q)] = kp * w_pq + kq * w_qq;
    }
    for k in 0..n {
        let pk = m[(p, k)];
        let qk = m[(q, k)];
        m[(p, k)] = w_pp.conj() * pk + w_qp.conj() * qk;
        m[(q, k)] = w_pq.conj() * pk + w_qq.conj() * qk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
    for k in 0..n {
        let kp = v[(k, p)];
        let kq = v[(k, q)];
        v[(k, p)] = kp * w_pp + kq * w_qp;
        v[(k, q)] = kp * w_pq + kq * w_qq;
    }
}

/// `V f(Λ) V†`; see [`Spectrum::map`] for the support convention.
pub fn matfun(
    a: &HermitianOperator,
    f: impl Fn(f64) -> f64,
    support_only: bool,
) -> Result<HermitianOperator> {
    eig(a)?.map(f, support_only)
}

/// `Re Tr(AB)`.
pub fn trace_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a.m[(i, j)] * b.m[(j, i)];
        }
    }
    debug_assert!(
        acc.im.abs() <= 1e-9 * (1.0 + acc.re.abs()),
        "Tr(AB) of Hermitian operators has imaginary part {}",
        acc.im
    );
    Ok(acc.re)
}
