//! Dense complex linear algebra for small square matrices.
//!
//! Everything in this crate lives in dimensions of a few dozen at most, so the
//! routines here favour robustness over asymptotics: products are the naive
//! triple loop and the Hermitian eigensolver is a cyclic complex Jacobi
//! iteration, which converges quadratically and yields eigenvectors that are
//! unitary to machine precision.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Relative tolerance used to decide whether a matrix is Hermitian.
pub const HERMITIAN_RTOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl CMatrix {
    /// Builds a matrix from row-major entries. Rejects empty, non-square and
    /// non-finite input.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return invalid("matrix dimension must be at least 1");
        }
        if data.len() != dim * dim {
            return invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("matrix has non-finite entries");
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return invalid("rows must have equal length matching the row count");
            }
            data.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_vec(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(M + M*) / 2`
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// Entrywise deviation `‖M − M*‖_max`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Hermitian within `HERMITIAN_RTOL · max(1, ‖M‖_max)`.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_RTOL * self.max_abs().max(1.0)
    }

    fn ensure_hermitian(&self) -> Result<()> {
        let dev = self.hermitian_deviation();
        if dev <= HERMITIAN_RTOL * self.max_abs().max(1.0) {
            Ok(())
        } else {
            Err(Error::NotHermitian(dev))
        }
    }

    /// `⟨v|M|v⟩`
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            let mut row = ZERO;
            for j in 0..n {
                row += self[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        check_same_dim(self, rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    /// Max entrywise distance between two matrices of equal dimension.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

// The arithmetic operators panic on dimension mismatch; fallible callers go
// through `matmul` / `commutator` instead.
impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(-1.0)
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add_assign");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&CMatrix> for CMatrix {
    fn sub_assign(&mut self, rhs: &CMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub_assign");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

fn check_same_dim(x: &CMatrix, y: &CMatrix) -> Result<()> {
    if x.dim != y.dim {
        return Err(Error::DimensionMismatch(x.dim, y.dim));
    }
    Ok(())
}

/// Sum of a nonempty family of equally sized matrices.
pub fn sum<'a>(mut it: impl Iterator<Item = &'a CMatrix>) -> Option<CMatrix> {
    let mut acc = it.next()?.clone();
    for m in it {
        acc += m;
    }
    Some(acc)
}

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli() -> [CMatrix; 3] {
    let sx = CMatrix::from_vec(2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
    let sy = CMatrix::from_vec(2, vec![ZERO, -I, I, ZERO]).unwrap();
    let sz = CMatrix::from_vec(2, vec![ONE, ZERO, ZERO, -ONE]).unwrap();
    [sx, sy, sz]
}

/// Spectral decomposition `M = U diag(values) U*` of a Hermitian matrix.
/// Eigenvalues are sorted ascending; `vectors` holds eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Spectral radius, i.e. the operator norm of the decomposed matrix.
    pub fn max_abs(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Reassembles `U f(Λ) U*`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.vectors.dim();
        let u = &self.vectors;
        let lam: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (k, &l) in lam.iter().enumerate() {
                    if l != 0.0 {
                        acc += u[(i, k)] * u[(j, k)].conj() * l;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrized before iterating; inputs that are not Hermitian
/// within tolerance are rejected.
pub fn eigh(m: &CMatrix) -> Result<HermitianEigen> {
    m.ensure_hermitian()?;
    let mut a = m.hermitian_part();
    let n = a.dim;
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = f64::EPSILON * 0.5 * scale;

    let mut converged = n == 1 || scale == 0.0;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::Numerical(
            "Jacobi eigensolver did not converge".to_string(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[p,q]` with the unitary `J = diag(1, e^{-iφ}) · R(θ)`, where
/// the phase makes the pivot real and `R` is the classical real rotation.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase_conj = apq.conj() / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = phase_conj * (-s);
    let j_qq = phase_conj * c;

    let n = a.dim;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Operator norm (largest singular value).
///
/// Hermitian inputs use their spectrum directly; anything else goes through
/// `sqrt(λ_max(M*M))`.
pub fn op_norm(m: &CMatrix) -> Result<f64> {
    if m.is_hermitian() {
        return Ok(eigh(m)?.max_abs());
    }
    let gram = &m.adjoint() * m;
    Ok(eigh(&gram)?.max().max(0.0).sqrt())
}

/// `XY − YX`
pub fn commutator(x: &CMatrix, y: &CMatrix) -> Result<CMatrix> {
    check_same_dim(x, y)?;
    Ok(&(x * y) - &(y * x))
}

/// `‖[X, Y]‖` for Hermitian `X`, `Y`, computed from the spectrum of the
/// Hermitian matrix `i[X, Y]`.
pub fn commutator_norm(x: &CMatrix, y: &CMatrix) -> Result<f64> {
    check_same_dim(x, y)?;
    x.ensure_hermitian()?;
    y.ensure_hermitian()?;
    let c = commutator(x, y)?.scale_complex(I);
    Ok(eigh(&c)?.max_abs())
}

pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(eigh(m)?.min())
}

/// True iff the smallest eigenvalue of `m` is at least `-tol`.
pub fn psd_check(m: &CMatrix, tol: f64) -> Result<bool> {
    if tol.is_nan() || tol < 0.0 {
        return invalid("tolerance must be nonnegative");
    }
    Ok(min_eigenvalue(m)? >= -tol)
}

/// Frobenius-nearest positive semidefinite matrix.
pub fn project_psd(m: &CMatrix) -> Result<CMatrix> {
    clip_spectrum(m, 0.0, f64::INFINITY)
}

/// Projection onto the operator interval `lo·I ⪯ X ⪯ hi·I` (Frobenius).
pub fn clip_spectrum(m: &CMatrix, lo: f64, hi: f64) -> Result<CMatrix> {
    let e = eigh(m)?;
    if e.min() >= lo && e.max() <= hi {
        return Ok(m.hermitian_part());
    }
    Ok(e.reassemble(|l| l.clamp(lo, hi)))
}

/// `M^{-1/2}` for a positive definite `M`.
pub fn inverse_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let e = eigh(m)?;
    let floor = 1e-12 * e.max().abs().max(1e-300);
    if e.min() <= floor {
        return Err(Error::Numerical(format!(
            "matrix is singular or indefinite (min eigenvalue {:.3e})",
            e.min()
        )));
    }
    Ok(e.reassemble(|l| 1.0 / l.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let data = (0..n * n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        CMatrix::from_vec(n, data).unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        random_matrix(rng, n).hermitian_part()
    }

    // Power iteration on M² (an independent route to the spectral radius).
    fn power_iteration_norm(m: &CMatrix) -> f64 {
        let m2 = m * m;
        let n = m.dim();
        let mut v: Vec<Complex64> = (0..n).map(|k| c(1.0 + k as f64 * 0.37, 0.11 * k as f64)).collect();
        let mut lambda = 0.0;
        for _ in 0..20000 {
            let w: Vec<Complex64> = (0..n)
                .map(|i| (0..n).map(|j| m2[(i, j)] * v[j]).sum())
                .collect();
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = w.into_iter().map(|z| z / norm).collect();
            let next = m2.expectation(&v).re;
            if (next - lambda).abs() < 1e-16 {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.sqrt()
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(matches!(
            CMatrix::from_vec(0, vec![]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        assert!(CMatrix::from_vec(1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn op_norm_of_identity_and_diagonal() {
        assert_eq!(op_norm(&CMatrix::identity(2)).unwrap(), 1.0);
        let d = CMatrix::from_real_diagonal(&[0.3, -0.7]);
        assert!((op_norm(&d).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn op_norm_matches_power_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_hermitian(&mut rng, 4);
            let expected = power_iteration_norm(&m);
            assert!((op_norm(&m).unwrap() - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn op_norm_of_non_hermitian_uses_singular_values() {
        // [[0, 2], [0, 0]] has singular values 2 and 0.
        let m = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert!((op_norm(&m).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn op_norm_is_a_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 3);
            let n = random_matrix(&mut rng, 3);
            let alpha = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let lhs = op_norm(&m.scale_complex(alpha)).unwrap();
            assert!((lhs - alpha.norm() * op_norm(&m).unwrap()).abs() < 1e-10);
            let sum = op_norm(&(&m + &n)).unwrap();
            assert!(sum <= op_norm(&m).unwrap() + op_norm(&n).unwrap() + 1e-12);
        }
    }

    #[test]
    fn commutator_with_identity_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 3);
        let k = commutator(&CMatrix::identity(3), &m).unwrap();
        assert!(k.max_abs() < 1e-15);
    }

    #[test]
    fn pauli_commutator() {
        let [sx, sy, sz] = pauli();
        let k = commutator(&sz.scale(0.5), &sx.scale(0.5)).unwrap();
        let expected = sy.scale_complex(c(0.0, 0.5));
        assert!(k.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn commutator_matches_entrywise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_matrix(&mut rng, 3);
        let y = random_matrix(&mut rng, 3);
        let k = commutator(&x, &y).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ZERO;
                for l in 0..3 {
                    acc += x[(i, l)] * y[(l, j)] - y[(i, l)] * x[(l, j)];
                }
                assert!((k[(i, j)] - acc).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let r = commutator(&CMatrix::identity(2), &CMatrix::identity(3));
        assert_eq!(r.unwrap_err(), Error::DimensionMismatch(2, 3));
    }

    #[test]
    fn commutator_norm_cases() {
        let a = CMatrix::from_real_diagonal(&[1.0, 2.0]);
        let b = CMatrix::from_real_diagonal(&[-3.0, 0.5]);
        assert_eq!(commutator_norm(&a, &b).unwrap(), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = random_hermitian(&mut rng, 4);
            let y = random_hermitian(&mut rng, 4);
            let direct = op_norm(&commutator(&x, &y).unwrap()).unwrap();
            assert!((commutator_norm(&x, &y).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn commutator_norm_rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            commutator_norm(&m, &CMatrix::identity(2)),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn psd_check_cases() {
        assert!(psd_check(&CMatrix::zeros(2), 1e-9).unwrap());
        let d = CMatrix::from_real_diagonal(&[1.0, -1e-3]);
        assert!(!psd_check(&d, 1e-9).unwrap());
        let [sx, _, _] = pauli();
        let m = (&CMatrix::identity(2) + &sx.scale(0.999)).scale(0.5);
        assert!(psd_check(&m, 1e-9).unwrap());
        let e = eigh(&m).unwrap();
        assert!((e.values[0] - 0.0005).abs() < 1e-15);
        assert!((e.values[1] - 0.9995).abs() < 1e-15);
    }

    #[test]
    fn project_psd_cases() {
        let d = CMatrix::from_real_diagonal(&[1.0, -2.0]);
        let p = project_psd(&d).unwrap();
        assert!(p.max_abs_diff(&CMatrix::from_real_diagonal(&[1.0, 0.0])) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let r = random_matrix(&mut rng, 3);
        let psd = &r * &r.adjoint();
        assert!(project_psd(&psd).unwrap().max_abs_diff(&psd) < 1e-12);
    }

    #[test]
    fn project_psd_is_nearest_among_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = random_hermitian(&mut rng, 3);
        let p = project_psd(&m).unwrap();
        assert!(psd_check(&p, 1e-12).unwrap());
        let best = (&p - &m).frobenius_norm();
        for _ in 0..100 {
            let r = random_matrix(&mut rng, 3);
            let cand = &r * &r.adjoint();
            assert!(best <= (&cand - &m).frobenius_norm() + 1e-12);
        }
    }

    #[test]
    fn eigendecomposition_residual_up_to_dim_16() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for n in 1..=16 {
            let m = random_hermitian(&mut rng, n);
            let e = eigh(&m).unwrap();
            let rebuilt = e.reassemble(|l| l);
            let tol = 1e-9 * m.frobenius_norm().max(1.0);
            assert!((&m - &rebuilt).frobenius_norm() <= tol, "dim {n}");
            let u = &e.vectors;
            let gram = &u.adjoint() * u;
            assert!(gram.max_abs_diff(&CMatrix::identity(n)) < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let e = eigh(&CMatrix::identity(5).scale(0.25)).unwrap();
        assert!(e.values.iter().all(|&l| l == 0.25));
    }

    #[test]
    fn inverse_sqrt_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let r = random_matrix(&mut rng, 3);
        let s = &(&r * &r.adjoint()) + &CMatrix::identity(3);
        let h = inverse_sqrt(&s).unwrap();
        let back = &(&h * &s) * &h;
        assert!(back.max_abs_diff(&CMatrix::identity(3)) < 1e-12);
        assert!(inverse_sqrt(&CMatrix::from_real_diagonal(&[1.0, 0.0])).is_err());
    }
}
