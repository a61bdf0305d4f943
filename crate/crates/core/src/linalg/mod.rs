//! Dense complex linear algebra over square matrices.
//!
//! Tensor products use the convention that the first factor varies slowest:
//! the basis index of `a ⊗ b` is `i_a * dim(b) + i_b`. Every shape-dependent
//! operation in this module ([`partial_transpose`], [`partial_trace`]) reads
//! multi-indices the same way.

mod eigen;

pub use eigen::{
    blockwise_eigenvalues, hermitian_eigen, hermitian_eigenvalues, is_psd, min_eigenvalue,
    Eigen, DEFAULT_PSD_TOL, HERMITIAN_TOL,
};

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨w|`
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        assert_eq!(v.len(), w.len(), "outer product of unequal lengths");
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m[(i, j)] = vi * wj.conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: f64, other: &Matrix) {
        assert_eq!(self.dim, other.dim, "add_scaled dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨v|M|v⟩`
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let mv = self.apply(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |m - m^H|` entrywise.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `U M U^H`
    pub fn conjugate_by(&self, u: &Matrix) -> Matrix {
        u.matmul(self).matmul(&u.adjoint())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

/// Local dimensions of a tensor-product space, first factor slowest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorShape {
    factors: Vec<usize>,
}

impl TensorShape {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "tensor factors must be positive and nonempty, got {factors:?}"
            )));
        }
        Ok(Self { factors })
    }

    /// `count` copies of the local dimension `d`.
    pub fn uniform(d: usize, count: usize) -> Result<Self> {
        Self::new(vec![d; count])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().product()
    }

    /// Distance in flat index between consecutive values of factor `i`.
    fn stride(&self, i: usize) -> usize {
        self.factors[i + 1..].iter().product()
    }

    fn check(&self, m: &Matrix) -> Result<()> {
        if self.total_dim() != m.dim() {
            return Err(Error::ShapeMismatch {
                factors: self.factors.clone(),
                dim: m.dim(),
            });
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.factors.len() {
            return Err(Error::InvalidSubsystem {
                index,
                count: self.factors.len(),
            });
        }
        Ok(())
    }
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = Matrix::zeros(na * nb);
    for ar in 0..na {
        for ac in 0..na {
            let x = a[(ar, ac)];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for br in 0..nb {
                for bc in 0..nb {
                    out[(ar * nb + br, ac * nb + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Kronecker product of a sequence of matrices, left to right.
pub fn kron_all<'a, I>(mats: I) -> Matrix
where
    I: IntoIterator<Item = &'a Matrix>,
{
    mats.into_iter()
        .fold(Matrix::identity(1), |acc, m| kron(&acc, m))
}

/// Transposes the indices of one tensor factor.
pub fn partial_transpose(rho: &Matrix, shape: &TensorShape, subsystem: usize) -> Result<Matrix> {
    partial_transpose_many(rho, shape, &[subsystem])
}

/// Transposes the indices of every listed tensor factor.
pub fn partial_transpose_many(
    rho: &Matrix,
    shape: &TensorShape,
    subsystems: &[usize],
) -> Result<Matrix> {
    shape.check(rho)?;
    for &s in subsystems {
        shape.check_index(s)?;
    }
    let n = rho.dim();
    let mut out = rho.clone();
    for &s in subsystems {
        let stride = shape.stride(s);
        let f = shape.factors[s];
        let src = out.clone();
        for r in 0..n {
            let dr = (r / stride) % f;
            for c in 0..n {
                let dc = (c / stride) % f;
                let r2 = r - dr * stride + dc * stride;
                let c2 = c - dc * stride + dr * stride;
                out[(r2, c2)] = src[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Traces out every factor not listed in `keep`.
///
/// The kept factors appear in ascending order in the result.
pub fn partial_trace(rho: &Matrix, shape: &TensorShape, keep: &[usize]) -> Result<Matrix> {
    shape.check(rho)?;
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "partial_trace needs at least one kept factor".into(),
        ));
    }
    for &k in keep {
        shape.check_index(k)?;
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..shape.len()).filter(|i| !kept.contains(i)).collect();

    let digits = |idx: usize, which: &[usize]| -> usize {
        which.iter().fold(0, |acc, &f| {
            acc * shape.factors[f] + (idx / shape.stride(f)) % shape.factors[f]
        })
    };

    let out_dim: usize = kept.iter().map(|&k| shape.factors[k]).product();
    let mut out = Matrix::zeros(out_dim);
    let n = rho.dim();
    let traced_of: Vec<usize> = (0..n).map(|i| digits(i, &traced)).collect();
    let kept_of: Vec<usize> = (0..n).map(|i| digits(i, &kept)).collect();
    for r in 0..n {
        for c in 0..n {
            if traced_of[r] == traced_of[c] {
                out[(kept_of[r], kept_of[c])] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}
