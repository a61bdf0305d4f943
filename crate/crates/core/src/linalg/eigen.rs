//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex64;

use super::Matrix;
use crate::error::{Error, Result};

/// Inputs whose `max |m - m^H|` exceeds this are rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default slack on the minimum eigenvalue for positive semidefiniteness.
pub const DEFAULT_PSD_TOL: f64 = 1e-10;

/// Sweeps stop once the off-diagonal Frobenius norm falls below this,
/// relative to `max(1, ‖m‖_F)`.
const OFF_DIAGONAL_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition `m = V diag(values) V^H`, values ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: Matrix,
}

impl Eigen {
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        let mut out = Matrix::zeros(n);
        for (k, &lambda) in self.values.iter().enumerate() {
            for r in 0..n {
                let vr = self.vectors[(r, k)] * lambda;
                for c in 0..n {
                    out[(r, c)] += vr * self.vectors[(c, k)].conj();
                }
            }
        }
        out
    }
}

fn check_hermitian(m: &Matrix) -> Result<()> {
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

fn symmetrized(m: &Matrix) -> Matrix {
    let n = m.dim();
    let mut a = m.clone();
    for r in 0..n {
        a[(r, r)] = Complex64::new(m[(r, r)].re, 0.0);
        for c in r + 1..n {
            let v = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            a[(r, c)] = v;
            a[(c, r)] = v.conj();
        }
    }
    a
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Runs Jacobi sweeps in place; accumulates rotations into `v` when given.
fn jacobi(a: &mut Matrix, mut v: Option<&mut Matrix>) -> Result<()> {
    let n = a.dim();
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);
    let mut off = off_diagonal_norm(a);
    let mut sweeps = 0;
    while off >= threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase-rotate q so the (p, q) entry is real, then apply a
                // real Givens rotation.
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let ph_conj = phase.conj();

                // A <- A J with J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs - akq * ph_conj * sn;
                    a[(k, q)] = akp * sn + akq * ph_conj * cs;
                }
                // A <- J^H A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs - aqk * phase * sn;
                    a[(q, k)] = apk * sn + aqk * phase * cs;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;

                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * cs - vkq * ph_conj * sn;
                        v[(k, q)] = vkp * sn + vkq * ph_conj * cs;
                    }
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(a);
    }
    Ok(())
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eigen(m: &Matrix) -> Result<Eigen> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut a = symmetrized(m);
    let mut v = Matrix::identity(n);
    jacobi(&mut a, Some(&mut v))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Matrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut a = symmetrized(m);
    jacobi(&mut a, None)?;
    let mut values: Vec<f64> = (0..m.dim()).map(|i| a[(i, i)].re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Ascending eigenvalues, computed per irreducible diagonal block.
///
/// Indices are grouped into connected components of the nonzero pattern of
/// `m`; the matrix is a direct sum of those principal submatrices, so the
/// spectrum is the union of the block spectra. Bell-diagonal states and their
/// partial transposes split into `d` blocks of size `d`.
pub fn blockwise_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for r in 0..n {
        for c in r + 1..n {
            if m[(r, c)].norm() != 0.0 || m[(c, r)].norm() != 0.0 {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if root_slot[root] == usize::MAX {
            root_slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_slot[root]].push(i);
    }

    let mut values = Vec::with_capacity(n);
    for idx in &blocks {
        if idx.len() == 1 {
            values.push(m[(idx[0], idx[0])].re);
            continue;
        }
        let k = idx.len();
        let mut sub = Matrix::zeros(k);
        for (a, &r) in idx.iter().enumerate() {
            for (b, &c) in idx.iter().enumerate() {
                sub[(a, b)] = m[(r, c)];
            }
        }
        let mut sub = symmetrized(&sub);
        jacobi(&mut sub, None)?;
        values.extend((0..k).map(|i| sub[(i, i)].re));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn min_eigenvalue(m: &Matrix) -> Result<f64> {
    Ok(blockwise_eigenvalues(m)?
        .first()
        .copied()
        .unwrap_or(0.0))
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd(m: &Matrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let mut m = Matrix::zeros(n);
        for r in 0..n {
            m[(r, r)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            for c in r + 1..n {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(r, c)] = z;
                m[(c, r)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn identity_spectrum() {
        assert_eq!(hermitian_eigenvalues(&Matrix::identity(5)).unwrap(), vec![1.0; 5]);
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let m = Matrix::from_real_diagonal(&[3.0, -1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let i = Complex64::new(0.0, 1.0);
        let y = Matrix::from_vec(2, vec![0.0.into(), -i, i, 0.0.into()]).unwrap();
        let e = hermitian_eigen(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-15);
    }

    #[test]
    fn reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 7, 16, 30] {
            let m = random_hermitian(n, &mut rng);
            let e = hermitian_eigen(&m).unwrap();
            assert!(e.reconstruct().max_abs_diff(&m) < 1e-12, "n = {n}");
            let vals = hermitian_eigenvalues(&m).unwrap();
            for (a, b) in vals.iter().zip(&e.values) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Matrix::identity(3);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(blockwise_eigenvalues(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn blockwise_matches_full_on_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(3, &mut rng);
        let b = random_hermitian(4, &mut rng);
        // interleave blocks: indices {0,2,4} for a, {1,3,5,6} for b
        let ia = [0, 2, 4];
        let ib = [1, 3, 5, 6];
        let mut m = Matrix::zeros(7);
        for (x, &r) in ia.iter().enumerate() {
            for (y, &c) in ia.iter().enumerate() {
                m[(r, c)] = a[(x, y)];
            }
        }
        for (x, &r) in ib.iter().enumerate() {
            for (y, &c) in ib.iter().enumerate() {
                m[(r, c)] = b[(x, y)];
            }
        }
        let full = hermitian_eigenvalues(&m).unwrap();
        let blocked = blockwise_eigenvalues(&m).unwrap();
        for (x, y) in full.iter().zip(&blocked) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn psd_verdicts() {
        assert!(is_psd(&Matrix::identity(4).scale(0.25), DEFAULT_PSD_TOL).unwrap());
        assert!(is_psd(&Matrix::zeros(4), DEFAULT_PSD_TOL).unwrap());
        assert!(!is_psd(&Matrix::from_real_diagonal(&[1.0, -1e-6]), DEFAULT_PSD_TOL).unwrap());
        assert_eq!(min_eigenvalue(&Matrix::from_real_diagonal(&[2.0, -0.5])).unwrap(), -0.5);
    }
}
