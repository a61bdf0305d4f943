//! Weyl operators, Bell projectors and states of the magic simplex.
//!
//! `W_{k,l}|s⟩ = w^{k(s-l)} |s-l⟩` with `w = e^{2πi/d}`, and the Bell vertices
//! are `P_{k,l} = (1 ⊗ W_{k,l}) P_{0,0} (1 ⊗ W_{k,l})^†` where `P_{0,0}`
//! projects onto the normalised `|Φ+⟩ = Σ_i |ii⟩ / √d`. Coefficient arrays
//! are indexed `c[k * d + l]`.
//!
//! The n-pair lift uses tensor factors ordered `A_1, B_1, A_2, B_2, …`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, Matrix, TensorShape};

/// Largest total Hilbert-space dimension the multipartite builders accept.
pub const MULTIPARTITE_DIM_LIMIT: usize = 100;

const NORMALIZATION_TOL: f64 = 1e-12;

/// Label `(k, l)` of a Weyl operator, both reduced mod `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylLabel {
    pub k: usize,
    pub l: usize,
}

impl WeylLabel {
    pub fn new(d: usize, k: usize, l: usize) -> Result<Self> {
        if k >= d || l >= d {
            return Err(Error::InvalidParameter(format!(
                "Weyl label ({k}, {l}) out of range for d = {d}"
            )));
        }
        Ok(Self { k, l })
    }

    /// All `d²` labels in `(k, l)` lexicographic order.
    pub fn all(d: usize) -> impl Iterator<Item = WeylLabel> {
        (0..d).flat_map(move |k| (0..d).map(move |l| WeylLabel { k, l }))
    }

    pub fn index(&self, d: usize) -> usize {
        self.k * d + self.l
    }
}

fn root_of_unity(d: usize, power: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (power % d) as f64 / d as f64)
}

pub fn weyl(d: usize, label: WeylLabel) -> Matrix {
    let mut w = Matrix::zeros(d);
    for s in 0..d {
        let target = (s + d - label.l % d) % d;
        w[(target, s)] = root_of_unity(d, label.k * target);
    }
    w
}

/// `|Φ+⟩ = Σ_i |ii⟩ / √d`
pub fn bell_state(d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = Complex64::new(amp, 0.0);
    }
    v
}

/// `(1 ⊗ W_{k,l}) |Φ+⟩ = Σ_a w^{k(a-l)} |a, a-l⟩ / √d`
pub fn bell_vector(d: usize, label: WeylLabel) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for a in 0..d {
        let b = (a + d - label.l % d) % d;
        v[a * d + b] = root_of_unity(d, label.k * b) * amp;
    }
    v
}

pub fn bell_projector(d: usize, label: WeylLabel) -> Matrix {
    let v = bell_vector(d, label);
    Matrix::outer(&v, &v)
}

/// Real weights `c_{k,l}` summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexCoefficients {
    d: usize,
    c: Vec<f64>,
}

impl SimplexCoefficients {
    pub fn new(d: usize, c: Vec<f64>) -> Result<Self> {
        if c.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: c.len(),
            });
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        let sum: f64 = c.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { d, c })
    }

    pub fn uniform(d: usize) -> Self {
        Self {
            d,
            c: vec![1.0 / (d * d) as f64; d * d],
        }
    }

    pub fn vertex(d: usize, label: WeylLabel) -> Self {
        let mut c = vec![0.0; d * d];
        c[label.index(d)] = 1.0;
        Self { d, c }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }

    pub fn get(&self, label: WeylLabel) -> f64 {
        self.c[label.index(self.d)]
    }

    pub fn min(&self) -> f64 {
        self.c.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Inside the simplex: every weight nonnegative (up to `tol`).
    pub fn is_member(&self, tol: f64) -> bool {
        self.min() >= -tol
    }

    /// Affine combination `λ self + (1 − λ) other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Ok(Self { d: self.d, c })
    }
}

/// `Σ c_{k,l} P_{k,l}`.
///
/// Entries come from the closed form
/// `⟨a, a-l| ρ |a', a'-l⟩ = (1/d) Σ_k c_{k,l} w^{k(a-a')}`; every other entry
/// is exactly zero.
pub fn simplex_state(coeffs: &SimplexCoefficients) -> Matrix {
    let d = coeffs.d;
    let inv_d = 1.0 / d as f64;
    let mut rho = Matrix::zeros(d * d);
    for l in 0..d {
        for a in 0..d {
            let row = a * d + (a + d - l) % d;
            for a2 in 0..d {
                let col = a2 * d + (a2 + d - l) % d;
                let diff = (a + d - a2) % d;
                let entry: Complex64 = (0..d)
                    .map(|k| root_of_unity(d, k * diff) * coeffs.c[k * d + l])
                    .sum();
                rho[(row, col)] = entry * inv_d;
            }
        }
    }
    rho
}

/// `F[l][δ] = (1/d) Σ_k c_{k,l} w^{kδ}`, the distinct entries of a simplex state.
fn shift_profile(coeffs: &SimplexCoefficients) -> Vec<Complex64> {
    let d = coeffs.d;
    let inv_d = 1.0 / d as f64;
    let mut f = vec![Complex64::new(0.0, 0.0); d * d];
    for l in 0..d {
        for delta in 0..d {
            let sum: Complex64 = (0..d)
                .map(|k| root_of_unity(d, k * delta) * coeffs.c[k * d + l])
                .sum();
            f[l * d + delta] = sum * inv_d;
        }
    }
    f
}

/// Diagonal blocks of a simplex state, one per shift `l`, indexed by `a` on
/// the basis vectors `|a, a−l⟩`. Each block is circulant with spectrum
/// `{c_{k,l}}_k`.
pub fn state_blocks(coeffs: &SimplexCoefficients) -> Vec<Matrix> {
    let d = coeffs.d;
    let f = shift_profile(coeffs);
    (0..d)
        .map(|l| {
            let mut m = Matrix::zeros(d);
            for a in 0..d {
                for a2 in 0..d {
                    m[(a, a2)] = f[l * d + (a + d - a2) % d];
                }
            }
            m
        })
        .collect()
}

/// Diagonal blocks of the partial transpose on the second factor.
///
/// Transposing the second factor maps `|a, a−l⟩⟨a', a'−l|` to
/// `|a, a'−l⟩⟨a', a−l|`, which conserves `s = a + b`. Block `s` is indexed
/// by `a` on `|a, s−a⟩`; its `(a, a')` entry is `F[a + a' − s][a − a']`.
pub fn partial_transpose_blocks(coeffs: &SimplexCoefficients) -> Vec<Matrix> {
    let d = coeffs.d;
    let f = shift_profile(coeffs);
    (0..d)
        .map(|s| {
            let mut m = Matrix::zeros(d);
            for a in 0..d {
                for a2 in 0..d {
                    let l = (a + a2 + d - s) % d;
                    m[(a, a2)] = f[l * d + (a + d - a2) % d];
                }
            }
            m
        })
        .collect()
}

/// Parameters `(q1, q2, q3, q)` of the four-parameter family in dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub d: usize,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q: f64,
}

impl FamilyParams {
    pub fn new(d: usize, q1: f64, q2: f64, q3: f64, q: f64) -> Self {
        Self { d, q1, q2, q3, q }
    }

    pub fn from_array(d: usize, x: [f64; 4]) -> Self {
        Self::new(d, x[0], x[1], x[2], x[3])
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.q1, self.q2, self.q3, self.q]
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::new(self.d, t * self.q1, t * self.q2, t * self.q3, t * self.q)
    }
}

/// Number of shift columns `z = 2..=d-2` carried by the `q` block.
pub fn q_block_columns(d: usize) -> usize {
    d.saturating_sub(3)
}

/// Bell weights of the family state.
///
/// With `α = 1 − q1/(d²−d−1) − q2/(d+1) − q3 − n_z q`, where
/// `n_z = max(d − 3, 0)` is the size of the `q` block, every weight starts
/// at `α/d²` and gains `q1/(d²−d−1)` on `(0,0)`, `q2/((d+1)(d−1))` on
/// `(i,0)` for `i ≥ 1`, `q3/d` on `(i,1)` and `q/d` on `(i,z)` for
/// `z = 2..=d−2`. For `d ≤ 3` the `q` block is empty and `q` has no effect.
pub fn family_coefficients(p: &FamilyParams) -> SimplexCoefficients {
    let d = p.d;
    let df = d as f64;
    let n1 = df * df - (df + 1.0);
    let nz = q_block_columns(d);
    let alpha = 1.0 - p.q1 / n1 - p.q2 / (df + 1.0) - p.q3 - nz as f64 * p.q;
    let base = alpha / (df * df);
    let mut c = vec![base; d * d];
    c[0] += p.q1 / n1;
    for i in 1..d {
        c[i * d] += p.q2 / ((df + 1.0) * (df - 1.0));
    }
    for i in 0..d {
        c[i * d + 1] += p.q3 / df;
        for z in 2..2 + nz {
            c[i * d + z] += p.q / df;
        }
    }
    SimplexCoefficients { d, c }
}

pub fn family_rho(p: &FamilyParams) -> Matrix {
    simplex_state(&family_coefficients(p))
}

/// Where the Weyl operator acts in the n-pair lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylSite {
    pub pair: usize,
    /// `false` for the A side of the pair, `true` for the B side.
    pub second: bool,
}

impl Default for WeylSite {
    fn default() -> Self {
        Self {
            pair: 0,
            second: true,
        }
    }
}

impl WeylSite {
    /// Tensor factor index in the `A_1, B_1, A_2, B_2, …` ordering.
    pub fn factor(&self) -> usize {
        2 * self.pair + self.second as usize
    }
}

fn guard_multipartite(d: usize, n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "the n-pair lift needs n >= 2, got n = {n}"
        )));
    }
    let dim = (d as u64).checked_pow(2 * n as u32).unwrap_or(u64::MAX);
    if dim > MULTIPARTITE_DIM_LIMIT as u64 {
        return Err(Error::SizeGuard {
            dim: dim.min(usize::MAX as u64) as usize,
            limit: MULTIPARTITE_DIM_LIMIT,
        });
    }
    Ok(dim as usize)
}

/// `(1/d²) Σ_{k,l} P_{k,l}^{⊗n}`, for any `n ≥ 1`, without the size guard.
pub(crate) fn vertex_sum(d: usize, n: usize) -> Matrix {
    let mut out = Matrix::zeros((d * d).pow(n as u32));
    for label in WeylLabel::all(d) {
        let p = bell_projector(d, label);
        let mut term = p.clone();
        for _ in 1..n {
            term = kron(&term, &p);
        }
        out.add_scaled(1.0 / (d * d) as f64, &term);
    }
    out
}

/// The Weyl operator on one site, identity elsewhere, over `2n` factors.
fn lifted_weyl(d: usize, n: usize, label: WeylLabel, site: WeylSite) -> Matrix {
    let w = weyl(d, label);
    let id = Matrix::identity(d);
    let factor = site.factor();
    (0..2 * n).fold(Matrix::identity(1), |acc, f| {
        kron(&acc, if f == factor { &w } else { &id })
    })
}

/// Vertex `P̃_{k,l}` of the n-pair simplex with the default Weyl site.
pub fn multipartite_vertex(d: usize, n: usize, label: WeylLabel) -> Result<Matrix> {
    multipartite_vertex_at(d, n, label, WeylSite::default())
}

pub fn multipartite_vertex_at(
    d: usize,
    n: usize,
    label: WeylLabel,
    site: WeylSite,
) -> Result<Matrix> {
    guard_multipartite(d, n)?;
    check_site(n, site)?;
    let base = vertex_sum(d, n);
    Ok(base.conjugate_by(&lifted_weyl(d, n, label, site)))
}

fn check_site(n: usize, site: WeylSite) -> Result<()> {
    if site.pair >= n {
        return Err(Error::InvalidParameter(format!(
            "Weyl site on pair {} but only {n} pairs",
            site.pair
        )));
    }
    Ok(())
}

/// `Σ c_{k,l} P̃_{k,l}` for arbitrary weights.
pub fn multipartite_simplex_state(
    coeffs: &SimplexCoefficients,
    n: usize,
    site: WeylSite,
) -> Result<Matrix> {
    let d = coeffs.d;
    let dim = guard_multipartite(d, n)?;
    check_site(n, site)?;
    let base = vertex_sum(d, n);
    let mut out = Matrix::zeros(dim);
    for label in WeylLabel::all(d) {
        let c = coeffs.get(label);
        if c != 0.0 {
            out.add_scaled(c, &base.conjugate_by(&lifted_weyl(d, n, label, site)));
        }
    }
    Ok(out)
}

/// The family state with `P_{k,l}` replaced by `P̃_{k,l}`.
pub fn multipartite_family(p: &FamilyParams, n: usize) -> Result<Matrix> {
    multipartite_simplex_state(&family_coefficients(p), n, WeylSite::default())
}

/// Tensor shape `[d; 2n]` of the n-pair space.
pub fn multipartite_shape(d: usize, n: usize) -> Result<TensorShape> {
    TensorShape::uniform(d, 2 * n)
}
