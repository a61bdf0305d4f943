//! Construction and verification of mutually unbiased bases.
//!
//! Complete sets of `d + 1` bases are produced for d ∈ {2,3,4,5,7,8,9}:
//!
//! - odd prime powers use the quadratic-phase vectors
//!   `|v_{a,b}⟩_s = ω_p^{tr(a s² + b s)} / √d` over `s ∈ GF(d)`, one basis per
//!   `a ∈ GF(d)`, plus the computational basis;
//! - powers of two (d = 2, 4, 8) use the joint eigenbases of `d + 1` disjoint
//!   maximal commuting classes of multi-qubit Pauli operators. Class `a` holds
//!   `X^u Z^{M_a u}` with the symmetric trace-form matrix
//!   `(M_a)_{ij} = tr(a x^i x^j)`, and the `Z` class gives the computational
//!   basis.
//!
//! For d = 6 only the computational, Fourier and `X·Z` eigenbases are
//! provided. Every constructed set is checked against the overlap condition
//! before it is returned.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{prime_power, GaloisField};
use crate::linalg::Matrix;

/// Dimensions with a complete MUB set available.
pub const COMPLETE_DIMENSIONS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

const SUPPORTED: &str = "2, 3, 4, 5, 7, 8, 9";

/// Tolerance applied when a constructor verifies its own output.
pub const CONSTRUCTION_TOL: f64 = 1e-10;

/// An ordered list of `d` vectors in C^d.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    d: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl Basis {
    /// Wraps `d` vectors of length `d`; orthonormality is checked by [`verify_mub`].
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.len();
        if d == 0 {
            return Err(Error::InvalidParameter("empty basis".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        Ok(Self { d, vectors })
    }

    pub fn computational(d: usize) -> Self {
        let vectors = (0..d)
            .map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); d];
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self { d, vectors }
    }

    /// Vectors `|f_k⟩_s = ω^{ks} / √d`.
    pub fn fourier(d: usize) -> Self {
        let norm = 1.0 / (d as f64).sqrt();
        let vectors = (0..d)
            .map(|k| {
                (0..d)
                    .map(|s| Complex64::from_polar(norm, 2.0 * PI * ((k * s) % d) as f64 / d as f64))
                    .collect()
            })
            .collect();
        Self { d, vectors }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.vectors[i]
    }

    /// `max |⟨v_i|v_j⟩ − δ_ij|`
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (i, vi) in self.vectors.iter().enumerate() {
            for (j, vj) in self.vectors.iter().enumerate().skip(i) {
                let ip = inner(vi, vj);
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((ip - target).norm());
            }
        }
        dev
    }

    /// Multiplies vector `i` by `phase` (any unit complex number).
    pub fn with_phase(&self, i: usize, phase: Complex64) -> Self {
        let mut out = self.clone();
        for z in &mut out.vectors[i] {
            *z *= phase;
        }
        out
    }
}

/// `⟨a|b⟩`
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Complex-conjugates every component of every vector.
pub fn conjugate_basis(b: &Basis) -> Basis {
    Basis {
        d: b.d,
        vectors: b
            .vectors
            .iter()
            .map(|v| v.iter().map(|z| z.conj()).collect())
            .collect(),
    }
}

/// An ordered collection of bases of C^d claimed to be mutually unbiased.
#[derive(Clone, Debug, PartialEq)]
pub struct MubSet {
    d: usize,
    bases: Vec<Basis>,
}

impl MubSet {
    /// Requires a common dimension and at most `d + 1` bases.
    pub fn new(d: usize, bases: Vec<Basis>) -> Result<Self> {
        if let Some(b) = bases.iter().find(|b| b.d != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: b.d,
            });
        }
        if bases.len() > d + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} bases exceed the maximum of d + 1 = {} for d = {d}",
                bases.len(),
                d + 1
            )));
        }
        Ok(Self { d, bases })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn is_complete(&self) -> bool {
        self.bases.len() == self.d + 1
    }

    /// The bases at the given positions, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<MubSet> {
        let bases = indices
            .iter()
            .map(|&i| {
                self.bases.get(i).cloned().ok_or_else(|| {
                    Error::InvalidParameter(format!("basis index {i} out of range ({})", self.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MubSet::new(self.d, bases)
    }

    /// The first `m` bases.
    pub fn truncated(&self, m: usize) -> Result<MubSet> {
        if m > self.len() {
            return Err(Error::InvalidParameter(format!(
                "requested {m} bases, only {} available",
                self.len()
            )));
        }
        self.subset(&(0..m).collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> MubSetJson {
        MubSetJson {
            d: self.d,
            bases: self
                .bases
                .iter()
                .map(|b| {
                    b.vectors
                        .iter()
                        .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(json: &MubSetJson) -> Result<Self> {
        let bases = json
            .bases
            .iter()
            .map(|b| {
                let vectors = b
                    .iter()
                    .map(|v| v.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                    .collect();
                let basis = Basis::new(vectors)?;
                if basis.d != json.d {
                    return Err(Error::DimensionMismatch {
                        expected: json.d,
                        found: basis.d,
                    });
                }
                Ok(basis)
            })
            .collect::<Result<Vec<_>>>()?;
        MubSet::new(json.d, bases)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json())?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let json: MubSetJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        Self::from_json(&json)
    }
}

/// Wire form: `{"d": d, "bases": [basis][vector][component] = [re, im]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MubSetJson {
    pub d: usize,
    pub bases: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MubReport {
    pub d: usize,
    pub bases: usize,
    pub max_orthonormality_deviation: f64,
    pub max_unbiasedness_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Checks orthonormality of each basis and `|⟨i_a|j_b⟩|² = 1/d` across bases.
pub fn verify_mub(set: &MubSet, tol: f64) -> Result<MubReport> {
    let d = set.d;
    if let Some(b) = set.bases.iter().find(|b| b.d != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: b.d,
        });
    }
    let ortho = set
        .bases
        .iter()
        .map(Basis::orthonormality_deviation)
        .fold(0.0, f64::max);
    let target = 1.0 / d as f64;
    let mut unbiased: f64 = 0.0;
    for (a, ba) in set.bases.iter().enumerate() {
        for bb in &set.bases[a + 1..] {
            for u in &ba.vectors {
                for v in &bb.vectors {
                    unbiased = unbiased.max((inner(u, v).norm_sqr() - target).abs());
                }
            }
        }
    }
    Ok(MubReport {
        d,
        bases: set.len(),
        max_orthonormality_deviation: ortho,
        max_unbiasedness_deviation: unbiased,
        tol,
        pass: ortho <= tol && unbiased <= tol,
    })
}

fn checked(set: MubSet) -> Result<MubSet> {
    let report = verify_mub(&set, CONSTRUCTION_TOL)?;
    if !report.pass {
        return Err(Error::InvalidParameter(format!(
            "constructed set for d = {} failed verification: {report:?}",
            set.d
        )));
    }
    Ok(set)
}

/// A complete set of `d + 1` MUBs; the first basis is computational.
pub fn build_complete_mub(d: usize) -> Result<MubSet> {
    if !COMPLETE_DIMENSIONS.contains(&d) {
        return Err(Error::UnsupportedDimension {
            d,
            supported: SUPPORTED,
        });
    }
    let (p, _) = prime_power(d).expect("supported dimensions are prime powers");
    let field = GaloisField::with_order(d)?;
    let bases = if p == 2 {
        pauli_class_bases(&field)
    } else {
        quadratic_phase_bases(&field)
    };
    checked(MubSet::new(d, bases)?)
}

fn quadratic_phase_bases(field: &GaloisField) -> Vec<Basis> {
    let d = field.order();
    let p = field.characteristic();
    let norm = 1.0 / (d as f64).sqrt();
    let elements = field.enumerate();
    let mut bases = vec![Basis::computational(d)];
    for a in &elements {
        let vectors = elements
            .iter()
            .map(|b| {
                elements
                    .iter()
                    .map(|s| {
                        let phase =
                            field.add(&field.mul(a, &field.mul(s, s)), &field.mul(b, s));
                        let k = field.trace_value(&phase);
                        Complex64::from_polar(norm, 2.0 * PI * k as f64 / p as f64)
                    })
                    .collect()
            })
            .collect();
        bases.push(Basis { d, vectors });
    }
    bases
}

/// Hermitian `i^{u·v} ⊗_t X^{u_t} Z^{v_t}` on `m` qubits, qubit 0 slowest.
fn pauli_operator(u: &[u32], v: &[u32]) -> Matrix {
    let i = Complex64::new(0.0, 1.0);
    let x = Matrix::from_vec(2, vec![0.0.into(), 1.0.into(), 1.0.into(), 0.0.into()]).unwrap();
    let z = Matrix::from_real_diagonal(&[1.0, -1.0]);
    let mut op = Matrix::identity(1);
    let mut weight = 0;
    for (&ut, &vt) in u.iter().zip(v) {
        let mut local = Matrix::identity(2);
        if ut == 1 {
            local = local.matmul(&x);
        }
        if vt == 1 {
            local = local.matmul(&z);
        }
        weight += ut * vt;
        op = crate::linalg::kron(&op, &local);
    }
    op.scale_complex(i.powu(weight))
}

fn pauli_class_bases(field: &GaloisField) -> Vec<Basis> {
    let d = field.order();
    let m = field.degree();
    let powers: Vec<_> = (0..m).map(|i| field.pow(&field.x(), i as u64)).collect();

    let mut bases = vec![Basis::computational(d)];
    for a in field.enumerate() {
        let trace_form: Vec<Vec<u32>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| field.trace_value(&field.mul(&a, &field.mul(&powers[i], &powers[j]))))
                    .collect()
            })
            .collect();
        let generators: Vec<Matrix> = (0..m)
            .map(|j| {
                let u: Vec<u32> = (0..m).map(|t| (t == j) as u32).collect();
                let v: Vec<u32> = (0..m).map(|t| trace_form[t][j]).collect();
                pauli_operator(&u, &v)
            })
            .collect();
        bases.push(joint_eigenbasis(&generators, d));
    }
    bases
}

/// Joint eigenvectors of commuting Hermitian involutions `g_1..g_m` with
/// `2^m = d`, one per sign pattern, from the rank-one projectors
/// `Π_t (1 ± g_t) / 2`.
fn joint_eigenbasis(generators: &[Matrix], d: usize) -> Basis {
    let m = generators.len();
    let id = Matrix::identity(d);
    let vectors = (0..1usize << m)
        .map(|pattern| {
            let mut proj = Matrix::identity(d);
            for (t, g) in generators.iter().enumerate() {
                let sign = if (pattern >> (m - 1 - t)) & 1 == 0 { 1.0 } else { -1.0 };
                let mut factor = id.clone();
                factor.add_scaled(sign, g);
                proj = proj.matmul(&factor.scale(0.5));
            }
            // largest column of the projector, phase fixed so its pivot is real
            let col = (0..d)
                .max_by(|&a, &b| {
                    let na: f64 = (0..d).map(|r| proj[(r, a)].norm_sqr()).sum();
                    let nb: f64 = (0..d).map(|r| proj[(r, b)].norm_sqr()).sum();
                    na.total_cmp(&nb).then(b.cmp(&a))
                })
                .unwrap();
            let v: Vec<Complex64> = (0..d).map(|r| proj[(r, col)]).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|z| z / norm).collect()
        })
        .collect();
    Basis { d, vectors }
}

/// Computational, Fourier and shift·clock eigenbases of C^6.
///
/// `XZ|s⟩ = ω^s |s+1⟩` has eigenvectors `λ_k^{-s} ω^{s(s-1)/2} / √6` with
/// `λ_k = e^{iπ(2k+1)/6}`.
pub fn build_partial_mub_6() -> Result<MubSet> {
    let d = 6usize;
    let norm = 1.0 / (d as f64).sqrt();
    let chirp = (0..d)
        .map(|k| {
            (0..d)
                .map(|s| {
                    let theta = -PI * ((2 * k + 1) * s) as f64 / d as f64
                        + 2.0 * PI * ((s * (s.max(1) - 1) / 2) % d) as f64 / d as f64;
                    Complex64::from_polar(norm, theta)
                })
                .collect()
        })
        .collect();
    let bases = vec![
        Basis::computational(d),
        Basis::fourier(d),
        Basis { d, vectors: chirp },
    ];
    checked(MubSet::new(d, bases)?)
}

/// Complete set for supported prime powers, the known triple for d = 6.
pub fn build_mub(d: usize) -> Result<MubSet> {
    if d == 6 {
        build_partial_mub_6()
    } else {
        build_complete_mub(d)
    }
}
