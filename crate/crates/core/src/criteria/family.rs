use num_complex::Complex64;

use super::{
    max_weight_assignment, separable_bound, Classification, LabelingMode, WitnessOptions,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, Matrix};
use crate::mub::{conjugate_basis, MubSet};
use crate::simplex::{
    bell_vector, family_coefficients, partial_transpose_blocks, state_blocks, FamilyParams,
    SimplexCoefficients, WeylLabel,
};

/// Evaluates verdicts on Bell-diagonal states of one dimension.
///
/// Joint distributions are linear in the Bell weights, so the per-basis
/// distribution of every vertex `P_{k,l}` is tabulated once and a state's
/// distribution is the weighted sum of table rows.
#[derive(Clone, Debug)]
pub struct FamilyEvaluator {
    d: usize,
    mubs: MubSet,
    opts: WitnessOptions,
    tol: f64,
    /// `tables[s][(k * d + l) * d² + i * d + j]`
    tables: Vec<Vec<f64>>,
}

impl FamilyEvaluator {
    pub fn new(mubs: &MubSet, opts: WitnessOptions, tol: f64) -> Result<Self> {
        let d = mubs.dim();
        let dd = d * d;
        let vertices: Vec<Vec<Complex64>> =
            WeylLabel::all(d).map(|label| bell_vector(d, label)).collect();
        let tables = mubs
            .bases()
            .iter()
            .map(|alice| {
                let bob = if opts.conjugate_bob {
                    conjugate_basis(alice)
                } else {
                    alice.clone()
                };
                let mut table = vec![0.0; dd * dd];
                for (v, psi) in vertices.iter().enumerate() {
                    for (i, a) in alice.vectors().iter().enumerate() {
                        for (j, b) in bob.vectors().iter().enumerate() {
                            // ψ is supported on |x, y⟩ with y = x - l
                            let amp: Complex64 = (0..d)
                                .filter_map(|x| {
                                    let y = (0..d).find(|&y| psi[x * d + y] != Complex64::new(0.0, 0.0))?;
                                    Some(a[x].conj() * b[y].conj() * psi[x * d + y])
                                })
                                .sum();
                            table[v * dd + i * d + j] = amp.norm_sqr();
                        }
                    }
                }
                table
            })
            .collect();
        Ok(Self {
            d,
            mubs: mubs.clone(),
            opts,
            tol,
            tables,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn mubs(&self) -> &MubSet {
        &self.mubs
    }

    pub fn options(&self) -> WitnessOptions {
        self.opts
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn bound(&self) -> f64 {
        separable_bound(self.d, self.mubs.len())
    }

    fn check(&self, c: &SimplexCoefficients) -> Result<()> {
        if c.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: c.dim(),
            });
        }
        Ok(())
    }

    /// Joint distribution table of basis `s` for the weights `c`.
    pub fn distribution(&self, s: usize, c: &SimplexCoefficients) -> Vec<f64> {
        let dd = self.d * self.d;
        let table = &self.tables[s];
        let mut out = vec![0.0; dd];
        for (v, &w) in c.as_slice().iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (o, t) in out.iter_mut().zip(&table[v * dd..(v + 1) * dd]) {
                *o += w * t;
            }
        }
        out
    }

    /// Mutual predictability per basis, in basis order.
    pub fn predictabilities(&self, c: &SimplexCoefficients) -> Vec<f64> {
        (0..self.tables.len())
            .map(|s| {
                let jd = self.distribution(s, c);
                match self.opts.labels {
                    LabelingMode::Identity => (0..self.d).map(|i| jd[i * self.d + i]).sum(),
                    LabelingMode::Max => max_weight_assignment(&jd, self.d).1,
                }
            })
            .collect()
    }

    pub fn witness(&self, c: &SimplexCoefficients) -> f64 {
        self.predictabilities(c).iter().sum()
    }

    /// Smallest eigenvalue of the partial transpose on the second factor.
    pub fn min_pt_eigenvalue(&self, c: &SimplexCoefficients) -> Result<f64> {
        self.check(c)?;
        min_over_blocks(&partial_transpose_blocks(c))
    }

    /// Smallest eigenvalue of the state itself, computed spectrally.
    pub fn min_state_eigenvalue(&self, c: &SimplexCoefficients) -> Result<f64> {
        self.check(c)?;
        min_over_blocks(&state_blocks(c))
    }

    /// Positive (by weights) and PPT.
    pub fn is_feasible(&self, c: &SimplexCoefficients) -> Result<bool> {
        Ok(c.min() >= -self.tol && self.min_pt_eigenvalue(c)? >= -self.tol)
    }

    /// Verdicts with positivity decided on the Bell weights; the spectral
    /// minimum is reported alongside.
    pub fn classify(&self, c: &SimplexCoefficients) -> Result<Classification> {
        self.check(c)?;
        let min_c = c.min();
        let min_pt = self.min_pt_eigenvalue(c)?;
        let min_eig = self.min_state_eigenvalue(c)?;
        Ok(Classification::assemble(
            min_c >= -self.tol,
            min_pt >= -self.tol,
            self.witness(c),
            self.bound(),
            Some(min_c),
            min_eig,
            min_pt,
        ))
    }

    pub fn classify_params(&self, p: &FamilyParams) -> Result<Classification> {
        if p.d != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: p.d,
            });
        }
        self.classify(&family_coefficients(p))
    }
}

fn min_over_blocks(blocks: &[Matrix]) -> Result<f64> {
    let mut min = f64::INFINITY;
    for b in blocks {
        min = min.min(hermitian_eigenvalues(b)?[0]);
    }
    Ok(min)
}
