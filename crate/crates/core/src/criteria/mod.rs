//! Entanglement verdicts: positivity, PPT and the MUB correlation witness.
//!
//! For `m` mutually unbiased bases the witness is `I_m = Σ_s C_s`, where the
//! mutual predictability `C_s = Σ_i P_s(i, π_s(i))` sums the probabilities of
//! equal (relabelled) outcomes when Alice measures basis `s` and Bob its
//! complex conjugate. Every separable state obeys `I_m ≤ 1 + (m − 1)/d`.

mod assignment;
mod family;

pub use assignment::max_weight_assignment;
pub use family::FamilyEvaluator;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    kron_vec, min_eigenvalue, partial_transpose_many, Matrix, TensorShape, DEFAULT_PSD_TOL,
};
use crate::mub::{conjugate_basis, Basis, MubSet};

const DISTRIBUTION_ENTRY_TOL: f64 = 1e-12;
const DISTRIBUTION_SUM_TOL: f64 = 1e-10;

/// `P(i, j)` for Alice outcome `i` and Bob outcome `j`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    d: usize,
    p: Vec<f64>,
}

impl JointDistribution {
    /// Validated distribution: entries ≥ −1e-12, total 1 within 1e-10.
    pub fn new(d: usize, p: Vec<f64>) -> Result<Self> {
        let jd = Self::from_raw(d, p)?;
        if !jd.is_valid() {
            return Err(Error::InvalidParameter(format!(
                "not a probability distribution (min {}, sum {})",
                jd.p.iter().copied().fold(f64::INFINITY, f64::min),
                jd.total()
            )));
        }
        Ok(jd)
    }

    /// Unvalidated table; used when the measured operator is not a state.
    pub fn from_raw(d: usize, p: Vec<f64>) -> Result<Self> {
        if p.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: p.len(),
            });
        }
        Ok(Self { d, p })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.d + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn is_valid(&self) -> bool {
        self.p.iter().all(|&x| x >= -DISTRIBUTION_ENTRY_TOL)
            && (self.total() - 1.0).abs() <= DISTRIBUTION_SUM_TOL
    }
}

/// A relabelling `i ↦ π(i)` of Bob's outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling(Vec<usize>);

impl Labeling {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &j in &perm {
            if j >= perm.len() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        Ok(Self(perm))
    }

    pub fn identity(d: usize) -> Self {
        Self((0..d).collect())
    }

    /// `i ↦ i + shift mod d`
    pub fn cyclic(d: usize, shift: usize) -> Self {
        Self((0..d).map(|i| (i + shift) % d).collect())
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// How Bob's outcomes are paired with Alice's.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LabelingMode {
    /// Outcome `i` paired with outcome `i`.
    Identity,
    /// Per-basis pairing that maximises the predictability.
    #[default]
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOptions {
    /// Bob measures the complex conjugate of Alice's basis.
    pub conjugate_bob: bool,
    pub labels: LabelingMode,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self {
            conjugate_bob: true,
            labels: LabelingMode::Max,
        }
    }
}

/// `P(i, j) = ⟨a_i ⊗ b_j| ρ |a_i ⊗ b_j⟩`
pub fn joint_distribution(rho: &Matrix, alice: &Basis, bob: &Basis) -> Result<JointDistribution> {
    let d = alice.dim();
    if bob.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bob.dim(),
        });
    }
    if rho.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: rho.dim(),
        });
    }
    let mut p = Vec::with_capacity(d * d);
    for a in alice.vectors() {
        for b in bob.vectors() {
            p.push(rho.expectation(&kron_vec(a, b)).re);
        }
    }
    JointDistribution::from_raw(d, p)
}

/// `C = Σ_i P(i, π(i))`
pub fn mutual_predictability(jd: &JointDistribution, lab: &Labeling) -> f64 {
    (0..jd.d).map(|i| jd.get(i, lab.apply(i))).sum()
}

/// The relabelling with the largest predictability (exact assignment).
pub fn optimal_labeling(jd: &JointDistribution) -> (Labeling, f64) {
    let (perm, value) = max_weight_assignment(&jd.p, jd.d);
    (Labeling(perm), value)
}

fn predictability(jd: &JointDistribution, mode: LabelingMode) -> (Labeling, f64) {
    match mode {
        LabelingMode::Identity => {
            let lab = Labeling::identity(jd.d);
            let c = mutual_predictability(jd, &lab);
            (lab, c)
        }
        LabelingMode::Max => optimal_labeling(jd),
    }
}

/// `1 + (m − 1)/d`, the largest witness value of a separable state.
pub fn separable_bound(d: usize, m: usize) -> f64 {
    1.0 + (m as f64 - 1.0) / d as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub d: usize,
    pub m: usize,
    pub predictabilities: Vec<f64>,
    pub labelings: Vec<Labeling>,
    pub value: f64,
    pub bound: f64,
    /// `value − bound`; detection needs it above [`DETECTION_SLACK`].
    pub margin: f64,
    pub detected: bool,
    pub options: WitnessOptions,
}

pub fn mub_witness(rho: &Matrix, mubs: &MubSet, opts: WitnessOptions) -> Result<WitnessReport> {
    let d = mubs.dim();
    if rho.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: rho.dim(),
        });
    }
    let mut predictabilities = Vec::with_capacity(mubs.len());
    let mut labelings = Vec::with_capacity(mubs.len());
    for basis in mubs.bases() {
        let bob = if opts.conjugate_bob {
            conjugate_basis(basis)
        } else {
            basis.clone()
        };
        let jd = joint_distribution(rho, basis, &bob)?;
        let (lab, c) = predictability(&jd, opts.labels);
        predictabilities.push(c);
        labelings.push(lab);
    }
    let value: f64 = predictabilities.iter().sum();
    let bound = separable_bound(d, mubs.len());
    Ok(WitnessReport {
        d,
        m: mubs.len(),
        predictabilities,
        labelings,
        value,
        bound,
        margin: value - bound,
        detected: is_detected(value, bound),
        options: opts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub min_eigenvalue: f64,
    pub is_ppt: bool,
}

/// Partial transpose over the factors in `cut`, then its smallest eigenvalue.
pub fn ppt_check(rho: &Matrix, shape: &TensorShape, cut: &[usize], tol: f64) -> Result<PptReport> {
    let pt = partial_transpose_many(rho, shape, cut)?;
    let min = min_eigenvalue(&pt)?;
    Ok(PptReport {
        min_eigenvalue: min,
        is_ppt: min >= -tol,
    })
}

/// Joint verdict on one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub positive: bool,
    pub ppt: bool,
    pub witness: f64,
    pub bound: f64,
    pub detected: bool,
    pub bound_entangled: bool,
    /// Smallest Bell weight, present for simplex states.
    pub min_coefficient: Option<f64>,
    pub min_eigenvalue: f64,
    pub min_pt_eigenvalue: f64,
}

impl Classification {
    pub(crate) fn assemble(
        positive: bool,
        ppt: bool,
        witness: f64,
        bound: f64,
        min_coefficient: Option<f64>,
        min_eigenvalue: f64,
        min_pt_eigenvalue: f64,
    ) -> Self {
        let detected = is_detected(witness, bound);
        Self {
            positive,
            ppt,
            witness,
            bound,
            detected,
            bound_entangled: positive && ppt && detected,
            min_coefficient,
            min_eigenvalue,
            min_pt_eigenvalue,
        }
    }
}

/// Classifies a bipartite `d × d` state with the spectral positivity check.
pub fn classify(
    rho: &Matrix,
    mubs: &MubSet,
    opts: WitnessOptions,
    tol: f64,
) -> Result<Classification> {
    let d = mubs.dim();
    let shape = TensorShape::uniform(d, 2)?;
    let witness = mub_witness(rho, mubs, opts)?;
    let min_eig = min_eigenvalue(rho)?;
    let ppt = ppt_check(rho, &shape, &[1], tol)?;
    Ok(Classification::assemble(
        min_eig >= -tol,
        ppt.is_ppt,
        witness.value,
        witness.bound,
        None,
        min_eig,
        ppt.min_eigenvalue,
    ))
}

/// Rounding allowance on the witness. States saturating the bound, such as
/// uniform mixtures of product states, evaluate a few ulps either side of
/// it; they must not count as detected.
pub const DETECTION_SLACK: f64 = 1e-12;

/// `value > bound`, discounting floating-point evaluation error.
pub fn is_detected(value: f64, bound: f64) -> bool {
    value > bound + DETECTION_SLACK
}

/// Default PSD/PPT slack.
pub const DEFAULT_TOL: f64 = DEFAULT_PSD_TOL;
