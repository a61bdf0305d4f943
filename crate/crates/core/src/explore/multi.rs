use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::SearchBox;
use crate::error::{Error, Result};
use crate::linalg::{blockwise_eigenvalues, partial_transpose, partial_transpose_many, Matrix, TensorShape};
use crate::par::Execution;
use crate::simplex::{
    family_coefficients, multipartite_shape, multipartite_vertex, simplex_state, FamilyParams,
    WeylLabel,
};

/// A bipartition of the `2n` factors, given by the factors that are
/// transposed. Factor 0 is never in the set, so each cut appears once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub transposed: Vec<usize>,
    pub label: String,
}

fn factor_name(f: usize) -> String {
    format!("{}{}", if f % 2 == 0 { 'A' } else { 'B' }, f / 2 + 1)
}

impl Cut {
    pub fn new(factors: usize, transposed: Vec<usize>) -> Result<Self> {
        if transposed.is_empty()
            || transposed.len() >= factors
            || transposed.iter().any(|&f| f >= factors)
        {
            return Err(Error::InvalidParameter(format!(
                "{transposed:?} is not a proper nonempty subset of {factors} factors"
            )));
        }
        let mut t = transposed;
        t.sort_unstable();
        t.dedup();
        let (left, right): (Vec<usize>, Vec<usize>) = (0..factors).partition(|f| !t.contains(f));
        let side = |v: &[usize]| v.iter().map(|&f| factor_name(f)).collect::<String>();
        let label = format!("{}|{}", side(&left), side(&right));
        Ok(Self { transposed: t, label })
    }

    /// The Weyl-carrying factor `B1` against everything else.
    pub fn default_for(factors: usize) -> Result<Self> {
        Self::new(factors, vec![1])
    }

    /// Every bipartition, ordered by size of the transposed side then
    /// lexicographically.
    pub fn all(factors: usize) -> Vec<Cut> {
        let mut sets: Vec<Vec<usize>> = (1u32..(1 << (factors - 1)))
            .map(|mask| (1..factors).filter(|&f| mask >> (f - 1) & 1 == 1).collect())
            .collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        sets.into_iter()
            .map(|s| Cut::new(factors, s).expect("valid by construction"))
            .collect()
    }

    /// The bipartitions into two halves of equal size.
    pub fn balanced(factors: usize) -> Vec<Cut> {
        Self::all(factors)
            .into_iter()
            .filter(|c| 2 * c.transposed.len() == factors)
            .collect()
    }
}

/// A parameter tuple where the two states disagree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub params: [f64; 4],
    pub cut: String,
    pub bipartite_min_eigenvalue: f64,
    pub multipartite_min_eigenvalue: f64,
    pub bipartite_min_pt_eigenvalue: f64,
    /// Absent for positivity disagreements.
    pub multipartite_min_pt_eigenvalue: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub cut: String,
    pub transposed: Vec<usize>,
    pub ppt_agreement: f64,
    pub ppt_disagreements: usize,
}

/// Partial transposes of the Smolin-type vertex `P̃_{0,0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexCheck {
    pub cut: String,
    pub min_pt_eigenvalue: f64,
    pub ppt: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiReport {
    pub d: usize,
    pub pairs: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Samples whose bipartite state is positive, resp. positive and PPT.
    pub positive_samples: usize,
    pub ppt_samples: usize,
    pub positivity_agreement: f64,
    pub positivity_disagreements: usize,
    pub cuts: Vec<CutReport>,
    /// Capped list of disagreeing samples with spectra.
    pub disagreements: Vec<Disagreement>,
    pub vertex_checks: Vec<VertexCheck>,
}

impl MultiReport {
    pub fn all_agree(&self) -> bool {
        self.positivity_disagreements == 0 && self.cuts.iter().all(|c| c.ppt_disagreements == 0)
    }
}

/// Disagreements kept in the report.
const MAX_LISTED: usize = 50;

/// Draws `samples` parameter tuples uniformly from the box and compares
/// positivity and PPT verdicts of the bipartite family state with its
/// `n`-pair lift under each cut.
pub fn multi_compare(
    d: usize,
    pairs: usize,
    samples: usize,
    cuts: &[Cut],
    seed: u64,
    tol: f64,
    exec: Execution,
) -> Result<MultiReport> {
    // size guard and pair count are checked here
    let vertices: Vec<Matrix> = WeylLabel::all(d)
        .map(|l| multipartite_vertex(d, pairs, l))
        .collect::<Result<_>>()?;
    let shape = multipartite_shape(d, pairs)?;
    let pair_shape = TensorShape::uniform(d, 2)?;
    for c in cuts {
        Cut::new(shape.len(), c.transposed.clone())?;
    }
    let bx = SearchBox::for_dim(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<[f64; 4]> = (0..samples)
        .map(|_| std::array::from_fn(|i| if bx.width(i) > 0.0 { rng.gen_range(bx.lo[i]..=bx.hi[i]) } else { bx.lo[i] }))
        .collect();

    struct Sample {
        bi_min: f64,
        multi_min: f64,
        bi_pt: f64,
        multi_pt: Vec<f64>,
    }
    let evaluated: Vec<Result<Sample>> = exec.map(&params, |&x| {
        let c = family_coefficients(&FamilyParams::from_array(d, x));
        let rho = simplex_state(&c);
        let mut big = Matrix::zeros(shape.total_dim());
        for (w, v) in c.as_slice().iter().zip(&vertices) {
            big.add_scaled(*w, v);
        }
        let bi_pt = partial_transpose(&rho, &pair_shape, 1)?;
        Ok(Sample {
            bi_min: blockwise_eigenvalues(&rho)?[0],
            multi_min: blockwise_eigenvalues(&big)?[0],
            bi_pt: blockwise_eigenvalues(&bi_pt)?[0],
            multi_pt: cuts
                .iter()
                .map(|cut| {
                    let pt = partial_transpose_many(&big, &shape, &cut.transposed)?;
                    Ok(blockwise_eigenvalues(&pt)?[0])
                })
                .collect::<Result<_>>()?,
        })
    });
    let evaluated: Vec<Sample> = evaluated.into_iter().collect::<Result<_>>()?;

    let mut positive_samples = 0;
    let mut ppt_samples = 0;
    let mut pos_dis = 0;
    let mut cut_dis = vec![0usize; cuts.len()];
    let mut disagreements = Vec::new();
    for (x, s) in params.iter().zip(&evaluated) {
        let bi_pos = s.bi_min >= -tol;
        let bi_ppt = s.bi_pt >= -tol;
        positive_samples += bi_pos as usize;
        ppt_samples += (bi_pos && bi_ppt) as usize;
        let mut note = |cut: &str, multi_pt: Option<f64>| {
            if disagreements.len() < MAX_LISTED {
                disagreements.push(Disagreement {
                    params: *x,
                    cut: cut.to_string(),
                    bipartite_min_eigenvalue: s.bi_min,
                    multipartite_min_eigenvalue: s.multi_min,
                    bipartite_min_pt_eigenvalue: s.bi_pt,
                    multipartite_min_pt_eigenvalue: multi_pt,
                });
            }
        };
        if bi_pos != (s.multi_min >= -tol) {
            pos_dis += 1;
            note("positivity", None);
        }
        for (k, cut) in cuts.iter().enumerate() {
            if bi_ppt != (s.multi_pt[k] >= -tol) {
                cut_dis[k] += 1;
                note(&cut.label, Some(s.multi_pt[k]));
            }
        }
    }
    let frac = |bad: usize| {
        if samples == 0 {
            1.0
        } else {
            1.0 - bad as f64 / samples as f64
        }
    };

    Ok(MultiReport {
        d,
        pairs,
        samples,
        seed,
        tol,
        positive_samples,
        ppt_samples,
        positivity_agreement: frac(pos_dis),
        positivity_disagreements: pos_dis,
        cuts: cuts
            .iter()
            .zip(&cut_dis)
            .map(|(c, &n)| CutReport {
                cut: c.label.clone(),
                transposed: c.transposed.clone(),
                ppt_agreement: frac(n),
                ppt_disagreements: n,
            })
            .collect(),
        disagreements,
        vertex_checks: vertex_checks(&vertices[0], &shape, tol)?,
    })
}

/// PT spectra of `P̃_{0,0}` across the balanced bipartitions.
pub fn vertex_checks(vertex: &Matrix, shape: &TensorShape, tol: f64) -> Result<Vec<VertexCheck>> {
    Cut::balanced(shape.len())
        .into_iter()
        .map(|cut| {
            let pt = partial_transpose_many(vertex, shape, &cut.transposed)?;
            let min = blockwise_eigenvalues(&pt)?[0];
            Ok(VertexCheck {
                cut: cut.label,
                min_pt_eigenvalue: min,
                ppt: min >= -tol,
            })
        })
        .collect()
}
