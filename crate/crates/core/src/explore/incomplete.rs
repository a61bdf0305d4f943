use serde::{Deserialize, Serialize};

use super::config::{ExplorerConfig, SearchBox};
use super::optimize::{optimize_extreme, optimize_witness, OptimizeResult};
use super::scan::Slice;
use crate::criteria::{separable_bound, FamilyEvaluator, LabelingMode, WitnessOptions};
use crate::error::{Error, Result};
use crate::mub::{build_mub, MubSet, COMPLETE_DIMENSIONS};
use crate::par::Execution;
use crate::simplex::family_coefficients;

/// Which `m`-subsets of the available bases are tested.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SubsetPolicy {
    /// The first `m` bases in construction order.
    #[default]
    First,
    /// Every `m`-subset.
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetReport {
    pub bases: Vec<usize>,
    /// Largest `I_m − bound` over positive PPT grid points.
    pub max_excess: f64,
    /// `(q1, q2, q3, q)` where the maximum is attained.
    pub argmax: [f64; 4],
    /// Positive PPT grid points with `I_m − bound > tol`.
    pub violations: usize,
    /// `−value` of [`family_optimum`] when requested: the excess over the
    /// whole family rather than the slices.
    pub family_max_excess: Option<f64>,
    pub family_argmax: Option<[f64; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncompleteReport {
    pub d: usize,
    pub m: usize,
    pub bound: f64,
    pub grid: usize,
    /// `(q3, q)` of each slice.
    pub settings: Vec<[f64; 2]>,
    pub points: usize,
    /// Grid points that are positive and PPT.
    pub feasible: usize,
    /// Excess above which a point counts as a violation.
    pub tol: f64,
    pub subsets: Vec<SubsetReport>,
    /// Maximum over all tested subsets.
    pub max_excess: f64,
    pub violations: usize,
}

impl IncompleteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// All `m`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < m - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= n {
        rec(0, n, m, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

/// Default `(q3, q)` settings for the slices.
///
/// Where a complete set exists the slices pass through the origin, the
/// argmin of the complete-set optimizer (the slice on which `I_{d+1}` is
/// extreme) and the midpoint between them. Without a complete set there is
/// no such slice, so the origin is joined by the two points halfway to the
/// column-1 vertex (`q3 = 1`) and to the `q`-block vertex (`q = 1/(d − 3)`).
pub fn default_settings(d: usize, cfg: &ExplorerConfig, exec: Execution) -> Result<Vec<[f64; 2]>> {
    if COMPLETE_DIMENSIONS.contains(&d) {
        let r = optimize_extreme(d, LabelingMode::Max, cfg, exec)?;
        return Ok(vec![[0.0, 0.0], [r.q3, r.q], [0.5 * r.q3, 0.5 * r.q]]);
    }
    let q_half = if d > 3 { 0.5 / (d as f64 - 3.0) } else { 0.0 };
    Ok(vec![[0.0, 0.0], [0.5, 0.0], [0.0, q_half]])
}

/// Largest `I_m − bound` over the whole positive PPT family for one subset,
/// found by the witness optimizer.
pub fn family_optimum(
    mubs: &MubSet,
    subset: &[usize],
    cfg: &ExplorerConfig,
    exec: Execution,
) -> Result<OptimizeResult> {
    let ev = FamilyEvaluator::new(&mubs.subset(subset)?, WitnessOptions::default(), cfg.tol)?;
    optimize_witness(&ev, cfg, exec)
}

/// Scans `(q1, q2)` slices at each `(q3, q)` setting and reports, per
/// subset of `m` bases, how far `I_m` rises above its separable bound on
/// positive PPT states.
///
/// Predictabilities are computed once per point for all available bases;
/// a subset's `I_m` is the sum over its members.
pub fn incomplete_scan(
    mubs: &MubSet,
    m: usize,
    settings: &[[f64; 2]],
    grid: usize,
    bx: &SearchBox,
    policy: SubsetPolicy,
    tol: f64,
    exec: Execution,
) -> Result<IncompleteReport> {
    let d = mubs.dim();
    if m == 0 || m > mubs.len() {
        return Err(Error::InvalidParameter(format!(
            "m = {m} but {} bases are available",
            mubs.len()
        )));
    }
    let ev = FamilyEvaluator::new(mubs, WitnessOptions::default(), tol)?;
    let subsets = match policy {
        SubsetPolicy::First => vec![(0..m).collect::<Vec<_>>()],
        SubsetPolicy::All => combinations(mubs.len(), m),
    };
    let bound = separable_bound(d, m);

    let mut points = Vec::new();
    for &[q3, q] in settings {
        let slice = Slice {
            q3,
            q,
            grid,
            q1_range: (bx.lo[0], bx.hi[0]),
            q2_range: (bx.lo[1], bx.hi[1]),
        };
        if grid < 2 {
            return Err(Error::InvalidParameter(format!("grid must be at least 2, got {grid}")));
        }
        points.extend(slice.points(d));
    }
    // per point: None if infeasible, else the per-basis predictabilities
    let evaluated: Vec<Result<Option<Vec<f64>>>> = exec.map(&points, |p| {
        let c = family_coefficients(p);
        if c.min() < -tol || ev.min_pt_eigenvalue(&c)? < -tol {
            return Ok(None);
        }
        Ok(Some(ev.predictabilities(&c)))
    });

    let mut reports: Vec<SubsetReport> = subsets
        .iter()
        .map(|s| SubsetReport {
            bases: s.clone(),
            max_excess: f64::NEG_INFINITY,
            argmax: [f64::NAN; 4],
            violations: 0,
            family_max_excess: None,
            family_argmax: None,
        })
        .collect();
    let mut feasible = 0;
    for (p, e) in points.iter().zip(evaluated) {
        let Some(pred) = e? else { continue };
        feasible += 1;
        for r in reports.iter_mut() {
            let excess = r.bases.iter().map(|&b| pred[b]).sum::<f64>() - bound;
            if excess > r.max_excess {
                r.max_excess = excess;
                r.argmax = p.as_array();
            }
            if excess > tol {
                r.violations += 1;
            }
        }
    }
    let max_excess = reports.iter().map(|r| r.max_excess).fold(f64::NEG_INFINITY, f64::max);
    let violations = reports.iter().map(|r| r.violations).sum();
    Ok(IncompleteReport {
        d,
        m,
        bound,
        grid,
        settings: settings.to_vec(),
        points: points.len(),
        feasible,
        tol,
        subsets: reports,
        max_excess,
        violations,
    })
}

/// Builds the available bases for `d`, scans at the default settings and
/// attaches each subset's optimum over the whole family.
pub fn incomplete_scan_default(
    d: usize,
    m: usize,
    policy: SubsetPolicy,
    cfg: &ExplorerConfig,
    exec: Execution,
) -> Result<IncompleteReport> {
    let mubs = build_mub(d)?;
    if m >= d + 1 {
        return Err(Error::InvalidParameter(format!(
            "an incomplete set needs m < d + 1 = {}, got {m}",
            d + 1
        )));
    }
    let settings = default_settings(d, cfg, exec)?;
    let mut report = incomplete_scan(
        &mubs,
        m,
        &settings,
        cfg.grid,
        &cfg.search_box(d),
        policy,
        cfg.tol,
        exec,
    )?;
    for r in report.subsets.iter_mut() {
        let opt = family_optimum(&mubs, &r.bases, cfg, exec)?;
        r.family_max_excess = Some(-opt.value);
        r.family_argmax = Some([opt.q1, opt.q2, opt.q3, opt.q]);
    }
    Ok(report)
}
