use serde::{Deserialize, Serialize};

use super::config::{ExplorerConfig, SearchBox};
use super::nelder_mead::nelder_mead;
use crate::criteria::{FamilyEvaluator, LabelingMode, WitnessOptions};
use crate::error::{Error, Result};
use crate::mub::{build_complete_mub, COMPLETE_DIMENSIONS};
use crate::par::Execution;
use crate::simplex::{family_coefficients, FamilyParams, SimplexCoefficients};

/// Minimiser of `bound − I` over positive PPT family states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub d: usize,
    pub labels: LabelingMode,
    /// Number of bases in the witness.
    pub m: usize,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q: f64,
    /// `bound − I` at the argmin; negative means detection.
    pub value: f64,
    pub witness: f64,
    pub bound: f64,
    pub min_coefficient: f64,
    pub min_pt_eigenvalue: f64,
    pub positive: bool,
    pub ppt: bool,
    pub detected: bool,
    /// Coarse grid points that passed both constraints.
    pub coarse_feasible: usize,
    pub coarse_total: usize,
    pub evaluations: usize,
    pub converged: bool,
}

impl OptimizeResult {
    pub fn params(&self) -> FamilyParams {
        FamilyParams::new(self.d, self.q1, self.q2, self.q3, self.q)
    }
}

/// Largest `t ∈ [0, 1]` with all Bell weights of `t·x` non-negative.
///
/// The weights are affine in the parameters and equal `1/d²` at the origin,
/// so each weight that decreases along the ray fixes its own zero crossing.
pub fn positivity_radius(d: usize, x: [f64; 4]) -> f64 {
    let center = 1.0 / (d * d) as f64;
    let c = family_coefficients(&FamilyParams::from_array(d, x));
    c.as_slice()
        .iter()
        .filter(|&&w| w < center)
        .map(|&w| center / (center - w))
        .fold(1.0, f64::min)
}

/// Moves `x` onto the feasible set along the ray from the origin.
///
/// The point is first clamped to the box. Along the ray the weights are
/// `c(t·x) = (1 − t)·c(0) + t·c(x)` with `c(0)` uniform, and the partial
/// transpose of the uniform state is `1/d²`, so the smallest PT eigenvalue
/// `(1 − t)/d² + t·λ` is affine in `t` as well. Both constraints are
/// therefore restored exactly.
pub fn project(ev: &FamilyEvaluator, bx: &SearchBox, x: [f64; 4]) -> Result<[f64; 4]> {
    let d = ev.dim();
    let x = bx.clamp(x);
    let center = 1.0 / (d * d) as f64;
    let lambda = ev.min_pt_eigenvalue(&coeffs(d, x))?;
    let t_ppt = if lambda < 0.0 {
        center / (center - lambda)
    } else {
        1.0
    };
    let t = positivity_radius(d, x).min(t_ppt);
    Ok(x.map(|v| t * v))
}

fn coeffs(d: usize, x: [f64; 4]) -> SimplexCoefficients {
    family_coefficients(&FamilyParams::from_array(d, x))
}

/// Lexicographic order on parameter tuples.
fn lex_cmp(a: &[f64; 4], b: &[f64; 4]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Minimises `bound − I_m` over the positive PPT part of the family for the
/// bases held by `ev`.
///
/// Stage one scores a regular grid over the search box, rejecting
/// infeasible points. Stage two runs simplex descent on the radially
/// projected objective from the best `refine_starts` grid points, then
/// restarts once from the overall best point.
pub fn optimize_witness(
    ev: &FamilyEvaluator,
    cfg: &ExplorerConfig,
    exec: Execution,
) -> Result<OptimizeResult> {
    cfg.validate()?;
    let d = ev.dim();
    let bx = cfg.search_box(d);
    let axes = bx.active_axes();
    let bound = ev.bound();
    let tol = ev.tol();

    // coarse stage
    let ticks: Vec<Vec<f64>> = (0..4)
        .map(|a| {
            if axes.contains(&a) {
                bx.axis_points(a, cfg.coarse_points)
            } else {
                vec![bx.lo[a]]
            }
        })
        .collect();
    let mut grid = Vec::new();
    for &a in &ticks[0] {
        for &b in &ticks[1] {
            for &c in &ticks[2] {
                for &e in &ticks[3] {
                    grid.push([a, b, c, e]);
                }
            }
        }
    }
    let coarse_total = grid.len();
    let candidates: Vec<[f64; 4]> = grid
        .into_iter()
        .filter(|&x| coeffs(d, x).min() >= -tol)
        .collect();
    let scored: Vec<Result<Option<f64>>> = exec.map(&candidates, |&x| {
        let c = coeffs(d, x);
        if ev.min_pt_eigenvalue(&c)? < -tol {
            return Ok(None);
        }
        Ok(Some(bound - ev.witness(&c)))
    });
    let mut ranked = Vec::new();
    for (x, s) in candidates.iter().zip(scored) {
        if let Some(v) = s? {
            ranked.push((v, *x));
        }
    }
    let coarse_feasible = ranked.len();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| lex_cmp(&a.1, &b.1)));
    if ranked.is_empty() {
        // the origin is always feasible
        ranked.push((bound - ev.witness(&coeffs(d, [0.0; 4])), [0.0; 4]));
    }

    // refinement over the active coordinates only
    let embed = |y: &[f64]| -> [f64; 4] {
        let mut x = [0.0; 4];
        for (k, &a) in axes.iter().enumerate() {
            x[a] = y[k];
        }
        x
    };
    let failure = std::cell::RefCell::new(None);
    let objective = |y: &[f64]| -> f64 {
        match project(ev, &bx, embed(y)) {
            Ok(x) => bound - ev.witness(&coeffs(d, x)),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        }
    };
    let step: Vec<f64> = axes.iter().map(|&a| 0.05 * bx.width(a)).collect();
    let mut evaluations = 0;
    // (value, point, converged); ties go to the lexicographically smaller point
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    let consider = |best: &mut Option<(f64, Vec<f64>, bool)>, m: super::nelder_mead::Minimum| {
        let better = match best {
            None => true,
            Some((v, y, _)) => m.value < *v || (m.value == *v && lex_cmp(&embed(&m.x), &embed(y)).is_lt()),
        };
        if better {
            *best = Some((m.value, m.x, m.converged));
        }
    };
    for (_, start) in ranked.iter().take(cfg.refine_starts) {
        let y0: Vec<f64> = axes.iter().map(|&a| start[a]).collect();
        let m = nelder_mead(&objective, &y0, &step, cfg.step_tol, cfg.max_iterations);
        evaluations += m.evaluations;
        consider(&mut best, m);
    }
    let y_best = best.as_ref().expect("at least one start").1.clone();
    let m = nelder_mead(&objective, &y_best, &step, cfg.step_tol, cfg.max_iterations);
    evaluations += m.evaluations;
    let restart_converged = m.converged;
    consider(&mut best, m);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let (_, y, converged) = best.expect("at least one start");

    let x = project(ev, &bx, embed(&y))?;
    let p = FamilyParams::from_array(d, x);
    let c = ev.classify_params(&p)?;
    Ok(OptimizeResult {
        d,
        labels: ev.options().labels,
        m: ev.mubs().len(),
        q1: x[0],
        q2: x[1],
        q3: x[2],
        q: x[3],
        value: bound - c.witness,
        witness: c.witness,
        bound,
        min_coefficient: c.min_coefficient.unwrap_or(f64::NAN),
        min_pt_eigenvalue: c.min_pt_eigenvalue,
        positive: c.positive,
        ppt: c.ppt,
        detected: c.detected,
        coarse_feasible,
        coarse_total,
        evaluations,
        converged: converged && restart_converged,
    })
}

/// Extremises the complete-set witness `I_{d+1}` in dimension `d`.
pub fn optimize_extreme(
    d: usize,
    labels: LabelingMode,
    cfg: &ExplorerConfig,
    exec: Execution,
) -> Result<OptimizeResult> {
    if !COMPLETE_DIMENSIONS.contains(&d) {
        return Err(Error::UnsupportedDimension {
            d,
            supported: "2, 3, 4, 5, 7, 8, 9",
        });
    }
    let mubs = build_complete_mub(d)?;
    let opts = WitnessOptions {
        labels,
        ..WitnessOptions::default()
    };
    let ev = FamilyEvaluator::new(&mubs, opts, cfg.tol)?;
    optimize_witness(&ev, cfg, exec)
}
