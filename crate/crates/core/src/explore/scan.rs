use serde::{Deserialize, Serialize};

use super::config::linspace;
use crate::criteria::FamilyEvaluator;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::simplex::FamilyParams;

/// Verdicts at one `(q1, q2)` point of a slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub q1: f64,
    pub q2: f64,
    pub positive: bool,
    pub ppt: bool,
    #[serde(rename = "I")]
    pub i: f64,
    pub detected: bool,
    pub bound_entangled: bool,
}

/// A `(q1, q2)` grid at fixed `(q3, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub q3: f64,
    pub q: f64,
    pub grid: usize,
    pub q1_range: (f64, f64),
    pub q2_range: (f64, f64),
}

impl Slice {
    pub fn q1_values(&self) -> Vec<f64> {
        linspace(self.q1_range.0, self.q1_range.1, self.grid)
    }

    pub fn q2_values(&self) -> Vec<f64> {
        linspace(self.q2_range.0, self.q2_range.1, self.grid)
    }

    /// Grid spacing along q1 and q2.
    pub fn steps(&self) -> (f64, f64) {
        let n = (self.grid - 1) as f64;
        (
            (self.q1_range.1 - self.q1_range.0) / n,
            (self.q2_range.1 - self.q2_range.0) / n,
        )
    }

    /// Parameters of every grid point, q1 outer and q2 inner.
    pub fn points(&self, d: usize) -> Vec<FamilyParams> {
        let q2s = self.q2_values();
        self.q1_values()
            .into_iter()
            .flat_map(|q1| {
                q2s.iter()
                    .map(move |&q2| FamilyParams::new(d, q1, q2, self.q3, self.q))
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid must be at least 2, got {}",
                self.grid
            )));
        }
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a <= b;
        if !ok(self.q1_range) || !ok(self.q2_range) || !self.q3.is_finite() || !self.q.is_finite() {
            return Err(Error::InvalidParameter("slice bounds must be finite".into()));
        }
        Ok(())
    }
}

pub fn record(p: &FamilyParams, ev: &FamilyEvaluator) -> Result<ScanRecord> {
    let c = ev.classify_params(p)?;
    Ok(ScanRecord {
        q1: p.q1,
        q2: p.q2,
        positive: c.positive,
        ppt: c.ppt,
        i: c.witness,
        detected: c.detected,
        bound_entangled: c.bound_entangled,
    })
}

/// Classifies every grid point of `slice`. Records come back in grid order
/// whatever the execution mode.
pub fn scan_slice(ev: &FamilyEvaluator, slice: &Slice, exec: Execution) -> Result<Vec<ScanRecord>> {
    slice.validate()?;
    let points = slice.points(ev.dim());
    exec.map(&points, |p| record(p, ev)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::WitnessOptions;
    use crate::mub::build_complete_mub;

    fn evaluator(d: usize) -> FamilyEvaluator {
        FamilyEvaluator::new(&build_complete_mub(d).unwrap(), WitnessOptions::default(), 1e-10)
            .unwrap()
    }

    fn slice(grid: usize) -> Slice {
        Slice {
            q3: 0.2,
            q: 0.0,
            grid,
            q1_range: (-1.0, 1.0),
            q2_range: (-0.5, 0.5),
        }
    }

    #[test]
    fn row_order_is_q1_outer() {
        let recs = scan_slice(&evaluator(3), &slice(3), Execution::Sequential).unwrap();
        let coords: Vec<(f64, f64)> = recs.iter().map(|r| (r.q1, r.q2)).collect();
        assert_eq!(
            coords,
            vec![
                (-1.0, -0.5),
                (-1.0, 0.0),
                (-1.0, 0.5),
                (0.0, -0.5),
                (0.0, 0.0),
                (0.0, 0.5),
                (1.0, -0.5),
                (1.0, 0.0),
                (1.0, 0.5)
            ]
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let ev = evaluator(3);
        let a = scan_slice(&ev, &slice(15), Execution::Sequential).unwrap();
        let b = scan_slice(&ev, &slice(15), Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn origin_is_maximally_mixed() {
        let ev = evaluator(3);
        let r = record(&FamilyParams::new(3, 0.0, 0.0, 0.0, 0.0), &ev).unwrap();
        assert!(r.positive && r.ppt && !r.detected && !r.bound_entangled);
        assert!((r.i - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_grid() {
        assert!(scan_slice(&evaluator(2), &slice(1), Execution::Sequential).is_err());
    }
}
