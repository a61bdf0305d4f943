use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::criteria::DEFAULT_TOL;
use crate::error::{Error, Result};
use crate::mub::CONSTRUCTION_TOL;

/// Axis-aligned bounds on `(q1, q2, q3, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl SearchBox {
    pub fn new(lo: [f64; 4], hi: [f64; 4]) -> Result<Self> {
        for i in 0..4 {
            if !(lo[i].is_finite() && hi[i].is_finite() && lo[i] <= hi[i]) {
                return Err(Error::InvalidParameter(format!(
                    "search box axis {i}: [{}, {}] is not a finite interval",
                    lo[i], hi[i]
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    /// Smallest box holding every positive family state.
    ///
    /// Each parameter is extremal on a vertex of the Bell simplex, so the
    /// bounds follow from putting all weight on one block: `q1 ∈ [−N/d, N]`
    /// with `N = d² − d − 1`, `q2 ∈ [−(d² − 1)/d, d + 1]`, `q3 ∈ [−1, 1]`
    /// and `q ∈ [−1, 1/(d − 3)]`. For `d ≤ 3` the `q` axis is pinned to 0.
    pub fn for_dim(d: usize) -> Self {
        let df = d as f64;
        let n1 = df * df - df - 1.0;
        let (q_lo, q_hi) = if d > 3 { (-1.0, 1.0 / (df - 3.0)) } else { (0.0, 0.0) };
        Self {
            lo: [-n1 / df, -(df * df - 1.0) / df, -1.0, q_lo],
            hi: [n1, df + 1.0, 1.0, q_hi],
        }
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    /// Axes with nonzero width.
    pub fn active_axes(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.width(i) > 0.0).collect()
    }

    pub fn clamp(&self, x: [f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| x[i].clamp(self.lo[i], self.hi[i]))
    }

    pub fn contains(&self, x: &[f64; 4]) -> bool {
        (0..4).all(|i| x[i] >= self.lo[i] && x[i] <= self.hi[i])
    }

    /// `n` evenly spaced values on one axis, endpoints included.
    pub fn axis_points(&self, axis: usize, n: usize) -> Vec<f64> {
        linspace(self.lo[axis], self.hi[axis], n)
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Tunables shared by the explorer commands; every field has a default so a
/// config file may list only what it overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplorerConfig {
    /// Slack for positivity and PPT decisions.
    pub tol: f64,
    /// Overlap tolerance for MUB verification.
    pub mub_tol: f64,
    /// Points per axis in slice scans.
    pub grid: usize,
    /// Points per active axis in the optimizer's coarse stage.
    pub coarse_points: usize,
    /// Number of coarse candidates refined by simplex descent.
    pub refine_starts: usize,
    /// Simplex descent stops once every vertex is this close to the best.
    pub step_tol: f64,
    pub max_iterations: usize,
    /// Overrides [`SearchBox::for_dim`].
    pub search_box: Option<SearchBox>,
    /// Seed for every random sampler.
    pub seed: u64,
}

impl Default for ExplorerConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            mub_tol: CONSTRUCTION_TOL,
            grid: 200,
            coarse_points: 21,
            refine_starts: 5,
            step_tol: 1e-6,
            max_iterations: 5000,
            search_box: None,
            seed: 0,
        }
    }
}

impl ExplorerConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let cfg: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return bad("tol must be a finite non-negative number");
        }
        if !(self.mub_tol >= 0.0 && self.mub_tol.is_finite()) {
            return bad("mub_tol must be a finite non-negative number");
        }
        if self.grid < 2 {
            return bad("grid must be at least 2");
        }
        if self.coarse_points < 2 {
            return bad("coarse_points must be at least 2");
        }
        if self.refine_starts == 0 {
            return bad("refine_starts must be at least 1");
        }
        if !(self.step_tol > 0.0) {
            return bad("step_tol must be positive");
        }
        if let Some(b) = &self.search_box {
            SearchBox::new(b.lo, b.hi)?;
        }
        Ok(())
    }

    pub fn search_box(&self, d: usize) -> SearchBox {
        self.search_box.unwrap_or_else(|| SearchBox::for_dim(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{family_coefficients, FamilyParams};

    /// Parameters of the family state that is uniform on each block of
    /// Bell weights: `(0,0)`, `(i≥1, 0)`, column 1, columns `2..=d−2`, and
    /// the remaining base entries.
    fn params_from_blocks(d: usize, w: [f64; 5]) -> [f64; 4] {
        let df = d as f64;
        let [w00, wa, w1, wz, wb] = w;
        [
            (df * df - df - 1.0) * (w00 - wb),
            (df * df - 1.0) * (wa - wb),
            df * (w1 - wb),
            if d > 3 { df * (wz - wb) } else { 0.0 },
        ]
    }

    fn block_sizes(d: usize) -> [f64; 5] {
        let df = d as f64;
        let nz = d.saturating_sub(3) as f64;
        [1.0, df - 1.0, df, df * nz, df * df - 1.0 - (df - 1.0) - df - df * nz]
    }

    #[test]
    fn box_is_hull_of_block_vertices() {
        for d in [3, 4, 5, 7, 8, 9] {
            let b = SearchBox::for_dim(d);
            let sizes = block_sizes(d);
            let mut lo = [f64::INFINITY; 4];
            let mut hi = [f64::NEG_INFINITY; 4];
            for (j, &n) in sizes.iter().enumerate() {
                if n == 0.0 {
                    continue;
                }
                let mut w = [0.0; 5];
                w[j] = 1.0 / n;
                let x = params_from_blocks(d, w);
                let c = family_coefficients(&FamilyParams::from_array(d, x));
                assert!(c.min() > -1e-12);
                for i in 0..4 {
                    lo[i] = lo[i].min(x[i]);
                    hi[i] = hi[i].max(x[i]);
                }
            }
            for i in 0..4 {
                assert!((lo[i] - b.lo[i]).abs() < 1e-12, "d={d} axis {i}");
                assert!((hi[i] - b.hi[i]).abs() < 1e-12, "d={d} axis {i}");
            }
        }
    }

    #[test]
    fn random_positive_states_lie_in_box() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for d in [3, 4, 5, 9] {
            let b = SearchBox::for_dim(d);
            let sizes = block_sizes(d);
            for _ in 0..500 {
                let raw: [f64; 5] = std::array::from_fn(|j| {
                    if sizes[j] > 0.0 { rng.gen::<f64>().powi(3) } else { 0.0 }
                });
                let total: f64 = raw.iter().zip(&sizes).map(|(r, n)| r * n).sum();
                let x = params_from_blocks(d, raw.map(|r| r / total));
                assert!((0..4).all(|i| x[i] >= b.lo[i] - 1e-12 && x[i] <= b.hi[i] + 1e-12));
                let c = family_coefficients(&FamilyParams::from_array(d, x));
                assert!(c.min() > -1e-12);
            }
        }
    }

    #[test]
    fn partial_config_fills_defaults() {
        let cfg: ExplorerConfig = serde_json::from_str(r#"{"grid": 50, "seed": 9}"#).unwrap();
        assert_eq!(cfg.grid, 50);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.coarse_points, 21);
        assert!(serde_json::from_str::<ExplorerConfig>(r#"{"gird": 5}"#).is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = ExplorerConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.grid = 1;
        assert!(cfg.validate().is_err());
        assert!(SearchBox::new([0.0; 4], [-1.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(-0.3, 0.7, 11);
        assert_eq!(v[0], -0.3);
        assert_eq!(v[10], 0.7);
        assert!((v[5] - 0.2).abs() < 1e-15);
    }
}
