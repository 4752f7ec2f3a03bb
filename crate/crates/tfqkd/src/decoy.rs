//! Decoy-state estimation: bounds the Fock-state yields `Y_{n,m}` from
//! phase-randomized (decoy mode 1) gains by linear programming over the
//! truncated photon-number expansion of the gain/yield relation.
//!
//! Truncation is handled by explicit two-sided slack: the observed gain is
//! an upper bound on the truncated mixture, and the truncated Poisson mass
//! (worst-case yield 1) bounds it from below. Security-side bounds stay
//! one-sided-safe this way.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::GainTable;
use crate::lp::{LpError, RangeRow, SharedRegion};
use crate::numerics::{poisson_table, Probability};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecoyError {
    #[error("intensity configuration: {0}")]
    InvalidIntensities(String),
    #[error("yield cutoff {0} is too small, need at least 3")]
    CutoffTooSmall(u32),
    #[error("gain table has no d1 entry for ({0}, {1})")]
    MissingGain(f64, f64),
    #[error(
        "gains are inconsistent with any photon-number yields \
         (residual {residual:.3e}) at intensity pairs {pairs:?}"
    )]
    InconsistentGains {
        residual: f64,
        pairs: Vec<(f64, f64)>,
    },
    #[error("yield bound for ({n}, {m}) escaped [0, 1]: [{lo}, {hi}]")]
    BoundOutOfRange { n: u32, m: u32, lo: f64, hi: f64 },
    #[error("solver: {0}")]
    Solver(#[from] LpError),
}

/// The code intensity μ plus the decoy intensity sets: `i1` for the
/// phase-randomized mode and `i2 ⊆ i1` for the phase-locked mode. Both sets
/// contain μ; `i1` contains the vacuum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityConfig {
    mu: f64,
    i1: Vec<f64>,
    i2: Vec<f64>,
    i1_decoys: Vec<f64>,
    i2_decoys: Vec<f64>,
}

impl IntensityConfig {
    /// Builds the configuration from the code intensity and the decoy
    /// intensities (μ excluded, vacuum included).
    pub fn new(mu: f64, i1_decoys: &[f64], i2_decoys: &[f64]) -> Result<Self, DecoyError> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(DecoyError::InvalidIntensities(format!(
                "mu must be positive and finite, got {mu}"
            )));
        }
        for &w in i1_decoys.iter().chain(i2_decoys) {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(DecoyError::InvalidIntensities(format!(
                    "intensity {w} must be non-negative and finite"
                )));
            }
            if w == mu {
                return Err(DecoyError::InvalidIntensities(format!(
                    "decoy intensity {w} collides with mu"
                )));
            }
        }
        for &w in i2_decoys {
            if !i1_decoys.contains(&w) {
                return Err(DecoyError::InvalidIntensities(format!(
                    "i2 intensity {w} is not in i1"
                )));
            }
        }
        let mut i1: Vec<f64> = i1_decoys.to_vec();
        i1.push(mu);
        i1.sort_by(f64::total_cmp);
        if i1.windows(2).any(|w| w[0] == w[1]) {
            return Err(DecoyError::InvalidIntensities(
                "intensities must be pairwise distinct".into(),
            ));
        }
        if i1.first() != Some(&0.0) {
            return Err(DecoyError::InvalidIntensities(
                "i1 must contain the vacuum intensity 0".into(),
            ));
        }
        let mut i2: Vec<f64> = i2_decoys.to_vec();
        i2.push(mu);
        i2.sort_by(f64::total_cmp);
        Ok(IntensityConfig {
            mu,
            i1,
            i2,
            i1_decoys: i1_decoys.to_vec(),
            i2_decoys: i2_decoys.to_vec(),
        })
    }

    /// The same decoy sets with a different code intensity.
    pub fn with_mu(&self, mu: f64) -> Result<Self, DecoyError> {
        IntensityConfig::new(mu, &self.i1_decoys, &self.i2_decoys)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Full decoy-mode-1 set, sorted ascending, μ included.
    pub fn i1(&self) -> &[f64] {
        &self.i1
    }

    /// Full decoy-mode-2 set, sorted ascending, μ included.
    pub fn i2(&self) -> &[f64] {
        &self.i2
    }

    pub fn i1_decoys(&self) -> &[f64] {
        &self.i1_decoys
    }

    pub fn i2_decoys(&self) -> &[f64] {
        &self.i2_decoys
    }
}

/// Certified per-`(n, m)` yield intervals up to a photon cutoff.
#[derive(Debug, Clone)]
pub struct YieldBounds {
    cutoff: u32,
    lower: Vec<Probability>,
    upper: Vec<Probability>,
}

impl YieldBounds {
    /// Assembles bounds from explicit per-`(n, m)` intervals, row-major with
    /// side `cutoff + 1`; used when yields come from an external analysis.
    pub fn from_intervals(
        cutoff: u32,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self, DecoyError> {
        let side = cutoff as usize + 1;
        if lower.len() != side * side || upper.len() != side * side {
            return Err(DecoyError::InvalidIntensities(format!(
                "need {} entries, got {} lower / {} upper",
                side * side,
                lower.len(),
                upper.len()
            )));
        }
        let mut lo_out = Vec::with_capacity(lower.len());
        let mut hi_out = Vec::with_capacity(upper.len());
        for (v, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            let n = (v / side) as u32;
            let m = (v % side) as u32;
            let hi_p = Probability::clamped(hi, 1e-9)
                .map_err(|_| DecoyError::BoundOutOfRange { n, m, lo, hi })?;
            let lo_p = Probability::clamped(lo.min(hi_p.value()), 1e-9)
                .map_err(|_| DecoyError::BoundOutOfRange { n, m, lo, hi })?;
            lo_out.push(lo_p);
            hi_out.push(hi_p);
        }
        Ok(YieldBounds {
            cutoff,
            lower: lo_out,
            upper: hi_out,
        })
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    fn index(&self, n: u32, m: u32) -> usize {
        assert!(
            n <= self.cutoff && m <= self.cutoff,
            "({n}, {m}) beyond yield cutoff {}",
            self.cutoff
        );
        (n as usize) * (self.cutoff as usize + 1) + m as usize
    }

    pub fn lower(&self, n: u32, m: u32) -> Probability {
        self.lower[self.index(n, m)]
    }

    pub fn upper(&self, n: u32, m: u32) -> Probability {
        self.upper[self.index(n, m)]
    }
}

/// Bounds every yield `Y_{n,m}` with `n, m ≤ cutoff` by a pair of linear
/// programs over the shared decoy-mode-1 feasible region.
pub fn bound_yields(
    gains: &GainTable,
    intensities: &IntensityConfig,
    cutoff: u32,
) -> Result<YieldBounds, DecoyError> {
    if cutoff < 3 {
        return Err(DecoyError::CutoffTooSmall(cutoff));
    }
    let side = cutoff as usize + 1;
    let vars = side * side;
    let tables: Vec<Vec<f64>> = intensities
        .i1()
        .iter()
        .map(|&w| poisson_table(w, cutoff))
        .collect();

    let mut rows = Vec::with_capacity(intensities.i1().len() * intensities.i1().len());
    let mut row_pairs = Vec::with_capacity(rows.capacity());
    for (a, &w1) in intensities.i1().iter().enumerate() {
        for (b, &w2) in intensities.i1().iter().enumerate() {
            let q = gains
                .d1(w1, w2)
                .ok_or(DecoyError::MissingGain(w1, w2))?
                .value();
            let mut coeffs = vec![0.0; vars];
            for (n, &pn) in tables[a].iter().enumerate() {
                for (m, &pm) in tables[b].iter().enumerate() {
                    coeffs[n * side + m] = pn * pm;
                }
            }
            let mass1: f64 = tables[a].iter().sum();
            let mass2: f64 = tables[b].iter().sum();
            let tail = (1.0 - mass1 * mass2).max(0.0);
            // the observed gain caps the truncated mixture from above and,
            // less the truncated Poisson mass, from below
            rows.push(RangeRow::new(coeffs, q - tail, q));
            row_pairs.push((w1, w2));
        }
    }

    // presolve: the rows with a vacuum arm involve only the border yields
    // Y_{0,b} and Y_{a,0}, so tiny axis programs bound them first; feeding
    // those intervals in as variable boxes is an exact refinement (they are
    // implied by a subset of the rows) and removes most of the degenerate
    // freedom that otherwise wrecks the full programs at long distance.
    let mut bounds = vec![(0.0, 1.0); vars];
    for b in 0..=cutoff {
        if let (Ok(lo), Ok(hi)) = (
            axis_bound(gains, intensities, cutoff, 0, b, false),
            axis_bound(gains, intensities, cutoff, 0, b, true),
        ) {
            let lo = lo.clamp(0.0, 1.0);
            bounds[b as usize] = (lo, hi.clamp(lo, 1.0));
        }
        if b > 0 {
            if let (Ok(lo), Ok(hi)) = (
                axis_bound(gains, intensities, cutoff, b, 0, false),
                axis_bound(gains, intensities, cutoff, b, 0, true),
            ) {
                let lo = lo.clamp(0.0, 1.0);
                bounds[b as usize * side] = (lo, hi.clamp(lo, 1.0));
            }
        }
    }

    let mut region = SharedRegion::from_ranges(&rows, &bounds)?;
    if let Some(info) = region.infeasibility() {
        let mut pairs: Vec<(f64, f64)> = info.rows.iter().map(|&r| row_pairs[r]).collect();
        pairs.dedup();
        return Err(DecoyError::InconsistentGains {
            residual: info.residual,
            pairs,
        });
    }

    let mut lower = Vec::with_capacity(vars);
    let mut upper = Vec::with_capacity(vars);
    let mut objective = vec![0.0; vars];
    for v in 0..vars {
        let n = (v / side) as u32;
        let m = (v % side) as u32;
        objective[v] = 1.0;
        let hi = region.maximize_bound(&objective)?;
        let lo = region.minimize_bound(&objective)?;
        objective[v] = 0.0;

        let hi = Probability::clamped(hi.clamp(-1e-7, 1.0 + 1e-7), 1e-7)
            .map_err(|_| DecoyError::BoundOutOfRange { n, m, lo, hi })?;
        let lo = Probability::clamped(lo.clamp(-1e-7, hi.value()), 1e-7)
            .map_err(|_| DecoyError::BoundOutOfRange { n, m, lo, hi: hi.value() })?;
        lower.push(lo);
        upper.push(hi);
    }
    Ok(YieldBounds {
        cutoff,
        lower,
        upper,
    })
}

/// Relaxation keeping only the rows with a vacuum intensity on the other
/// arm; those rows involve exactly the single-sided yields, so the program
/// is tiny and well conditioned.
fn axis_bound(
    gains: &GainTable,
    intensities: &IntensityConfig,
    cutoff: u32,
    n: u32,
    m: u32,
    maximize: bool,
) -> Result<f64, DecoyError> {
    let first_axis = m == 0 && n != 0; // rows (ω, 0) constrain Y_{a,0}
    let target = if first_axis { n } else { m } as usize;
    let vars = cutoff as usize + 1;
    let mut rows = Vec::new();
    for &w in intensities.i1() {
        let q = if first_axis {
            gains.d1(w, 0.0)
        } else {
            gains.d1(0.0, w)
        };
        let Some(q) = q else { continue };
        let table = poisson_table(w, cutoff);
        let mass: f64 = table.iter().sum();
        rows.push(RangeRow::new(
            table,
            q.value() - (1.0 - mass).max(0.0),
            q.value(),
        ));
    }
    let bounds = vec![(0.0, 1.0); vars];
    let mut region = SharedRegion::from_ranges(&rows, &bounds)?;
    if region.infeasibility().is_some() {
        return Err(DecoyError::Solver(LpError::NumericalBreakdown(
            "axis relaxation infeasible".into(),
        )));
    }
    let mut objective = vec![0.0; vars];
    objective[target] = 1.0;
    if maximize {
        Ok(region.maximize_bound(&objective)?)
    } else {
        Ok(region.minimize_bound(&objective)?)
    }
}
