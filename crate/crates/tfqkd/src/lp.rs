//! A small dense linear-program solver: two-phase bounded-variable primal
//! simplex with explicit infeasibility and unboundedness reporting.
//!
//! Problem sizes in this crate stay below a few hundred variables and a few
//! dozen rows, so everything is dense. The basis is LU-factored with
//! partial pivoting on column-equilibrated data and refactored after every
//! pivot; all triangular solves run one step of iterative refinement.
//! Decoy-state bases mix Poisson columns spanning thirty orders of
//! magnitude and get ill-conditioned enough that anything less loses
//! digits the certified bounds cannot afford.
//!
//! The yield- and cross-term estimators solve many objectives over one
//! feasible region, so the region is a first-class object:
//! [`SharedRegion::new`] runs phase 1 once, and every
//! [`SharedRegion::maximize`] warm-starts from the previous optimal basis.
//!
//! Pivoting uses a steepest-reduced-cost rule and falls back to Bland's
//! rule after a run of degenerate pivots, which guarantees termination.

use thiserror::Error;

/// Default feasibility tolerance: a point is accepted when every constraint
/// holds within this slack (scaled by row magnitude when verifying).
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Reduced costs below this threshold do not qualify for entering.
const OPTIMALITY_TOL: f64 = 1e-10;
/// Hard floor: below this the basis is declared numerically singular.
/// Iterative refinement recovers full accuracy for condition numbers up to
/// roughly the reciprocal of this value.
const PIVOT_HARD_MIN: f64 = 1e-14;
/// Entering columns whose best admissible pivot is below this are banned
/// for the current vertex and another candidate is priced instead; such
/// pivots would drive the (equilibrated) basis toward singularity.
const WEAK_PIVOT: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const STALL_LIMIT: u32 = 40;
/// Deterministic outward perturbation applied to finite structural bounds
/// (in equilibrated units) to break primal degeneracy; the feasible region
/// only grows, so certified maxima/minima stay sound, and extracted points
/// are clamped back to the true bounds.
const BOUND_PERTURBATION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// A linear program `max objective·x` subject to the constraint rows and
/// per-variable bounds. Bounds may be infinite on either side.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

/// A two-sided row `lo ≤ coeffs·x ≤ hi`; either side may be infinite and
/// `lo == hi` expresses an equality. Two-sided estimation rows use this
/// form directly so the solver sees one row per measurement instead of a
/// pair of nearly identical inequalities.
#[derive(Debug, Clone)]
pub struct RangeRow {
    pub coeffs: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl RangeRow {
    pub fn new(coeffs: Vec<f64>, lo: f64, hi: f64) -> Self {
        RangeRow { coeffs, lo, hi }
    }

    fn from_constraint(c: &Constraint) -> Self {
        let (lo, hi) = match c.relation {
            Relation::Le => (f64::NEG_INFINITY, c.rhs),
            Relation::Ge => (c.rhs, f64::INFINITY),
            Relation::Eq => (c.rhs, c.rhs),
        };
        RangeRow {
            coeffs: c.coeffs.clone(),
            lo,
            hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible { residual: f64 },
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(f64, &[f64])> {
        match self {
            LpOutcome::Optimal { value, point } => Some((*value, point)),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.optimal().map(|(v, _)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("objective has {got} coefficients but there are {expected} variables")]
    ObjectiveMismatch { got: usize, expected: usize },
    #[error("variable {var} has invalid bounds [{lo}, {hi}]")]
    InvalidBounds { var: usize, lo: f64, hi: f64 },
    #[error("row {row} has invalid range [{lo}, {hi}]")]
    InvalidRange { row: usize, lo: f64, hi: f64 },
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
}

/// Rows that could not be satisfied, reported when phase 1 fails.
#[derive(Debug, Clone)]
pub struct InfeasibleInfo {
    /// Total residual infeasibility at the phase-1 optimum.
    pub residual: f64,
    /// Indices of the constraint rows left violated.
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    FreeAtZero,
}

enum RunStatus {
    Optimal,
    Unbounded,
}

/// A feasible region (constraints plus bounds) shared by several objectives.
///
/// Phase 1 runs once at construction; infeasibility is remembered and
/// reported by every subsequent solve. Each `maximize`/`minimize` call
/// warm-starts the simplex from the basis the previous call ended on.
pub struct SharedRegion {
    n: usize,
    m: usize,
    /// Structural columns, column-major (`n` columns of length `m`).
    cols: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    row_lo: Vec<f64>,
    row_hi: Vec<f64>,
    /// Bounds for all `n + 2m` variables (structural, slack, artificial),
    /// in equilibrated coordinates.
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// Per-variable equilibration factor: the solver works on `x' = κ x`
    /// with unit-norm structural columns, which keeps basis conditioning
    /// geometric instead of scale-driven. Exact substitution, undone at
    /// extraction.
    var_scale: Vec<f64>,
    /// Caller-supplied bounds, for clamping extracted points.
    raw_bounds: Vec<(f64, f64)>,
    art_sign: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    /// Current basis matrix, row-major, columns by basis position.
    bmat: Vec<f64>,
    /// Packed LU factors of the column-equilibrated basis.
    lu: Vec<f64>,
    perm: Vec<usize>,
    col_scale: Vec<f64>,
    xb: Vec<f64>,
    infeasible: Option<InfeasibleInfo>,
    feas_tol: f64,
}

impl SharedRegion {
    pub fn new(constraints: &[Constraint], bounds: &[(f64, f64)]) -> Result<Self, LpError> {
        Self::with_tolerance(constraints, bounds, FEASIBILITY_TOL)
    }

    pub fn with_tolerance(
        constraints: &[Constraint],
        bounds: &[(f64, f64)],
        feas_tol: f64,
    ) -> Result<Self, LpError> {
        let rows: Vec<RangeRow> = constraints.iter().map(RangeRow::from_constraint).collect();
        Self::from_ranges_with_tolerance(&rows, bounds, feas_tol)
    }

    pub fn from_ranges(rows: &[RangeRow], bounds: &[(f64, f64)]) -> Result<Self, LpError> {
        Self::from_ranges_with_tolerance(rows, bounds, FEASIBILITY_TOL)
    }

    pub fn from_ranges_with_tolerance(
        rows: &[RangeRow],
        bounds: &[(f64, f64)],
        feas_tol: f64,
    ) -> Result<Self, LpError> {
        let n = bounds.len();
        let m = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    row,
                    got: r.coeffs.len(),
                    expected: n,
                });
            }
            if r.lo.is_nan() || r.hi.is_nan() || r.lo > r.hi {
                return Err(LpError::InvalidRange {
                    row,
                    lo: r.lo,
                    hi: r.hi,
                });
            }
        }
        for (var, &(lo, hi)) in bounds.iter().enumerate() {
            let ok = !lo.is_nan() && !hi.is_nan() && lo <= hi && lo < f64::INFINITY
                && hi > f64::NEG_INFINITY;
            if !ok {
                return Err(LpError::InvalidBounds { var, lo, hi });
            }
        }

        let total = n + 2 * m;
        let mut lo_all = Vec::with_capacity(total);
        let mut hi_all = Vec::with_capacity(total);
        for &(l, h) in bounds {
            lo_all.push(l);
            hi_all.push(h);
        }
        // slack turns `lo ≤ a·x ≤ hi` into `a·x + s = rhs`
        let mut rhs = Vec::with_capacity(m);
        for r in rows {
            let (slack_lo, slack_hi, b) = match (r.lo.is_finite(), r.hi.is_finite()) {
                (true, true) => (0.0, r.hi - r.lo, r.hi),
                (false, true) => (0.0, f64::INFINITY, r.hi),
                (true, false) => (f64::NEG_INFINITY, 0.0, r.lo),
                (false, false) => (f64::NEG_INFINITY, f64::INFINITY, 0.0),
            };
            lo_all.push(slack_lo);
            hi_all.push(slack_hi);
            rhs.push(b);
        }
        // artificial bounds; pinned to [0, 0] once phase 1 succeeds
        for _ in 0..m {
            lo_all.push(0.0);
            hi_all.push(f64::INFINITY);
        }

        let mut cols = vec![vec![0.0; m]; n];
        for (i, r) in rows.iter().enumerate() {
            for (j, &a) in r.coeffs.iter().enumerate() {
                cols[j][i] = a;
            }
        }
        // equilibrate: substitute x' = κ x so every nonzero structural
        // column has unit max magnitude
        let mut var_scale = vec![1.0; n];
        for j in 0..n {
            let norm = cols[j].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if norm > 0.0 {
                var_scale[j] = norm;
                for v in cols[j].iter_mut() {
                    *v /= norm;
                }
                lo_all[j] *= norm;
                hi_all[j] *= norm;
            }
        }
        // break primal degeneracy: relax finite structural bounds outward
        // by distinct deterministic amounts
        const GOLDEN: f64 = 0.618_033_988_749_894_9;
        for j in 0..n {
            let eps = BOUND_PERTURBATION * (1.0 + (j as f64 * GOLDEN).fract());
            if lo_all[j].is_finite() {
                lo_all[j] -= eps;
            }
            if hi_all[j].is_finite() {
                hi_all[j] += eps;
            }
        }

        let mut state = Vec::with_capacity(total);
        for j in 0..n + m {
            state.push(if lo_all[j].is_finite() {
                VarState::AtLower
            } else if hi_all[j].is_finite() {
                VarState::AtUpper
            } else {
                VarState::FreeAtZero
            });
        }
        for _ in 0..m {
            state.push(VarState::Basic);
        }

        let mut region = SharedRegion {
            n,
            m,
            cols,
            rhs,
            row_lo: rows.iter().map(|r| r.lo).collect(),
            row_hi: rows.iter().map(|r| r.hi).collect(),
            lo: lo_all,
            hi: hi_all,
            var_scale,
            raw_bounds: bounds.to_vec(),
            art_sign: vec![1.0; m],
            basis: (0..m).map(|i| n + m + i).collect(),
            state,
            bmat: vec![0.0; m * m],
            lu: vec![0.0; m * m],
            perm: (0..m).collect(),
            col_scale: vec![1.0; m],
            xb: vec![0.0; m],
            infeasible: None,
            feas_tol,
        };

        // residuals with every non-artificial variable at its resting value
        let mut residual = region.rhs.clone();
        for j in 0..n {
            let x = region.resting(j);
            if x != 0.0 {
                for i in 0..m {
                    residual[i] -= region.cols[j][i] * x;
                }
            }
        }
        for (i, &r) in residual.iter().enumerate() {
            region.art_sign[i] = if r >= 0.0 { 1.0 } else { -1.0 };
            region.bmat[i * m + i] = region.art_sign[i];
            region.xb[i] = r.abs();
        }
        region.factor()?;

        if m > 0 {
            let mut phase1 = vec![0.0; total];
            for j in n + m..total {
                phase1[j] = -1.0;
            }
            match region.optimize(&phase1)? {
                RunStatus::Optimal => {}
                RunStatus::Unbounded => {
                    return Err(LpError::NumericalBreakdown(
                        "phase 1 reported unbounded".into(),
                    ));
                }
            }
            let mut total_violation = 0.0;
            let mut bad_rows = Vec::new();
            for (pos, &var) in region.basis.iter().enumerate() {
                if var >= n + m && region.xb[pos] > feas_tol {
                    total_violation += region.xb[pos];
                    bad_rows.push(var - n - m);
                }
            }
            if total_violation > feas_tol {
                bad_rows.sort_unstable();
                region.infeasible = Some(InfeasibleInfo {
                    residual: total_violation,
                    rows: bad_rows,
                });
            } else {
                for j in n + m..total {
                    region.lo[j] = 0.0;
                    region.hi[j] = 0.0;
                    if region.state[j] != VarState::Basic {
                        region.state[j] = VarState::AtLower;
                    }
                }
            }
        }
        Ok(region)
    }

    /// Why phase 1 failed, if it did.
    pub fn infeasibility(&self) -> Option<&InfeasibleInfo> {
        self.infeasible.as_ref()
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn maximize(&mut self, objective: &[f64]) -> Result<LpOutcome, LpError> {
        if objective.len() != self.n {
            return Err(LpError::ObjectiveMismatch {
                got: objective.len(),
                expected: self.n,
            });
        }
        if let Some(info) = &self.infeasible {
            return Ok(LpOutcome::Infeasible {
                residual: info.residual,
            });
        }
        let mut c = vec![0.0; self.n + 2 * self.m];
        for (j, &cj) in objective.iter().enumerate() {
            c[j] = cj / self.var_scale[j];
        }
        match self.optimize(&c)? {
            RunStatus::Unbounded => Ok(LpOutcome::Unbounded),
            RunStatus::Optimal => {
                let scaled = self.extract_point();
                self.verify(&scaled).map_err(|why| {
                    LpError::NumericalBreakdown(format!(
                        "optimal point failed feasibility verification: {why}"
                    ))
                })?;
                let point: Vec<f64> = scaled
                    .iter()
                    .zip(&self.var_scale)
                    .zip(&self.raw_bounds)
                    .map(|((x, k), &(lo, hi))| (x / k).clamp(lo, hi))
                    .collect();
                let value = dot(objective, &point);
                Ok(LpOutcome::Optimal { value, point })
            }
        }
    }

    pub fn minimize(&mut self, objective: &[f64]) -> Result<LpOutcome, LpError> {
        let negated: Vec<f64> = objective.iter().map(|v| -v).collect();
        Ok(match self.maximize(&negated)? {
            LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
                value: -value,
                point,
            },
            other => other,
        })
    }

    /// A certified upper bound on `max objective·x`, safe against solver
    /// imperfection: whatever state the simplex reaches, the final dual
    /// multipliers give a weak-duality bound over the row ranges and
    /// variable boxes (Neumaier–Shcherbina style), evaluated directly with
    /// a rounding margin. At a clean optimum it coincides with the optimal
    /// value to machine precision.
    pub fn maximize_bound(&mut self, objective: &[f64]) -> Result<f64, LpError> {
        if objective.len() != self.n {
            return Err(LpError::ObjectiveMismatch {
                got: objective.len(),
                expected: self.n,
            });
        }
        if self.infeasible.is_some() {
            return Err(LpError::NumericalBreakdown(
                "certified bound requested on an infeasible region".into(),
            ));
        }
        let mut c = vec![0.0; self.n + 2 * self.m];
        for (j, &cj) in objective.iter().enumerate() {
            c[j] = cj / self.var_scale[j];
        }
        // run the simplex for good duals; any failure still leaves usable
        // multipliers behind
        let _ = self.optimize(&c);
        Ok(self.dual_bound(&c))
    }

    /// A certified lower bound on `min objective·x`; see
    /// [`SharedRegion::maximize_bound`].
    pub fn minimize_bound(&mut self, objective: &[f64]) -> Result<f64, LpError> {
        let negated: Vec<f64> = objective.iter().map(|v| -v).collect();
        Ok(-self.maximize_bound(&negated)?)
    }

    /// Weak-duality bound for the current multipliers: for any λ,
    /// `c·x = λ·(Ax) + (c − A^T λ)·x ≤ Σ_i sup λ_i [L_i,U_i] + Σ_j sup r_j [l_j,u_j]`.
    fn dual_bound(&self, c: &[f64]) -> f64 {
        let m = self.m;
        let mut y = vec![0.0; m];
        let mut cb = vec![0.0; m];
        let mut r = vec![0.0; m];
        let mut dd = vec![0.0; m];
        let mut work = vec![0.0; m];
        for (pos, &var) in self.basis.iter().enumerate() {
            cb[pos] = c[var];
        }
        self.solve_transpose_refined(&cb, &mut y, &mut r, &mut dd, &mut work);
        for i in 0..m {
            // any multiplier vector is valid, so garbage entries from a
            // degenerate solve simply become zeros; rows with an infinite
            // side force the multiplier sign
            if !y[i].is_finite() {
                y[i] = 0.0;
            }
            if !self.row_hi[i].is_finite() && y[i] > 0.0 {
                y[i] = 0.0;
            }
            if !self.row_lo[i].is_finite() && y[i] < 0.0 {
                y[i] = 0.0;
            }
        }
        let mut bound = 0.0;
        let mut mag = 0.0;
        for i in 0..m {
            let t = if y[i] > 0.0 {
                y[i] * self.row_hi[i]
            } else {
                y[i] * self.row_lo[i]
            };
            bound += t;
            mag += t.abs();
        }
        // the reduced costs suffer cancellation when the multipliers are
        // large, so each carries an explicit rounding-error allowance
        let cancel = (m as f64 + 2.0) * f64::EPSILON;
        for j in 0..self.n {
            let col = &self.cols[j];
            let mut rc = c[j];
            let mut err = c[j].abs();
            for (yi, ci) in y.iter().zip(col) {
                let t = yi * ci;
                rc -= t;
                err += t.abs();
            }
            let box_mag = self.lo[j].abs().max(self.hi[j].abs());
            let t = if rc > 0.0 {
                rc * self.hi[j]
            } else {
                rc * self.lo[j]
            };
            bound += t + cancel * err * box_mag;
            mag += t.abs();
        }
        bound + 1e-13 * mag
    }

    fn resting(&self, var: usize) -> f64 {
        match self.state[var] {
            VarState::AtLower => self.lo[var],
            VarState::AtUpper => self.hi[var],
            VarState::FreeAtZero => 0.0,
            VarState::Basic => unreachable!("resting value of a basic variable"),
        }
    }

    /// Column `var` of the full constraint matrix, written into `out`.
    fn column_into(&self, var: usize, out: &mut [f64]) {
        out.fill(0.0);
        if var < self.n {
            out.copy_from_slice(&self.cols[var]);
        } else if var < self.n + self.m {
            out[var - self.n] = 1.0;
        } else {
            let row = var - self.n - self.m;
            out[row] = self.art_sign[row];
        }
    }

    fn reduced_cost(&self, c: &[f64], y: &[f64], var: usize) -> f64 {
        if var < self.n {
            c[var] - dot(y, &self.cols[var])
        } else if var < self.n + self.m {
            c[var] - y[var - self.n]
        } else {
            let row = var - self.n - self.m;
            c[var] - y[row] * self.art_sign[row]
        }
    }

    /// LU-factor the current basis with partial pivoting on
    /// column-equilibrated data.
    fn factor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        for pos in 0..m {
            let mut s = 0.0f64;
            for i in 0..m {
                s = s.max(self.bmat[i * m + pos].abs());
            }
            if s < PIVOT_HARD_MIN {
                return Err(LpError::NumericalBreakdown("singular basis".into()));
            }
            self.col_scale[pos] = s;
            for i in 0..m {
                self.lu[i * m + pos] = self.bmat[i * m + pos] / s;
            }
        }
        for (i, p) in self.perm.iter_mut().enumerate() {
            *p = i;
        }
        for k in 0..m {
            let mut piv = k;
            let mut piv_val = self.lu[k * m + k].abs();
            for r in k + 1..m {
                let v = self.lu[r * m + k].abs();
                if v > piv_val {
                    piv_val = v;
                    piv = r;
                }
            }
            if piv_val < PIVOT_HARD_MIN {
                return Err(LpError::NumericalBreakdown("singular basis".into()));
            }
            if piv != k {
                for j in 0..m {
                    self.lu.swap(k * m + j, piv * m + j);
                }
                self.perm.swap(k, piv);
            }
            let d = self.lu[k * m + k];
            for r in k + 1..m {
                let f = self.lu[r * m + k] / d;
                self.lu[r * m + k] = f;
                if f != 0.0 {
                    for j in k + 1..m {
                        self.lu[r * m + j] -= f * self.lu[k * m + j];
                    }
                }
            }
        }
        Ok(())
    }

    /// Solves `B x = b` by substitution on the LU factors.
    fn lu_solve(&self, b: &[f64], x: &mut [f64]) {
        let m = self.m;
        for i in 0..m {
            x[i] = b[self.perm[i]];
        }
        for i in 0..m {
            for j in 0..i {
                x[i] -= self.lu[i * m + j] * x[j];
            }
        }
        for i in (0..m).rev() {
            for j in i + 1..m {
                x[i] -= self.lu[i * m + j] * x[j];
            }
            x[i] /= self.lu[i * m + i];
        }
        for pos in 0..m {
            x[pos] /= self.col_scale[pos];
        }
    }

    /// Solves `B^T y = c` (dual system) by substitution on the LU factors.
    fn lu_solve_transpose(&self, c: &[f64], y: &mut [f64], work: &mut [f64]) {
        let m = self.m;
        for pos in 0..m {
            work[pos] = c[pos] / self.col_scale[pos];
        }
        // U^T v = ĉ (forward), then L^T u = v (backward, unit diagonal)
        for i in 0..m {
            let mut acc = work[i];
            for j in 0..i {
                acc -= self.lu[j * m + i] * work[j];
            }
            work[i] = acc / self.lu[i * m + i];
        }
        for i in (0..m).rev() {
            let mut acc = work[i];
            for j in i + 1..m {
                acc -= self.lu[j * m + i] * work[j];
            }
            work[i] = acc;
        }
        for i in 0..m {
            y[self.perm[i]] = work[i];
        }
    }

    /// `B x = b` with iterative refinement until the residual is at noise
    /// level; the bases here reach condition numbers where a single solve
    /// keeps only half the digits.
    fn solve_refined(&self, b: &[f64], x: &mut [f64], r: &mut [f64], d: &mut [f64]) {
        let m = self.m;
        self.lu_solve(b, x);
        let scale = b.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        for _ in 0..8 {
            let mut worst = 0.0f64;
            for i in 0..m {
                let mut acc = b[i];
                for pos in 0..m {
                    acc -= self.bmat[i * m + pos] * x[pos];
                }
                r[i] = acc;
                worst = worst.max(acc.abs());
            }
            if worst <= 1e-15 * scale {
                break;
            }
            self.lu_solve(r, d);
            for pos in 0..m {
                x[pos] += d[pos];
            }
        }
    }

    /// `B^T y = c` with iterative refinement, as in
    /// [`SharedRegion::solve_refined`]; accurate duals keep the pricing
    /// from chasing phantom reduced costs.
    fn solve_transpose_refined(
        &self,
        c: &[f64],
        y: &mut [f64],
        r: &mut [f64],
        d: &mut [f64],
        work: &mut [f64],
    ) {
        let m = self.m;
        self.lu_solve_transpose(c, y, work);
        let scale = c.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        for _ in 0..8 {
            let mut worst = 0.0f64;
            for pos in 0..m {
                let mut acc = c[pos];
                for i in 0..m {
                    acc -= self.bmat[i * m + pos] * y[i];
                }
                r[pos] = acc;
                worst = worst.max(acc.abs());
            }
            if worst <= 1e-15 * scale {
                break;
            }
            self.lu_solve_transpose(r, d, work);
            for i in 0..m {
                y[i] += d[i];
            }
        }
    }

    /// Recomputes basic values exactly from the resting assignment.
    fn recompute_xb(&mut self, r: &mut [f64], d: &mut [f64]) {
        let m = self.m;
        let mut resid = self.rhs.clone();
        let mut col = vec![0.0; m];
        for var in 0..self.n + 2 * m {
            if self.state[var] == VarState::Basic {
                continue;
            }
            let x = self.resting(var);
            if x != 0.0 {
                self.column_into(var, &mut col);
                for i in 0..m {
                    resid[i] -= col[i] * x;
                }
            }
        }
        let mut xb = std::mem::take(&mut self.xb);
        self.solve_refined(&resid, &mut xb, r, d);
        self.xb = xb;
    }

    fn optimize(&mut self, c: &[f64]) -> Result<RunStatus, LpError> {
        let m = self.m;
        let total = self.n + 2 * m;
        let max_iter = 10_000 + 200 * total;
        let mut stalled = 0u32;
        let mut bland = false;
        let mut y = vec![0.0; m];
        let mut w = vec![0.0; m];
        let mut cb = vec![0.0; m];
        let mut colbuf = vec![0.0; m];
        let mut buf_r = vec![0.0; m];
        let mut buf_d = vec![0.0; m];
        let mut buf_w = vec![0.0; m];
        let mut ratios: Vec<(usize, f64, f64, bool)> = Vec::with_capacity(m);
        let mut banned = vec![false; total];
        let mut any_banned = false;
        let mut allow_weak = false;

        self.recompute_xb(&mut buf_r, &mut buf_d);

        for _ in 0..max_iter {
            // duals: B^T y = c_B
            for (pos, &var) in self.basis.iter().enumerate() {
                cb[pos] = c[var];
            }
            self.solve_transpose_refined(&cb, &mut y, &mut buf_r, &mut buf_d, &mut buf_w);

            // pricing
            let mut entering: Option<(usize, f64, f64)> = None; // (var, |d|, direction)
            for var in 0..total {
                if self.state[var] == VarState::Basic
                    || self.lo[var] == self.hi[var]
                    || banned[var]
                {
                    continue;
                }
                let d = self.reduced_cost(c, &y, var);
                let dir = match self.state[var] {
                    VarState::AtLower => {
                        if d > OPTIMALITY_TOL {
                            1.0
                        } else {
                            continue;
                        }
                    }
                    VarState::AtUpper => {
                        if d < -OPTIMALITY_TOL {
                            -1.0
                        } else {
                            continue;
                        }
                    }
                    VarState::FreeAtZero => {
                        if d > OPTIMALITY_TOL {
                            1.0
                        } else if d < -OPTIMALITY_TOL {
                            -1.0
                        } else {
                            continue;
                        }
                    }
                    VarState::Basic => unreachable!(),
                };
                // a variable whose whole range cannot move the objective
                // past noise level only churns degenerate pivots
                let range = self.hi[var] - self.lo[var];
                if range.is_finite() && d.abs() * range <= 1e-14 {
                    continue;
                }
                if bland {
                    entering = Some((var, d.abs(), dir));
                    break;
                }
                match entering {
                    Some((_, best, _)) if d.abs() <= best => {}
                    _ => entering = Some((var, d.abs(), dir)),
                }
            }

            let Some((q, dq, sigma)) = entering else {
                if any_banned {
                    // every improving direction needs a weak pivot; permit
                    // the best of them rather than stopping short of the
                    // optimum
                    banned.fill(false);
                    any_banned = false;
                    allow_weak = true;
                    continue;
                }
                return Ok(RunStatus::Optimal);
            };

            // direction: B w = A_q
            self.column_into(q, &mut colbuf);
            self.solve_refined(&colbuf, &mut w, &mut buf_r, &mut buf_d);

            // Harris-style ratio test. Every row tolerates a violation of
            // up to HARRIS_TOL, so the step may run to `t_i + δ/|Δ_i|` of
            // any row; the leaving row is then picked for pivot quality
            // among all rows inside the allowance instead of being forced
            // onto a degenerate, near-singular pivot. Rows coupled to the
            // entering column at noise level thus never block progress.
            const HARRIS_TOL: f64 = 1e-14;
            let flip_len = self.hi[q] - self.lo[q]; // may be infinite
            ratios.clear(); // (pos, t, |delta|, _)
            let mut t_allow = flip_len;
            for pos in 0..m {
                let delta = sigma * w[pos];
                let bvar = self.basis[pos];
                let t = if delta > 0.0 {
                    if self.lo[bvar].is_finite() {
                        ((self.xb[pos] - self.lo[bvar]) / delta).max(0.0)
                    } else {
                        continue;
                    }
                } else if delta < 0.0 {
                    if self.hi[bvar].is_finite() {
                        ((self.xb[pos] - self.hi[bvar]) / delta).max(0.0)
                    } else {
                        continue;
                    }
                } else {
                    continue;
                };
                let mag = delta.abs();
                t_allow = t_allow.min(t + HARRIS_TOL / mag);
                ratios.push((pos, t, mag, true));
            }

            let mut leaving: Option<(usize, f64, f64)> = None; // (pos, |pivot|, t)
            if t_allow.is_finite() {
                if bland {
                    // exact smallest-index rule among minimal ratios
                    let mut t_min = f64::INFINITY;
                    for &(_, t, _, _) in &ratios {
                        t_min = t_min.min(t);
                    }
                    for &(pos, t, mag, _) in &ratios {
                        if t <= t_min * (1.0 + 1e-12) + 1e-15 {
                            let better = match leaving {
                                None => true,
                                Some((cur_pos, _, _)) => self.basis[pos] < self.basis[cur_pos],
                            };
                            if better {
                                leaving = Some((pos, mag, t));
                            }
                        }
                    }
                } else {
                    for &(pos, t, mag, _) in &ratios {
                        if t <= t_allow {
                            let better = match leaving {
                                None => true,
                                Some((_, cur_mag, _)) => mag > cur_mag,
                            };
                            if better {
                                leaving = Some((pos, mag, t));
                            }
                        }
                    }
                }
            }
            let best_t = leaving.map_or(flip_len, |(_, _, t)| t);

            let step = best_t.min(flip_len);
            if step.is_infinite() {
                return Ok(RunStatus::Unbounded);
            }

            if flip_len <= best_t {
                // bound flip, basis unchanged
                for pos in 0..m {
                    self.xb[pos] -= flip_len * sigma * w[pos];
                }
                self.state[q] = match self.state[q] {
                    VarState::AtLower => VarState::AtUpper,
                    VarState::AtUpper => VarState::AtLower,
                    other => other,
                };
                if any_banned {
                    banned.fill(false);
                    any_banned = false;
                }
                if dq * flip_len > 1e-15 {
                    stalled = 0;
                    bland = false;
                } else {
                    stalled += 1;
                    if stalled >= STALL_LIMIT {
                        bland = true;
                    }
                }
            } else {
                let (r, pivot_mag, _) = leaving.expect("finite ratio must have a leaving row");
                if pivot_mag < WEAK_PIVOT && !allow_weak {
                    banned[q] = true;
                    any_banned = true;
                    continue;
                }
                if pivot_mag < PIVOT_HARD_MIN {
                    return Err(LpError::NumericalBreakdown(
                        "pivot below 1e-14 with no alternative".into(),
                    ));
                }
                let old = self.basis[r];
                self.state[old] = if sigma * w[r] > 0.0 {
                    VarState::AtLower
                } else {
                    VarState::AtUpper
                };
                self.state[q] = VarState::Basic;
                self.basis[r] = q;
                for i in 0..m {
                    self.bmat[i * m + r] = colbuf[i];
                }
                self.factor()?;
                self.recompute_xb(&mut buf_r, &mut buf_d);
                if any_banned {
                    banned.fill(false);
                    any_banned = false;
                }
                allow_weak = false;

                if dq * best_t > 1e-15 {
                    stalled = 0;
                    bland = false;
                } else {
                    stalled += 1;
                    if stalled >= STALL_LIMIT {
                        bland = true;
                    }
                }
            }
        }
        Err(LpError::NumericalBreakdown(format!(
            "iteration limit {max_iter} exceeded"
        )))
    }

    fn extract_point(&self) -> Vec<f64> {
        let mut point = vec![0.0; self.n];
        for j in 0..self.n {
            if self.state[j] != VarState::Basic {
                point[j] = self.resting(j);
            }
        }
        for (pos, &var) in self.basis.iter().enumerate() {
            if var < self.n {
                point[var] = self.xb[pos];
            }
        }
        point
    }

    fn verify(&self, point: &[f64]) -> Result<(), String> {
        for (j, &x) in point.iter().enumerate() {
            if !x.is_finite() {
                return Err(format!("variable {j} is not finite"));
            }
            let tol = self.feas_tol * (1.0 + x.abs());
            if x < self.lo[j] - tol || x > self.hi[j] + tol {
                return Err(format!(
                    "variable {j} = {x} outside [{}, {}]",
                    self.lo[j], self.hi[j]
                ));
            }
        }
        for i in 0..self.m {
            let mut lhs = 0.0;
            let mut scale = self.rhs[i].abs();
            for j in 0..self.n {
                let term = self.cols[j][i] * point[j];
                lhs += term;
                scale += term.abs();
            }
            let tol = self.feas_tol * (1.0 + scale);
            if lhs < self.row_lo[i] - tol || lhs > self.row_hi[i] + tol {
                return Err(format!(
                    "row {i}: lhs {lhs} outside [{}, {}]",
                    self.row_lo[i], self.row_hi[i]
                ));
            }
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn validate(program: &LinearProgram) -> Result<(), LpError> {
    if program.objective.len() != program.bounds.len() {
        return Err(LpError::ObjectiveMismatch {
            got: program.objective.len(),
            expected: program.bounds.len(),
        });
    }
    Ok(())
}

/// Maximizes the program's objective over its feasible polytope.
pub fn solve_lp(program: &LinearProgram) -> Result<LpOutcome, LpError> {
    validate(program)?;
    let mut region = SharedRegion::new(&program.constraints, &program.bounds)?;
    region.maximize(&program.objective)
}

/// Minimizes the program's objective; the reported value is the true minimum.
pub fn solve_lp_min(program: &LinearProgram) -> Result<LpOutcome, LpError> {
    validate(program)?;
    let mut region = SharedRegion::new(&program.constraints, &program.bounds)?;
    region.minimize(&program.objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lp(
        objective: Vec<f64>,
        constraints: Vec<Constraint>,
        bounds: Vec<(f64, f64)>,
    ) -> LinearProgram {
        LinearProgram {
            objective,
            constraints,
            bounds,
        }
    }

    #[test]
    fn box_optimum_without_rows() {
        let p = lp(vec![1.0], vec![], vec![(0.0, 2.0)]);
        match solve_lp(&p).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, 2.0);
                assert_eq!(point, vec![2.0]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn equality_saturates_objective() {
        let p = lp(
            vec![1.0, 1.0],
            vec![Constraint::new(vec![1.0, 1.0], Relation::Eq, 1.0)],
            vec![(0.0, 1.0), (0.0, 1.0)],
        );
        let value = solve_lp(&p).unwrap().value().unwrap();
        assert!((value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_constraints_are_infeasible() {
        let p = lp(
            vec![1.0],
            vec![Constraint::new(vec![1.0], Relation::Eq, 2.0)],
            vec![(0.0, 1.0)],
        );
        match solve_lp(&p).unwrap() {
            LpOutcome::Infeasible { residual } => assert!(residual > 0.5),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn minimize_examples() {
        let p = lp(vec![1.0], vec![], vec![(0.0, 2.0)]);
        assert_eq!(solve_lp_min(&p).unwrap().value().unwrap(), 0.0);

        let p = lp(
            vec![1.0, 1.0],
            vec![Constraint::new(vec![1.0, 1.0], Relation::Eq, 1.0)],
            vec![(0.0, 1.0), (0.0, 1.0)],
        );
        assert!((solve_lp_min(&p).unwrap().value().unwrap() - 1.0).abs() < 1e-9);

        let p = lp(vec![-1.0], vec![], vec![(0.0, 3.0)]);
        assert_eq!(solve_lp_min(&p).unwrap().value().unwrap(), -3.0);
    }

    #[test]
    fn unbounded_detection() {
        let p = lp(
            vec![1.0],
            vec![Constraint::new(vec![1.0], Relation::Ge, 1.0)],
            vec![(0.0, f64::INFINITY)],
        );
        assert_eq!(solve_lp(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn dimension_mismatch_is_structural_error() {
        let p = lp(
            vec![1.0, 1.0],
            vec![Constraint::new(vec![1.0], Relation::Le, 1.0)],
            vec![(0.0, 1.0), (0.0, 1.0)],
        );
        assert!(matches!(
            solve_lp(&p),
            Err(LpError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn range_rows_behave_like_paired_inequalities() {
        let rows = vec![RangeRow::new(vec![1.0, 1.0], 0.5, 1.5)];
        let bounds = vec![(0.0, 1.0), (0.0, 1.0)];
        let mut region = SharedRegion::from_ranges(&rows, &bounds).unwrap();
        let hi = region.maximize(&[1.0, 1.0]).unwrap().value().unwrap();
        let lo = region.minimize(&[1.0, 1.0]).unwrap().value().unwrap();
        assert!((hi - 1.5).abs() < 1e-9);
        assert!((lo - 0.5).abs() < 1e-9);
        // degenerate range is an equality
        let rows = vec![RangeRow::new(vec![1.0, 0.0], 0.25, 0.25)];
        let mut region = SharedRegion::from_ranges(&rows, &bounds).unwrap();
        let v = region.maximize(&[1.0, 0.0]).unwrap().value().unwrap();
        assert!((v - 0.25).abs() < 1e-9);
    }

    #[test]
    fn textbook_problem() {
        // max 5a + 4b + 3c st 2a+3b+c <= 5, 4a+b+2c <= 11, 3a+4b+2c <= 8
        let p = lp(
            vec![5.0, 4.0, 3.0],
            vec![
                Constraint::new(vec![2.0, 3.0, 1.0], Relation::Le, 5.0),
                Constraint::new(vec![4.0, 1.0, 2.0], Relation::Le, 11.0),
                Constraint::new(vec![3.0, 4.0, 2.0], Relation::Le, 8.0),
            ],
            vec![(0.0, f64::INFINITY); 3],
        );
        let (value, point) = match solve_lp(&p).unwrap() {
            LpOutcome::Optimal { value, point } => (value, point),
            other => panic!("{other:?}"),
        };
        assert!((value - 13.0).abs() < 1e-9);
        assert!((point[0] - 2.0).abs() < 1e-9);
        assert!(point[1].abs() < 1e-9);
        assert!((point[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn negative_lower_bounds() {
        let p = lp(
            vec![1.0, -1.0],
            vec![Constraint::new(vec![1.0, 1.0], Relation::Le, 0.5)],
            vec![(-1.0, 1.0), (-2.0, 2.0)],
        );
        let value = solve_lp(&p).unwrap().value().unwrap();
        assert!((value - 3.0).abs() < 1e-9); // x = 1, y = -2
    }

    // --- brute-force vertex-enumeration oracle ---

    fn solve_square(mat: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
        let n = rhs.len();
        let mut a: Vec<Vec<f64>> = mat.to_vec();
        let mut b = rhs.to_vec();
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
            if a[piv][k].abs() < 1e-11 {
                return None;
            }
            a.swap(k, piv);
            b.swap(k, piv);
            let f = a[k][k];
            for j in 0..n {
                a[k][j] /= f;
            }
            b[k] /= f;
            for i in 0..n {
                if i != k {
                    let g = a[i][k];
                    if g != 0.0 {
                        for j in 0..n {
                            a[i][j] -= g * a[k][j];
                        }
                        b[i] -= g * b[k];
                    }
                }
            }
        }
        Some(b)
    }

    fn feasible(program: &LinearProgram, x: &[f64], tol: f64) -> bool {
        for (j, &(lo, hi)) in program.bounds.iter().enumerate() {
            if x[j] < lo - tol || x[j] > hi + tol {
                return false;
            }
        }
        for c in &program.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let ok = match c.relation {
                Relation::Le => lhs <= c.rhs + tol,
                Relation::Ge => lhs >= c.rhs - tol,
                Relation::Eq => (lhs - c.rhs).abs() <= tol,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Enumerates every vertex of the (bounded) feasible region and returns
    /// the maximum objective value, or None when no vertex is feasible.
    fn brute_force_max(program: &LinearProgram) -> Option<f64> {
        let n = program.bounds.len();
        let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
        for c in &program.constraints {
            planes.push((c.coeffs.clone(), c.rhs));
        }
        for (j, &(lo, hi)) in program.bounds.iter().enumerate() {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            planes.push((e.clone(), lo));
            planes.push((e, hi));
        }
        let mut best: Option<f64> = None;
        let k = planes.len();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let mat: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
            let rhs: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
            if let Some(x) = solve_square(&mat, &rhs) {
                if feasible(program, &x, 1e-9) {
                    let v: f64 = program.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                    best = Some(best.map_or(v, |b: f64| b.max(v)));
                }
            }
            // next combination
            let mut i = n;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if idx[i] + (n - i) < k {
                    idx[i] += 1;
                    for j in i + 1..n {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn random_program(rng: &mut ChaCha8Rng) -> LinearProgram {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(0..=4);
        let bounds: Vec<(f64, f64)> = (0..n)
            .map(|_| (0.0, f64::from(rng.gen_range(1..=3))))
            .collect();
        let objective: Vec<f64> = (0..n)
            .map(|_| f64::from(rng.gen_range(-4..=4)) / 2.0)
            .collect();
        let constraints: Vec<Constraint> = (0..m)
            .map(|_| {
                let coeffs: Vec<f64> = (0..n)
                    .map(|_| f64::from(rng.gen_range(-4..=4)) / 2.0)
                    .collect();
                let relation = match rng.gen_range(0..3) {
                    0 => Relation::Le,
                    1 => Relation::Ge,
                    _ => Relation::Eq,
                };
                let rhs = f64::from(rng.gen_range(-6..=12)) / 2.0;
                Constraint::new(coeffs, relation, rhs)
            })
            .collect();
        LinearProgram {
            objective,
            constraints,
            bounds,
        }
    }

    #[test]
    fn matches_vertex_enumeration_on_random_programs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut optimal_seen = 0;
        let mut infeasible_seen = 0;
        for case in 0..200 {
            let program = random_program(&mut rng);
            let oracle = brute_force_max(&program);
            match solve_lp(&program).unwrap() {
                LpOutcome::Optimal { value, .. } => {
                    let expect = oracle
                        .unwrap_or_else(|| panic!("case {case}: oracle infeasible, solver optimal"));
                    assert!(
                        (value - expect).abs() <= 1e-8,
                        "case {case}: solver {value} vs oracle {expect}"
                    );
                    optimal_seen += 1;
                }
                LpOutcome::Infeasible { .. } => {
                    assert!(oracle.is_none(), "case {case}: oracle feasible, solver not");
                    infeasible_seen += 1;
                }
                LpOutcome::Unbounded => panic!("case {case}: boxes are finite"),
            }
        }
        assert!(optimal_seen > 50, "only {optimal_seen} optimal cases");
        assert!(infeasible_seen > 10, "only {infeasible_seen} infeasible cases");
    }

    #[test]
    fn active_constraints_reproduce_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..200 {
            let program = random_program(&mut rng);
            let LpOutcome::Optimal { value, point } = solve_lp(&program).unwrap() else {
                continue;
            };
            let mut pinned = program.clone();
            for c in pinned.constraints.iter_mut() {
                let lhs: f64 = c.coeffs.iter().zip(&point).map(|(a, v)| a * v).sum();
                if (lhs - c.rhs).abs() <= 1e-9 {
                    c.relation = Relation::Eq;
                }
            }
            let again = solve_lp(&pinned).unwrap().value().unwrap();
            assert!(
                (again - value).abs() <= 1e-9,
                "value {value} changed to {again} after pinning active rows"
            );
            checked += 1;
        }
        assert!(checked > 50);
    }

    #[test]
    fn deterministic_across_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let program = random_program(&mut rng);
            let a = solve_lp(&program).unwrap();
            let b = solve_lp(&program).unwrap();
            match (a, b) {
                (
                    LpOutcome::Optimal {
                        value: v1,
                        point: p1,
                    },
                    LpOutcome::Optimal {
                        value: v2,
                        point: p2,
                    },
                ) => {
                    assert_eq!(v1.to_bits(), v2.to_bits());
                    assert_eq!(p1.len(), p2.len());
                    for (a, b) in p1.iter().zip(&p2) {
                        assert_eq!(a.to_bits(), b.to_bits());
                    }
                }
                (x, y) => assert_eq!(x, y),
            }
        }
    }

    #[test]
    fn shared_region_warm_solves_match_cold_solves() {
        let constraints = vec![
            Constraint::new(vec![1.0, 2.0, 1.0, 0.5], Relation::Le, 4.0),
            Constraint::new(vec![1.0, 1.0, 1.0, 1.0], Relation::Ge, 1.0),
            Constraint::new(vec![0.5, -1.0, 2.0, 1.0], Relation::Eq, 1.5),
        ];
        let bounds = vec![(0.0, 2.0); 4];
        let mut region = SharedRegion::new(&constraints, &bounds).unwrap();
        let objectives = [
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![-1.0, 2.0, 0.5, -0.25],
            vec![1.0, 1.0, 1.0, 1.0],
        ];
        for obj in &objectives {
            let warm = region.maximize(obj).unwrap().value().unwrap();
            let cold = solve_lp(&LinearProgram {
                objective: obj.clone(),
                constraints: constraints.clone(),
                bounds: bounds.clone(),
            })
            .unwrap()
            .value()
            .unwrap();
            assert!((warm - cold).abs() <= 1e-9, "warm {warm} vs cold {cold}");
            let min_warm = region.minimize(obj).unwrap().value().unwrap();
            let min_cold = solve_lp_min(&LinearProgram {
                objective: obj.clone(),
                constraints: constraints.clone(),
                bounds: bounds.clone(),
            })
            .unwrap()
            .value()
            .unwrap();
            assert!((min_warm - min_cold).abs() <= 1e-9);
        }
    }

    #[test]
    fn infeasible_region_names_rows() {
        let constraints = vec![
            Constraint::new(vec![1.0, 0.0], Relation::Le, 5.0),
            Constraint::new(vec![1.0, 1.0], Relation::Eq, 10.0),
        ];
        let bounds = vec![(0.0, 1.0); 2];
        let region = SharedRegion::new(&constraints, &bounds).unwrap();
        let info = region.infeasibility().expect("must be infeasible");
        assert_eq!(info.rows, vec![1]);
        assert!(info.residual > 7.0);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // heavily degenerate: many redundant rows through the origin
        let constraints = vec![
            Constraint::new(vec![1.0, -1.0, 0.0], Relation::Le, 0.0),
            Constraint::new(vec![-1.0, 1.0, 0.0], Relation::Le, 0.0),
            Constraint::new(vec![1.0, 0.0, -1.0], Relation::Le, 0.0),
            Constraint::new(vec![0.0, 1.0, -1.0], Relation::Le, 0.0),
            Constraint::new(vec![1.0, 1.0, 1.0], Relation::Le, 3.0),
        ];
        let p = lp(
            vec![1.0, 1.0, 1.0],
            constraints,
            vec![(0.0, f64::INFINITY); 3],
        );
        let value = solve_lp(&p).unwrap().value().unwrap();
        assert!((value - 3.0).abs() < 1e-9);
    }
}
