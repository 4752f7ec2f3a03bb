//! Certified upper bounds on the information leakage.
//!
//! The leakage objective `F(x) = h(x_ee/Q, x_oe/Q) + h(x_oo/Q, x_eo/Q)` is
//! concave over the box-plus-simplex region assembled from either the
//! worst-case constraints (original protocol) or the Ω/Φ intervals
//! (improved protocol). A local maximum alone would be security-unsound, so
//! every result carries a tangent-plane certificate: by concavity
//! `max F ≤ F(x̂) + max_{x feasible} ∇F(x̂)·(x − x̂)`, and the inner maximum
//! is a four-variable LP. The ascent itself reduces to a one-dimensional
//! concave search over the mass split between the two entropy pairs, with
//! the within-pair split available in closed form.

use serde::Serialize;
use thiserror::Error;

use crate::channel::{ChannelError, ChannelParams};
use crate::crossterm::{
    class_sqrt_mass_within, parity_sqrt_sums_upper, Interval, ParityClass,
};
use crate::decoy::YieldBounds;
use crate::lp::{solve_lp, Constraint, LinearProgram, LpError, LpOutcome, Relation};
use crate::numerics::{pair_entropy, pair_entropy_grad, poisson_table, Bits, Probability};

/// Coordinates are kept at least this far inside the feasible region before
/// the gradient is evaluated.
const INTERIOR_MARGIN: f64 = 1e-12;
/// Golden-section iterations for the one-dimensional concave searches.
const GOLDEN_ITERS: u32 = 90;
/// Refinement steps after the initial certificate, should it fall short.
const MAX_CERT_ITERS: u32 = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LeakageError {
    #[error("constraint region is infeasible: {0}")]
    Infeasible(String),
    #[error("q_code must lie in (0, 1], got {0}")]
    BadCodeGain(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("channel: {0}")]
    Channel(#[from] ChannelError),
    #[error("tangent program failed: {0}")]
    Tangent(#[from] LpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintMode {
    Original,
    Improved,
    Infinite,
}

/// The feasible region for `(x_ee, x_oe, x_oo, x_eo)`: one interval per
/// class plus the sum rule `Σ x = q_code`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XConstraints {
    classes: [Interval; 4],
    total: f64,
    mode: ConstraintMode,
}

impl XConstraints {
    /// Clamps each interval into `[0, total]` and validates feasibility of
    /// the sum rule.
    pub fn new(
        classes: [Interval; 4],
        total: f64,
        mode: ConstraintMode,
    ) -> Result<Self, LeakageError> {
        if !(total > 0.0 && total <= 1.0) {
            return Err(LeakageError::BadCodeGain(total));
        }
        let mut clamped = [Interval::new(0.0, 0.0); 4];
        for (i, c) in classes.iter().enumerate() {
            let lo = c.lo.max(0.0);
            let hi = c.hi.min(total);
            if lo > hi + 1e-12 {
                return Err(LeakageError::Infeasible(format!(
                    "class {} interval [{lo}, {hi}] is empty after clamping",
                    ParityClass::ALL[i].tag()
                )));
            }
            clamped[i] = Interval::new(lo, lo.max(hi.min(total)));
        }
        let sum_lo: f64 = clamped.iter().map(|c| c.lo).sum();
        let sum_hi: f64 = clamped.iter().map(|c| c.hi).sum();
        if sum_lo > total + 1e-12 || sum_hi < total - 1e-12 {
            return Err(LeakageError::Infeasible(format!(
                "sum rule unsatisfiable: Σlo = {sum_lo}, Σhi = {sum_hi}, total = {total}"
            )));
        }
        Ok(XConstraints {
            classes: clamped,
            total,
            mode,
        })
    }

    pub fn classes(&self) -> &[Interval; 4] {
        &self.classes
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn mode(&self) -> ConstraintMode {
        self.mode
    }
}

/// A certified leakage bound with its diagnostic witness.
#[derive(Debug, Clone, Serialize)]
pub struct LeakageResult {
    pub upper_bound: Bits,
    /// Feasible point achieving `upper_bound - certificate_gap`, in x-space.
    pub witness: [f64; 4],
    pub certificate_gap: f64,
    pub mode: ConstraintMode,
    /// False when the iteration cap was reached before the gap closed; the
    /// bound is still sound.
    pub converged: bool,
}

/// Original-protocol constraints: each class amplitude is bounded by the
/// squared sum of `√(p_n p_m Ȳ_{n,m})`, with the mass beyond the yield
/// cutoff contributing at worst-case yield 1.
pub fn x_constraints_original(
    yields: &YieldBounds,
    mu: f64,
    q_code: Probability,
) -> Result<XConstraints, LeakageError> {
    let cutoff = yields.cutoff();
    let table = poisson_table(mu, cutoff);
    let sqrt_table: Vec<f64> = table.iter().map(|p| p.sqrt()).collect();
    let (even_up, odd_up) = parity_sqrt_sums_upper(mu);

    let mut classes = [Interval::new(0.0, 0.0); 4];
    for class in ParityClass::ALL {
        let mut amp = 0.0;
        for n in 0..=cutoff {
            for m in 0..=cutoff {
                if class.contains(n, m) {
                    amp += sqrt_table[n as usize]
                        * sqrt_table[m as usize]
                        * yields.upper(n, m).value().sqrt();
                }
            }
        }
        let within = class_sqrt_mass_within(class, &table, &table);
        let (a_odd, b_odd) = match class {
            ParityClass::Ee => (false, false),
            ParityClass::Oe => (true, false),
            ParityClass::Oo => (true, true),
            ParityClass::Eo => (false, true),
        };
        let total_sqrt = pick(a_odd, even_up, odd_up) * pick(b_odd, even_up, odd_up);
        let tail = (total_sqrt - within).max(0.0);
        let hi = (amp + tail).powi(2);
        classes[class.index()] = Interval::new(0.0, hi);
    }
    XConstraints::new(classes, q_code.value(), ConstraintMode::Original)
}

fn pick(odd: bool, even: f64, odd_v: f64) -> f64 {
    if odd {
        odd_v
    } else {
        even
    }
}

/// Improved-protocol constraints: `x ∈ [Ω̲ + Φ̲, Ω̄ + Φ̄]` per class plus
/// the sum rule.
pub fn x_constraints_improved(
    omegas: &[Interval; 4],
    phis: &[Interval; 4],
    q_code: Probability,
) -> Result<XConstraints, LeakageError> {
    let mut classes = [Interval::new(0.0, 0.0); 4];
    for i in 0..4 {
        classes[i] = Interval::new(omegas[i].lo + phis[i].lo, omegas[i].hi + phis[i].hi);
    }
    XConstraints::new(classes, q_code.value(), ConstraintMode::Improved)
}

/// The leakage objective on normalized coordinates, with the convention
/// that a class pinned to zero silences its entropy pair.
fn objective(u: &[f64; 4], pinned: &[bool; 4]) -> f64 {
    let mut f = 0.0;
    if !(pinned[0] || pinned[1]) {
        f += pair_entropy(u[0].max(0.0), u[1].max(0.0)).expect("non-negative");
    }
    if !(pinned[2] || pinned[3]) {
        f += pair_entropy(u[2].max(0.0), u[3].max(0.0)).expect("non-negative");
    }
    f
}

fn gradient(u: &[f64; 4], pinned: &[bool; 4]) -> [f64; 4] {
    let mut g = [0.0; 4];
    if !(pinned[0] || pinned[1]) {
        let (gx, gy) = pair_entropy_grad(u[0], u[1]).expect("interior point");
        g[0] = gx;
        g[1] = gy;
    }
    if !(pinned[2] || pinned[3]) {
        let (gx, gy) = pair_entropy_grad(u[2], u[3]).expect("interior point");
        g[2] = gx;
        g[3] = gy;
    }
    g
}

/// Best split of mass `s` between two boxed coordinates: the pair entropy
/// is maximized by the balanced split, clamped into the feasible slice.
fn best_split(s: f64, b1: (f64, f64), b2: (f64, f64)) -> (f64, f64) {
    let lo = (s - b2.1).max(b1.0);
    let hi = (s - b2.0).min(b1.1);
    let u1 = (s / 2.0).clamp(lo, hi.max(lo));
    (u1, (s - u1).max(0.0))
}

fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: u32) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if b <= a {
        return a;
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        c
    } else {
        d
    }
}

/// Certified maximization of the leakage objective over the region.
///
/// The returned `upper_bound` is the least tangent-plane bound observed and
/// is sound regardless of convergence; the witness documents how tight it
/// is. Degenerate single-point regions evaluate directly with gap 0.
pub fn max_leakage(
    constraints: &XConstraints,
    tolerance: f64,
) -> Result<LeakageResult, LeakageError> {
    if !(tolerance > 0.0) {
        return Err(LeakageError::BadTolerance(tolerance));
    }
    let q = constraints.total();
    let boxes: [(f64, f64); 4] = {
        let mut b = [(0.0, 0.0); 4];
        for i in 0..4 {
            b[i] = (
                (constraints.classes()[i].lo / q).clamp(0.0, 1.0),
                (constraints.classes()[i].hi / q).clamp(0.0, 1.0),
            );
        }
        b
    };
    // a coordinate is pinned to zero when neither its box nor the sum rule
    // lets it move off 0; its entropy pair is then identically zero
    let sum_lo: f64 = boxes.iter().map(|b| b.0).sum();
    let mut pinned = [false; 4];
    for i in 0..4 {
        let max_feasible = boxes[i].1.min(1.0 - (sum_lo - boxes[i].0));
        pinned[i] = max_feasible <= 0.0;
    }

    // fully determined region: evaluate directly
    if boxes.iter().all(|&(lo, hi)| hi - lo <= 0.0) {
        let u = [boxes[0].0, boxes[1].0, boxes[2].0, boxes[3].0];
        let f = objective(&u, &pinned);
        return Ok(LeakageResult {
            upper_bound: bound_bits(f),
            witness: scale(&u, q),
            certificate_gap: 0.0,
            mode: constraints.mode(),
            converged: true,
        });
    }

    // ascend over s = u_ee + u_oe; the complement goes to the second pair
    let s_lo = (boxes[0].0 + boxes[1].0).max(1.0 - boxes[2].1 - boxes[3].1);
    let s_hi = (boxes[0].1 + boxes[1].1).min(1.0 - boxes[2].0 - boxes[3].0);
    if s_lo > s_hi + 1e-9 {
        return Err(LeakageError::Infeasible(format!(
            "mass split range empty: [{s_lo}, {s_hi}]"
        )));
    }
    let (s_lo, s_hi) = (s_lo.clamp(0.0, 1.0), s_hi.clamp(s_lo.clamp(0.0, 1.0), 1.0));
    let eval_split = |s: f64| -> ([f64; 4], f64) {
        let (u1, u2) = best_split(s, boxes[0], boxes[1]);
        let (u3, u4) = best_split(1.0 - s, boxes[2], boxes[3]);
        let u = [u1, u2, u3, u4];
        let f = objective(&u, &pinned);
        (u, f)
    };
    let s_star = golden_max(|s| eval_split(s).1, s_lo, s_hi, GOLDEN_ITERS);
    let (mut witness, mut best_f) = eval_split(s_star);
    for s in [s_lo, s_hi] {
        let (u, f) = eval_split(s);
        if f > best_f {
            best_f = f;
            witness = u;
        }
    }

    // strictly interior blend target for anchoring the tangent plane
    let center = interior_point(&boxes);

    let mut best_upper = f64::INFINITY;
    let mut converged = false;
    let mut anchor_src = witness;
    let mut last_gap = f64::INFINITY;
    for _ in 0..MAX_CERT_ITERS {
        let anchor = interiorize(&anchor_src, &center, &pinned);
        let f_anchor = objective(&anchor, &pinned);
        if f_anchor > best_f {
            best_f = f_anchor;
            witness = anchor;
        }
        let grad = gradient(&anchor, &pinned);
        let program = LinearProgram {
            objective: grad.to_vec(),
            constraints: vec![Constraint::new(vec![1.0; 4], Relation::Eq, 1.0)],
            bounds: boxes.to_vec(),
        };
        let (lin_max, vertex) = match solve_lp(&program)? {
            LpOutcome::Optimal { value, point } => (value, point),
            LpOutcome::Infeasible { residual } => {
                return Err(LeakageError::Infeasible(format!(
                    "tangent program infeasible (residual {residual:.3e})"
                )));
            }
            LpOutcome::Unbounded => {
                return Err(LeakageError::Tangent(LpError::NumericalBreakdown(
                    "tangent program unbounded over a box".into(),
                )));
            }
        };
        let dot_anchor: f64 = grad.iter().zip(&anchor).map(|(g, a)| g * a).sum();
        let upper = f_anchor + (lin_max - dot_anchor).max(0.0);
        best_upper = best_upper.min(upper);
        let gap = (best_upper - best_f).max(0.0);
        if gap <= tolerance {
            converged = true;
            break;
        }
        if gap >= last_gap - tolerance * 1e-3 && last_gap.is_finite() {
            // no further progress; keep the sound bound and stop
            break;
        }
        last_gap = gap;

        // refine: exact line search toward the tangent vertex
        let v = [vertex[0], vertex[1], vertex[2], vertex[3]];
        let blend = |g: f64| -> [f64; 4] {
            [
                anchor[0] + g * (v[0] - anchor[0]),
                anchor[1] + g * (v[1] - anchor[1]),
                anchor[2] + g * (v[2] - anchor[2]),
                anchor[3] + g * (v[3] - anchor[3]),
            ]
        };
        let g_star = golden_max(
            |g| objective(&blend(g), &pinned),
            0.0,
            1.0 - INTERIOR_MARGIN,
            60,
        );
        anchor_src = blend(g_star);
        let f_new = objective(&anchor_src, &pinned);
        if f_new > best_f {
            best_f = f_new;
            witness = anchor_src;
        }
    }

    let upper = best_upper.max(best_f).min(1.0).max(0.0);
    Ok(LeakageResult {
        upper_bound: bound_bits(upper),
        witness: scale(&witness, q),
        certificate_gap: (upper - best_f).max(0.0),
        mode: constraints.mode(),
        converged,
    })
}

fn bound_bits(v: f64) -> Bits {
    Bits::new(v.clamp(0.0, 1.0)).expect("clamped leakage")
}

fn scale(u: &[f64; 4], q: f64) -> [f64; 4] {
    [u[0] * q, u[1] * q, u[2] * q, u[3] * q]
}

/// A point with every free coordinate strictly inside its box, summing to 1.
fn interior_point(boxes: &[(f64, f64); 4]) -> [f64; 4] {
    let mut u = [0.0; 4];
    for i in 0..4 {
        u[i] = 0.25f64.clamp(boxes[i].0, boxes[i].1);
    }
    for _ in 0..8 {
        let sum: f64 = u.iter().sum();
        let d = 1.0 - sum;
        if d.abs() < 1e-15 {
            break;
        }
        if d > 0.0 {
            let slack: f64 = (0..4).map(|i| boxes[i].1 - u[i]).sum();
            if slack <= 0.0 {
                break;
            }
            for i in 0..4 {
                u[i] += d * (boxes[i].1 - u[i]) / slack;
            }
        } else {
            let slack: f64 = (0..4).map(|i| u[i] - boxes[i].0).sum();
            if slack <= 0.0 {
                break;
            }
            for i in 0..4 {
                u[i] += d * (u[i] - boxes[i].0) / slack;
            }
        }
    }
    u
}

/// Blends just enough of the interior point in to pull near-zero free
/// coordinates off the boundary, where the gradient would blow up.
fn interiorize(u: &[f64; 4], center: &[f64; 4], pinned: &[bool; 4]) -> [f64; 4] {
    let needs_push = (0..4).any(|i| !pinned[i] && u[i] < INTERIOR_MARGIN);
    if !needs_push {
        return *u;
    }
    let theta = 1e-9;
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (1.0 - theta) * u[i] + theta * center[i];
    }
    out
}

/// Leakage in the infinite-decoy idealization: the class weights are the
/// exact non-cross terms of the honest channel, summed to numerical
/// convergence, and no optimization is needed.
pub fn leakage_infinite(
    params: &ChannelParams,
    mu: f64,
    distance_km: f64,
) -> Result<Bits, LeakageError> {
    let omega = exact_omegas(params, mu, distance_km)?;
    let (q_c, _) = params.code_gain_and_error(mu, distance_km)?;
    let q = q_c.value();
    if q <= 0.0 {
        return Ok(Bits::ZERO);
    }
    let f = pair_entropy(omega[0] / q, omega[1] / q).expect("non-negative")
        + pair_entropy(omega[2] / q, omega[3] / q).expect("non-negative");
    Ok(bound_bits(f))
}

/// Exact per-class `Σ p_n p_m Y_{n,m}` for the honest channel, indexed by
/// [`ParityClass::index`].
pub(crate) fn exact_omegas(
    params: &ChannelParams,
    mu: f64,
    distance_km: f64,
) -> Result<[f64; 4], LeakageError> {
    let eta = params.arm_transmittance(distance_km)?;
    let keep = 1.0 - params.dark_count();
    let survive = 1.0 - eta;
    let n_max = 40 + (8.0 * mu).ceil() as usize;
    let table = poisson_table(mu, n_max as u32);
    let mut omega = [0.0; 4];
    for (n, &pn) in table.iter().enumerate() {
        for (m, &pm) in table.iter().enumerate() {
            let y = 1.0 - keep * keep * survive.powi((n + m) as i32);
            let class = match (n % 2 == 1, m % 2 == 1) {
                (false, false) => 0,
                (true, false) => 1,
                (true, true) => 2,
                (false, true) => 3,
            };
            omega[class] += pn * pm * y;
        }
    }
    Ok(omega)
}

/// Original-protocol constraints in the infinite-decoy idealization: the
/// class amplitudes use the exact honest yields instead of LP bounds.
pub(crate) fn x_constraints_original_infinite(
    params: &ChannelParams,
    mu: f64,
    distance_km: f64,
    q_code: Probability,
) -> Result<XConstraints, LeakageError> {
    let eta = params.arm_transmittance(distance_km)?;
    let keep = 1.0 - params.dark_count();
    let survive = 1.0 - eta;
    let n_max = 40 + (8.0 * mu).ceil() as usize;
    let table = poisson_table(mu, n_max as u32);
    let sqrt_table: Vec<f64> = table.iter().map(|p| p.sqrt()).collect();
    let (even_up, odd_up) = parity_sqrt_sums_upper(mu);

    let mut classes = [Interval::new(0.0, 0.0); 4];
    for class in ParityClass::ALL {
        let mut amp = 0.0;
        for n in 0..=n_max {
            for m in 0..=n_max {
                if class.contains(n as u32, m as u32) {
                    let y = 1.0 - keep * keep * survive.powi((n + m) as i32);
                    amp += sqrt_table[n] * sqrt_table[m] * y.max(0.0).sqrt();
                }
            }
        }
        let within = class_sqrt_mass_within(class, &table, &table);
        let (a_odd, b_odd) = match class {
            ParityClass::Ee => (false, false),
            ParityClass::Oe => (true, false),
            ParityClass::Oo => (true, true),
            ParityClass::Eo => (false, true),
        };
        let tail = (pick(a_odd, even_up, odd_up) * pick(b_odd, even_up, odd_up) - within).max(0.0);
        classes[class.index()] = Interval::new(0.0, (amp + tail).powi(2));
    }
    XConstraints::new(classes, q_code.value(), ConstraintMode::Original)
}
