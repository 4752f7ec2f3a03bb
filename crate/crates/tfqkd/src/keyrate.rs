//! End-to-end pipeline: composes the channel model, decoy yield bounds,
//! cross-term bounds, and certified leakage maximization into the secret
//! key rate, with intensity optimization, distance sweeps, and
//! maximum-tolerable-loss search.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{ChannelError, ChannelParams, GainTable};
use crate::crossterm::{omega_bounds, phi_bounds, CrossTermError, Interval, ParityClass};
use crate::decoy::{bound_yields, DecoyError, IntensityConfig};
use crate::leakage::{
    leakage_infinite, max_leakage, x_constraints_improved, x_constraints_original,
    x_constraints_original_infinite, LeakageError, XConstraints,
};
use crate::numerics::{binary_entropy, Bits, NumericsError, Probability};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("channel: {0}")]
    Channel(#[from] ChannelError),
    #[error("decoy: {0}")]
    Decoy(#[from] DecoyError),
    #[error("cross-term: {0}")]
    CrossTerm(#[from] CrossTermError),
    #[error("leakage: {0}")]
    Leakage(#[from] LeakageError),
    #[error("numerics: {0}")]
    Numerics(#[from] NumericsError),
    #[error("{name} = {value} violates {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("mode {0} needs the honest-channel model and cannot run on a measured gain table")]
    ModelOnlyMode(RateMode),
    #[error("gain table code intensity {table_mu} does not match the configured mu {config_mu}")]
    MuMismatch { table_mu: f64, config_mu: f64 },
}

impl PipelineError {
    /// Stable machine-readable error class, `module/kind`.
    pub fn class(&self) -> &'static str {
        match self {
            PipelineError::Channel(_) => "channel/domain",
            PipelineError::Decoy(DecoyError::InconsistentGains { .. }) => "decoy/data-integrity",
            PipelineError::Decoy(DecoyError::MissingGain(..)) => "decoy/data-integrity",
            PipelineError::Decoy(DecoyError::Solver(_)) => "lp/solver",
            PipelineError::Decoy(_) => "decoy/domain",
            PipelineError::CrossTerm(CrossTermError::Inconsistent { .. }) => {
                "crossterm/data-integrity"
            }
            PipelineError::CrossTerm(CrossTermError::MissingGain { .. }) => {
                "crossterm/data-integrity"
            }
            PipelineError::CrossTerm(CrossTermError::Solver(_)) => "lp/solver",
            PipelineError::CrossTerm(_) => "crossterm/domain",
            PipelineError::Leakage(LeakageError::Infeasible(_)) => "leakage/estimation",
            PipelineError::Leakage(LeakageError::Tangent(_)) => "lp/solver",
            PipelineError::Leakage(_) => "leakage/domain",
            PipelineError::Numerics(_) => "numerics/domain",
            PipelineError::InvalidParameter { .. } => "keyrate/config",
            PipelineError::ModelOnlyMode(_) => "keyrate/config",
            PipelineError::MuMismatch { .. } => "keyrate/config",
        }
    }
}

/// Which constraint assembly produces the leakage bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMode {
    Improved,
    Original,
    InfiniteImproved,
    InfiniteOriginal,
}

impl RateMode {
    pub const ALL: [RateMode; 4] = [
        RateMode::Improved,
        RateMode::Original,
        RateMode::InfiniteImproved,
        RateMode::InfiniteOriginal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RateMode::Improved => "improved",
            RateMode::Original => "original",
            RateMode::InfiniteImproved => "infinite_improved",
            RateMode::InfiniteOriginal => "infinite_original",
        }
    }
}

impl fmt::Display for RateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RateMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "improved" => Ok(RateMode::Improved),
            "original" => Ok(RateMode::Original),
            "infinite_improved" => Ok(RateMode::InfiniteImproved),
            "infinite_original" => Ok(RateMode::InfiniteOriginal),
            other => Err(format!(
                "unknown mode {other:?} (expected improved, original, \
                 infinite_improved, or infinite_original)"
            )),
        }
    }
}

/// Pipeline cutoffs and tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineSettings {
    pub yield_cutoff: u32,
    pub pair_cutoff: u32,
    pub lp_tolerance: f64,
    pub leakage_tolerance: f64,
}

impl Default for PipelineSettings {
    fn default() -> Self {
        PipelineSettings {
            yield_cutoff: 10,
            pair_cutoff: 6,
            lp_tolerance: 1e-9,
            leakage_tolerance: 1e-7,
        }
    }
}

/// One evaluated operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatePoint {
    pub distance_km: f64,
    pub total_loss_db: f64,
    pub mu: f64,
    pub skr: Bits,
    pub q_code: Probability,
    pub e_code: Probability,
    pub i_ae_upper: Bits,
    pub mode: RateMode,
    /// True when the raw rate was negative and clamped to zero.
    pub clamped: bool,
}

/// Per-class diagnostics accompanying a point evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct PointDiagnostics {
    pub omega: Option<[Interval; 4]>,
    pub phi: Option<[Interval; 4]>,
    pub x: Option<[Interval; 4]>,
    pub leakage_witness: Option<[f64; 4]>,
    pub certificate_gap: f64,
    pub leakage_converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointEvaluation {
    pub rate: RatePoint,
    pub diagnostics: PointDiagnostics,
}

/// `max(0, q (1 - f H(e) - i_ae))`, the distillable rate per pulse.
pub fn secret_key_rate(
    q_code: Probability,
    e_code: Probability,
    ec_eff: f64,
    i_ae: Bits,
) -> Result<Bits, PipelineError> {
    if !(ec_eff >= 1.0) {
        return Err(PipelineError::InvalidParameter {
            name: "ec_eff",
            value: ec_eff,
            requirement: "f >= 1",
        });
    }
    if i_ae.value() > 1.0 {
        return Err(PipelineError::InvalidParameter {
            name: "i_ae",
            value: i_ae.value(),
            requirement: "i_ae <= 1",
        });
    }
    let raw = q_code.value()
        * (1.0 - ec_eff * binary_entropy(e_code).value() - i_ae.value());
    Ok(Bits::new(raw.max(0.0)).expect("clamped rate"))
}

/// The repeaterless bound `-log2(1 - eta_ch)` on channel-only
/// transmittance; infinite at zero loss.
pub fn plob_bound(loss_coeff: f64, distance_km: f64) -> f64 {
    let eta_ch = 10f64.powf(-loss_coeff * distance_km / 10.0);
    if eta_ch >= 1.0 {
        f64::INFINITY
    } else {
        -(1.0 - eta_ch).log2()
    }
}

/// Evaluates a single operating point against the honest-channel model.
pub fn evaluate_point(
    params: &ChannelParams,
    intensities: &IntensityConfig,
    settings: &PipelineSettings,
    distance_km: f64,
    mode: RateMode,
) -> Result<RatePoint, PipelineError> {
    evaluate_point_detailed(params, intensities, settings, distance_km, mode).map(|p| p.rate)
}

pub fn evaluate_point_detailed(
    params: &ChannelParams,
    intensities: &IntensityConfig,
    settings: &PipelineSettings,
    distance_km: f64,
    mode: RateMode,
) -> Result<PointEvaluation, PipelineError> {
    match mode {
        RateMode::InfiniteImproved => {
            let mu = intensities.mu();
            let (q_c, e_c) = params.code_gain_and_error(mu, distance_km)?;
            let i_ae = leakage_infinite(params, mu, distance_km)?;
            assemble(
                params,
                distance_km,
                mu,
                q_c,
                e_c,
                i_ae,
                mode,
                PointDiagnostics {
                    omega: None,
                    phi: None,
                    x: None,
                    leakage_witness: None,
                    certificate_gap: 0.0,
                    leakage_converged: true,
                },
            )
        }
        RateMode::InfiniteOriginal => {
            let mu = intensities.mu();
            let (q_c, e_c) = params.code_gain_and_error(mu, distance_km)?;
            let xc = x_constraints_original_infinite(params, mu, distance_km, q_c)?;
            let leak = max_leakage(&xc, settings.leakage_tolerance)?;
            let i_ae = leak.upper_bound;
            assemble(
                params,
                distance_km,
                mu,
                q_c,
                e_c,
                i_ae,
                mode,
                PointDiagnostics {
                    omega: None,
                    phi: None,
                    x: Some(*xc.classes()),
                    leakage_witness: Some(leak.witness),
                    certificate_gap: leak.certificate_gap,
                    leakage_converged: leak.converged,
                },
            )
        }
        RateMode::Improved | RateMode::Original => {
            let gains = params.build_gain_table(intensities, distance_km)?;
            let (rate, diag) =
                rate_from_gains(params, &gains, intensities, settings, distance_km, mode)?;
            Ok(PointEvaluation {
                rate,
                diagnostics: diag,
            })
        }
    }
}

/// Evaluates a point from a supplied (typically measured) gain table; the
/// distance is metadata only. Only the finite-decoy modes apply.
pub fn evaluate_point_from_gains(
    params: &ChannelParams,
    gains: &GainTable,
    intensities: &IntensityConfig,
    settings: &PipelineSettings,
    distance_km: f64,
    mode: RateMode,
) -> Result<PointEvaluation, PipelineError> {
    if matches!(
        mode,
        RateMode::InfiniteImproved | RateMode::InfiniteOriginal
    ) {
        return Err(PipelineError::ModelOnlyMode(mode));
    }
    if gains.mu() != intensities.mu() {
        return Err(PipelineError::MuMismatch {
            table_mu: gains.mu(),
            config_mu: intensities.mu(),
        });
    }
    let (rate, diagnostics) =
        rate_from_gains(params, gains, intensities, settings, distance_km, mode)?;
    Ok(PointEvaluation { rate, diagnostics })
}

fn rate_from_gains(
    params: &ChannelParams,
    gains: &GainTable,
    intensities: &IntensityConfig,
    settings: &PipelineSettings,
    distance_km: f64,
    mode: RateMode,
) -> Result<(RatePoint, PointDiagnostics), PipelineError> {
    let mu = intensities.mu();
    let q_c = gains.code_gain();
    let e_c = gains.code_error();
    let yields = bound_yields(gains, intensities, settings.yield_cutoff)?;

    let (xc, omega_diag, phi_diag): (XConstraints, _, _) = match mode {
        RateMode::Original => (x_constraints_original(&yields, mu, q_c)?, None, None),
        RateMode::Improved => {
            let mut omegas = [Interval::new(0.0, 0.0); 4];
            for class in ParityClass::ALL {
                omegas[class.index()] = omega_bounds(&yields, mu, class);
            }
            let phis = phi_bounds(gains, &yields, intensities, mu, settings.pair_cutoff)?;
            (
                x_constraints_improved(&omegas, &phis, q_c)?,
                Some(omegas),
                Some(phis),
            )
        }
        _ => unreachable!("finite-decoy modes only"),
    };
    let leak = max_leakage(&xc, settings.leakage_tolerance)?;
    let point = make_point(
        params,
        distance_km,
        mu,
        q_c,
        e_c,
        leak.upper_bound,
        mode,
    )?;
    let diag = PointDiagnostics {
        omega: omega_diag,
        phi: phi_diag,
        x: Some(*xc.classes()),
        leakage_witness: Some(leak.witness),
        certificate_gap: leak.certificate_gap,
        leakage_converged: leak.converged,
    };
    Ok((point, diag))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    params: &ChannelParams,
    distance_km: f64,
    mu: f64,
    q_c: Probability,
    e_c: Probability,
    i_ae: Bits,
    mode: RateMode,
    diagnostics: PointDiagnostics,
) -> Result<PointEvaluation, PipelineError> {
    let rate = make_point(params, distance_km, mu, q_c, e_c, i_ae, mode)?;
    Ok(PointEvaluation { rate, diagnostics })
}

fn make_point(
    params: &ChannelParams,
    distance_km: f64,
    mu: f64,
    q_c: Probability,
    e_c: Probability,
    i_ae: Bits,
    mode: RateMode,
) -> Result<RatePoint, PipelineError> {
    let i_ae_capped = Bits::new(i_ae.value().min(1.0)).expect("capped leakage");
    let skr = secret_key_rate(q_c, e_c, params.ec_eff(), i_ae_capped)?;
    let raw = q_c.value()
        * (1.0 - params.ec_eff() * binary_entropy(e_c).value() - i_ae_capped.value());
    Ok(RatePoint {
        distance_km,
        total_loss_db: params.loss_coeff() * distance_km,
        mu,
        skr,
        q_code: q_c,
        e_code: e_c,
        i_ae_upper: i_ae_capped,
        mode,
        clamped: raw < 0.0,
    })
}

/// Search grid for the code intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuGrid {
    pub lo: f64,
    pub hi: f64,
    pub steps: u32,
}

impl Default for MuGrid {
    fn default() -> Self {
        MuGrid {
            lo: 0.01,
            hi: 1.0,
            steps: 50,
        }
    }
}

/// Fixed code intensity versus grid-plus-refinement optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuStrategy {
    Fixed,
    Optimize(MuGrid),
}

/// Coarse grid scan over μ followed by golden-section refinement to 1e-3
/// relative; ties break toward smaller μ. Returns the best μ and its point.
pub fn optimize_mu(
    params: &ChannelParams,
    intensities: &IntensityConfig,
    settings: &PipelineSettings,
    distance_km: f64,
    mode: RateMode,
    grid: MuGrid,
) -> Result<(f64, RatePoint), PipelineError> {
    if !(grid.lo > 0.0 && grid.hi > grid.lo && grid.steps >= 2) {
        return Err(PipelineError::InvalidParameter {
            name: "mu_grid",
            value: grid.lo,
            requirement: "0 < lo < hi and steps >= 2",
        });
    }
    for &w in intensities.i1_decoys() {
        if w >= grid.lo && w <= grid.hi {
            return Err(PipelineError::InvalidParameter {
                name: "mu_grid",
                value: w,
                requirement: "no decoy intensity inside the search range",
            });
        }
    }

    let eval = |mu: f64| -> Result<RatePoint, PipelineError> {
        let ints = intensities.with_mu(mu)?;
        evaluate_point(params, &ints, settings, distance_km, mode)
    };

    // ties break toward smaller mu; the ascending scan keeps the first
    let mut best_mu = f64::NAN;
    let mut best_point: Option<RatePoint> = None;
    let mut best_index = 0usize;
    let step = (grid.hi - grid.lo) / f64::from(grid.steps - 1);
    for j in 0..grid.steps {
        let mu = grid.lo + f64::from(j) * step;
        let point = eval(mu)?;
        let strictly_better = best_point
            .as_ref()
            .map_or(true, |b| point.skr.value() > b.skr.value());
        if strictly_better {
            best_index = j as usize;
            best_mu = mu;
            best_point = Some(point);
        }
    }
    let mut best_point = best_point.expect("grid is non-empty");

    if best_point.skr.value() == 0.0 {
        // no key anywhere on the grid; report the low edge, flagged
        let point = eval(grid.lo)?;
        return Ok((grid.lo, point));
    }

    // golden-section refinement around the best grid neighborhood
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = (grid.lo + best_index.saturating_sub(1) as f64 * step).max(grid.lo);
    let mut b = (grid.lo + (best_index + 1) as f64 * step).min(grid.hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    loop {
        for (mu, point) in [(c, &fc), (d, &fd)] {
            let s = point.skr.value();
            let better = s > best_point.skr.value()
                || (s == best_point.skr.value() && s > 0.0 && mu < best_mu);
            if better {
                best_mu = mu;
                best_point = point.clone();
            }
        }
        if (b - a) <= 1e-3 * best_mu.max(1e-6) {
            break;
        }
        if fc.skr.value() >= fd.skr.value() {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    Ok((best_mu, best_point))
}

/// One sweep entry; per-point errors are recorded rather than aborting the
/// sweep.
#[derive(Debug)]
pub struct SweepRow {
    pub distance_km: f64,
    pub mode: RateMode,
    pub result: Result<RatePoint, PipelineError>,
}

/// Evaluates every (distance, mode) combination, ordered by distance first
/// and the given mode order second.
pub fn sweep(
    params: &ChannelParams,
    intensities: &IntensityConfig,
    settings: &PipelineSettings,
    distances: &[f64],
    modes: &[RateMode],
    mu: MuStrategy,
) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(distances.len() * modes.len());
    for &distance_km in distances {
        for &mode in modes {
            let result = match mu {
                MuStrategy::Fixed => {
                    evaluate_point(params, intensities, settings, distance_km, mode)
                }
                MuStrategy::Optimize(grid) => {
                    optimize_mu(params, intensities, settings, distance_km, mode, grid)
                        .map(|(_, point)| point)
                }
            };
            rows.push(SweepRow {
                distance_km,
                mode,
                result,
            });
        }
    }
    rows
}

/// Result of the loss-limit search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossLimit {
    pub loss_db: f64,
    /// True when no positive rate exists even at zero loss.
    pub no_key: bool,
}

/// Largest total channel loss (dB) with a positive key rate, located by
/// doubling then bisection at the given resolution.
pub fn max_tolerable_loss(
    params: &ChannelParams,
    intensities: &IntensityConfig,
    settings: &PipelineSettings,
    mode: RateMode,
    resolution_db: f64,
    mu: MuStrategy,
) -> Result<LossLimit, PipelineError> {
    if !(resolution_db > 0.0) {
        return Err(PipelineError::InvalidParameter {
            name: "resolution_db",
            value: resolution_db,
            requirement: "resolution > 0",
        });
    }
    let alpha = params.loss_coeff();
    if !(alpha > 0.0) {
        return Err(PipelineError::InvalidParameter {
            name: "loss_coeff",
            value: alpha,
            requirement: "loss sweep needs alpha > 0",
        });
    }
    let probe = |loss_db: f64| -> Result<bool, PipelineError> {
        let distance_km = loss_db / alpha;
        let skr = match mu {
            MuStrategy::Fixed => {
                evaluate_point(params, intensities, settings, distance_km, mode)?
                    .skr
                    .value()
            }
            MuStrategy::Optimize(grid) => {
                optimize_mu(params, intensities, settings, distance_km, mode, grid)?
                    .1
                    .skr
                    .value()
            }
        };
        Ok(skr > 0.0)
    };

    if !probe(0.0)? {
        return Ok(LossLimit {
            loss_db: 0.0,
            no_key: true,
        });
    }
    const LOSS_CAP_DB: f64 = 512.0;
    let mut lo = 0.0;
    let mut hi = 16.0;
    while probe(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > LOSS_CAP_DB {
            return Ok(LossLimit {
                loss_db: LOSS_CAP_DB,
                no_key: false,
            });
        }
    }
    while hi - lo > resolution_db {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(LossLimit {
        loss_db: lo,
        no_key: false,
    })
}
