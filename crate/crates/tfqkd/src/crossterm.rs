//! Non-cross terms Ω and certified cross-term bounds Φ per parity class.
//!
//! The squared class amplitudes split into a diagonal part Ω (a
//! Poisson-weighted sum of yields) and a cross part Φ built from the
//! unknown ancilla overlaps. Comparing the phase-locked decoy-mode-2 gain
//! against the phase-randomized decoy-mode-1 gain at the same intensity
//! pair gives one linear equation in the scaled overlaps `y_{n,m,k,l}`
//! per pair; a joint linear program over all retained pairs then bounds
//! each class's Φ from both sides. Truncation of the infinite pair sum is
//! absorbed into a rigorous slack term on every constraint row.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::GainTable;
use crate::decoy::{IntensityConfig, YieldBounds};
use crate::lp::{LpError, LpOutcome, RangeRow, SharedRegion};
use crate::numerics::poisson_table;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrossTermError {
    #[error("pair cutoff {pair_cutoff} exceeds the yield cutoff {yield_cutoff}")]
    CutoffMismatch { pair_cutoff: u32, yield_cutoff: u32 },
    #[error("pair cutoff must be at least 1, got {0}")]
    CutoffTooSmall(u32),
    #[error("gain table has no {mode} entry for ({omega1}, {omega2})")]
    MissingGain {
        mode: &'static str,
        omega1: f64,
        omega2: f64,
    },
    #[error("negative intensity {0}")]
    NegativeIntensity(f64),
    #[error(
        "decoy-mode gains are inconsistent with any physical channel at this \
         truncation (residual {residual:.3e}) at intensity pairs {pairs:?}"
    )]
    Inconsistent {
        residual: f64,
        pairs: Vec<(f64, f64)>,
    },
    #[error("solver: {0}")]
    Solver(#[from] LpError),
}

/// Joint photon-number parity of Alice's and Bob's pulses; first letter is
/// Alice's parity, second is Bob's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityClass {
    Ee,
    Oe,
    Oo,
    Eo,
}

impl ParityClass {
    pub const ALL: [ParityClass; 4] = [
        ParityClass::Ee,
        ParityClass::Oe,
        ParityClass::Oo,
        ParityClass::Eo,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ParityClass::Ee => "ee",
            ParityClass::Oe => "oe",
            ParityClass::Oo => "oo",
            ParityClass::Eo => "eo",
        }
    }

    /// (Alice odd?, Bob odd?)
    fn parities(self) -> (bool, bool) {
        match self {
            ParityClass::Ee => (false, false),
            ParityClass::Oe => (true, false),
            ParityClass::Oo => (true, true),
            ParityClass::Eo => (false, true),
        }
    }

    pub fn contains(self, n: u32, m: u32) -> bool {
        let (a_odd, b_odd) = self.parities();
        (n % 2 == 1) == a_odd && (m % 2 == 1) == b_odd
    }

    pub fn index(self) -> usize {
        match self {
            ParityClass::Ee => 0,
            ParityClass::Oe => 1,
            ParityClass::Oo => 2,
            ParityClass::Eo => 3,
        }
    }
}

/// An unordered pair of distinct Fock-state indices in the same parity
/// class; `first` precedes `second` lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairIndex {
    pub first: (u32, u32),
    pub second: (u32, u32),
    pub class: ParityClass,
}

/// A closed interval; `lo` may be negative for cross-term bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Per-class Ω and Φ intervals, indexed by [`ParityClass::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassIntervals {
    pub omega: [Interval; 4],
    pub phi: [Interval; 4],
}

/// Class members `(n, m)` with `n, m ≤ cutoff`, lexicographic.
fn class_members(class: ParityClass, cutoff: u32) -> Vec<(u32, u32)> {
    let mut members = Vec::new();
    for n in 0..=cutoff {
        for m in 0..=cutoff {
            if class.contains(n, m) {
                members.push((n, m));
            }
        }
    }
    members
}

/// All unordered distinct pairs of class members with indices up to
/// `pair_cutoff`, in lexicographic order.
pub fn enumerate_pairs(class: ParityClass, pair_cutoff: u32) -> Vec<PairIndex> {
    let members = class_members(class, pair_cutoff);
    let mut pairs = Vec::with_capacity(members.len() * members.len().saturating_sub(1) / 2);
    for (i, &first) in members.iter().enumerate() {
        for &second in &members[i + 1..] {
            pairs.push(PairIndex {
                first,
                second,
                class,
            });
        }
    }
    pairs
}

/// Total Poisson mass of one parity: `(1 ± e^{-2 mean}) / 2`.
fn parity_mass(mean: f64, odd: bool) -> f64 {
    let e = (-2.0 * mean).exp();
    if odd {
        (1.0 - e) / 2.0
    } else {
        (1.0 + e) / 2.0
    }
}

/// Upper bounds on the parity-restricted sums `Σ √p_n` (even, odd).
///
/// Terms are accumulated until they fall below 1e-19 past the mean; the
/// leftover is covered by the same geometric majorization as
/// `poisson_sqrt_mass` and added to both parities.
pub(crate) fn parity_sqrt_sums_upper(mean: f64) -> (f64, f64) {
    if mean == 0.0 {
        return (1.0, 0.0);
    }
    let mut p = (-mean).exp();
    let mut even = p.sqrt();
    let mut odd = 0.0;
    let mut n = 0u32;
    loop {
        n += 1;
        p *= mean / f64::from(n);
        let t = p.sqrt();
        if t < 1e-19 && f64::from(n) > mean {
            let r = (mean / f64::from(n + 1)).sqrt();
            let tail = if r < 0.5 { t / (1.0 - r) } else { t * 4.0 };
            even += tail;
            odd += tail;
            break;
        }
        if n % 2 == 0 {
            even += t;
        } else {
            odd += t;
        }
        if n > 10_000 {
            break;
        }
    }
    (even, odd)
}

/// Σ √(p_n p_m) over a class, restricted to `n, m ≤ cutoff`.
pub(crate) fn class_sqrt_mass_within(
    class: ParityClass,
    t1: &[f64],
    t2: &[f64],
) -> f64 {
    let (a_odd, b_odd) = class.parities();
    let sum_a: f64 = t1
        .iter()
        .enumerate()
        .filter(|(n, _)| (n % 2 == 1) == a_odd)
        .map(|(_, &p)| p.sqrt())
        .sum();
    let sum_b: f64 = t2
        .iter()
        .enumerate()
        .filter(|(m, _)| (m % 2 == 1) == b_odd)
        .map(|(_, &p)| p.sqrt())
        .sum();
    sum_a * sum_b
}

/// Interval for the non-cross term Ω of one class at code intensity `mu`.
///
/// The upper end adds the class's Poisson mass beyond the yield cutoff with
/// worst-case yield 1; the lower end lets the tail contribute nothing.
pub fn omega_bounds(yields: &YieldBounds, mu: f64, class: ParityClass) -> Interval {
    let cutoff = yields.cutoff();
    let table = poisson_table(mu, cutoff);
    let mut lo = 0.0;
    let mut hi = 0.0;
    let mut within_mass = 0.0;
    for (n, m) in class_members(class, cutoff) {
        let w = table[n as usize] * table[m as usize];
        lo += w * yields.lower(n, m).value();
        hi += w * yields.upper(n, m).value();
        within_mass += w;
    }
    let (a_odd, b_odd) = class.parities();
    let class_mass = parity_mass(mu, a_odd) * parity_mass(mu, b_odd);
    let tail = (class_mass - within_mass).max(0.0);
    Interval {
        lo: lo.clamp(0.0, 1.0),
        hi: (hi + tail).clamp(0.0, 1.0),
    }
}

/// Rigorous slack for truncating the pair sum of one constraint row at
/// `pair_cutoff`: twice the within-class √-mass of all omitted pairs,
/// covering `|y| ≤ 2` on every omitted pair.
pub fn pair_tail_slack(
    omega1: f64,
    omega2: f64,
    pair_cutoff: u32,
) -> Result<f64, CrossTermError> {
    for w in [omega1, omega2] {
        if !(w >= 0.0) {
            return Err(CrossTermError::NegativeIntensity(w));
        }
    }
    let (a_even, a_odd) = parity_sqrt_sums_upper(omega1);
    let (b_even, b_odd) = parity_sqrt_sums_upper(omega2);
    // ordered within-class total Σ_classes (A_a B_b)^2, minus the diagonal
    // Σ p_n p_m = 1, halved: every unordered distinct within-class pair.
    let total_upper = ((a_even * a_even + a_odd * a_odd) * (b_even * b_even + b_odd * b_odd)
        - 1.0)
        / 2.0;
    let t1 = poisson_table(omega1, pair_cutoff);
    let t2 = poisson_table(omega2, pair_cutoff);
    let mut cut = 0.0;
    for class in ParityClass::ALL {
        let within = class_sqrt_mass_within(class, &t1, &t2);
        let diag: f64 = class_members(class, pair_cutoff)
            .iter()
            .map(|&(n, m)| t1[n as usize] * t2[m as usize])
            .sum();
        cut += (within * within - diag) / 2.0;
    }
    Ok((2.0 * (total_upper - cut)).max(0.0))
}

/// Certified per-class intervals for the cross terms Φ at code intensity
/// `mu`, from one joint LP over all retained overlap variables.
///
/// Every `(ω1, ω2) ∈ I2 × I2` contributes the two-sided row
/// `|Σ_p √(p_n^{ω1} p_m^{ω2} p_k^{ω1} p_l^{ω2}) y_p - (Q^{d2} - Q^{d1})| ≤ τ`
/// and each variable is boxed by `±2√(Ȳ_{n,m} Ȳ_{k,l})`.
pub fn phi_bounds(
    gains: &GainTable,
    yields: &YieldBounds,
    intensities: &IntensityConfig,
    mu: f64,
    pair_cutoff: u32,
) -> Result<[Interval; 4], CrossTermError> {
    if pair_cutoff < 1 {
        return Err(CrossTermError::CutoffTooSmall(pair_cutoff));
    }
    if pair_cutoff > yields.cutoff() {
        return Err(CrossTermError::CutoffMismatch {
            pair_cutoff,
            yield_cutoff: yields.cutoff(),
        });
    }

    let mut pairs: Vec<PairIndex> = Vec::new();
    for class in ParityClass::ALL {
        pairs.extend(enumerate_pairs(class, pair_cutoff));
    }
    if pairs.is_empty() {
        return Ok([Interval::new(0.0, 0.0); 4]);
    }

    let boxes: Vec<(f64, f64)> = pairs
        .iter()
        .map(|p| {
            let cap = 2.0
                * (yields.upper(p.first.0, p.first.1).value()
                    * yields.upper(p.second.0, p.second.1).value())
                .sqrt();
            (-cap, cap)
        })
        .collect();

    let sqrt_tables: Vec<Vec<f64>> = intensities
        .i2()
        .iter()
        .map(|&w| {
            poisson_table(w, pair_cutoff)
                .into_iter()
                .map(f64::sqrt)
                .collect()
        })
        .collect();

    let mut rows = Vec::new();
    let mut row_pairs = Vec::new();
    for (a, &w1) in intensities.i2().iter().enumerate() {
        for (b, &w2) in intensities.i2().iter().enumerate() {
            let q1 = gains
                .d1(w1, w2)
                .ok_or(CrossTermError::MissingGain {
                    mode: "d1",
                    omega1: w1,
                    omega2: w2,
                })?
                .value();
            let q2 = gains
                .d2(w1, w2)
                .ok_or(CrossTermError::MissingGain {
                    mode: "d2",
                    omega1: w1,
                    omega2: w2,
                })?
                .value();
            let rhs = q2 - q1;
            let tau = pair_tail_slack(w1, w2, pair_cutoff)?;
            let s1 = &sqrt_tables[a];
            let s2 = &sqrt_tables[b];
            let coeffs: Vec<f64> = pairs
                .iter()
                .map(|p| {
                    s1[p.first.0 as usize]
                        * s2[p.first.1 as usize]
                        * s1[p.second.0 as usize]
                        * s2[p.second.1 as usize]
                })
                .collect();
            rows.push(RangeRow::new(coeffs, rhs - tau, rhs + tau));
            row_pairs.push((w1, w2));
        }
    }

    let mut region = SharedRegion::from_ranges(&rows, &boxes)?;
    if let Some(info) = region.infeasibility() {
        let mut viol: Vec<(f64, f64)> = info.rows.iter().map(|&r| row_pairs[r]).collect();
        viol.dedup();
        return Err(CrossTermError::Inconsistent {
            residual: info.residual,
            pairs: viol,
        });
    }

    let s_mu: Vec<f64> = poisson_table(mu, pair_cutoff)
        .into_iter()
        .map(f64::sqrt)
        .collect();
    let mut result = [Interval::new(0.0, 0.0); 4];
    for class in ParityClass::ALL {
        let objective: Vec<f64> = pairs
            .iter()
            .map(|p| {
                if p.class == class {
                    s_mu[p.first.0 as usize]
                        * s_mu[p.first.1 as usize]
                        * s_mu[p.second.0 as usize]
                        * s_mu[p.second.1 as usize]
                } else {
                    0.0
                }
            })
            .collect();
        let hi = expect_value(region.maximize(&objective)?, &row_pairs)?;
        let lo = expect_value(region.minimize(&objective)?, &row_pairs)?;
        result[class.index()] = Interval::new(lo.min(hi), hi);
    }
    Ok(result)
}

fn expect_value(outcome: LpOutcome, row_pairs: &[(f64, f64)]) -> Result<f64, CrossTermError> {
    match outcome {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible { residual } => Err(CrossTermError::Inconsistent {
            residual,
            pairs: row_pairs.to_vec(),
        }),
        LpOutcome::Unbounded => Err(CrossTermError::Solver(LpError::NumericalBreakdown(
            "cross-term program reported unbounded over a box".into(),
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelParams;
    use crate::decoy::bound_yields;
    use crate::numerics::poisson_pmf;

    fn table_i(e_mis: f64) -> ChannelParams {
        ChannelParams::new(8e-8, 0.145, 0.2, e_mis, 1.15).unwrap()
    }

    fn fig2(mu: f64) -> IntensityConfig {
        IntensityConfig::new(mu, &[0.0, 0.002, 0.005, 1.3], &[0.0, 0.002, 0.005]).unwrap()
    }

    #[test]
    fn enumerate_pair_counts() {
        let ee = enumerate_pairs(ParityClass::Ee, 2);
        assert_eq!(ee.len(), 6); // members (0,0),(0,2),(2,0),(2,2)
        assert_eq!(ee[0].first, (0, 0));
        assert_eq!(ee[0].second, (0, 2));

        assert!(enumerate_pairs(ParityClass::Oo, 1).is_empty()); // only (1,1)

        let oe = enumerate_pairs(ParityClass::Oe, 3);
        assert_eq!(oe.len(), 6); // members (1,0),(1,2),(3,0),(3,2)
        let members: Vec<(u32, u32)> = oe.iter().map(|p| p.first).collect();
        assert!(members.contains(&(1, 0)));
    }

    #[test]
    fn pairs_stay_within_class_and_ordered() {
        for class in ParityClass::ALL {
            for p in enumerate_pairs(class, 5) {
                assert!(class.contains(p.first.0, p.first.1));
                assert!(class.contains(p.second.0, p.second.1));
                assert!(p.first < p.second);
            }
        }
    }

    #[test]
    fn parity_masses_are_closed_form() {
        for &mu in &[0.1, 0.5, 1.3] {
            let even: f64 = (0..100)
                .step_by(2)
                .map(|n| poisson_pmf(mu, n).unwrap().value())
                .sum();
            let odd: f64 = (1..100)
                .step_by(2)
                .map(|n| poisson_pmf(mu, n).unwrap().value())
                .sum();
            assert!((parity_mass(mu, false) - even).abs() < 1e-14);
            assert!((parity_mass(mu, true) - odd).abs() < 1e-14);
        }
    }

    #[test]
    fn parity_sqrt_sums_bound_brute_force() {
        for &mu in &[0.05, 0.1, 0.5, 1.3] {
            let mut even = 0.0;
            let mut odd = 0.0;
            for n in 0..=200u32 {
                let t = poisson_pmf(mu, n).unwrap().value().sqrt();
                if n % 2 == 0 {
                    even += t;
                } else {
                    odd += t;
                }
            }
            let (e_up, o_up) = parity_sqrt_sums_upper(mu);
            assert!(e_up >= even - 1e-15 && e_up <= even + 1e-12);
            assert!(o_up >= odd - 1e-15 && o_up <= odd + 1e-12);
        }
    }

    #[test]
    fn tail_slack_vacuum_is_zero() {
        assert_eq!(pair_tail_slack(0.0, 0.0, 6).unwrap(), 0.0);
    }

    #[test]
    fn tail_slack_monotone_in_cutoff() {
        let mut prev = f64::INFINITY;
        for cutoff in 1..=12 {
            let tau = pair_tail_slack(0.1, 0.1, cutoff).unwrap();
            assert!(tau <= prev + 1e-15, "tau grew at cutoff {cutoff}");
            prev = tau;
        }
    }

    #[test]
    fn tail_slack_matches_brute_force_omitted_mass() {
        // independent oracle: full within-class pair mass via partial sums to
        // n = 200 minus a quadruple loop over the retained pairs
        for &(w1, w2, cutoff) in &[(0.1, 0.1, 6u32), (0.5, 0.002, 6), (1.3, 0.1, 8)] {
            let s = |w: f64, n: u32| poisson_pmf(w, n).unwrap().value().sqrt();
            let mut a = [0.0f64; 2];
            let mut b = [0.0f64; 2];
            for n in 0..=200u32 {
                a[(n % 2) as usize] += s(w1, n);
                b[(n % 2) as usize] += s(w2, n);
            }
            let total = ((a[0] * a[0] + a[1] * a[1]) * (b[0] * b[0] + b[1] * b[1]) - 1.0) / 2.0;
            let mut cut = 0.0;
            for n in 0..=cutoff {
                for m in 0..=cutoff {
                    for k in 0..=cutoff {
                        for l in 0..=cutoff {
                            if (n, m) < (k, l) && n % 2 == k % 2 && m % 2 == l % 2 {
                                cut += s(w1, n) * s(w2, m) * s(w1, k) * s(w2, l);
                            }
                        }
                    }
                }
            }
            let oracle = 2.0 * (total - cut);
            let tau = pair_tail_slack(w1, w2, cutoff).unwrap();
            assert!(
                tau >= oracle - 1e-13,
                "tau {tau} below true omitted mass {oracle} at ({w1},{w2},{cutoff})"
            );
            assert!(
                tau <= oracle + 1e-10 + oracle * 1e-6,
                "tau {tau} far above true omitted mass {oracle}"
            );
        }
    }

    #[test]
    fn omega_bounds_vacuum_limit() {
        // tiny mu: nearly all mass in (0,0), so Ω_ee tracks Y_{0,0} and the
        // other classes collapse to the tail
        let params = table_i(0.0);
        let ints = fig2(0.1);
        let gains = params.build_gain_table(&ints, 100.0).unwrap();
        let yields = bound_yields(&gains, &ints, 6).unwrap();
        let omega_ee = omega_bounds(&yields, 1e-9, ParityClass::Ee);
        assert!((omega_ee.lo - yields.lower(0, 0).value()).abs() < 1e-9);
        assert!((omega_ee.hi - yields.upper(0, 0).value()).abs() < 1e-9);
        for class in [ParityClass::Oe, ParityClass::Oo, ParityClass::Eo] {
            let o = omega_bounds(&yields, 1e-9, class);
            assert!(o.lo.abs() < 1e-9 && o.hi < 1e-8);
        }
    }

    #[test]
    fn omega_class_sums_bracket_code_gain() {
        let params = table_i(0.0);
        let ints = fig2(0.1);
        let gains = params.build_gain_table(&ints, 100.0).unwrap();
        let yields = bound_yields(&gains, &ints, 10).unwrap();
        let q = gains.d1(0.1, 0.1).unwrap().value();
        let mut lo_sum = 0.0;
        let mut hi_sum = 0.0;
        for class in ParityClass::ALL {
            let o = omega_bounds(&yields, 0.1, class);
            lo_sum += o.lo;
            hi_sum += o.hi;
        }
        assert!(lo_sum <= q + 1e-12, "{lo_sum} vs {q}");
        assert!(hi_sum >= q - 1e-12, "{hi_sum} vs {q}");
    }

    #[test]
    fn no_pairs_means_zero_phi() {
        let params = table_i(0.0);
        let ints = fig2(0.1);
        let gains = params.build_gain_table(&ints, 100.0).unwrap();
        let yields = bound_yields(&gains, &ints, 6).unwrap();
        let phi = phi_bounds(&gains, &yields, &ints, 0.1, 1).unwrap();
        for i in phi {
            assert_eq!(i.lo, 0.0);
            assert_eq!(i.hi, 0.0);
        }
    }

    #[test]
    fn honest_phi_intervals_contain_zero() {
        let params = table_i(0.015);
        let ints = fig2(0.1);
        for &d in &[0.0, 100.0, 300.0] {
            let gains = params.build_gain_table(&ints, d).unwrap();
            let yields = bound_yields(&gains, &ints, 10).unwrap();
            let phi = phi_bounds(&gains, &yields, &ints, 0.1, 6).unwrap();
            for class in ParityClass::ALL {
                let i = phi[class.index()];
                assert!(
                    i.lo <= 1e-12 && i.hi >= -1e-12,
                    "class {} interval [{}, {}] misses 0 at {d} km",
                    class.tag(),
                    i.lo,
                    i.hi
                );
            }
        }
    }

    #[test]
    fn phi_dominated_by_worst_case_box_sum() {
        let params = table_i(0.015);
        let ints = fig2(0.1);
        let gains = params.build_gain_table(&ints, 150.0).unwrap();
        let yields = bound_yields(&gains, &ints, 10).unwrap();
        let phi = phi_bounds(&gains, &yields, &ints, 0.1, 6).unwrap();
        let mu_sqrt: Vec<f64> = poisson_table(0.1, 6).into_iter().map(f64::sqrt).collect();
        for class in ParityClass::ALL {
            let worst: f64 = enumerate_pairs(class, 6)
                .iter()
                .map(|p| {
                    let coef = mu_sqrt[p.first.0 as usize]
                        * mu_sqrt[p.first.1 as usize]
                        * mu_sqrt[p.second.0 as usize]
                        * mu_sqrt[p.second.1 as usize];
                    let cap = 2.0
                        * (yields.upper(p.first.0, p.first.1).value()
                            * yields.upper(p.second.0, p.second.1).value())
                        .sqrt();
                    coef * cap
                })
                .sum();
            let i = phi[class.index()];
            assert!(i.hi <= worst + 1e-12, "{} vs {worst}", i.hi);
            assert!(i.lo >= -worst - 1e-12, "{} vs {worst}", i.lo);
        }
    }

    #[test]
    fn growing_i2_never_widens_phi() {
        let params = table_i(0.015);
        let small = IntensityConfig::new(0.1, &[0.0, 0.002, 0.005, 1.3], &[0.0, 0.002]).unwrap();
        let big = fig2(0.1);
        let d = 120.0;
        let gains_small = params.build_gain_table(&small, d).unwrap();
        let gains_big = params.build_gain_table(&big, d).unwrap();
        let yields = bound_yields(&gains_big, &big, 10).unwrap();
        let loose = phi_bounds(&gains_small, &yields, &small, 0.1, 6).unwrap();
        let tight = phi_bounds(&gains_big, &yields, &big, 0.1, 6).unwrap();
        for class in ParityClass::ALL {
            let l = loose[class.index()];
            let t = tight[class.index()];
            assert!(t.hi <= l.hi + 1e-10, "{} vs {}", t.hi, l.hi);
            assert!(t.lo >= l.lo - 1e-10, "{} vs {}", t.lo, l.lo);
        }
    }

    #[test]
    fn larger_pair_cutoff_shrinks_phi() {
        let params = table_i(0.015);
        let ints = fig2(0.1);
        let gains = params.build_gain_table(&ints, 200.0).unwrap();
        let yields = bound_yields(&gains, &ints, 10).unwrap();
        let coarse = phi_bounds(&gains, &yields, &ints, 0.1, 4).unwrap();
        let fine = phi_bounds(&gains, &yields, &ints, 0.1, 6).unwrap();
        for class in ParityClass::ALL {
            assert!(
                fine[class.index()].width() <= coarse[class.index()].width() + 1e-9,
                "class {}",
                class.tag()
            );
        }
    }
}
