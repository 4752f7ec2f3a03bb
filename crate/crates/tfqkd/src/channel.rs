//! Honest-channel model: every observable the protocol measures, in closed
//! form. Both users sit a half-distance from the middle node, send weak
//! coherent pulses through fiber with a fixed dB/km loss, and the detectors
//! add dark counts. Misalignment leaks a fraction of the arriving intensity
//! into the wrong interferometer port but conserves the total, which is what
//! makes the phase-locked and phase-randomized gains coincide for an honest
//! channel.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ordered_float::NotNan;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoy::IntensityConfig;
use crate::numerics::{poisson_table, Probability};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("{name} = {value} violates {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("distance must be non-negative, got {0} km")]
    NegativeDistance(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GainTableError {
    #[error("gain table line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("gain table is missing a {what} entry")]
    Missing { what: &'static str },
    #[error("gain table entry {mode}({omega1}, {omega2}) = {value} outside [0, 1]")]
    OutOfRange {
        mode: &'static str,
        omega1: f64,
        omega2: f64,
        value: f64,
    },
    #[error("code error rate {e} exceeds 1/2 at gain {q}")]
    ErrorRate { e: f64, q: f64 },
}

/// Physical model inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    dark_count: f64,
    det_eff: f64,
    loss_coeff: f64,
    misalignment: f64,
    ec_eff: f64,
}

impl ChannelParams {
    /// `dark_count` per detector per trial, `det_eff` detector efficiency,
    /// `loss_coeff` in dB/km, `misalignment` as the fraction of intensity
    /// leaking to the wrong output port, `ec_eff` the error-correction
    /// inefficiency `f ≥ 1`.
    pub fn new(
        dark_count: f64,
        det_eff: f64,
        loss_coeff: f64,
        misalignment: f64,
        ec_eff: f64,
    ) -> Result<Self, ChannelError> {
        if !(0.0..0.5).contains(&dark_count) {
            return Err(ChannelError::InvalidParameter {
                name: "dark_count",
                value: dark_count,
                requirement: "0 <= p_dc < 0.5",
            });
        }
        if !(det_eff > 0.0 && det_eff <= 1.0) {
            return Err(ChannelError::InvalidParameter {
                name: "det_eff",
                value: det_eff,
                requirement: "0 < eta_d <= 1",
            });
        }
        if !(loss_coeff >= 0.0) {
            return Err(ChannelError::InvalidParameter {
                name: "loss_coeff",
                value: loss_coeff,
                requirement: "alpha >= 0",
            });
        }
        if !(0.0..=0.5).contains(&misalignment) {
            return Err(ChannelError::InvalidParameter {
                name: "misalignment",
                value: misalignment,
                requirement: "0 <= e_mis <= 0.5",
            });
        }
        if !(ec_eff >= 1.0) {
            return Err(ChannelError::InvalidParameter {
                name: "ec_eff",
                value: ec_eff,
                requirement: "f >= 1",
            });
        }
        Ok(ChannelParams {
            dark_count,
            det_eff,
            loss_coeff,
            misalignment,
            ec_eff,
        })
    }

    pub fn dark_count(&self) -> f64 {
        self.dark_count
    }

    pub fn det_eff(&self) -> f64 {
        self.det_eff
    }

    pub fn loss_coeff(&self) -> f64 {
        self.loss_coeff
    }

    pub fn misalignment(&self) -> f64 {
        self.misalignment
    }

    pub fn ec_eff(&self) -> f64 {
        self.ec_eff
    }

    /// Per-arm transmittance including detector efficiency:
    /// `eta = eta_d · 10^(-alpha (L/2) / 10)` with the middle node at the
    /// midpoint of the total distance `L`.
    pub fn arm_transmittance(&self, distance_km: f64) -> Result<f64, ChannelError> {
        if !(distance_km >= 0.0) {
            return Err(ChannelError::NegativeDistance(distance_km));
        }
        Ok(self.det_eff * 10f64.powf(-self.loss_coeff * (distance_km / 2.0) / 10.0))
    }

    /// Code-mode gain and error rate for phase-locked pulses of intensity
    /// `mu` on both arms.
    ///
    /// With matched phases the signal port receives mean photon number
    /// `2·mu·eta·(1 - e_mis)` and the wrong port `2·mu·eta·e_mis`. Double
    /// clicks count once for the gain and are assigned a random bit, so half
    /// of them are errors.
    pub fn code_gain_and_error(
        &self,
        mu: f64,
        distance_km: f64,
    ) -> Result<(Probability, Probability), ChannelError> {
        if !(mu >= 0.0) {
            return Err(ChannelError::InvalidParameter {
                name: "mu",
                value: mu,
                requirement: "mu >= 0",
            });
        }
        let eta = self.arm_transmittance(distance_km)?;
        let keep = 1.0 - self.dark_count;
        let p_sig = 1.0 - keep * (-2.0 * mu * eta * (1.0 - self.misalignment)).exp();
        let p_wrong = 1.0 - keep * (-2.0 * mu * eta * self.misalignment).exp();
        let q_c = 1.0 - keep * keep * (-2.0 * mu * eta).exp();
        let e_c = if q_c > 0.0 {
            (p_wrong * (1.0 - p_sig) + 0.5 * p_sig * p_wrong) / q_c
        } else {
            0.0
        };
        Ok((
            Probability::clamped(q_c, 1e-15).expect("gain in range"),
            Probability::clamped(e_c, 1e-15).expect("error rate in range"),
        ))
    }

    /// Decoy-mode-1 gain: phase randomization makes the click probability
    /// depend only on the total arriving intensity,
    /// `1 - (1 - p_dc)^2 e^{-eta (w1 + w2)}`.
    pub fn decoy1_gain(
        &self,
        omega1: f64,
        omega2: f64,
        distance_km: f64,
    ) -> Result<Probability, ChannelError> {
        self.total_intensity_gain(omega1, omega2, distance_km)
    }

    /// Decoy-mode-2 gain: the phase-locked pair `|√w1⟩|√w2⟩` at Δφ = 0
    /// splits as `eta (√w1 ± √w2)^2 / 2` across the two ports; misalignment
    /// swaps intensity between the ports but conserves the total, so the
    /// honest value is identical to [`ChannelParams::decoy1_gain`].
    pub fn decoy2_gain(
        &self,
        omega1: f64,
        omega2: f64,
        distance_km: f64,
    ) -> Result<Probability, ChannelError> {
        self.total_intensity_gain(omega1, omega2, distance_km)
    }

    fn total_intensity_gain(
        &self,
        omega1: f64,
        omega2: f64,
        distance_km: f64,
    ) -> Result<Probability, ChannelError> {
        for (name, value) in [("omega1", omega1), ("omega2", omega2)] {
            if !(value >= 0.0) {
                return Err(ChannelError::InvalidParameter {
                    name,
                    value,
                    requirement: "intensity >= 0",
                });
            }
        }
        let eta = self.arm_transmittance(distance_km)?;
        let keep = 1.0 - self.dark_count;
        let q = 1.0 - keep * keep * (-eta * (omega1 + omega2)).exp();
        Ok(Probability::clamped(q, 1e-15).expect("gain in range"))
    }

    /// Yield of the Fock pair `|n⟩|m⟩`: each photon survives independently
    /// with probability `eta`, and any surviving photon or dark count clicks:
    /// `Y_{n,m} = 1 - (1 - p_dc)^2 (1 - eta)^{n+m}`.
    pub fn fock_yield(
        &self,
        n: u32,
        m: u32,
        distance_km: f64,
    ) -> Result<Probability, ChannelError> {
        let eta = self.arm_transmittance(distance_km)?;
        let keep = 1.0 - self.dark_count;
        let y = 1.0 - keep * keep * (1.0 - eta).powi((n + m) as i32);
        Ok(Probability::clamped(y, 1e-15).expect("yield in range"))
    }

    /// Populates a full [`GainTable`] from the honest model.
    pub fn build_gain_table(
        &self,
        intensities: &IntensityConfig,
        distance_km: f64,
    ) -> Result<GainTable, ChannelError> {
        let mu = intensities.mu();
        let (q_c, e_c) = self.code_gain_and_error(mu, distance_km)?;
        let mut d1 = BTreeMap::new();
        for &w1 in intensities.i1() {
            for &w2 in intensities.i1() {
                d1.insert(key(w1, w2), self.decoy1_gain(w1, w2, distance_km)?);
            }
        }
        let mut d2 = BTreeMap::new();
        for &w1 in intensities.i2() {
            for &w2 in intensities.i2() {
                d2.insert(key(w1, w2), self.decoy2_gain(w1, w2, distance_km)?);
            }
        }
        Ok(GainTable {
            mu,
            code_gain: q_c,
            code_error: e_c,
            d1,
            d2,
            provenance: Provenance::Modeled,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Modeled,
    Measured,
}

type Key = (NotNan<f64>, NotNan<f64>);

fn key(w1: f64, w2: f64) -> Key {
    (
        NotNan::new(w1).expect("intensity is not NaN"),
        NotNan::new(w2).expect("intensity is not NaN"),
    )
}

/// Observed or modeled gains: the code-mode gain and error rate plus the
/// decoy-mode-1 and decoy-mode-2 gains keyed by intensity pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTable {
    mu: f64,
    code_gain: Probability,
    code_error: Probability,
    d1: BTreeMap<Key, Probability>,
    d2: BTreeMap<Key, Probability>,
    provenance: Provenance,
}

impl GainTable {
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn code_gain(&self) -> Probability {
        self.code_gain
    }

    pub fn code_error(&self) -> Probability {
        self.code_error
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn d1(&self, omega1: f64, omega2: f64) -> Option<Probability> {
        self.d1.get(&key(omega1, omega2)).copied()
    }

    pub fn d2(&self, omega1: f64, omega2: f64) -> Option<Probability> {
        self.d2.get(&key(omega1, omega2)).copied()
    }

    pub fn d1_len(&self) -> usize {
        self.d1.len()
    }

    pub fn d2_len(&self) -> usize {
        self.d2.len()
    }

    pub fn d2_pairs(&self) -> impl Iterator<Item = (f64, f64, Probability)> + '_ {
        self.d2
            .iter()
            .map(|(&(w1, w2), &q)| (w1.into_inner(), w2.into_inner(), q))
    }

    /// Serializes to the interchange CSV format, header
    /// `mode,omega1,omega2,gain`, 17 significant digits throughout.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mode,omega1,omega2,gain\n");
        let _ = writeln!(
            out,
            "code,{},{},{}",
            fmt(self.mu),
            fmt(self.mu),
            fmt(self.code_gain.value())
        );
        let _ = writeln!(
            out,
            "code_err,{},{},{}",
            fmt(self.mu),
            fmt(self.mu),
            fmt(self.code_error.value())
        );
        for (&(w1, w2), q) in &self.d1 {
            let _ = writeln!(
                out,
                "d1,{},{},{}",
                fmt(w1.into_inner()),
                fmt(w2.into_inner()),
                fmt(q.value())
            );
        }
        for (&(w1, w2), q) in &self.d2 {
            let _ = writeln!(
                out,
                "d2,{},{},{}",
                fmt(w1.into_inner()),
                fmt(w2.into_inner()),
                fmt(q.value())
            );
        }
        out
    }

    /// Parses the CSV format written by [`GainTable::to_csv`]. Imported
    /// tables carry `provenance = measured`.
    pub fn from_csv(text: &str) -> Result<Self, GainTableError> {
        let mut code: Option<(f64, f64)> = None;
        let mut code_err: Option<f64> = None;
        let mut d1 = BTreeMap::new();
        let mut d2 = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if idx == 0 {
                if line != "mode,omega1,omega2,gain" {
                    return Err(GainTableError::Parse {
                        line: 1,
                        message: format!("unexpected header {line:?}"),
                    });
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(GainTableError::Parse {
                    line: idx + 1,
                    message: format!("expected 4 fields, got {}", fields.len()),
                });
            }
            let parse = |s: &str| -> Result<f64, GainTableError> {
                s.parse::<f64>().map_err(|e| GainTableError::Parse {
                    line: idx + 1,
                    message: format!("bad number {s:?}: {e}"),
                })
            };
            let w1 = parse(fields[1])?;
            let w2 = parse(fields[2])?;
            let value = parse(fields[3])?;
            match fields[0] {
                "code" => {
                    check_range("code", w1, w2, value)?;
                    code = Some((w1, value));
                }
                "code_err" => {
                    check_range("code_err", w1, w2, value)?;
                    code_err = Some(value);
                }
                "d1" => {
                    check_range("d1", w1, w2, value)?;
                    d1.insert(key(w1, w2), Probability::new(value).expect("checked"));
                }
                "d2" => {
                    check_range("d2", w1, w2, value)?;
                    d2.insert(key(w1, w2), Probability::new(value).expect("checked"));
                }
                other => {
                    return Err(GainTableError::Parse {
                        line: idx + 1,
                        message: format!("unknown mode {other:?}"),
                    });
                }
            }
        }
        let (mu, q_c) = code.ok_or(GainTableError::Missing { what: "code" })?;
        let e_c = code_err.ok_or(GainTableError::Missing { what: "code_err" })?;
        if e_c > 0.5 + 1e-12 {
            return Err(GainTableError::ErrorRate { e: e_c, q: q_c });
        }
        Ok(GainTable {
            mu,
            code_gain: Probability::new(q_c).expect("checked"),
            code_error: Probability::new(e_c).expect("checked"),
            d1,
            d2,
            provenance: Provenance::Measured,
        })
    }

    /// Σ_{n,m ≤ cutoff} p_n p_m Y_{n,m} plus an upper bracket on the tail
    /// (yield 1 on the omitted Poisson mass); used by the consistency checks.
    pub fn poisson_mixture(
        params: &ChannelParams,
        omega1: f64,
        omega2: f64,
        distance_km: f64,
        cutoff: u32,
    ) -> Result<(f64, f64), ChannelError> {
        let p1 = poisson_table(omega1, cutoff);
        let p2 = poisson_table(omega2, cutoff);
        let mut sum = 0.0;
        for (n, &pn) in p1.iter().enumerate() {
            for (m, &pm) in p2.iter().enumerate() {
                sum += pn * pm * params.fock_yield(n as u32, m as u32, distance_km)?.value();
            }
        }
        let mass1: f64 = p1.iter().sum();
        let mass2: f64 = p2.iter().sum();
        let tail = (1.0 - mass1 * mass2).max(0.0);
        Ok((sum, tail))
    }
}

fn check_range(
    mode: &'static str,
    omega1: f64,
    omega2: f64,
    value: f64,
) -> Result<(), GainTableError> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(GainTableError::OutOfRange {
            mode,
            omega1,
            omega2,
            value,
        });
    }
    Ok(())
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn table_i() -> ChannelParams {
        ChannelParams::new(8e-8, 0.145, 0.2, 0.0, 1.15).unwrap()
    }

    fn fig2_intensities(mu: f64) -> IntensityConfig {
        IntensityConfig::new(mu, &[0.0, 0.002, 0.005, 1.3], &[0.0, 0.002, 0.005]).unwrap()
    }

    #[test]
    fn param_invariants_enforced() {
        assert!(ChannelParams::new(0.5, 0.145, 0.2, 0.0, 1.15).is_err());
        assert!(ChannelParams::new(8e-8, 0.0, 0.2, 0.0, 1.15).is_err());
        assert!(ChannelParams::new(8e-8, 0.145, -0.1, 0.0, 1.15).is_err());
        assert!(ChannelParams::new(8e-8, 0.145, 0.2, 0.6, 1.15).is_err());
        assert!(ChannelParams::new(8e-8, 0.145, 0.2, 0.0, 0.99).is_err());
    }

    #[test]
    fn arm_transmittance_examples() {
        let p = table_i();
        assert_eq!(p.arm_transmittance(0.0).unwrap(), 0.145);
        assert!((p.arm_transmittance(100.0).unwrap() - 0.0145).abs() < 1e-17);
        let unit = ChannelParams::new(0.0, 1.0, 0.2, 0.0, 1.0).unwrap();
        assert!((unit.arm_transmittance(200.0).unwrap() - 0.01).abs() < 1e-16);
        assert!(p.arm_transmittance(-1.0).is_err());
    }

    #[test]
    fn code_gain_and_error_examples() {
        let silent = ChannelParams::new(0.0, 0.145, 0.2, 0.0, 1.15).unwrap();
        let (q, e) = silent.code_gain_and_error(0.0, 50.0).unwrap();
        assert_eq!(q.value(), 0.0);
        assert_eq!(e.value(), 0.0);

        // mpmath at Table I, e_mis = 0, mu = 0.1, L = 100:
        // Q_c = 0.0028959585985538062, E_c = 2.7584705419022173e-5
        let p = table_i();
        let (q, e) = p.code_gain_and_error(0.1, 100.0).unwrap();
        assert!((q.value() - 0.002_895_958_598_553_806_2).abs() < 1e-15);
        assert!((e.value() - 2.758_470_541_902_217_3e-5).abs() < 5e-14);
    }

    #[test]
    fn error_rate_bounded_and_misalignment_dominated() {
        let p = ChannelParams::new(1e-9, 0.5, 0.2, 0.015, 1.15).unwrap();
        for &(mu, l) in &[(0.05, 0.0), (0.2, 50.0), (0.6, 150.0)] {
            let (q, e) = p.code_gain_and_error(mu, l).unwrap();
            assert!(e.value() <= 0.5);
            assert!(e.value() * q.value() <= q.value());
        }
        // short distance, negligible dark counts: E_c approaches the
        // misalignment floor from below
        let (_, e) = p.code_gain_and_error(0.01, 0.0).unwrap();
        assert!((e.value() - 0.015).abs() < 1e-3, "e = {}", e.value());
    }

    #[test]
    fn decoy1_matches_code_gain_in_honest_channel() {
        let p = table_i();
        let q_d = p.decoy1_gain(0.1, 0.1, 100.0).unwrap().value();
        let (q_c, _) = p.code_gain_and_error(0.1, 100.0).unwrap();
        assert_eq!(q_d, q_c.value());
        // dark counts only
        let dark = p.decoy1_gain(0.0, 0.0, 100.0).unwrap().value();
        assert!((dark - 1.599_999_936e-7).abs() < 1e-15);
    }

    #[test]
    fn decoy2_equals_decoy1_identically() {
        let p = ChannelParams::new(8e-8, 0.145, 0.2, 0.015, 1.15).unwrap();
        let set = [0.1, 0.005, 0.002, 0.0];
        for &d in &[0.0, 100.0, 300.0] {
            for &w1 in &set {
                for &w2 in &set {
                    let a = p.decoy1_gain(w1, w2, d).unwrap().value();
                    let b = p.decoy2_gain(w1, w2, d).unwrap().value();
                    assert_eq!(a.to_bits(), b.to_bits());
                }
            }
        }
        let one_sided = p.decoy2_gain(0.1, 0.0, 100.0).unwrap().value();
        let eta = p.arm_transmittance(100.0).unwrap();
        let expect = 1.0 - (1.0f64 - 8e-8).powi(2) * (-eta * 0.1).exp();
        assert!((one_sided - expect).abs() < 1e-16);
    }

    #[test]
    fn fock_yield_examples() {
        let p = table_i();
        assert!((p.fock_yield(0, 0, 100.0).unwrap().value() - 1.599_999_936e-7).abs() < 1e-15);
        let perfect = ChannelParams::new(0.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(perfect.fock_yield(1, 0, 0.0).unwrap().value(), 1.0);
        // mpmath: Y_{1,1} at Table I, L = 100 -> 0.028789905393633784
        assert!((p.fock_yield(1, 1, 100.0).unwrap().value() - 0.028_789_905_393_633_784).abs() < 1e-15);
    }

    #[test]
    fn yields_monotone_in_total_photon_number() {
        let p = table_i();
        for d in [0.0, 120.0, 400.0] {
            let mut prev = 0.0;
            for total in 0..12 {
                let y = p.fock_yield(total, 0, d).unwrap().value();
                assert!(y >= prev);
                prev = y;
            }
        }
    }

    #[test]
    fn gains_monotone_in_distance_and_intensity() {
        let p = table_i();
        let mut prev = 1.0;
        for d in [0.0, 50.0, 100.0, 200.0, 400.0] {
            let q = p.decoy1_gain(0.1, 0.1, d).unwrap().value();
            assert!(q <= prev);
            prev = q;
        }
        let mut prev = 0.0;
        for w in [0.0, 0.002, 0.005, 0.1, 1.3] {
            let q = p.decoy1_gain(w, w, 100.0).unwrap().value();
            assert!(q >= prev);
            prev = q;
        }
    }

    #[test]
    fn mixture_reproduces_decoy1_gain() {
        let p = table_i();
        for &(w1, w2) in &[(0.1, 0.1), (0.005, 0.002), (1.3, 0.1), (0.0, 0.005)] {
            for &d in &[0.0, 100.0, 300.0] {
                let q = p.decoy1_gain(w1, w2, d).unwrap().value();
                let (sum, tail) = GainTable::poisson_mixture(&p, w1, w2, d, 40).unwrap();
                assert!(
                    (sum + tail - q).abs() <= 1e-9,
                    "bracket top at ({w1},{w2},{d}): {} vs {q}",
                    sum + tail
                );
                assert!(sum <= q + 1e-12, "partial sum exceeds gain");
                assert!(sum + tail >= q - 1e-12, "bracket must cover the gain");
            }
        }
    }

    #[test]
    fn gain_table_counts_and_honest_identity() {
        let p = ChannelParams::new(8e-8, 0.145, 0.2, 0.015, 1.15).unwrap();
        let ints = fig2_intensities(0.1);
        let table = p.build_gain_table(&ints, 100.0).unwrap();
        assert_eq!(table.d1_len(), 25);
        assert_eq!(table.d2_len(), 16);
        assert_eq!(table.provenance(), Provenance::Modeled);
        for &w1 in ints.i2() {
            for &w2 in ints.i2() {
                let q1 = table.d1(w1, w2).unwrap().value();
                let q2 = table.d2(w1, w2).unwrap().value();
                assert_eq!(q1.to_bits(), q2.to_bits());
            }
        }
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let p = ChannelParams::new(8e-8, 0.145, 0.2, 0.015, 1.15).unwrap();
        let ints = fig2_intensities(0.1);
        let table = p.build_gain_table(&ints, 123.0).unwrap();
        let csv = table.to_csv();
        let back = GainTable::from_csv(&csv).unwrap();
        assert_eq!(back.provenance(), Provenance::Measured);
        assert_eq!(back.mu().to_bits(), table.mu().to_bits());
        assert_eq!(
            back.code_gain().value().to_bits(),
            table.code_gain().value().to_bits()
        );
        for &w1 in ints.i1() {
            for &w2 in ints.i1() {
                assert_eq!(
                    back.d1(w1, w2).unwrap().value().to_bits(),
                    table.d1(w1, w2).unwrap().value().to_bits()
                );
            }
        }
        // and the text itself is reproduced byte for byte
        assert_eq!(back.to_csv(), csv);
    }

    #[test]
    fn csv_rejects_out_of_range_and_garbage() {
        assert!(matches!(
            GainTable::from_csv("mode,omega1,omega2,gain\ncode,0.1,0.1,1.5\n"),
            Err(GainTableError::OutOfRange { .. })
        ));
        assert!(matches!(
            GainTable::from_csv("bad header\n"),
            Err(GainTableError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            GainTable::from_csv("mode,omega1,omega2,gain\nd1,0.1,0.1,0.5\n"),
            Err(GainTableError::Missing { .. })
        ));
    }
}
