//! Numerically safe building blocks shared by every other module: Poisson
//! photon-number statistics, entropies, and rigorously bounded tail sums.
//!
//! All operations are pure functions. The `0·log 0 ≡ 0` convention applies
//! throughout so boundary points evaluate exactly.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Poisson pmf switches to log-domain evaluation above this `n` to avoid
/// factorial overflow; below it the multiplicative recurrence is bit-stable.
const LOG_DOMAIN_THRESHOLD: u32 = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("{what} must be non-negative, got {value}")]
    Negative { what: &'static str, value: f64 },
    #[error("{what} must be strictly positive, got {value}")]
    NotPositive { what: &'static str, value: f64 },
    #[error("probability must lie in [0, 1], got {0}")]
    ProbabilityRange(f64),
    #[error("{what} must be finite, got {value}")]
    NotFinite { what: &'static str, value: f64 },
}

/// A finite probability in `[0, 1]`. Never NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self, NumericsError> {
        if !value.is_finite() {
            return Err(NumericsError::NotFinite {
                what: "probability",
                value,
            });
        }
        if !(0.0..=1.0).contains(&value) {
            return Err(NumericsError::ProbabilityRange(value));
        }
        Ok(Probability(value))
    }

    /// Accepts values that drifted out of `[0, 1]` by at most `slack`
    /// (solver round-off) and clamps them back in.
    pub fn clamped(value: f64, slack: f64) -> Result<Self, NumericsError> {
        if !value.is_finite() {
            return Err(NumericsError::NotFinite {
                what: "probability",
                value,
            });
        }
        if value < -slack || value > 1.0 + slack {
            return Err(NumericsError::ProbabilityRange(value));
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Probability {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Probability::new(v).map_err(serde::de::Error::custom)
    }
}

/// A finite, non-negative information quantity in bits (per pulse or per
/// event, as documented at the use site).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    pub fn new(value: f64) -> Result<Self, NumericsError> {
        if !value.is_finite() {
            return Err(NumericsError::NotFinite {
                what: "bits",
                value,
            });
        }
        if value < 0.0 {
            return Err(NumericsError::Negative {
                what: "bits",
                value,
            });
        }
        Ok(Bits(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Bits::new(v).map_err(serde::de::Error::custom)
    }
}

/// Poisson pmf `e^{-mean} mean^n / n!`.
///
/// `poisson_pmf(0, 0) = 1` and `poisson_pmf(0, n > 0) = 0` exactly.
pub fn poisson_pmf(mean: f64, n: u32) -> Result<Probability, NumericsError> {
    if !(mean >= 0.0) {
        return Err(NumericsError::Negative {
            what: "poisson mean",
            value: mean,
        });
    }
    if mean == 0.0 {
        return Ok(if n == 0 {
            Probability::ONE
        } else {
            Probability::ZERO
        });
    }
    let p = if n <= LOG_DOMAIN_THRESHOLD {
        let mut term = (-mean).exp();
        for k in 1..=n {
            term *= mean / f64::from(k);
        }
        term
    } else {
        (f64::from(n) * mean.ln() - mean - ln_factorial(n)).exp()
    };
    Ok(Probability(p.clamp(0.0, 1.0)))
}

fn ln_factorial(n: u32) -> f64 {
    (2..=u64::from(n)).map(|k| (k as f64).ln()).sum()
}

/// Table of `p_0..p_cutoff` for one intensity, built with the same
/// recurrence as [`poisson_pmf`].
pub(crate) fn poisson_table(mean: f64, cutoff: u32) -> Vec<f64> {
    let mut table = Vec::with_capacity(cutoff as usize + 1);
    if mean == 0.0 {
        table.push(1.0);
        table.extend(std::iter::repeat(0.0).take(cutoff as usize));
        return table;
    }
    let mut term = (-mean).exp();
    table.push(term);
    for k in 1..=cutoff {
        term *= mean / f64::from(k);
        table.push(term);
    }
    table
}

/// Partial sum of `√p_n` up to `cutoff`, plus a rigorous upper bound on the
/// omitted tail `Σ_{n > cutoff} √p_n`.
///
/// The tail bound majorizes the true tail with a geometric series: the term
/// ratio `√(mean / (n + 1))` decays monotonically, so once it drops below 1
/// the remaining sum is at most `t_n / (1 - r)`.
pub fn poisson_sqrt_mass(mean: f64, cutoff: u32) -> Result<(f64, f64), NumericsError> {
    if !(mean >= 0.0) {
        return Err(NumericsError::Negative {
            what: "poisson mean",
            value: mean,
        });
    }
    if mean == 0.0 {
        return Ok((1.0, 0.0));
    }
    let mut p = (-mean).exp();
    let mut partial = p.sqrt();
    for n in 1..=cutoff {
        p *= mean / f64::from(n);
        partial += p.sqrt();
    }
    let mut n = cutoff + 1;
    let mut p_n = p * mean / f64::from(n);
    let mut tail = 0.0;
    loop {
        let t = p_n.sqrt();
        if t == 0.0 {
            break;
        }
        let r = (mean / f64::from(n + 1)).sqrt();
        if r < 0.5 {
            tail += t / (1.0 - r);
            break;
        }
        tail += t;
        n += 1;
        p_n *= mean / f64::from(n);
    }
    Ok((partial, tail))
}

/// Shannon binary entropy `H(p)` in bits.
pub fn binary_entropy(p: Probability) -> Bits {
    let p = p.value();
    let q = 1.0 - p;
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if q > 0.0 {
        h -= q * q.log2();
    }
    Bits(h.max(0.0))
}

/// The pair entropy `h(x, y) = -x log2 x - y log2 y + (x+y) log2 (x+y)`.
///
/// Equals `(x+y) H(x/(x+y))` for `x + y > 0` and `0` at the origin;
/// symmetric, concave, and bounded by `x + y`.
pub fn pair_entropy(x: f64, y: f64) -> Result<f64, NumericsError> {
    if !(x >= 0.0) {
        return Err(NumericsError::Negative {
            what: "pair entropy argument x",
            value: x,
        });
    }
    if !(y >= 0.0) {
        return Err(NumericsError::Negative {
            what: "pair entropy argument y",
            value: y,
        });
    }
    // fixed evaluation order keeps the symmetry h(x, y) = h(y, x) bit-exact
    let (a, b) = if x >= y { (x, y) } else { (y, x) };
    let s = a + b;
    if s == 0.0 {
        return Ok(0.0);
    }
    let mut h = s * s.log2();
    if a > 0.0 {
        h -= a * a.log2();
    }
    if b > 0.0 {
        h -= b * b.log2();
    }
    Ok(h.max(0.0))
}

/// Gradient of [`pair_entropy`] at a strictly interior point:
/// `(log2((x+y)/x), log2((x+y)/y))`.
pub fn pair_entropy_grad(x: f64, y: f64) -> Result<(f64, f64), NumericsError> {
    if !(x > 0.0) {
        return Err(NumericsError::NotPositive {
            what: "pair entropy argument x",
            value: x,
        });
    }
    if !(y > 0.0) {
        return Err(NumericsError::NotPositive {
            what: "pair entropy argument y",
            value: y,
        });
    }
    let s = x + y;
    Ok(((s / x).log2(), (s / y).log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const EXACT: f64 = 1e-15;

    #[test]
    fn poisson_pmf_vacuum_is_exact() {
        assert_eq!(poisson_pmf(0.0, 0).unwrap().value(), 1.0);
        assert_eq!(poisson_pmf(0.0, 1).unwrap().value(), 0.0);
        assert_eq!(poisson_pmf(0.0, 17).unwrap().value(), 0.0);
    }

    #[test]
    fn poisson_pmf_closed_form() {
        // mpmath, 50 digits
        assert!((poisson_pmf(0.1, 0).unwrap().value() - 0.904_837_418_035_959_57).abs() < EXACT);
        assert!((poisson_pmf(0.1, 1).unwrap().value() - 0.090_483_741_803_595_957).abs() < EXACT);
    }

    #[test]
    fn poisson_pmf_rejects_negative_mean() {
        assert!(poisson_pmf(-0.1, 0).is_err());
        assert!(poisson_pmf(f64::NAN, 0).is_err());
    }

    #[test]
    fn poisson_pmf_log_domain_continuous_at_threshold() {
        // log-domain and recurrence paths agree where they hand over
        let mean = 5.0f64;
        let direct = {
            let mut t = (-mean).exp();
            for k in 1..=21u32 {
                t *= mean / f64::from(k);
            }
            t
        };
        let log_domain = poisson_pmf(mean, 21).unwrap().value();
        assert!((direct - log_domain).abs() / direct < 1e-12);
    }

    #[test]
    fn poisson_pmf_sums_to_one() {
        for &mean in &[0.0, 0.1, 0.5, 1.3] {
            let sum: f64 = (0..=200)
                .map(|n| poisson_pmf(mean, n).unwrap().value())
                .sum();
            assert!(
                (sum - 1.0).abs() <= 1e-12,
                "mass at mean {mean} sums to {sum}"
            );
        }
    }

    #[test]
    fn poisson_table_matches_pmf() {
        let table = poisson_table(1.3, 12);
        for (n, &p) in table.iter().enumerate() {
            assert_eq!(p, poisson_pmf(1.3, n as u32).unwrap().value());
        }
    }

    #[test]
    fn sqrt_mass_vacuum() {
        assert_eq!(poisson_sqrt_mass(0.0, 0).unwrap(), (1.0, 0.0));
        assert_eq!(poisson_sqrt_mass(0.0, 40).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn sqrt_mass_brackets_brute_force() {
        // oracle: direct sum of sqrt(p_n) to n = 200
        for &mean in &[0.1, 0.5, 1.3] {
            let brute: f64 = (0..=200)
                .map(|n| poisson_pmf(mean, n).unwrap().value().sqrt())
                .sum();
            for &cutoff in &[5u32, 10, 30] {
                let brute_partial: f64 = (0..=cutoff)
                    .map(|n| poisson_pmf(mean, n).unwrap().value().sqrt())
                    .sum();
                let (partial, tail) = poisson_sqrt_mass(mean, cutoff).unwrap();
                assert!((partial - brute_partial).abs() < EXACT);
                let brute_tail = brute - brute_partial;
                assert!(
                    tail >= brute_tail - EXACT,
                    "tail bound {tail} below true tail {brute_tail} at mean {mean} cutoff {cutoff}"
                );
            }
        }
    }

    #[test]
    fn sqrt_mass_tail_small_at_cutoff_30() {
        let (_, tail) = poisson_sqrt_mass(0.1, 30).unwrap();
        assert!(tail < 1e-15, "tail {tail}");
    }

    #[test]
    fn sqrt_mass_tail_monotone_in_cutoff() {
        for &mean in &[0.1, 1.3, 4.0] {
            let mut prev = f64::INFINITY;
            for cutoff in 0..30 {
                let (_, tail) = poisson_sqrt_mass(mean, cutoff).unwrap();
                assert!(tail <= prev + EXACT);
                prev = tail;
            }
        }
    }

    #[test]
    fn binary_entropy_known_points() {
        assert_eq!(binary_entropy(Probability::new(0.5).unwrap()).value(), 1.0);
        assert_eq!(binary_entropy(Probability::new(0.0).unwrap()).value(), 0.0);
        assert_eq!(binary_entropy(Probability::new(1.0).unwrap()).value(), 0.0);
        // mpmath: H(0.11) = 0.49991595816452799564...
        let h = binary_entropy(Probability::new(0.11).unwrap()).value();
        assert!((h - 0.499_915_958_164_528).abs() < 1e-12);
    }

    #[test]
    fn pair_entropy_known_points() {
        assert!((pair_entropy(0.25, 0.25).unwrap() - 0.5).abs() < EXACT);
        assert_eq!(pair_entropy(0.3, 0.0).unwrap(), 0.0);
        assert_eq!(pair_entropy(0.0, 0.0).unwrap(), 0.0);
        // mpmath: h(0.2, 0.1) = 0.27548875021634685443...
        assert!((pair_entropy(0.2, 0.1).unwrap() - 0.275_488_750_216_346_85).abs() < 1e-14);
    }

    #[test]
    fn pair_entropy_rejects_negative() {
        assert!(pair_entropy(-1e-12, 0.5).is_err());
        assert!(pair_entropy(0.5, -1.0).is_err());
    }

    #[test]
    fn grad_known_points() {
        let (gx, gy) = pair_entropy_grad(0.25, 0.25).unwrap();
        assert!((gx - 1.0).abs() < EXACT && (gy - 1.0).abs() < EXACT);
        // mpmath: (log2 1.5, log2 3)
        let (gx, gy) = pair_entropy_grad(0.2, 0.1).unwrap();
        assert!((gx - 0.584_962_500_721_156_2).abs() < 1e-14);
        assert!((gy - 1.584_962_500_721_156_2).abs() < 1e-14);
    }

    #[test]
    fn grad_rejects_boundary() {
        assert!(pair_entropy_grad(0.0, 0.5).is_err());
        assert!(pair_entropy_grad(0.5, 0.0).is_err());
    }

    #[test]
    fn grad_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let step = 1e-7;
        for _ in 0..200 {
            let x: f64 = rng.gen_range(0.01..2.0);
            let y: f64 = rng.gen_range(0.01..2.0);
            let (gx, gy) = pair_entropy_grad(x, y).unwrap();
            let fd_x =
                (pair_entropy(x + step, y).unwrap() - pair_entropy(x - step, y).unwrap()) / (2.0 * step);
            let fd_y =
                (pair_entropy(x, y + step).unwrap() - pair_entropy(x, y - step).unwrap()) / (2.0 * step);
            assert!((gx - fd_x).abs() / gx.abs().max(1.0) < 1e-5);
            assert!((gy - fd_y).abs() / gy.abs().max(1.0) < 1e-5);
        }
    }

    #[test]
    fn pair_entropy_concavity_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (a, b, c, d): (f64, f64, f64, f64) = (
                rng.gen_range(1e-6..2.0),
                rng.gen_range(1e-6..2.0),
                rng.gen_range(1e-6..2.0),
                rng.gen_range(1e-6..2.0),
            );
            let lambda: f64 = rng.gen_range(0.001..0.999);
            let mix = pair_entropy(
                lambda * a + (1.0 - lambda) * c,
                lambda * b + (1.0 - lambda) * d,
            )
            .unwrap();
            let chord =
                lambda * pair_entropy(a, b).unwrap() + (1.0 - lambda) * pair_entropy(c, d).unwrap();
            assert!(mix >= chord - 1e-12);
        }
    }

    proptest! {
        #[test]
        fn pair_entropy_homogeneous(x in 1e-9..3.0f64, y in 1e-9..3.0f64) {
            let base = pair_entropy(x, y).unwrap();
            for &t in &[0.5, 2.0, 10.0] {
                let scaled = pair_entropy(t * x, t * y).unwrap();
                prop_assert!((scaled - t * base).abs() <= 1e-12 * t.max(1.0));
            }
        }

        #[test]
        fn pair_entropy_bounded_by_sum(x in 0.0..4.0f64, y in 0.0..4.0f64) {
            let h = pair_entropy(x, y).unwrap();
            prop_assert!(h <= x + y + 1e-12);
            prop_assert!(h >= 0.0);
        }

        #[test]
        fn pair_entropy_symmetric(x in 0.0..4.0f64, y in 0.0..4.0f64) {
            prop_assert_eq!(pair_entropy(x, y).unwrap(), pair_entropy(y, x).unwrap());
        }
    }
}
