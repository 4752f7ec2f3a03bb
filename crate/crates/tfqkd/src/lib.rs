//! Secret-key-rate analysis for no-phase-postselection twin-field QKD.
//!
//! The protocol sends phase-locked weak coherent pulses from two users to an
//! untrusted middle node and monitors security with two kinds of decoy
//! transmissions: phase-randomized pulses (decoy mode 1) and phase-locked
//! pulses at varied intensities (decoy mode 2). Comparing the gains of the
//! two decoy modes yields linear constraints on the cross terms of the
//! eavesdropper's ancilla overlaps, which tightens the information-leakage
//! bound well beyond the classic worst-case estimate.
//!
//! The crate is organized as a pipeline:
//!
//! * [`numerics`] — Poisson statistics, entropies, rigorous tail bounds.
//! * [`lp`] — a dense bounded-variable simplex solver.
//! * [`channel`] — the honest-channel model producing every observable.
//! * [`decoy`] — decoy-state linear programs bounding Fock-state yields.
//! * [`crossterm`] — non-cross terms Ω and certified cross-term bounds Φ.
//! * [`leakage`] — certified maximization of the leakage objective.
//! * [`keyrate`] — the secret key rate, μ optimization, sweeps, loss limits.
//! * [`config`] — run configuration parsing and validation for the CLI.

#![forbid(unsafe_code)]

pub mod channel;
pub mod config;
pub mod crossterm;
pub mod decoy;
pub mod keyrate;
pub mod leakage;
pub mod lp;
pub mod numerics;

pub use channel::{ChannelParams, GainTable};
pub use config::RunConfig;
pub use crossterm::{Interval, ParityClass};
pub use decoy::{IntensityConfig, YieldBounds};
pub use keyrate::{RateMode, RatePoint};
pub use leakage::{LeakageResult, XConstraints};
pub use numerics::{Bits, Probability};
