//! Rate bounds and constant-gap analysis for the symmetric two-way Gaussian
//! interference channel.
//!
//! Four full-duplex nodes exchange four independent messages, forming a
//! Gaussian interference channel in each direction. This crate evaluates the
//! closed-form symmetric-rate outer bounds for the fully adaptive and
//! partially adaptive models, the non-adaptive achievable rates (interference
//! decoding, simultaneous decoding, and the Han-Kobayashi scheme with private
//! messages at the noise level), and the gap between the two, per interference
//! regime. Independent numerical oracles (brute-force grid search over the
//! input correlation coefficient, and seeded Monte-Carlo estimation of the
//! conditional variances behind each bound) cross-check the closed forms.
//!
//! All rates are in bits per channel use (logs base 2); SNR and INR are linear
//! power ratios throughout, with dB conversion available at the edges.
//!
//! The crate is `no_std` (with `alloc`) so the numerical core can be embedded
//! or linked from constrained environments; IO, CSV output, and the CLI live
//! in the companion `twoway-ic` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod achievable;
pub mod channel;
mod error;
pub mod gap_analysis;
pub mod oracles;
pub mod outer_bounds;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

pub use channel::{classify, ChannelGains, ChannelParams, Regime, RegimeClass};
pub use outer_bounds::{BoundSet, LambdaPoint};
pub use achievable::{achievable_sym_rate, RateSet, Scheme};
pub use gap_analysis::{gap_at, verify_gap_table, GapReport, GridSpec, TableRow};
