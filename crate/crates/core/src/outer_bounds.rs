//! Closed-form symmetric-rate outer bounds for the fully adaptive and
//! partially adaptive models, including the correlation-coefficient
//! parameterized form of the backward bound and its analytic maximizer.
//!
//! The backward partial bound is the maximum over the one remaining free
//! input correlation lambda24 = E[X2 X4*] of
//!
//! ```text
//! log2( 1 + INR + SNR + 2|l|cos(t) sqrt(SNR INR)
//!       - (SNR INR + INR^2 |l|^2 + 2 sqrt(SNR) INR^(3/2) |l| cos(t)) / (1 + INR) )
//! ```
//!
//! with `l = lambda24` and `t` the angle of `g21 g41* lambda24`. The interior
//! stationary point is |l| = sqrt(SNR INR)/INR^2 at t = 0, clipped to |l| = 1
//! when SNR > INR^3; substituting gives the two branches of
//! [`partial_bwd_sym_bound`]. `oracles::lambda_grid_search` confirms the
//! maximizer by exhaustive search instead of trusting the calculus.

use crate::channel::ChannelParams;
use crate::{Error, Result};

/// Which branch of the piecewise backward partial bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BwdBranch {
    /// SNR <= INR^3 (interior maximizer): log2(1 + INR + SNR/INR).
    Case1SnrLeInrCubed,
    /// SNR > INR^3 (maximizer clipped to |lambda| = 1), and the INR = 0
    /// limit: log2(1 + (sqrt(SNR)+sqrt(INR))^2 / (1+INR)).
    Case2SnrGtInrCubed,
}

impl BwdBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            BwdBranch::Case1SnrLeInrCubed => "case1_snr_le_inr_cubed",
            BwdBranch::Case2SnrGtInrCubed => "case2_snr_gt_inr_cubed",
        }
    }
}

/// Every outer bound evaluated at one operating point, in bits per channel
/// use per user.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSet {
    /// Fully adaptive bound on the symmetric rate (valid in both directions).
    pub full_sym: f64,
    /// Partial-adaptation single-link bound log2(1+SNR); identical for all
    /// four links at the symmetric point.
    pub partial_single: f64,
    /// Partial-adaptation bound on the forward symmetric rate.
    pub partial_fwd_sym: f64,
    /// Partial-adaptation bound on the backward symmetric rate.
    pub partial_bwd_sym: f64,
    /// Which branch produced `partial_bwd_sym`.
    pub bwd_branch: BwdBranch,
}

impl BoundSet {
    /// Evaluates all bounds at one operating point.
    pub fn evaluate(params: ChannelParams) -> Self {
        let (partial_bwd_sym, bwd_branch) = partial_bwd_sym_bound(params);
        Self {
            full_sym: full_adapt_sym_bound(params),
            partial_single: partial_single_rate_bound(params),
            partial_fwd_sym: partial_fwd_sym_bound(params),
            partial_bwd_sym,
            bwd_branch,
        }
    }
}

/// Fully adaptive bound on R_sym:
/// `1/2 log2(1 + SNR + INR + 2 sqrt(SNR INR)) + 1/2 log2(1 + SNR/(1+INR))`.
pub fn full_adapt_sym_bound(params: ChannelParams) -> f64 {
    let s = params.snr();
    let q = params.inr();
    0.5 * libm::log2(1.0 + s + q + 2.0 * libm::sqrt(s * q))
        + 0.5 * libm::log2(1.0 + s / (1.0 + q))
}

/// Partial-adaptation single-rate bound: `log2(1 + SNR)`.
pub fn partial_single_rate_bound(params: ChannelParams) -> f64 {
    libm::log2(1.0 + params.snr())
}

/// Partial-adaptation bound on the forward symmetric rate:
/// `log2(1 + INR + SNR - SNR INR/(1+INR))`.
pub fn partial_fwd_sym_bound(params: ChannelParams) -> f64 {
    let s = params.snr();
    let q = params.inr();
    libm::log2(1.0 + q + s - s * q / (1.0 + q))
}

/// Partial-adaptation bound on the backward symmetric rate, piecewise in
/// SNR vs INR^3. INR = 0 routes to case 2, which is finite and reduces to
/// log2(1+SNR) there; case 1 would divide by INR and its condition
/// SNR <= INR^3 = 0 would force SNR = 0 anyway. At SNR = INR^3 exactly the
/// branches agree and case 1 is reported.
pub fn partial_bwd_sym_bound(params: ChannelParams) -> (f64, BwdBranch) {
    let s = params.snr();
    let q = params.inr();
    if q > 0.0 && s <= q * q * q {
        (libm::log2(1.0 + q + s / q), BwdBranch::Case1SnrLeInrCubed)
    } else {
        let root = libm::sqrt(s) + libm::sqrt(q);
        (
            libm::log2(1.0 + root * root / (1.0 + q)),
            BwdBranch::Case2SnrGtInrCubed,
        )
    }
}

/// A point in the correlation-coefficient search space: |lambda24| and the
/// angle of g21 g41* lambda24, normalized to [0, 2*pi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaPoint {
    magnitude: f64,
    theta: f64,
}

impl LambdaPoint {
    /// Validates magnitude in [0, 1]; theta is reduced mod 2*pi.
    pub fn new(magnitude: f64, theta: f64) -> Result<Self> {
        if !magnitude.is_finite() || !theta.is_finite() {
            return Err(Error::NonFinite { what: "lambda point" });
        }
        if !(0.0..=1.0).contains(&magnitude) {
            return Err(Error::MagnitudeOutOfRange);
        }
        let mut theta = theta % core::f64::consts::TAU;
        if theta < 0.0 {
            theta += core::f64::consts::TAU;
        }
        Ok(Self { magnitude, theta })
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Argument of the log in the lambda-parameterized backward bound. Kept in
/// the linear domain so the grid search can avoid a log per grid cell; it
/// also equals the conditional variance the Monte-Carlo oracle estimates.
pub(crate) fn lambda_arg(params: ChannelParams, magnitude: f64, cos_theta: f64) -> f64 {
    let s = params.snr();
    let q = params.inr();
    let m = magnitude;
    1.0 + q + s + 2.0 * m * cos_theta * libm::sqrt(s * q)
        - (s * q + q * q * m * m + 2.0 * libm::sqrt(s) * q * libm::sqrt(q) * m * cos_theta)
            / (1.0 + q)
}

/// The lambda-parameterized backward bound in bits per use, as a function of
/// (|lambda24|, theta). At |lambda24| = 0 this collapses to
/// [`partial_fwd_sym_bound`]; at the maximizer it equals
/// [`partial_bwd_sym_bound`].
pub fn lambda_objective(params: ChannelParams, pt: LambdaPoint) -> f64 {
    let arg = lambda_arg(params, pt.magnitude(), libm::cos(pt.theta()));
    // arg is a conditional variance of (signal + unit noise), so arg >= 1
    // for any |lambda| <= 1; a violation means corrupted inputs.
    assert!(arg > 0.0, "lambda objective log argument must be positive");
    libm::log2(arg)
}

/// Maximizer of [`lambda_objective`] over |lambda24| in [0,1], theta in
/// [0, 2*pi): `(min(1, sqrt(SNR INR)/INR^2), 0)`. For INR = 0 the objective
/// does not depend on lambda and (0, 0) is returned.
pub fn lambda_maximizer(params: ChannelParams) -> LambdaPoint {
    let s = params.snr();
    let q = params.inr();
    if q == 0.0 {
        return LambdaPoint {
            magnitude: 0.0,
            theta: 0.0,
        };
    }
    let m = libm::sqrt(s * q) / (q * q);
    LambdaPoint {
        magnitude: libm::fmin(1.0, m),
        theta: 0.0,
    }
}
