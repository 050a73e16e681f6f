//! Channel data model: symmetric operating point, complex gain matrix, dB
//! conversion, and interference-regime classification.
//!
//! Four nodes, unit transmit power, unit-variance complex Gaussian noise.
//! Nodes 1 and 3 transmit to 2 and 4 in the forward direction while 2 and 4
//! transmit to 1 and 3 in the backward direction; every direct link has power
//! gain SNR and every cross link has power gain INR at the symmetric point.

use num_complex::Complex64;

use crate::{Error, Result};

/// Symmetric operating point: direct-link SNR and cross-link INR as linear
/// (non-dB) power ratios.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    snr: f64,
    inr: f64,
}

impl ChannelParams {
    /// Validates that both ratios are finite and nonnegative.
    pub fn new(snr: f64, inr: f64) -> Result<Self> {
        if !snr.is_finite() {
            return Err(Error::NonFinite { what: "snr" });
        }
        if !inr.is_finite() {
            return Err(Error::NonFinite { what: "inr" });
        }
        if snr < 0.0 {
            return Err(Error::NegativePower { what: "snr" });
        }
        if inr < 0.0 {
            return Err(Error::NegativePower { what: "inr" });
        }
        Ok(Self { snr, inr })
    }

    /// Builds the operating point from dB values.
    pub fn from_db(snr_db: f64, inr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::NonFinite { what: "snr_db" });
        }
        if !inr_db.is_finite() {
            return Err(Error::NonFinite { what: "inr_db" });
        }
        Self::new(db_to_linear(DbValue(snr_db)), db_to_linear(DbValue(inr_db)))
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn inr(&self) -> f64 {
        self.inr
    }
}

/// A value in decibels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DbValue(pub f64);

/// 10^(x/10).
pub fn db_to_linear(x: DbValue) -> f64 {
    libm::exp10(x.0 / 10.0)
}

/// 10 log10(x); rejects x <= 0 and non-finite x.
pub fn linear_to_db(x: f64) -> Result<DbValue> {
    if !x.is_finite() {
        return Err(Error::NonFinite { what: "linear value" });
    }
    if x <= 0.0 {
        return Err(Error::NonPositiveLinear {
            value_was_zero: x == 0.0,
        });
    }
    Ok(DbValue(10.0 * libm::log10(x)))
}

/// Interference class of an operating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeClass {
    /// INR >= SNR(1+SNR): interference is decodable before the desired
    /// message with no rate penalty.
    VeryStrong,
    /// SNR <= INR < SNR(1+SNR).
    StrongNotVeryStrong,
    /// INR < SNR.
    Weak,
}

impl RegimeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeClass::VeryStrong => "very_strong",
            RegimeClass::StrongNotVeryStrong => "strong",
            RegimeClass::Weak => "weak",
        }
    }
}

/// Sub-case of the weak regime, selecting the Han-Kobayashi variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeakSub {
    InrBelowOne,
    InrAtLeastOne,
}

impl WeakSub {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeakSub::InrBelowOne => "inr_below_one",
            WeakSub::InrAtLeastOne => "inr_at_least_one",
        }
    }
}

/// Which side of SNR = INR^3 the point lies on. This is the raw inequality;
/// the backward partial bound additionally routes INR = 0 to its second
/// branch (see `outer_bounds::partial_bwd_sym_bound`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackwardSub {
    SnrLeInrCubed,
    SnrGtInrCubed,
}

impl BackwardSub {
    pub fn as_str(&self) -> &'static str {
        match self {
            BackwardSub::SnrLeInrCubed => "snr_le_inr_cubed",
            BackwardSub::SnrGtInrCubed => "snr_gt_inr_cubed",
        }
    }
}

/// Full classification of an operating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regime {
    pub class: RegimeClass,
    /// Populated iff `class` is `Weak`.
    pub weak_sub: Option<WeakSub>,
    /// Populated for every point; the backward partial bound is piecewise in
    /// SNR vs INR^3 regardless of class.
    pub backward_sub: BackwardSub,
}

/// Classifies an operating point. Total on valid parameters; boundaries go to
/// the stronger class (INR = SNR(1+SNR) is very strong, INR = SNR is strong).
/// The rate formulas are continuous across both boundaries so the tie-break
/// only fixes which formula evaluates there.
pub fn classify(params: ChannelParams) -> Regime {
    let snr = params.snr();
    let inr = params.inr();
    let class = if inr >= snr * (1.0 + snr) {
        RegimeClass::VeryStrong
    } else if inr >= snr {
        RegimeClass::StrongNotVeryStrong
    } else {
        RegimeClass::Weak
    };
    let weak_sub = match class {
        RegimeClass::Weak => Some(if inr < 1.0 {
            WeakSub::InrBelowOne
        } else {
            WeakSub::InrAtLeastOne
        }),
        _ => None,
    };
    let backward_sub = if snr <= inr * inr * inr {
        BackwardSub::SnrLeInrCubed
    } else {
        BackwardSub::SnrGtInrCubed
    };
    Regime {
        class,
        weak_sub,
        backward_sub,
    }
}

/// Complex gain matrix of the four-node channel. `g_jk` is the gain from
/// node j's input to node k's output:
///
/// ```text
/// Y1 = g11 X1 + g21 X2 + g41 X4 + Z1
/// Y2 = g12 X1 + g22 X2 + g32 X3 + Z2
/// Y3 = g23 X2 + g33 X3 + g43 X4 + Z3
/// Y4 = g14 X1 + g34 X3 + g44 X4 + Z4
/// ```
///
/// Self terms (g11, g22, g33, g44) are kept because each full-duplex node can
/// subtract its own transmission exactly; they never enter any bound. The
/// bound formulas consume only the symmetric `ChannelParams`; this matrix
/// exists so the Monte-Carlo oracle can run with genuinely complex gains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelGains {
    pub g12: Complex64,
    pub g21: Complex64,
    pub g34: Complex64,
    pub g43: Complex64,
    pub g14: Complex64,
    pub g41: Complex64,
    pub g23: Complex64,
    pub g32: Complex64,
    pub g11: Complex64,
    pub g22: Complex64,
    pub g33: Complex64,
    pub g44: Complex64,
}

impl ChannelGains {
    /// Symmetric projection with real nonnegative gains: every direct link
    /// sqrt(SNR), every cross link sqrt(INR), self gains 1.
    pub fn symmetric(params: ChannelParams) -> Self {
        let d = Complex64::new(libm::sqrt(params.snr()), 0.0);
        let c = Complex64::new(libm::sqrt(params.inr()), 0.0);
        let one = Complex64::new(1.0, 0.0);
        Self {
            g12: d,
            g21: d,
            g34: d,
            g43: d,
            g14: c,
            g41: c,
            g23: c,
            g32: c,
            g11: one,
            g22: one,
            g33: one,
            g44: one,
        }
    }

    /// Recovers the symmetric operating point, checking that all four direct
    /// links share one squared magnitude and all four cross links another
    /// (relative tolerance 1e-9).
    pub fn params(&self) -> Result<ChannelParams> {
        let snr = self.g12.norm_sqr();
        let inr = self.g14.norm_sqr();
        let directs = [self.g21, self.g34, self.g43];
        let crosses = [self.g41, self.g23, self.g32];
        let close = |a: f64, b: f64| libm::fabs(a - b) <= 1e-9 * libm::fmax(1.0, libm::fmax(a, b));
        if !directs.iter().all(|g| close(g.norm_sqr(), snr))
            || !crosses.iter().all(|g| close(g.norm_sqr(), inr))
        {
            return Err(Error::AsymmetricGains);
        }
        ChannelParams::new(snr, inr)
    }
}
