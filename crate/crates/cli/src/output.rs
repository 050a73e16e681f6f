//! Flat output records and the versioned CSV schema.
//!
//! One record per gap report: the operating point, its regime, every bound,
//! the achievable rate set, and the pairing under test, flattened so each CSV
//! row (or JSON-lines object) is self-contained. Optional fields (the HK
//! branches outside the weak/INR>=1 regime, the ceiling of the diagnostic
//! pairing) serialize as empty CSV cells and JSON nulls.
//!
//! Floats are printed in Rust's shortest round-trip form, so rows parse back
//! to the exact binary values and byte-identical reruns are guaranteed.

use serde::Serialize;
use twoway_ic_core::achievable::{achievable_sym_rate, RateSet};
use twoway_ic_core::channel::{classify, ChannelParams, Regime};
use twoway_ic_core::gap_analysis::{gap_at_with_tol, GapReport};
use twoway_ic_core::outer_bounds::BoundSet;

/// Bumped whenever the column set changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 23] = [
    "snr_db",
    "inr_db",
    "regime",
    "weak_sub",
    "full_sym",
    "partial_single",
    "partial_fwd_sym",
    "partial_bwd_sym",
    "bwd_branch",
    "rate_sym",
    "scheme",
    "hk1",
    "hk2",
    "clamped",
    "direction",
    "adaptation",
    "bound_used",
    "achievable_used",
    "gap_bits",
    "ceiling_bits",
    "table_row",
    "pass",
    "skipped",
];

/// One fully flattened row: operating point x gap report.
#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub snr_db: f64,
    pub inr_db: f64,
    pub regime: &'static str,
    pub weak_sub: Option<&'static str>,
    pub full_sym: f64,
    pub partial_single: f64,
    pub partial_fwd_sym: f64,
    pub partial_bwd_sym: f64,
    pub bwd_branch: &'static str,
    pub rate_sym: f64,
    pub scheme: &'static str,
    pub hk1: Option<f64>,
    pub hk2: Option<f64>,
    pub clamped: bool,
    pub direction: &'static str,
    pub adaptation: &'static str,
    pub bound_used: &'static str,
    pub achievable_used: &'static str,
    pub gap_bits: f64,
    pub ceiling_bits: Option<f64>,
    pub table_row: &'static str,
    pub pass: bool,
    pub skipped: bool,
}

/// Everything evaluated at one operating point, before flattening.
pub struct PointEvaluation {
    pub snr_db: f64,
    pub inr_db: f64,
    pub params: ChannelParams,
    pub regime: Regime,
    pub bounds: BoundSet,
    pub rates: RateSet,
    pub reports: Vec<GapReport>,
}

/// Evaluates regime, bounds, rates, and gap reports at one grid point.
pub fn evaluate_point(snr_db: f64, inr_db: f64, tol: f64) -> PointEvaluation {
    let params = ChannelParams::from_db(snr_db, inr_db)
        .expect("grid points are validated before evaluation");
    PointEvaluation {
        snr_db,
        inr_db,
        params,
        regime: classify(params),
        bounds: BoundSet::evaluate(params),
        rates: achievable_sym_rate(params),
        reports: gap_at_with_tol(params, tol),
    }
}

impl PointEvaluation {
    /// One record per gap report.
    pub fn records(&self) -> Vec<OutputRecord> {
        self.reports
            .iter()
            .map(|r| OutputRecord {
                snr_db: self.snr_db,
                inr_db: self.inr_db,
                regime: self.regime.class.as_str(),
                weak_sub: self.regime.weak_sub.map(|w| w.as_str()),
                full_sym: self.bounds.full_sym,
                partial_single: self.bounds.partial_single,
                partial_fwd_sym: self.bounds.partial_fwd_sym,
                partial_bwd_sym: self.bounds.partial_bwd_sym,
                bwd_branch: self.bounds.bwd_branch.as_str(),
                rate_sym: self.rates.rate_sym,
                scheme: self.rates.scheme.as_str(),
                hk1: self.rates.hk1,
                hk2: self.rates.hk2,
                clamped: self.rates.clamped,
                direction: r.direction.as_str(),
                adaptation: r.adaptation.as_str(),
                bound_used: r.bound_used,
                achievable_used: r.achievable_used,
                gap_bits: r.gap_bits,
                ceiling_bits: r.ceiling_bits,
                table_row: r.row.map_or("diagnostic", |row| row.name()),
                pass: r.pass,
                skipped: r.skipped,
            })
            .collect()
    }
}

/// `# schema=N` comment line followed by the header row.
pub fn csv_preamble() -> String {
    format!("# schema={CSV_SCHEMA_VERSION}\n{}", CSV_COLUMNS.join(","))
}

fn push_opt_f64(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        out.push_str(&format!("{v}"));
    }
}

impl OutputRecord {
    /// Comma-separated row matching [`CSV_COLUMNS`]; no field needs quoting.
    pub fn csv_row(&self) -> String {
        let mut out = String::with_capacity(256);
        out.push_str(&format!("{},{},{},", self.snr_db, self.inr_db, self.regime));
        out.push_str(self.weak_sub.unwrap_or(""));
        out.push_str(&format!(
            ",{},{},{},{},{},{},{},",
            self.full_sym,
            self.partial_single,
            self.partial_fwd_sym,
            self.partial_bwd_sym,
            self.bwd_branch,
            self.rate_sym,
            self.scheme,
        ));
        push_opt_f64(&mut out, self.hk1);
        out.push(',');
        push_opt_f64(&mut out, self.hk2);
        out.push_str(&format!(
            ",{},{},{},{},{},{},",
            self.clamped,
            self.direction,
            self.adaptation,
            self.bound_used,
            self.achievable_used,
            self.gap_bits,
        ));
        push_opt_f64(&mut out, self.ceiling_bits);
        out.push_str(&format!(",{},{},{}", self.table_row, self.pass, self.skipped));
        out
    }
}
