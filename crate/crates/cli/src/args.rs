//! Command-line surface. All point inputs are in dB (negative values
//! allowed); sweep axes are `start:stop:step` dB ranges.

use clap::{Args, Parser, Subcommand, ValueEnum};
use twoway_ic_core::gap_analysis::{DbRange, TableRow};
use twoway_ic_core::oracles::McQuantity;

#[derive(Parser, Debug)]
#[command(
    name = "twoway-ic",
    version,
    about = "Symmetric two-way Gaussian interference channel: capacity bounds, \
             achievable rates, constant-gap verification, and numerical oracles",
    after_help = "Exit codes: 0 success / all checks pass, 1 usage error, \
                  2 verification failure.\nEnv: TWOWAY_IC_THREADS caps the worker count."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate bounds, achievable rates, and gaps at one operating point
    Bounds(BoundsArgs),
    /// Sweep a dB grid; one CSV/JSON row per gap report, fixed order
    Sweep(SweepArgs),
    /// Verify every constant-gap ceiling over a grid (exit 2 on failure)
    VerifyGaps(VerifyGapsArgs),
    /// Independent numerical oracles (exit 2 when a check fails)
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_parser = parse_finite_f64, allow_hyphen_values = true)]
    pub snr_db: f64,
    #[arg(long, value_parser = parse_finite_f64, allow_hyphen_values = true)]
    pub inr_db: f64,
    #[arg(long, value_enum, default_value_t = BoundsFormat::Json)]
    pub format: BoundsFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundsFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// SNR axis as start:stop:step in dB
    #[arg(long, value_parser = parse_db_range, allow_hyphen_values = true)]
    pub snr_db: DbRange,
    /// INR axis as start:stop:step in dB
    #[arg(long, value_parser = parse_db_range, allow_hyphen_values = true)]
    pub inr_db: DbRange,
    #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
    pub format: SweepFormat,
    /// Keep only points in one interference regime
    #[arg(long, value_enum)]
    pub regime: Option<RegimeFilter>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepFormat {
    /// Schema comment, header row, one row per report
    Csv,
    /// JSON lines, one object per report
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeFilter {
    #[value(name = "very_strong")]
    VeryStrong,
    Strong,
    Weak,
}

impl RegimeFilter {
    pub fn matches(&self, class: twoway_ic_core::channel::RegimeClass) -> bool {
        use twoway_ic_core::channel::RegimeClass;
        matches!(
            (self, class),
            (RegimeFilter::VeryStrong, RegimeClass::VeryStrong)
                | (RegimeFilter::Strong, RegimeClass::StrongNotVeryStrong)
                | (RegimeFilter::Weak, RegimeClass::Weak)
        )
    }
}

#[derive(Args, Debug)]
pub struct VerifyGapsArgs {
    #[arg(long, value_parser = parse_db_range, allow_hyphen_values = true,
          default_value = "0:60:1")]
    pub snr_db: DbRange,
    #[arg(long, value_parser = parse_db_range, allow_hyphen_values = true,
          default_value = "0:60:1")]
    pub inr_db: DbRange,
    /// Slack over the algebraic ceilings
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Override a row ceiling, e.g. strong=0.1 (repeatable)
    #[arg(long = "override-ceiling", value_parser = parse_ceiling_override)]
    pub override_ceiling: Vec<CeilingOverride>,
}

#[derive(Clone, Copy, Debug)]
pub struct CeilingOverride {
    pub row: TableRow,
    pub ceiling_bits: f64,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Brute-force search for the backward-bound correlation maximizer
    Lambda(LambdaArgs),
    /// Monte-Carlo conditional variance vs the closed form
    Variance(McArgs),
    /// Monte-Carlo entropy-difference check vs the log2 bound term
    Entropy(McArgs),
}

#[derive(Args, Debug)]
pub struct LambdaArgs {
    #[arg(long, value_parser = parse_finite_f64, allow_hyphen_values = true)]
    pub snr_db: f64,
    #[arg(long, value_parser = parse_finite_f64, allow_hyphen_values = true)]
    pub inr_db: f64,
    /// Grid points along |lambda24| in [0, 1]
    #[arg(long, default_value_t = 2001)]
    pub n_mag: usize,
    /// Grid points along theta in [0, 2*pi)
    #[arg(long, default_value_t = 720)]
    pub n_theta: usize,
    /// Pass threshold on |grid optimum - closed form| in bits
    #[arg(long, default_value_t = 1e-6)]
    pub value_tol: f64,
}

#[derive(Args, Debug)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub quantity: QuantityArg,
    #[arg(long, value_parser = parse_finite_f64, allow_hyphen_values = true)]
    pub snr_db: f64,
    #[arg(long, value_parser = parse_finite_f64, allow_hyphen_values = true)]
    pub inr_db: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// RNG seed; required so every run is reproducible
    #[arg(long)]
    pub seed: u64,
    /// |lambda24| (default: the closed-form maximizer for bwd_var, 0 for fwd_var)
    #[arg(long)]
    pub lambda_mag: Option<f64>,
    /// Angle of g21 g41* lambda24 in radians (default 0)
    #[arg(long, value_parser = parse_finite_f64, allow_hyphen_values = true)]
    pub lambda_theta: Option<f64>,
    /// Pass threshold in jackknife standard errors
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuantityArg {
    #[value(name = "fwd_var")]
    FwdVar,
    #[value(name = "bwd_var")]
    BwdVar,
}

impl From<QuantityArg> for McQuantity {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::FwdVar => McQuantity::FwdVar,
            QuantityArg::BwdVar => McQuantity::BwdVar,
        }
    }
}

fn parse_finite_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` must be finite"));
    }
    Ok(v)
}

fn parse_db_range(s: &str) -> Result<DbRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("`{s}` is not a start:stop:step range"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| parse_finite_f64(p))
        .collect::<Result<_, _>>()?;
    DbRange::new(nums[0], nums[1], nums[2]).map_err(|e| e.to_string())
}

fn parse_ceiling_override(s: &str) -> Result<CeilingOverride, String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}` is not row=ceiling"))?;
    let row = TableRow::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = TableRow::ALL.iter().map(|r| r.name()).collect();
        format!("unknown table row `{name}`; expected one of {}", known.join(", "))
    })?;
    let ceiling_bits = parse_finite_f64(value)?;
    if ceiling_bits < 0.0 {
        return Err("ceiling must be >= 0".into());
    }
    Ok(CeilingOverride { row, ceiling_bits })
}
