//! Subcommand implementations. Each returns the process exit code (0 all
//! good, 2 a verification failed) or a usage-error message that main maps to
//! exit 1. Sweep rows and oracle estimates are deterministic for fixed flags
//! regardless of worker count: grid results are collected in grid order and
//! Monte-Carlo blocks are merged in block order.

use std::io::Write;

use rayon::prelude::*;
use serde_json::json;

use twoway_ic_core::channel::{db_to_linear, ChannelGains, ChannelParams, DbValue, RegimeClass};
use twoway_ic_core::gap_analysis::{
    verify_gap_table_with_ceilings, GapTableSummary, GridSpec, DEFAULT_GAP_TOL,
};
use twoway_ic_core::oracles::{
    lambda_grid_search, mc_block_moments, mc_entropy_from_blocks, mc_variance_from_blocks,
    McConfig, McEstimate, McQuantity, SampleMoments, MC_BLOCKS, RNG_VERSION,
};
use twoway_ic_core::outer_bounds::{lambda_maximizer, LambdaPoint};

use crate::args::{
    BoundsArgs, BoundsFormat, LambdaArgs, McArgs, OracleCommand, QuantityArg, SweepArgs,
    SweepFormat, VerifyGapsArgs,
};
use crate::output::{csv_preamble, evaluate_point, OutputRecord, PointEvaluation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 2;

/// Usage errors exit 1; output errors exit 1 except a closed pipe, which
/// exits 0 quietly.
#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Io(std::io::Error),
}

impl CmdError {
    pub fn usage_message(&self) -> Option<&str> {
        match self {
            CmdError::Usage(m) => Some(m),
            CmdError::Io(_) => None,
        }
    }
}

impl From<String> for CmdError {
    fn from(m: String) -> Self {
        CmdError::Usage(m)
    }
}

type CmdResult = Result<i32, CmdError>;

fn io_err(e: std::io::Error) -> CmdError {
    CmdError::Io(e)
}

fn point_params(snr_db: f64, inr_db: f64) -> Result<ChannelParams, CmdError> {
    ChannelParams::from_db(snr_db, inr_db).map_err(|e| {
        CmdError::Usage(format!(
            "invalid operating point ({snr_db} dB, {inr_db} dB): {e}"
        ))
    })
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

pub fn run_bounds(args: &BoundsArgs, out: &mut impl Write) -> CmdResult {
    point_params(args.snr_db, args.inr_db)?;
    let eval = evaluate_point(args.snr_db, args.inr_db, DEFAULT_GAP_TOL);
    match args.format {
        BoundsFormat::Json => write_bounds_json(&eval, out).map_err(io_err)?,
        BoundsFormat::Text => write_bounds_text(&eval, out).map_err(io_err)?,
    }
    Ok(EXIT_OK)
}

fn write_bounds_json(eval: &PointEvaluation, out: &mut impl Write) -> std::io::Result<()> {
    let gaps: Vec<serde_json::Value> = eval
        .records()
        .iter()
        .map(|r| {
            json!({
                "table_row": r.table_row,
                "direction": r.direction,
                "adaptation": r.adaptation,
                "bound_used": r.bound_used,
                "achievable_used": r.achievable_used,
                "gap_bits": r.gap_bits,
                "ceiling_bits": r.ceiling_bits,
                "pass": r.pass,
                "skipped": r.skipped,
            })
        })
        .collect();
    let doc = json!({
        "snr_db": eval.snr_db,
        "inr_db": eval.inr_db,
        "snr": eval.params.snr(),
        "inr": eval.params.inr(),
        "regime": {
            "class": eval.regime.class.as_str(),
            "weak_sub": eval.regime.weak_sub.map(|w| w.as_str()),
            "backward_sub": eval.regime.backward_sub.as_str(),
        },
        "bounds": {
            "full_sym": eval.bounds.full_sym,
            "partial_single": eval.bounds.partial_single,
            "partial_fwd_sym": eval.bounds.partial_fwd_sym,
            "partial_bwd_sym": eval.bounds.partial_bwd_sym,
            "bwd_branch": eval.bounds.bwd_branch.as_str(),
        },
        "rates": {
            "rate_sym": eval.rates.rate_sym,
            "scheme": eval.rates.scheme.as_str(),
            "hk1": eval.rates.hk1,
            "hk2": eval.rates.hk2,
            "clamped": eval.rates.clamped,
        },
        "gaps": gaps,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("static shape"))
}

fn write_bounds_text(eval: &PointEvaluation, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "operating point: snr {} dB ({}), inr {} dB ({})",
        eval.snr_db,
        eval.params.snr(),
        eval.inr_db,
        eval.params.inr()
    )?;
    let weak = eval
        .regime
        .weak_sub
        .map_or(String::new(), |w| format!(" ({})", w.as_str()));
    writeln!(
        out,
        "regime: {}{weak}, backward: {}",
        eval.regime.class.as_str(),
        eval.regime.backward_sub.as_str()
    )?;
    writeln!(out, "bounds (bits/use):")?;
    writeln!(out, "  full_sym         {:>20.12}", eval.bounds.full_sym)?;
    writeln!(out, "  partial_single   {:>20.12}", eval.bounds.partial_single)?;
    writeln!(out, "  partial_fwd_sym  {:>20.12}", eval.bounds.partial_fwd_sym)?;
    writeln!(
        out,
        "  partial_bwd_sym  {:>20.12}  [{}]",
        eval.bounds.partial_bwd_sym,
        eval.bounds.bwd_branch.as_str()
    )?;
    writeln!(
        out,
        "achievable: rate_sym {:.12} via {}{}",
        eval.rates.rate_sym,
        eval.rates.scheme.as_str(),
        match (eval.rates.hk1, eval.rates.hk2) {
            (Some(a), Some(b)) => format!(" (hk1 {a:.12}, hk2 {b:.12})"),
            _ => String::new(),
        }
    )?;
    writeln!(out, "gaps:")?;
    for r in eval.records() {
        let ceiling = r
            .ceiling_bits
            .map_or("none".to_string(), |c| format!("{c}"));
        writeln!(
            out,
            "  {:<24} {} - {} = {:.12} bits, ceiling {} [{} adaptation, {}] {}",
            r.table_row,
            r.bound_used,
            r.achievable_used,
            r.gap_bits,
            ceiling,
            r.adaptation,
            r.direction,
            if r.skipped {
                "SKIPPED"
            } else if r.pass {
                "PASS"
            } else {
                "FAIL"
            }
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

pub fn run_sweep(args: &SweepArgs, out: &mut impl Write) -> CmdResult {
    let grid = GridSpec::new(args.snr_db, args.inr_db);
    // endpoints are the largest values; if they convert, every point does
    point_params(args.snr_db.stop(), args.inr_db.stop())?;
    let rows: Vec<Vec<OutputRecord>> = grid
        .points()
        .par_iter()
        .map(|&(snr_db, inr_db)| {
            let eval = evaluate_point(snr_db, inr_db, DEFAULT_GAP_TOL);
            match args.regime {
                Some(filter) if !filter.matches(eval.regime.class) => Vec::new(),
                _ => eval.records(),
            }
        })
        .collect();
    let mut out = std::io::BufWriter::new(out);
    match args.format {
        SweepFormat::Csv => {
            writeln!(out, "{}", csv_preamble()).map_err(io_err)?;
            for rec in rows.iter().flatten() {
                writeln!(out, "{}", rec.csv_row()).map_err(io_err)?;
            }
        }
        SweepFormat::Json => {
            for rec in rows.iter().flatten() {
                let line = serde_json::to_string(rec).expect("records serialize");
                writeln!(out, "{line}").map_err(io_err)?;
            }
        }
    }
    out.flush().map_err(io_err)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify-gaps
// ---------------------------------------------------------------------------

pub fn run_verify_gaps(args: &VerifyGapsArgs, out: &mut impl Write) -> CmdResult {
    let grid = GridSpec::new(args.snr_db, args.inr_db);
    point_params(args.snr_db.stop(), args.inr_db.stop())?;
    let overrides: Vec<_> = args
        .override_ceiling
        .iter()
        .map(|o| (o.row, o.ceiling_bits))
        .collect();
    let summary = verify_gap_table_with_ceilings(&grid, args.tol, &overrides)
        .map_err(|e| e.to_string())?;
    write_summary(args, &summary, out).map_err(io_err)?;
    Ok(if summary.all_pass() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    })
}

fn write_summary(
    args: &VerifyGapsArgs,
    summary: &GapTableSummary,
    out: &mut impl Write,
) -> std::io::Result<()> {
    writeln!(
        out,
        "# gap table verification: snr_db {}:{}:{} x inr_db {}:{}:{} ({} points), tol {}",
        args.snr_db.start(),
        args.snr_db.stop(),
        args.snr_db.step(),
        args.inr_db.start(),
        args.inr_db.stop(),
        args.inr_db.step(),
        summary.points,
        summary.tol
    )?;
    for row in &summary.rows {
        match row.max {
            Some(m) => writeln!(
                out,
                "{} {:<24} points={:<5} max_gap={} at snr_db={} inr_db={} ceiling={}",
                if row.pass { "PASS" } else { "FAIL" },
                row.row.name(),
                row.points,
                m.gap_bits,
                m.snr_db,
                m.inr_db,
                row.ceiling_bits
            )?,
            None => writeln!(
                out,
                "PASS {:<24} points=0     (vacuous) ceiling={}",
                row.row.name(),
                row.ceiling_bits
            )?,
        }
    }
    if let Some(d) = summary.diagnostic_max {
        writeln!(
            out,
            "info diagnostic full_adapt_sym_bound vs hk2: max_gap={} at snr_db={} inr_db={} (no ceiling claimed)",
            d.gap_bits, d.snr_db, d.inr_db
        )?;
    }
    if summary.skipped > 0 {
        writeln!(out, "info skipped {} clamped reports", summary.skipped)?;
    }
    writeln!(
        out,
        "RESULT {}",
        if summary.all_pass() { "PASS" } else { "FAIL" }
    )
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

pub fn run_oracle(cmd: &OracleCommand, out: &mut impl Write) -> CmdResult {
    match cmd {
        OracleCommand::Lambda(args) => run_oracle_lambda(args, out),
        OracleCommand::Variance(args) => run_oracle_mc(args, false, out),
        OracleCommand::Entropy(args) => run_oracle_mc(args, true, out),
    }
}

fn run_oracle_lambda(args: &LambdaArgs, out: &mut impl Write) -> CmdResult {
    let params = point_params(args.snr_db, args.inr_db)?;
    let result =
        lambda_grid_search(params, args.n_mag, args.n_theta).map_err(|e| e.to_string())?;
    let pass = result.matches_closed_form(args.value_tol);
    let (d_mag, d_theta) = result.grid_resolution;
    writeln!(
        out,
        "lambda grid search: snr {} dB, inr {} dB, grid {}x{} (d_mag={d_mag}, d_theta={d_theta})",
        args.snr_db, args.inr_db, args.n_mag, args.n_theta
    )
    .map_err(io_err)?;
    writeln!(
        out,
        "grid argmax    |lambda|={} theta={} value={} bits",
        result.best.magnitude(),
        result.best.theta(),
        result.best_value
    )
    .map_err(io_err)?;
    writeln!(
        out,
        "closed form    |lambda|={} theta={} value={} bits",
        result.closed_form.magnitude(),
        result.closed_form.theta(),
        result.closed_form_value
    )
    .map_err(io_err)?;
    writeln!(
        out,
        "diff           value={} bits, point=({}, {}) [tol {} bits, one cell]",
        result.value_diff, result.point_diff.0, result.point_diff.1, args.value_tol
    )
    .map_err(io_err)?;
    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).map_err(io_err)?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

/// Monte-Carlo estimate with blocks computed in parallel and merged in block
/// order; identical output for any thread count.
pub fn mc_estimate_parallel(
    gains: &ChannelGains,
    cfg: &McConfig,
    quantity: McQuantity,
    entropy: bool,
) -> Result<McEstimate, String> {
    let blocks: Vec<SampleMoments> = (0..MC_BLOCKS)
        .into_par_iter()
        .map(|b| mc_block_moments(gains, cfg, quantity, b))
        .collect();
    let est = if entropy {
        mc_entropy_from_blocks(gains, cfg, quantity, &blocks)
    } else {
        mc_variance_from_blocks(gains, cfg, quantity, &blocks)
    };
    est.map_err(|e| e.to_string())
}

fn run_oracle_mc(args: &McArgs, entropy: bool, out: &mut impl Write) -> CmdResult {
    let params = point_params(args.snr_db, args.inr_db)?;
    if !args.sigma.is_finite() || args.sigma <= 0.0 {
        return Err(CmdError::Usage("--sigma must be positive".into()));
    }
    let correlation = match (args.lambda_mag, args.quantity) {
        (Some(mag), _) => LambdaPoint::new(mag, args.lambda_theta.unwrap_or(0.0))
            .map_err(|e| e.to_string())?,
        (None, QuantityArg::BwdVar) => lambda_maximizer(params),
        (None, QuantityArg::FwdVar) => LambdaPoint::new(0.0, 0.0).expect("zero point"),
    };
    let cfg = McConfig::new(args.samples, args.seed, correlation).map_err(|e| e.to_string())?;
    let gains = ChannelGains::symmetric(params);
    let est = mc_estimate_parallel(&gains, &cfg, args.quantity.into(), entropy)?;
    let pass = est.within(args.sigma);
    writeln!(out, "quantity     {}", est.quantity).map_err(io_err)?;
    writeln!(
        out,
        "config       samples={} seed={} blocks={} rng={}",
        cfg.samples, cfg.seed, MC_BLOCKS, RNG_VERSION
    )
    .map_err(io_err)?;
    writeln!(
        out,
        "lambda24     |lambda|={} theta={}",
        correlation.magnitude(),
        correlation.theta()
    )
    .map_err(io_err)?;
    writeln!(out, "estimate     {}", est.estimate).map_err(io_err)?;
    writeln!(out, "closed_form  {}", est.closed_form).map_err(io_err)?;
    writeln!(out, "std_error    {}", est.std_error).map_err(io_err)?;
    writeln!(
        out,
        "z            {} (pass if <= {})",
        est.z_score(),
        args.sigma
    )
    .map_err(io_err)?;
    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).map_err(io_err)?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::RegimeFilter;
    use twoway_ic_core::gap_analysis::DbRange;

    fn sweep_args(snr: &str, inr: &str, format: SweepFormat) -> SweepArgs {
        let parse = |s: &str| {
            let p: Vec<f64> = s.split(':').map(|x| x.parse().unwrap()).collect();
            DbRange::new(p[0], p[1], p[2]).unwrap()
        };
        SweepArgs {
            snr_db: parse(snr),
            inr_db: parse(inr),
            format,
            regime: None,
        }
    }

    #[test]
    fn sweep_csv_row_count_and_order() {
        let mut buf = Vec::new();
        let code = run_sweep(&sweep_args("0:2:1", "0:2:1", SweepFormat::Csv), &mut buf).unwrap();
        assert_eq!(code, EXIT_OK);
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# schema=1");
        assert!(lines[1].starts_with("snr_db,inr_db,"));
        // 9 grid points, each emitting >= 1 row; snr outer, inr inner
        assert!(lines.len() > 10);
        let first = lines[2];
        assert!(first.starts_with("0,0,"));
        // last row belongs to the last grid point
        assert!(lines.last().unwrap().starts_with("2,2,"));
    }

    #[test]
    fn sweep_regime_filter_can_empty_the_output() {
        // snr=0 dB everywhere classifies strong (inr >= snr) or very strong;
        // a weak filter on a very-strong-only grid leaves just the header
        let mut args = sweep_args("0:0:1", "20:25:1", SweepFormat::Csv);
        args.regime = Some(RegimeFilter::Weak);
        let mut buf = Vec::new();
        let code = run_sweep(&args, &mut buf).unwrap();
        assert_eq!(code, EXIT_OK);
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2, "expected only schema + header: {text}");
    }

    #[test]
    fn sweep_json_lines_parse() {
        let mut buf = Vec::new();
        run_sweep(&sweep_args("10:12:1", "0:1:1", SweepFormat::Json), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("snr_db").unwrap().is_number());
            assert!(v.get("table_row").unwrap().is_string());
        }
    }

    #[test]
    fn verify_gaps_small_grid_passes() {
        let args = VerifyGapsArgs {
            snr_db: DbRange::new(0.0, 10.0, 2.0).unwrap(),
            inr_db: DbRange::new(0.0, 10.0, 2.0).unwrap(),
            tol: 1e-9,
            override_ceiling: vec![],
        };
        let mut buf = Vec::new();
        let code = run_verify_gaps(&args, &mut buf).unwrap();
        assert_eq!(code, EXIT_OK);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("RESULT PASS"), "{text}");
        assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 7);
    }

    #[test]
    fn verify_gaps_override_fails() {
        let args = VerifyGapsArgs {
            snr_db: DbRange::new(0.0, 10.0, 2.0).unwrap(),
            inr_db: DbRange::new(0.0, 10.0, 2.0).unwrap(),
            tol: 1e-9,
            override_ceiling: vec![crate::args::CeilingOverride {
                row: twoway_ic_core::gap_analysis::TableRow::Strong,
                ceiling_bits: 0.1,
            }],
        };
        let mut buf = Vec::new();
        let code = run_verify_gaps(&args, &mut buf).unwrap();
        assert_eq!(code, EXIT_VERIFY_FAIL);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("FAIL strong"), "{text}");
        assert!(text.contains("RESULT FAIL"));
    }

    #[test]
    fn bounds_json_fields() {
        let args = BoundsArgs {
            snr_db: 20.0,
            inr_db: 10.0,
            format: BoundsFormat::Json,
        };
        let mut buf = Vec::new();
        assert_eq!(run_bounds(&args, &mut buf).unwrap(), EXIT_OK);
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let full = v["bounds"]["full_sym"].as_f64().unwrap();
        assert!((full - 5.3899811380293255).abs() < 1e-12);
        assert_eq!(v["regime"]["class"], "weak");
        let gaps = v["gaps"].as_array().unwrap();
        assert_eq!(gaps.len(), 3);
        let bwd = gaps
            .iter()
            .find(|g| g["table_row"] == "weak_hk2_backward_case1")
            .unwrap();
        assert_eq!(bwd["gap_bits"].as_f64().unwrap(), 1.0);
    }

    #[test]
    fn oracle_lambda_passes_at_spec_point() {
        let args = LambdaArgs {
            snr_db: 20.0,
            inr_db: 10.0,
            n_mag: 2001,
            n_theta: 720,
            value_tol: 1e-6,
        };
        let mut buf = Vec::new();
        let code = run_oracle_lambda(&args, &mut buf).unwrap();
        assert_eq!(code, EXIT_OK);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("PASS"), "{text}");
        assert!(text.contains("0.316"), "{text}");
    }

    #[test]
    fn oracle_variance_small_run() {
        let args = McArgs {
            quantity: QuantityArg::FwdVar,
            snr_db: 20.0,
            inr_db: 10.0,
            samples: 100_000,
            seed: 7,
            lambda_mag: None,
            lambda_theta: None,
            sigma: 3.0,
        };
        let mut buf = Vec::new();
        let code = run_oracle_mc(&args, false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(code, EXIT_OK, "{text}");
        assert!(text.contains("rng=chacha12-boxmuller-v1"));
        assert!(text.contains("closed_form  20.0909090909"), "{text}");
    }

    #[test]
    fn oracle_variance_rejects_tiny_sample_count() {
        let args = McArgs {
            quantity: QuantityArg::FwdVar,
            snr_db: 20.0,
            inr_db: 10.0,
            samples: 4,
            seed: 7,
            lambda_mag: None,
            lambda_theta: None,
            sigma: 3.0,
        };
        let mut buf = Vec::new();
        let err = run_oracle_mc(&args, false, &mut buf).unwrap_err();
        let msg = err.usage_message().expect("usage error");
        assert!(msg.contains("samples too small"), "{msg}");
    }
}
