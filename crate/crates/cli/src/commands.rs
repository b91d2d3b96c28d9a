use qkr_core::experiment::{self, SweepRow};
use qkr_core::verify::{self, Check};

use crate::config::RunConfig;
use crate::csv::CsvDoc;
use crate::error::CliError;

fn train_meta(doc: &mut CsvDoc, cfg: &RunConfig) -> Result<(), CliError> {
    let train = cfg.params.train()?;
    doc.meta("train_label", train.label());
    doc.meta("train_events", &train.encode_events());
    Ok(())
}

/// Final distribution of the echo train over the ensemble.
pub fn echo(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_single_epsilon()?;
    let out = experiment::echo(&cfg.params)?;
    let mut doc = CsvDoc::new("echo");
    doc.params(&cfg.params, &cfg.epsilons, out.sigma_res);
    train_meta(&mut doc, cfg)?;
    doc.meta_num("fwhm_convolved", out.analysis.fwhm);
    doc.meta_num("fwhm_unconvolved", out.fwhm_unconvolved);
    doc.meta_num("fwhm_initial_convolved", out.fwhm_initial_convolved);
    doc.meta_num("p0_fraction", out.analysis.p0_fraction);
    doc.meta(
        "kernel_under_resolved",
        &out.kernel_under_resolved.to_string(),
    );
    doc.header(&[
        "p_recoils",
        "density_raw",
        "density_Wp",
        "density_convolved",
    ]);
    let rows = out
        .final_raw
        .grid()
        .iter()
        .zip(out.final_raw.density())
        .zip(out.final_wp.density())
        .zip(out.final_convolved.density());
    for (((p, raw), wp), conv) in rows {
        doc.row(&[*p, *raw, *wp, *conv]);
    }
    Ok(doc.into_string())
}

/// `P(0)` after each kick.
pub fn p0_sequence(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_single_epsilon()?;
    let rows = experiment::p0_sequence(&cfg.params)?;
    let sigma_res = cfg.params.resolution(&cfg.params.ensemble()?)?;
    let mut doc = CsvDoc::new("p0-sequence");
    doc.params(&cfg.params, &cfg.epsilons, sigma_res);
    train_meta(&mut doc, cfg)?;
    doc.header(&["kick_index", "p0_fraction"]);
    for (k, p0) in rows {
        doc.row(&[k as f64, p0]);
    }
    Ok(doc.into_string())
}

/// Central-peak widths over the ε list.
pub fn fwhm_sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let rows = experiment::fwhm_sweep(&cfg.params, &cfg.epsilons)?;
    let sigma_res = cfg.params.resolution(&cfg.params.ensemble()?)?;
    let mut doc = CsvDoc::new("fwhm-sweep");
    doc.params(&cfg.params, &cfg.epsilons, sigma_res);
    doc.header(&[
        "epsilon",
        "fwhm_convolved",
        "fwhm_unconvolved",
        "p0_fraction",
    ]);
    for SweepRow {
        epsilon,
        fwhm_convolved,
        fwhm_unconvolved,
        p0_fraction,
    } in rows
    {
        doc.row(&[epsilon, fwhm_convolved, fwhm_unconvolved, p0_fraction]);
    }
    Ok(doc.into_string())
}

pub fn format_checks(checks: &[Check]) -> String {
    let width = checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut s = format!(
        "{:<width$}  {:<22}  {:<36}  {:<9}  result\n",
        "check", "expected", "actual", "tolerance"
    );
    for c in checks {
        s.push_str(&format!(
            "{:<width$}  {:<22}  {:<36}  {:<9}  {}\n",
            c.name,
            c.expected,
            c.actual,
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        ));
    }
    s
}

/// Runs the self-check suite; returns the report and the failure count.
pub fn verify() -> (String, usize) {
    let checks = verify::run_checks();
    let failures = checks.iter().filter(|c| !c.passed).count();
    (format_checks(&checks), failures)
}
