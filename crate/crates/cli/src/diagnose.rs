//! The `diagnose` command: recomputes the diagnostics of a stored run.

use std::path::Path;

use priorkryl::diagnostics::gsvd;
use serde_json::json;

use crate::config::{parse_config, ExperimentConfig, ProblemKind};
use crate::error::{lib_err, CliError};
use crate::output::{real, write_csv, write_json};
use crate::report::RunReport;
use crate::run::{build_instance, solve, solve_options, Analysis, Instance};

/// Unknown counts above which the dense GSVD is skipped.
pub const GSVD_LIMIT: usize = 2000;

/// Problem kind named in a resolved config.
fn detect_problem(text: &str) -> Result<ProblemKind, CliError> {
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        if let Some((k, v)) = line.split_once('=') {
            if k.trim() == "problem" {
                return match v.trim() {
                    "deconv" => Ok(ProblemKind::Deconv),
                    "ct" => Ok(ProblemKind::Ct),
                    other => Err(CliError::Input(format!("unknown problem `{other}` in resolved_config"))),
                };
            }
        }
    }
    Err(CliError::Input("resolved_config does not name a problem".into()))
}

/// Reads `<run>/resolved_config`.
pub fn load_run_config(run: &Path) -> Result<ExperimentConfig, CliError> {
    let path = run.join("resolved_config");
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let kind = detect_problem(&text)?;
    let mut cfg = parse_config(&text, kind)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        .config;
    cfg.diagnostics = true;
    cfg.output_dir = run.to_path_buf();
    Ok(cfg)
}

fn read_report(path: &Path) -> Result<RunReport, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Writes `ritz.csv`, `nullspace.csv` and `projections.csv` for each solver of the run
/// and `gsvd_checks.json` for the run.
pub fn diagnose(run: &Path) -> Result<(), CliError> {
    let cfg = load_run_config(run)?;
    let inst = build_instance(&cfg)?;
    let mut reports = Vec::new();
    for &name in cfg.solver.names() {
        reports.push((name, read_report(&run.join(name).join("report.json"))?));
    }
    let analysis = Analysis::new(&inst)?;
    let opts = solve_options(&cfg);
    for (name, stored) in reports {
        let (_, trace) = solve(&inst, name, &opts)?;
        if trace.iterations() != stored.stop_index {
            return Err(CliError::Input(format!(
                "{name}: rebuilt run stops at {} but report.json says {}",
                trace.iterations(),
                stored.stop_index
            )));
        }
        let d = analysis.report(name, &trace)?;
        let dir = run.join(name);
        write_csv(
            &dir.join("ritz.csv"),
            &["iter", "j", "theta"],
            d.ritz_history.iter().enumerate().flat_map(|(k, ritz)| {
                ritz.iter()
                    .enumerate()
                    .map(move |(j, &t)| vec![(k + 1).to_string(), j.to_string(), real(t)])
            }),
        )?;
        write_csv(
            &dir.join("nullspace.csv"),
            &["iter", "nu"],
            d.nullspace_fractions
                .iter()
                .enumerate()
                .filter_map(|(k, nu)| nu.map(|v| vec![k.to_string(), real(v)])),
        )?;
        let (spectral, _) = analysis.for_solver(name);
        write_csv(
            &dir.join("projections.csv"),
            &["i", "lambda", "abs_projection"],
            d.eigen_projections
                .iter()
                .zip(&spectral.eigenvalues)
                .enumerate()
                .map(|(i, (&p, &l))| vec![i.to_string(), real(l), real(p)]),
        )?;
    }
    write_json(&run.join("gsvd_checks.json"), &gsvd_checks(&inst, &analysis))?;
    Ok(())
}

fn gsvd_checks(inst: &Instance, analysis: &Analysis) -> serde_json::Value {
    let a = &analysis.dense;
    if a.cols() > GSVD_LIMIT {
        return json!({
            "available": false,
            "reason": format!("n = {} exceeds the dense GSVD limit {GSVD_LIMIT}", a.cols()),
        });
    }
    let checks = || -> priorkryl::Result<serde_json::Value> {
        let g = gsvd(a, &inst.prior)?;
        let (ra, rb) = g.reconstruction_residuals(a, &inst.prior)?;
        let (off, cross) = g.c_gram_defects(&inst.prior)?;
        Ok(json!({
            "available": true,
            "residual_a": ra,
            "residual_b": rb,
            "unit_sum_defect": g.unit_sum_defect(),
            "null_block_residual": g.null_block_residual(a)?,
            "c_gram_offdiag": off,
            "c_cross_term": cross,
            "generalized_values": g.generalized_values,
        }))
    };
    checks().unwrap_or_else(|e| {
        let e = lib_err("diagnostics")(e);
        json!({ "available": false, "reason": e.to_string() })
    })
}
