//! Executes a validated plan and writes its artifacts.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use s6v_core::degenerations::{verify_hammersley_equivalence, verify_tpng_equivalence};
use s6v_core::lattice::{export, render_svg, sample_colored_cs6v, sample_cs6v, sample_s6v, Model, SvgStyle};
use s6v_core::lln::{convergence_experiment, hammersley_experiment, ConvergenceReport};
use s6v_core::lmatrix::{
    l2_golden_table, render_golden_table, verify_color_ignorance, verify_mod2_erasure, verify_stochastic, Partition,
};
use s6v_core::{VerificationReport, VERSION};

use crate::config::{OutputConfig, Plan, RunConfig};

/// A verifier outcome, or the error that stopped it.
#[derive(Serialize)]
#[serde(untagged)]
enum Entry {
    Report(VerificationReport),
    Failed { name: String, error: Value },
}

impl Entry {
    fn from_result(name: String, result: s6v_core::Result<VerificationReport>) -> Self {
        match result {
            Ok(r) => Entry::Report(r),
            Err(e) => Entry::Failed { name, error: json!({ "kind": e.kind(), "message": e.to_string() }) },
        }
    }

    fn passed(&self) -> bool {
        matches!(self, Entry::Report(r) if r.passed())
    }

    fn line(&self) -> String {
        match self {
            Entry::Report(r) => r.to_string(),
            Entry::Failed { name, error } => format!("FAIL {name}: {}", error["message"].as_str().unwrap_or_default()),
        }
    }
}

fn model_name(model: Model) -> String {
    serde_json::to_value(model).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

pub fn provenance(config: &RunConfig) -> Value {
    json!({ "version": VERSION, "config": config })
}

fn write(path: &Path, bytes: &[u8]) -> s6v_core::Result<()> {
    fs::write(path, bytes).map_err(s6v_core::Error::from)
}

/// Writes the JSON document to `out`, or prints it when no path is given.
/// Summary lines go to stdout only in the former case.
fn emit(output: &OutputConfig, doc: &Value, summary: &[String]) -> s6v_core::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("serializable document");
    text.push('\n');
    match &output.out {
        Some(path) => {
            write(path, text.as_bytes())?;
            for line in summary {
                println!("{line}");
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn csv_with_header(config: &RunConfig, csv: &str) -> String {
    format!("# {}\n{csv}", provenance(config))
}

fn tolerance_entry(report: &ConvergenceReport, tolerance: Option<f64>) -> Option<Entry> {
    let tol = tolerance?;
    let largest = *report.sizes.iter().max()?;
    let mut check = VerificationReport::new(format!("max error at size {largest} <= {tol}"));
    match report.summary(largest).and_then(|s| s.max_abs_error) {
        Some(err) => check.check_close(err, tol, || format!("max abs error {err} exceeds {tol}")),
        None => check.check(false, || "no closed-form reference for this field".into()),
    }
    Some(Entry::Report(check))
}

/// Runs the plan; returns whether every check passed.
pub fn run(config: &RunConfig, plan: Plan) -> s6v_core::Result<bool> {
    let prov = provenance(config);
    let output = &config.output;
    match plan {
        Plan::Verify { colors, grid } => {
            let mut entries = Vec::new();
            for n in 1..=colors {
                entries.push(Entry::from_result(format!("stochastic n={n}"), verify_stochastic(n, &grid)));
                for m in 1..=n {
                    entries.push(Entry::from_result(format!("color ignorance n={n} m={m}"), verify_color_ignorance(n, m, &grid)));
                }
                if n <= s6v_core::lmatrix::EXHAUSTIVE_MAX_COLORS {
                    for pi in Partition::all(n) {
                        entries.push(Entry::from_result(format!("mod-2 erasure n={n} {pi}"), verify_mod2_erasure(n, &pi, &grid)));
                    }
                }
                let t_grid: Vec<f64> = grid.iter().map(|&(b1, _)| b1).collect();
                entries.push(Entry::from_result(format!("modified min n={n}"), verify_tpng_equivalence(n, &t_grid)));
            }
            for p in [0.25, 0.5, 0.75] {
                for w in 1..=3 {
                    for h in 1..=3 {
                        let name = format!("hammersley equivalence {w}x{h} p={p}");
                        entries.push(Entry::from_result(name, verify_hammersley_equivalence(w, h, p)));
                    }
                }
            }
            let passed = entries.iter().all(Entry::passed);
            let summary: Vec<String> = entries.iter().map(Entry::line).collect();
            let doc = json!({ "provenance": prov, "passed": passed, "reports": entries });
            emit(output, &doc, &summary)?;
            Ok(passed)
        }
        Plan::Sample { model, field, width, height, scheme, seed } => {
            let e = match (model, &scheme) {
                (Model::S6v, _) => sample_s6v(width, height, &field, seed)?,
                (Model::Cs6v, _) => sample_cs6v(width, height, &field, seed)?,
                (_, Some((scheme, blocks))) => sample_colored_cs6v(*blocks, scheme, &field, seed)?,
                _ => unreachable!("plan validated the model"),
            };
            let prov_text = prov.to_string();
            if let Some(path) = &output.out {
                write(path, &export::to_binary(&e, Some(&prov_text)))?;
            }
            if let Some(path) = &output.json {
                let mut text = serde_json::to_string_pretty(&export::to_json(&e, Some(prov.clone()))).expect("serializable ensemble");
                text.push('\n');
                write(path, text.as_bytes())?;
            }
            if let Some(path) = &output.svg {
                let svg = render_svg(&e, &SvgStyle::default());
                write(path, format!("<!-- {} -->\n{svg}", prov_text.replace("--", "- -")).as_bytes())?;
            }
            let corner = match model {
                Model::S6v => e.h_at(width, height)?,
                _ => e.parity_projection().H_at(width, height)?,
            };
            println!("sampled {} on {width}x{height} with {} colors, corner height {corner}", model_name(model), e.n_colors());
            Ok(true)
        }
        Plan::Converge { field, direction, sizes, replicas, seed, tolerance } => {
            let report = convergence_experiment(direction, &field, &sizes, replicas, seed)?;
            finish_convergence(config, prov, report, tolerance, Vec::new())
        }
        Plan::Hammersley { p, direction, sizes, replicas, seed, exact_max, tolerance } => {
            let mut exact = Vec::new();
            for w in 1..=exact_max {
                for h in 1..=exact_max {
                    exact.push(Entry::from_result(format!("hammersley equivalence {w}x{h} p={p}"), verify_hammersley_equivalence(w, h, p)));
                }
            }
            let report = hammersley_experiment(direction, p, &sizes, replicas, seed)?;
            finish_convergence(config, prov, report, tolerance, exact)
        }
        Plan::ExportGolden => {
            let table = render_golden_table(&l2_golden_table());
            match &output.out {
                Some(path) => {
                    write(path, format!("# {prov}\n{table}").as_bytes())?;
                    println!("wrote {} configurations", table.lines().count());
                }
                None => print!("{table}"),
            }
            Ok(true)
        }
    }
}

fn finish_convergence(
    config: &RunConfig,
    prov: Value,
    report: ConvergenceReport,
    tolerance: Option<f64>,
    mut checks: Vec<Entry>,
) -> s6v_core::Result<bool> {
    checks.extend(tolerance_entry(&report, tolerance));
    let passed = checks.iter().all(Entry::passed);
    if let Some(path) = &config.output.csv {
        write(path, csv_with_header(config, &report.to_csv()).as_bytes())?;
    }
    let mut summary: Vec<String> = report.render_summary().lines().map(str::to_owned).collect();
    summary.extend(checks.iter().map(Entry::line));
    let doc = json!({ "provenance": prov, "passed": passed, "checks": checks, "report": report });
    emit(&config.output, &doc, &summary)?;
    Ok(passed)
}
