//! The `regimes` verb: one JSON report on how the interaction curve behaves
//! across distance — the near-zone dispersion sum, the retarded-tail
//! coefficient, the oscillatory pole envelopes, and where the envelope
//! overtakes the monotone tail.

use std::fs;
use std::path::Path;

use serde::Serialize;

use polder::shift::{crossover_report, Side};

use crate::config::{self, LoadedConfig, UnitsBlock};
use crate::{engine_failure, Failure};

#[derive(Serialize)]
struct EnvelopeMeta {
    state_label: String,
    side: &'static str,
    amplitude: f64,
    wavenumber: f64,
}

#[derive(Serialize)]
struct RegimesMeta<'a> {
    version: &'a str,
    config_hash: String,
    units: UnitsBlock,
    c6_tensor_sum: f64,
    c7_coefficient: f64,
    pole_envelopes: Vec<EnvelopeMeta>,
    crossover_radius: Option<f64>,
    ratio_samples: Vec<(f64, f64)>,
    ratio_loglog_slope: Option<f64>,
}

pub fn run(loaded: &LoadedConfig, out_dir: &Path) -> Result<(), Failure> {
    let grid = loaded
        .file
        .grid
        .as_ref()
        .map(config::build_grid)
        .transpose()?;
    let report = crossover_report(&loaded.pair, grid.as_deref()).map_err(engine_failure)?;

    let meta = RegimesMeta {
        version: env!("CARGO_PKG_VERSION"),
        config_hash: format!("fnv1a64:{:016x}", config::fnv1a64(loaded.raw.as_bytes())),
        units: UnitsBlock::from_units(&loaded.pair.units),
        c6_tensor_sum: report.c6_tensor_sum,
        c7_coefficient: report.c7_coefficient,
        pole_envelopes: report
            .pole_envelopes
            .iter()
            .map(|e| EnvelopeMeta {
                state_label: e.state_label.clone(),
                side: match e.side {
                    Side::A => "A",
                    Side::B => "B",
                },
                amplitude: e.amplitude,
                wavenumber: e.wavenumber,
            })
            .collect(),
        crossover_radius: report.crossover_radius,
        ratio_samples: report.ratio_samples.clone(),
        ratio_loglog_slope: report.ratio_loglog_slope,
    };

    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", out_dir.display())))?;
    let json_name = loaded
        .file
        .output
        .as_ref()
        .and_then(|o| o.json.as_deref())
        .unwrap_or("regimes.json");
    let json_path = out_dir.join(json_name);
    let body = serde_json::to_string_pretty(&meta)
        .map_err(|e| Failure::Input(format!("cannot serialize report: {e}")))?;
    fs::write(&json_path, body + "\n")
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", json_path.display())))?;

    match report.crossover_radius {
        Some(rc) => println!(
            "wrote {}: C6 sum = {:.6e}, C7 = {:.6e}, envelope crossover at R = {:.6e}",
            json_path.display(),
            report.c6_tensor_sum,
            report.c7_coefficient,
            rc
        ),
        None => println!(
            "wrote {}: C6 sum = {:.6e}, C7 = {:.6e}, no envelope crossover",
            json_path.display(),
            report.c6_tensor_sum,
            report.c7_coefficient
        ),
    }
    Ok(())
}
