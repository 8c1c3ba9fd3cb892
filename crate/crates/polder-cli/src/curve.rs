//! The `curve` verb: sweep the shift decomposition over a distance grid,
//! one CSV row per grid point, plus a JSON metadata sidecar. Rows are
//! computed concurrently but emitted in grid order, and every value is
//! printed with 17 significant digits, so a fixed configuration yields
//! byte-identical output regardless of thread count.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use polder::shift::PoleContribution;
use polder::total_shift_tuned;

use crate::config::{self, Channels, LoadedConfig, UnitsBlock};
use crate::{engine_failure, Failure};

/// One CSV row; `None` prints as the explicit null marker.
struct Row {
    r: f64,
    wick_dir: Option<f64>,
    pole_real_dir: Option<f64>,
    width_dir: Option<f64>,
    wick_mix: Option<f64>,
    pole_real_mix: Option<f64>,
    width_mix: Option<f64>,
    total_plus: f64,
    total_minus: f64,
    width_total_plus: f64,
}

const COLUMNS: [&str; 10] = [
    "R",
    "wick_dir",
    "pole_real_dir",
    "width_dir",
    "wick_mix",
    "pole_real_mix",
    "width_mix",
    "total_plus",
    "total_minus",
    "width_total_plus",
];

const NULL_MARKER: &str = "NA";

fn sum_p(poles: &[PoleContribution]) -> f64 {
    poles.iter().map(|p| p.p).sum()
}

fn sum_gamma(poles: &[PoleContribution]) -> f64 {
    poles.iter().map(|p| p.gamma).sum()
}

fn compute_row(loaded: &LoadedConfig, channels: Channels, r: f64) -> Result<Row, Failure> {
    let b = total_shift_tuned(&loaded.pair, r, &loaded.tuning).map_err(engine_failure)?;
    let direct_total = b.wick_dir + sum_p(&b.poles_dir);
    let direct_width = sum_gamma(&b.poles_dir);
    let mix = b
        .wick_mix
        .zip(b.poles_mix.as_deref())
        .map(|(w, ps)| (w, sum_p(ps), sum_gamma(ps)));
    let emit_direct = channels.direct;
    let emit_mixing = channels.mixing && mix.is_some();
    let (total_plus, total_minus, width_total_plus) = match (emit_direct, emit_mixing) {
        (true, true) | (false, false) => (b.total_plus, b.total_minus, b.width_total_plus),
        (true, false) => (direct_total, direct_total, direct_width),
        (false, true) => {
            let (w, p, g) = mix.expect("mixing emitted only when present");
            (w + p, -(w + p), g)
        }
    };
    Ok(Row {
        r,
        wick_dir: emit_direct.then_some(b.wick_dir),
        pole_real_dir: emit_direct.then_some(sum_p(&b.poles_dir)),
        width_dir: emit_direct.then_some(direct_width),
        wick_mix: mix.filter(|_| emit_mixing).map(|(w, _, _)| w),
        pole_real_mix: mix.filter(|_| emit_mixing).map(|(_, p, _)| p),
        width_mix: mix.filter(|_| emit_mixing).map(|(_, _, g)| g),
        total_plus,
        total_minus,
        width_total_plus,
    })
}

fn cell(v: Option<f64>) -> String {
    match v {
        // + 0.0 folds the empty-channel sums' negative zero into "0.0…e0".
        Some(x) => format!("{:.16e}", x + 0.0),
        None => NULL_MARKER.to_string(),
    }
}

fn render_csv(rows: &[Row]) -> String {
    let mut out = String::new();
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for row in rows {
        let cells = [
            cell(Some(row.r)),
            cell(row.wick_dir),
            cell(row.pole_real_dir),
            cell(row.width_dir),
            cell(row.wick_mix),
            cell(row.pole_real_mix),
            cell(row.width_mix),
            cell(Some(row.total_plus)),
            cell(Some(row.total_minus)),
            cell(Some(row.width_total_plus)),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct GridMeta {
    min: f64,
    max: f64,
    points: usize,
    spacing: String,
}

#[derive(Serialize)]
struct CurveMeta<'a> {
    version: &'a str,
    config_hash: String,
    units: UnitsBlock,
    grid: GridMeta,
    channels: Vec<&'a str>,
    columns: [&'a str; 10],
    rows: usize,
    csv: &'a str,
}

pub fn run(loaded: &LoadedConfig, out_dir: &Path, threads: usize) -> Result<(), Failure> {
    let grid_section = loaded
        .file
        .grid
        .as_ref()
        .ok_or_else(|| Failure::Input("the curve verb requires a [grid] section".into()))?;
    let rs = config::build_grid(grid_section)?;
    let channels = config::resolve_channels(loaded.file.output.as_ref(), &loaded.pair)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Input(format!("cannot build thread pool: {e}")))?;
    let rows: Vec<Row> = pool.install(|| {
        rs.par_iter()
            .map(|&r| compute_row(loaded, channels, r))
            .collect::<Result<Vec<_>, _>>()
    })?;

    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", out_dir.display())))?;
    let output = loaded.file.output.as_ref();
    let csv_name = output.and_then(|o| o.csv.as_deref()).unwrap_or("curve.csv");
    let json_name = output
        .and_then(|o| o.json.as_deref())
        .unwrap_or("curve.json");

    let csv_path = out_dir.join(csv_name);
    fs::write(&csv_path, render_csv(&rows))
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", csv_path.display())))?;

    let mut channel_names = Vec::new();
    if channels.direct {
        channel_names.push("direct");
    }
    if channels.mixing {
        channel_names.push("mixing");
    }
    let meta = CurveMeta {
        version: env!("CARGO_PKG_VERSION"),
        config_hash: format!("fnv1a64:{:016x}", config::fnv1a64(loaded.raw.as_bytes())),
        units: UnitsBlock::from_units(&loaded.pair.units),
        grid: GridMeta {
            min: grid_section.min,
            max: grid_section.max,
            points: grid_section.points,
            spacing: grid_section.spacing.clone(),
        },
        channels: channel_names,
        columns: COLUMNS,
        rows: rows.len(),
        csv: csv_name,
    };
    let json_path = out_dir.join(json_name);
    let body = serde_json::to_string_pretty(&meta)
        .map_err(|e| Failure::Input(format!("cannot serialize metadata: {e}")))?;
    fs::write(&json_path, body + "\n")
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", json_path.display())))?;

    println!(
        "wrote {} ({} rows) and {}",
        csv_path.display(),
        rows.len(),
        json_path.display()
    );
    Ok(())
}
