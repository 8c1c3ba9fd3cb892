//! Run configuration: a flat, hand-writable TOML document with sections
//! `[units]`, `[atom.A]`, `[atom.B]`, `[pair]`, `[grid]`, `[output]`, and
//! `[quadrature]`. Level energies are absolute; the engine takes the
//! differences from the reference states itself.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use polder::{AtomLevel, AtomModel, DipoleElement, PairSystem, QuadratureTuning, UnitsSystem};

use crate::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<UnitsSection>,
    pub atom: AtomsSection,
    pub pair: PairSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsSection {
    /// Speed of light in atomic units; defaults to the physical value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomsSection {
    #[serde(rename = "A")]
    pub a: AtomSection,
    /// Omitted for identical pairs: atom B is then a copy of atom A.
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<AtomSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    /// `(label, absolute energy)` rows.
    pub levels: Vec<(String, f64)>,
    /// `(from, to, dx, dy, dz)` rows.
    pub dipoles: Vec<(String, String, f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSection {
    pub reference_a: String,
    pub reference_b: String,
    #[serde(default)]
    pub identical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    /// `"linear"` or `"log"`.
    #[serde(default = "default_spacing")]
    pub spacing: String,
}

fn default_spacing() -> String {
    "log".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// CSV file name (curve verb), relative to the output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    /// JSON file name, relative to the output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
    /// Channels whose columns carry numbers: subset of `direct`, `mixing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subdivisions: Option<u32>,
}

/// Which channel columns carry numbers in the CSV.
#[derive(Debug, Clone, Copy)]
pub struct Channels {
    pub direct: bool,
    pub mixing: bool,
}

/// A parsed, validated configuration with the ready-to-use pair.
pub struct LoadedConfig {
    /// Raw file bytes, hashed into the metadata sidecar.
    pub raw: String,
    pub file: ConfigFile,
    pub pair: PairSystem,
    pub tuning: QuadratureTuning,
}

fn build_atom(section: &AtomSection, which: &str) -> Result<AtomModel, Failure> {
    let levels = section
        .levels
        .iter()
        .map(|(label, energy)| AtomLevel {
            label: label.clone(),
            energy: *energy,
        })
        .collect();
    let dipoles = section
        .dipoles
        .iter()
        .map(|(from, to, dx, dy, dz)| DipoleElement {
            from: from.clone(),
            to: to.clone(),
            d: [*dx, *dy, *dz],
        })
        .collect();
    AtomModel::new(levels, dipoles).map_err(|e| Failure::Input(format!("atom {which}: {e}")))
}

pub fn load(path: &Path) -> Result<LoadedConfig, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: ConfigFile =
        toml::from_str(&raw).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;

    let units = match file.units.as_ref().and_then(|u| u.c) {
        Some(c) => UnitsSystem::with_speed_of_light(c)
            .map_err(|e| Failure::Input(format!("[units]: {e}")))?,
        None => UnitsSystem::hartree(),
    };
    let atom_a = build_atom(&file.atom.a, "A")?;
    let atom_b = match &file.atom.b {
        Some(b) => build_atom(b, "B")?,
        None if file.pair.identical => atom_a.clone(),
        None => {
            return Err(Failure::Input(
                "[atom.B] is required unless the pair is identical".into(),
            ))
        }
    };
    let pair = PairSystem::new(
        atom_a,
        atom_b,
        &file.pair.reference_a,
        &file.pair.reference_b,
        file.pair.identical,
        units,
    )
    .map_err(|e| Failure::Input(format!("[pair]: {e}")))?;

    let tuning = match &file.quadrature {
        Some(q) => {
            if let Some(rt) = q.rel_tol {
                if !rt.is_finite() || rt <= 0.0 || rt > 1e-2 {
                    return Err(Failure::Input(format!(
                        "[quadrature]: rel_tol must lie in (0, 1e-2], got {rt}"
                    )));
                }
            }
            if let Some(ms) = q.max_subdivisions {
                if ms < 10 {
                    return Err(Failure::Input(format!(
                        "[quadrature]: max_subdivisions must be at least 10, got {ms}"
                    )));
                }
            }
            QuadratureTuning {
                rel_tol: q.rel_tol,
                max_subdivisions: q.max_subdivisions,
            }
        }
        None => QuadratureTuning::default(),
    };

    Ok(LoadedConfig {
        raw,
        file,
        pair,
        tuning,
    })
}

/// Materialize the distance grid, validating the section.
pub fn build_grid(g: &GridSection) -> Result<Vec<f64>, Failure> {
    if !g.min.is_finite() || !g.max.is_finite() || g.min <= 0.0 {
        return Err(Failure::Input(format!(
            "[grid]: min must be positive and finite, got min = {}, max = {}",
            g.min, g.max
        )));
    }
    if g.min >= g.max {
        return Err(Failure::Input(format!(
            "[grid]: min must be below max, got min = {}, max = {}",
            g.min, g.max
        )));
    }
    if g.points < 2 {
        return Err(Failure::Input(format!(
            "[grid]: at least 2 points required, got {}",
            g.points
        )));
    }
    let n = g.points;
    let rs = match g.spacing.as_str() {
        "linear" => (0..n)
            .map(|i| g.min + (g.max - g.min) * i as f64 / (n - 1) as f64)
            .collect(),
        "log" => (0..n)
            .map(|i| g.min * (g.max / g.min).powf(i as f64 / (n - 1) as f64))
            .collect(),
        other => {
            return Err(Failure::Input(format!(
                "[grid]: spacing must be \"linear\" or \"log\", got \"{other}\""
            )))
        }
    };
    Ok(rs)
}

/// Channel selection from the `[output]` section, validated against the pair.
pub fn resolve_channels(
    output: Option<&OutputSection>,
    pair: &PairSystem,
) -> Result<Channels, Failure> {
    let names: Vec<String> = output
        .and_then(|o| o.channels.clone())
        .unwrap_or_else(|| vec!["direct".into(), "mixing".into()]);
    if names.is_empty() {
        return Err(Failure::Input(
            "[output]: channels must not be empty".into(),
        ));
    }
    let mut channels = Channels {
        direct: false,
        mixing: false,
    };
    for name in &names {
        match name.as_str() {
            "direct" if channels.direct => {
                return Err(Failure::Input(
                    "[output]: duplicate channel `direct`".into(),
                ))
            }
            "mixing" if channels.mixing => {
                return Err(Failure::Input(
                    "[output]: duplicate channel `mixing`".into(),
                ))
            }
            "direct" => channels.direct = true,
            "mixing" => channels.mixing = true,
            other => {
                return Err(Failure::Input(format!(
                    "[output]: unknown channel \"{other}\" (expected \"direct\" or \"mixing\")"
                )))
            }
        }
    }
    if channels.mixing && !channels.direct && !pair.identical {
        return Err(Failure::Input(
            "[output]: only the mixing channel was requested, but the pair is not identical".into(),
        ));
    }
    Ok(channels)
}

/// 64-bit FNV-1a over the raw configuration bytes: a stable fingerprint for
/// the metadata sidecar.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Units block shared by the JSON sidecars.
#[derive(Debug, Serialize)]
pub struct UnitsBlock {
    pub hbar: f64,
    pub e_charge: f64,
    pub four_pi_eps0: f64,
    pub c: f64,
}

impl UnitsBlock {
    pub fn from_units(u: &UnitsSystem) -> Self {
        UnitsBlock {
            hbar: u.hbar,
            e_charge: u.e_charge,
            four_pi_eps0: u.four_pi_eps0,
            c: u.c,
        }
    }
}
