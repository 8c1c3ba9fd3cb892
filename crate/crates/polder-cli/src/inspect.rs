//! The `inspect` verb: evaluate one atom's polarizability at a chosen real
//! or imaginary frequency and print a JSON report to stdout. This is the
//! only verb that accepts the retarded prescription — a material response
//! is causal, while the shift integrands are built from the time-ordered
//! form.

use polder::num_complex::Complex64;
use polder::polarizability::{
    isotropy_deviation, polarizability_tensor, relative_permittivity, scalar_polarizability,
    static_polarizability, Prescription,
};
use polder::{AtomModel, Error};
use serde::Serialize;

use crate::config::{self, LoadedConfig, UnitsBlock};
use crate::{engine_failure, Failure, PrescriptionArg};

type ComplexPair = [f64; 2];

fn complex_pair(z: Complex64) -> ComplexPair {
    [z.re, z.im]
}

#[derive(Serialize)]
struct InspectReport<'a> {
    version: &'a str,
    config_hash: String,
    units: UnitsBlock,
    atom: &'a str,
    reference: &'a str,
    omega: ComplexPair,
    prescription: &'a str,
    /// 3x3 tensor, each entry `[re, im]`.
    tensor: [[ComplexPair; 3]; 3],
    /// `(1/3) tr alpha(omega)`; null when the reference is anisotropic.
    scalar: Option<ComplexPair>,
    isotropy_deviation: f64,
    static_scalar: f64,
    /// Present only when a gas number density was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_permittivity: Option<ComplexPair>,
}

fn pick_side<'a>(
    loaded: &'a LoadedConfig,
    atom: &str,
) -> Result<(&'a AtomModel, &'a str), Failure> {
    match atom {
        "A" | "a" => Ok((&loaded.pair.atom_a, loaded.pair.reference_a.as_str())),
        "B" | "b" => Ok((&loaded.pair.atom_b, loaded.pair.reference_b.as_str())),
        other => Err(Failure::Input(format!(
            "--atom must be A or B, got \"{other}\""
        ))),
    }
}

pub fn run(
    loaded: &LoadedConfig,
    atom: &str,
    omega: f64,
    imaginary: bool,
    prescription: PrescriptionArg,
    density: Option<f64>,
) -> Result<(), Failure> {
    if !omega.is_finite() {
        return Err(Failure::Input(format!(
            "--omega must be finite, got {omega}"
        )));
    }
    let (model, reference) = pick_side(loaded, atom)?;
    let omega_c = if imaginary {
        Complex64::new(0.0, omega)
    } else {
        Complex64::new(omega, 0.0)
    };
    let (presc, presc_name) = match prescription {
        PrescriptionArg::Feynman => (Prescription::Feynman, "feynman"),
        PrescriptionArg::Retarded => (Prescription::Retarded, "retarded"),
    };

    let tensor = polarizability_tensor(model, reference, omega_c, presc).map_err(engine_failure)?;
    let scalar = match scalar_polarizability(model, reference, omega_c, presc) {
        Ok(v) => Some(complex_pair(v)),
        Err(Error::AnisotropicReference { .. }) => None,
        Err(e) => return Err(engine_failure(e)),
    };
    let deviation = isotropy_deviation(model, reference, 0.0).map_err(engine_failure)?;
    let static_scalar = static_polarizability(model, reference).map_err(engine_failure)?;
    let permittivity = density
        .map(|n| relative_permittivity(model, reference, omega_c, n))
        .transpose()
        .map_err(engine_failure)?
        .map(|p| complex_pair(p.value));

    let mut entries = [[[0.0_f64; 2]; 3]; 3];
    for (i, row) in tensor.entries.iter().enumerate() {
        for (k, &z) in row.iter().enumerate() {
            entries[i][k] = complex_pair(z);
        }
    }

    let report = InspectReport {
        version: env!("CARGO_PKG_VERSION"),
        config_hash: format!("fnv1a64:{:016x}", config::fnv1a64(loaded.raw.as_bytes())),
        units: UnitsBlock::from_units(&loaded.pair.units),
        atom: if matches!(atom, "B" | "b") { "B" } else { "A" },
        reference,
        omega: complex_pair(omega_c),
        prescription: presc_name,
        tensor: entries,
        scalar,
        isotropy_deviation: deviation,
        static_scalar,
        relative_permittivity: permittivity,
    };
    let body = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure::Input(format!("cannot serialize report: {e}")))?;
    println!("{body}");
    Ok(())
}
