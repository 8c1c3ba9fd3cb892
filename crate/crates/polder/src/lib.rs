//! Dispersion interactions between two model atoms, with excited reference
//! states handled exactly.
//!
//! The interaction energy is assembled from a frequency integral along the
//! positive imaginary axis plus closed-form residue terms, one per group of
//! degenerate downward transitions. The residue terms oscillate in the
//! separation and carry an induced width; the library exposes each piece
//! separately, their short- and long-range asymptotics, and independent
//! brute-force cross-checks.
//!
//! # Example
//!
//! ```
//! use polder::{total_shift, AtomLevel, AtomModel, DipoleElement, PairSystem, UnitsSystem};
//!
//! # fn main() -> polder::Result<()> {
//! let atom = AtomModel::new(
//!     vec![
//!         AtomLevel { label: "g".into(), energy: 0.0 },
//!         AtomLevel { label: "e".into(), energy: 0.5 },
//!     ],
//!     vec![DipoleElement { from: "g".into(), to: "e".into(), d: [0.0, 0.0, 1.0] }],
//! )?;
//! let pair = PairSystem::new(
//!     atom.clone(), atom, "g", "g",
//!     false, // distinguishable atoms: no mixing channel
//!     UnitsSystem::hartree(),
//! )?;
//! let shift = total_shift(&pair, 20.0)?;
//! assert!(shift.total_plus < 0.0); // the dispersion interaction attracts
//! # Ok(())
//! # }
//! ```

#![forbid(unsafe_code)]
// Tensor algebra on fixed 3x3 arrays reads clearest with explicit (i, k)
// indices; quadrature tables keep their full published digits; and guards
// written as `!(x > 0.0)` deliberately catch NaN along with the sign.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

/// Complex arithmetic used throughout the public API, re-exported so
/// downstream crates stay on the same version.
pub use num_complex;

pub mod checks;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod model;
pub mod oracle;
pub mod polarizability;
pub mod quadrature;
pub mod shift;

pub use error::{Error, Result};
pub use model::{AtomLevel, AtomModel, DipoleElement, PairSystem, UnitsSystem};
pub use shift::{
    total_direct, total_shift, total_shift_tuned, DirectShift, QuadratureTuning, ShiftBreakdown,
};
