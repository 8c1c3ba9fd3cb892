//! The interaction-energy engine: frequency-integral (Wick) terms, residue
//! (pole) terms with their induced widths, totals for both exchange
//! symmetries, asymptotic forms, and the regime report.
//!
//! Geometry convention: the interatomic axis is +z, so the transverse and
//! longitudinal dyadics are `diag(1,1,0)` and `diag(1,1,-2)`. Everything is
//! in Hartree atomic units; only scalar separations enter the public API.

pub mod asymptote;
pub mod pole;
pub mod regime;
pub mod wick;

pub use asymptote::{asymptotic_shift, vdw_limit, Channel, RangeKind, TermKind};
pub use pole::{mixing_pole, pole_term_direct, PoleContribution, Side};
pub use regime::{crossover_report, PoleEnvelope, RegimeReport};
pub use wick::{mixing_wick, wick_term_direct, wick_term_direct_share, wick_term_sstate};

use crate::error::{Error, Result};
use crate::geometry::{CMat3, Mat3};
use crate::model::PairSystem;
use crate::quadrature::QuadratureSpec;
use num_complex::Complex64;

/// Transitions closer in energy than this are treated as one degenerate
/// group when assembling residue terms.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Transverse dyadic for the +z interatomic axis.
pub(crate) const ALPHA_Z: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]];
/// Longitudinal dyadic for the +z interatomic axis.
pub(crate) const BETA_Z: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -2.0]];

/// The three dyadic contractions every energy formula is assembled from:
/// `aa = f(alpha, alpha; M, N)`, `cross = f(alpha, beta; M, N) + f(beta,
/// alpha; M, N)`, `bb = f(beta, beta; M, N)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Triple {
    pub aa: Complex64,
    pub cross: Complex64,
    pub bb: Complex64,
}

pub(crate) fn triple_complex(m: &CMat3, n: &CMat3) -> Triple {
    use crate::geometry::quad_contraction;
    Triple {
        aa: quad_contraction(&ALPHA_Z, &ALPHA_Z, m, n),
        cross: quad_contraction(&ALPHA_Z, &BETA_Z, m, n)
            + quad_contraction(&BETA_Z, &ALPHA_Z, m, n),
        bb: quad_contraction(&BETA_Z, &BETA_Z, m, n),
    }
}

/// Real fast path of [`triple_complex`] for the direct channel, where both
/// tensors are real on the imaginary frequency axis.
pub(crate) fn triple_real(m: &Mat3, n: &Mat3) -> (f64, f64, f64) {
    fn quad(x: &Mat3, y: &Mat3, m: &Mat3, n: &Mat3) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if x[i][j] == 0.0 {
                    continue;
                }
                for k in 0..3 {
                    for l in 0..3 {
                        acc += x[i][j] * y[k][l] * m[i][k] * n[j][l];
                    }
                }
            }
        }
        acc
    }
    let aa = quad(&ALPHA_Z, &ALPHA_Z, m, n);
    let cross = quad(&ALPHA_Z, &BETA_Z, m, n) + quad(&BETA_Z, &ALPHA_Z, m, n);
    let bb = quad(&BETA_Z, &BETA_Z, m, n);
    (aa, cross, bb)
}

pub(crate) fn check_separation(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "separation must be finite and positive, got {r}"
        )));
    }
    Ok(())
}

/// Integration profile for the engine: pure relative tolerance. The Wick
/// integral at retarded separations is ~1e-35 in magnitude, so any fixed
/// absolute floor would declare instant convergence; the roundoff floor
/// inside the driver provides the safety net instead.
pub(crate) fn engine_spec(r: f64, c: f64) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-10,
        abs_tol: f64::MIN_POSITIVE,
        max_subdivisions: 200,
        decay_scale: c / (2.0 * r),
    }
}

/// The direct-channel shift at one separation: the frequency-integral term
/// plus one residue term per degenerate downward group of either atom.
#[derive(Debug, Clone)]
pub struct DirectShift {
    pub wick: f64,
    pub poles: Vec<PoleContribution>,
    /// `wick + sum of pole real parts`. Widths are reported separately and
    /// never folded into the total.
    pub total: f64,
    /// Summed induced width over all pole terms.
    pub width: f64,
}

/// Direct-channel shift: Wick term plus all pole terms (downward groups of
/// atom A and of atom B).
pub fn total_direct(pair: &PairSystem, r: f64) -> Result<DirectShift> {
    check_separation(r)?;
    let wick = wick_term_direct(pair, r)?;
    let mut poles = pole::direct_pole_contributions(pair, Side::A, r)?;
    poles.extend(pole::direct_pole_contributions(pair, Side::B, r)?);
    let total = wick + poles.iter().map(|p| p.p).sum::<f64>();
    let width = poles.iter().map(|p| p.gamma).sum::<f64>();
    Ok(DirectShift {
        wick,
        poles,
        total,
        width,
    })
}

/// Optional loosening or tightening of the frequency-integral profile for
/// sweep workloads; `None` fields keep the engine defaults. The residue
/// terms are closed-form and unaffected.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QuadratureTuning {
    /// Relative tolerance, in `(0, 1e-2]`.
    pub rel_tol: Option<f64>,
    /// Adaptive subdivision budget, at least 10.
    pub max_subdivisions: Option<u32>,
}

impl QuadratureTuning {
    fn applied_to(&self, mut spec: QuadratureSpec) -> Result<QuadratureSpec> {
        if let Some(rt) = self.rel_tol {
            if !rt.is_finite() || rt <= 0.0 || rt > 1e-2 {
                return Err(Error::InvalidInput(format!(
                    "relative tolerance must lie in (0, 1e-2], got {rt}"
                )));
            }
            spec.rel_tol = rt;
        }
        if let Some(ms) = self.max_subdivisions {
            if ms < 10 {
                return Err(Error::InvalidInput(format!(
                    "subdivision budget must be at least 10, got {ms}"
                )));
            }
            spec.max_subdivisions = ms;
        }
        Ok(spec)
    }
}

/// Full decomposition of the shift at one separation, for both exchange
/// symmetries of an identical pair. For non-identical pairs the mixing
/// entries are `None` and the two totals coincide.
#[derive(Debug, Clone)]
pub struct ShiftBreakdown {
    pub r: f64,
    pub wick_dir: f64,
    pub poles_dir: Vec<PoleContribution>,
    pub wick_mix: Option<f64>,
    pub poles_mix: Option<Vec<PoleContribution>>,
    /// direct + mixing (symmetric combination).
    pub total_plus: f64,
    /// direct - mixing (antisymmetric combination).
    pub total_minus: f64,
    pub width_total_plus: f64,
    pub width_total_minus: f64,
}

/// Assemble the complete shift decomposition at separation `r`.
pub fn total_shift(pair: &PairSystem, r: f64) -> Result<ShiftBreakdown> {
    total_shift_tuned(pair, r, &QuadratureTuning::default())
}

/// [`total_shift`] with the frequency-integral profile adjusted by `tuning`.
pub fn total_shift_tuned(
    pair: &PairSystem,
    r: f64,
    tuning: &QuadratureTuning,
) -> Result<ShiftBreakdown> {
    check_separation(r)?;
    let spec = tuning.applied_to(engine_spec(r, pair.units.c))?;
    let wick = wick::wick_term_direct_spec(pair, r, Some(&spec))?;
    let mut poles = pole::direct_pole_contributions(pair, Side::A, r)?;
    poles.extend(pole::direct_pole_contributions(pair, Side::B, r)?);
    let direct = DirectShift {
        wick,
        total: wick + poles.iter().map(|p| p.p).sum::<f64>(),
        width: poles.iter().map(|p| p.gamma).sum::<f64>(),
        poles,
    };
    let (wick_mix, poles_mix) = if pair.identical {
        let w = wick::mixing_wick_spec(pair, r, Some(&spec))?;
        let mut ps = pole::mixing_pole_contributions(pair, Side::A, r)?;
        ps.extend(pole::mixing_pole_contributions(pair, Side::B, r)?);
        (Some(w), Some(ps))
    } else {
        (None, None)
    };
    let mix_total = wick_mix.map(|w| {
        w + poles_mix
            .as_ref()
            .map(|ps| ps.iter().map(|p| p.p).sum::<f64>())
            .unwrap_or(0.0)
    });
    let mix_width = poles_mix
        .as_ref()
        .map(|ps| ps.iter().map(|p| p.gamma).sum::<f64>());
    let (total_plus, total_minus) = match mix_total {
        Some(m) => (direct.total + m, direct.total - m),
        None => (direct.total, direct.total),
    };
    let (width_total_plus, width_total_minus) = match mix_width {
        Some(m) => (direct.width + m, direct.width - m),
        None => (direct.width, direct.width),
    };
    Ok(ShiftBreakdown {
        r,
        wick_dir: direct.wick,
        poles_dir: direct.poles,
        wick_mix,
        poles_mix,
        total_plus,
        total_minus,
        width_total_plus,
        width_total_minus,
    })
}
