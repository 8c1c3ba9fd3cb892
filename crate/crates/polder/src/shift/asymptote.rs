//! Closed-form limiting behavior of each term: the near-zone dispersion
//! forms and the far-zone retarded forms, selected by term, channel, and
//! range. Selectors that have no closed form are rejected rather than
//! approximated.

use super::pole::{direct_residue_parts, lower_group_of, mixing_residue_parts};
use super::{check_separation, triple_complex, triple_real};
use crate::error::{Error, Result};
use crate::geometry::outer;
use crate::model::PairSystem;
use crate::polarizability::{
    imag_axis_from_transitions, mixed_from_transitions, mixed_transitions, Anchor,
};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which term of the decomposition an asymptotic form describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    /// The rotated frequency integral.
    Wick,
    /// The real part of the residue terms.
    Pole,
    /// The induced width carried by the residue terms.
    Width,
}

/// Which exchange channel the form describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Direct,
    Mixing,
}

/// Which end of the separation range the form expands around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeKind {
    /// Separations small against every transition wavelength.
    Short,
    /// Separations large against every transition wavelength.
    Long,
}

/// `1/R^7` coefficient of the far-zone direct Wick term: the damping
/// confines the integral to frequencies where both responses are static,
/// leaving moments of the bare propagator polynomial.
pub(crate) fn c7_direct(pair: &PairSystem) -> Result<f64> {
    let trans_a = pair.atom_a.transitions(&pair.reference_a)?;
    let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
    let ma = imag_axis_from_transitions(&trans_a, 0.0);
    let mb = imag_axis_from_transitions(&trans_b, 0.0);
    let (taa, tcross, tbb) = triple_real(&ma, &mb);
    Ok(pair.units.c / (16.0 * PI) * (6.0 * taa + 5.0 * tcross + 10.0 * tbb))
}

/// Far-zone `1/R^7` coefficient of the mixing Wick term, built from the
/// static anchored tensors.
fn c7_mixing(pair: &PairSystem) -> Result<f64> {
    if !pair.identical {
        return Err(Error::NotIdentical);
    }
    let mt = mixed_transitions(&pair.atom_a, &pair.reference_a, &pair.reference_b)?;
    let zero = Complex64::new(0.0, 0.0);
    let ma = mixed_from_transitions(&mt, Anchor::SideA, zero)?;
    let mb = mixed_from_transitions(&mt, Anchor::SideB, zero)?;
    let t = triple_complex(&ma, &mb);
    let sum = 6.0 * t.aa + 5.0 * t.cross + 10.0 * t.bb;
    debug_assert!(sum.im.abs() <= 1e-10 * sum.re.abs().max(1e-300));
    Ok(pair.units.c / (16.0 * PI) * sum.re)
}

/// Near-zone share of the direct Wick term carried by the downward group
/// containing `m_label`: the group enters the dispersion sum with the sign
/// of its transition energy, opposite to the upward states.
fn wick_short_share(pair: &PairSystem, m_label: &str, r: f64) -> Result<f64> {
    let g = lower_group_of(pair, m_label)?;
    let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
    let em = g.energy;
    let mut sum = 0.0;
    for t in &trans_b {
        let dyad_q = outer(t.dipole, t.dipole);
        let (_, _, s_bb) = triple_real(&g.dyadic, &dyad_q);
        sum += s_bb * em.signum() * t.energy.signum() / (em.abs() + t.energy.abs());
    }
    Ok(-sum / r.powi(6))
}

/// The dispersion coefficient of the near-zone direct shift: the total
/// shift tends to `-C6 / R^6` with
/// `C6 = sum_vq f(beta, beta; dyad_v, dyad_q) / (E_v + E_q)` over all
/// transitions of both atoms, signed energies included. An exact zero of a
/// denominator is resonant energy transfer and is reported as an error.
pub fn vdw_limit(pair: &PairSystem) -> Result<f64> {
    let trans_a = pair.atom_a.transitions(&pair.reference_a)?;
    let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
    let mut c6 = 0.0;
    for ta in &trans_a {
        let dyad_a = outer(ta.dipole, ta.dipole);
        for tb in &trans_b {
            let denom = ta.energy + tb.energy;
            if denom == 0.0 {
                let (lower, other) = if ta.energy < 0.0 {
                    (ta.label.clone(), tb.label.clone())
                } else {
                    (tb.label.clone(), ta.label.clone())
                };
                return Err(Error::Resonance { lower, other });
            }
            let dyad_b = outer(tb.dipole, tb.dipole);
            let (_, _, s_bb) = triple_real(&dyad_a, &dyad_b);
            c6 += s_bb / denom;
        }
    }
    Ok(c6)
}

/// Closed-form limit of one term of the decomposition at separation `r`.
///
/// `m_label` names a downward state of atom A and is required by every
/// selector that expands around a single pole; the two far-zone Wick forms
/// take no label and reject one. Two selectors have no closed form and are
/// rejected: the near-zone mixing Wick share and the near-zone mixing pole
/// (the latter's limit is absorbed into the near-zone dispersion sum).
pub fn asymptotic_shift(
    pair: &PairSystem,
    m_label: Option<&str>,
    term: TermKind,
    channel: Channel,
    range: RangeKind,
    r: f64,
) -> Result<f64> {
    check_separation(r)?;
    use Channel::{Direct, Mixing};
    use RangeKind::{Long, Short};
    use TermKind::{Pole, Wick, Width};

    if matches!(
        (term, channel, range),
        (Wick, Mixing, Short) | (Pole, Mixing, Short)
    ) {
        return Err(Error::InvalidSelector(format!(
            "{term:?}/{channel:?}/{range:?} has no closed form"
        )));
    }
    let takes_label = !matches!((term, channel, range), (Wick, _, Long));
    let label = match (takes_label, m_label) {
        (true, Some(l)) => Some(l),
        (true, None) => {
            return Err(Error::InvalidSelector(format!(
                "{term:?}/{channel:?}/{range:?} requires a downward-state label"
            )))
        }
        (false, None) => None,
        (false, Some(_)) => {
            return Err(Error::InvalidSelector(format!(
                "{term:?}/{channel:?}/{range:?} takes no state label"
            )))
        }
    };

    match (term, channel, range) {
        (Wick, Direct, Long) => Ok(-c7_direct(pair)? / r.powi(7)),
        (Wick, Mixing, Long) => Ok(-c7_mixing(pair)? / r.powi(7)),
        (Wick, Direct, Short) => wick_short_share(pair, label.unwrap(), r),
        _ => {
            let (energy, t) = match channel {
                Direct => direct_residue_parts(pair, label.unwrap())?,
                Mixing => mixing_residue_parts(pair, label.unwrap())?,
            };
            let x = energy * r / pair.units.c;
            match (term, range) {
                (Pole, Long) => {
                    let k4 = (energy / pair.units.c).powi(4);
                    Ok(-k4 * t.aa.re * (2.0 * x).cos() / (r * r))
                }
                (Pole, Short) => Ok(-t.bb.re / r.powi(6)),
                (Width, Long) => {
                    let k4 = (energy / pair.units.c).powi(4);
                    Ok(-2.0 * k4 * t.aa.re * (2.0 * x).sin() / (r * r))
                }
                (Width, Short) => {
                    let x3 = x * x * x;
                    Ok(-2.0 * x3 * (2.0 / 3.0 * t.bb.re - t.cross.re) / r.powi(6))
                }
                (Wick, _) => unreachable!("all Wick selectors handled above"),
            }
        }
    }
}


#[cfg(test)]
mod mixing_far_zone_tests {
    use super::*;
    use crate::fixtures::mixing_pair;
    use crate::shift::mixing_wick;

    #[test]
    fn far_zone_mixing_wick_coefficient_matches_the_full_term() {
        let pair = mixing_pair();
        let r = 500.0 * pair.units.c;
        let closed = asymptotic_shift(
            &pair,
            None,
            TermKind::Wick,
            Channel::Mixing,
            RangeKind::Long,
            r,
        )
        .unwrap();
        let full = mixing_wick(&pair, r).unwrap();
        assert!(
            ((full - closed) / closed).abs() < 1e-3,
            "full {full} vs closed {closed}"
        );
    }
}
