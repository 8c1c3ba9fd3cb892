//! The Wick-rotated frequency integral: the smooth, monotonically assembled
//! part of the shift, evaluated along the positive imaginary axis where the
//! propagator decays exponentially.

use super::{check_separation, engine_spec, triple_complex, triple_real};
use crate::error::{Error, Result};
use crate::model::{PairSystem, Transition};
use crate::polarizability::{
    imag_axis_from_transitions, isotropy_deviation, mixed_from_transitions, mixed_transitions,
    Anchor, MixedTransition, ANISOTROPY_TOL,
};
use crate::quadrature::{integrate_halfline, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Integrand polynomial weights, pre-multiplied by `omega^4` so the
/// `omega -> 0` end is regular: the `1/omega` factors of the propagator
/// never appear explicitly.
///
/// `P(w) = w^4 T_aa + (w^3 k + w^2 k^2) T_cross + (w^2 k^2 + 2 w k^3 + k^4) T_bb`
/// with `k = c / R`.
fn polynomial_weights(w: f64, k: f64) -> (f64, f64, f64) {
    let w2 = w * w;
    (
        w2 * w2,
        w2 * w * k + w2 * k * k,
        w2 * k * k + 2.0 * w * k * k * k + k * k * k * k,
    )
}

pub(crate) fn wick_direct_from(
    trans_a: &[Transition],
    trans_b: &[Transition],
    r: f64,
    c: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let k = c / r;
    let integrand = |w: f64| -> Complex64 {
        let ma = imag_axis_from_transitions(trans_a, w);
        let mb = imag_axis_from_transitions(trans_b, w);
        let (taa, tcross, tbb) = triple_real(&ma, &mb);
        let (paa, pcross, pbb) = polynomial_weights(w, k);
        let damp = (-2.0 * w * r / c).exp();
        Complex64::new(damp * (paa * taa + pcross * tcross + pbb * tbb), 0.0)
    };
    let est = integrate_halfline(integrand, spec)?;
    Ok(-est.value.re / (2.0 * PI * c.powi(4) * r * r))
}

/// Direct-channel Wick term at separation `r`.
pub fn wick_term_direct(pair: &PairSystem, r: f64) -> Result<f64> {
    wick_term_direct_spec(pair, r, None)
}

pub(crate) fn wick_term_direct_spec(
    pair: &PairSystem,
    r: f64,
    spec: Option<&QuadratureSpec>,
) -> Result<f64> {
    check_separation(r)?;
    let trans_a = pair.atom_a.transitions(&pair.reference_a)?;
    let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
    let default_spec = engine_spec(r, pair.units.c);
    wick_direct_from(
        &trans_a,
        &trans_b,
        r,
        pair.units.c,
        spec.unwrap_or(&default_spec),
    )
}

/// The share of the direct Wick term carried by one downward group of atom
/// A: the same integral with atom A's response restricted to the degenerate
/// group containing `m_label`.
///
/// At close range this share tends to `+ (1/R^6) sum_q f(beta, beta;
/// dyad_m, dyad_q) / (|E_m| + E_q)`: the group enters the dispersion sum
/// with its sign flipped relative to a naive sum over states.
pub fn wick_term_direct_share(pair: &PairSystem, m_label: &str, r: f64) -> Result<f64> {
    check_separation(r)?;
    let group = super::pole::lower_group_of(pair, m_label)?;
    let trans_a: Vec<Transition> = pair
        .atom_a
        .transitions(&pair.reference_a)?
        .into_iter()
        .filter(|t| group.labels.contains(&t.label))
        .collect();
    let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
    wick_direct_from(
        &trans_a,
        &trans_b,
        r,
        pair.units.c,
        &engine_spec(r, pair.units.c),
    )
}

/// Direct Wick term specialized to isotropic references, written with the
/// scalar polarizabilities:
///
/// `W = -(1/(pi c^4 R^2)) Int_0^inf dw e^{-2wR/c} w^4
///        (1 + 2u + 5u^2 + 6u^3 + 3u^4) alpha_A(iw) alpha_B(iw)`,
///
/// `u = c/(wR)`, again pre-multiplied so `w -> 0` is regular. Requires both
/// references isotropic; agrees with [`wick_term_direct`] to the
/// integration tolerance.
pub fn wick_term_sstate(pair: &PairSystem, r: f64) -> Result<f64> {
    check_separation(r)?;
    for (atom, reference) in [
        (&pair.atom_a, &pair.reference_a),
        (&pair.atom_b, &pair.reference_b),
    ] {
        let dev = isotropy_deviation(atom, reference, 0.0)?;
        if dev > ANISOTROPY_TOL {
            return Err(Error::AnisotropicReference { magnitude: dev });
        }
    }
    let c = pair.units.c;
    let k = c / r;
    // (|d|^2 / 3, E) per transition: enough for the scalar response.
    let scal = |trans: &[Transition]| -> Vec<(f64, f64)> {
        trans
            .iter()
            .map(|t| {
                let d2: f64 = t.dipole.iter().map(|x| x * x).sum();
                (d2 / 3.0, t.energy)
            })
            .collect()
    };
    let sa = scal(&pair.atom_a.transitions(&pair.reference_a)?);
    let sb = scal(&pair.atom_b.transitions(&pair.reference_b)?);
    let scalar_alpha = |s: &[(f64, f64)], w: f64| -> f64 {
        s.iter()
            .map(|&(d2t, e)| d2t * 2.0 * e / (e * e + w * w))
            .sum()
    };
    let integrand = |w: f64| -> Complex64 {
        let w2 = w * w;
        // w^4 (1 + 2u + 5u^2 + 6u^3 + 3u^4), u = k/w, multiplied through.
        let poly = w2 * w2
            + 2.0 * w2 * w * k
            + 5.0 * w2 * k * k
            + 6.0 * w * k * k * k
            + 3.0 * k * k * k * k;
        let damp = (-2.0 * w * r / c).exp();
        Complex64::new(
            damp * poly * scalar_alpha(&sa, w) * scalar_alpha(&sb, w),
            0.0,
        )
    };
    let est = integrate_halfline(integrand, &engine_spec(r, c))?;
    Ok(-est.value.re / (PI * c.powi(4) * r * r))
}

pub(crate) fn mixing_wick_from(
    mt: &[MixedTransition],
    r: f64,
    c: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let k = c / r;
    let integrand = |w: f64| -> Complex64 {
        let iw = Complex64::new(0.0, w);
        // On the imaginary axis the anchored tensors cannot hit a pole.
        let ma = mixed_from_transitions(mt, Anchor::SideA, iw).expect("imag-axis evaluation");
        let mb = mixed_from_transitions(mt, Anchor::SideB, iw).expect("imag-axis evaluation");
        let t = triple_complex(&ma, &mb);
        let (paa, pcross, pbb) = polynomial_weights(w, k);
        let damp = (-2.0 * w * r / c).exp();
        damp * (paa * t.aa + pcross * t.cross + pbb * t.bb)
    };
    let est = integrate_halfline(integrand, spec)?;
    // The contraction is real analytically; the imaginary residue is
    // integration noise.
    debug_assert!(
        est.value.im.abs() <= 1e-8 * est.value.re.abs().max(1e-300),
        "mixing integrand imaginary part {} vs real {}",
        est.value.im,
        est.value.re
    );
    Ok(-est.value.re / (2.0 * PI * c.powi(4) * r * r))
}

/// Mixing-channel Wick term of an identical pair at separation `r`.
pub fn mixing_wick(pair: &PairSystem, r: f64) -> Result<f64> {
    mixing_wick_spec(pair, r, None)
}

pub(crate) fn mixing_wick_spec(
    pair: &PairSystem,
    r: f64,
    spec: Option<&QuadratureSpec>,
) -> Result<f64> {
    check_separation(r)?;
    if !pair.identical {
        return Err(Error::NotIdentical);
    }
    let mt = mixed_transitions(&pair.atom_a, &pair.reference_a, &pair.reference_b)?;
    let default_spec = engine_spec(r, pair.units.c);
    mixing_wick_from(&mt, r, pair.units.c, spec.unwrap_or(&default_spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        excited_ground_pair, ground_ground_pair, mixing_pair, three_level_isotropic,
        two_level_isotropic,
    };
    use crate::model::{PairSystem, UnitsSystem};

    fn rel_gap(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    #[test]
    fn ground_pair_recovers_the_dispersion_sum_at_close_range() {
        let pair = ground_ground_pair();
        let r = 0.05;
        let w = wick_term_direct(&pair, r).unwrap();
        assert!(rel_gap(w, -6.0 / r.powi(6)) < 1e-5, "w = {w}");
    }

    #[test]
    fn ground_pair_recovers_the_retarded_tail_at_long_range() {
        let pair = ground_ground_pair();
        let c = pair.units.c;
        let r = 2000.0 * c;
        let w = wick_term_direct(&pair, r).unwrap();
        let tail = -(92.0 * c / PI) / r.powi(7);
        assert!(rel_gap(w, tail) < 1e-3, "w = {w}, tail = {tail}");
    }

    #[test]
    fn scalar_form_matches_the_tensor_form_on_isotropic_pairs() {
        let pair = PairSystem::new(
            three_level_isotropic(),
            two_level_isotropic(),
            "n",
            "g",
            false,
            UnitsSystem::hartree(),
        )
        .unwrap();
        for r in [0.5, 50.0, 5000.0] {
            let a = wick_term_direct(&pair, r).unwrap();
            let b = wick_term_sstate(&pair, r).unwrap();
            assert!(rel_gap(a, b) < 1e-10, "r = {r}: {a} vs {b}");
        }
    }

    #[test]
    fn scalar_form_rejects_anisotropic_references() {
        let pair = excited_ground_pair();
        assert!(matches!(
            wick_term_sstate(&pair, 1.0),
            Err(Error::AnisotropicReference { .. })
        ));
    }

    #[test]
    fn mixing_term_is_symmetric_under_role_exchange() {
        let pair = mixing_pair();
        let a = mixing_wick(&pair, 3.0).unwrap();
        let b = mixing_wick(&pair.swapped(), 3.0).unwrap();
        assert!(rel_gap(a, b) < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn mixing_term_requires_an_identical_pair() {
        let pair = excited_ground_pair();
        assert!(matches!(mixing_wick(&pair, 1.0), Err(Error::NotIdentical)));
    }

    #[test]
    fn lower_group_share_is_repulsive_at_close_range() {
        let pair = excited_ground_pair();
        let r: f64 = 0.1;
        let share = wick_term_direct_share(&pair, "m", r).unwrap();
        assert!(share > 0.0);
        // Closed near-zone form: + sum_q f(beta,beta; dyad_m, dyad_q) /
        // ((E_q - E_m) R^6) = (0.16 + 0.36) / (0.6 R^6).
        let exact = 0.52 / 0.6 / r.powi(6);
        assert!(rel_gap(share, exact) < 1e-6, "share = {share}");
    }
}
