//! Dynamic dipole polarizabilities: direct tensors, scalar reductions, and
//! the two-reference anchored tensors that drive the mixing channel.
//!
//! Evaluation is exact in the `eps -> 0` limit. Off the poles the Feynman
//! and retarded prescriptions give the same numbers (the displacements only
//! move where the poles sit), so the prescription is carried as data: it
//! decides pole bookkeeping in the energy engine and the finite-`eps`
//! realization in the cross-check module, not the value computed here.

use crate::error::{Error, Result};
use crate::geometry::{outer, CMat3, Mat3};
use crate::model::{AtomModel, Transition};
use num_complex::Complex64;

/// Pole displacement convention for the response denominators.
///
/// Feynman: `(E - w - i eps)(E + w - i eps)`; retarded:
/// `(E - w - i eps)(E + w + i eps)`. Off the poles the `eps -> 0` values
/// coincide; the distinction matters for which poles the frequency-contour
/// rotation sweeps past (retarded: none) and for finite-`eps` evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prescription {
    Feynman,
    Retarded,
}

/// Which reference state supplies the energy denominators of a
/// two-reference tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    SideA,
    SideB,
}

/// A polarizability tensor evaluated at one complex frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizabilityTensor {
    pub entries: CMat3,
    pub omega: Complex64,
    pub prescription: Prescription,
}

/// Structural isotropy threshold: each degenerate transition group must be
/// a multiple of the identity to this relative accuracy before any scalar
/// reduction is allowed.
pub const ANISOTROPY_TOL: f64 = 1e-10;

/// One virtual state coupled to both reference states of a pair, carrying
/// its transition energies relative to each.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedTransition {
    pub label: String,
    /// `E_v - E_psiA`; never zero.
    pub energy_a: f64,
    /// `E_v - E_psiB`; never zero.
    pub energy_b: f64,
    /// `d(psiA, v)`.
    pub dipole_a: [f64; 3],
    /// `d(v, psiB)`.
    pub dipole_b: [f64; 3],
}

fn check_finite_omega(omega: Complex64) -> Result<()> {
    if !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::InvalidInput("frequency is not finite".into()));
    }
    Ok(())
}

/// Direct tensor from a precomputed transition list:
///
/// `alpha_ik(w) = Sum_v d_i d_k [ 1/(E_v - w) + 1/(E_v + w) ]`.
///
/// Exactly vanishing denominators are reported as labeled pole hits; there
/// is no smoothing, near-pole values are returned as-is.
pub fn tensor_from_transitions(trans: &[Transition], omega: Complex64) -> Result<CMat3> {
    check_finite_omega(omega)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 3]; 3];
    for t in trans {
        let e = Complex64::new(t.energy, 0.0);
        let den_m = e - omega;
        let den_p = e + omega;
        if den_m == zero || den_p == zero {
            return Err(Error::PoleHit {
                label: t.label.clone(),
                omega,
            });
        }
        let weight = 1.0 / den_m + 1.0 / den_p;
        for i in 0..3 {
            for k in 0..3 {
                out[i][k] += t.dipole[i] * t.dipole[k] * weight;
            }
        }
    }
    Ok(out)
}

/// Direct tensor on the positive imaginary axis, `alpha(i xi)`, which is
/// real: `Sum_v d_i d_k 2 E_v / (E_v^2 + xi^2)`. Infallible: the
/// denominators cannot vanish for nonzero transition energies.
pub fn imag_axis_from_transitions(trans: &[Transition], xi: f64) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for t in trans {
        let weight = 2.0 * t.energy / (t.energy * t.energy + xi * xi);
        for i in 0..3 {
            for k in 0..3 {
                out[i][k] += t.dipole[i] * t.dipole[k] * weight;
            }
        }
    }
    out
}

/// Full dynamic polarizability tensor of `reference` at complex `omega`.
pub fn polarizability_tensor(
    atom: &AtomModel,
    reference: &str,
    omega: Complex64,
    prescription: Prescription,
) -> Result<PolarizabilityTensor> {
    let trans = atom.transitions(reference)?;
    Ok(PolarizabilityTensor {
        entries: tensor_from_transitions(&trans, omega)?,
        omega,
        prescription,
    })
}

/// Largest relative deviation of any degenerate transition group from an
/// isotropic (identity-multiple) dyadic. Zero for an uncoupled reference.
pub fn isotropy_deviation(atom: &AtomModel, reference: &str, tol: f64) -> Result<f64> {
    let groups = atom.degenerate_energy_groups(reference, tol)?;
    let mut scale: f64 = 0.0;
    for g in &groups {
        for row in &g.dyadic {
            for &x in row {
                scale = scale.max(x.abs());
            }
        }
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for g in &groups {
        let tr3 = (g.dyadic[0][0] + g.dyadic[1][1] + g.dyadic[2][2]) / 3.0;
        for i in 0..3 {
            for k in 0..3 {
                let want = if i == k { tr3 } else { 0.0 };
                worst = worst.max((g.dyadic[i][k] - want).abs());
            }
        }
    }
    Ok(worst / scale)
}

/// Scalar polarizability `(1/3) tr alpha(w)` of an isotropic reference.
///
/// Isotropy is structural: every degenerate transition group must be an
/// identity multiple to [`ANISOTROPY_TOL`], so the reduction is valid at
/// every frequency at once, not just at the requested one.
pub fn scalar_polarizability(
    atom: &AtomModel,
    reference: &str,
    omega: Complex64,
    prescription: Prescription,
) -> Result<Complex64> {
    let dev = isotropy_deviation(atom, reference, 0.0)?;
    if dev > ANISOTROPY_TOL {
        return Err(Error::AnisotropicReference { magnitude: dev });
    }
    let t = polarizability_tensor(atom, reference, omega, prescription)?;
    Ok((t.entries[0][0] + t.entries[1][1] + t.entries[2][2]) / 3.0)
}

/// Static orientation-averaged polarizability
/// `(1/3) tr alpha(0) = (2/3) Sum_v |d|^2 / E_v`.
///
/// Defined for any reference; lower states enter with negative weight. For
/// the full static tensor evaluate [`polarizability_tensor`] at zero.
pub fn static_polarizability(atom: &AtomModel, reference: &str) -> Result<f64> {
    let trans = atom.transitions(reference)?;
    Ok(trans
        .iter()
        .map(|t| {
            let d2: f64 = t.dipole.iter().map(|x| x * x).sum();
            2.0 / 3.0 * d2 / t.energy
        })
        .sum())
}

/// Virtual states coupled to both `psi_a` and `psi_b` by dipole elements,
/// with both sets of transition energies. Exact degeneracy with either
/// reference is rejected.
pub fn mixed_transitions(
    atom: &AtomModel,
    psi_a: &str,
    psi_b: &str,
) -> Result<Vec<MixedTransition>> {
    let e_a = atom
        .level(psi_a)
        .ok_or_else(|| Error::UnknownLevel {
            label: psi_a.to_string(),
        })?
        .energy;
    let e_b = atom
        .level(psi_b)
        .ok_or_else(|| Error::UnknownLevel {
            label: psi_b.to_string(),
        })?
        .energy;
    let from_a = atom.transitions(psi_a)?;
    let from_b = atom.transitions(psi_b)?;
    let mut out = Vec::new();
    for ta in &from_a {
        let Some(tb) = from_b.iter().find(|t| t.label == ta.label) else {
            continue;
        };
        // Re-derive both energies from the level table so the exact-zero
        // checks refer to the same subtraction everywhere.
        let ev = atom.level(&ta.label).unwrap().energy;
        let energy_a = ev - e_a;
        let energy_b = ev - e_b;
        if energy_a == 0.0 || energy_b == 0.0 {
            return Err(Error::DegenerateWithReference {
                label: ta.label.clone(),
            });
        }
        out.push(MixedTransition {
            label: ta.label.clone(),
            energy_a,
            energy_b,
            dipole_a: ta.dipole,
            dipole_b: tb.dipole,
        });
    }
    out.sort_by(|x, y| {
        x.energy_a
            .partial_cmp(&y.energy_a)
            .unwrap()
            .then_with(|| x.label.cmp(&y.label))
    });
    Ok(out)
}

/// Anchored two-reference tensor from a precomputed transition list.
///
/// With `a = d(psiA, v)`, `b = d(v, psiB)`:
///
/// * anchor A: `Sum_v [ a_i b_j / (E_vA - w) + b_i a_j / (E_vA + w) ]`
/// * anchor B: `Sum_v [ b_i a_j / (E_vB + w) + a_i b_j / (E_vB - w) ]`
///
/// The anchor selects which reference supplies the denominators; the
/// numerator pairing is fixed by requiring that the frequency-integrated
/// product of the two anchored tensors reproduces second-order degenerate
/// perturbation theory at close range. Both satisfy `T(-w) = T(w)^T`, and
/// `anchor B == anchor A with the references swapped at -w`.
pub fn mixed_from_transitions(
    trans: &[MixedTransition],
    anchor: Anchor,
    omega: Complex64,
) -> Result<CMat3> {
    check_finite_omega(omega)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 3]; 3];
    for t in trans {
        let e = Complex64::new(
            match anchor {
                Anchor::SideA => t.energy_a,
                Anchor::SideB => t.energy_b,
            },
            0.0,
        );
        let den_m = e - omega;
        let den_p = e + omega;
        if den_m == zero || den_p == zero {
            return Err(Error::PoleHit {
                label: t.label.clone(),
                omega,
            });
        }
        // The numerator pairing is anchor-independent: a(x)b rides the
        // (E - w) denominator, b(x)a the (E + w) one. Only the energy moves.
        let wm: Mat3 = outer(t.dipole_a, t.dipole_b);
        let wp: Mat3 = outer(t.dipole_b, t.dipole_a);
        let inv_m = 1.0 / den_m;
        let inv_p = 1.0 / den_p;
        for i in 0..3 {
            for k in 0..3 {
                out[i][k] += wm[i][k] * inv_m + wp[i][k] * inv_p;
            }
        }
    }
    Ok(out)
}

/// Anchored two-reference tensor of an exchange-degenerate pair.
///
/// See [`mixed_from_transitions`]; pole bookkeeping downstream always uses
/// the Feynman prescription, which is what the returned tag records.
pub fn mixed_polarizability(
    atom: &AtomModel,
    psi_a: &str,
    psi_b: &str,
    anchor: Anchor,
    omega: Complex64,
) -> Result<PolarizabilityTensor> {
    let trans = mixed_transitions(atom, psi_a, psi_b)?;
    Ok(PolarizabilityTensor {
        entries: mixed_from_transitions(&trans, anchor, omega)?,
        omega,
        prescription: Prescription::Feynman,
    })
}

/// Relative permittivity of a dilute gas of these atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativePermittivity {
    /// `eps_r(w) = 1 + 4 pi N_V alpha(w)`.
    pub value: Complex64,
    /// The vacuum permittivity `1/(4 pi)` the relative value refers to.
    pub epsilon0: f64,
}

/// `eps_r(w) = 1 + 4 pi N_V alpha(w)` for number density `N_V` (atoms per
/// cubic bohr). Uses the retarded response, as a material response function
/// must; requires an isotropic reference.
pub fn relative_permittivity(
    atom: &AtomModel,
    reference: &str,
    omega: Complex64,
    number_density: f64,
) -> Result<RelativePermittivity> {
    if !number_density.is_finite() || number_density < 0.0 {
        return Err(Error::InvalidInput(format!(
            "number density must be finite and non-negative, got {number_density}"
        )));
    }
    let alpha = scalar_polarizability(atom, reference, omega, Prescription::Retarded)?;
    Ok(RelativePermittivity {
        value: 1.0 + 4.0 * std::f64::consts::PI * number_density * alpha,
        epsilon0: 1.0 / (4.0 * std::f64::consts::PI),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AtomLevel, DipoleElement};
    use proptest::prelude::*;

    fn lvl(label: &str, energy: f64) -> AtomLevel {
        AtomLevel {
            label: label.into(),
            energy,
        }
    }

    fn dip(from: &str, to: &str, d: [f64; 3]) -> DipoleElement {
        DipoleElement {
            from: from.into(),
            to: to.into(),
            d,
        }
    }

    /// Isotropic two-level atom: triply degenerate upper level at 0.5 with
    /// unit dipoles along the axes.
    fn two_level() -> AtomModel {
        AtomModel::new(
            vec![
                lvl("g", 0.0),
                lvl("ex", 0.5),
                lvl("ey", 0.5),
                lvl("ez", 0.5),
            ],
            vec![
                dip("g", "ex", [1.0, 0.0, 0.0]),
                dip("g", "ey", [0.0, 1.0, 0.0]),
                dip("g", "ez", [0.0, 0.0, 1.0]),
            ],
        )
        .unwrap()
    }

    fn three_level() -> AtomModel {
        AtomModel::new(
            vec![lvl("n", 0.0), lvl("m", -0.1), lvl("v", 0.4)],
            vec![
                dip("n", "m", [0.4, 0.0, 0.3]),
                dip("n", "v", [0.1, 0.5, -0.2]),
            ],
        )
        .unwrap()
    }

    fn ladder() -> AtomModel {
        AtomModel::new(
            vec![lvl("g", 0.0), lvl("u", 0.3), lvl("w", 0.8)],
            vec![
                dip("g", "u", [0.5, 0.1, 0.2]),
                dip("u", "w", [-0.2, 0.4, 0.1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn static_tensor_of_isotropic_atom() {
        let atom = two_level();
        let t = polarizability_tensor(&atom, "g", Complex64::new(0.0, 0.0), Prescription::Feynman)
            .unwrap();
        for i in 0..3 {
            for k in 0..3 {
                let want = if i == k { 4.0 } else { 0.0 };
                assert!((t.entries[i][k] - want).norm() < 1e-14);
            }
        }
        assert!((static_polarizability(&atom, "g").unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_on_imaginary_axis() {
        let atom = two_level();
        let a = scalar_polarizability(&atom, "g", Complex64::new(0.0, 1.0), Prescription::Feynman)
            .unwrap();
        assert!((a - Complex64::new(0.8, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn exact_pole_is_reported_with_label() {
        let atom = two_level();
        let err =
            polarizability_tensor(&atom, "g", Complex64::new(0.5, 0.0), Prescription::Feynman)
                .unwrap_err();
        match err {
            Error::PoleHit { label, .. } => assert_eq!(label, "ex"),
            other => panic!("expected pole hit, got {other:?}"),
        }
        // Near misses evaluate: large but finite.
        let near = polarizability_tensor(
            &atom,
            "g",
            Complex64::new(0.5 + 1e-13, 0.0),
            Prescription::Feynman,
        )
        .unwrap();
        assert!(near.entries[0][0].norm() > 1e10);
    }

    #[test]
    fn anisotropic_reference_rejects_scalar_reduction() {
        let atom = three_level();
        let err =
            scalar_polarizability(&atom, "n", Complex64::new(0.0, 0.3), Prescription::Feynman)
                .unwrap_err();
        match err {
            Error::AnisotropicReference { magnitude } => assert!(magnitude > 0.1),
            other => panic!("expected anisotropy error, got {other:?}"),
        }
    }

    #[test]
    fn evenness_is_exact() {
        let atom = three_level();
        let trans = atom.transitions("n").unwrap();
        for &(re, im) in &[(0.17, 0.0), (0.0, 0.9), (0.23, 0.11)] {
            let w = Complex64::new(re, im);
            let plus = tensor_from_transitions(&trans, w).unwrap();
            let minus = tensor_from_transitions(&trans, -w).unwrap();
            for i in 0..3 {
                for k in 0..3 {
                    assert_eq!(plus[i][k], minus[i][k]);
                }
            }
        }
    }

    #[test]
    fn imag_axis_fast_path_matches_complex_path() {
        let atom = three_level();
        let trans = atom.transitions("n").unwrap();
        let xi = 0.37;
        let fast = imag_axis_from_transitions(&trans, xi);
        let slow = tensor_from_transitions(&trans, Complex64::new(0.0, xi)).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                assert!((slow[i][k] - fast[i][k]).norm() < 1e-15);
                assert!(slow[i][k].im.abs() < 1e-18);
            }
        }
    }

    #[test]
    fn mixed_transitions_ladder() {
        let atom = ladder();
        // Only "u" couples to both "w" and "g".
        let mt = mixed_transitions(&atom, "w", "g").unwrap();
        assert_eq!(mt.len(), 1);
        assert_eq!(mt[0].label, "u");
        assert!((mt[0].energy_a - (-0.5)).abs() < 1e-15);
        assert!((mt[0].energy_b - 0.3).abs() < 1e-15);
        assert_eq!(mt[0].dipole_a, [-0.2, 0.4, 0.1]);
        assert_eq!(mt[0].dipole_b, [0.5, 0.1, 0.2]);
    }

    #[test]
    fn mixed_reduces_to_direct_for_equal_references() {
        let atom = two_level();
        let w = Complex64::new(0.2, 0.1);
        let mixed = mixed_polarizability(&atom, "g", "g", Anchor::SideA, w).unwrap();
        let direct = polarizability_tensor(&atom, "g", w, Prescription::Feynman).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                assert!((mixed.entries[i][k] - direct.entries[i][k]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn permittivity_worked_value() {
        let atom = two_level();
        let nv = 0.01 / (4.0 * std::f64::consts::PI);
        let eps = relative_permittivity(&atom, "g", Complex64::new(0.0, 0.0), nv).unwrap();
        assert!((eps.value - Complex64::new(1.04, 0.0)).norm() < 1e-12);
        assert!((eps.epsilon0 - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-18);
    }

    proptest! {
        #[test]
        fn mixed_transpose_relation(re in -0.9f64..0.9, im in -0.9f64..0.9) {
            let atom = ladder();
            let trans = mixed_transitions(&atom, "w", "g").unwrap();
            let w = Complex64::new(re, im);
            let plus = mixed_from_transitions(&trans, Anchor::SideA, w);
            let minus = mixed_from_transitions(&trans, Anchor::SideA, -w);
            prop_assume!(plus.is_ok() && minus.is_ok());
            let (plus, minus) = (plus.unwrap(), minus.unwrap());
            for i in 0..3 {
                for k in 0..3 {
                    prop_assert!((plus[i][k] - minus[k][i]).norm() == 0.0);
                }
            }
        }

        #[test]
        fn anchor_b_is_swapped_anchor_a(re in -0.9f64..0.9, im in -0.9f64..0.9) {
            let atom = ladder();
            let w = Complex64::new(re, im);
            let ab = mixed_polarizability(&atom, "w", "g", Anchor::SideB, w);
            let ba = mixed_polarizability(&atom, "g", "w", Anchor::SideA, -w);
            prop_assume!(ab.is_ok() && ba.is_ok());
            let (ab, ba) = (ab.unwrap(), ba.unwrap());
            for i in 0..3 {
                for k in 0..3 {
                    prop_assert!((ab.entries[i][k] - ba.entries[i][k]).norm() == 0.0);
                }
            }
        }
    }
}
