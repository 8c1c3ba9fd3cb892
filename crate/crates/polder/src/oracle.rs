//! Independent reference computations for the validation checks.
//!
//! Everything here is deliberately written the long way around: raw
//! perturbation-theory loops over the transition lists, an entrywise
//! dipole-field propagator assembled inline, and real-frequency-axis
//! integration with the pole displacement kept finite and extrapolated to
//! zero afterwards. The engine's closed-form contractions, grouped pole
//! residues, and Wick-rotated integrals never enter; agreement between the
//! two paths is evidence, not construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{PairSystem, Transition};
use crate::polarizability::Prescription;
use crate::quadrature::{integrate_pieces, Piece, QuadratureSpec};

type CTensor = [[Complex64; 3]; 3];

/// `x . diag(1,1,-2) . y`: the instantaneous dipole-dipole angular factor
/// for separation along +z, written out longhand.
fn beta_sandwich(x: [f64; 3], y: [f64; 3]) -> f64 {
    x[0] * y[0] + x[1] * y[1] - 2.0 * x[2] * y[2]
}

/// Plain second-order dispersion coefficient from raw perturbation-theory
/// loops: `C6 = Sum_vq (d_v . beta . d_q)^2 / (E_v + E_q)` over all
/// transitions of both atoms, signed energies included, so the interaction
/// tends to `-C6 / R^6`. An exact zero denominator is resonant energy
/// transfer and is reported, not regularized.
pub fn brute_force_vdw(pair: &PairSystem) -> Result<f64> {
    let trans_a = pair.atom_a.transitions(&pair.reference_a)?;
    let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
    let mut c6 = 0.0;
    for a in &trans_a {
        for b in &trans_b {
            let denom = a.energy + b.energy;
            if denom == 0.0 {
                let (lower, other) = if a.energy < 0.0 {
                    (a.label.clone(), b.label.clone())
                } else {
                    (b.label.clone(), a.label.clone())
                };
                return Err(Error::Resonance { lower, other });
            }
            let s = beta_sandwich(a.dipole, b.dipole);
            c6 += s * s / denom;
        }
    }
    Ok(c6)
}

/// Dipole vector between two named levels of an atom, if declared.
fn dipole_between(atom: &crate::model::AtomModel, x: &str, y: &str) -> Option<[f64; 3]> {
    atom.dipoles().iter().find_map(|el| {
        if (el.from == x && el.to == y) || (el.from == y && el.to == x) {
            Some(el.d)
        } else {
            None
        }
    })
}

/// Exchange dispersion coefficient of an identical pair from degenerate
/// second-order perturbation theory on the two-atom product space.
///
/// The intermediate `|v_A, q_B>` connects `|psi_A psi_B>` to the exchanged
/// `|psi_B psi_A>` through two dipole-dipole matrix elements, giving
///
/// `C6x = Sum_vq (a . beta . e)(b . beta . c) / (E_vA + E_qB)`
///
/// with `a = <v|d|psi_A>`, `b = <psi_B|d|v>`, `e = <q|d|psi_B>`,
/// `c = <psi_A|d|q>`; the exchange shift tends to `-C6x / R^6`. Chains
/// missing either coupling contribute nothing.
pub fn exchange_vdw(pair: &PairSystem) -> Result<f64> {
    if !pair.identical {
        return Err(Error::NotIdentical);
    }
    let from_a = pair.atom_a.transitions(&pair.reference_a)?;
    let from_b = pair.atom_b.transitions(&pair.reference_b)?;
    let mut c6x = 0.0;
    for v in &from_a {
        let Some(b) = dipole_between(&pair.atom_a, &v.label, &pair.reference_b) else {
            continue;
        };
        for q in &from_b {
            let Some(c) = dipole_between(&pair.atom_b, &q.label, &pair.reference_a) else {
                continue;
            };
            let denom = v.energy + q.energy;
            if denom == 0.0 {
                let (lower, other) = if v.energy < 0.0 {
                    (v.label.clone(), q.label.clone())
                } else {
                    (q.label.clone(), v.label.clone())
                };
                return Err(Error::Resonance { lower, other });
            }
            c6x += beta_sandwich(v.dipole, q.dipole) * beta_sandwich(b, c) / denom;
        }
    }
    Ok(c6x)
}

/// Polarizability tensor with the pole displacement kept finite.
///
/// The Feynman displacement puts both denominators at `-i eps`, which is
/// exactly even in `omega` (the two terms trade places); the retarded
/// displacement `(E - w - i eps)(E + w + i eps)` is not even at any finite
/// `eps`. Off the poles both converge to the same values as `eps -> 0`.
pub fn displaced_polarizability(
    trans: &[Transition],
    omega: f64,
    epsilon: f64,
    prescription: Prescription,
) -> Result<CTensor> {
    if !omega.is_finite() {
        return Err(Error::InvalidInput("frequency must be finite".into()));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidInput(format!(
            "pole displacement must be finite and positive, got {epsilon}"
        )));
    }
    Ok(displaced_tensor(trans, omega, epsilon, prescription))
}

fn displaced_tensor(
    trans: &[Transition],
    omega: f64,
    epsilon: f64,
    prescription: Prescription,
) -> CTensor {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 3]; 3];
    for t in trans {
        let weight = match prescription {
            Prescription::Feynman => {
                Complex64::new(t.energy - omega, -epsilon).inv()
                    + Complex64::new(t.energy + omega, -epsilon).inv()
            }
            Prescription::Retarded => {
                Complex64::new(t.energy - omega, -epsilon).inv()
                    + Complex64::new(t.energy + omega, epsilon).inv()
            }
        };
        for i in 0..3 {
            for k in 0..3 {
                out[i][k] += weight * t.dipole[i] * t.dipole[k];
            }
        }
    }
    out
}

/// Controls the real-axis reference evaluation of the direct shift.
#[derive(Debug, Clone)]
pub struct ContourSpec {
    /// Pole displacements to evaluate at, strictly decreasing and positive;
    /// the result extrapolates them to zero.
    pub epsilon_values: Vec<f64>,
    /// Multiplier on the subdivision budget of the adaptive pass.
    pub panel_density: u32,
    /// Degree of the extrapolating polynomial (capped at the number of
    /// displacement values minus one; the smallest displacements are used).
    pub extrapolation_order: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            epsilon_values: vec![1e-3, 5e-4, 2.5e-4],
            panel_density: 1,
            extrapolation_order: 2,
        }
    }
}

/// Dipole-field propagator along +z at real frequency, written entrywise:
/// `e^{i w R/c} [ -beta (1 - i wR/c) + alpha (wR/c)^2 ] / R^3` as a full
/// 3x3 matrix (diagonal here, but contracted without using that).
fn field_propagator(omega: f64, r: f64, c: f64) -> CTensor {
    let zero = Complex64::new(0.0, 0.0);
    let krc = omega * r / c;
    let phase = Complex64::new(0.0, krc).exp();
    let r3 = r * r * r;
    let transverse = phase * Complex64::new(krc * krc - 1.0, krc) / r3;
    let longitudinal = phase * Complex64::new(2.0, -2.0 * krc) / r3;
    let mut d = [[zero; 3]; 3];
    d[0][0] = transverse;
    d[1][1] = transverse;
    d[2][2] = longitudinal;
    d
}

/// The real-axis integrand `Sum_ijkl alphaA_ij alphaB_kl D_ik D_jl` at one
/// frequency, with both tensors displaced by `eps` (Feynman).
fn real_axis_integrand(
    trans_a: &[Transition],
    trans_b: &[Transition],
    omega: f64,
    eps: f64,
    r: f64,
    c: f64,
) -> Complex64 {
    let aa = displaced_tensor(trans_a, omega, eps, Prescription::Feynman);
    let ab = displaced_tensor(trans_b, omega, eps, Prescription::Feynman);
    let d = field_propagator(omega, r, c);
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    sum += aa[i][j] * ab[k][l] * d[i][k] * d[j][l];
                }
            }
        }
    }
    sum
}

/// Breakpoints for the finite part `[0, cap]`: geometric grading into each
/// displaced pole down to the displacement scale, plus a bound on panel
/// length so each oscillation period is resolved.
fn build_breakpoints(spikes: &[f64], eps: f64, cap: f64, osc_len: f64) -> Vec<f64> {
    let mut pts = vec![0.0, cap];
    for (idx, &s) in spikes.iter().enumerate() {
        if s <= 0.0 || s >= cap {
            continue;
        }
        let left_gap = if idx == 0 { s } else { s - spikes[idx - 1] };
        let right_gap = if idx + 1 == spikes.len() {
            cap - s
        } else {
            spikes[idx + 1] - s
        };
        pts.push(s);
        let mut w = 0.4 * left_gap.min(right_gap);
        while w > 0.5 * eps {
            if s - w > 0.0 {
                pts.push(s - w);
            }
            if s + w < cap {
                pts.push(s + w);
            }
            w *= 0.5;
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup_by(|a, b| (*a - *b).abs() < 0.05 * eps);
    // Split long smooth stretches so no panel spans more than half an
    // oscillation period.
    let max_len = 0.5 * osc_len;
    let mut out = Vec::with_capacity(pts.len());
    for pair in pts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        out.push(a);
        let n_extra = ((b - a) / max_len).floor() as usize;
        for m in 1..=n_extra {
            let x = a + (b - a) * (m as f64) / (n_extra as f64 + 1.0);
            out.push(x);
        }
    }
    out.push(*pts.last().expect("nonempty breakpoints"));
    out
}

/// Direct-channel energy shift evaluated the hard way: numerically along
/// the real frequency axis as `(i/2pi) Integral_0^inf J(w) dw`, with the
/// tensor poles displaced by finite `eps` (Feynman) and the displacement
/// extrapolated to zero.
///
/// The finite part runs adaptively to a frequency cap; the remainder is
/// summed by repeated integration by parts against the `e^{2iwR/c}` phase
/// (four orders, derivatives by central differences). Returns the complex
/// shift: the real part is the energy displacement, `-2 Im` the induced
/// width.
pub fn contour_shift_direct(pair: &PairSystem, r: f64, spec: &ContourSpec) -> Result<Complex64> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "separation must be finite and positive, got {r}"
        )));
    }
    if spec.epsilon_values.len() < 2 {
        return Err(Error::InvalidInput(
            "need at least two displacement values to extrapolate".into(),
        ));
    }
    for w in spec.epsilon_values.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidInput(
                "displacement values must be strictly decreasing".into(),
            ));
        }
    }
    if !spec
        .epsilon_values
        .iter()
        .all(|&e| e > 0.0 && e.is_finite())
    {
        return Err(Error::InvalidInput(
            "displacement values must be finite and positive".into(),
        ));
    }
    if spec.panel_density == 0 {
        return Err(Error::InvalidInput("panel density must be positive".into()));
    }

    let c = pair.units.c;
    let trans_a = pair.atom_a.transitions(&pair.reference_a)?;
    let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
    let mut spikes: Vec<f64> = trans_a
        .iter()
        .chain(trans_b.iter())
        .map(|t| t.energy.abs())
        .collect();
    spikes.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
    spikes.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let e_max = *spikes.last().expect("atoms have transitions");
    let osc_len = std::f64::consts::PI * c / r;
    let cap = (20.0 * e_max).max(5.0 * osc_len).max(3.0 * e_max + 1.0);

    let quad = QuadratureSpec {
        rel_tol: 1e-9,
        abs_tol: 0.0,
        max_subdivisions: 2000 * spec.panel_density,
        decay_scale: 1.0,
    };
    let kappa = 2.0 * r / c;
    let ik = Complex64::new(0.0, kappa);
    let prefactor = Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI));

    let mut values: Vec<(f64, Complex64)> = Vec::new();
    for &eps in &spec.epsilon_values {
        let integrand = |w: f64| real_axis_integrand(&trans_a, &trans_b, w, eps, r, c);
        let pts = build_breakpoints(&spikes, eps, cap, osc_len);
        let pieces: Vec<Piece<'_>> = pts
            .windows(2)
            .map(|ab| Piece {
                f: &integrand,
                a: ab[0],
                b: ab[1],
            })
            .collect();
        let finite = integrate_pieces(&pieces, &quad)?.value;

        // Tail by parts: with J = e^{i kappa w} F(w),
        // Integral_cap^inf J dw = -e^{i kappa cap} [F/(ik) + F'/(ik)^2
        //   + F''/(ik)^3 + F'''/(ik)^4](cap) + O(F'''' / kappa^4).
        let f_sans = |w: f64| integrand(w) * Complex64::new(0.0, -kappa * w).exp();
        let h = cap / 64.0;
        let (fm2, fm1, f0, fp1, fp2) = (
            f_sans(cap - 2.0 * h),
            f_sans(cap - h),
            f_sans(cap),
            f_sans(cap + h),
            f_sans(cap + 2.0 * h),
        );
        let d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
        let d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        let d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
        let tail = -Complex64::new(0.0, kappa * cap).exp()
            * (f0 / ik + d1 / (ik * ik) + d2 / (ik * ik * ik) + d3 / (ik * ik * ik * ik));

        values.push((eps, prefactor * (finite + tail)));
    }

    // Polynomial extrapolation of the displacement to zero through the
    // smallest displacement values (Lagrange form).
    let degree = spec.extrapolation_order.min(values.len() - 1);
    let pts = &values[values.len() - 1 - degree..];
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, (ej, vj)) in pts.iter().enumerate() {
        let mut lj = 1.0;
        for (m, (em, _)) in pts.iter().enumerate() {
            if m != j {
                lj *= em / (em - ej);
            }
        }
        acc += vj * lj;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{excited_ground_pair, ground_ground_pair, mixing_pair};
    use crate::shift::{total_direct, vdw_limit};

    #[test]
    fn brute_force_dispersion_matches_the_engine_coefficient() {
        for pair in [ground_ground_pair(), excited_ground_pair()] {
            let oracle = brute_force_vdw(&pair).unwrap();
            let engine = vdw_limit(&pair).unwrap();
            assert!((oracle - engine).abs() <= 1e-14 * engine.abs());
        }
        assert!((brute_force_vdw(&ground_ground_pair()).unwrap() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn exchange_dispersion_coefficient_of_the_ladder_pair() {
        let c6x = exchange_vdw(&mixing_pair()).unwrap();
        assert!((c6x + 0.05).abs() < 1e-15, "c6x = {c6x}");
        assert!(matches!(
            exchange_vdw(&excited_ground_pair()),
            Err(Error::NotIdentical)
        ));
    }

    #[test]
    fn feynman_displacement_is_exactly_even_retarded_is_not() {
        let pair = excited_ground_pair();
        let trans = pair.atom_a.transitions(&pair.reference_a).unwrap();
        let eps = 1e-3;
        for omega in [0.07, 0.25, 0.8] {
            let plus = displaced_polarizability(&trans, omega, eps, Prescription::Feynman).unwrap();
            let minus =
                displaced_polarizability(&trans, -omega, eps, Prescription::Feynman).unwrap();
            assert_eq!(plus, minus, "Feynman displacement must be even exactly");
            let rp = displaced_polarizability(&trans, omega, eps, Prescription::Retarded).unwrap();
            let rm = displaced_polarizability(&trans, -omega, eps, Prescription::Retarded).unwrap();
            let gap: f64 = (0..3)
                .flat_map(|i| (0..3).map(move |k| (i, k)))
                .map(|(i, k)| (rp[i][k] - rm[i][k]).norm())
                .sum();
            assert!(gap > 1e-6, "retarded displacement should break evenness");
        }
    }

    #[test]
    fn real_axis_integration_reproduces_the_ground_pair_shift() {
        let pair = ground_ground_pair();
        let r = 5.0;
        let oracle = contour_shift_direct(&pair, r, &ContourSpec::default()).unwrap();
        let engine = total_direct(&pair, r).unwrap();
        assert!(
            ((oracle.re - engine.total) / engine.total).abs() < 1e-6,
            "oracle {} vs engine {}",
            oracle.re,
            engine.total
        );
        assert!(oracle.im.abs() < 1e-8 * oracle.re.abs());
    }

    #[test]
    fn real_axis_integration_picks_up_the_pole_of_the_excited_pair() {
        let pair = excited_ground_pair();
        let r = 2.0;
        let oracle = contour_shift_direct(&pair, r, &ContourSpec::default()).unwrap();
        let engine = total_direct(&pair, r).unwrap();
        let expected = Complex64::new(engine.total, -0.5 * engine.width);
        assert!(
            (oracle - expected).norm() < 1e-4 * expected.norm(),
            "oracle {oracle} vs engine {expected}"
        );
    }

    #[test]
    fn displacement_values_are_validated() {
        let pair = ground_ground_pair();
        let bad = ContourSpec {
            epsilon_values: vec![1e-3, 1e-3],
            ..ContourSpec::default()
        };
        assert!(matches!(
            contour_shift_direct(&pair, 1.0, &bad),
            Err(Error::InvalidInput(_))
        ));
        let short = ContourSpec {
            epsilon_values: vec![1e-3],
            ..ContourSpec::default()
        };
        assert!(matches!(
            contour_shift_direct(&pair, 1.0, &short),
            Err(Error::InvalidInput(_))
        ));
    }
}
