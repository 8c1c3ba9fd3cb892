//! Built-in validation suite: named invariants with measured deviations and
//! thresholds.
//!
//! Each check compares two routes to the same quantity — closed form against
//! quadrature, engine decomposition against the raw-loop oracle, asymptotic
//! coefficient against the full term — and reports the worst relative
//! deviation it saw. The command-line `validate` verb and the acceptance
//! tests both run [`run_all`] and render the results.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fixtures::{excited_ground_pair, ground_ground_pair, ladder_atom, two_level_isotropic};
use crate::geometry::{photon_propagator, propagator_double_contraction};
use crate::model::{AtomLevel, AtomModel, DipoleElement, PairSystem, UnitsSystem};
use crate::oracle::{
    brute_force_vdw, contour_shift_direct, displaced_polarizability, exchange_vdw, ContourSpec,
};
use crate::polarizability::{mixed_polarizability, polarizability_tensor, Anchor, Prescription};
use crate::quadrature::{
    contour_two_denominators, identity_two_denominators, identity_wick_denominators,
    line_wick_denominators,
};
use crate::shift::{
    asymptotic_shift, crossover_report, mixing_pole, mixing_wick, pole_term_direct, total_direct,
    wick_term_direct, wick_term_direct_share, Channel, RangeKind, TermKind,
};

/// Outcome of one named invariant.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst deviation observed (compared against `threshold`); NaN when the
    /// check aborted with an error.
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

fn guarded(
    name: &'static str,
    threshold: f64,
    body: impl FnOnce() -> Result<(f64, bool, String)>,
) -> CheckResult {
    match body() {
        Ok((measured, extra_ok, detail)) => CheckResult {
            name,
            passed: measured <= threshold && extra_ok,
            measured,
            threshold,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            measured: f64::NAN,
            threshold,
            detail: format!("aborted: {e}"),
        },
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// `x . diag(1,1,-2) . y` written out.
fn beta_sandwich(x: [f64; 3], y: [f64; 3]) -> f64 {
    x[0] * y[0] + x[1] * y[1] - 2.0 * x[2] * y[2]
}

/// Frequency-contour identity for two upward transitions: the pole-straddling
/// numerical contour against `4 pi i / (E_a + E_b)`, including the textbook
/// case `identity_two_denominators(1, 1) = 2 pi i`.
fn contour_identity_upward() -> CheckResult {
    guarded("contour_identity_upward", 1e-8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst = 0.0f64;
        let mut pairs: Vec<(f64, f64)> = vec![(1.0, 1.0)];
        for _ in 0..49 {
            pairs.push((
                0.05 + 4.95 * rng.gen::<f64>(),
                0.05 + 4.95 * rng.gen::<f64>(),
            ));
        }
        for &(ea, eb) in &pairs {
            let closed = identity_two_denominators(ea, eb)?;
            let numeric = contour_two_denominators(ea, eb)?;
            worst = worst.max((numeric - closed).norm() / closed.norm());
        }
        let unit = identity_two_denominators(1.0, 1.0)?;
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let anchored = (unit - two_pi_i).norm() <= 1e-15 * two_pi_i.norm();
        Ok((
            worst,
            anchored,
            format!("50 upward pairs; identity_two_denominators(1,1) = 2πi holds: {anchored}"),
        ))
    })
}

/// Imaginary-axis identity with signed energies: plain-line quadrature against
/// `4 pi sgn(E_m) sgn(E_q) / (|E_m| + |E_q|)`.
fn contour_identity_signed() -> CheckResult {
    guarded("contour_identity_signed", 1e-8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let mag_m = 0.05 + 4.95 * rng.gen::<f64>();
            let mag_q = 0.05 + 4.95 * rng.gen::<f64>();
            let em = if rng.gen::<bool>() { mag_m } else { -mag_m };
            let eq = if rng.gen::<bool>() { mag_q } else { -mag_q };
            let closed = identity_wick_denominators(em, eq)?;
            let numeric = line_wick_denominators(em, eq)?;
            worst = worst.max(rel(numeric, closed));
        }
        Ok((worst, true, "50 signed pairs, both sign sectors".into()))
    })
}

/// Entrywise photon-propagator self-contraction `Sum_ik D_ik D_ik` against its
/// closed polynomial form, at random frequencies, separations, and directions.
fn propagator_contraction_closed_form() -> CheckResult {
    guarded("propagator_contraction_closed_form", 1e-12, || {
        let units = UnitsSystem::hartree();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut worst = 0.0f64;
        for case in 0..100 {
            let omega = if case % 3 == 2 {
                // every third case on the imaginary axis
                Complex64::new(0.0, 0.01 + 2.99 * rng.gen::<f64>())
            } else {
                Complex64::new(0.01 + 2.99 * rng.gen::<f64>(), 0.0)
            };
            let r_len = 0.3 * (1000.0f64).powf(rng.gen::<f64>());
            // random direction: the closed form must not depend on it
            let (mut ux, mut uy, mut uz): (f64, f64, f64);
            loop {
                ux = 2.0 * rng.gen::<f64>() - 1.0;
                uy = 2.0 * rng.gen::<f64>() - 1.0;
                uz = 2.0 * rng.gen::<f64>() - 1.0;
                let n2 = ux * ux + uy * uy + uz * uz;
                if n2 > 0.01 && n2 < 1.0 {
                    let n = n2.sqrt();
                    ux /= n;
                    uy /= n;
                    uz /= n;
                    break;
                }
            }
            let d = photon_propagator(omega, [r_len * ux, r_len * uy, r_len * uz], &units)?;
            let mut entrywise = Complex64::new(0.0, 0.0);
            for i in 0..3 {
                for k in 0..3 {
                    entrywise += d[i][k] * d[i][k];
                }
            }
            let closed = propagator_double_contraction(omega, r_len, &units)?;
            worst = worst.max((entrywise - closed).norm() / closed.norm());
        }
        Ok((
            worst,
            true,
            "100 random (frequency, separation, direction)".into(),
        ))
    })
}

/// Short-range restoration: the full direct shift times `R^6` approaches the
/// raw perturbation-theory dispersion coefficient, with the deviation falling
/// off as the square of the retardation parameter `x = E R / (hbar c)`.
fn short_range_vdw_restoration() -> CheckResult {
    guarded("short_range_vdw_restoration", 1e-4, || {
        let pair = excited_ground_pair();
        let c = pair.units.c;
        let c6 = brute_force_vdw(&pair)?;
        let r_of_x = |x: f64| x * c / 0.1;
        let t0 = total_direct(&pair, r_of_x(1e-3))?.total;
        let measured = rel(t0 * r_of_x(1e-3).powi(6), -c6);
        let xs: Vec<f64> = (0..5).map(|k| 1e-3 * 100f64.powf(k as f64 / 4.0)).collect();
        let mut devs = Vec::with_capacity(xs.len());
        for &x in &xs {
            let r = r_of_x(x);
            let t = total_direct(&pair, r)?.total;
            devs.push((t * r.powi(6) + c6).abs());
        }
        let slope = loglog_slope(&xs, &devs);
        let slope_ok = (slope - 2.0).abs() <= 0.2;
        Ok((
            measured,
            slope_ok,
            format!("total ≈ vdW at short range, slope 2: measured {slope:.3} (want 2 +- 0.2)"),
        ))
    })
}

/// Short-range shares of the lower state: the numerical Wick share matches the
/// sign-flipped-denominator closed form, and together with the residue share
/// it reassembles that state's raw dispersion share exactly.
fn lower_state_short_range_shares() -> CheckResult {
    guarded("lower_state_short_range_shares", 1e-5, || {
        let pair = excited_ground_pair();
        let c = pair.units.c;
        use Channel::Direct;
        use RangeKind::Short;
        use TermKind::{Pole, Wick};

        let r1 = 1e-3 * c / 0.1;
        let w_num = wick_term_direct_share(&pair, "m", r1)?;
        let w_short = asymptotic_shift(&pair, Some("m"), Wick, Direct, Short, r1)?;
        let measured = rel(w_num, w_short);

        // Closed-form reassembly at vanishing retardation: the residue share
        // equals the raw dispersion share minus the flipped-denominator Wick
        // share.
        let r2 = 1e-7 * c / 0.1;
        let p_short = asymptotic_shift(&pair, Some("m"), Pole, Direct, Short, r2)?;
        let w_short2 = asymptotic_shift(&pair, Some("m"), Wick, Direct, Short, r2)?;
        let trans_a = pair.atom_a.transitions(&pair.reference_a)?;
        let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
        let mut share = 0.0;
        for a in trans_a.iter().filter(|t| t.label == "m") {
            for b in &trans_b {
                let s = beta_sandwich(a.dipole, b.dipole);
                share += s * s / (a.energy + b.energy);
            }
        }
        let vdw_share = -share / r2.powi(6);
        let reassembly = (p_short + w_short2 - vdw_share).abs() / vdw_share.abs();
        let ok = reassembly <= 1e-12;
        Ok((
            measured,
            ok,
            format!("flipped-denominator share matches; residue reassembly rel {reassembly:.2e} (want <= 1e-12)"),
        ))
    })
}

/// Retarded long-range coefficient of the ground-state pair: the Wick term
/// times `R^7` against `-(23/4pi) hbar c alpha_A(0) alpha_B(0)` (static
/// polarizabilities 4 each here).
fn casimir_polder_coefficient() -> CheckResult {
    guarded("casimir_polder_coefficient", 1e-3, || {
        let pair = ground_ground_pair();
        let c = pair.units.c;
        let r = 1e3 * c / 0.5;
        let w = wick_term_direct(&pair, r)?;
        let expected = -23.0 * c * 16.0 / (4.0 * std::f64::consts::PI);
        let measured = rel(w * r.powi(7), expected);
        Ok((
            measured,
            true,
            format!("R = 1e3 hbar c / E0; coefficient -> {expected:.6}"),
        ))
    })
}

/// Far-zone residue tail: at `x = 50` the envelope magnitude
/// `|Q| R^2 (c/E)^4` reduces to the transverse contraction, and the envelope
/// itself falls off as `1/R^2` through its maxima.
fn long_range_pole_envelope() -> CheckResult {
    guarded("long_range_pole_envelope", 1e-3, || {
        // Lower-state dipole kept mostly transverse so the oscillatory
        // envelope is dominated by the transverse contraction at x = 50.
        let atom_a = AtomModel::new(
            vec![
                AtomLevel {
                    label: "m".into(),
                    energy: -0.1,
                },
                AtomLevel {
                    label: "n".into(),
                    energy: 0.0,
                },
                AtomLevel {
                    label: "v".into(),
                    energy: 0.4,
                },
            ],
            vec![
                DipoleElement {
                    from: "n".into(),
                    to: "m".into(),
                    d: [0.4, 0.2, 0.2],
                },
                DipoleElement {
                    from: "n".into(),
                    to: "v".into(),
                    d: [0.1, 0.5, -0.2],
                },
            ],
        )?;
        let pair = PairSystem::new(
            atom_a,
            two_level_isotropic(),
            "n",
            "g",
            false,
            UnitsSystem::hartree(),
        )?;
        let c = pair.units.c;
        let e = 0.1;

        // Transverse contraction from raw loops: M = d_m (x) d_m against the
        // partner tensor at the pole frequency.
        let d_m = [0.4, 0.2, 0.2];
        let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
        let mut n_tensor = [[0.0f64; 3]; 3];
        for t in &trans_b {
            let w = 1.0 / (t.energy - e) + 1.0 / (t.energy + e);
            for i in 0..3 {
                for k in 0..3 {
                    n_tensor[i][k] += w * t.dipole[i] * t.dipole[k];
                }
            }
        }
        let axis = [1.0, 1.0, 0.0];
        let mut t_aa = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                t_aa += axis[i] * axis[k] * d_m[i] * d_m[k] * n_tensor[i][k];
            }
        }

        let r50 = 50.0 * c / e;
        let pc = pole_term_direct(&pair, "m", r50)?;
        let envelope = (pc.p * pc.p + 0.25 * pc.gamma * pc.gamma).sqrt();
        let measured = (envelope * r50 * r50 * (c / e).powi(4) / t_aa - 1.0).abs();

        // Envelope decay through the maxima of the oscillation, 2|x| = k pi.
        let ks = [64.0, 128.0, 256.0];
        let mut rs = Vec::new();
        let mut ps = Vec::new();
        for &k in &ks {
            let x_abs = 0.5 * k * std::f64::consts::PI;
            let r = x_abs * c / e;
            rs.push(r);
            ps.push(pole_term_direct(&pair, "m", r)?.p.abs());
        }
        let slope = loglog_slope(&rs, &ps);
        let slope_ok = (slope + 2.0).abs() <= 0.05;
        Ok((
            measured,
            slope_ok,
            format!("envelope ratio at x = 50; decay slope {slope:.4} (want -2 +- 0.05)"),
        ))
    })
}

/// The width is the real shift's oscillatory bracket under
/// `(cos, sin) -> (sin, -cos)`, doubled: rebuilt from raw contractions on
/// randomized models and separations and compared algebraically.
fn width_substitution_rule() -> CheckResult {
    guarded("width_substitution_rule", 1e-14, || {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let units = UnitsSystem::hartree();
        let c = units.c;
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let em = -(0.05 + 0.95 * rng.gen::<f64>());
            let eu = 0.2 + 0.8 * rng.gen::<f64>();
            let vec3 = |rng: &mut ChaCha8Rng| {
                let mut d = [0.0f64; 3];
                for slot in &mut d {
                    *slot = 1.6 * (rng.gen::<f64>() - 0.5);
                }
                d[0] += 1.0;
                d
            };
            let d_m = vec3(&mut rng);
            let d_u = vec3(&mut rng);
            let e1 = em.abs() + 0.05 + 0.5 * rng.gen::<f64>();
            let e2 = e1 + 0.3 + 0.5 * rng.gen::<f64>();
            let d_1 = vec3(&mut rng);
            let d_2 = vec3(&mut rng);
            let atom_a = AtomModel::new(
                vec![
                    AtomLevel {
                        label: "m".into(),
                        energy: em,
                    },
                    AtomLevel {
                        label: "r".into(),
                        energy: 0.0,
                    },
                    AtomLevel {
                        label: "u".into(),
                        energy: eu,
                    },
                ],
                vec![
                    DipoleElement {
                        from: "r".into(),
                        to: "m".into(),
                        d: d_m,
                    },
                    DipoleElement {
                        from: "r".into(),
                        to: "u".into(),
                        d: d_u,
                    },
                ],
            )?;
            let atom_b = AtomModel::new(
                vec![
                    AtomLevel {
                        label: "g".into(),
                        energy: 0.0,
                    },
                    AtomLevel {
                        label: "e1".into(),
                        energy: e1,
                    },
                    AtomLevel {
                        label: "e2".into(),
                        energy: e2,
                    },
                ],
                vec![
                    DipoleElement {
                        from: "g".into(),
                        to: "e1".into(),
                        d: d_1,
                    },
                    DipoleElement {
                        from: "g".into(),
                        to: "e2".into(),
                        d: d_2,
                    },
                ],
            )?;
            let pair = PairSystem::new(atom_a, atom_b, "r", "g", false, units)?;
            let r = 0.2 * (25000.0f64).powf(rng.gen::<f64>());
            let pc = pole_term_direct(&pair, "m", r)?;

            // Raw rebuild of the bracket pieces.
            let trans_b = pair.atom_b.transitions("g")?;
            let e = em.abs();
            let mut n_tensor = [[0.0f64; 3]; 3];
            for t in &trans_b {
                let w = 1.0 / (t.energy - e) + 1.0 / (t.energy + e);
                for i in 0..3 {
                    for k in 0..3 {
                        n_tensor[i][k] += w * t.dipole[i] * t.dipole[k];
                    }
                }
            }
            let ax = [1.0, 1.0, 0.0];
            let bx = [1.0, 1.0, -2.0];
            let (mut t_aa, mut t_c, mut t_bb) = (0.0, 0.0, 0.0);
            for i in 0..3 {
                for k in 0..3 {
                    let m_ik = d_m[i] * d_m[k] * n_tensor[i][k];
                    t_aa += ax[i] * ax[k] * m_ik;
                    t_c += (ax[i] * bx[k] + bx[i] * ax[k]) * m_ik;
                    t_bb += bx[i] * bx[k] * m_ik;
                }
            }
            let x = em * r / c;
            let a_poly = t_bb - (t_c + t_bb) * x * x + t_aa * x.powi(4);
            let b_poly = t_bb - 0.5 * t_c * x * x;
            let r6 = r.powi(6);
            let (s2x, c2x) = (2.0 * x).sin_cos();
            let p_rebuilt = -(a_poly * c2x + 2.0 * x * b_poly * s2x) / r6;
            // the substitution applied to the rebuilt bracket
            let gamma_rebuilt = 2.0 * (-(a_poly * s2x + 2.0 * x * b_poly * (-c2x))) / r6;
            let scale = (a_poly.abs() + (2.0 * x * b_poly).abs()) / r6;
            worst =
                worst.max(((gamma_rebuilt - pc.gamma).abs()).max((p_rebuilt - pc.p).abs()) / scale);
        }
        Ok((
            worst,
            true,
            "20 randomized (model, separation) cases".into(),
        ))
    })
}

/// Rule-of-thumb crossover: the ratio of the oscillatory envelope to the Wick
/// term grows as the fifth power of separation across the retarded range.
fn crossover_slope() -> CheckResult {
    guarded("crossover_slope", 0.1, || {
        let pair = excited_ground_pair();
        let grid: Vec<f64> = (0..9).map(|k| 7e3 * 10f64.powf(k as f64 / 8.0)).collect();
        let report = crossover_report(&pair, Some(&grid))?;
        let slope = report
            .ratio_loglog_slope
            .ok_or_else(|| Error::InvalidInput("crossover report carries no ratio slope".into()))?;
        let crossover = report.crossover_radius;
        Ok((
            (slope - 5.0).abs(),
            crossover.is_some(),
            format!("ratio slope {slope:.4} (want 5 +- 0.1); crossover radius {crossover:?}"),
        ))
    })
}

/// The engine's Wick + residue decomposition against the raw real-axis
/// contour oracle (displacement extrapolated to zero), at two separations.
fn real_axis_oracle_decomposition() -> CheckResult {
    guarded("real_axis_oracle_decomposition", 1e-4, || {
        let pair = excited_ground_pair();
        let mut worst = 0.0f64;
        for r in [2.0, 20.0] {
            let oracle = contour_shift_direct(&pair, r, &ContourSpec::default())?;
            let engine = total_direct(&pair, r)?;
            let expected = Complex64::new(engine.total, -0.5 * engine.width);
            worst = worst.max((oracle - expected).norm() / expected.norm());
        }
        Ok((worst, true, "separations 2 and 20".into()))
    })
}

/// Time-ordered (Feynman) polarizability is even in frequency to rounding;
/// the retarded displacement demonstrably is not at finite displacement.
fn feynman_evenness() -> CheckResult {
    guarded("feynman_evenness", 1e-14, || {
        let atom = crate::fixtures::three_level_anchored();
        let omegas = [
            Complex64::new(0.07, 0.0),
            Complex64::new(0.25, 0.0),
            Complex64::new(0.0, 0.3),
            Complex64::new(0.05, 0.02),
        ];
        let mut worst = 0.0f64;
        for &omega in &omegas {
            let plus = polarizability_tensor(&atom, "n", omega, Prescription::Feynman)?;
            let minus = polarizability_tensor(&atom, "n", -omega, Prescription::Feynman)?;
            let mut scale = 0.0f64;
            let mut dev = 0.0f64;
            for i in 0..3 {
                for k in 0..3 {
                    scale = scale.max(plus.entries[i][k].norm());
                    dev = dev.max((plus.entries[i][k] - minus.entries[i][k]).norm());
                }
            }
            worst = worst.max(dev / scale);
        }
        let trans = atom.transitions("n")?;
        let rp = displaced_polarizability(&trans, 0.25, 1e-3, Prescription::Retarded)?;
        let rm = displaced_polarizability(&trans, -0.25, 1e-3, Prescription::Retarded)?;
        let mut gap = 0.0f64;
        for i in 0..3 {
            for k in 0..3 {
                gap += (rp[i][k] - rm[i][k]).norm();
            }
        }
        let retarded_breaks = gap > 1e-6;
        Ok((
            worst,
            retarded_breaks,
            format!("retarded displacement breaks evenness by {gap:.2e} at eps = 1e-3"),
        ))
    })
}

/// With both atoms of an identical pair in the same state, every mixing
/// operation must collapse onto its direct counterpart.
///
/// Value equality is exercised on the ground-state collapse (Wick term,
/// far-zone asymptote, anchored polarizability, exchange perturbation sum).
/// A same-state pair with a downward transition is intrinsically resonant —
/// each atom's downward step matches its twin's upward one — so there the
/// collapse property of the residue terms is identical resonance reporting.
fn mixing_collapse() -> CheckResult {
    guarded("mixing_collapse", 1e-12, || {
        let ground = PairSystem::new(
            ladder_atom(),
            ladder_atom(),
            "g",
            "g",
            true,
            UnitsSystem::hartree(),
        )?;
        let mut worst = 0.0f64;
        for r in [0.7, 5.0, 100.0] {
            worst = worst.max(rel(mixing_wick(&ground, r)?, wick_term_direct(&ground, r)?));
        }
        use Channel::{Direct, Mixing};
        use RangeKind::Long;
        use TermKind::Wick;
        for r in [300.0, 2000.0] {
            let m = asymptotic_shift(&ground, None, Wick, Mixing, Long, r)?;
            let d = asymptotic_shift(&ground, None, Wick, Direct, Long, r)?;
            worst = worst.max(rel(m, d));
        }
        for omega in [Complex64::new(0.11, 0.0), Complex64::new(0.0, 0.7)] {
            let plain = polarizability_tensor(&ground.atom_a, "g", omega, Prescription::Feynman)?;
            for anchor in [Anchor::SideA, Anchor::SideB] {
                let mixed = mixed_polarizability(&ground.atom_a, "g", "g", anchor, omega)?;
                let mut scale = 0.0f64;
                let mut dev = 0.0f64;
                for i in 0..3 {
                    for k in 0..3 {
                        scale = scale.max(plain.entries[i][k].norm());
                        dev = dev.max((mixed.entries[i][k] - plain.entries[i][k]).norm());
                    }
                }
                worst = worst.max(dev / scale);
            }
        }
        worst = worst.max(rel(exchange_vdw(&ground)?, brute_force_vdw(&ground)?));

        let excited = PairSystem::new(
            ladder_atom(),
            ladder_atom(),
            "w",
            "w",
            true,
            UnitsSystem::hartree(),
        )?;
        let direct_err = pole_term_direct(&excited, "u", 5.0);
        let mixing_err = mixing_pole(&excited, "u", 5.0);
        let consistent_resonance = matches!(
            (&direct_err, &mixing_err),
            (
                Err(Error::Resonance { lower: dl, other: dn }),
                Err(Error::Resonance { lower: ml, other: mo }),
            ) if dl == ml && dn == mo
        );
        Ok((
            worst,
            consistent_resonance,
            "ground-state collapse values equal; excited same-state collapse reports the same resonance on both channels".into(),
        ))
    })
}

/// Run the whole suite in criterion order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        contour_identity_upward(),
        contour_identity_signed(),
        propagator_contraction_closed_form(),
        short_range_vdw_restoration(),
        lower_state_short_range_shares(),
        casimir_polder_coefficient(),
        long_range_pole_envelope(),
        width_substitution_rule(),
        crossover_slope(),
        real_axis_oracle_decomposition(),
        feynman_evenness(),
        mixing_collapse(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_full_suite_passes() {
        let results = run_all();
        assert_eq!(results.len(), 12);
        for r in &results {
            assert!(
                r.passed,
                "{}: measured {} vs threshold {} ({})",
                r.name, r.measured, r.threshold, r.detail
            );
        }
    }
}
