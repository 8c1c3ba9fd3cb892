//! Residue (pole) terms: the oscillatory contributions picked up when the
//! frequency contour is rotated past the poles that downward transitions
//! put in the first quadrant, one closed-form term per degenerate group.

use super::{check_separation, triple_complex, Triple};
use crate::error::{Error, Result};
use crate::geometry::{mat_to_complex, CMat3};
use crate::model::{PairSystem, VirtualGroup};
use crate::polarizability::{
    mixed_from_transitions, mixed_transitions, tensor_from_transitions, Anchor, MixedTransition,
};
use num_complex::Complex64;

/// Which atom's downward transition produced a pole term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// One residue term. `q` is the full complex value; its real part `p`
/// shifts the level and `gamma = -2 Im q` is the induced width, so
/// `q = p - i gamma / 2` holds identically.
#[derive(Debug, Clone)]
pub struct PoleContribution {
    /// Degenerate-group label: member labels joined with `+`.
    pub state_label: String,
    pub side: Side,
    /// Signed group transition energy (negative: downward).
    pub energy: f64,
    pub q: Complex64,
    pub p: f64,
    pub gamma: f64,
    /// Mixing terms only: relative gap to the variant that evaluates the
    /// partner tensor at the reflected argument (the transposed tensor).
    /// The two readings disagree in general; the implemented one is fixed
    /// by the close-range match to degenerate perturbation theory.
    pub reflected_argument_gap: Option<f64>,
}

/// Oscillatory bracket shared by the real shift and the width: the width
/// is the same bracket under `(cos, sin) -> (sin, -cos)`, doubled.
fn pole_bracket(a: f64, b: f64, x: f64, c2x: f64, s2x: f64) -> f64 {
    -(a * c2x + 2.0 * x * b * s2x)
}

/// Closed-form residue term at `x = E_m R / c` (negative for downward
/// transitions) built from the dyadic contraction triple:
/// `Q = -(1/R^6) e^{-2ix} (A + 2ixB)` with
/// `A = T_bb - (T_cross + T_bb) x^2 + T_aa x^4` and
/// `B = T_bb - (T_cross / 2) x^2`.
fn pole_closed(x: f64, t: &Triple, r: f64) -> (Complex64, f64, f64) {
    let x2 = x * x;
    let a_c = t.bb - (t.cross + t.bb) * x2 + t.aa * x2 * x2;
    let b_c = t.bb - 0.5 * t.cross * x2;
    debug_assert!(a_c.im.abs() <= 1e-10 * a_c.re.abs().max(1e-300));
    debug_assert!(b_c.im.abs() <= 1e-10 * b_c.re.abs().max(1e-300));
    let (a, b) = (a_c.re, b_c.re);
    let r6 = r.powi(6);
    let q = -(Complex64::new(0.0, -2.0 * x).exp()) * Complex64::new(a, 2.0 * x * b) / r6;
    let (s2x, c2x) = (2.0 * x).sin_cos();
    let p = pole_bracket(a, b, x, c2x, s2x) / r6;
    let gamma = 2.0 * pole_bracket(a, b, x, s2x, -c2x) / r6;
    (q, p, gamma)
}

fn joined_label(g: &VirtualGroup) -> String {
    g.labels.join("+")
}

/// The degenerate downward group of atom A containing `m_label`.
pub(crate) fn lower_group_of(pair: &PairSystem, m_label: &str) -> Result<VirtualGroup> {
    let groups = pair
        .atom_a
        .degenerate_energy_groups(&pair.reference_a, super::DEGENERACY_TOL)?;
    for g in groups {
        if g.labels.iter().any(|l| l == m_label) {
            if g.energy >= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "level `{m_label}` is not a downward transition from `{}`",
                    pair.reference_a
                )));
            }
            return Ok(g);
        }
    }
    if pair.atom_a.level(m_label).is_none() {
        return Err(Error::UnknownLevel {
            label: m_label.to_string(),
        });
    }
    Err(Error::InvalidInput(format!(
        "level `{m_label}` is not dipole-coupled to reference `{}`",
        pair.reference_a
    )))
}

/// Partner-atom tensor at the pole frequency, with an exact denominator
/// hit reported as resonant energy transfer.
fn partner_tensor_direct(pair: &PairSystem, group_label: &str, omega0: f64) -> Result<CMat3> {
    let trans_b = pair.atom_b.transitions(&pair.reference_b)?;
    tensor_from_transitions(&trans_b, Complex64::new(omega0, 0.0)).map_err(|e| match e {
        Error::PoleHit { label, .. } => Error::Resonance {
            lower: group_label.to_string(),
            other: label,
        },
        other => other,
    })
}

/// Residue dyadic and partner tensor, contracted: the triple every direct
/// pole formula (full and asymptotic) is built from.
fn direct_triple(pair: &PairSystem, g: &VirtualGroup) -> Result<Triple> {
    let n = partner_tensor_direct(pair, &joined_label(g), -g.energy)?;
    Ok(triple_complex(&mat_to_complex(&g.dyadic), &n))
}

/// Signed group energy and contraction triple for the downward group of
/// atom A containing `m_label`.
pub(crate) fn direct_residue_parts(pair: &PairSystem, m_label: &str) -> Result<(f64, Triple)> {
    let g = lower_group_of(pair, m_label)?;
    let t = direct_triple(pair, &g)?;
    Ok((g.energy, t))
}

fn direct_pole_from_group(pair: &PairSystem, g: &VirtualGroup, r: f64) -> Result<PoleContribution> {
    let t = direct_triple(pair, g)?;
    let x = g.energy * r / pair.units.c;
    let (q, p, gamma) = pole_closed(x, &t, r);
    Ok(PoleContribution {
        state_label: joined_label(g),
        side: Side::A,
        energy: g.energy,
        q,
        p,
        gamma,
        reflected_argument_gap: None,
    })
}

/// Direct-channel residue term for the downward group of atom A containing
/// `m_label`, at separation `r`.
pub fn pole_term_direct(pair: &PairSystem, m_label: &str, r: f64) -> Result<PoleContribution> {
    check_separation(r)?;
    let g = lower_group_of(pair, m_label)?;
    direct_pole_from_group(pair, &g, r)
}

fn downward_groups(pair: &PairSystem) -> Result<Vec<VirtualGroup>> {
    Ok(pair
        .atom_a
        .degenerate_energy_groups(&pair.reference_a, super::DEGENERACY_TOL)?
        .into_iter()
        .filter(|g| g.energy < 0.0)
        .collect())
}

/// All direct-channel residue terms contributed by one side's downward
/// groups. Side B is evaluated by exchanging the roles of the two atoms,
/// which the symmetry of the contraction makes exact.
pub(crate) fn direct_pole_contributions(
    pair: &PairSystem,
    side: Side,
    r: f64,
) -> Result<Vec<PoleContribution>> {
    let work = match side {
        Side::A => pair.clone(),
        Side::B => pair.swapped(),
    };
    let mut out = Vec::new();
    for g in downward_groups(&work)? {
        let mut c = direct_pole_from_group(&work, &g, r)?;
        c.side = side;
        out.push(c);
    }
    Ok(out)
}

/// Per-group oscillation data for the regime report: group label, signed
/// group energy, and the transverse contraction at the pole frequency.
pub(crate) fn direct_envelopes(pair: &PairSystem, side: Side) -> Result<Vec<(String, f64, f64)>> {
    let work = match side {
        Side::A => pair.clone(),
        Side::B => pair.swapped(),
    };
    let mut out = Vec::new();
    for g in downward_groups(&work)? {
        let t = direct_triple(&work, &g)?;
        out.push((joined_label(&g), g.energy, t.aa.re));
    }
    Ok(out)
}

/// Mixing-channel ingredients for the downward (anchor-A) group containing
/// `m_label` within a transition list.
fn mixing_group<'a>(
    mt: &'a [MixedTransition],
    m_label: &str,
    reference: &str,
) -> Result<(Vec<&'a MixedTransition>, f64)> {
    let mut lows: Vec<&MixedTransition> = mt.iter().filter(|t| t.energy_a < 0.0).collect();
    lows.sort_by(|a, b| a.energy_a.partial_cmp(&b.energy_a).unwrap());
    let mut group: Vec<&MixedTransition> = Vec::new();
    for t in lows {
        match group.last() {
            Some(prev) if (t.energy_a - prev.energy_a).abs() <= super::DEGENERACY_TOL => {
                group.push(t)
            }
            Some(_) if group.iter().any(|g| g.label == m_label) => break,
            _ => group = vec![t],
        }
    }
    if !group.iter().any(|g| g.label == m_label) {
        return Err(Error::InvalidInput(format!(
            "level `{m_label}` is not a downward mixing transition from `{reference}`"
        )));
    }
    let energy = group.iter().map(|t| t.energy_a).sum::<f64>() / group.len() as f64;
    Ok((group, energy))
}

/// Residue numerator (sum of `b (x) a` over the group (the `+omega`
/// denominators of the anchor-A tensor carry the first-quadrant poles),
/// partner tensor at the positive pole frequency, and the group label.
fn mixing_m_n(
    mt: &[MixedTransition],
    group: &[&MixedTransition],
    energy: f64,
) -> Result<(CMat3, CMat3, String)> {
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for t in group {
        for i in 0..3 {
            for k in 0..3 {
                m[i][k] += t.dipole_b[i] * t.dipole_a[k];
            }
        }
    }
    let label = {
        let mut ls: Vec<&str> = group.iter().map(|t| t.label.as_str()).collect();
        ls.sort_unstable();
        ls.join("+")
    };
    let omega0 = -energy;
    let n = mixed_from_transitions(mt, Anchor::SideB, Complex64::new(omega0, 0.0)).map_err(
        |e| match e {
            Error::PoleHit { label: other, .. } => Error::Resonance {
                lower: label.clone(),
                other,
            },
            other => other,
        },
    )?;
    Ok((m, n, label))
}

fn mixing_pole_from_group(
    mt: &[MixedTransition],
    group: &[&MixedTransition],
    energy: f64,
    r: f64,
    c: f64,
) -> Result<PoleContribution> {
    let (m, n, label) = mixing_m_n(mt, group, energy)?;
    let t = triple_complex(&m, &n);
    let x = energy * r / c;
    let (q, p, gamma) = pole_closed(x, &t, r);
    // The reflected-argument reading evaluates the partner tensor at the
    // negated pole frequency, i.e. its transpose.
    let mut nt = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            nt[i][k] = n[k][i];
        }
    }
    let (_, p_alt, _) = pole_closed(x, &triple_complex(&m, &nt), r);
    let gap = (p - p_alt).abs() / p.abs().max(p_alt.abs()).max(f64::MIN_POSITIVE);
    Ok(PoleContribution {
        state_label: label,
        side: Side::A,
        energy,
        q,
        p,
        gamma,
        reflected_argument_gap: Some(gap),
    })
}

/// Signed group energy and contraction triple for the downward mixing
/// group containing `m_label`.
pub(crate) fn mixing_residue_parts(pair: &PairSystem, m_label: &str) -> Result<(f64, Triple)> {
    if !pair.identical {
        return Err(Error::NotIdentical);
    }
    if pair.atom_a.level(m_label).is_none() {
        return Err(Error::UnknownLevel {
            label: m_label.to_string(),
        });
    }
    let mt = mixed_transitions(&pair.atom_a, &pair.reference_a, &pair.reference_b)?;
    let (group, energy) = mixing_group(&mt, m_label, &pair.reference_a)?;
    let (m, n, _) = mixing_m_n(&mt, &group, energy)?;
    Ok((energy, triple_complex(&m, &n)))
}

/// Mixing-channel residue term of an identical pair for the downward group
/// containing `m_label` (downward with respect to reference A).
pub fn mixing_pole(pair: &PairSystem, m_label: &str, r: f64) -> Result<PoleContribution> {
    check_separation(r)?;
    if !pair.identical {
        return Err(Error::NotIdentical);
    }
    if pair.atom_a.level(m_label).is_none() {
        return Err(Error::UnknownLevel {
            label: m_label.to_string(),
        });
    }
    let mt = mixed_transitions(&pair.atom_a, &pair.reference_a, &pair.reference_b)?;
    let (group, energy) = mixing_group(&mt, m_label, &pair.reference_a)?;
    mixing_pole_from_group(&mt, &group, energy, r, pair.units.c)
}

/// All mixing-channel residue terms contributed by one side's downward
/// mixing groups.
pub(crate) fn mixing_pole_contributions(
    pair: &PairSystem,
    side: Side,
    r: f64,
) -> Result<Vec<PoleContribution>> {
    if !pair.identical {
        return Err(Error::NotIdentical);
    }
    let work = match side {
        Side::A => pair.clone(),
        Side::B => pair.swapped(),
    };
    let mt = mixed_transitions(&work.atom_a, &work.reference_a, &work.reference_b)?;
    let mut lows: Vec<&MixedTransition> = mt.iter().filter(|t| t.energy_a < 0.0).collect();
    lows.sort_by(|a, b| {
        a.energy_a
            .partial_cmp(&b.energy_a)
            .unwrap()
            .then_with(|| a.label.cmp(&b.label))
    });
    let mut groups: Vec<Vec<&MixedTransition>> = Vec::new();
    for t in lows {
        match groups.last_mut() {
            Some(g) if (t.energy_a - g.last().unwrap().energy_a).abs() <= super::DEGENERACY_TOL => {
                g.push(t)
            }
            _ => groups.push(vec![t]),
        }
    }
    let mut out = Vec::new();
    for g in &groups {
        let energy = g.iter().map(|t| t.energy_a).sum::<f64>() / g.len() as f64;
        let mut c = mixing_pole_from_group(&mt, g, energy, r, work.units.c)?;
        c.side = side;
        out.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures::{
        excited_ground_pair, ground_ground_pair, mixing_pair, three_level_anchored,
        three_level_isotropic, two_level_isotropic,
    };
    use crate::model::{AtomLevel, AtomModel, DipoleElement, PairSystem, UnitsSystem};

    #[test]
    fn residue_value_ties_shift_and_width_together() {
        let pair = excited_ground_pair();
        for r in [0.5, 20.0, 3000.0] {
            let p = pole_term_direct(&pair, "m", r).unwrap();
            let scale = p.q.norm().max(1e-300);
            assert!((p.q.re - p.p).abs() <= 1e-12 * scale);
            assert!((p.q.im + 0.5 * p.gamma).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn ground_pair_has_no_pole_terms() {
        let pair = ground_ground_pair();
        assert!(direct_pole_contributions(&pair, Side::A, 1.0)
            .unwrap()
            .is_empty());
        assert!(direct_pole_contributions(&pair, Side::B, 1.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn side_b_terms_equal_the_swapped_side_a_terms() {
        let reversed = excited_ground_pair().swapped();
        assert!(direct_pole_contributions(&reversed, Side::A, 7.0)
            .unwrap()
            .is_empty());
        let b = direct_pole_contributions(&reversed, Side::B, 7.0).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].side, Side::B);
        let a = pole_term_direct(&excited_ground_pair(), "m", 7.0).unwrap();
        assert_eq!(b[0].p, a.p);
        assert_eq!(b[0].gamma, a.gamma);
    }

    #[test]
    fn degenerate_lower_sublevels_form_one_labeled_group() {
        let pair = PairSystem::new(
            three_level_isotropic(),
            two_level_isotropic(),
            "n",
            "g",
            false,
            UnitsSystem::hartree(),
        )
        .unwrap();
        let p = pole_term_direct(&pair, "my", 2.0).unwrap();
        assert_eq!(p.state_label, "mx+my+mz");
        assert!((p.energy + 0.1).abs() < 1e-15);
    }

    #[test]
    fn unknown_and_upward_labels_are_rejected() {
        let pair = excited_ground_pair();
        assert!(matches!(
            pole_term_direct(&pair, "nope", 1.0),
            Err(Error::UnknownLevel { .. })
        ));
        assert!(matches!(
            pole_term_direct(&pair, "v", 1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn resonant_partner_transition_is_reported() {
        // The partner has a transition at exactly the pole frequency 0.1.
        let partner = AtomModel::new(
            vec![
                AtomLevel {
                    label: "g".into(),
                    energy: 0.0,
                },
                AtomLevel {
                    label: "e".into(),
                    energy: 0.1,
                },
            ],
            vec![DipoleElement {
                from: "g".into(),
                to: "e".into(),
                d: [0.0, 0.0, 1.0],
            }],
        )
        .unwrap();
        let pair = PairSystem::new(
            three_level_anchored(),
            partner,
            "n",
            "g",
            false,
            UnitsSystem::hartree(),
        )
        .unwrap();
        match pole_term_direct(&pair, "m", 1.0) {
            Err(Error::Resonance { lower, other }) => {
                assert_eq!(lower, "m");
                assert_eq!(other, "e");
            }
            other => panic!("expected a resonance error, got {other:?}"),
        }
    }

    #[test]
    fn mixing_pole_is_carried_by_the_excited_side() {
        let pair = mixing_pair();
        let p = mixing_pole(&pair, "u", 4.0).unwrap();
        assert_eq!(p.state_label, "u");
        assert!((p.energy + 0.5).abs() < 1e-15);
        assert!(p.p.is_finite() && p.gamma.is_finite());
        // The partner tensor is genuinely asymmetric here, so the two
        // argument readings disagree and the gap is meaningful.
        assert!(p.reflected_argument_gap.unwrap() > 1e-3);
        let a = mixing_pole_contributions(&pair, Side::A, 4.0).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].p, p.p);
        let b = mixing_pole_contributions(&pair, Side::B, 4.0).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn mixing_pole_requires_an_identical_pair() {
        let pair = excited_ground_pair();
        assert!(matches!(
            mixing_pole(&pair, "m", 1.0),
            Err(Error::NotIdentical)
        ));
    }
}
