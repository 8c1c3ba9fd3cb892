//! Atom and pair data model: levels, dipole couplings, reference states.
//!
//! Everything is expressed in Hartree atomic units: `hbar = e = 4*pi*eps0 = 1`,
//! energies in hartree, lengths in bohr, dipole moments in `e*a0`. The speed
//! of light is the only tunable constant of the unit system.

use crate::error::{Error, Result};

/// Default speed of light in atomic units (inverse fine-structure constant).
pub const SPEED_OF_LIGHT_DEFAULT: f64 = 137.035999;

/// Physical constants fixing the unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitsSystem {
    /// Reduced Planck constant; 1 in atomic units.
    pub hbar: f64,
    /// Elementary charge; 1 in atomic units.
    pub e_charge: f64,
    /// Coulomb factor `4*pi*eps0`; 1 in atomic units.
    pub four_pi_eps0: f64,
    /// Speed of light in atomic units.
    pub c: f64,
}

impl UnitsSystem {
    /// Hartree atomic units with the default speed of light.
    pub fn hartree() -> Self {
        UnitsSystem {
            hbar: 1.0,
            e_charge: 1.0,
            four_pi_eps0: 1.0,
            c: SPEED_OF_LIGHT_DEFAULT,
        }
    }

    /// Hartree atomic units with an overridden speed of light.
    ///
    /// Scaling `c` is the standard trick for moving the retardation
    /// crossover into a numerically convenient window.
    pub fn with_speed_of_light(c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "speed of light must be finite and positive, got {c}"
            )));
        }
        Ok(UnitsSystem {
            c,
            ..UnitsSystem::hartree()
        })
    }

    /// Vacuum permittivity `eps0 = 1/(4*pi)` in atomic units.
    pub fn vacuum_permittivity(&self) -> f64 {
        self.four_pi_eps0 / (4.0 * std::f64::consts::PI)
    }

    /// Fine-structure constant `1/c`.
    pub fn fine_structure(&self) -> f64 {
        1.0 / self.c
    }
}

impl Default for UnitsSystem {
    fn default() -> Self {
        UnitsSystem::hartree()
    }
}

/// One energy eigenstate of a model atom.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomLevel {
    pub label: String,
    /// Energy in hartree relative to an arbitrary common origin.
    pub energy: f64,
}

/// A real electric-dipole matrix element connecting two levels.
///
/// Matrix elements are taken real, so orientation does not matter:
/// `d(from, to) = d(to, from)`. Each unordered level pair may carry at most
/// one element.
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleElement {
    pub from: String,
    pub to: String,
    /// Cartesian components in `e*a0`.
    pub d: [f64; 3],
}

/// A virtual transition out of a chosen reference state.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    /// Label of the virtual level.
    pub label: String,
    /// Transition energy `E_v - E_ref`; never exactly zero.
    pub energy: f64,
    /// Dipole matrix element between reference and virtual level.
    pub dipole: [f64; 3],
}

/// Transitions sharing one energy within a tolerance, with their summed
/// projector dyadic `Sum_v d_i d_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualGroup {
    /// Representative energy (mean over members).
    pub energy: f64,
    /// Member labels, sorted.
    pub labels: Vec<String>,
    /// `Sum_v d (x) d` over group members.
    pub dyadic: [[f64; 3]; 3],
}

/// A validated atom: unique labels, resolvable couplings, finite data.
///
/// Fields are read through accessors; construction via [`AtomModel::new`]
/// enforces every structural invariant the evaluation code relies on.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    levels: Vec<AtomLevel>,
    dipoles: Vec<DipoleElement>,
}

impl AtomModel {
    /// Build and validate an atom model.
    ///
    /// Rejected: empty or duplicate labels, non-finite energies or dipole
    /// components, couplings that do not resolve to declared levels,
    /// self-couplings, and duplicate couplings of the same unordered pair.
    pub fn new(levels: Vec<AtomLevel>, dipoles: Vec<DipoleElement>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidInput("atom has no levels".into()));
        }
        for lvl in &levels {
            if lvl.label.is_empty() {
                return Err(Error::InvalidInput("empty level label".into()));
            }
            if !lvl.energy.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "level `{}` has non-finite energy",
                    lvl.label
                )));
            }
        }
        for (i, a) in levels.iter().enumerate() {
            if levels[i + 1..].iter().any(|b| b.label == a.label) {
                return Err(Error::InvalidInput(format!(
                    "duplicate level label `{}`",
                    a.label
                )));
            }
        }
        let resolve = |label: &str| -> Result<()> {
            if levels.iter().any(|l| l.label == label) {
                Ok(())
            } else {
                Err(Error::UnknownLevel {
                    label: label.to_string(),
                })
            }
        };
        for el in &dipoles {
            resolve(&el.from)?;
            resolve(&el.to)?;
            if el.from == el.to {
                return Err(Error::InvalidInput(format!(
                    "dipole element couples `{}` to itself",
                    el.from
                )));
            }
            if el.d.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "dipole element ({}, {}) has non-finite components",
                    el.from, el.to
                )));
            }
        }
        for (i, a) in dipoles.iter().enumerate() {
            if dipoles[i + 1..]
                .iter()
                .any(|b| (b.from == a.from && b.to == a.to) || (b.from == a.to && b.to == a.from))
            {
                return Err(Error::InvalidInput(format!(
                    "duplicate dipole element for pair ({}, {})",
                    a.from, a.to
                )));
            }
        }
        Ok(AtomModel { levels, dipoles })
    }

    pub fn levels(&self) -> &[AtomLevel] {
        &self.levels
    }

    pub fn dipoles(&self) -> &[DipoleElement] {
        &self.dipoles
    }

    /// Look up a level by label.
    pub fn level(&self, label: &str) -> Option<&AtomLevel> {
        self.levels.iter().find(|l| l.label == label)
    }

    fn level_or_err(&self, label: &str) -> Result<&AtomLevel> {
        self.level(label).ok_or_else(|| Error::UnknownLevel {
            label: label.to_string(),
        })
    }

    /// All virtual transitions out of `reference`: every level coupled to it
    /// by a dipole element, with signed transition energy `E_v - E_ref`.
    ///
    /// Sorted by energy, then label. A coupled level with exactly the
    /// reference energy is rejected, since a vanishing transition frequency
    /// makes every downstream response function ill-defined.
    pub fn transitions(&self, reference: &str) -> Result<Vec<Transition>> {
        let rf = self.level_or_err(reference)?;
        let mut out = Vec::new();
        for el in &self.dipoles {
            let other = if el.from == reference {
                Some(&el.to)
            } else if el.to == reference {
                Some(&el.from)
            } else {
                None
            };
            let Some(other) = other else { continue };
            let lvl = self.level_or_err(other)?;
            let energy = lvl.energy - rf.energy;
            if energy == 0.0 {
                return Err(Error::DegenerateWithReference {
                    label: other.clone(),
                });
            }
            out.push(Transition {
                label: other.clone(),
                energy,
                dipole: el.d,
            });
        }
        out.sort_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .unwrap()
                .then_with(|| a.label.cmp(&b.label))
        });
        Ok(out)
    }

    /// Transitions that go *down* in energy from `reference` (`E_v < E_ref`),
    /// sorted by energy then label. Empty when the reference is the lowest
    /// coupled state.
    pub fn lower_virtual_states(&self, reference: &str) -> Result<Vec<Transition>> {
        Ok(self
            .transitions(reference)?
            .into_iter()
            .filter(|t| t.energy < 0.0)
            .collect())
    }

    /// Partition the transitions out of `reference` into groups of equal
    /// energy within `tol`, each with its summed projector dyadic.
    ///
    /// Grouping is chain-based on the energy-sorted list: a gap larger than
    /// `tol` between consecutive transitions starts a new group. `tol = 0`
    /// still merges exactly equal energies.
    pub fn degenerate_energy_groups(&self, reference: &str, tol: f64) -> Result<Vec<VirtualGroup>> {
        if !tol.is_finite() || tol < 0.0 {
            return Err(Error::InvalidInput(format!(
                "degeneracy tolerance must be finite and non-negative, got {tol}"
            )));
        }
        let trans = self.transitions(reference)?;
        let mut groups: Vec<Vec<&Transition>> = Vec::new();
        for t in &trans {
            match groups.last_mut() {
                Some(g) if (t.energy - g.last().unwrap().energy).abs() <= tol => g.push(t),
                _ => groups.push(vec![t]),
            }
        }
        Ok(groups
            .into_iter()
            .map(|g| {
                let mut dyadic = [[0.0f64; 3]; 3];
                let mut labels = Vec::with_capacity(g.len());
                let mut esum = 0.0;
                for t in &g {
                    for i in 0..3 {
                        for k in 0..3 {
                            dyadic[i][k] += t.dipole[i] * t.dipole[k];
                        }
                    }
                    labels.push(t.label.clone());
                    esum += t.energy;
                }
                labels.sort();
                VirtualGroup {
                    energy: esum / g.len() as f64,
                    labels,
                    dyadic,
                }
            })
            .collect())
    }
}

/// Two atoms held at a fixed separation, with chosen reference states.
///
/// Geometry does not enter here; energy calculations put the interatomic
/// axis along +z. The `identical` flag marks exchange-degenerate pairs, for
/// which the mixing channel exists; it requires structurally equal atom
/// data, while the two reference states may differ.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSystem {
    pub atom_a: AtomModel,
    pub atom_b: AtomModel,
    pub reference_a: String,
    pub reference_b: String,
    pub identical: bool,
    pub units: UnitsSystem,
}

impl PairSystem {
    pub fn new(
        atom_a: AtomModel,
        atom_b: AtomModel,
        reference_a: &str,
        reference_b: &str,
        identical: bool,
        units: UnitsSystem,
    ) -> Result<Self> {
        atom_a.level_or_err(reference_a)?;
        atom_b.level_or_err(reference_b)?;
        if identical && atom_a != atom_b {
            return Err(Error::InvalidInput(
                "pair flagged identical but atom data differ".into(),
            ));
        }
        Ok(PairSystem {
            atom_a,
            atom_b,
            reference_a: reference_a.to_string(),
            reference_b: reference_b.to_string(),
            identical,
            units,
        })
    }

    /// The same pair with the roles of A and B exchanged.
    pub fn swapped(&self) -> PairSystem {
        PairSystem {
            atom_a: self.atom_b.clone(),
            atom_b: self.atom_a.clone(),
            reference_a: self.reference_b.clone(),
            reference_b: self.reference_a.clone(),
            identical: self.identical,
            units: self.units,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn rejects_duplicate_labels() {
        let err = AtomModel::new(vec![lvl("g", 0.0), lvl("g", 1.0)], vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn rejects_unresolved_coupling() {
        let err =
            AtomModel::new(vec![lvl("g", 0.0)], vec![dip("g", "x", [1.0, 0.0, 0.0])]).unwrap_err();
        assert!(matches!(err, Error::UnknownLevel { .. }));
    }

    #[test]
    fn rejects_self_coupling_and_duplicates() {
        let err = AtomModel::new(
            vec![lvl("g", 0.0), lvl("e", 1.0)],
            vec![dip("g", "g", [1.0, 0.0, 0.0])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));

        let err = AtomModel::new(
            vec![lvl("g", 0.0), lvl("e", 1.0)],
            vec![
                dip("g", "e", [1.0, 0.0, 0.0]),
                dip("e", "g", [0.0, 1.0, 0.0]),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn transitions_are_signed_and_sorted() {
        let atom = three_level();
        let ts = atom.transitions("n").unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[0].label, "m");
        assert!((ts[0].energy - (-0.1)).abs() < 1e-15);
        assert_eq!(ts[1].label, "v");
        assert!((ts[1].energy - 0.4).abs() < 1e-15);
    }

    #[test]
    fn transition_orientation_is_symmetric() {
        let atom = three_level();
        // "m" sees the (n, m) element with the same vector.
        let ts = atom.transitions("m").unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].label, "n");
        assert!((ts[0].energy - 0.1).abs() < 1e-15);
        assert_eq!(ts[0].dipole, [0.4, 0.0, 0.3]);
    }

    #[test]
    fn zero_transition_energy_is_rejected() {
        let atom = AtomModel::new(
            vec![lvl("a", 0.3), lvl("b", 0.3)],
            vec![dip("a", "b", [1.0, 0.0, 0.0])],
        )
        .unwrap();
        let err = atom.transitions("a").unwrap_err();
        assert!(matches!(err, Error::DegenerateWithReference { label } if label == "b"));
    }

    #[test]
    fn lower_states_filter() {
        let atom = three_level();
        let lows = atom.lower_virtual_states("n").unwrap();
        assert_eq!(lows.len(), 1);
        assert_eq!(lows[0].label, "m");
        assert!(atom.lower_virtual_states("m").unwrap().is_empty());
    }

    #[test]
    fn grouping_merges_axis_triplet() {
        let atom = AtomModel::new(
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
        .unwrap();
        let groups = atom.degenerate_energy_groups("g", 1e-12).unwrap();
        assert_eq!(groups.len(), 1);
        assert!((groups[0].energy - 0.5).abs() < 1e-15);
        assert_eq!(groups[0].labels, vec!["ex", "ey", "ez"]);
        for i in 0..3 {
            for k in 0..3 {
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((groups[0].dyadic[i][k] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn grouping_splits_on_gap() {
        let atom = three_level();
        let groups = atom.degenerate_energy_groups("n", 1e-12).unwrap();
        assert_eq!(groups.len(), 2);
        assert!(groups[0].energy < 0.0 && groups[1].energy > 0.0);
    }

    #[test]
    fn identical_pair_requires_equal_atoms() {
        let a = three_level();
        let b = AtomModel::new(vec![lvl("g", 0.0)], vec![]).unwrap();
        let err = PairSystem::new(a.clone(), b, "n", "g", true, UnitsSystem::hartree());
        assert!(err.is_err());
        let ok = PairSystem::new(a.clone(), a, "n", "m", true, UnitsSystem::hartree());
        assert!(ok.is_ok());
    }

    #[test]
    fn units_validation() {
        assert!(UnitsSystem::with_speed_of_light(-1.0).is_err());
        assert!(UnitsSystem::with_speed_of_light(f64::NAN).is_err());
        let u = UnitsSystem::hartree();
        assert!((u.vacuum_permittivity() - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-18);
    }
}
