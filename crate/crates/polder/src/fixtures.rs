//! Small closed-shell model atoms with hand-checkable responses, used by
//! the built-in validation suite, the tests, and the bundled examples.
//!
//! All energies are in hartree and all dipoles in `e*a0`; every derived
//! number quoted in the test suite (static polarizabilities, dispersion
//! coefficients, crossover radii) follows from these inputs alone.

use crate::model::{AtomLevel, AtomModel, DipoleElement, PairSystem, UnitsSystem};

fn level(label: &str, energy: f64) -> AtomLevel {
    AtomLevel {
        label: label.to_string(),
        energy,
    }
}

fn dip(from: &str, to: &str, d: [f64; 3]) -> DipoleElement {
    DipoleElement {
        from: from.to_string(),
        to: to.to_string(),
        d,
    }
}

/// Isotropic two-level atom: ground state `g` and three degenerate excited
/// sublevels `ex`, `ey`, `ez` at 0.5 hartree with unit axis dipoles.
///
/// Static polarizability `4 I`; scalar polarizability at `i*1` is 0.8.
pub fn two_level_isotropic() -> AtomModel {
    AtomModel::new(
        vec![
            level("g", 0.0),
            level("ex", 0.5),
            level("ey", 0.5),
            level("ez", 0.5),
        ],
        vec![
            dip("g", "ex", [1.0, 0.0, 0.0]),
            dip("g", "ey", [0.0, 1.0, 0.0]),
            dip("g", "ez", [0.0, 0.0, 1.0]),
        ],
    )
    .expect("fixture atom is valid")
}

/// Anisotropic three-level atom with an excited reference: `n` at 0.0 sits
/// above `m` at -0.1 and below `v` at 0.4, with skew dipoles so that no
/// rotational symmetry hides index mistakes.
pub fn three_level_anchored() -> AtomModel {
    AtomModel::new(
        vec![level("m", -0.1), level("n", 0.0), level("v", 0.4)],
        vec![
            dip("n", "m", [0.4, 0.0, 0.3]),
            dip("n", "v", [0.1, 0.5, -0.2]),
        ],
    )
    .expect("fixture atom is valid")
}

/// Isotropic variant of [`three_level_anchored`]: the reference `n` couples
/// down to three degenerate sublevels at -0.1 and up to three at 0.4, each
/// triad carrying axis dipoles of one magnitude.
pub fn three_level_isotropic() -> AtomModel {
    AtomModel::new(
        vec![
            level("mx", -0.1),
            level("my", -0.1),
            level("mz", -0.1),
            level("n", 0.0),
            level("vx", 0.4),
            level("vy", 0.4),
            level("vz", 0.4),
        ],
        vec![
            dip("n", "mx", [0.3, 0.0, 0.0]),
            dip("n", "my", [0.0, 0.3, 0.0]),
            dip("n", "mz", [0.0, 0.0, 0.3]),
            dip("n", "vx", [0.5, 0.0, 0.0]),
            dip("n", "vy", [0.0, 0.5, 0.0]),
            dip("n", "vz", [0.0, 0.0, 0.5]),
        ],
    )
    .expect("fixture atom is valid")
}

/// Four-level ladder `g - u - w` (0.0, 0.3, 0.8 hartree) whose middle rung
/// couples to both ends, giving an identical pair prepared in `w` and `g`
/// a nontrivial mixing channel through the single shared state `u`.
pub fn ladder_atom() -> AtomModel {
    AtomModel::new(
        vec![level("g", 0.0), level("u", 0.3), level("w", 0.8)],
        vec![
            dip("g", "u", [0.5, 0.1, 0.2]),
            dip("u", "w", [-0.2, 0.4, 0.1]),
        ],
    )
    .expect("fixture atom is valid")
}

/// Two ground-state isotropic two-level atoms: the textbook dispersion
/// pair. `C6 = 6`, `C7 = 92 c / pi`.
pub fn ground_ground_pair() -> PairSystem {
    PairSystem::new(
        two_level_isotropic(),
        two_level_isotropic(),
        "g",
        "g",
        false,
        UnitsSystem::hartree(),
    )
    .expect("fixture pair is valid")
}

/// Excited anisotropic atom against a ground-state isotropic one: the
/// smallest pair with a downward transition, hence with pole terms.
pub fn excited_ground_pair() -> PairSystem {
    PairSystem::new(
        three_level_anchored(),
        two_level_isotropic(),
        "n",
        "g",
        false,
        UnitsSystem::hartree(),
    )
    .expect("fixture pair is valid")
}

/// Identical ladder atoms prepared in `w` and `g`: the pair exchanges its
/// excitation through the shared middle state, so the mixing channel is
/// active with a single downward mixing transition on the excited side.
pub fn mixing_pair() -> PairSystem {
    PairSystem::new(
        ladder_atom(),
        ladder_atom(),
        "w",
        "g",
        true,
        UnitsSystem::hartree(),
    )
    .expect("fixture pair is valid")
}
