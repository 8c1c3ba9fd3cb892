//! Interaction geometry: projection dyadics, the retarded photon propagator
//! in temporal gauge, and the rank-four contractions the energy formulas
//! are built from.

use crate::error::{Error, Result};
use crate::model::UnitsSystem;
use num_complex::Complex64;

/// Real 3x3 tensor.
pub type Mat3 = [[f64; 3]; 3];
/// Complex 3x3 tensor.
pub type CMat3 = [[Complex64; 3]; 3];

/// Outer product `a (x) b`.
pub fn outer(a: [f64; 3], b: [f64; 3]) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            m[i][k] = a[i] * b[k];
        }
    }
    m
}

/// Promote a real tensor to complex entries.
pub fn mat_to_complex(m: &Mat3) -> CMat3 {
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            out[i][k] = Complex64::new(m[i][k], 0.0);
        }
    }
    out
}

fn unit_vector(r: [f64; 3]) -> Result<([f64; 3], f64)> {
    if r.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(
            "separation vector is not finite".into(),
        ));
    }
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if len == 0.0 {
        return Err(Error::InvalidInput("separation vector is zero".into()));
    }
    Ok(([r[0] / len, r[1] / len, r[2] / len], len))
}

/// Transverse projection dyadic `alpha_ik = delta_ik - rhat_i rhat_k`.
pub fn transverse_dyadic(r: [f64; 3]) -> Result<Mat3> {
    let (n, _) = unit_vector(r)?;
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            m[i][k] = if i == k { 1.0 } else { 0.0 };
            m[i][k] -= n[i] * n[k];
        }
    }
    Ok(m)
}

/// Longitudinal dyadic `beta_ik = delta_ik - 3 rhat_i rhat_k`.
pub fn longitudinal_dyadic(r: [f64; 3]) -> Result<Mat3> {
    let (n, _) = unit_vector(r)?;
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            m[i][k] = if i == k { 1.0 } else { 0.0 };
            m[i][k] -= 3.0 * n[i] * n[k];
        }
    }
    Ok(m)
}

/// The branch of `sqrt(omega^2)` selected by an infinitesimal `+i*eps` under
/// the root: the limit of `sqrt(omega^2 + i*eps)`.
///
/// Even in `omega` and continuous on the closed first quadrant:
/// `omega` with positive real part maps to itself, negative real part to
/// `-omega`, and the imaginary axis to `i*|Im omega|`. Undefined at zero.
pub fn frequency_branch(omega: Complex64) -> Result<Complex64> {
    if !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::InvalidInput("frequency is not finite".into()));
    }
    if omega == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput(
            "frequency branch undefined at omega = 0".into(),
        ));
    }
    Ok(if omega.re > 0.0 {
        omega
    } else if omega.re < 0.0 {
        -omega
    } else {
        Complex64::new(0.0, omega.im.abs())
    })
}

/// Temporal-gauge photon propagator tensor at frequency `omega` and
/// separation `r`:
///
/// `D_ik = (1/c^2) [alpha_ik + beta_ik (s + s^2)] e^{i nu R / c} / R`,
///
/// with `nu = frequency_branch(omega)` and `s = i c / (nu R)`. On the
/// positive imaginary axis this decays exponentially in `R`; on the real
/// axis it is an outgoing wave regardless of the sign of `omega`.
pub fn photon_propagator(omega: Complex64, r: [f64; 3], units: &UnitsSystem) -> Result<CMat3> {
    let (_, len) = unit_vector(r)?;
    let alpha = transverse_dyadic(r)?;
    let beta = longitudinal_dyadic(r)?;
    let nu = frequency_branch(omega)?;
    let c = units.c;
    let s = Complex64::new(0.0, c) / (nu * len);
    let phase = (Complex64::new(0.0, 1.0) * nu * len / c).exp();
    let scale = phase / (c * c * len);
    let long = s + s * s;
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            out[i][k] = scale * (alpha[i][k] + long * beta[i][k]);
        }
    }
    Ok(out)
}

/// Closed form of the full double contraction `Sum_ik D_ik D_ik` at
/// separation `R` (direction drops out):
///
/// `(2 / (c^4 R^2)) e^{2 i nu R / c} (1 + 2s + 5s^2 + 6s^3 + 3s^4)`.
pub fn propagator_double_contraction(
    omega: Complex64,
    r_len: f64,
    units: &UnitsSystem,
) -> Result<Complex64> {
    if !r_len.is_finite() || r_len <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "separation must be finite and positive, got {r_len}"
        )));
    }
    let nu = frequency_branch(omega)?;
    let c = units.c;
    let s = Complex64::new(0.0, c) / (nu * r_len);
    let poly = 1.0 + 2.0 * s + 5.0 * s * s + 6.0 * s * s * s + 3.0 * s * s * s * s;
    let phase = (Complex64::new(0.0, 2.0) * nu * r_len / c).exp();
    Ok(2.0 * phase * poly / (c.powi(4) * r_len * r_len))
}

/// Leading close-range form of the propagator, `-beta_ik / (omega^2 R^3)`:
/// the instantaneous dipole-dipole kernel. Exact in the `|omega| R / c -> 0`
/// limit; `nu^2 = omega^2` makes it branch-independent.
pub fn close_range_propagator(omega: Complex64, r: [f64; 3]) -> Result<CMat3> {
    let (_, len) = unit_vector(r)?;
    if omega == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput(
            "close-range propagator undefined at omega = 0".into(),
        ));
    }
    let beta = longitudinal_dyadic(r)?;
    let denom = omega * omega * len.powi(3);
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            out[i][k] = -beta[i][k] / denom;
        }
    }
    Ok(out)
}

/// Rank-four contraction `f(X, Y; M, N) = Sum_{ijkl} X_ij Y_kl M_ik N_jl`.
///
/// `X, Y` are the geometric dyadics, `M, N` the two response tensors. For
/// symmetric `X` and `Y` the value is invariant under exchanging `M` and
/// `N`, which is what lets either atom's tensor sit in either slot.
pub fn quad_contraction(x: &Mat3, y: &Mat3, m: &CMat3, n: &CMat3) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            if x[i][j] == 0.0 {
                continue;
            }
            for k in 0..3 {
                for l in 0..3 {
                    if y[k][l] == 0.0 {
                        continue;
                    }
                    acc += x[i][j] * y[k][l] * m[i][k] * n[j][l];
                }
            }
        }
    }
    acc
}
