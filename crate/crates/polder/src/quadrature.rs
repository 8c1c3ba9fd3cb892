//! Adaptive complex-valued quadrature and the frequency-integral identities
//! the energy decomposition rests on.
//!
//! The kernel is a 15-point Kronrod / 7-point Gauss rule applied to panels;
//! an error-ordered heap splits the worst panel until the requested
//! tolerance or the subdivision cap is reached. Half-line integrals map the
//! exponential tail onto a finite panel with a log substitution. The
//! identity functions return closed forms and are paired with independent
//! numerical companions that integrate the defining contour directly.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Tolerances and budget for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on the accumulated estimate.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum number of panel splits before giving up.
    pub max_subdivisions: u32,
    /// e-folding scale of the integrand's decay on the half-line; sets the
    /// finite/tail split point at `40 * decay_scale`.
    pub decay_scale: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 200,
            decay_scale: 1.0,
        }
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: Complex64,
    /// Accumulated error estimate (absolute).
    pub error: f64,
    /// Panel splits spent.
    pub subdivisions: u32,
}

/// One integrand piece on a parameter interval. Contour deformations and
/// variable substitutions are expressed by the closure itself (it returns
/// `f(z(t)) z'(t)`), so the driver only ever sees real intervals.
pub struct Piece<'a> {
    pub f: &'a dyn Fn(f64) -> Complex64,
    pub a: f64,
    pub b: f64,
}

// 15-point Kronrod / 7-point Gauss abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// QUADPACK-style error rescaling: trust `|K - G|` only when it is small
/// against the scale of variation, and floor at roundoff on the magnitude.
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err;
    if resasc != 0.0 && e != 0.0 {
        e = resasc * 1.0_f64.min((200.0 * e / resasc).powf(1.5));
    }
    let tiny = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if resabs > tiny {
        e = e.max(50.0 * f64::EPSILON * resabs);
    }
    e
}

struct PanelResult {
    value: Complex64,
    error: f64,
    resabs: f64,
}

fn qk15(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> PanelResult {
    let center = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = fc.norm() * WGK[7];
    let mut fv = [Complex64::new(0.0, 0.0); 15];
    fv[7] = fc;
    for j in 0..3 {
        let absc = hlgth * XGK[2 * j + 1];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv[2 * j + 1] = f1;
        fv[13 - 2 * j] = f2;
        let fsum = f1 + f2;
        resg += fsum * WG[j];
        resk += fsum * WGK[2 * j + 1];
        resabs += WGK[2 * j + 1] * (f1.norm() + f2.norm());
    }
    for j in 0..4 {
        let absc = hlgth * XGK[2 * j];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv[2 * j] = f1;
        fv[14 - 2 * j] = f2;
        let fsum = f1 + f2;
        resk += fsum * WGK[2 * j];
        resabs += WGK[2 * j] * (f1.norm() + f2.norm());
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
    }
    let value = resk * hlgth;
    let resabs = resabs * hlgth.abs();
    let resasc = resasc * hlgth.abs();
    let err = rescale_error(((resk - resg) * hlgth).norm(), resabs, resasc);
    PanelResult {
        value,
        error: err,
        resabs,
    }
}

struct HeapPanel {
    error: f64,
    piece: usize,
    a: f64,
    b: f64,
    value: Complex64,
    resabs: f64,
}

impl PartialEq for HeapPanel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for HeapPanel {}
impl PartialOrd for HeapPanel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapPanel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn check_spec(spec: &QuadratureSpec) -> Result<()> {
    if !spec.rel_tol.is_finite()
        || !spec.abs_tol.is_finite()
        || spec.rel_tol < 0.0
        || spec.abs_tol < 0.0
    {
        return Err(Error::InvalidInput(
            "quadrature tolerances must be finite and non-negative".into(),
        ));
    }
    if spec.rel_tol == 0.0 && spec.abs_tol == 0.0 {
        return Err(Error::InvalidInput(
            "at least one of rel_tol and abs_tol must be positive".into(),
        ));
    }
    if spec.max_subdivisions == 0 {
        return Err(Error::InvalidInput(
            "max_subdivisions must be positive".into(),
        ));
    }
    if !spec.decay_scale.is_finite() || spec.decay_scale <= 0.0 {
        return Err(Error::InvalidInput(
            "decay_scale must be finite and positive".into(),
        ));
    }
    Ok(())
}

/// Adaptively integrate a set of pieces to a common tolerance.
///
/// Convergence demands the summed panel errors below
/// `max(abs_tol, rel_tol * |value|, roundoff floor)`; exceeding the
/// subdivision cap reports [`Error::Convergence`] with the best estimate
/// attached.
pub fn integrate_pieces(pieces: &[Piece<'_>], spec: &QuadratureSpec) -> Result<IntegralEstimate> {
    check_spec(spec)?;
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut total_resabs = 0.0;
    for (idx, p) in pieces.iter().enumerate() {
        if !p.a.is_finite() || !p.b.is_finite() {
            return Err(Error::InvalidInput("piece endpoints must be finite".into()));
        }
        if p.a == p.b {
            continue;
        }
        let r = qk15(p.f, p.a, p.b);
        total += r.value;
        total_err += r.error;
        total_resabs += r.resabs;
        heap.push(HeapPanel {
            error: r.error,
            piece: idx,
            a: p.a,
            b: p.b,
            value: r.value,
            resabs: r.resabs,
        });
    }
    let mut subdivisions = 0u32;
    loop {
        let bound = spec
            .abs_tol
            .max(spec.rel_tol * total.norm())
            .max(50.0 * f64::EPSILON * total_resabs);
        if total_err <= bound {
            return Ok(IntegralEstimate {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Convergence {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("non-empty heap while above tolerance");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at roundoff width: accept its estimate as-is.
            heap.push(HeapPanel {
                error: 0.0,
                ..worst
            });
            total_err -= worst.error;
            continue;
        }
        let f = pieces[worst.piece].f;
        let left = qk15(f, worst.a, mid);
        let right = qk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(HeapPanel {
            error: left.error,
            piece: worst.piece,
            a: worst.a,
            b: mid,
            value: left.value,
            resabs: left.resabs,
        });
        heap.push(HeapPanel {
            error: right.error,
            piece: worst.piece,
            a: mid,
            b: worst.b,
            value: right.value,
            resabs: right.resabs,
        });
        subdivisions += 1;
    }
}

/// Integrate `f` over `(0, infinity)` for an integrand decaying roughly as
/// `exp(-omega / decay_scale)`.
///
/// The finite part `(0, 40 * decay_scale]` is covered by a geometric panel
/// ladder (so structure near zero is resolved before adaptivity starts);
/// the tail is mapped onto `(0, 1]` by `omega = Lambda - decay_scale ln t`
/// and integrated with the same machinery.
pub fn integrate_halfline<F>(f: F, spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Complex64,
{
    check_spec(spec)?;
    let ds = spec.decay_scale;
    let lambda = 40.0 * ds;
    let tail = |t: f64| -> Complex64 {
        let omega = lambda - ds * t.ln();
        f(omega) * (ds / t)
    };
    let direct = |omega: f64| f(omega);
    let mut pieces = Vec::new();
    let mut edges = vec![0.0];
    for k in (0..=20).rev() {
        edges.push(lambda / f64::powi(2.0, k));
    }
    for w in edges.windows(2) {
        pieces.push(Piece {
            f: &direct,
            a: w[0],
            b: w[1],
        });
    }
    pieces.push(Piece {
        f: &tail,
        a: 0.0,
        b: 1.0,
    });
    integrate_pieces(&pieces, spec)
}

/// Closed form of the paired-denominator frequency integral for two upward
/// transitions (`E_a, E_b > 0`):
///
/// `Int dw [1/(E_a - w - i eps) + 1/(E_a + w - i eps)]
///         [1/(E_b - w - i eps) + 1/(E_b + w - i eps)] = 4 pi i / (E_a + E_b)`.
pub fn identity_two_denominators(e_a: f64, e_b: f64) -> Result<Complex64> {
    if !(e_a > 0.0) || !(e_b > 0.0) || !e_a.is_finite() || !e_b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "identity requires positive transition energies, got ({e_a}, {e_b})"
        )));
    }
    Ok(Complex64::new(0.0, 4.0 * PI / (e_a + e_b)))
}

/// Numerical companion of [`identity_two_denominators`]: integrates the
/// left side along the real line at `eps = 0`, with the pole cluster on the
/// positive axis bypassed by one upper semicircular arc (the poles approach
/// the axis from below, so the limiting contour passes above them), plus a
/// `1/omega` tail substitution. Uses evenness to fold onto the half-line.
pub fn contour_two_denominators(e_a: f64, e_b: f64) -> Result<Complex64> {
    if !(e_a > 0.0) || !(e_b > 0.0) || !e_a.is_finite() || !e_b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "companion requires positive transition energies, got ({e_a}, {e_b})"
        )));
    }
    let integrand = move |w: Complex64| -> Complex64 {
        let ea = Complex64::new(e_a, 0.0);
        let eb = Complex64::new(e_b, 0.0);
        (1.0 / (ea - w) + 1.0 / (ea + w)) * (1.0 / (eb - w) + 1.0 / (eb + w))
    };
    let e_lo = e_a.min(e_b);
    let e_hi = e_a.max(e_b);
    let delta = 0.5 * e_lo;
    let z_c = 0.5 * (e_lo + e_hi);
    let rho = 0.5 * (e_hi - e_lo) + delta;
    let lambda = 20.0 * e_hi;
    let seg = |w: f64| integrand(Complex64::new(w, 0.0));
    let arc = |u: f64| -> Complex64 {
        let phase = Complex64::new(0.0, PI - u).exp();
        let z = z_c + rho * phase;
        integrand(z) * Complex64::new(0.0, -rho) * phase
    };
    let tail = |t: f64| -> Complex64 {
        let w = lambda / t;
        integrand(Complex64::new(w, 0.0)) * (lambda / (t * t))
    };
    let pieces = [
        Piece {
            f: &seg,
            a: 0.0,
            b: z_c - rho,
        },
        Piece {
            f: &arc,
            a: 0.0,
            b: PI,
        },
        Piece {
            f: &seg,
            a: z_c + rho,
            b: lambda,
        },
        Piece {
            f: &tail,
            a: 0.0,
            b: 1.0,
        },
    ];
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        max_subdivisions: 400,
        decay_scale: 1.0,
    };
    let half = integrate_pieces(&pieces, &spec)?;
    Ok(2.0 * half.value)
}

/// Closed form of the imaginary-axis paired-denominator integral for one
/// transition of each atom (`E_m, E_q != 0`, either sign):
///
/// `Int dw [2 E_m/(E_m^2 + w^2)][2 E_q/(E_q^2 + w^2)]
///   = 4 pi sgn(E_m) sgn(E_q) / (|E_m| + |E_q|)`.
pub fn identity_wick_denominators(e_m: f64, e_q: f64) -> Result<f64> {
    if e_m == 0.0 || e_q == 0.0 || !e_m.is_finite() || !e_q.is_finite() {
        return Err(Error::InvalidInput(format!(
            "identity requires nonzero transition energies, got ({e_m}, {e_q})"
        )));
    }
    Ok(4.0 * PI * e_m.signum() * e_q.signum() / (e_m.abs() + e_q.abs()))
}

/// Numerical companion of [`identity_wick_denominators`]: the integrand is
/// smooth on the whole real line, so this is a plain folded half-line
/// integral with a `1/omega` tail substitution.
pub fn line_wick_denominators(e_m: f64, e_q: f64) -> Result<f64> {
    if e_m == 0.0 || e_q == 0.0 || !e_m.is_finite() || !e_q.is_finite() {
        return Err(Error::InvalidInput(format!(
            "companion requires nonzero transition energies, got ({e_m}, {e_q})"
        )));
    }
    let g = move |w: f64| -> Complex64 {
        let num = 4.0 * e_m * e_q;
        let den = (e_m * e_m + w * w) * (e_q * e_q + w * w);
        Complex64::new(num / den, 0.0)
    };
    let lambda = 20.0 * e_m.abs().max(e_q.abs());
    let tail = |t: f64| -> Complex64 { g(lambda / t) * (lambda / (t * t)) };
    let seg = |w: f64| g(w);
    let mut pieces = vec![];
    let mut edges = vec![0.0];
    for k in (0..=10).rev() {
        edges.push(lambda / f64::powi(2.0, k));
    }
    for w in edges.windows(2) {
        pieces.push(Piece {
            f: &seg,
            a: w[0],
            b: w[1],
        });
    }
    pieces.push(Piece {
        f: &tail,
        a: 0.0,
        b: 1.0,
    });
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        max_subdivisions: 400,
        decay_scale: 1.0,
    };
    let half = integrate_pieces(&pieces, &spec)?;
    Ok(2.0 * half.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| Complex64::new(x.powi(7) - 3.0 * x.powi(2), 0.0);
        let pieces = [Piece {
            f: &f,
            a: 0.0,
            b: 1.0,
        }];
        let got = integrate_pieces(&pieces, &QuadratureSpec::default()).unwrap();
        let want = 1.0 / 8.0 - 1.0;
        assert!((got.value.re - want).abs() < 1e-14);
        assert!(got.value.im == 0.0);
    }

    #[test]
    fn halfline_exponential() {
        let spec = QuadratureSpec::default();
        let got = integrate_halfline(|w| Complex64::new((-w).exp(), 0.0), &spec).unwrap();
        assert!((got.value.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn halfline_oscillatory() {
        let spec = QuadratureSpec::default();
        let got = integrate_halfline(|w| Complex64::new((-w).exp() * (5.0 * w).cos(), 0.0), &spec)
            .unwrap();
        assert!((got.value.re - 1.0 / 26.0).abs() < 1e-12);
    }

    #[test]
    fn halfline_moment() {
        // Int_0^inf w^4 e^{-2w} dw = 4! / 2^5.
        let spec = QuadratureSpec {
            decay_scale: 0.5,
            ..QuadratureSpec::default()
        };
        let got = integrate_halfline(|w| Complex64::new(w.powi(4) * (-2.0 * w).exp(), 0.0), &spec)
            .unwrap();
        assert!((got.value.re - 0.75).abs() < 1e-12);
    }

    #[test]
    fn halfline_scale_mismatch_still_converges() {
        // decay_scale deliberately 100x too large.
        let spec = QuadratureSpec {
            decay_scale: 100.0,
            ..QuadratureSpec::default()
        };
        let got = integrate_halfline(|w| Complex64::new((-w).exp(), 0.0), &spec).unwrap();
        assert!((got.value.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn subdivision_cap_reports_estimate() {
        let f = |x: f64| Complex64::new((1000.0 * x).sin() / (1e-6 + x * x), 0.0);
        let pieces = [Piece {
            f: &f,
            a: 0.0,
            b: 1.0,
        }];
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            ..QuadratureSpec::default()
        };
        match integrate_pieces(&pieces, &spec) {
            Err(Error::Convergence {
                error,
                subdivisions,
                ..
            }) => {
                assert!(error > 0.0);
                assert_eq!(subdivisions, 3);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            abs_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(integrate_halfline(|_| Complex64::new(0.0, 0.0), &bad).is_err());
        let bad = QuadratureSpec {
            decay_scale: -1.0,
            ..QuadratureSpec::default()
        };
        assert!(integrate_halfline(|_| Complex64::new(0.0, 0.0), &bad).is_err());
    }

    #[test]
    fn identity_values() {
        let v = identity_two_denominators(1.0, 1.0).unwrap();
        assert!((v - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-15);
        let v = identity_two_denominators(2.0, 2.0).unwrap();
        assert!((v - Complex64::new(0.0, PI)).norm() < 1e-15);
        assert!(identity_two_denominators(-1.0, 1.0).is_err());

        let v = identity_wick_denominators(-0.5, 1.0).unwrap();
        assert!((v - (-8.0 * PI / 3.0)).abs() < 1e-15);
        let v = identity_wick_denominators(1.0, 1.0).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-15);
        assert!(identity_wick_denominators(0.0, 1.0).is_err());
    }

    #[test]
    fn companions_match_closed_forms() {
        for &(ea, eb) in &[(1.0, 1.0), (0.7, 1.3), (2.0, 2.0), (0.1, 2.0)] {
            let closed = identity_two_denominators(ea, eb).unwrap();
            let numeric = contour_two_denominators(ea, eb).unwrap();
            let rel = (numeric - closed).norm() / closed.norm();
            assert!(rel < 1e-8, "({ea}, {eb}): rel dev {rel:e}");
        }
        for &(em, eq) in &[(1.0, 1.0), (-0.5, 1.0), (-0.1, -0.4), (0.25, 2.0)] {
            let closed = identity_wick_denominators(em, eq).unwrap();
            let numeric = line_wick_denominators(em, eq).unwrap();
            let rel = (numeric - closed).abs() / closed.abs();
            assert!(rel < 1e-8, "({em}, {eq}): rel dev {rel:e}");
        }
    }
}
