//! Where oscillation takes over: compares the far-zone envelope of the
//! residue terms against the monotone Wick background and locates the
//! separation beyond which the oscillatory part dominates.

use super::asymptote::{c7_direct, vdw_limit};
use super::check_separation;
use super::pole::{direct_envelopes, Side};
use super::wick::wick_term_direct;
use crate::error::{Error, Result};
use crate::model::PairSystem;

/// Far-zone envelope of one residue term: its real part oscillates as
/// `-(amplitude / R^2) cos(wavenumber * R)` once every `x^4` subleading
/// piece has died off.
#[derive(Debug, Clone)]
pub struct PoleEnvelope {
    pub state_label: String,
    pub side: Side,
    /// `(E_m / c)^4 |T_aa|` at the pole frequency.
    pub amplitude: f64,
    /// `2 |E_m| / c`.
    pub wavenumber: f64,
}

/// Summary of the competition between the dispersion background and the
/// oscillatory residue terms in the direct channel.
#[derive(Debug, Clone)]
pub struct RegimeReport {
    /// Near-zone dispersion coefficient (the `-C6/R^6` sum).
    pub c6_tensor_sum: f64,
    /// Far-zone Wick coefficient (the `-C7/R^7` tail).
    pub c7_coefficient: f64,
    pub pole_envelopes: Vec<PoleEnvelope>,
    /// Separation where the dominant envelope equals the far-zone Wick
    /// magnitude; `None` when there is no downward transition.
    pub crossover_radius: Option<f64>,
    /// `(r, envelope / |wick|)` over the sample grid.
    pub ratio_samples: Vec<(f64, f64)>,
    /// Log-log slope fitted to the ratio samples; tends to 5 once the Wick
    /// term has reached its `1/R^7` tail.
    pub ratio_loglog_slope: Option<f64>,
}

impl RegimeReport {
    /// Closed-form estimate `amplitude * r^5 / |C7|` of the ratio at `r`,
    /// using the dominant envelope: the rule of thumb behind
    /// [`RegimeReport::crossover_radius`]. Zero when there is no envelope.
    pub fn rule_of_thumb_ratio_at(&self, r: f64) -> f64 {
        match self.dominant_amplitude() {
            Some(amp) => amp * r.powi(5) / self.c7_coefficient.abs(),
            None => 0.0,
        }
    }

    fn dominant_amplitude(&self) -> Option<f64> {
        self.pole_envelopes
            .iter()
            .map(|e| e.amplitude)
            .fold(None, |acc, a| match acc {
                Some(b) if b >= a => Some(b),
                _ => Some(a),
            })
    }
}

/// Bisection for the root of `ln(amp) + 5 ln r - ln |c7| = 0`, i.e. the
/// separation where `amp / r^2` crosses `|c7| / r^7`.
fn bisect_crossover(amp: f64, c7_abs: f64) -> Option<f64> {
    if !(amp > 0.0) || !(c7_abs > 0.0) {
        return None;
    }
    let f = |ln_r: f64| amp.ln() + 5.0 * ln_r - c7_abs.ln();
    let (mut lo, mut hi) = (-200.0_f64, 200.0_f64);
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return None;
    }
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((0.5 * (lo + hi)).exp())
}

fn loglog_slope(samples: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(r, y)| *r > 0.0 && *y > 0.0 && y.is_finite())
        .map(|(r, y)| (r.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let xbar = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ybar = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xbar).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Assemble the regime report for the direct channel. `grid` overrides the
/// separations sampled for the ratio diagnostics; the default is nine
/// logarithmic points spanning ten to a hundred reduced wavelengths of the
/// slowest downward transition.
pub fn crossover_report(pair: &PairSystem, grid: Option<&[f64]>) -> Result<RegimeReport> {
    let c6_tensor_sum = vdw_limit(pair)?;
    let c7_coefficient = c7_direct(pair)?;

    let mut pole_envelopes = Vec::new();
    for side in [Side::A, Side::B] {
        for (state_label, energy, taa) in direct_envelopes(pair, side)? {
            pole_envelopes.push(PoleEnvelope {
                state_label,
                side,
                amplitude: (energy / pair.units.c).powi(4) * taa.abs(),
                wavenumber: 2.0 * energy.abs() / pair.units.c,
            });
        }
    }

    let amp = pole_envelopes
        .iter()
        .map(|e| e.amplitude)
        .fold(0.0_f64, f64::max);
    let crossover_radius = bisect_crossover(amp, c7_coefficient.abs());

    let mut ratio_samples = Vec::new();
    if !pole_envelopes.is_empty() {
        let radii: Vec<f64> = match grid {
            Some(g) => {
                for &r in g {
                    check_separation(r)?;
                }
                if g.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidInput(
                        "sample grid must be strictly increasing".to_string(),
                    ));
                }
                g.to_vec()
            }
            None => {
                let e_min = pole_envelopes
                    .iter()
                    .map(|e| e.wavenumber / 2.0)
                    .fold(f64::INFINITY, f64::min);
                if e_min <= 0.0 || !e_min.is_finite() {
                    return Err(Error::InvalidInput(
                        "cannot build a default sample grid without a downward transition"
                            .to_string(),
                    ));
                }
                let lo = 10.0 / e_min;
                let hi = 100.0 / e_min;
                (0..9)
                    .map(|i| lo * (hi / lo).powf(i as f64 / 8.0))
                    .collect()
            }
        };
        for r in radii {
            let w = wick_term_direct(pair, r)?;
            ratio_samples.push((r, amp / (r * r) / w.abs()));
        }
    }
    let ratio_loglog_slope = loglog_slope(&ratio_samples);

    Ok(RegimeReport {
        c6_tensor_sum,
        c7_coefficient,
        pole_envelopes,
        crossover_radius,
        ratio_samples,
        ratio_loglog_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{excited_ground_pair, ground_ground_pair};

    #[test]
    fn excited_pair_report_locates_the_crossover() {
        let pair = excited_ground_pair();
        let c = pair.units.c;
        let report = crossover_report(&pair, None).unwrap();
        assert!((report.c6_tensor_sum - 53.0 / 30.0).abs() < 1e-14);
        assert!(report.c7_coefficient < 0.0);
        assert_eq!(report.pole_envelopes.len(), 1);
        let env = &report.pole_envelopes[0];
        assert_eq!(env.state_label, "m");
        assert_eq!(env.side, Side::A);
        assert!((env.wavenumber - 0.2 / c).abs() < 1e-18);
        let amp_expected = (0.1 / c).powi(4) * (2.0 / 3.0);
        assert!((env.amplitude - amp_expected).abs() < 1e-12 * amp_expected);
        let r_star = report.crossover_radius.unwrap();
        let closed = (report.c7_coefficient.abs() / env.amplitude).powf(0.2);
        assert!((r_star - closed).abs() < 1e-6 * closed);
        assert!((report.rule_of_thumb_ratio_at(r_star) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn ground_pair_report_has_no_oscillatory_regime() {
        let report = crossover_report(&ground_ground_pair(), None).unwrap();
        assert!(report.pole_envelopes.is_empty());
        assert!(report.crossover_radius.is_none());
        assert!(report.ratio_samples.is_empty());
        assert!(report.ratio_loglog_slope.is_none());
        assert_eq!(report.rule_of_thumb_ratio_at(5.0), 0.0);
    }

    #[test]
    fn sampled_ratio_grows_with_the_fifth_power() {
        let report = crossover_report(&excited_ground_pair(), None).unwrap();
        let slope = report.ratio_loglog_slope.unwrap();
        assert!(
            (slope - 5.0).abs() < 0.1,
            "log-log slope {slope} not close to 5"
        );
    }

    #[test]
    fn explicit_grid_must_be_increasing() {
        let pair = excited_ground_pair();
        let grid = [10.0, 5.0, 20.0];
        assert!(matches!(
            crossover_report(&pair, Some(&grid)),
            Err(Error::InvalidInput(_))
        ));
    }
}
