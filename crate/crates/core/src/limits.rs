//! Regime classification and the classical-limit scans.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::units::{positive, BeamSpec, SolenoidSpec, UnitSystem};
use crate::xsec::{classical_envelope, master_xsec, small_x_reduction, ScatterPoint};
use crate::{Error, Result};

/// Minimum samples per cos² period for envelope extraction and window averages.
pub const SAMPLES_PER_PERIOD: f64 = 8.0;
/// Minimum number of local maxima accepted by a scan fit.
pub const MIN_MAXIMA: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    SmallX,
    Intermediate,
    Asymptotic,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::SmallX => "small_x",
            Regime::Intermediate => "intermediate",
            Regime::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeThresholds {
    /// x below this is small-x.
    pub small_x: f64,
    /// x above this is asymptotic.
    pub asymptotic: f64,
    /// eΦ/2ħc below this is perturbative.
    pub flux_ratio: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            small_x: 0.01,
            asymptotic: 10.0,
            flux_ratio: 0.1,
        }
    }
}

impl RegimeThresholds {
    pub fn classify(&self, x: f64) -> Regime {
        if x < self.small_x {
            Regime::SmallX
        } else if x > self.asymptotic {
            Regime::Asymptotic
        } else {
            Regime::Intermediate
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub x: f64,
    /// eΦ/2ħc
    pub flux_ratio: f64,
    pub regime: Regime,
    pub perturbative_ok: bool,
}

pub fn regime_classify(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> RegimeReport {
    regime_classify_with(beam, sol, pt, u, &RegimeThresholds::default())
}

pub fn regime_classify_with(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
    thresholds: &RegimeThresholds,
) -> RegimeReport {
    let x = pt.x(beam.momentum_p, sol.r0, u);
    let flux_ratio = libm::fabs(beam.charge * sol.flux(u) / (2.0 * u.hbar * u.c));
    RegimeReport {
        x,
        flux_ratio,
        regime: thresholds.classify(x),
        perturbative_ok: flux_ratio < thresholds.flux_ratio,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// (s, σ), strictly increasing in s.
    pub samples: Vec<(f64, f64)>,
    /// Local maxima of the sampled series.
    pub maxima: Vec<(f64, f64)>,
    /// Slope of ln σ_max against ln s.
    pub slope: f64,
    pub slope_stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

/// Ordinary least squares y = a + b x with the slope standard error from residuals.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - intercept - slope * p.0;
            r * r
        })
        .sum();
    Some(LineFit {
        slope,
        intercept,
        slope_stderr: libm::sqrt(ssr / (nf - 2.0) / sxx),
    })
}

fn log_grid(s_min: f64, s_max: f64, n: usize) -> Result<Vec<f64>> {
    positive("s_min", s_min)?;
    positive("s_max", s_max)?;
    if s_max <= s_min {
        return Err(Error::invalid("s_max", "greater than s_min", s_max));
    }
    if n < 2 {
        return Err(Error::invalid("n_samples", "at least 2", n as f64));
    }
    let (a, b) = (libm::log(s_min), libm::log(s_max));
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| match i {
            0 => s_min,
            _ if i == n - 1 => s_max,
            _ => libm::exp(a + step * i as f64),
        })
        .collect())
}

/// Shared checks for a log-spaced scan whose x runs over [x_lo, x_hi].
fn check_scan_window(x_lo: f64, x_hi: f64, s_min: f64, s_max: f64, n: usize) -> Result<()> {
    let asymptotic = RegimeThresholds::default().asymptotic;
    if x_lo <= asymptotic {
        return Err(Error::OutOfRegime {
            x: x_lo,
            regime: "asymptotic",
        });
    }
    // cos²(x) has period π in x; x ∝ s^±1 so dx/d ln s = ±x.
    let dlog = (libm::log(s_max) - libm::log(s_min)) / (n - 1) as f64;
    let per_period = PI / (x_hi * dlog);
    if per_period < SAMPLES_PER_PERIOD {
        return Err(Error::Undersampled {
            samples_per_period: per_period,
            required: SAMPLES_PER_PERIOD,
        });
    }
    Ok(())
}

fn finish_scan(samples: Vec<(f64, f64)>) -> Result<ScanResult> {
    let maxima: Vec<(f64, f64)> = samples
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| w[1])
        .collect();
    if maxima.len() < MIN_MAXIMA {
        return Err(Error::InsufficientMaxima {
            found: maxima.len(),
            required: MIN_MAXIMA,
        });
    }
    let logs: Vec<(f64, f64)> = maxima
        .iter()
        .map(|&(s, v)| (libm::log(s), libm::log(v)))
        .collect();
    let fit = fit_line(&logs).ok_or(Error::InsufficientMaxima {
        found: maxima.len(),
        required: MIN_MAXIMA,
    })?;
    Ok(ScanResult {
        samples,
        maxima,
        slope: fit.slope,
        slope_stderr: fit.slope_stderr,
    })
}

/// Scans ħ → s·ħ over log-spaced s ∈ [s_min, s_max] at fixed e, Φ, p, r0, θ.
/// A flux given in quanta is resolved once under `u` and then held fixed.
/// The envelope of σ scales as s².
pub fn hbar_scan(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
    s_min: f64,
    s_max: f64,
    n_samples: usize,
) -> Result<ScanResult> {
    let grid = log_grid(s_min, s_max, n_samples)?;
    let x0 = pt.x(beam.momentum_p, sol.r0, u);
    check_scan_window(x0 / s_max, x0 / s_min, s_min, s_max, n_samples)?;
    let fixed = SolenoidSpec::with_flux(sol.r0, sol.flux(u))?;
    let samples = grid
        .into_iter()
        .map(|s| Ok((s, master_xsec(beam, &fixed, pt, &u.scale_hbar(s)?)?.value)))
        .collect::<Result<Vec<_>>>()?;
    finish_scan(samples)
}

/// Scans r0 → s·r0 over log-spaced s ∈ [s_min, s_max] at fixed ħ, e, Φ, p, θ.
/// The envelope of σ scales as s⁻³.
pub fn pr0_scan(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
    s_min: f64,
    s_max: f64,
    n_samples: usize,
) -> Result<ScanResult> {
    let grid = log_grid(s_min, s_max, n_samples)?;
    let x0 = pt.x(beam.momentum_p, sol.r0, u);
    check_scan_window(x0 * s_min, x0 * s_max, s_min, s_max, n_samples)?;
    let samples = grid
        .into_iter()
        .map(|s| {
            let scaled = sol.with_r0(sol.r0 * s)?;
            Ok((s, master_xsec(beam, &scaled, pt, u)?.value))
        })
        .collect::<Result<Vec<_>>>()?;
    finish_scan(samples)
}

/// |master / small_x_reduction − 1| for x < 1.
pub fn reduction_residual(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    pt: &ScatterPoint,
    u: &UnitSystem,
) -> Result<f64> {
    let x = pt.x(beam.momentum_p, sol.r0, u);
    if x.is_nan() || x >= 1.0 {
        return Err(Error::OutOfRegime { x, regime: "x < 1" });
    }
    let master = master_xsec(beam, sol, pt, u)?.value;
    let reduced = small_x_reduction(beam, sol, pt, u)?.value;
    Ok(libm::fabs(master / reduced - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowAverage {
    /// Mean of master_xsec over the window.
    pub mean: f64,
    /// classical_envelope at the window centre.
    pub envelope: f64,
    /// Number of cos² periods spanned by the window.
    pub oscillations: f64,
}

impl WindowAverage {
    pub fn ratio(&self) -> f64 {
        self.mean / self.envelope
    }
}

/// Midpoint-rule mean of master_xsec over [θc − Δθ/2, θc + Δθ/2] with `n` nodes.
pub fn window_average(
    beam: &BeamSpec,
    sol: &SolenoidSpec,
    u: &UnitSystem,
    theta_center: f64,
    delta_theta: f64,
    n: usize,
) -> Result<WindowAverage> {
    positive("delta_theta", delta_theta)?;
    if n == 0 {
        return Err(Error::invalid("n", "at least 1", 0.0));
    }
    let lo = theta_center - 0.5 * delta_theta;
    let hi = theta_center + 0.5 * delta_theta;
    if lo <= 0.0 && hi >= 0.0 {
        return Err(Error::WindowStraddlesForward);
    }
    let lo_pt = ScatterPoint::new(lo)?;
    let hi_pt = ScatterPoint::new(hi)?;
    let centre = ScatterPoint::new(theta_center)?;
    let p = beam.momentum_p;
    let (x_a, x_b) = (lo_pt.x(p, sol.r0, u), hi_pt.x(p, sol.r0, u));
    let x_min = x_a.min(x_b);
    if x_min <= RegimeThresholds::default().asymptotic {
        return Err(Error::OutOfRegime {
            x: x_min,
            regime: "asymptotic",
        });
    }
    let oscillations = libm::fabs(x_b - x_a) / PI;
    let per_period = n as f64 / oscillations;
    if per_period < SAMPLES_PER_PERIOD {
        return Err(Error::Undersampled {
            samples_per_period: per_period,
            required: SAMPLES_PER_PERIOD,
        });
    }
    let h = delta_theta / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let pt = ScatterPoint::new(lo + (i as f64 + 0.5) * h)?;
        sum += master_xsec(beam, sol, &pt, u)?.value;
    }
    Ok(WindowAverage {
        mean: sum / n as f64,
        envelope: classical_envelope(beam, sol, &centre, u)?.value,
        oscillations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> (UnitSystem, BeamSpec, SolenoidSpec, ScatterPoint) {
        let u = UnitSystem::natural();
        let beam = BeamSpec::new(1.0, 1.0, 1.0).unwrap();
        let sol = SolenoidSpec::with_flux(1.0, 1.0).unwrap();
        (u, beam, sol, ScatterPoint::new(PI / 2.0).unwrap())
    }

    #[test]
    fn thresholds() {
        let t = RegimeThresholds::default();
        assert_eq!(t.classify(1e-4), Regime::SmallX);
        assert_eq!(t.classify(0.5), Regime::Intermediate);
        assert_eq!(t.classify(100.0), Regime::Asymptotic);
    }

    #[test]
    fn one_quantum_is_not_perturbative() {
        let u = UnitSystem::cgs();
        let beam = BeamSpec::electron(1.0, &u).unwrap();
        let sol = SolenoidSpec::with_quanta(1.0, 1).unwrap();
        let pt = ScatterPoint::new(0.5).unwrap();
        let r = regime_classify(&beam, &sol, &pt, &u);
        assert!((r.flux_ratio - PI).abs() < 1e-12);
        assert!(!r.perturbative_ok);
        assert_eq!(r, regime_classify(&beam, &sol, &pt.mirrored(), &u));
    }

    #[test]
    fn fit_line_recovers_exact_slope() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        let f = fit_line(&pts).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-14);
        assert!((f.intercept - 3.0).abs() < 1e-13);
        assert!(f.slope_stderr < 1e-13);
    }

    #[test]
    fn hbar_scan_slope_is_two() {
        let (u, beam, sol, pt) = desk();
        let r = hbar_scan(&beam, &sol, &pt, &u, 1e-3, 1e-2, 20_000).unwrap();
        assert!(r.maxima.len() >= 20);
        assert!((r.slope - 2.0).abs() < 0.05, "{}", r.slope);
        assert!(r.samples.windows(2).all(|w| w[0].0 < w[1].0));
        // envelope shrinks toward s → 0
        let first = r.maxima.first().unwrap().1;
        let last = r.maxima.last().unwrap().1;
        assert!(first < last);
    }

    #[test]
    fn hbar_scan_holds_quantized_flux_fixed() {
        let (u, beam, _, pt) = desk();
        let sol = SolenoidSpec::with_quanta(1.0, 1).unwrap();
        let r = hbar_scan(&beam, &sol, &pt, &u, 1e-3, 1e-2, 20_000).unwrap();
        assert!((r.slope - 2.0).abs() < 0.05, "{}", r.slope);
    }

    #[test]
    fn pr0_scan_slope_is_minus_three() {
        let (u, beam, sol, pt) = desk();
        let r = pr0_scan(&beam, &sol, &pt, &u, 1e2, 1e3, 20_000).unwrap();
        assert!(r.maxima.len() >= 20);
        assert!((r.slope + 3.0).abs() < 0.05, "{}", r.slope);
    }

    #[test]
    fn scans_reject_bad_windows() {
        let (u, beam, sol, pt) = desk();
        assert!(matches!(
            hbar_scan(&beam, &sol, &pt, &u, 1e-2, 1.0, 10_000),
            Err(Error::OutOfRegime { .. })
        ));
        assert!(matches!(
            hbar_scan(&beam, &sol, &pt, &u, 1e-3, 1e-2, 100),
            Err(Error::Undersampled { .. })
        ));
        assert!(matches!(
            pr0_scan(&beam, &sol, &pt, &u, 20.0, 20.5, 1000),
            Err(Error::InsufficientMaxima { .. })
        ));
        assert!(hbar_scan(&beam, &sol, &pt, &u, 1e-2, 1e-3, 100).is_err());
    }

    #[test]
    fn hbar_and_r0_rescalings_share_x() {
        let (u, beam, sol, pt) = desk();
        for &s in &[3.0, 17.5, 400.0] {
            let a = master_xsec(&beam, &sol, &pt, &u.scale_hbar(1.0 / s).unwrap())
                .unwrap()
                .value;
            let b = master_xsec(&beam, &sol.with_r0(sol.r0 * s).unwrap(), &pt, &u)
                .unwrap()
                .value;
            assert!((a / b / s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reduction_residual_tracks_quarter_x_squared() {
        let (u, _, sol, pt) = desk();
        for &x in &[1e-3, 1e-2, 1e-1] {
            let p = x * u.hbar / (2.0 * sol.r0 * pt.sin_half());
            let beam = BeamSpec::new(1.0, p, 1.0).unwrap();
            let r = reduction_residual(&beam, &sol, &pt, &u).unwrap();
            // (2J1(x)/x)² = 1 − x²/4 + 5x⁴/192 − …
            assert!(
                (r - (x * x / 4.0 - 5.0 * x.powi(4) / 192.0)).abs() < 1e-12 + x.powi(6) / 100.0
            );
        }
        let beam = BeamSpec::new(1.0, 10.0, 1.0).unwrap();
        assert!(matches!(
            reduction_residual(&beam, &sol, &pt, &u),
            Err(Error::OutOfRegime { .. })
        ));
    }

    #[test]
    fn window_average_is_half_envelope() {
        let (u, _, sol, _) = desk();
        let beam = BeamSpec::new(1.0, 1e4 / 2f64.sqrt(), 1.0).unwrap();
        let w = window_average(&beam, &sol, &u, PI / 2.0, 6e-3, 2000).unwrap();
        assert!(w.oscillations >= 9.0);
        assert!((w.ratio() - 0.5).abs() < 0.02, "{}", w.ratio());
    }

    #[test]
    fn window_average_single_oscillation_is_bounded() {
        let (u, _, sol, _) = desk();
        let beam = BeamSpec::new(1.0, 1e3, 1.0).unwrap();
        let w = window_average(&beam, &sol, &u, 1.0, 2.2e-3, 64).unwrap();
        assert!(w.oscillations < 1.5);
        assert!((0.0..=1.0).contains(&w.ratio()));
    }

    #[test]
    fn window_average_rejects_forward_window() {
        let (u, beam, sol, _) = desk();
        assert_eq!(
            window_average(&beam, &sol, &u, 0.001, 0.01, 100),
            Err(Error::WindowStraddlesForward)
        );
    }
}
