//! Bending of a charged beam by the exterior leakage field, in the
//! straight-line impulse approximation.
//!
//! A charge moving along `+x` at offset `y` feels `(q/c) v x ΔB`. With
//! `v dt = dl` the transverse impulse is `(q/c) ∫ ΔB dl`, independent of
//! the speed. It is reported as the component along `v_hat x z_hat`, which
//! points toward the solenoid axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, SolenoidSpec};
use crate::numerics::{integrate_pieces, logspace, Tolerance};
use crate::phases::{PathSpec, ProbeSpec};
use crate::units::{InverseRange, C, H};

/// Beam used when none is given: 50 keV electrons.
pub const DEFAULT_BEAM_KEV: f64 = 50.0;
/// Slit-to-screen distance, cm.
pub const DEFAULT_DETECTOR_DISTANCE: f64 = 100.0;
/// Double-slit separation, cm.
pub const DEFAULT_SLIT_SEPARATION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeflectionResult {
    /// g cm/s
    pub delta_p_perp: f64,
    /// rad
    pub alpha: f64,
    /// Displacement at the detector, cm.
    pub delta_s_perp: f64,
    pub fringe_spacing: f64,
    /// Interference-pattern shift expressed as a phase, rad.
    pub equivalent_phase: f64,
    /// `|δp δs|`, erg s.
    pub heisenberg_product: f64,
    pub heisenberg_ok: bool,
}

/// `(q/c) ∫_{-x}^{x} ΔB(sqrt(t^2 + y^2)) dt`.
pub fn transverse_impulse(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<f64> {
    let q = probe.require_charge()?;
    let (x, y) = path.segment(s)?;
    if m.is_massless() {
        return Ok(0.0);
    }
    let mut pts = vec![0.0];
    if x > 2.0 * y {
        pts.extend(logspace(y, x, 2 + (x / y).log10().ceil() as usize * 4));
    } else {
        pts.push(x);
    }
    let f = |t: f64| field::delta_b(t.hypot(y), s, m);
    let tol = Tolerance { rel: 1e-12, abs: 1e-300 };
    let half = integrate_pieces(f, &pts, tol)?;
    Ok(q / C * 2.0 * half.value)
}

/// Impulse, angular deflection and equivalent fringe shift for a double-slit
/// arrangement with slits `slit_separation` apart and the screen at
/// `detector_distance`.
pub fn deflect(
    probe: &ProbeSpec,
    s: &SolenoidSpec,
    path: &PathSpec,
    m: InverseRange,
    detector_distance: f64,
    slit_separation: f64,
) -> Result<DeflectionResult> {
    let p = probe
        .momentum
        .ok_or_else(|| Error::InvalidInput("probe momentum is required for deflection".into()))?;
    let lambda = probe
        .wavelength
        .ok_or_else(|| Error::InvalidInput("probe de Broglie wavelength is required for deflection".into()))?;
    if !(p > 0.0 && lambda > 0.0) {
        return Err(Error::InvalidInput("momentum and wavelength must be > 0".into()));
    }
    if !(detector_distance > 0.0 && slit_separation > 0.0) {
        return Err(Error::InvalidInput(format!(
            "detector distance and slit separation must be > 0, got L = {detector_distance}, d = {slit_separation}"
        )));
    }
    let dp = transverse_impulse(probe, s, path, m)?;
    let alpha = dp / p;
    let ds = alpha * detector_distance;
    let fringe = lambda * detector_distance / slit_separation;
    let product = (dp * ds).abs();
    Ok(DeflectionResult {
        delta_p_perp: dp,
        alpha,
        delta_s_perp: ds,
        fringe_spacing: fringe,
        equivalent_phase: 2.0 * std::f64::consts::PI * ds / fringe,
        heisenberg_product: product,
        heisenberg_ok: product >= H,
    })
}
