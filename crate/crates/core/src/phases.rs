//! Zero-mass phases and photon-mass corrections for three AB-type effects:
//! the closed-loop AB phase of a charge, the Tkachuk phase of an electric
//! dipole circling a solenoid with axially growing magnetization, and the
//! open-path phase between coherent `+q` and `-q` beams passing the solenoid
//! on one side.
//!
//! Every effect is evaluated two ways. The asymptotic method uses the
//! leading-log small-mass forms (positive magnitudes). The exact method
//! integrates the exact Bessel fields by adaptive quadrature; its
//! corrections are signed, and negative for `q j > 0` because a massive
//! photon screens the flux. Compare the two through magnitudes.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, SolenoidSpec, ASYMPTOTIC_WINDOW};
use crate::numerics::{integrate_pieces, logspace, QuadResult, Tolerance};
use crate::units::{InverseRange, C, ELECTRON_MASS, ELEMENTARY_CHARGE, H, HBAR, KEV};

/// Phase ratio between the `+q` and `-q` beams relative to a single beam.
pub const PM_Q_SUPERPOSITION_FACTOR: f64 = 2.0;

/// Prefactor of the leading-log open-path ratio `-(4/pi) m^2 x y ln(m r / 2)`.
pub const PM_Q_RATIO_COEFFICIENT: f64 = 4.0 / PI;

/// Smallest `x / y` at which the open-path asymptotic form is trusted.
pub const PM_Q_MIN_ASPECT: f64 = 3.0;

pub const FLAG_OUTSIDE_WINDOW: &str = "asymptotic_outside_window";
pub const FLAG_SHORT_PATH: &str = "x_below_3y_advisory";

const QUAD_TOL: Tolerance = Tolerance { rel: 1e-12, abs: 1e-300 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    Charge,
    ElectricDipole,
    MagneticDipole,
}

/// The particle traversing the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub kind: ProbeKind,
    /// statC
    pub charge: Option<f64>,
    /// statC cm
    pub dipole: Option<f64>,
    /// cm/s
    pub speed: Option<f64>,
    /// g cm/s
    pub momentum: Option<f64>,
    /// de Broglie wavelength, cm
    pub wavelength: Option<f64>,
}

impl ProbeSpec {
    /// A charge with no kinematics attached.
    pub fn charge(q: f64) -> Result<Self> {
        if !(q.is_finite() && q != 0.0) {
            return Err(Error::InvalidInput(format!("probe charge must be finite and nonzero, got {q}")));
        }
        Ok(ProbeSpec {
            kind: ProbeKind::Charge,
            charge: Some(q),
            dipole: None,
            speed: None,
            momentum: None,
            wavelength: None,
        })
    }

    pub fn electron() -> Self {
        ProbeSpec::charge(-ELEMENTARY_CHARGE).expect("nonzero")
    }

    /// Electron of the given kinetic energy, with relativistic kinematics.
    pub fn electron_beam(kinetic_kev: f64) -> Result<Self> {
        if !(kinetic_kev.is_finite() && kinetic_kev > 0.0) {
            return Err(Error::InvalidInput(format!("beam energy must be > 0 keV, got {kinetic_kev}")));
        }
        let t = kinetic_kev * KEV;
        let rest = ELECTRON_MASS * C * C;
        let pc = (t * t + 2.0 * t * rest).sqrt();
        let p = pc / C;
        let mut probe = ProbeSpec::electron();
        probe.momentum = Some(p);
        probe.speed = Some(pc * C / (t + rest));
        probe.wavelength = Some(H / p);
        Ok(probe)
    }

    pub fn electric_dipole(d: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidInput(format!("dipole moment must be > 0, got {d}")));
        }
        Ok(ProbeSpec {
            kind: ProbeKind::ElectricDipole,
            charge: None,
            dipole: Some(d),
            speed: None,
            momentum: None,
            wavelength: None,
        })
    }

    /// Attaches a momentum and the matching de Broglie wavelength.
    pub fn with_momentum(mut self, p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidInput(format!("momentum must be > 0, got {p}")));
        }
        self.momentum = Some(p);
        self.wavelength = Some(H / p);
        Ok(self)
    }

    pub fn with_speed(mut self, v: f64) -> Result<Self> {
        if !(v.is_finite() && v > 0.0 && v < C) {
            return Err(Error::InvalidInput(format!("speed must lie in (0, c), got {v}")));
        }
        self.speed = Some(v);
        Ok(self)
    }

    pub(crate) fn require_charge(&self) -> Result<f64> {
        match (self.kind, self.charge) {
            (ProbeKind::Charge, Some(q)) => Ok(q),
            _ => Err(Error::InvalidInput("this effect needs a charged probe".into())),
        }
    }

    fn require_dipole(&self) -> Result<f64> {
        match (self.kind, self.dipole) {
            (ProbeKind::ElectricDipole, Some(d)) => Ok(d),
            _ => Err(Error::InvalidInput("the Tkachuk effect needs an electric-dipole probe".into())),
        }
    }
}

/// Integration contour in the `z = 0` plane, solenoid on the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PathSpec {
    ClosedLoop { radius: f64 },
    /// Straight segment from `(-x, y)` to `(x, y)`.
    OpenSegment { half_length: f64, offset: f64 },
}

impl PathSpec {
    pub fn closed_loop(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidInput(format!("loop radius must be > 0, got {radius}")));
        }
        Ok(PathSpec::ClosedLoop { radius })
    }

    pub fn open_segment(half_length: f64, offset: f64) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0 && offset.is_finite() && offset > 0.0) {
            return Err(Error::InvalidInput(format!(
                "segment needs x > 0 and y > 0, got x = {half_length}, y = {offset}"
            )));
        }
        Ok(PathSpec::OpenSegment { half_length, offset })
    }

    /// Length that sets the asymptotic window: `rho`, or `sqrt(x^2 + y^2)`.
    pub fn characteristic_length(&self) -> f64 {
        match *self {
            PathSpec::ClosedLoop { radius } => radius,
            PathSpec::OpenSegment { half_length, offset } => half_length.hypot(offset),
        }
    }

    pub(crate) fn loop_radius(&self, s: &SolenoidSpec) -> Result<f64> {
        match *self {
            PathSpec::ClosedLoop { radius } if radius > s.radius => Ok(radius),
            PathSpec::ClosedLoop { radius } => Err(Error::Geometry(format!(
                "loop radius {radius} does not enclose the solenoid (a = {})",
                s.radius
            ))),
            PathSpec::OpenSegment { .. } => Err(Error::Geometry("this effect needs a closed loop".into())),
        }
    }

    pub(crate) fn segment(&self, s: &SolenoidSpec) -> Result<(f64, f64)> {
        match *self {
            PathSpec::OpenSegment { half_length, offset } if offset > s.radius => Ok((half_length, offset)),
            PathSpec::OpenSegment { offset, .. } => Err(Error::Geometry(format!(
                "segment offset y = {offset} crosses the solenoid (a = {})",
                s.radius
            ))),
            PathSpec::ClosedLoop { .. } => Err(Error::Geometry("this effect needs an open segment".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    Asymptotic,
    ExactQuadrature,
}

impl fmt::Display for PhaseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseMethod::Asymptotic => "asymptotic",
            PhaseMethod::ExactQuadrature => "exact_quadrature",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    #[serde(rename = "phi0_rad")]
    pub phi0: f64,
    #[serde(rename = "delta_phi_rad")]
    pub delta_phi: f64,
    pub ratio: f64,
    pub method: PhaseMethod,
    #[serde(default)]
    pub validity_flags: Vec<String>,
}

impl PhaseResult {
    fn from_ratio(phi0: f64, ratio: f64, method: PhaseMethod) -> Self {
        PhaseResult {
            phi0,
            delta_phi: ratio * phi0,
            ratio,
            method,
            validity_flags: Vec::new(),
        }
    }

    fn from_delta(phi0: f64, delta_phi: f64, method: PhaseMethod) -> Self {
        PhaseResult {
            phi0,
            delta_phi,
            ratio: delta_phi / phi0,
            method,
            validity_flags: Vec::new(),
        }
    }
}

/// Both evaluations of one effect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectPhases {
    pub exact: PhaseResult,
    /// `None` outside the asymptotic window.
    pub asymptotic: Option<PhaseResult>,
    /// Open path only: the `+q`/`-q` relative correction,
    /// [`PM_Q_SUPERPOSITION_FACTOR`] times the exact single-beam value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superposed_delta_phi: Option<f64>,
}

/// `(1/2) x^2 ln(2/x)` with `x = m rho`.
pub fn closed_loop_ratio(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        0.5 * x * x * (2.0 / x).ln()
    }
}

fn check_window(x: f64) -> Result<()> {
    if x < ASYMPTOTIC_WINDOW {
        Ok(())
    } else {
        Err(Error::OutsideValidity {
            what: "m_gamma * rho",
            value: x,
            limit: ASYMPTOTIC_WINDOW,
        })
    }
}

fn coupling(q: f64) -> f64 {
    q / (HBAR * C)
}

/// Massless AB phase `(q/hbar c) pi a^2 j`.
pub fn ab_phi0(probe: &ProbeSpec, s: &SolenoidSpec) -> Result<f64> {
    Ok(coupling(probe.require_charge()?) * s.flux0())
}

pub fn ab_closed_asymptotic(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<PhaseResult> {
    let rho = path.loop_radius(s)?;
    let x = m.value() * rho;
    check_window(x)?;
    Ok(PhaseResult::from_ratio(ab_phi0(probe, s)?, closed_loop_ratio(x), PhaseMethod::Asymptotic))
}

/// `(q/hbar c)` times the flux of `B - B0` through the loop.
pub fn ab_closed_exact(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<PhaseResult> {
    let rho = path.loop_radius(s)?;
    let phi0 = ab_phi0(probe, s)?;
    let q = probe.require_charge()?;
    let flux = field::delta_flux_quadrature(rho, s, m, QUAD_TOL)?;
    Ok(PhaseResult::from_delta(phi0, coupling(q) * flux.value, PhaseMethod::ExactQuadrature))
}

/// Closed-loop AB phase of a charge around the solenoid.
pub fn ab_closed(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<EffectPhases> {
    let exact = ab_closed_exact(probe, s, path, m)?;
    combine(exact, ab_closed_asymptotic(probe, s, path, m))
}

fn combine(mut exact: PhaseResult, asymptotic: Result<PhaseResult>) -> Result<EffectPhases> {
    let asymptotic = match asymptotic {
        Ok(p) => Some(p),
        Err(Error::OutsideValidity { .. }) => {
            exact.validity_flags.push(FLAG_OUTSIDE_WINDOW.into());
            None
        }
        Err(e) => return Err(e),
    };
    Ok(EffectPhases {
        exact,
        asymptotic,
        superposed_delta_phi: None,
    })
}

fn tkachuk_parts(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec) -> Result<(f64, f64, f64)> {
    let d = probe.require_dipole()?;
    let w = s
        .tkachuk
        .ok_or_else(|| Error::InvalidInput("the Tkachuk effect needs a solenoid with l and mu_bar set".into()))?;
    let rho = path.loop_radius(s)?;
    Ok((d, 4.0 * PI * d * w.magnetization_density / (HBAR * C), rho))
}

pub fn tkachuk_asymptotic(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<PhaseResult> {
    let (_, phi0, rho) = tkachuk_parts(probe, s, path)?;
    let x = m.value() * rho;
    check_window(x)?;
    Ok(PhaseResult::from_ratio(phi0, closed_loop_ratio(x), PhaseMethod::Asymptotic))
}

/// `2 pi (d/hbar c) ∫_a^rho m^2 Pi rho' d rho'`, exterior leakage only.
pub fn tkachuk_exact(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<PhaseResult> {
    let (d, phi0, rho) = tkachuk_parts(probe, s, path)?;
    let f = |r: f64| 2.0 * PI * r * field::delta_b(r, s, m);
    let flux = integrate_pieces(f, &[s.radius, rho], QUAD_TOL)?;
    Ok(PhaseResult::from_delta(phi0, d / (HBAR * C) * flux.value, PhaseMethod::ExactQuadrature))
}

/// Tkachuk phase of an electric dipole `d k` circling a solenoid whose
/// magnetization density grows as `mu_bar z`.
pub fn tkachuk(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<EffectPhases> {
    let exact = tkachuk_exact(probe, s, path, m)?;
    combine(exact, tkachuk_asymptotic(probe, s, path, m))
}

/// Massless open-path phase `-(q/hbar c)(pi/2) a^2 j` in the `x >> y` limit.
pub fn pm_q_phi0(probe: &ProbeSpec, s: &SolenoidSpec) -> Result<f64> {
    Ok(-coupling(probe.require_charge()?) * 0.5 * s.flux0())
}

/// `-(4/pi) m^2 x y ln(m sqrt(x^2 + y^2) / 2)`.
pub fn pm_q_ratio(m: f64, x: f64, y: f64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    -PM_Q_RATIO_COEFFICIENT * m * m * x * y * (0.5 * m * x.hypot(y)).ln()
}

pub fn open_path_pm_q_asymptotic(
    probe: &ProbeSpec,
    s: &SolenoidSpec,
    path: &PathSpec,
    m: InverseRange,
) -> Result<PhaseResult> {
    let (x, y) = path.segment(s)?;
    let mr = m.value() * x.hypot(y);
    check_window(mr)?;
    let mut r = PhaseResult::from_ratio(pm_q_phi0(probe, s)?, pm_q_ratio(m.value(), x, y), PhaseMethod::Asymptotic);
    if x < PM_Q_MIN_ASPECT * y {
        r.validity_flags.push(FLAG_SHORT_PATH.into());
    }
    Ok(r)
}

/// Single-beam line integral along the segment, divided by `q/hbar c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineIntegral {
    /// `∫ A0 . dl` by quadrature (gauss cm^2).
    pub massless: QuadResult,
    /// `-j a^2 arctan(x / y)`.
    pub massless_closed_form: f64,
    /// `∫ (A - A0) . dl` by quadrature.
    pub correction: QuadResult,
}

/// Tangential component of `A_phi phi_hat` along `+x` at `(t, y)` is
/// `-A_phi y / rho`.
pub fn line_integral_oracle(path: &PathSpec, s: &SolenoidSpec, m: InverseRange) -> Result<LineIntegral> {
    let (x, y) = path.segment(s)?;
    let mut pts = vec![0.0];
    if x > 2.0 * y {
        pts.extend(logspace(y, x, 2 + (x / y).log10().ceil() as usize * 4));
    } else {
        pts.push(x);
    }
    let a0 = |t: f64| {
        let r = t.hypot(y);
        -field::a_phi_massless(r, s) * y / r
    };
    let da = |t: f64| {
        let r = t.hypot(y);
        -field::delta_a_phi(r, s, m).unwrap_or(f64::NAN) * y / r
    };
    let double = |q: QuadResult| QuadResult {
        value: 2.0 * q.value,
        error: 2.0 * q.error,
    };
    let massless = double(integrate_pieces(a0, &pts, QUAD_TOL)?);
    let correction = double(integrate_pieces(da, &pts, QUAD_TOL)?);
    Ok(LineIntegral {
        massless,
        massless_closed_form: -s.interior_field * s.radius * s.radius * (x / y).atan(),
        correction,
    })
}

pub fn open_path_pm_q_exact(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<PhaseResult> {
    let k = coupling(probe.require_charge()?);
    let li = line_integral_oracle(path, s, m)?;
    Ok(PhaseResult::from_delta(
        k * li.massless.value,
        k * li.correction.value,
        PhaseMethod::ExactQuadrature,
    ))
}

/// Open-path phase of coherent `+q` / `-q` beams passing the solenoid.
///
/// The asymptotic result is the leading-log ratio as stated, with
/// `phi0 = -(q/hbar c)(pi/2) a^2 j`. The exact result is the single-beam
/// line integral with the finite-`x` massless phase as `phi0`;
/// `superposed_delta_phi` applies [`PM_Q_SUPERPOSITION_FACTOR`]. The two
/// normalizations differ by a factor 2 and are not expected to agree.
pub fn open_path_pm_q(probe: &ProbeSpec, s: &SolenoidSpec, path: &PathSpec, m: InverseRange) -> Result<EffectPhases> {
    let exact = open_path_pm_q_exact(probe, s, path, m)?;
    let superposed = PM_Q_SUPERPOSITION_FACTOR * exact.delta_phi;
    let mut out = combine(exact, open_path_pm_q_asymptotic(probe, s, path, m))?;
    out.superposed_delta_phi = Some(superposed);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: f64) -> InverseRange {
        InverseRange::new(v).unwrap()
    }

    fn unit() -> SolenoidSpec {
        SolenoidSpec::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn closed_loop_ratio_value() {
        let r = closed_loop_ratio(1e-3);
        assert!((r - 0.5e-6 * 2000f64.ln()).abs() < 1e-18);
        assert!((r - 3.80e-6).abs() / 3.80e-6 < 0.01);
    }

    #[test]
    fn ab_exact_and_asymptotic_agree_in_magnitude() {
        let e = ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap();
        let s = unit();
        let loop_ = PathSpec::closed_loop(10.0).unwrap();
        let p = ab_closed(&e, &s, &loop_, m(1e-4)).unwrap();
        let asym = p.asymptotic.unwrap();
        assert!(p.exact.delta_phi < 0.0);
        let r = p.exact.ratio.abs() / asym.ratio;
        assert!((r - 1.0).abs() < 0.15, "{r}");
    }

    #[test]
    fn exact_flux_deficit_matches_stokes() {
        let e = ProbeSpec::charge(1.0).unwrap();
        let s = SolenoidSpec::new(0.3, 2.0).unwrap();
        let loop_ = PathSpec::closed_loop(4.0).unwrap();
        let mm = m(0.05);
        let p = ab_closed_exact(&e, &s, &loop_, mm).unwrap();
        let stokes = coupling(1.0) * 2.0 * PI * 4.0 * field::delta_a_phi(4.0, &s, mm).unwrap();
        assert!(((p.delta_phi - stokes) / stokes).abs() < 1e-10);
    }

    #[test]
    fn massless_phases() {
        let e = ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap();
        let s = SolenoidSpec::new(0.1, 3000.0).unwrap();
        let p = ab_closed(&e, &s, &PathSpec::closed_loop(10.0).unwrap(), InverseRange::ZERO).unwrap();
        assert_eq!(p.exact.delta_phi, 0.0);
        assert_eq!(p.asymptotic.unwrap().delta_phi, 0.0);
        let want = ELEMENTARY_CHARGE / (HBAR * C) * PI * 0.01 * 3000.0;
        assert!(((p.exact.phi0 - want) / want).abs() < 1e-14);

        let seg = PathSpec::open_segment(300.0, 10.0).unwrap();
        let q = open_path_pm_q(&e, &s, &seg, InverseRange::ZERO).unwrap();
        assert_eq!(q.exact.delta_phi, 0.0);
        let a = q.asymptotic.unwrap();
        assert_eq!(a.delta_phi, 0.0);
        assert!(((a.phi0 + 0.5 * want) / want).abs() < 1e-14);
    }

    #[test]
    fn window_enforced() {
        let e = ProbeSpec::charge(1.0).unwrap();
        let loop_ = PathSpec::closed_loop(10.0).unwrap();
        assert!(matches!(
            ab_closed_asymptotic(&e, &unit(), &loop_, m(0.05)),
            Err(Error::OutsideValidity { .. })
        ));
        let p = ab_closed(&e, &unit(), &loop_, m(0.05)).unwrap();
        assert!(p.asymptotic.is_none());
        assert_eq!(p.exact.validity_flags, vec![FLAG_OUTSIDE_WINDOW.to_string()]);
    }

    #[test]
    fn geometry_rejected() {
        let e = ProbeSpec::charge(1.0).unwrap();
        assert!(matches!(
            ab_closed(&e, &unit(), &PathSpec::closed_loop(0.5).unwrap(), m(1e-3)),
            Err(Error::Geometry(_))
        ));
        assert!(matches!(
            open_path_pm_q(&e, &unit(), &PathSpec::open_segment(10.0, 0.8).unwrap(), m(1e-3)),
            Err(Error::Geometry(_))
        ));
        assert!(PathSpec::open_segment(0.0, 1.0).is_err());
    }

    #[test]
    fn wrong_probe_rejected() {
        let d = ProbeSpec::electric_dipole(1.0).unwrap();
        assert!(ab_closed(&d, &unit(), &PathSpec::closed_loop(3.0).unwrap(), m(1e-3)).is_err());
        let tk = SolenoidSpec::tkachuk_from_ab(&unit(), 1.0).unwrap();
        let q = ProbeSpec::charge(1.0).unwrap();
        assert!(tkachuk(&q, &tk, &PathSpec::closed_loop(3.0).unwrap(), m(1e-3)).is_err());
        assert!(tkachuk(&d, &unit(), &PathSpec::closed_loop(3.0).unwrap(), m(1e-3)).is_err());
    }

    #[test]
    fn tkachuk_ratio_matches_ab_form() {
        let ab = SolenoidSpec::new(0.1, 3000.0).unwrap();
        let tk = SolenoidSpec::tkachuk_from_ab(&ab, 1.0).unwrap();
        let loop_ = PathSpec::closed_loop(10.0).unwrap();
        let e = ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap();
        let d = ProbeSpec::electric_dipole(ELEMENTARY_CHARGE * crate::units::BOHR_RADIUS).unwrap();
        let a = ab_closed_asymptotic(&e, &ab, &loop_, m(1e-4)).unwrap();
        let t = tkachuk_asymptotic(&d, &tk, &loop_, m(1e-4)).unwrap();
        assert_eq!(a.ratio, t.ratio);
        let scale = t.phi0 / a.phi0;
        assert!((scale / crate::units::BOHR_RADIUS - 1.0).abs() < 1e-12);
        let exact = tkachuk_exact(&d, &tk, &loop_, m(1e-4)).unwrap();
        assert!((exact.ratio.abs() / t.ratio - 1.0).abs() < 0.15);
    }

    #[test]
    fn massless_line_integral_is_arctan() {
        let s = SolenoidSpec::new(0.5, 2.0).unwrap();
        let seg = PathSpec::open_segment(100.0, 1.0).unwrap();
        let li = line_integral_oracle(&seg, &s, InverseRange::ZERO).unwrap();
        assert!(((li.massless.value - li.massless_closed_form) / li.massless_closed_form).abs() < 1e-10);
        let half_pi = -0.5 * PI * 2.0 * 0.25;
        assert!(((li.massless.value - half_pi) / half_pi).abs() < 0.02);
        assert_eq!(li.correction.value, 0.0);
    }

    #[test]
    fn line_integral_correction_screens() {
        let s = unit();
        let seg = PathSpec::open_segment(30.0, 10.0).unwrap();
        let li = line_integral_oracle(&seg, &s, m(1e-4)).unwrap();
        // massless integral is negative; screening pushes the total toward zero
        assert!(li.massless.value < 0.0 && li.correction.value > 0.0);
        assert!(li.correction.error <= 1e-8 * li.correction.value.abs());
    }

    #[test]
    fn line_integral_quadratic_scaling() {
        let s = unit();
        let seg = PathSpec::open_segment(3000.0, 800.0).unwrap();
        let lo = line_integral_oracle(&seg, &s, m(1e-9)).unwrap().correction.value;
        let hi = line_integral_oracle(&seg, &s, m(2e-9)).unwrap().correction.value;
        let r = hi / lo;
        assert!((3.5..=4.5).contains(&r), "{r}");
    }

    #[test]
    fn short_path_flagged() {
        let e = ProbeSpec::charge(1.0).unwrap();
        let seg = PathSpec::open_segment(20.0, 10.0).unwrap();
        let p = open_path_pm_q(&e, &unit(), &seg, m(1e-4)).unwrap();
        assert!(p.asymptotic.unwrap().validity_flags.contains(&FLAG_SHORT_PATH.to_string()));
        let ok = open_path_pm_q(&e, &unit(), &PathSpec::open_segment(3000.0, 800.0).unwrap(), m(1e-7)).unwrap();
        assert!(ok.asymptotic.unwrap().validity_flags.is_empty());
        assert!(ok.superposed_delta_phi.unwrap() == 2.0 * ok.exact.delta_phi);
    }

    #[test]
    fn phase_result_consistency() {
        let e = ProbeSpec::charge(1.0).unwrap();
        let p = open_path_pm_q(&e, &unit(), &PathSpec::open_segment(3000.0, 800.0).unwrap(), m(1e-6)).unwrap();
        for r in [p.exact, p.asymptotic.unwrap()] {
            assert!(((r.ratio * r.phi0 - r.delta_phi) / r.delta_phi).abs() < 1e-12);
        }
    }

    #[test]
    fn electron_beam_kinematics() {
        let b = ProbeSpec::electron_beam(50.0).unwrap();
        // 50 keV electron: lambda = 5.36 pm
        assert!((b.wavelength.unwrap() - 5.355e-10).abs() < 0.01e-10, "{:?}", b.wavelength);
        assert!(b.speed.unwrap() < C);
        assert!(b.charge.unwrap() < 0.0);
    }

    #[test]
    fn json_field_names() {
        let r = PhaseResult::from_ratio(2.0, 0.5, PhaseMethod::Asymptotic);
        let v = serde_json::to_value(&r).unwrap();
        for k in ["phi0_rad", "delta_phi_rad", "ratio", "method", "validity_flags"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["method"], "asymptotic");
    }
}
