//! Gaussian-cgs constants, photon-mass conversions and the table of
//! published photon-mass bounds.
//!
//! The photon mass appears in two currencies: the inverse range
//! `m_gamma` in cm^-1 (the screening constant of the Proca field) and the
//! rest mass `m_ph` in grams. They are related by `m_gamma = m_ph c / hbar`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version stamp for the constants table below. Bump whenever a value changes.
pub const CONSTANTS_VERSION: &str = "cgs-2026.1";

/// Reduced Planck constant (erg s).
pub const HBAR: f64 = 1.0546e-27;
/// Planck constant (erg s).
pub const H: f64 = 2.0 * std::f64::consts::PI * HBAR;
/// Speed of light (cm/s).
pub const C: f64 = 2.9979e10;
/// Bohr radius (cm).
pub const BOHR_RADIUS: f64 = 5.292e-9;
/// Elementary charge (statC).
pub const ELEMENTARY_CHARGE: f64 = 4.8032e-10;
/// Electron rest mass (g).
pub const ELECTRON_MASS: f64 = 9.1094e-28;
/// One kilo-electron-volt in erg.
pub const KEV: f64 = 1.602_18e-9;
/// Julian-ish year used for age-of-universe estimates (s).
pub const YEAR_SECONDS: f64 = 3.156e7;

/// The constants bundled as a value, for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub hbar: f64,
    pub h: f64,
    pub c: f64,
    pub bohr_radius: f64,
    pub electron_charge: f64,
    pub year_seconds: f64,
}

impl Constants {
    pub const fn table() -> Self {
        Constants {
            hbar: HBAR,
            h: H,
            c: C,
            bohr_radius: BOHR_RADIUS,
            electron_charge: ELEMENTARY_CHARGE,
            year_seconds: YEAR_SECONDS,
        }
    }
}

/// Photon mass as an inverse length `m_gamma` (cm^-1). Zero is the
/// massless limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InverseRange(f64);

impl InverseRange {
    pub const ZERO: InverseRange = InverseRange(0.0);

    pub fn new(per_cm: f64) -> Result<Self> {
        if per_cm.is_finite() && per_cm >= 0.0 {
            Ok(InverseRange(per_cm))
        } else {
            Err(Error::InvalidInput(format!(
                "m_gamma must be finite and >= 0, got {per_cm}"
            )))
        }
    }

    /// Builds `m_gamma` from a range `m_gamma^-1` given in cm.
    pub fn from_range_cm(range_cm: f64) -> Result<Self> {
        if range_cm.is_finite() && range_cm > 0.0 {
            Ok(InverseRange(1.0 / range_cm))
        } else {
            Err(Error::InvalidInput(format!(
                "range must be finite and > 0, got {range_cm}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `m_gamma^-1` in cm; infinite for the massless limit.
    pub fn range_cm(self) -> f64 {
        1.0 / self.0
    }

    /// Compton wavelength `2 pi / m_gamma` (cm).
    pub fn compton_wavelength_cm(self) -> f64 {
        2.0 * std::f64::consts::PI / self.0
    }

    pub fn is_massless(self) -> bool {
        self.0 == 0.0
    }
}

/// Photon rest mass in grams.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MassGrams(f64);

impl MassGrams {
    pub fn new(grams: f64) -> Result<Self> {
        if grams.is_finite() && grams >= 0.0 {
            Ok(MassGrams(grams))
        } else {
            Err(Error::InvalidInput(format!(
                "mass must be finite and >= 0, got {grams}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `m_ph = hbar m_gamma / c`.
pub fn to_grams(m: InverseRange) -> MassGrams {
    MassGrams(HBAR * m.0 / C)
}

/// `m_gamma = m_ph c / hbar`, the inverse of [`to_grams`].
pub fn to_inverse_cm(m: MassGrams) -> InverseRange {
    InverseRange(m.0 * C / HBAR)
}

/// Energy-time uncertainty estimate `h / (dt c^2)` for a lifetime `dt` in seconds.
pub fn uncertainty_mass(delta_t_s: f64) -> Result<MassGrams> {
    if !(delta_t_s.is_finite() && delta_t_s > 0.0) {
        return Err(Error::InvalidInput(format!(
            "delta_t must be > 0 s, got {delta_t_s}"
        )));
    }
    Ok(MassGrams(H / (delta_t_s * C * C)))
}

/// A published lower bound on the photon range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBound {
    pub label: String,
    pub inverse_range: InverseRange,
    pub mass: MassGrams,
    pub source: String,
}

impl ReferenceBound {
    pub fn range_cm(&self) -> f64 {
        self.inverse_range.range_cm()
    }
}

fn bound(label: &str, range_cm: f64, published_mass: Option<f64>, source: &str) -> ReferenceBound {
    let inverse_range = InverseRange(1.0 / range_cm);
    // rounded published mass where one was quoted alongside the range
    let mass = published_mass.map_or_else(|| to_grams(inverse_range), MassGrams);
    ReferenceBound {
        label: label.to_string(),
        inverse_range,
        mass,
        source: source.to_string(),
    }
}

/// The four fixed reference entries.
pub fn reference_bounds() -> Vec<ReferenceBound> {
    vec![
        bound(
            "coulomb",
            3.0e9,
            None,
            "Williams, Faller, Hill (1971): Cavendish-type test of Coulomb's law",
        ),
        bound(
            "geomagnetic",
            5.0e10,
            None,
            "Davis, Goldhaber, Nieto: planetary magnetic fields",
        ),
        bound(
            "toroid",
            1.66e13,
            Some(2.1e-51),
            "Luo, Tu, Hu, Luan: magnetized toroid in the ambient cosmic vector potential",
        ),
        bound(
            "BD",
            1.4e7,
            Some(2.5e-45),
            "Boulware, Deser: table-top Aharonov-Bohm solenoid",
        ),
    ]
}

/// Case-insensitive lookup by label.
pub fn reference_bound(label: &str) -> Option<ReferenceBound> {
    reference_bounds()
        .into_iter()
        .find(|b| b.label.eq_ignore_ascii_case(label))
}
