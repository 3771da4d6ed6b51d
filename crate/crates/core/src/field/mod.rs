//! Static magnetic field of an infinite solenoid under Proca (massive
//! photon) electrodynamics.
//!
//! The azimuthal potential obeys
//!
//! ```text
//! A'' + A'/rho - A/rho^2 - m^2 A = -j delta(rho - a)
//! ```
//!
//! whose solution regular at the axis and decaying at infinity is
//!
//! ```text
//! A(rho < a) = j a K1(m a) I1(m rho)      B(rho < a) =  j m a K1(m a) I0(m rho)
//! A(rho > a) = j a I1(m a) K1(m rho)      B(rho > a) = -j m a I1(m a) K0(m rho)
//! ```
//!
//! `j` is the uniform interior field of the same winding with `m = 0`, so the
//! massless flux is `pi a^2 j`. For `m > 0` the exterior carries a return
//! flux that cancels the interior flux exactly.
//!
//! Small arguments are evaluated through `xK1(x) - 1`, `I0(x) - 1` and
//! `2 I1(x)/x - 1` so that the mass corrections keep full relative
//! precision down to `m -> 0`; large arguments go through the exponentially
//! scaled functions.
//!
//! The kernel `Pi(rho)` is exposed in its Bessel-integral form. Its exterior branch
//! satisfies `m^2 Pi = B - B0` exactly. Its interior branch reduces to
//! `(j/m^2) (1 - m a K1(m a) I0(m rho))`, which is the *negative* of the
//! exact interior correction; see `ERRATA.md`. [`delta_b`] is the exact
//! correction everywhere.

mod oracle;
mod profile;

use serde::{Deserialize, Serialize};

use crate::bessel;
use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_pieces, QuadResult, Tolerance};
use crate::units::InverseRange;

pub use oracle::{ode_oracle, OracleDiagnostics, OracleOptions, OracleSolution};
pub use profile::{closed_form_profile, quadrature_profile, FieldProfile, ProfileMethod};

/// Argument below which the correction series are used.
const SMALL_ARG: f64 = 2.0;

/// Upper edge (`m rho`) of the small-mass logarithmic forms.
pub const ASYMPTOTIC_WINDOW: f64 = 0.1;

/// Winding used for the electric-dipole (Tkachuk) configuration: the
/// magnetization grows linearly along the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TkachukWinding {
    /// Length `l` of the solenoid (cm).
    pub length: f64,
    /// Magnetization linear-density gradient `mu_bar` (gauss cm).
    pub magnetization_density: f64,
}

/// Solenoid geometry and source strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolenoidSpec {
    /// Radius `a` (cm).
    pub radius: f64,
    /// Massless interior field `j` (gauss). For a Tkachuk winding this is
    /// the gradient `j_bar`, with `4 mu_bar = j_bar a^2`.
    pub interior_field: f64,
    /// Physical length `D` (cm), informational.
    pub physical_length: Option<f64>,
    pub tkachuk: Option<TkachukWinding>,
}

impl SolenoidSpec {
    pub fn new(radius: f64, interior_field: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidInput(format!("solenoid radius must be > 0, got {radius}")));
        }
        if !(interior_field.is_finite() && interior_field != 0.0) {
            return Err(Error::InvalidInput(format!(
                "interior field must be finite and nonzero, got {interior_field}"
            )));
        }
        Ok(SolenoidSpec {
            radius,
            interior_field,
            physical_length: None,
            tkachuk: None,
        })
    }

    pub fn with_length(mut self, length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidInput(format!("solenoid length must be > 0, got {length}")));
        }
        self.physical_length = Some(length);
        Ok(self)
    }

    /// Attaches a Tkachuk winding; requires `4 mu_bar = j a^2`.
    pub fn with_tkachuk(mut self, length: f64, magnetization_density: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidInput(format!("Tkachuk length must be > 0, got {length}")));
        }
        let expected = 0.25 * self.interior_field * self.radius * self.radius;
        if ((magnetization_density - expected) / expected).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "4 mu_bar = j a^2 violated: mu_bar = {magnetization_density}, j a^2 / 4 = {expected}"
            )));
        }
        self.tkachuk = Some(TkachukWinding {
            length,
            magnetization_density,
        });
        Ok(self)
    }

    /// The Tkachuk solenoid matched to an AB solenoid: same radius,
    /// `mu_bar = mu_AB / l` with `4 mu_AB = j a^2`.
    pub fn tkachuk_from_ab(ab: &SolenoidSpec, length: f64) -> Result<Self> {
        let mu_ab = 0.25 * ab.interior_field * ab.radius * ab.radius;
        SolenoidSpec::new(ab.radius, ab.interior_field / length)?.with_tkachuk(length, mu_ab / length)
    }

    /// Massless flux `pi a^2 j`.
    pub fn flux0(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius * self.interior_field
    }
}

/// Massless field: `j` inside, zero outside.
pub fn b_massless(rho: f64, s: &SolenoidSpec) -> f64 {
    if rho < s.radius {
        s.interior_field
    } else {
        0.0
    }
}

/// Massless potential: `j rho / 2` inside, `j a^2 / (2 rho)` outside.
pub fn a_phi_massless(rho: f64, s: &SolenoidSpec) -> f64 {
    let a = s.radius;
    if rho < a {
        0.5 * s.interior_field * rho
    } else {
        0.5 * s.interior_field * a * a / rho
    }
}

/// Axial field `B_z(rho)` (gauss). `rho < a` uses the interior branch.
/// Returns NaN for negative `rho`.
pub fn b_total(rho: f64, s: &SolenoidSpec, m: InverseRange) -> f64 {
    if rho < 0.0 || rho.is_nan() {
        return f64::NAN;
    }
    let (a, j, m) = (s.radius, s.interior_field, m.value());
    if m == 0.0 {
        return b_massless(rho, s);
    }
    let (xa, xr) = (m * a, m * rho);
    if rho < a {
        if xa <= SMALL_ARG {
            j * (1.0 + bessel::xk1m1(xa)) * (1.0 + bessel::i0m1(xr))
        } else {
            j * xa * bessel::k1e(xa) * bessel::i0e(xr) * (xr - xa).exp()
        }
    } else {
        exterior_b(xa, xr, j)
    }
}

fn exterior_b(xa: f64, xr: f64, j: f64) -> f64 {
    if xa <= SMALL_ARG {
        -j * 0.5 * xa * xa * (1.0 + bessel::i1_excess(xa)) * bessel::k0(xr)
    } else {
        -j * xa * bessel::i1e(xa) * bessel::k0e(xr) * (xa - xr).exp()
    }
}

/// Mass correction `B - B0` (gauss), accurate for arbitrarily small `m`.
pub fn delta_b(rho: f64, s: &SolenoidSpec, m: InverseRange) -> f64 {
    if rho < 0.0 || rho.is_nan() {
        return f64::NAN;
    }
    let (a, j, mv) = (s.radius, s.interior_field, m.value());
    if mv == 0.0 {
        return 0.0;
    }
    let (xa, xr) = (mv * a, mv * rho);
    if rho < a {
        if xa <= SMALL_ARG {
            let (e2, e3) = (bessel::xk1m1(xa), bessel::i0m1(xr));
            j * (e2 + e3 + e2 * e3)
        } else {
            b_total(rho, s, m) - j
        }
    } else {
        exterior_b(xa, xr, j)
    }
}

/// Azimuthal vector potential `A_phi(rho)` (gauss cm), `rho > 0`.
pub fn a_phi(rho: f64, s: &SolenoidSpec, m: InverseRange) -> Result<f64> {
    check_rho(rho)?;
    let (a, j, mv) = (s.radius, s.interior_field, m.value());
    if mv == 0.0 {
        return Ok(a_phi_massless(rho, s));
    }
    let (xa, xr) = (mv * a, mv * rho);
    Ok(if rho < a {
        if xa <= SMALL_ARG {
            0.5 * j * rho * (1.0 + bessel::xk1m1(xa)) * (1.0 + bessel::i1_excess(xr))
        } else {
            j * a * bessel::k1e(xa) * bessel::i1e(xr) * (xr - xa).exp()
        }
    } else if xr <= SMALL_ARG {
        0.5 * j * a * a / rho * (1.0 + bessel::i1_excess(xa)) * (1.0 + bessel::xk1m1(xr))
    } else {
        j * a * bessel::i1e(xa) * bessel::k1e(xr) * (xa - xr).exp()
    })
}

/// Mass correction `A_phi - A_phi(m = 0)`, accurate for arbitrarily small `m`.
pub fn delta_a_phi(rho: f64, s: &SolenoidSpec, m: InverseRange) -> Result<f64> {
    check_rho(rho)?;
    let (a, j, mv) = (s.radius, s.interior_field, m.value());
    if mv == 0.0 {
        return Ok(0.0);
    }
    let (xa, xr) = (mv * a, mv * rho);
    if rho < a {
        if xa <= SMALL_ARG {
            let (e2, e1) = (bessel::xk1m1(xa), bessel::i1_excess(xr));
            return Ok(0.5 * j * rho * (e2 + e1 + e2 * e1));
        }
    } else if xr <= SMALL_ARG {
        let (e1, e2) = (bessel::i1_excess(xa), bessel::xk1m1(xr));
        return Ok(0.5 * j * a * a / rho * (e1 + e2 + e1 * e2));
    }
    Ok(a_phi(rho, s, m)? - a_phi_massless(rho, s))
}

/// Flux through the disk of radius `rho` from Stokes: `2 pi rho A_phi`.
pub fn enclosed_flux(rho: f64, s: &SolenoidSpec, m: InverseRange) -> Result<f64> {
    Ok(2.0 * std::f64::consts::PI * rho * a_phi(rho, s, m)?)
}

/// `∫_0^rho B 2 pi rho' d rho'` by adaptive quadrature, split at the winding.
///
/// Past `m rho = 1` the enclosed flux is exponentially small and the direct
/// integral is all cancellation, so it is evaluated as minus the outer tail
/// (the net flux vanishes for `m > 0`).
pub fn enclosed_flux_quadrature(rho: f64, s: &SolenoidSpec, m: InverseRange, tol: Tolerance) -> Result<QuadResult> {
    let f = |r: f64| 2.0 * std::f64::consts::PI * r * b_total(r, s, m);
    let mv = m.value();
    if mv > 0.0 && rho > s.radius && mv * rho > 1.0 {
        let pts: Vec<f64> = [0.0, 2.0, 5.0, 12.0, 25.0, 60.0].iter().map(|k| rho + k / mv).collect();
        let tail = integrate_pieces(f, &pts, tol)?;
        return Ok(QuadResult {
            value: -tail.value,
            error: tail.error,
        });
    }
    integrate_pieces(f, &split_at_winding(rho, s.radius), tol)
}

/// `∫_0^rho (B - B0) 2 pi rho' d rho'` by adaptive quadrature.
pub fn delta_flux_quadrature(rho: f64, s: &SolenoidSpec, m: InverseRange, tol: Tolerance) -> Result<QuadResult> {
    let f = |r: f64| 2.0 * std::f64::consts::PI * r * delta_b(r, s, m);
    integrate_pieces(f, &split_at_winding(rho, s.radius), tol)
}

fn split_at_winding(rho: f64, a: f64) -> Vec<f64> {
    if rho > a {
        vec![0.0, a, rho]
    } else {
        vec![0.0, rho]
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("rho must be > 0, got {rho}")))
    }
}

fn check_massive(m: InverseRange) -> Result<()> {
    if m.value() > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "Pi(rho) is defined for m > 0 only; use b_total / a_phi for the massless limit".into(),
        ))
    }
}

/// The kernel `Pi(rho)` in its Bessel-integral form, with its radial integrals done in closed
/// form (`∫_0^x t I0(t) dt = x I1(x)`, `∫ t K0(t) dt = -t K1(t)`).
pub fn pi_kernel(rho: f64, s: &SolenoidSpec, m: InverseRange) -> Result<f64> {
    check_rho(rho)?;
    check_massive(m)?;
    let mv = m.value();
    let m2 = mv * mv;
    if rho < s.radius {
        // j [K0 rho I1/m + I0 (rho K1(m rho) - a K1(m a))/m] = (j/m^2)(1 - m a K1(m a) I0(m rho))
        Ok(-delta_b(rho, s, m) / m2)
    } else {
        Ok(exterior_b(mv * s.radius, mv * rho, s.interior_field) / m2)
    }
}

/// [`pi_kernel`] with its two radial integrals evaluated by adaptive quadrature.
pub fn pi_kernel_quadrature(rho: f64, s: &SolenoidSpec, m: InverseRange, tol: Tolerance) -> Result<QuadResult> {
    check_rho(rho)?;
    check_massive(m)?;
    let (a, j, mv) = (s.radius, s.interior_field, m.value());
    let i0_moment = |r: f64| bessel::i0(mv * r) * r;
    let k0_moment = |r: f64| bessel::k0(mv * r) * r;
    if rho < a {
        let inner = integrate(i0_moment, 0.0, rho, tol)?;
        let outer = integrate(k0_moment, rho, a, tol)?;
        let (k0r, i0r) = (bessel::k0(mv * rho), bessel::i0(mv * rho));
        Ok(QuadResult {
            value: j * (k0r * inner.value + i0r * outer.value),
            error: j.abs() * (k0r * inner.error + i0r * outer.error),
        })
    } else {
        let inner = integrate(i0_moment, 0.0, a, tol)?;
        let k0r = bessel::k0(mv * rho);
        Ok(QuadResult {
            value: -j * k0r * inner.value,
            error: j.abs() * k0r * inner.error,
        })
    }
}

/// Small-mass exterior leakage magnitude `(j/2)(m a)^2 ln(2/(m rho))`.
///
/// Magnitude only: the exact exterior correction is negative. Valid for
/// `rho > a` and `m rho <` [`ASYMPTOTIC_WINDOW`]; the dropped Euler-gamma
/// term makes it overestimate `|B - B0|` by roughly `gamma / ln(2/(m rho))`.
pub fn delta_b_asymptotic(rho: f64, s: &SolenoidSpec, m: InverseRange) -> Result<f64> {
    let a = s.radius;
    if !(rho > a) {
        return Err(Error::OutsideValidity {
            what: "rho / a",
            value: rho / a,
            limit: 1.0,
        });
    }
    let x = m.value() * rho;
    if x >= ASYMPTOTIC_WINDOW {
        return Err(Error::OutsideValidity {
            what: "m rho",
            value: x,
            limit: ASYMPTOTIC_WINDOW,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let ma = m.value() * a;
    Ok(0.5 * s.interior_field * ma * ma * (2.0 / x).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> SolenoidSpec {
        SolenoidSpec::new(1.0, 1.0).unwrap()
    }

    fn m(v: f64) -> InverseRange {
        InverseRange::new(v).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn exterior_kernel_value() {
        let p = pi_kernel(2.0, &unit(), m(0.1)).unwrap();
        assert!((p + 0.8774).abs() < 1e-4, "{p}");
    }

    #[test]
    fn exterior_kernel_negative() {
        for rho in [1.0, 1.5, 3.0, 10.0, 100.0] {
            assert!(pi_kernel(rho, &unit(), m(0.1)).unwrap() < 0.0);
        }
    }

    #[test]
    fn kernel_rejects_degenerate() {
        assert!(pi_kernel(0.0, &unit(), m(0.1)).is_err());
        assert!(pi_kernel(1.0, &unit(), InverseRange::ZERO).is_err());
    }

    #[test]
    fn axis_field_screened() {
        let b0 = b_total(0.0, &unit(), m(0.1));
        assert!((b0 - 0.98538).abs() < 1e-4, "{b0}");
        assert!(b0 < 1.0);
    }

    #[test]
    fn exterior_correction_matches_kernel() {
        let db = delta_b(2.0, &unit(), m(0.1));
        assert!((db + 8.774e-3).abs() < 1e-4);
        let p = pi_kernel(2.0, &unit(), m(0.1)).unwrap();
        assert!(rel(db, 0.01 * p) < 1e-14);
    }

    #[test]
    fn interior_kernel_has_opposite_sign_to_correction() {
        let s = unit();
        for rho in [0.1, 0.5, 0.9] {
            let p = pi_kernel(rho, &s, m(0.1)).unwrap();
            let db = delta_b(rho, &s, m(0.1));
            assert!(rel(0.01 * p, -db) < 1e-13);
        }
    }

    #[test]
    fn massless_branch() {
        let s = SolenoidSpec::new(0.3, -2.5).unwrap();
        assert_eq!(b_total(0.1, &s, InverseRange::ZERO), -2.5);
        assert_eq!(b_total(0.5, &s, InverseRange::ZERO), 0.0);
        assert_eq!(delta_b(0.5, &s, InverseRange::ZERO), 0.0);
        let a = a_phi(2.0, &unit(), InverseRange::ZERO).unwrap();
        assert_eq!(a, 0.25);
    }

    #[test]
    fn potential_value() {
        let v = a_phi(2.0, &unit(), m(0.1)).unwrap();
        assert!((v - 0.23910).abs() < 1e-4, "{v}");
        assert!(a_phi(0.0, &unit(), m(0.1)).is_err());
    }

    #[test]
    fn large_argument_branches_agree_with_direct_products() {
        let s = SolenoidSpec::new(5.0, 1.0).unwrap();
        let mm = m(1.0);
        let rho = 3.0;
        let direct = 5.0 * bessel::k1(5.0) * bessel::i0(3.0);
        assert!(rel(b_total(rho, &s, mm), direct) < 1e-12);
        let direct_a = 5.0 * bessel::i1(5.0) * bessel::k1(8.0);
        assert!(rel(a_phi(8.0, &s, mm).unwrap(), direct_a) < 1e-12);
    }

    #[test]
    fn deep_tail_is_finite() {
        let s = unit();
        let b = b_total(5e4, &s, m(1.0));
        assert!(b.is_finite() && b <= 0.0);
        assert!(a_phi(5e4, &s, m(1.0)).unwrap() >= 0.0);
    }

    #[test]
    fn corrections_consistent_with_totals() {
        let s = unit();
        for mv in [0.05, 0.7, 3.0] {
            for rho in [0.2, 0.8, 1.2, 4.0] {
                let total = a_phi(rho, &s, m(mv)).unwrap();
                let d = delta_a_phi(rho, &s, m(mv)).unwrap();
                assert!((total - a_phi_massless(rho, &s) - d).abs() < 1e-13);
                let bt = b_total(rho, &s, m(mv));
                assert!((bt - b_massless(rho, &s) - delta_b(rho, &s, m(mv))).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn surface_jump_equals_source() {
        let s = SolenoidSpec::new(0.7, 3.0).unwrap();
        for mv in [1e-6, 0.1, 2.0, 10.0] {
            let inside = b_total(0.7 * (1.0 - 1e-15), &s, m(mv));
            let outside = b_total(0.7, &s, m(mv));
            assert!(rel(inside - outside, 3.0) < 1e-10, "m = {mv}");
        }
    }

    #[test]
    fn asymptotic_window() {
        let s = unit();
        assert!(matches!(
            delta_b_asymptotic(5.0, &s, m(0.1)),
            Err(Error::OutsideValidity { .. })
        ));
        assert!(delta_b_asymptotic(0.5, &s, m(1e-3)).is_err());
        assert!(delta_b_asymptotic(5.0, &s, m(1e-3)).unwrap() > 0.0);
    }

    #[test]
    fn asymptotic_tracks_exact() {
        let s = unit();
        let mm = m(1e-4);
        let rho = 10.0; // m rho = 1e-3, m a = 1e-4
        let ratio = delta_b(rho, &s, mm).abs() / delta_b_asymptotic(rho, &s, mm).unwrap();
        assert!((ratio - 1.0).abs() < 0.15, "{ratio}");
    }

    #[test]
    fn asymptotic_quadratic_scaling() {
        let s = unit();
        for rho in [2.0, 10.0] {
            let lo = delta_b_asymptotic(rho, &s, m(1e-5)).unwrap();
            let hi = delta_b_asymptotic(rho, &s, m(2e-5)).unwrap();
            let r = hi / lo;
            assert!((3.5..=4.0).contains(&r), "{r}");
        }
    }

    #[test]
    fn tkachuk_winding_relation() {
        let ab = SolenoidSpec::new(0.1, 3000.0).unwrap();
        let tk = SolenoidSpec::tkachuk_from_ab(&ab, 1.0).unwrap();
        let w = tk.tkachuk.unwrap();
        assert!(rel(4.0 * w.magnetization_density, tk.interior_field * 0.01) < 1e-14);
        assert!(ab.with_tkachuk(1.0, 1.0).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(SolenoidSpec::new(0.0, 1.0).is_err());
        assert!(SolenoidSpec::new(1.0, 0.0).is_err());
        assert!(unit().with_length(-1.0).is_err());
        assert_eq!(unit().with_length(50.0).unwrap().physical_length, Some(50.0));
    }
}
