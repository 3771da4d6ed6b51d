use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{a_phi, b_total, enclosed_flux_quadrature, pi_kernel, pi_kernel_quadrature, SolenoidSpec};
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::units::InverseRange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMethod {
    ClosedForm,
    Quadrature,
    OdeOracle,
}

impl fmt::Display for ProfileMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileMethod::ClosedForm => "closed_form",
            ProfileMethod::Quadrature => "quadrature",
            ProfileMethod::OdeOracle => "ode_oracle",
        })
    }
}

/// Radial samples of `B_z`, `A_phi` and `Pi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldProfile {
    pub grid: Vec<f64>,
    pub b_z: Vec<f64>,
    pub a_phi: Vec<f64>,
    /// NaN where the kernel is undefined (massless limit).
    pub pi_kernel: Vec<f64>,
    pub method: ProfileMethod,
    /// Relative mismatch between `2 pi rho A_phi` and the enclosed flux,
    /// filled in by [`FieldProfile::with_stokes_residual`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stokes_residual: Option<Vec<f64>>,
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty radial grid".into()));
    }
    if grid.iter().any(|&r| !(r.is_finite() && r > 0.0)) {
        return Err(Error::InvalidInput("radial grid samples must be finite and > 0".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("radial grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Profile from the exact closed forms.
pub fn closed_form_profile(s: &SolenoidSpec, m: InverseRange, grid: &[f64]) -> Result<FieldProfile> {
    check_grid(grid)?;
    let mut a = Vec::with_capacity(grid.len());
    let mut pi = Vec::with_capacity(grid.len());
    for &r in grid {
        a.push(a_phi(r, s, m)?);
        pi.push(if m.is_massless() { f64::NAN } else { pi_kernel(r, s, m)? });
    }
    Ok(FieldProfile {
        grid: grid.to_vec(),
        b_z: grid.iter().map(|&r| b_total(r, s, m)).collect(),
        a_phi: a,
        pi_kernel: pi,
        method: ProfileMethod::ClosedForm,
        stokes_residual: None,
    })
}

/// Profile built from quadrature: `Pi` from its integral definition, `B`
/// from `B0 + m^2 Pi` outside and `B0 - m^2 Pi` inside (the corrected
/// interior sign), and `A_phi` from the enclosed flux.
pub fn quadrature_profile(s: &SolenoidSpec, m: InverseRange, grid: &[f64]) -> Result<FieldProfile> {
    check_grid(grid)?;
    let tol = Tolerance { rel: 1e-12, abs: 1e-300 };
    let mv = m.value();
    let mut pi = Vec::with_capacity(grid.len());
    let mut b = Vec::with_capacity(grid.len());
    let mut a = Vec::with_capacity(grid.len());
    for &r in grid {
        let inside = r < s.radius;
        let b0 = if inside { s.interior_field } else { 0.0 };
        if m.is_massless() {
            pi.push(f64::NAN);
            b.push(b0);
        } else {
            let p = pi_kernel_quadrature(r, s, m, tol)?.value;
            pi.push(p);
            b.push(if inside { b0 - mv * mv * p } else { b0 + mv * mv * p });
        }
        let flux = enclosed_flux_quadrature(r, s, m, tol)?.value;
        a.push(flux / (2.0 * std::f64::consts::PI * r));
    }
    Ok(FieldProfile {
        grid: grid.to_vec(),
        b_z: b,
        a_phi: a,
        pi_kernel: pi,
        method: ProfileMethod::Quadrature,
        stokes_residual: None,
    })
}

impl FieldProfile {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Fills `stokes_residual` with `|2 pi rho A_phi - Phi(rho)| / |Phi(rho)|`,
    /// `Phi` being the adaptive-quadrature flux of the closed-form field.
    /// The denominator is floored at `1e-12 pi a^2 |j|`.
    pub fn with_stokes_residual(mut self, s: &SolenoidSpec, m: InverseRange) -> Result<Self> {
        let tol = Tolerance { rel: 1e-12, abs: 1e-300 };
        let floor = 1e-12 * s.flux0().abs();
        let mut out = Vec::with_capacity(self.grid.len());
        for (&r, &a) in self.grid.iter().zip(&self.a_phi) {
            let flux = enclosed_flux_quadrature(r, s, m, tol)?.value;
            let stokes = 2.0 * std::f64::consts::PI * r * a;
            out.push((stokes - flux).abs() / flux.abs().max(floor));
        }
        self.stokes_residual = Some(out);
        Ok(self)
    }

    /// CSV with columns `rho_cm,b_gauss,a_phi_gauss_cm,pi_kernel,method`,
    /// plus `stokes_residual` when present.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let residual = self.stokes_residual.as_ref();
        write!(w, "rho_cm,b_gauss,a_phi_gauss_cm,pi_kernel,method")?;
        if residual.is_some() {
            write!(w, ",stokes_residual")?;
        }
        writeln!(w)?;
        for i in 0..self.grid.len() {
            write!(
                w,
                "{:e},{:e},{:e},{:e},{}",
                self.grid[i], self.b_z[i], self.a_phi[i], self.pi_kernel[i], self.method
            )?;
            if let Some(r) = residual {
                write!(w, ",{:e}", r[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}
