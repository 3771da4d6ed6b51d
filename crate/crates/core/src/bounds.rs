//! Turning a phase-measurement precision into a photon-mass bound.
//!
//! The effect is "just observable" when `|Δφ(m)| = 2 pi epsilon`. The
//! inversion bisects in `log m`, first with the asymptotic phase inside its
//! window and then with the exact phase over a wider bracket.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{SolenoidSpec, ASYMPTOTIC_WINDOW};
use crate::numerics::{bisect, logspace};
use crate::phases::{self, PhaseMethod, PhaseResult, ProbeSpec};
use crate::units::{self, InverseRange, MassGrams, C, ELEMENTARY_CHARGE, HBAR};

/// Prefactor of the open-path comparison bracket.
pub const BRACKET_PREFACTOR: f64 = 8.0 / PI;

/// Relative bracket width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-9;

/// Exact-method brackets may reach this many inverse characteristic lengths.
pub const EXACT_CEILING_FACTOR: f64 = 30.0;

const MONOTONE_SAMPLES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionSpec {
    pub epsilon: f64,
}

impl PrecisionSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidInput(format!("precision must lie in (0, 1), got {epsilon}")));
        }
        Ok(PrecisionSpec { epsilon })
    }

    /// Smallest resolvable phase, `2 pi epsilon` radians.
    pub fn threshold(&self) -> f64 {
        2.0 * PI * self.epsilon
    }
}

/// The table-top closed-loop AB reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BDReference {
    pub a_bd: f64,
    pub rho_bd: f64,
    pub inv_range_bd: f64,
    pub mass_bd: f64,
    pub epsilon: f64,
}

impl Default for BDReference {
    fn default() -> Self {
        BDReference {
            a_bd: 0.1,
            rho_bd: 10.0,
            inv_range_bd: 1.4e7,
            mass_bd: 2.5e-45,
            epsilon: 1e-3,
        }
    }
}

impl BDReference {
    pub fn m_gamma(&self) -> InverseRange {
        InverseRange::from_range_cm(self.inv_range_bd).expect("positive range")
    }

    /// Massless AB phase implied by the reference bound:
    /// `2 pi epsilon / ((1/2)(m rho)^2 ln(2/(m rho)))`.
    pub fn phi0_ab(&self) -> f64 {
        2.0 * PI * self.epsilon / phases::closed_loop_ratio(self.rho_bd / self.inv_range_bd)
    }

    /// Interior field of the reference solenoid that produces [`Self::phi0_ab`]
    /// for an electron-charge probe.
    pub fn interior_field(&self) -> f64 {
        self.phi0_ab() * HBAR * C / (ELEMENTARY_CHARGE * PI * self.a_bd * self.a_bd)
    }

    pub fn solenoid(&self) -> SolenoidSpec {
        SolenoidSpec::new(self.a_bd, self.interior_field()).expect("valid reference solenoid")
    }

    pub fn setup(&self) -> EffectSetup {
        EffectSetup::AbClosed {
            probe: ProbeSpec::charge(ELEMENTARY_CHARGE).expect("nonzero"),
            solenoid: self.solenoid(),
            rho: self.rho_bd,
        }
    }

    pub fn precision(&self) -> PrecisionSpec {
        PrecisionSpec::new(self.epsilon).expect("valid reference precision")
    }

    fn log_factor(&self) -> f64 {
        (2.0 * self.inv_range_bd / self.rho_bd).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectKind {
    AbClosed,
    Tkachuk,
    PmQ,
}

impl fmt::Display for EffectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EffectKind::AbClosed => "ab_closed",
            EffectKind::Tkachuk => "tkachuk",
            EffectKind::PmQ => "pm_q",
        })
    }
}

/// How a bound row was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    Asymptotic,
    ExactQuadrature,
    /// Square-root scaling of the reference bound by a phase ratio, logs dropped.
    ReferenceScaling,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::Asymptotic => "asymptotic",
            BoundMethod::ExactQuadrature => "exact_quadrature",
            BoundMethod::ReferenceScaling => "reference_scaling",
        })
    }
}

impl From<PhaseMethod> for BoundMethod {
    fn from(m: PhaseMethod) -> Self {
        match m {
            PhaseMethod::Asymptotic => BoundMethod::Asymptotic,
            PhaseMethod::ExactQuadrature => BoundMethod::ExactQuadrature,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub effect: EffectKind,
    pub epsilon: f64,
    pub m_gamma: InverseRange,
    /// `1 / m_gamma`, cm.
    pub inverse_range: f64,
    pub mass: MassGrams,
    /// `inverse_range / 1.4e7 cm`.
    pub ratio_vs_bd: f64,
    pub method: BoundMethod,
    /// Factor by which the inverse range would move if the logarithm were
    /// dropped, as in the leading-order comparisons.
    pub neglected_log_correction: f64,
    /// `(|Δφ(m*)| - 2 pi epsilon) / (2 pi epsilon)`; absent for scaling rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward_residual: Option<f64>,
}

impl BoundResult {
    fn new(
        effect: EffectKind,
        epsilon: f64,
        m: InverseRange,
        method: BoundMethod,
        neglected_log_correction: f64,
        bd: &BDReference,
    ) -> Self {
        let inverse_range = m.range_cm();
        BoundResult {
            effect,
            epsilon,
            m_gamma: m,
            inverse_range,
            mass: units::to_grams(m),
            ratio_vs_bd: inverse_range / bd.inv_range_bd,
            method,
            neglected_log_correction,
            forward_residual: None,
        }
    }
}

pub const CSV_HEADER: &str = "effect,epsilon,m_gamma_inv_cm,m_ph_g,ratio_vs_bd,method,neglected_log_correction";

impl BoundResult {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:e},{:e},{:e},{:e},{},{:e}",
            self.effect,
            self.epsilon,
            self.inverse_range,
            self.mass.value(),
            self.ratio_vs_bd,
            self.method,
            self.neglected_log_correction
        )
    }
}

pub fn write_csv<W: Write>(rows: &[BoundResult], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

/// One experiment: probe, solenoid and path for a given effect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "effect", rename_all = "snake_case")]
pub enum EffectSetup {
    AbClosed {
        probe: ProbeSpec,
        solenoid: SolenoidSpec,
        rho: f64,
    },
    Tkachuk {
        probe: ProbeSpec,
        solenoid: SolenoidSpec,
        rho: f64,
    },
    PmQ {
        probe: ProbeSpec,
        solenoid: SolenoidSpec,
        x: f64,
        y: f64,
    },
}

impl EffectSetup {
    pub fn kind(&self) -> EffectKind {
        match self {
            EffectSetup::AbClosed { .. } => EffectKind::AbClosed,
            EffectSetup::Tkachuk { .. } => EffectKind::Tkachuk,
            EffectSetup::PmQ { .. } => EffectKind::PmQ,
        }
    }

    pub fn solenoid(&self) -> &SolenoidSpec {
        match self {
            EffectSetup::AbClosed { solenoid, .. }
            | EffectSetup::Tkachuk { solenoid, .. }
            | EffectSetup::PmQ { solenoid, .. } => solenoid,
        }
    }

    pub fn probe(&self) -> &ProbeSpec {
        match self {
            EffectSetup::AbClosed { probe, .. } | EffectSetup::Tkachuk { probe, .. } | EffectSetup::PmQ { probe, .. } => {
                probe
            }
        }
    }

    pub fn path(&self) -> Result<phases::PathSpec> {
        match *self {
            EffectSetup::AbClosed { rho, .. } | EffectSetup::Tkachuk { rho, .. } => phases::PathSpec::closed_loop(rho),
            EffectSetup::PmQ { x, y, .. } => phases::PathSpec::open_segment(x, y),
        }
    }

    /// `rho` for loops, `sqrt(x^2 + y^2)` for segments.
    pub fn characteristic_length(&self) -> f64 {
        match *self {
            EffectSetup::AbClosed { rho, .. } | EffectSetup::Tkachuk { rho, .. } => rho,
            EffectSetup::PmQ { x, y, .. } => x.hypot(y),
        }
    }

    /// Largest `m` at which the asymptotic form is trusted.
    pub fn window_ceiling(&self) -> f64 {
        ASYMPTOTIC_WINDOW / self.characteristic_length()
    }

    /// Both phase evaluations at `m`.
    pub fn phases(&self, m: InverseRange) -> Result<phases::EffectPhases> {
        let path = self.path()?;
        match self {
            EffectSetup::AbClosed { probe, solenoid, .. } => phases::ab_closed(probe, solenoid, &path, m),
            EffectSetup::Tkachuk { probe, solenoid, .. } => phases::tkachuk(probe, solenoid, &path, m),
            EffectSetup::PmQ { probe, solenoid, .. } => phases::open_path_pm_q(probe, solenoid, &path, m),
        }
    }

    /// One phase evaluation with the requested method.
    pub fn phase(&self, m: InverseRange, method: PhaseMethod) -> Result<PhaseResult> {
        let path = self.path()?;
        use PhaseMethod::*;
        match (self, method) {
            (EffectSetup::AbClosed { probe, solenoid, .. }, Asymptotic) => {
                phases::ab_closed_asymptotic(probe, solenoid, &path, m)
            }
            (EffectSetup::AbClosed { probe, solenoid, .. }, ExactQuadrature) => {
                phases::ab_closed_exact(probe, solenoid, &path, m)
            }
            (EffectSetup::Tkachuk { probe, solenoid, .. }, Asymptotic) => {
                phases::tkachuk_asymptotic(probe, solenoid, &path, m)
            }
            (EffectSetup::Tkachuk { probe, solenoid, .. }, ExactQuadrature) => {
                phases::tkachuk_exact(probe, solenoid, &path, m)
            }
            (EffectSetup::PmQ { probe, solenoid, .. }, Asymptotic) => {
                phases::open_path_pm_q_asymptotic(probe, solenoid, &path, m)
            }
            (EffectSetup::PmQ { probe, solenoid, .. }, ExactQuadrature) => {
                phases::open_path_pm_q_exact(probe, solenoid, &path, m)
            }
        }
    }

    /// Observable `|Δφ(m)|`. For the open path the exact value is the
    /// superposed `+q`/`-q` correction.
    pub fn observable(&self, m: InverseRange, method: PhaseMethod) -> Result<f64> {
        let p = self.phase(m, method)?;
        let scale = match (self, method) {
            (EffectSetup::PmQ { .. }, PhaseMethod::ExactQuadrature) => phases::PM_Q_SUPERPOSITION_FACTOR,
            _ => 1.0,
        };
        Ok(scale * p.delta_phi.abs())
    }

    /// The logarithm multiplying `m^2` in the asymptotic ratio.
    fn log_factor(&self, m: f64) -> f64 {
        (2.0 / (m * self.characteristic_length())).ln()
    }
}

/// Inversion outcome: the asymptotic row when the bound lies inside the
/// window, and the exact row whenever the exact bracket reaches it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub asymptotic: Option<BoundResult>,
    pub exact: Option<BoundResult>,
    /// Messages for methods that could not produce a bound.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl BoundReport {
    /// The asymptotic row if present, otherwise the exact one.
    pub fn primary(&self) -> &BoundResult {
        self.asymptotic.as_ref().or(self.exact.as_ref()).expect("at least one row")
    }

    pub fn rows(&self) -> Vec<BoundResult> {
        self.asymptotic.iter().chain(self.exact.iter()).cloned().collect()
    }
}

/// Solves `|Δφ(m)| = 2 pi epsilon` for one method, with `m <= ceiling`.
pub fn invert_with(setup: &EffectSetup, prec: &PrecisionSpec, method: PhaseMethod, ceiling: f64) -> Result<BoundResult> {
    let target = prec.threshold();
    let f = |m: f64| -> Result<f64> { setup.observable(InverseRange::new(m)?, method) };
    // the asymptotic window is open at the ceiling
    let hi_limit = match method {
        PhaseMethod::Asymptotic => ceiling * (1.0 - 1e-12),
        PhaseMethod::ExactQuadrature => ceiling,
    };
    let start = match method {
        PhaseMethod::Asymptotic => hi_limit,
        PhaseMethod::ExactQuadrature => hi_limit.min(setup.window_ceiling()),
    };
    let mut hi = start;
    while f(hi)? < target {
        if hi >= hi_limit {
            return Err(Error::Unreachable { ceiling });
        }
        hi = (hi * 2.0).min(hi_limit);
    }
    let mut lo = hi * 1e-12;
    while f(lo)? >= target {
        lo *= 1e-6;
        if lo < f64::MIN_POSITIVE * 1e20 {
            return Err(Error::InvalidInput("threshold is met at vanishing photon mass".into()));
        }
    }
    let samples = logspace(lo, hi, MONOTONE_SAMPLES);
    let mut prev = f(samples[0])?;
    for &m in &samples[1..] {
        let v = f(m)?;
        if !(v > prev) {
            return Err(Error::NotMonotone { at: m });
        }
        prev = v;
    }

    let mut failure = None;
    let root = bisect(
        |m| match f(m) {
            Ok(v) => v - target,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        BISECTION_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let m_star = InverseRange::new(root?)?;
    let mut row = BoundResult::new(
        setup.kind(),
        prec.epsilon,
        m_star,
        method.into(),
        setup.log_factor(m_star.value()).sqrt(),
        &BDReference::default(),
    );
    row.forward_residual = Some((f(m_star.value())? - target) / target);
    Ok(row)
}

/// Inverts with both methods. The asymptotic search stops at the window
/// edge; the exact search may extend to
/// [`EXACT_CEILING_FACTOR`]` / characteristic_length`.
pub fn invert_bound(setup: &EffectSetup, prec: &PrecisionSpec) -> Result<BoundReport> {
    let mut notes = Vec::new();
    let asymptotic = match invert_with(setup, prec, PhaseMethod::Asymptotic, setup.window_ceiling()) {
        Ok(r) => Some(r),
        Err(e @ Error::Unreachable { .. }) => {
            notes.push(format!("asymptotic: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let exact_ceiling = EXACT_CEILING_FACTOR / setup.characteristic_length();
    let exact = match invert_with(setup, prec, PhaseMethod::ExactQuadrature, exact_ceiling) {
        Ok(r) => Some(r),
        Err(e @ (Error::Unreachable { .. } | Error::NotMonotone { .. })) if asymptotic.is_some() => {
            notes.push(format!("exact_quadrature: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    Ok(BoundReport { asymptotic, exact, notes })
}

/// `[phi0_T / phi0_AB]^(1/2)` for a dipole `d` circling a solenoid of length
/// `l` whose magnetization is the reference AB magnetization spread over
/// `l`. Equals `[a0 / l]^(1/2)` for `d = e a0`.
pub fn compare_tkachuk(d: f64, l: f64, bd: &BDReference) -> Result<f64> {
    if !(d > 0.0 && l > 0.0) {
        return Err(Error::InvalidInput(format!("d and l must be > 0, got d = {d}, l = {l}")));
    }
    let ab = bd.solenoid();
    let mu_ab = 0.25 * ab.interior_field * ab.radius * ab.radius;
    let phi0_t = 4.0 * PI * d * (mu_ab / l) / (HBAR * C);
    Ok((phi0_t / bd.phi0_ab()).sqrt())
}

/// Tkachuk bound from the reference by square-root scaling.
pub fn tkachuk_comparison_row(d: f64, l: f64, bd: &BDReference) -> Result<BoundResult> {
    let ratio = compare_tkachuk(d, l, bd)?;
    let m = InverseRange::from_range_cm(bd.inv_range_bd * ratio)?;
    // same rho, so the logs differ only through m
    let correction = ((2.0 / (m.value() * bd.rho_bd)).ln() / bd.log_factor()).sqrt();
    Ok(BoundResult::new(
        EffectKind::Tkachuk,
        bd.epsilon,
        m,
        BoundMethod::ReferenceScaling,
        correction,
        bd,
    ))
}

/// `(8/pi) (phi0/phi0_BD) (x y / rho_BD^2)` with
/// `phi0/phi0_BD = j_ratio a^2 / a_BD^2`.
pub fn pm_q_bracket(a: f64, x: f64, y: f64, j_ratio: f64, bd: &BDReference) -> f64 {
    BRACKET_PREFACTOR * j_ratio * (a * a) / (bd.a_bd * bd.a_bd) * (x * y) / (bd.rho_bd * bd.rho_bd)
}

/// Open-path bound by scaling the reference: `m^-1 = m_BD^-1 sqrt(bracket)`.
pub fn compare_pm_q(s: &SolenoidSpec, path: &phases::PathSpec, j_ratio: f64, bd: &BDReference) -> Result<BoundResult> {
    let (x, y) = path.segment(s)?;
    if !(j_ratio.is_finite() && j_ratio > 0.0) {
        return Err(Error::InvalidInput(format!("j ratio must be > 0, got {j_ratio}")));
    }
    let bracket = pm_q_bracket(s.radius, x, y, j_ratio, bd);
    let m = InverseRange::from_range_cm(bd.inv_range_bd * bracket.sqrt())?;
    let log_pm_q = (2.0 / (m.value() * x.hypot(y))).ln();
    Ok(BoundResult::new(
        EffectKind::PmQ,
        bd.epsilon,
        m,
        BoundMethod::ReferenceScaling,
        (log_pm_q / bd.log_factor()).sqrt(),
        bd,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn precision_validation() {
        assert!(PrecisionSpec::new(0.0).is_err());
        assert!(PrecisionSpec::new(1.0).is_err());
        assert!(rel(PrecisionSpec::new(1e-3).unwrap().threshold(), 2.0 * PI * 1e-3) < 1e-15);
    }

    #[test]
    fn reference_phase_and_field() {
        let bd = BDReference::default();
        assert!(rel(bd.phi0_ab(), 1.65914e9) < 1e-4, "{}", bd.phi0_ab());
        assert!((3000.0..4000.0).contains(&bd.interior_field()));
        let closure = units::to_grams(bd.m_gamma()).value() / bd.mass_bd;
        assert!((closure - 1.0).abs() < 0.05);
    }

    #[test]
    fn reference_closure() {
        let bd = BDReference::default();
        let r = invert_bound(&bd.setup(), &bd.precision()).unwrap();
        let a = r.asymptotic.unwrap();
        assert!(rel(a.inverse_range, 1.4e7) < 1e-6, "{}", a.inverse_range);
        assert!(a.forward_residual.unwrap().abs() < 1e-6);
        let e = r.exact.unwrap();
        assert!(rel(e.inverse_range, 1.4e7) < 0.05, "{}", e.inverse_range);
    }

    #[test]
    fn forward_inverse_closure() {
        let s = SolenoidSpec::new(0.2, 500.0).unwrap();
        let setup = EffectSetup::AbClosed {
            probe: ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap(),
            solenoid: s,
            rho: 7.0,
        };
        let m0 = InverseRange::new(3e-6).unwrap();
        for method in [PhaseMethod::Asymptotic, PhaseMethod::ExactQuadrature] {
            let dphi = setup.observable(m0, method).unwrap();
            let prec = PrecisionSpec::new(dphi / (2.0 * PI)).unwrap();
            let ceiling = match method {
                PhaseMethod::Asymptotic => setup.window_ceiling(),
                PhaseMethod::ExactQuadrature => 30.0 / 7.0,
            };
            let r = invert_with(&setup, &prec, method, ceiling).unwrap();
            assert!(rel(r.m_gamma.value(), 3e-6) < 1e-6, "{method:?}");
        }
    }

    #[test]
    fn looser_precision_weakens_bound() {
        let bd = BDReference::default();
        let tight = invert_bound(&bd.setup(), &PrecisionSpec::new(1e-3).unwrap()).unwrap();
        let loose = invert_bound(&bd.setup(), &PrecisionSpec::new(1e-2).unwrap()).unwrap();
        assert!(loose.primary().m_gamma.value() > tight.primary().m_gamma.value());
    }

    #[test]
    fn unreachable_in_window_falls_back_to_exact() {
        // tiny flux: asymptotic window cannot reach 2 pi epsilon
        let setup = EffectSetup::AbClosed {
            probe: ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap(),
            solenoid: SolenoidSpec::new(0.1, 5e-7).unwrap(),
            rho: 10.0,
        };
        let r = invert_bound(&setup, &PrecisionSpec::new(1e-3).unwrap()).unwrap();
        assert!(r.asymptotic.is_none());
        assert!(!r.notes.is_empty());
        let e = r.exact.unwrap();
        assert!(e.m_gamma.value() * 10.0 > ASYMPTOTIC_WINDOW);
    }

    #[test]
    fn hopeless_setup_is_unreachable() {
        let setup = EffectSetup::AbClosed {
            probe: ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap(),
            solenoid: SolenoidSpec::new(0.1, 1e-12).unwrap(),
            rho: 10.0,
        };
        assert!(matches!(
            invert_bound(&setup, &PrecisionSpec::new(1e-3).unwrap()),
            Err(Error::Unreachable { .. })
        ));
    }

    #[test]
    fn tkachuk_comparison() {
        let bd = BDReference::default();
        let r = compare_tkachuk(ELEMENTARY_CHARGE * units::BOHR_RADIUS, 1.0, &bd).unwrap();
        assert!(rel(r, units::BOHR_RADIUS.sqrt()) < 1e-12);
        assert!(rel(r, 7.27e-5) < 0.01);
        let r4 = compare_tkachuk(ELEMENTARY_CHARGE * units::BOHR_RADIUS, 4.0, &bd).unwrap();
        assert!(rel(r4, 0.5 * r) < 1e-12);
        let row = tkachuk_comparison_row(ELEMENTARY_CHARGE * units::BOHR_RADIUS, 1.0, &bd).unwrap();
        assert!(rel(row.ratio_vs_bd, r) < 1e-12);
    }

    #[test]
    fn pm_q_bracket_value() {
        let bd = BDReference::default();
        let b = pm_q_bracket(500.0, 3000.0, 800.0, 1.0, &bd);
        assert!(rel(b.sqrt(), 1.2361e6) < 1e-3, "{}", b.sqrt());
        // self comparison
        let unit = pm_q_bracket(bd.a_bd, bd.rho_bd, bd.rho_bd, 1.0, &bd) / BRACKET_PREFACTOR;
        assert!((unit - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pm_q_comparison_row() {
        let bd = BDReference::default();
        let s = SolenoidSpec::new(500.0, bd.interior_field()).unwrap();
        let path = phases::PathSpec::open_segment(3000.0, 800.0).unwrap();
        let row = compare_pm_q(&s, &path, 1.0, &bd).unwrap();
        assert!((1.5e13..=2.5e13).contains(&row.inverse_range));
        assert!(rel(row.mass.value(), 2e-51) < 0.25);
        assert!(rel(row.ratio_vs_bd, row.inverse_range / 1.4e7) < 1e-12);
        assert!(rel(units::to_inverse_cm(row.mass).value(), row.m_gamma.value()) < 1e-12);
    }

    #[test]
    fn csv_columns() {
        let bd = BDReference::default();
        let r = invert_bound(&bd.setup(), &bd.precision()).unwrap();
        let mut buf = Vec::new();
        write_csv(&r.rows(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 7);
        assert_eq!(row[0], "ab_closed");
        assert_eq!(row[5], "asymptotic");
    }
}
