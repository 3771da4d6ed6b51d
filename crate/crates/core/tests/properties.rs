use std::f64::consts::PI;

use proptest::prelude::*;

use proca_ab::bounds::{self, EffectSetup, PrecisionSpec};
use proca_ab::deflection;
use proca_ab::field::{self, SolenoidSpec};
use proca_ab::numerics::Tolerance;
use proca_ab::phases::{self, PathSpec, PhaseMethod, ProbeSpec};
use proca_ab::units::{self, InverseRange, MassGrams, BOHR_RADIUS, ELEMENTARY_CHARGE};

const TIGHT: Tolerance = Tolerance { rel: 1e-12, abs: 1e-300 };

fn m(v: f64) -> InverseRange {
    InverseRange::new(v).unwrap()
}

fn log_range(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #[test]
    fn unit_round_trip(g in log_range(1e-70, 1e-30)) {
        let back = units::to_grams(units::to_inverse_cm(MassGrams::new(g).unwrap())).value();
        prop_assert!(rel(back, g) <= 1e-12);
    }

    #[test]
    fn heavier_photon_shorter_range(r1 in log_range(1.0, 1e20), f in 1.001f64..1e3) {
        let near = InverseRange::from_range_cm(r1).unwrap();
        let far = InverseRange::from_range_cm(r1 * f).unwrap();
        prop_assert!(units::to_grams(near).value() > units::to_grams(far).value());
    }

    #[test]
    fn closed_loop_ratios_coincide(x in log_range(1e-6, 0.099), rho_over_a in 2.0f64..200.0, l in 0.1f64..10.0) {
        let a = 0.1;
        let rho = a * rho_over_a;
        let mm = m(x / rho);
        let ab = SolenoidSpec::new(a, 1.0).unwrap();
        let tk = SolenoidSpec::tkachuk_from_ab(&ab, l).unwrap();
        let path = PathSpec::closed_loop(rho).unwrap();
        let r_ab = phases::ab_closed_asymptotic(&ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap(), &ab, &path, mm).unwrap().ratio;
        let r_tk = phases::tkachuk_asymptotic(&ProbeSpec::electric_dipole(ELEMENTARY_CHARGE * BOHR_RADIUS).unwrap(), &tk, &path, mm).unwrap().ratio;
        prop_assert!(rel(r_tk, r_ab) <= 1e-12);
        prop_assert!(rel(r_ab, phases::closed_loop_ratio(x)) <= 1e-12);
    }

    #[test]
    fn ratio_times_phi0_is_delta(x in log_range(1e-6, 0.09), a in 0.05f64..2.0, j in -1e4f64..1e4) {
        prop_assume!(j.abs() > 1e-3);
        let s = SolenoidSpec::new(a, j).unwrap();
        let q = ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap();
        let rho = 10.0 * a;
        let loop_path = PathSpec::closed_loop(rho).unwrap();
        let chord = PathSpec::open_segment(4.0 * rho, rho).unwrap();
        let (mm, mc) = (m(x / rho), m(x / chord.characteristic_length()));
        let results = [
            phases::ab_closed_asymptotic(&q, &s, &loop_path, mm).unwrap(),
            phases::ab_closed_exact(&q, &s, &loop_path, mm).unwrap(),
            phases::open_path_pm_q_asymptotic(&q, &s, &chord, mc).unwrap(),
            phases::open_path_pm_q_exact(&q, &s, &chord, mc).unwrap(),
        ];
        for r in results {
            prop_assert!((r.ratio * r.phi0 - r.delta_phi).abs() <= 1e-12 * r.delta_phi.abs());
        }
    }

    #[test]
    fn ratio_monotone_in_window(x1 in log_range(1e-6, 0.05), f in 1.01f64..1.9) {
        prop_assert!(phases::closed_loop_ratio(x1 * f) > phases::closed_loop_ratio(x1));
        let (x, y) = (3000.0, 800.0);
        let r = f64::hypot(x, y);
        prop_assert!(phases::pm_q_ratio(x1 * f / r, x, y) > phases::pm_q_ratio(x1 / r, x, y));
    }

    #[test]
    fn stokes_and_continuity(a in 0.05f64..5.0, j in 0.1f64..1e3, ma in log_range(1e-4, 3.0), t in 0.02f64..20.0) {
        let s = SolenoidSpec::new(a, j).unwrap();
        let mm = m(ma / a);
        let rho = a * t;
        let stokes = field::enclosed_flux(rho, &s, mm).unwrap();
        let quad = field::enclosed_flux_quadrature(rho, &s, mm, TIGHT).unwrap().value;
        prop_assert!((stokes - quad).abs() <= 1e-6 * quad.abs().max(1e-12 * s.flux0()));
        let eps = 1e-12 * a;
        let (left, right) = (field::a_phi(a - eps, &s, mm).unwrap(), field::a_phi(a + eps, &s, mm).unwrap());
        prop_assert!(rel(left, right) <= 1e-10);
        // the surface current sets the field jump
        let jump = field::b_total(a * (1.0 - 1e-13), &s, mm) - field::b_total(a, &s, mm);
        prop_assert!(rel(jump, j) <= 1e-9);
    }

    #[test]
    fn interior_screening(ma1 in log_range(1e-4, 5.0), f in 1.01f64..3.0) {
        let s = SolenoidSpec::new(1.0, 1.0).unwrap();
        let b1 = field::b_total(0.0, &s, m(ma1));
        let b2 = field::b_total(0.0, &s, m(ma1 * f));
        prop_assert!(0.0 < b2 && b2 < b1 && b1 < 1.0);
    }

    #[test]
    fn impulse_linear_in_q_and_j(kq in -5.0f64..5.0, kj in -5.0f64..5.0, x in log_range(1e-6, 1e-2)) {
        prop_assume!(kq.abs() > 0.05 && kj.abs() > 0.05);
        let path = PathSpec::open_segment(30.0, 10.0).unwrap();
        let mm = m(x / 10.0);
        let base = deflection::transverse_impulse(
            &ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap(),
            &SolenoidSpec::new(0.1, 1.0).unwrap(),
            &path,
            mm,
        ).unwrap();
        let scaled = deflection::transverse_impulse(
            &ProbeSpec::charge(kq * ELEMENTARY_CHARGE).unwrap(),
            &SolenoidSpec::new(0.1, kj).unwrap(),
            &path,
            mm,
        ).unwrap();
        prop_assert!(rel(scaled, kq * kj * base) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inversion_recovers_mass(x0 in log_range(1e-6, 0.05), rho_over_a in 2.0f64..100.0, eps in log_range(1e-4, 1e-2)) {
        let a = 0.1;
        let base = EffectSetup::AbClosed {
            probe: ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap(),
            solenoid: SolenoidSpec::new(a, 1.0).unwrap(),
            rho: a * rho_over_a,
        };
        let m0 = m(x0 / base.characteristic_length());
        let unit = base.observable(m0, PhaseMethod::Asymptotic).unwrap();
        let setup = EffectSetup::AbClosed {
            probe: ProbeSpec::charge(ELEMENTARY_CHARGE).unwrap(),
            solenoid: SolenoidSpec::new(a, 2.0 * PI * eps / unit).unwrap(),
            rho: a * rho_over_a,
        };
        let report = bounds::invert_bound(&setup, &PrecisionSpec::new(eps).unwrap()).unwrap();
        let asym = report.asymptotic.expect("target lies inside the window");
        prop_assert!(rel(asym.m_gamma.value(), m0.value()) <= 1e-6);
        let exact = report.exact.expect("exact inversion always attempted");
        // leading-log and exact agree to the size of the dropped terms
        prop_assert!(rel(exact.m_gamma.value(), m0.value()) <= 0.5);
    }
}
