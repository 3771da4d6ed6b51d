//! Flat `key = value` experiment descriptions.
//!
//! ```text
//! # closed-loop reference
//! effect = ab_closed
//! a_cm = 0.1
//! j_gauss = 3478.4
//! rho_cm = 10
//! epsilon = 1e-3
//! ```
//!
//! Keys are case-sensitive and carry their unit in the name. Every line is
//! validated before anything is computed: unknown, duplicate, misplaced and
//! missing keys are errors that name the key and, where there is one, the
//! line.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::{EffectKind, EffectSetup};
use crate::error::Result;
use crate::field::SolenoidSpec;
use crate::phases::{PathSpec, ProbeSpec};
use crate::units::{InverseRange, BOHR_RADIUS, ELEMENTARY_CHARGE};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "`{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(line: Option<usize>, key: Option<&str>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        key: key.map(str::to_owned),
        message: message.into(),
    }
}

const NUMERIC_KEYS: [&str; 11] = [
    "a_cm",
    "j_gauss",
    "rho_cm",
    "x_cm",
    "y_cm",
    "l_cm",
    "dipole_statc_cm",
    "q_statc",
    "epsilon",
    "m_gamma_per_cm",
    "j_ratio",
];
const SWEEP_KEYS: [&str; 5] = ["sweep_param", "sweep_from", "sweep_to", "sweep_steps", "sweep_spacing"];

fn allowed(effect: EffectKind, key: &str) -> bool {
    let common = ["effect", "a_cm", "j_gauss", "epsilon", "m_gamma_per_cm"];
    if common.contains(&key) || SWEEP_KEYS.contains(&key) {
        return true;
    }
    let specific: &[&str] = match effect {
        EffectKind::AbClosed => &["rho_cm", "q_statc"],
        EffectKind::Tkachuk => &["rho_cm", "l_cm", "dipole_statc_cm"],
        EffectKind::PmQ => &["x_cm", "y_cm", "q_statc", "j_ratio"],
    };
    specific.contains(&key)
}

fn required(effect: EffectKind) -> &'static [&'static str] {
    match effect {
        EffectKind::AbClosed => &["a_cm", "j_gauss", "rho_cm", "epsilon"],
        EffectKind::Tkachuk => &["a_cm", "j_gauss", "rho_cm", "l_cm", "epsilon"],
        EffectKind::PmQ => &["a_cm", "j_gauss", "x_cm", "y_cm", "epsilon"],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => crate::numerics::linspace(self.from, self.to, self.steps),
            Spacing::Log => crate::numerics::logspace(self.from, self.to, self.steps),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub effect: EffectKind,
    pub a_cm: f64,
    /// For `tkachuk`, the interior field of the matching closed-loop solenoid;
    /// the dipole solenoid carries `j / l`.
    pub j_gauss: f64,
    pub rho_cm: Option<f64>,
    pub x_cm: Option<f64>,
    pub y_cm: Option<f64>,
    pub l_cm: Option<f64>,
    /// Defaults to `e a0`.
    pub dipole_statc_cm: Option<f64>,
    /// Defaults to `e`.
    pub q_statc: Option<f64>,
    pub epsilon: f64,
    pub m_gamma_per_cm: Option<f64>,
    /// Interior-field ratio to the reference setup; defaults to 1.
    pub j_ratio: Option<f64>,
    pub sweep: Option<SweepSpec>,
}

fn parse_number(line: usize, key: &str, raw: &str) -> std::result::Result<f64, ConfigError> {
    let v: f64 = raw
        .parse()
        .map_err(|_| err(Some(line), Some(key), format!("not a number: `{raw}`")))?;
    if !v.is_finite() {
        return Err(err(Some(line), Some(key), "must be finite"));
    }
    let ok = match key {
        "q_statc" => v != 0.0,
        "epsilon" => v > 0.0 && v < 1.0,
        "m_gamma_per_cm" => v >= 0.0,
        "sweep_from" | "sweep_to" => true,
        _ => v > 0.0,
    };
    if !ok {
        let need = match key {
            "q_statc" => "nonzero",
            "epsilon" => "in (0, 1)",
            "m_gamma_per_cm" => ">= 0",
            _ => "> 0",
        };
        return Err(err(Some(line), Some(key), format!("must be {need}, got {v}")));
    }
    Ok(v)
}

fn parse_effect(line: usize, raw: &str) -> std::result::Result<EffectKind, ConfigError> {
    match raw {
        "ab_closed" => Ok(EffectKind::AbClosed),
        "tkachuk" => Ok(EffectKind::Tkachuk),
        "pm_q" => Ok(EffectKind::PmQ),
        _ => Err(err(
            Some(line),
            Some("effect"),
            format!("unknown effect `{raw}` (expected ab_closed, tkachuk or pm_q)"),
        )),
    }
}

pub fn parse_config(text: &str) -> std::result::Result<ExperimentConfig, ConfigError> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(Some(line), None, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key != "effect" && !NUMERIC_KEYS.contains(&key) && !SWEEP_KEYS.contains(&key) {
            return Err(err(Some(line), Some(key), "unknown key"));
        }
        if value.is_empty() {
            return Err(err(Some(line), Some(key), "missing value"));
        }
        if let Some((first, _)) = entries.get(key) {
            return Err(err(Some(line), Some(key), format!("duplicate key (first set on line {first})")));
        }
        entries.insert(key.to_owned(), (line, value.to_owned()));
    }

    let (effect_line, effect_raw) = entries
        .get("effect")
        .ok_or_else(|| err(None, Some("effect"), "missing required key"))?;
    let effect = parse_effect(*effect_line, effect_raw)?;

    let mut by_line: Vec<_> = entries.iter().collect();
    by_line.sort_by_key(|(_, (line, _))| *line);
    for (key, (line, _)) in &by_line {
        if !allowed(effect, key) {
            return Err(err(Some(*line), Some(key), format!("not used by effect `{effect}`")));
        }
    }
    for key in required(effect) {
        if !entries.contains_key(*key) {
            return Err(err(None, Some(key), format!("missing required key for effect `{effect}`")));
        }
    }

    let mut numbers: BTreeMap<&str, f64> = BTreeMap::new();
    for key in NUMERIC_KEYS.iter().chain(&["sweep_from", "sweep_to"]) {
        if let Some((line, raw)) = entries.get(*key) {
            numbers.insert(key, parse_number(*line, key, raw)?);
        }
    }
    let get = |k: &str| numbers.get(k).copied();

    let sweep = parse_sweep(effect, &entries, &numbers)?;

    Ok(ExperimentConfig {
        effect,
        a_cm: get("a_cm").expect("required"),
        j_gauss: get("j_gauss").expect("required"),
        rho_cm: get("rho_cm"),
        x_cm: get("x_cm"),
        y_cm: get("y_cm"),
        l_cm: get("l_cm"),
        dipole_statc_cm: get("dipole_statc_cm"),
        q_statc: get("q_statc"),
        epsilon: get("epsilon").expect("required"),
        m_gamma_per_cm: get("m_gamma_per_cm"),
        j_ratio: get("j_ratio"),
        sweep,
    })
}

fn parse_sweep(
    effect: EffectKind,
    entries: &BTreeMap<String, (usize, String)>,
    numbers: &BTreeMap<&str, f64>,
) -> std::result::Result<Option<SweepSpec>, ConfigError> {
    if !SWEEP_KEYS.iter().any(|k| entries.contains_key(*k)) {
        return Ok(None);
    }
    for key in &SWEEP_KEYS[..4] {
        if !entries.contains_key(*key) {
            return Err(err(None, Some(key), "missing required key for a sweep"));
        }
    }
    let (pline, param) = &entries["sweep_param"];
    let sweepable = NUMERIC_KEYS.contains(&param.as_str()) && param != "m_gamma_per_cm" && allowed(effect, param);
    if !sweepable {
        return Err(err(
            Some(*pline),
            Some("sweep_param"),
            format!("`{param}` cannot be swept for effect `{effect}`"),
        ));
    }
    let (sline, steps_raw) = &entries["sweep_steps"];
    let steps: usize = steps_raw
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| err(Some(*sline), Some("sweep_steps"), format!("must be an integer >= 1, got `{steps_raw}`")))?;
    let spacing = match entries.get("sweep_spacing") {
        None => Spacing::Linear,
        Some((_, v)) if v == "linear" => Spacing::Linear,
        Some((_, v)) if v == "log" => Spacing::Log,
        Some((line, v)) => {
            return Err(err(
                Some(*line),
                Some("sweep_spacing"),
                format!("expected `linear` or `log`, got `{v}`"),
            ))
        }
    };
    let (from, to) = (numbers["sweep_from"], numbers["sweep_to"]);
    for (key, v) in [("sweep_from", from), ("sweep_to", to)] {
        let line = Some(entries[key].0);
        let probe = parse_number(line.unwrap(), param, &v.to_string())
            .map_err(|e| err(line, Some(key), format!("invalid value for `{param}`: {}", e.message)))?;
        if spacing == Spacing::Log && probe <= 0.0 {
            return Err(err(line, Some(key), "log spacing needs positive endpoints"));
        }
    }
    Ok(Some(SweepSpec {
        param: param.clone(),
        from,
        to,
        steps,
        spacing,
    }))
}

impl ExperimentConfig {
    pub fn charge(&self) -> f64 {
        self.q_statc.unwrap_or(ELEMENTARY_CHARGE)
    }

    pub fn dipole(&self) -> f64 {
        self.dipole_statc_cm.unwrap_or(ELEMENTARY_CHARGE * BOHR_RADIUS)
    }

    pub fn j_ratio(&self) -> f64 {
        self.j_ratio.unwrap_or(1.0)
    }

    pub fn mass(&self) -> Result<Option<InverseRange>> {
        self.m_gamma_per_cm.map(InverseRange::new).transpose()
    }

    /// Copy with one numeric key replaced.
    pub fn with_param(&self, key: &str, value: f64) -> std::result::Result<Self, ConfigError> {
        let mut c = self.clone();
        let slot = match key {
            "a_cm" => {
                c.a_cm = value;
                return Ok(c);
            }
            "j_gauss" => {
                c.j_gauss = value;
                return Ok(c);
            }
            "epsilon" => {
                c.epsilon = value;
                return Ok(c);
            }
            "rho_cm" => &mut c.rho_cm,
            "x_cm" => &mut c.x_cm,
            "y_cm" => &mut c.y_cm,
            "l_cm" => &mut c.l_cm,
            "dipole_statc_cm" => &mut c.dipole_statc_cm,
            "q_statc" => &mut c.q_statc,
            "m_gamma_per_cm" => &mut c.m_gamma_per_cm,
            "j_ratio" => &mut c.j_ratio,
            _ => return Err(err(None, Some(key), "unknown key")),
        };
        *slot = Some(value);
        Ok(c)
    }

    /// Physical setup; geometric consistency is checked here.
    pub fn setup(&self) -> Result<EffectSetup> {
        let solenoid = SolenoidSpec::new(self.a_cm, self.j_gauss)?;
        Ok(match self.effect {
            EffectKind::AbClosed => EffectSetup::AbClosed {
                probe: ProbeSpec::charge(self.charge())?,
                solenoid,
                rho: self.rho_cm.expect("validated"),
            },
            EffectKind::Tkachuk => EffectSetup::Tkachuk {
                probe: ProbeSpec::electric_dipole(self.dipole())?,
                solenoid: SolenoidSpec::tkachuk_from_ab(&solenoid, self.l_cm.expect("validated"))?,
                rho: self.rho_cm.expect("validated"),
            },
            EffectKind::PmQ => EffectSetup::PmQ {
                probe: ProbeSpec::charge(self.charge())?,
                solenoid,
                x: self.x_cm.expect("validated"),
                y: self.y_cm.expect("validated"),
            },
        })
    }

    pub fn path(&self) -> Result<PathSpec> {
        self.setup()?.path()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "effect = ab_closed\na_cm = 0.1\nj_gauss = 3000\nrho_cm = 10\nepsilon = 1e-3\n";

    #[test]
    fn minimal_ab_closed() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.effect, EffectKind::AbClosed);
        assert_eq!(c.rho_cm, Some(10.0));
        assert_eq!(c.charge(), ELEMENTARY_CHARGE);
        assert!(c.sweep.is_none());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# header\n\n{MINIMAL}  # trailing\nm_gamma_per_cm = 1e-7 # note\n");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.m_gamma_per_cm, Some(1e-7));
    }

    #[test]
    fn duplicate_key_names_line() {
        let e = parse_config(&format!("{MINIMAL}a_cm = 0.2\n")).unwrap_err();
        assert_eq!(e.line, Some(6));
        assert_eq!(e.key.as_deref(), Some("a_cm"));
        assert!(e.message.contains("duplicate"));
    }

    #[test]
    fn unknown_key() {
        let e = parse_config(&format!("{MINIMAL}radius = 3\n")).unwrap_err();
        assert_eq!((e.line, e.key.as_deref()), (Some(6), Some("radius")));
    }

    #[test]
    fn missing_key_for_effect() {
        let e = parse_config("effect = pm_q\na_cm = 500\nj_gauss = 3000\nx_cm = 3000\nepsilon = 1e-3\n").unwrap_err();
        assert_eq!(e.key.as_deref(), Some("y_cm"));
        assert_eq!(e.line, None);
    }

    #[test]
    fn key_irrelevant_to_effect() {
        let e = parse_config(&format!("{MINIMAL}l_cm = 1\n")).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("l_cm"));
        assert!(e.message.contains("ab_closed"));
    }

    #[test]
    fn value_checks() {
        for (bad, key) in [
            ("a_cm = -1", "a_cm"),
            ("epsilon = 2", "epsilon"),
            ("rho_cm = ten", "rho_cm"),
            ("rho_cm = inf", "rho_cm"),
        ] {
            let text = MINIMAL
                .lines()
                .map(|l| if l.starts_with(key) { bad } else { l })
                .collect::<Vec<_>>()
                .join("\n");
            let e = parse_config(&text).unwrap_err();
            assert_eq!(e.key.as_deref(), Some(key), "{bad}");
            assert!(e.line.is_some());
        }
        assert!(parse_config("a_cm 0.1\n").unwrap_err().message.contains("key = value"));
        assert!(parse_config("effect = toroid\n").is_err());
    }

    #[test]
    fn sweep_parsing() {
        let text = format!("{MINIMAL}sweep_param = rho_cm\nsweep_from = 2\nsweep_to = 20\nsweep_steps = 4\nsweep_spacing = log\n");
        let c = parse_config(&text).unwrap();
        let s = c.sweep.unwrap();
        assert_eq!(s.values().len(), 4);
        assert_eq!(s.values()[3], 20.0);
        let bad = format!("{MINIMAL}sweep_param = x_cm\nsweep_from = 2\nsweep_to = 20\nsweep_steps = 4\n");
        assert_eq!(parse_config(&bad).unwrap_err().key.as_deref(), Some("sweep_param"));
        let partial = format!("{MINIMAL}sweep_param = rho_cm\n");
        assert!(parse_config(&partial).is_err());
        let negative = format!("{MINIMAL}sweep_param = rho_cm\nsweep_from = -2\nsweep_to = 20\nsweep_steps = 4\n");
        assert_eq!(parse_config(&negative).unwrap_err().key.as_deref(), Some("sweep_from"));
    }

    #[test]
    fn tkachuk_setup_scales_field() {
        let text = "effect = tkachuk\na_cm = 0.1\nj_gauss = 3000\nrho_cm = 10\nl_cm = 2\nepsilon = 1e-3\n";
        let c = parse_config(text).unwrap();
        match c.setup().unwrap() {
            EffectSetup::Tkachuk { solenoid, probe, .. } => {
                assert_eq!(solenoid.interior_field, 1500.0);
                assert_eq!(probe.dipole, Some(ELEMENTARY_CHARGE * BOHR_RADIUS));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn geometry_checked_at_setup() {
        let text = "effect = ab_closed\na_cm = 1\nj_gauss = 3000\nrho_cm = 0.5\nepsilon = 1e-3\n";
        let c = parse_config(text).unwrap();
        assert!(c.setup().unwrap().phases(InverseRange::new(1e-3).unwrap()).is_err());
    }
}
