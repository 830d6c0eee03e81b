//! Physical constants and model switches.
//!
//! Defaults come from `data/constants.cfg`, compiled into the crate so that
//! results are bit-stable across machines. A user config in the same
//! `key = value` format overrides individual keys.

use crate::error::{Error, Result};

/// The shipped defaults file.
pub const DEFAULT_CONSTANTS_CFG: &str = include_str!("../data/constants.cfg");

/// Constants entering the level calculations. All fields are dimensionless
/// except `mc2_ev` (eV) and `ev_to_mhz` (MHz per eV).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub alpha: f64,
    pub mc2_ev: f64,
    pub g_p: f64,
    pub kappa_p: f64,
    /// Electron to proton mass ratio m/M_p.
    pub mass_ratio: f64,
    pub ev_to_mhz: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        load_config(None)
            .expect("shipped constants.cfg is valid")
            .constants
    }
}

impl PhysicalConstants {
    /// Checks the invariants every constant set must satisfy.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("alpha", self.alpha),
            ("mc2_eV", self.mc2_ev),
            ("g_p", self.g_p),
            ("kappa_p", self.kappa_p),
            ("mass_ratio", self.mass_ratio),
            ("eV_to_MHz", self.ev_to_mhz),
        ];
        for (key, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(config_err(
                    key,
                    format!("must be finite and positive, got {value}"),
                ));
            }
        }
        if self.alpha >= 0.01 {
            return Err(config_err(
                "alpha",
                format!("must be below 0.01, got {}", self.alpha),
            ));
        }
        let expected = 2.0 * (1.0 + self.kappa_p);
        if ((self.g_p - expected) / expected).abs() > 1e-5 {
            return Err(config_err(
                "g_p",
                format!("g_p = {} but 2(1 + kappa_p) = {expected}", self.g_p),
            ));
        }
        Ok(())
    }
}

/// Switches consumed from the same config file as the constants.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModelOptions {
    /// Extra relative hyperfine correction added next to the Breit factor.
    pub user_delta_hyperfine: f64,
    /// Multiply Lamb factors by (1 + Z alpha) unless an order is requested.
    pub enable_binding_correction: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub constants: PhysicalConstants,
    pub options: ModelOptions,
}

impl Default for Config {
    fn default() -> Self {
        load_config(None).expect("shipped constants.cfg is valid")
    }
}

/// Loads constants only; see [`load_config`].
pub fn load_constants(source: Option<&str>) -> Result<PhysicalConstants> {
    load_config(source).map(|c| c.constants)
}

/// Parses the shipped defaults, then applies `source` on top of them.
///
/// When only one of `g_p` and `kappa_p` is overridden the other follows
/// from g_p = 2(1 + kappa_p).
pub fn load_config(source: Option<&str>) -> Result<Config> {
    let mut constants = PhysicalConstants {
        alpha: 0.0,
        mc2_ev: 0.0,
        g_p: 0.0,
        kappa_p: 0.0,
        mass_ratio: 0.0,
        ev_to_mhz: 0.0,
    };
    let mut options = ModelOptions::default();
    apply(DEFAULT_CONSTANTS_CFG, &mut constants, &mut options)?;

    if let Some(text) = source {
        let touched = apply(text, &mut constants, &mut options)?;
        let g = touched.contains(&"g_p");
        let k = touched.contains(&"kappa_p");
        if g && !k {
            constants.kappa_p = constants.g_p / 2.0 - 1.0;
        } else if k && !g {
            constants.g_p = 2.0 * (1.0 + constants.kappa_p);
        }
    }
    constants.validate()?;
    Ok(Config { constants, options })
}

fn apply<'a>(
    text: &'a str,
    constants: &mut PhysicalConstants,
    options: &mut ModelOptions,
) -> Result<Vec<&'a str>> {
    let mut touched = Vec::new();
    for (key, value) in key_values(text)? {
        let slot: &mut f64 = match key {
            "alpha" => &mut constants.alpha,
            "mc2_eV" => &mut constants.mc2_ev,
            "g_p" => &mut constants.g_p,
            "kappa_p" => &mut constants.kappa_p,
            "mass_ratio" => &mut constants.mass_ratio,
            "eV_to_MHz" => &mut constants.ev_to_mhz,
            "user_delta_hyperfine" => {
                options.user_delta_hyperfine = parse_finite(key, value)?;
                continue;
            }
            "enable_binding_correction" => {
                options.enable_binding_correction = parse_bool(key, value)?;
                continue;
            }
            other => return Err(config_err(other, "unknown key".into())),
        };
        let parsed = parse_finite(key, value)?;
        if parsed <= 0.0 {
            return Err(config_err(key, format!("must be positive, got {parsed}")));
        }
        *slot = parsed;
        if key == "g_p" || key == "kappa_p" {
            touched.push(key);
        }
    }
    Ok(touched)
}

/// Splits `key = value` lines, dropping blank lines and `#` comments.
fn key_values(text: &str) -> Result<Vec<(&str, &str)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Data {
            line: idx + 1,
            reason: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push((key.trim(), value.trim()));
    }
    Ok(out)
}

pub(crate) fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head)
}

fn parse_finite(key: &str, value: &str) -> Result<f64> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(config_err(key, format!("`{value}` is not a finite number"))),
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(config_err(key, format!("`{value}` is not a boolean"))),
    }
}

fn config_err(key: &str, reason: String) -> Error {
    Error::Config {
        key: key.to_string(),
        reason,
    }
}
