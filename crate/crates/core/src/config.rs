//! Flat `key = value` system files.
//!
//! ```text
//! # generic fixture
//! mass = 1
//! charge = 1
//! omega_x = 1
//! omega_y = 2
//! omega_z = 1
//! B_z = 1.4
//! ```
//!
//! `mass`, `charge`, `omega_x`, `omega_y`, `omega_z` and `B_z` are required;
//! `hbar` and `light_speed` default to 1, the electric field and `B_x` to 0.

use std::fmt;

use crate::params::PhysicalSystem;

const REQUIRED: [&str; 6] = ["mass", "charge", "omega_x", "omega_y", "omega_z", "B_z"];
const OPTIONAL: [&str; 6] = ["hbar", "light_speed", "E_x", "E_y", "E_z", "B_x"];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line number, if the problem is tied to a line.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

pub fn parse_system(text: &str) -> Result<PhysicalSystem, ConfigError> {
    let mut values: Vec<(&'static str, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = Some(i + 1);
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(lineno, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        let known = REQUIRED
            .iter()
            .chain(OPTIONAL.iter())
            .find(|k| **k == key)
            .ok_or_else(|| err(lineno, format!("unknown key `{key}`")))?;
        if values.iter().any(|(k, _)| k == known) {
            return Err(err(lineno, format!("duplicate key `{key}`")));
        }
        let v: f64 = value
            .parse()
            .map_err(|_| err(lineno, format!("value for `{key}` is not a number: `{value}`")))?;
        if !v.is_finite() {
            return Err(err(lineno, format!("value for `{key}` is not finite")));
        }
        values.push((known, v));
    }

    let get = |k: &str| values.iter().find(|(n, _)| *n == k).map(|(_, v)| *v);
    for k in REQUIRED {
        if get(k).is_none() {
            return Err(err(None, format!("missing required key `{k}`")));
        }
    }
    let s = PhysicalSystem {
        mass: get("mass").unwrap(),
        charge: get("charge").unwrap(),
        hbar: get("hbar").unwrap_or(1.0),
        light_speed: get("light_speed").unwrap_or(1.0),
        omega_x: get("omega_x").unwrap(),
        omega_y: get("omega_y").unwrap(),
        omega_z: get("omega_z").unwrap(),
        e_x: get("E_x").unwrap_or(0.0),
        e_y: get("E_y").unwrap_or(0.0),
        e_z: get("E_z").unwrap_or(0.0),
        b_z: get("B_z").unwrap(),
        b_x: get("B_x").unwrap_or(0.0),
    };
    s.validate().map_err(|e| err(None, e.to_string()))?;
    Ok(s)
}

/// Renders a system in the same format, 17 significant digits per value.
pub fn format_system(s: &PhysicalSystem) -> String {
    let rows = [
        ("mass", s.mass),
        ("charge", s.charge),
        ("hbar", s.hbar),
        ("light_speed", s.light_speed),
        ("omega_x", s.omega_x),
        ("omega_y", s.omega_y),
        ("omega_z", s.omega_z),
        ("E_x", s.e_x),
        ("E_y", s.e_y),
        ("E_z", s.e_z),
        ("B_z", s.b_z),
        ("B_x", s.b_x),
    ];
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k} = {v:.16e}\n"));
    }
    out
}
