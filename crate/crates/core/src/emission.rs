//! Fowler-Nordheim-type current density for the Schottky-Nordheim barrier:
//!
//! ```text
//! J = λ a φ⁻¹ F² exp(-μ b φ^(3/2) / F),   μ = v(f)
//! ```
//!
//! The First and Second FN Constants `a`, `b` are not built in. They come from
//! the caller or a config file, together with `λ`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::vfunction::v_closed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmissionInput {
    /// Local work function (eV).
    pub phi: f64,
    /// Local barrier field (V/nm).
    pub field: f64,
    pub lambda: f64,
    pub a_const: f64,
    pub b_const: f64,
    /// Scaled barrier field.
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmissionResult {
    pub current_density: f64,
    pub mu: f64,
}

impl EmissionInput {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("phi", self.phi),
            ("F", self.field),
            ("a", self.a_const),
            ("b", self.b_const),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain(name, value, "(0, inf)"));
            }
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::domain("lambda", self.lambda, "(0, inf)"));
        }
        if !(0.0..=1.0).contains(&self.f) {
            return Err(Error::domain("f", self.f, "[0, 1]"));
        }
        Ok(())
    }
}

/// Exponent correction `μ = v(f)`.
pub fn mu_from_f(f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::domain("f", f, "[0, 1]"));
    }
    v_closed(f)
}

pub fn current_density(input: &EmissionInput) -> Result<EmissionResult> {
    input.validate()?;
    let mu = mu_from_f(input.f)?;
    let prefactor = input.lambda * input.a_const / input.phi * input.field * input.field;
    let exponent = -mu * input.b_const * input.phi.powf(1.5) / input.field;
    Ok(EmissionResult {
        current_density: prefactor * exponent.exp(),
        mu,
    })
}

/// Constants read from a config file; any of them may be absent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmissionConstants {
    pub a_const: Option<f64>,
    pub b_const: Option<f64>,
    pub lambda: Option<f64>,
}

impl EmissionConstants {
    /// Parses either a JSON object or `key = value` lines (`#` starts a comment).
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()));
        }
        let mut out = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Config(format!(
                    "line {}: '{}' is not a number",
                    lineno + 1,
                    value.trim()
                ))
            })?;
            let slot = match key.trim() {
                "a_const" | "a" => &mut out.a_const,
                "b_const" | "b" => &mut out.b_const,
                "lambda" => &mut out.lambda,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            };
            *slot = Some(value);
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_input(f: f64) -> EmissionInput {
        EmissionInput {
            phi: 1.0,
            field: 1.0,
            lambda: 1.0,
            a_const: 1.0,
            b_const: 1.0,
            f,
        }
    }

    #[test]
    fn all_ones() {
        let r = current_density(&unit_input(0.0)).unwrap();
        assert_eq!(r.mu, 1.0);
        assert!((r.current_density - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn barrier_pulled_to_zero() {
        let mut input = unit_input(1.0);
        input.phi = 4.5;
        input.field = 3.0;
        input.lambda = 0.8;
        let r = current_density(&input).unwrap();
        assert_eq!(r.mu, 0.0);
        assert_eq!(r.current_density, 0.8 / 4.5 * 9.0);
    }

    #[test]
    fn doubling_field() {
        let base = EmissionInput {
            phi: 4.5,
            field: 2.0,
            lambda: 1.0,
            a_const: 1.5,
            b_const: 6.8,
            f: 0.3,
        };
        let doubled = EmissionInput { field: 4.0, ..base };
        let j1 = current_density(&base).unwrap();
        let j2 = current_density(&doubled).unwrap();
        let e1 = -j1.mu * base.b_const * base.phi.powf(1.5) / base.field;
        let expect = 4.0 * (e1 / 2.0 - e1).exp();
        assert!((j2.current_density / j1.current_density / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_inputs() {
        let mut i = unit_input(0.5);
        i.phi = 0.0;
        assert!(current_density(&i).is_err());
        let mut i = unit_input(0.5);
        i.field = -1.0;
        assert!(current_density(&i).is_err());
        assert!(current_density(&unit_input(1.5)).is_err());
        assert!(mu_from_f(-0.1).is_err());
    }

    #[test]
    fn config_formats() {
        let kv =
            EmissionConstants::parse("# FN constants\na_const = 1.5\nb_const=6.8 # eV^-3/2 V/nm\n")
                .unwrap();
        assert_eq!(kv.a_const, Some(1.5));
        assert_eq!(kv.b_const, Some(6.8));
        assert_eq!(kv.lambda, None);
        let js = EmissionConstants::parse(r#"{"a_const": 2.0, "lambda": 0.5}"#).unwrap();
        assert_eq!(js.a_const, Some(2.0));
        assert_eq!(js.lambda, Some(0.5));
        assert!(EmissionConstants::parse("c = 3").is_err());
        assert!(EmissionConstants::parse("a = x").is_err());
        assert!(EmissionConstants::parse("a 3").is_err());
        assert!(EmissionConstants::parse(r#"{"z": 1}"#).is_err());
    }
}
