//! Run configuration.
//!
//! Serialized as a flat JSON object whose keys match the physical symbols
//! (`N_p`, `L`, `A0`, ...). Unknown keys are rejected, and every field has a
//! default so a partial object is a valid config.

use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::CORRIDOR_WIDTH;

/// The individualistic parameter of the decision rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Individualism {
    Finite(f64),
    /// T → ∞: every decision is a fair coin.
    Infinite,
}

impl Serialize for Individualism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Individualism::Finite(t) => s.serialize_f64(*t),
            Individualism::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Individualism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Individualism;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Individualism, E> {
                if v.is_infinite() && v > 0.0 {
                    Ok(Individualism::Infinite)
                } else {
                    Ok(Individualism::Finite(v))
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Individualism, E> {
                self.visit_f64(v as f64)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Individualism, E> {
                self.visit_f64(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Individualism, E> {
                match v.to_ascii_lowercase().as_str() {
                    "inf" | "infinity" | "+inf" => Ok(Individualism::Infinite),
                    other => match other.parse::<f64>() {
                        Ok(t) => self.visit_f64(t),
                        Err(_) => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                    },
                }
            }
        }
        d.deserialize_any(V)
    }
}

impl std::str::FromStr for Individualism {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(Individualism::Infinite),
            _ => s
                .parse::<f64>()
                .map(Individualism::Finite)
                .map_err(|_| Error::InvalidConfig {
                    key: "T".into(),
                    reason: format!("cannot parse `{s}` as a number or `inf`"),
                }),
        }
    }
}

impl fmt::Display for Individualism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Individualism::Finite(t) => write!(f, "{t}"),
            Individualism::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    /// Number of agents; must be even.
    #[serde(rename = "N_p")]
    pub n_agents: usize,
    /// Door width (m).
    #[serde(rename = "L")]
    pub door_width: f64,
    /// Social force amplitude (N).
    #[serde(rename = "A0")]
    pub social_amplitude: f64,
    /// Social force range (m).
    #[serde(rename = "B")]
    pub social_range: f64,
    /// Edge distance at which the social force switches from repulsive to attractive (m).
    #[serde(rename = "d_sw")]
    pub switch_distance: f64,
    /// Normal contact stiffness (N/m).
    pub k_n: f64,
    /// Tangential sliding friction (kg/(m s)).
    pub k_t: f64,
    /// Relaxation time of the driving force (s).
    pub tau: f64,
    /// Individualistic parameter. `None` means automata agents, no decisions.
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub individualism: Option<Individualism>,
    pub dt: f64,
    pub sample_interval: f64,
    #[serde(rename = "N_T")]
    pub n_samples: usize,
    pub warmup: f64,
    pub seed: u64,
    pub kappa: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_agents: 60,
            door_width: 7.0,
            social_amplitude: 2000.0,
            social_range: 0.08,
            switch_distance: 0.15,
            k_n: 1.2e5,
            k_t: 2.4e5,
            tau: 0.5,
            individualism: None,
            dt: 1e-3,
            sample_interval: 0.2,
            n_samples: 30_000,
            warmup: 200.0,
            seed: 0,
            kappa: 8,
        }
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        key: key.into(),
        reason: reason.into(),
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(key, format!("must be a positive finite number, got {v}")))
    }
}

impl SimConfig {
    /// Parses and validates a JSON config document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            // serde reports unknown keys as "unknown field `X`, expected ..."
            let key = msg
                .split('`')
                .nth(1)
                .unwrap_or("<document>")
                .to_string();
            Error::InvalidConfig { key, reason: msg }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 2 || self.n_agents % 2 != 0 {
            return Err(invalid(
                "N_p",
                format!("must be even and at least 2, got {}", self.n_agents),
            ));
        }
        positive("L", self.door_width)?;
        if self.door_width >= CORRIDOR_WIDTH {
            return Err(invalid(
                "L",
                format!("door must be narrower than the corridor ({CORRIDOR_WIDTH} m)"),
            ));
        }
        positive("A0", self.social_amplitude)?;
        positive("B", self.social_range)?;
        positive("d_sw", self.switch_distance)?;
        positive("k_n", self.k_n)?;
        if !(self.k_t.is_finite() && self.k_t >= 0.0) {
            return Err(invalid("k_t", "must be a non-negative finite number"));
        }
        positive("tau", self.tau)?;
        if let Some(Individualism::Finite(t)) = self.individualism {
            positive("T", t)?;
        }
        positive("dt", self.dt)?;
        positive("sample_interval", self.sample_interval)?;
        if self.sample_interval < self.dt {
            return Err(invalid("sample_interval", "must be at least dt"));
        }
        if self.n_samples == 0 {
            return Err(invalid("N_T", "must be positive"));
        }
        if !(self.warmup.is_finite() && self.warmup >= 0.0) {
            return Err(invalid("warmup", "must be a non-negative finite number"));
        }
        if self.kappa == 0 {
            return Err(invalid("kappa", "must be positive"));
        }
        if self.kappa >= self.n_agents {
            return Err(invalid(
                "kappa",
                format!("must be smaller than N_p = {}", self.n_agents),
            ));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn steps_per_sample(&self) -> u64 {
        ((self.sample_interval / self.dt).round() as u64).max(1)
    }

    pub fn warmup_steps(&self) -> u64 {
        (self.warmup / self.dt).round() as u64
    }

    pub fn decisions_enabled(&self) -> bool {
        self.individualism.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SimConfig::default().validate().unwrap();
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg = SimConfig::from_json(r#"{"N_p": 40, "T": 0.078}"#).unwrap();
        assert_eq!(cfg.n_agents, 40);
        assert_eq!(cfg.individualism, Some(Individualism::Finite(0.078)));
        assert_eq!(cfg.kappa, 8);
    }

    #[test]
    fn infinite_t_sentinel() {
        let cfg = SimConfig::from_json(r#"{"T": "inf"}"#).unwrap();
        assert_eq!(cfg.individualism, Some(Individualism::Infinite));
        let back = SimConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_key_is_named() {
        match SimConfig::from_json(r#"{"N_p": 60, "door": 3}"#) {
            Err(Error::InvalidConfig { key, .. }) => assert_eq!(key, "door"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn odd_population_rejected() {
        match SimConfig::from_json(r#"{"N_p": 61}"#) {
            Err(Error::InvalidConfig { key, .. }) => assert_eq!(key, "N_p"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kappa_must_be_below_population() {
        let cfg = SimConfig {
            n_agents: 8,
            ..SimConfig::default()
        };
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidConfig { key, .. }) if key == "kappa"
        ));
    }

    #[test]
    fn sample_interval_at_least_dt() {
        let cfg = SimConfig {
            sample_interval: 1e-4,
            ..SimConfig::default()
        };
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidConfig { key, .. }) if key == "sample_interval"
        ));
    }

    #[test]
    fn cadence_in_steps() {
        let cfg = SimConfig::default();
        assert_eq!(cfg.steps_per_sample(), 200);
        assert_eq!(cfg.warmup_steps(), 200_000);
    }
}
