//! Run configuration: a versioned JSON document, mirrored by the command
//! line flags.

use std::path::PathBuf;

use k1hecke_core::arith::prime_power;
use k1hecke_core::groups::{group_order, Coweight, Kind};
use serde::{Deserialize, Serialize};

use crate::suites::SUITES;

pub const CONFIG_VERSION: u32 = 1;

/// Largest group the harness will enumerate.
pub const MAX_GROUP_ORDER: u64 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    GL,
    PGL,
}

impl From<GroupKind> for Kind {
    fn from(k: GroupKind) -> Kind {
        match k {
            GroupKind::GL => Kind::GL,
            GroupKind::PGL => Kind::PGL,
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "GL" => Ok(GroupKind::GL),
            "PGL" => Ok(GroupKind::PGL),
            _ => Err(format!("unknown group kind {s:?} (expected GL or PGL)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub n: usize,
    pub q: u32,
    pub kind: GroupKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub group: GroupSpec,
    /// Generator of the window of strata; `None` means `(2, 0, ..., 0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<i64>>,
    /// The marked point `z_0 ∈ k^×` of the standard transitions.
    #[serde(default = "one")]
    pub z: u32,
    /// `t`-adic precision for raw double coset censuses; `None` picks
    /// `spread + 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    #[serde(default)]
    pub suites: Vec<String>,
    /// Divisor degrees for the divisor suites; each suite has its own
    /// default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markdown: Option<PathBuf>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Invalid(String),
    Budget(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Invalid(s) => write!(f, "invalid configuration: {s}"),
            ConfigError::Budget(s) => write!(f, "budget exceeded: {s}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    pub fn new(n: usize, q: u32, kind: GroupKind) -> RunConfig {
        RunConfig {
            version: CONFIG_VERSION,
            group: GroupSpec { n, q, kind },
            window: None,
            z: 1,
            precision: None,
            suites: Vec::new(),
            degrees: None,
            trials: None,
            seed: 0,
            cache_dir: None,
            out: None,
            markdown: None,
        }
    }

    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn kind(&self) -> Kind {
        self.group.kind.into()
    }

    pub fn window_generator(&self) -> Coweight {
        let n = self.group.n;
        match &self.window {
            Some(w) => Coweight(w.clone()),
            None => {
                let mut v = vec![0; n];
                v[0] = 2;
                Coweight(v)
            }
        }
    }

    /// Checks everything that can be checked without enumerating anything.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |s: String| Err(ConfigError::Invalid(s));
        if self.version != CONFIG_VERSION {
            return bad(format!("config version {} (supported: {CONFIG_VERSION})", self.version));
        }
        let GroupSpec { n, q, .. } = self.group;
        if n == 0 {
            return bad("rank must be positive".into());
        }
        if prime_power(q as u64).is_err() {
            return bad(format!("q = {q} is not a prime power"));
        }
        if self.z == 0 || self.z >= q {
            return bad(format!("marked point z = {} is not a nonzero element of F_{q}", self.z));
        }
        let w = self.window_generator();
        if w.0.len() != n {
            return bad(format!("window {w} has length {} for rank {n}", w.0.len()));
        }
        if !w.is_dominant() {
            return bad(format!("window {w} is not dominant"));
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return bad(format!("unknown suite {s:?}"));
            }
        }
        if let Some(d) = &self.degrees {
            if d.iter().any(|&i| i == 0 || i > 6) {
                return bad("divisor degrees must lie in 1..=6".into());
            }
        }
        let order = group_order(n, q as u64, self.kind());
        if order > MAX_GROUP_ORDER {
            return Err(ConfigError::Budget(format!("|G| = {order} exceeds {MAX_GROUP_ORDER}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_validation() {
        let mut c = RunConfig::new(2, 3, GroupKind::PGL);
        c.suites = vec!["radon".into()];
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
        assert!(c.validate().is_ok());
        c.suites.push("nope".into());
        assert!(matches!(c.validate(), Err(ConfigError::Invalid(_))));
        let c = RunConfig::new(2, 6, GroupKind::GL);
        assert!(c.validate().is_err());
        let c = RunConfig::new(4, 7, GroupKind::GL);
        assert!(matches!(c.validate(), Err(ConfigError::Budget(_))));
        assert!(RunConfig::from_json(r#"{"version":1,"group":{"n":2,"q":2,"kind":"GL"},"extra":1}"#).is_err());
    }
}
