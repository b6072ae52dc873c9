use std::path::Path;

use serde::{Deserialize, Serialize};

use super::domain::DomainSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Maxface,
    Cmc,
}

/// Surface description file (TOML or JSON).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub kind: SurfaceKind,
    pub g: String,
    /// Required for `maxface`; an explicit extension of the weight for `cmc`.
    #[serde(default)]
    pub omega: Option<String>,
    #[serde(rename = "H", default)]
    pub h: Option<f64>,
    pub domain: DomainSpec,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub allow_multiply_connected: bool,
    /// Integration base point; defaults to the domain's base point.
    #[serde(default)]
    pub base_point: Option<[f64; 2]>,
}

fn default_resolution() -> usize {
    64
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown config extension for {0} (expected .toml or .json)")]
    UnknownFormat(String),
    #[error("{0}")]
    Invalid(String),
}

impl SurfaceConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let c: Self = toml::from_str(text)?;
        c.check()?;
        Ok(c)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let c: Self = serde_json::from_str(text)?;
        c.check()?;
        Ok(c)
    }

    /// Reads a config, choosing the format from the file extension.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Self::from_toml(&text),
            Some("json") => Self::from_json(&text),
            _ => Err(ConfigError::UnknownFormat(path.display().to_string())),
        }
    }

    fn check(&self) -> Result<(), ConfigError> {
        self.domain.check().map_err(ConfigError::Invalid)?;
        match self.kind {
            SurfaceKind::Maxface => {
                if self.omega.is_none() {
                    return Err(ConfigError::Invalid("maxface config needs 'omega'".into()));
                }
            }
            SurfaceKind::Cmc => match self.h {
                Some(h) if h != 0.0 && h.is_finite() => {}
                _ => return Err(ConfigError::Invalid("cmc config needs a finite non-zero 'H'".into())),
            },
        }
        if !self.domain.is_simply_connected() && !self.allow_multiply_connected {
            return Err(ConfigError::Invalid(
                "domain is not simply connected; set allow_multiply_connected = true to accept it".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ENNEPER: &str = r#"
kind = "maxface"
g = "z"
omega = "1"
resolution = 32

[domain]
shape = "disk"
center = [0.0, 0.0]
radius = 1.5
"#;

    #[test]
    fn toml_round() {
        let c = SurfaceConfig::from_toml(ENNEPER).unwrap();
        assert_eq!(c.kind, SurfaceKind::Maxface);
        assert_eq!(c.resolution, 32);
        assert_eq!(c.domain, DomainSpec::Disk { center: [0.0, 0.0], radius: 1.5 });
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(SurfaceConfig::from_json(&json).unwrap(), c);
    }

    #[test]
    fn cmc_needs_h() {
        let text = r#"{"kind":"cmc","g":"zbar/2","domain":{"shape":"disk","center":[0,0],"radius":1}}"#;
        assert!(matches!(SurfaceConfig::from_json(text), Err(ConfigError::Invalid(_))));
        let text = r#"{"kind":"cmc","g":"zbar/2","H":0.5,"domain":{"shape":"disk","center":[0,0],"radius":1}}"#;
        assert_eq!(SurfaceConfig::from_json(text).unwrap().h, Some(0.5));
    }

    #[test]
    fn annulus_gated() {
        let text = r#"{"kind":"maxface","g":"z","omega":"1","domain":{"shape":"annulus","center":[0,0],"r_in":0.5,"r_out":2}}"#;
        assert!(SurfaceConfig::from_json(text).is_err());
        let text = r#"{"kind":"maxface","g":"z","omega":"1","allow_multiply_connected":true,
            "domain":{"shape":"annulus","center":[0,0],"r_in":0.5,"r_out":2}}"#;
        assert!(SurfaceConfig::from_json(text).is_ok());
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(SurfaceConfig::from_toml(&format!("{ENNEPER}\n")).is_ok());
        assert!(SurfaceConfig::from_toml(&ENNEPER.replace("resolution", "resolutoin")).is_err());
    }
}
