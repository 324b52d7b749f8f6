//! TOML run configuration. Inline flags override file values.

use std::path::{Path, PathBuf};

use qnl_core::audit::AuditConfig;
use serde::Deserialize;

use crate::Format;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub norm: NormSection,
    pub indices: IndicesSection,
    pub estimate: EstimateSection,
    pub sweep: SweepSection,
    pub audit: AuditSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormSection {
    pub space: Option<String>,
    pub function: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IndicesSection {
    pub phi: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateSection {
    pub constant: Option<String>,
    pub space: Option<String>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub pexp: Option<f64>,
    pub family: Option<String>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub constant: Option<String>,
    /// Space kind: `lp`, `weak-lp`, `orlicz` or `weak-orlicz` (with `Φ = t^p`).
    pub space: Option<String>,
    pub p: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
    pub pexp: Option<f64>,
    pub family: Option<String>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditSection {
    pub slow_oracle: Option<bool>,
    pub seed: Option<u64>,
    pub config: Option<AuditConfig>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let c: RunConfig = toml::from_str(
            r#"
format = "csv"
[sweep]
constant = "nj"
space = "lp"
p = [1.5, 2.0]
[audit.config]
ps = [2.0]
"#,
        )
        .unwrap();
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.sweep.p, Some(vec![1.5, 2.0]));
        assert_eq!(c.audit.config.unwrap().ps, vec![2.0]);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<RunConfig>("[norm]\nspaec = \"lp:2\"").is_err());
        assert!(toml::from_str::<RunConfig>("[audit.config]\nbogus = 1").is_err());
    }
}
