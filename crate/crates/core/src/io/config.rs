//! Flat `key = value` configuration text: one documented key per line,
//! `#` comments, no nesting.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::inflation::{select_parameters, InflationConfig};
use crate::norms::SpaceFamily;
use crate::spectral::grid::Domain;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| Error::Parse {
                    what: "config".to_string(),
                    why: format!("line {}: expected `key = value`, got `{raw}`", lineno + 1),
                })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { entries })
    }

    pub fn from_file(path: &Path) -> Result<Config> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    /// Lay `other` on top: its keys win.
    pub fn overlay(&mut self, other: &Config) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn f64_key(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                what: "config".to_string(),
                why: format!("key `{key}`: expected a number, got `{v}`"),
            }),
        }
    }

    pub fn i64_key(&self, key: &str) -> Result<Option<i64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<i64>().map(Some).map_err(|_| Error::Parse {
                what: "config".to_string(),
                why: format!("key `{key}`: expected an integer, got `{v}`"),
            }),
        }
    }

    pub fn usize_key(&self, key: &str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<usize>().map(Some).map_err(|_| Error::Parse {
                what: "config".to_string(),
                why: format!("key `{key}`: expected a nonnegative integer, got `{v}`"),
            }),
        }
    }

    pub fn f64_list_key(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| Error::Parse {
                    what: "config".to_string(),
                    why: format!("key `{key}`: expected a comma list of numbers, got `{v}`"),
                }),
        }
    }

    pub fn i64_list_key(&self, key: &str) -> Result<Option<Vec<i64>>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| Error::Parse {
                    what: "config".to_string(),
                    why: format!("key `{key}`: expected a comma list of integers, got `{v}`"),
                }),
        }
    }
}

fn join<T: std::fmt::Display>(values: &[T]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Serialized form of a sweep configuration; `parse` of this text
/// reproduces the configuration exactly.
pub fn inflation_config_to_entries(config: &InflationConfig) -> Config {
    let mut c = Config::default();
    c.set("s", config.s);
    c.set("sigma", config.sigma);
    c.set("rho", config.rho);
    c.set("sign", if config.sign >= 0.0 { "+1" } else { "-1" });
    c.set("delta", config.delta);
    c.set("theta", join(&config.thetas));
    c.set("N", join(&config.n_list));
    c.set("m", config.m);
    c.set("family", config.family.as_str());
    c.set("p", config.p);
    c.set("q", config.q);
    c.set("dim", config.dim);
    c.set("domain", config.domain.as_str());
    c.set("mesh", config.mesh_refine);
    if let Some(k) = config.kmax {
        c.set("kmax", k);
    }
    if let Some(n) = config.nodes_per_unit {
        c.set("mesh-nodes", n);
    }
    c.set("ratio-threshold", config.ratio_threshold);
    c.set("threads", config.threads);
    c
}

/// Build and validate a sweep configuration from config text, filling
/// defaults for missing keys.  Validation covers the module invariants:
/// `sigma >= max(rho, 2)`, `s < 0`, the slack inequalities of the selected
/// case, and the space exponents.
pub fn inflation_config_from_entries(c: &Config) -> Result<InflationConfig> {
    let s = c.f64_key("s")?.unwrap_or(-0.4);
    let sigma = c.usize_key("sigma")?.unwrap_or(3);
    let rho = c.usize_key("rho")?.unwrap_or(sigma);
    let mut config = InflationConfig::new(s, sigma, rho);
    if let Some(sign) = c.get("sign") {
        config.sign = match sign {
            "+1" | "+" | "1" | "plus" => 1.0,
            "-1" | "-" | "minus" => -1.0,
            other => {
                return Err(Error::validation("sign", format!("expected +1 or -1, got `{other}`")))
            }
        };
    }
    if let Some(v) = c.f64_key("delta")? {
        config.delta = v;
    }
    if let Some(v) = c.f64_list_key("theta")? {
        config.thetas = v;
    }
    if let Some(v) = c.i64_list_key("N")? {
        config.n_list = v;
    }
    if let Some(v) = c.f64_key("m")? {
        config.m = v;
    }
    if let Some(v) = c.get("family") {
        config.family = v.parse::<SpaceFamily>()?;
    }
    if let Some(v) = c.f64_key("p")? {
        config.p = v;
    }
    if let Some(v) = c.f64_key("q")? {
        config.q = v;
    }
    if let Some(v) = c.usize_key("dim")? {
        config.dim = v;
    }
    if let Some(v) = c.get("domain") {
        config.domain = v.parse::<Domain>()?;
    }
    if let Some(v) = c.i64_key("mesh")? {
        config.mesh_refine = v;
    }
    config.kmax = c.usize_key("kmax")?;
    config.nodes_per_unit = c.usize_key("mesh-nodes")?;
    if let Some(v) = c.f64_key("ratio-threshold")? {
        config.ratio_threshold = v;
    }
    if let Some(v) = c.usize_key("threads")? {
        config.threads = v.max(1);
    }
    config.validate()?;
    for &n in &config.n_list {
        select_parameters(config.s, config.sigma, config.delta, n)?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_serialize_round_trip() {
        let defaults = inflation_config_to_entries(&InflationConfig::new(-0.4, 3, 3));
        let text = defaults.serialize();
        let back = Config::parse(&text).unwrap();
        assert_eq!(defaults, back);
    }

    #[test]
    fn defaults_fill_missing_keys() {
        let c = Config::parse("s = -0.4\nsigma = 3\n").unwrap();
        let config = inflation_config_from_entries(&c).unwrap();
        assert_eq!(config.rho, 3);
        assert_eq!(config.n_list, vec![64, 128, 256, 512]);
        // and the echo carries the filled defaults
        let echo = inflation_config_to_entries(&config);
        assert_eq!(echo.get("N"), Some("64,128,256,512"));
        assert_eq!(echo.get("m"), Some("4"));
    }

    #[test]
    fn conjugation_split_is_validated() {
        let c = Config::parse("sigma = 3\nrho = 4\n").unwrap();
        let err = inflation_config_from_entries(&c).unwrap_err();
        assert!(err.to_string().contains("sigma >= max(rho, 2)"), "{err}");
    }

    #[test]
    fn positive_regularity_is_rejected() {
        let c = Config::parse("s = 0.5\n").unwrap();
        let err = inflation_config_from_entries(&c).unwrap_err();
        assert!(err.to_string().contains("s < 0"), "{err}");
    }

    #[test]
    fn slack_inequality_is_checked() {
        let c = Config::parse("s = -0.4\ndelta = 0.3\n").unwrap();
        let err = inflation_config_from_entries(&c).unwrap_err();
        assert!(err.to_string().contains("case A"), "{err}");
    }

    #[test]
    fn comments_and_colons_parse() {
        let c = Config::parse("# a comment\ns: -0.5 # trailing\n\nq = 1\n").unwrap();
        assert_eq!(c.get("s"), Some("-0.5"));
        assert_eq!(c.get("q"), Some("1"));
    }

    #[test]
    fn malformed_line_is_an_error() {
        assert!(Config::parse("not a pair\n").is_err());
    }
}
