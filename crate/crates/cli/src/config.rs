//! `key = value` configuration, read from `--config` or `QUINT_CONFIG`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use quintessence::meshgen::DesignParams;
use quintessence::quat::{EPS_ALG, EPS_MATCH};

pub const ENV_VAR: &str = "QUINT_CONFIG";

#[derive(Clone, Debug)]
pub struct Config {
    pub eps_alg: f64,
    pub eps_match: f64,
    pub design: DesignParams,
    pub out_dir: PathBuf,
    pub pretty: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            eps_alg: EPS_ALG,
            eps_match: EPS_MATCH,
            design: DesignParams::default(),
            out_dir: PathBuf::from("."),
            pretty: true,
        }
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

impl Config {
    /// Config from an explicit path, else from the environment, else defaults.
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let from_env = std::env::var_os(ENV_VAR).map(PathBuf::from);
        match path.map(Path::to_path_buf).or(from_env) {
            Some(p) => {
                let text = fs::read_to_string(&p).with_context(|| format!("reading config {}", p.display()))?;
                Config::parse(&text).with_context(|| format!("in config {}", p.display()))
            }
            None => Ok(Config::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value", n + 1);
            };
            cfg.set(key.trim(), value.trim()).with_context(|| format!("line {}", n + 1))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = || -> Result<f64> { value.parse().with_context(|| format!("bad number {value:?} for {key}")) };
        match key {
            "eps_alg" => self.eps_alg = num()?,
            "eps_match" => self.eps_match = num()?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "pretty" => {
                self.pretty = parse_bool(value).with_context(|| format!("bad flag {value:?} for pretty"))?
            }
            _ if DesignParams::is_key(key) => self.design.set(key, value)?,
            _ => bail!("unknown config key {key:?}"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps_alg", self.eps_alg), ("eps_match", self.eps_match)] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("{name} must be positive, got {v}");
            }
        }
        self.design.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let cfg = Config::parse("# design\nframe_width = 0.2\ngrade.antarctic=1.1\npretty = no\neps_match = 1e-7\n").unwrap();
        assert_eq!(cfg.design.frame_width, 0.2);
        assert!(!cfg.pretty);
        assert_eq!(cfg.eps_match, 1e-7);
    }

    #[test]
    fn rejects_unknown_and_bad_values() {
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("frame_width").is_err());
        assert!(Config::parse("eps_alg = -1").is_err());
        assert!(Config::parse("frame_width = 0.6").is_err());
        assert!(Config::parse("pretty = maybe").is_err());
    }
}
