//! Key-value config files.
//!
//! One `key = value` pair per line, `#` comments; keys are the long flag
//! names. Precedence is CLI flag, then config file, then built-in
//! default.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::AppError;

/// Every key a config file may set, across all subcommands.
const KNOWN_KEYS: &[&str] = &[
    "seed",
    "out",
    "n-normal",
    "n-asphyxia",
    "duration-ms",
    "sample-rate",
    "normal-f0-low",
    "normal-f0-high",
    "asphyxia-f0-low",
    "asphyxia-f0-high",
    "asphyxia-noise-db",
    "frame-ms",
    "hop-ms",
    "n-mels",
    "n-coeffs",
    "fmin-hz",
    "fmax-hz",
    "log-floor",
    "epochs",
    "batch-size",
    "alpha",
    "beta1",
    "beta2",
    "epsilon",
    "lambda",
    "test-fraction",
    "select-k",
    "num-silos",
    "rounds",
    "local-epochs",
    "client-fraction",
    "partition",
    "dirichlet-alpha",
    "early-stop",
    "threshold",
    "vad-frame-ms",
    "vad-threshold-db",
    "vad-hangover",
    "low-cut-hz",
    "high-cut-hz",
    "filter-order",
];

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(AppError::Usage(format!(
                    "config line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(AppError::Usage(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// CLI value if present, else the config entry, else the default.
    pub fn resolve<T>(&self, cli: Option<T>, key: &str, default: T) -> Result<T, AppError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|e| AppError::Usage(format!("config key {key:?}: bad value {raw:?} ({e})"))),
            None => Ok(default),
        }
    }

    /// Like [`resolve`](Self::resolve) but without a default.
    pub fn resolve_opt<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, AppError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| AppError::Usage(format!("config key {key:?}: bad value {raw:?} ({e})"))),
            None => Ok(None),
        }
    }

    /// Boolean flags: true on the CLI wins; otherwise the config value.
    pub fn resolve_flag(&self, cli: bool, key: &str) -> Result<bool, AppError> {
        if cli {
            return Ok(true);
        }
        self.resolve(None, key, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_pairs_and_comments() {
        let f = write("# comment\nepochs = 12\n\nalpha = 0.01\n");
        let cfg = ConfigFile::load(f.path()).unwrap();
        assert_eq!(cfg.resolve(None, "epochs", 5usize).unwrap(), 12);
        assert_eq!(cfg.resolve(None, "alpha", 1e-3f64).unwrap(), 0.01);
        assert_eq!(cfg.resolve(None, "lambda", 1e-3f64).unwrap(), 1e-3);
    }

    #[test]
    fn cli_value_wins_over_config() {
        let f = write("epochs = 12\n");
        let cfg = ConfigFile::load(f.path()).unwrap();
        assert_eq!(cfg.resolve(Some(3usize), "epochs", 5).unwrap(), 3);
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let f = write("epochz = 12\n");
        assert!(matches!(ConfigFile::load(f.path()), Err(AppError::Usage(_))));
    }

    #[test]
    fn malformed_lines_are_usage_errors() {
        let f = write("epochs 12\n");
        assert!(matches!(ConfigFile::load(f.path()), Err(AppError::Usage(_))));
    }

    #[test]
    fn bad_values_surface_at_resolution() {
        let f = write("epochs = twelve\n");
        let cfg = ConfigFile::load(f.path()).unwrap();
        assert!(matches!(cfg.resolve(None, "epochs", 5usize), Err(AppError::Usage(_))));
    }
}
