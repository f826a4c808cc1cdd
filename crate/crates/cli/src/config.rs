//! Line-oriented `key = value` settings. Command-line flags take precedence.

use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Syntax {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    pub fixtures: Option<PathBuf>,
    pub format: Option<String>,
    pub restarts: Option<u32>,
    pub steps: Option<u32>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|(line, message)| ConfigError::Syntax {
            path: path.to_path_buf(),
            line,
            message,
        })
    }

    /// Blank lines and `#` comments are skipped; keys may repeat, last wins.
    pub fn parse(text: &str) -> Result<Self, (usize, String)> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| (line_no, format!("expected key = value, got {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| (line_no, format!("invalid {what} {value:?}"));
            match key {
                "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("seed"))?),
                "max_nodes" => cfg.max_nodes = Some(value.parse().map_err(|_| bad("node limit"))?),
                "max_time" => {
                    let secs: f64 = value.parse().map_err(|_| bad("time limit"))?;
                    if !secs.is_finite() || secs < 0.0 {
                        return Err(bad("time limit"));
                    }
                    cfg.max_time = Some(Duration::from_secs_f64(secs));
                }
                "fixtures" => cfg.fixtures = Some(PathBuf::from(value)),
                "format" => cfg.format = Some(value.to_string()),
                "restarts" => cfg.restarts = Some(value.parse().map_err(|_| bad("restart count"))?),
                "steps" => cfg.steps = Some(value.parse().map_err(|_| bad("step count"))?),
                other => return Err((line_no, format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let cfg = FileConfig::parse(
            "# budgets\nseed = 7\nmax_nodes=1000\nmax_time = 1.5\nformat = csv # inline\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.max_nodes, Some(1000));
        assert_eq!(cfg.max_time, Some(Duration::from_millis(1500)));
        assert_eq!(cfg.format.as_deref(), Some("csv"));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert_eq!(FileConfig::parse("colour = red").unwrap_err().0, 1);
        assert_eq!(FileConfig::parse("\nseed = x").unwrap_err().0, 2);
        assert!(FileConfig::parse("max_time = -1").is_err());
        assert!(FileConfig::parse("just words").is_err());
    }
}
