//! Settings resolved as flags > environment > config file > defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::Field;

pub const DEFAULT_CUTOFF: usize = 12;
pub const DEFAULT_MAX_DIM: usize = 6;
pub const DEFAULT_CACHE_DIR: &str = ".homalg-cache";
pub const CONFIG_FILE: &str = "homalg.toml";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub cutoff: usize,
    pub max_dim: usize,
    pub field: Field,
    /// `None` disables caching.
    pub cache: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cutoff: DEFAULT_CUTOFF,
            max_dim: DEFAULT_MAX_DIM,
            field: Field::Rationals,
            cache: Some(PathBuf::from(DEFAULT_CACHE_DIR)),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    cutoff: Option<usize>,
    max_dim: Option<usize>,
    field: Option<toml::Value>,
    cache: Option<String>,
}

/// Overrides given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub config: Option<PathBuf>,
    pub cutoff: Option<usize>,
    pub max_dim: Option<usize>,
    pub field: Option<String>,
    pub cache: Option<PathBuf>,
    pub no_cache: bool,
}

/// `"Q"`, `"rationals"`, `"F5"` or `"prime:5"`.
pub fn parse_field(s: &str) -> Result<Field> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    if lower == "q" || lower == "rationals" {
        return Ok(Field::Rationals);
    }
    let digits = lower.strip_prefix("prime:").or_else(|| lower.strip_prefix('f')).unwrap_or(&lower);
    let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown field {t:?}")))?;
    Field::prime(p)
}

fn field_from_toml(v: &toml::Value) -> Result<Field> {
    match v {
        toml::Value::String(s) => parse_field(s),
        toml::Value::Table(_) => {
            let json = serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            serde_json::from_value::<Field>(json)?.validate()
        }
        _ => Err(Error::Parse("config field must be a string or a table".into())),
    }
}

impl Config {
    /// Resolves settings with `env` standing in for the process environment.
    pub fn resolve(flags: &Flags, env: impl Fn(&str) -> Option<String>) -> Result<Config> {
        let mut c = Config::default();
        let path = flags.config.clone().or_else(|| Some(PathBuf::from(CONFIG_FILE)).filter(|p| p.exists()));
        if let Some(p) = path {
            c.apply_file(&p)?;
        }
        if let Some(v) = env("HOMALG_CUTOFF") {
            c.cutoff = v.trim().parse().map_err(|_| Error::Parse(format!("HOMALG_CUTOFF={v:?} is not a number")))?;
        }
        if let Some(v) = env("HOMALG_CACHE") {
            c.cache = cache_setting(&v);
        }
        if let Some(n) = flags.cutoff {
            c.cutoff = n;
        }
        if let Some(n) = flags.max_dim {
            c.max_dim = n;
        }
        if let Some(f) = &flags.field {
            c.field = parse_field(f)?;
        }
        if let Some(p) = &flags.cache {
            c.cache = Some(p.clone());
        }
        if flags.no_cache {
            c.cache = None;
        }
        Ok(c)
    }

    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let f: FileConfig = toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if let Some(n) = f.cutoff {
            self.cutoff = n;
        }
        if let Some(n) = f.max_dim {
            self.max_dim = n;
        }
        if let Some(v) = &f.field {
            self.field = field_from_toml(v)?;
        }
        if let Some(s) = &f.cache {
            self.cache = cache_setting(s);
        }
        Ok(())
    }
}

/// An empty value or `off` disables the cache.
fn cache_setting(s: &str) -> Option<PathBuf> {
    let t = s.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("off") {
        None
    } else {
        Some(PathBuf::from(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_env(_: &str) -> Option<String> {
        None
    }

    #[test]
    fn precedence() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("c.toml");
        std::fs::write(&file, "cutoff = 5\nmax_dim = 3\nfield = \"F5\"\ncache = \"off\"\n").unwrap();
        let mut flags = Flags { config: Some(file), ..Flags::default() };
        let c = Config::resolve(&flags, no_env).unwrap();
        assert_eq!((c.cutoff, c.max_dim, c.field, c.cache.clone()), (5, 3, Field::prime(5).unwrap(), None));
        let env = |k: &str| match k {
            "HOMALG_CUTOFF" => Some("7".to_string()),
            "HOMALG_CACHE" => Some("/tmp/x".to_string()),
            _ => None,
        };
        let c = Config::resolve(&flags, env).unwrap();
        assert_eq!((c.cutoff, c.cache.clone()), (7, Some(PathBuf::from("/tmp/x"))));
        flags.cutoff = Some(9);
        flags.no_cache = true;
        let c = Config::resolve(&flags, env).unwrap();
        assert_eq!((c.cutoff, c.cache), (9, None));
    }

    #[test]
    fn defaults_and_fields() {
        let flags = Flags { config: Some(PathBuf::from("/nonexistent/homalg.toml")), ..Flags::default() };
        assert!(Config::resolve(&flags, no_env).is_err());
        assert_eq!(parse_field("Q").unwrap(), Field::Rationals);
        assert_eq!(parse_field("prime:7").unwrap(), Field::prime(7).unwrap());
        assert!(parse_field("F6").is_err());
        assert!(parse_field("R").is_err());
    }
}
