//! Flat `key = value` configuration files.
//!
//! ```text
//! # comment
//! kind = flux
//! seed = 42
//!
//! [base]
//! flux = 0.3
//! epsilon = 0.2
//! winding = auto
//!
//! [grid]
//! start = 0
//! stop = 2
//! count = 201
//!
//! [output]
//! format = csv
//! precision = 12
//! ```
//!
//! Values may be bare or wrapped in double quotes. A trailing `# comment` is
//! stripped from bare values. Keys are validated against a fixed table, so a
//! typo is reported instead of ignored.

use std::collections::BTreeMap;
use std::path::Path;

use super::SweepError;

/// `(section, key)` pairs accepted in configuration files. The empty section
/// holds the top-level keys.
pub const KNOWN_KEYS: &[(&str, &str)] = &[
    ("", "kind"),
    ("", "seed"),
    ("", "cases"),
    ("base", "radius"),
    ("base", "charge"),
    ("base", "mass"),
    ("base", "base_density"),
    ("base", "flux"),
    ("base", "epsilon"),
    ("base", "harmonic"),
    ("base", "profile_file"),
    ("base", "grid_size"),
    ("base", "winding"),
    ("base", "alpha"),
    ("base", "beta"),
    ("base", "shape_factor"),
    ("grid", "start"),
    ("grid", "stop"),
    ("grid", "count"),
    ("output", "path"),
    ("output", "format"),
    ("output", "precision"),
    ("output", "phase_path"),
];

fn qualified(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

/// Raw settings keyed by qualified name (`kind`, `base.flux`, `grid.count`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str, origin: &Path) -> Result<Self, SweepError> {
        let mut settings = Settings::default();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let at = |msg: String| {
                SweepError::Usage(format!("{}:{line_no}: {msg}", origin.display()))
            };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| at(format!("malformed section header {line:?}")))?
                    .trim();
                if !KNOWN_KEYS.iter().any(|(s, _)| *s == name) || name.is_empty() {
                    return Err(at(format!("unknown section [{name}]")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim();
            let value = unquote(value.trim());
            if !KNOWN_KEYS.contains(&(section.as_str(), key)) {
                return Err(at(format!("unknown key `{}`", qualified(&section, key))));
            }
            let name = qualified(&section, key);
            if settings.values.contains_key(&name) {
                return Err(at(format!("duplicate key `{name}`")));
            }
            settings.values.insert(name, value);
        }
        Ok(settings)
    }

    pub fn read(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path).map_err(|source| SweepError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// Sets a value, overriding whatever the file held. `name` is qualified.
    pub fn set(&mut self, name: &str, value: impl Into<String>) -> Result<(), SweepError> {
        if !KNOWN_KEYS.iter().any(|(s, k)| qualified(s, k) == name) {
            return Err(SweepError::Usage(format!("unknown key `{name}`")));
        }
        self.values.insert(name.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    /// Parses a value with `FromStr`, naming the key on failure.
    pub fn parsed<T>(&self, name: &str) -> Result<Option<T>, SweepError>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                SweepError::Usage(format!("key `{name}`: cannot parse {raw:?}: {e}"))
            }),
        }
    }
}

fn unquote(value: &str) -> String {
    if let Some(inner) = value.strip_prefix('"').and_then(|v| v.strip_suffix('"')) {
        return inner.to_string();
    }
    match value.find(" #") {
        Some(pos) => value[..pos].trim_end().to_string(),
        None => value.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Settings, SweepError> {
        Settings::parse(text, Path::new("test.conf"))
    }

    #[test]
    fn sections_and_comments() {
        let s = parse(
            "# header\nkind = flux\n\n[base]\nflux = 0.3  # a third-ish\nprofile_file = \"a b.txt\"\n[output]\nformat=json\n",
        )
        .unwrap();
        assert_eq!(s.get("kind"), Some("flux"));
        assert_eq!(s.get("base.flux"), Some("0.3"));
        assert_eq!(s.get("base.profile_file"), Some("a b.txt"));
        assert_eq!(s.get("output.format"), Some("json"));
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse("kind = flux\n[base]\nfluxx = 1\n").unwrap_err();
        assert!(err.to_string().contains("base.fluxx"), "{err}");
        let err = parse("[nope]\n").unwrap_err();
        assert!(err.to_string().contains("[nope]"));
        let err = parse("kind flux\n").unwrap_err();
        assert!(err.to_string().contains("test.conf:1"));
    }

    #[test]
    fn duplicates_rejected_and_overrides_allowed() {
        assert!(parse("kind = flux\nkind = omega\n").is_err());
        let mut s = parse("kind = flux\n").unwrap();
        s.set("kind", "omega").unwrap();
        assert_eq!(s.get("kind"), Some("omega"));
        assert!(s.set("base.bogus", "1").is_err());
    }

    #[test]
    fn type_mismatch_names_key() {
        let s = parse("[base]\ngrid_size = many\n").unwrap();
        let err = s.parsed::<usize>("base.grid_size").unwrap_err();
        assert!(err.to_string().contains("base.grid_size"));
    }
}
