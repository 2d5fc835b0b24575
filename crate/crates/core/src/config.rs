//! Flat `key = value` text format shared by model specs and run configs.
//!
//! Lines are `key = value`; `#` starts a comment; blank lines are ignored.
//! Keys are case-sensitive and may appear at most once.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Ordered key-value table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = Self::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(Error::Config(format!("line {}: malformed key `{key}`", lineno + 1)));
            }
            if kv.entries.contains_key(key) {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            kv.entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(kv)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Typed lookup; `Ok(None)` when the key is absent.
    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::Config(format!("key `{key}`: cannot parse `{raw}`"))),
        }
    }

    /// Fails if any key is outside `allowed`.
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(Error::Config(format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }

    /// Merges `other` over `self`; entries in `other` win.
    pub fn overlay(&mut self, other: &KeyValues) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let kv = KeyValues::parse("# model\nkind = cs\n  n=3 # particles\n\nalpha = 1.5\n").unwrap();
        assert_eq!(kv.get("kind"), Some("cs"));
        assert_eq!(kv.parsed::<usize>("n").unwrap(), Some(3));
        assert_eq!(kv.parsed::<f64>("alpha").unwrap(), Some(1.5));
        assert_eq!(kv.parsed::<f64>("omega").unwrap(), None);
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(KeyValues::parse("n = 2\nn = 3").is_err());
        assert!(KeyValues::parse("no equals sign").is_err());
        assert!(KeyValues::parse("bad key = 1").is_err());
        let kv = KeyValues::parse("n = two").unwrap();
        assert!(kv.parsed::<usize>("n").is_err());
    }

    #[test]
    fn text_roundtrip_and_overlay() {
        let mut kv = KeyValues::parse("b = 1\na = 2").unwrap();
        assert_eq!(KeyValues::parse(&kv.to_text()).unwrap(), kv);
        let flags = KeyValues::parse("a = 9").unwrap();
        kv.overlay(&flags);
        assert_eq!(kv.get("a"), Some("9"));
        assert!(kv.reject_unknown(&["a", "b"]).is_ok());
        assert!(kv.reject_unknown(&["a"]).is_err());
    }
}
