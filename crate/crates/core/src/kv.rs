//! Flat `key = value` configuration files.
//!
//! One pair per line; blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KvMap {
    entries: BTreeMap<String, String>,
}

impl KvMap {
    pub fn parse(text: &str) -> Result<KvMap> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse { line: n as u64 + 1, message: format!("expected key = value, got {line:?}") });
            };
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Parse { line: n as u64 + 1, message: "empty key".into() });
            }
            if entries.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Parse { line: n as u64 + 1, message: format!("duplicate key {k:?}") });
            }
        }
        Ok(KvMap { entries })
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Parsed value, or `None` when the key is absent.
    pub fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.entries
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| Error::Input(format!("config key {key}: {e} ({v:?})"))))
            .transpose()
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Errors on any key outside `known`.
    pub fn check_keys(&self, known: &[&str]) -> Result<()> {
        match self.keys().find(|k| !known.contains(k)) {
            Some(k) => Err(Error::Input(format!("unknown config key {k:?}"))),
            None => Ok(()),
        }
    }

    /// Sorted `key = value` lines.
    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}
