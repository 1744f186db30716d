//! Plain-text `key = value` documents used for constellation definitions
//! and run configuration.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parsed document: keys in sorted order, each remembering its source line.
#[derive(Debug, Clone, Default)]
pub struct KvDocument {
    entries: BTreeMap<String, (usize, String)>,
}

impl KvDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "empty key".into(),
                });
            }
            if entries
                .insert(key.to_string(), (line_no, value.trim().to_string()))
                .is_some()
            {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Typed lookup; `None` when the key is absent.
    pub fn parse_opt<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, value)) => value.parse::<T>().map(Some).map_err(|e| Error::Parse {
                line: *line,
                message: format!("invalid value `{value}` for `{key}`: {e}"),
            }),
        }
    }

    pub fn parse_req<T>(&self, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.parse_opt(key)?
            .ok_or_else(|| Error::config(format!("missing key `{key}`")))
    }

    /// Comma-separated list value.
    pub fn parse_list<T>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let Some((line, value)) = self.entries.get(key) else {
            return Ok(None);
        };
        value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|item| {
                item.parse::<T>().map_err(|e| Error::Parse {
                    line: *line,
                    message: format!("invalid list item `{item}` for `{key}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

/// Ordered writer producing the same format [`KvDocument::parse`] reads.
#[derive(Debug, Default)]
pub struct KvWriter {
    out: String,
}

impl KvWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn comment(&mut self, text: &str) -> &mut Self {
        self.out.push_str("# ");
        self.out.push_str(text);
        self.out.push('\n');
        self
    }

    pub fn entry(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.out.push_str(&format!("{key} = {value}\n"));
        self
    }

    pub fn finish(self) -> String {
        self.out
    }
}
