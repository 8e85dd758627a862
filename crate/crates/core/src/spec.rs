//! `key=value` specification strings, e.g.
//! `problem=lbp variant=halfonhalf n=200 k=10 R=1 alpha=0.1`.

use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyValues {
    pairs: Vec<(String, String)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for tok in text.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::InvalidSpec(format!("expected key=value, got {tok:?}")))?;
            if k.is_empty() {
                return Err(Error::InvalidSpec(format!("empty key in {tok:?}")));
            }
            if pairs.iter().any(|(pk, _)| pk == k) {
                return Err(Error::InvalidSpec(format!("duplicate key {k:?}")));
            }
            pairs.push((k.to_string(), v.to_string()));
        }
        Ok(Self { pairs })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::InvalidSpec(format!("missing key {key:?}")))
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::InvalidSpec(format!("bad value {v:?} for {key:?}")))
            })
            .transpose()
    }

    pub fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        self.parsed(key)?
            .ok_or_else(|| Error::InvalidSpec(format!("missing key {key:?}")))
    }

    pub fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(k, _)| k.as_str())
    }

    /// Fails on any key outside `allowed`.
    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(Error::InvalidSpec(format!("unknown key {k:?}"))),
            None => Ok(()),
        }
    }
}

pub(crate) fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::InvalidSpec(format!("bad boolean {v:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs() {
        let kv = KeyValues::parse("problem=lbp  n=200 alpha=0.1").unwrap();
        assert_eq!(kv.get("problem"), Some("lbp"));
        assert_eq!(kv.required::<usize>("n").unwrap(), 200);
        assert_eq!(kv.or("R", 1usize).unwrap(), 1);
        assert!(kv.required::<usize>("alpha").is_err());
        assert!(kv.only(&["problem", "n"]).is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert!(KeyValues::parse("n").is_err());
        assert!(KeyValues::parse("n=1 n=2").is_err());
        assert!(KeyValues::parse("=3").is_err());
    }
}
