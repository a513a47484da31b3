//! Flat key=value experiment configs with cosmetic `[section]` headers.
//!
//! Keys are globally unique; sections only organize the file visually.
//! Example:
//!
//! ```text
//! [experiment]
//! kind = growth
//! name = z2-growth
//! [params]
//! key = zd:2
//! r_max = 12
//! ```

use num_bigint::BigInt;
use num_rational::Ratio;
use rdlab_core::conv::SparseGroupFunction;
use rdlab_core::group::GroupModel;
use rdlab_core::{Error, Rational, RationalFn, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Default)]
pub struct Config {
    pub entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            let key = k.trim().to_string();
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("duplicate key `{key}`")));
            }
        }
        Ok(Config { entries })
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.entries
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get_u32(&self, key: &str, default: u32) -> Result<u32> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not an integer"))),
        }
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not an integer"))),
        }
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not a number"))),
        }
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.get_u64(key, default as u64)? as usize)
    }
}

/// Parses a function literal: `;`-separated `(element-word, numerator,
/// denominator)` triples written `word : num/den` (or `word : num`).
pub fn parse_function_literal(model: &GroupModel, text: &str) -> Result<RationalFn> {
    let mut pairs = Vec::new();
    for item in text.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (word, value) = item.rsplit_once(':').ok_or_else(|| {
            Error::Config(format!("function entry `{item}` needs `word : num/den`"))
        })?;
        let elem = model.parse_word(word.trim())?;
        let (num, den) = match value.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (value.trim(), "1"),
        };
        let num: i64 = num
            .parse()
            .map_err(|_| Error::Config(format!("bad numerator `{num}`")))?;
        let den: i64 = den
            .parse()
            .map_err(|_| Error::Config(format!("bad denominator `{den}`")))?;
        if den == 0 {
            return Err(Error::Config("zero denominator".into()));
        }
        let q: Rational = Ratio::new(BigInt::from(num), BigInt::from(den));
        pairs.push((elem, q));
    }
    Ok(SparseGroupFunction::from_pairs(model, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rdlab_core::group::registry::resolve;

    #[test]
    fn parses_sections_and_flat_keys() {
        let c = Config::parse("[a]\nkind = growth\n# comment\n[b]\nr_max = 12\n").unwrap();
        assert_eq!(c.require("kind").unwrap(), "growth");
        assert_eq!(c.get_u32("r_max", 0).unwrap(), 12);
        assert_eq!(c.get_u32("missing", 7).unwrap(), 7);
    }

    #[test]
    fn rejects_duplicates() {
        assert!(Config::parse("a = 1\na = 2\n").is_err());
    }

    #[test]
    fn function_literals_parse() {
        let m = resolve("free:2").unwrap();
        let f = parse_function_literal(&m, "a : 3/2 ; a b^-1 : -1 ; e : 1/3").unwrap();
        assert_eq!(f.support_size(), 3);
        let a = m.parse_word("a").unwrap();
        assert_eq!(f.get(&a), Ratio::new(BigInt::from(3), BigInt::from(2)));
    }
}
