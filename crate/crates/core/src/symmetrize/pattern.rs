use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Formal variable tokens that may occupy slots besides the unit.
pub const TOKEN_NAMES: [&str; 3] = ["x", "y", "z"];

/// Assignment of the `N` arguments of the symmetrized form: how many slots
/// hold `x`, `y`, `z` and how many hold the unit `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BlockPattern {
    pub counts: [u32; 3],
    pub ones: u32,
}

impl BlockPattern {
    pub fn new(counts: [u32; 3], ones: u32) -> Self {
        BlockPattern { counts, ones }
    }

    /// `{x:N}`: evaluates the form on its diagonal.
    pub fn diagonal(n: u32) -> Self {
        BlockPattern::new([n, 0, 0], 0)
    }

    /// `{x:1, 1:N-1}`.
    pub fn single(n: u32) -> Self {
        BlockPattern::new([1, 0, 0], n.saturating_sub(1))
    }

    /// `{x:1, y:1, 1:N-2}`.
    pub fn pair(n: u32) -> Self {
        BlockPattern::new([1, 1, 0], n.saturating_sub(2))
    }

    /// `{1:N}`.
    pub fn unit(n: u32) -> Self {
        BlockPattern::new([0, 0, 0], n)
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum::<u32>() + self.ones
    }

    /// The slot contents in a fixed order: tokens `0..3` for `x, y, z`,
    /// `3` for the unit.
    pub(crate) fn slots(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.total() as usize);
        for (t, &c) in self.counts.iter().enumerate() {
            v.extend(std::iter::repeat_n(t, c as usize));
        }
        v.extend(std::iter::repeat_n(3, self.ones as usize));
        v
    }

    /// Parses `{x:1, y:1, 1:2}`. Absent tokens count zero.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::UnsupportedPattern(format!("expected {{token:count, …}}, found {text:?}")))?;
        let mut pat = BlockPattern::new([0; 3], 0);
        let mut others = Vec::new();
        for entry in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (tok, count) = entry
                .split_once(':')
                .ok_or_else(|| Error::UnsupportedPattern(format!("malformed entry {entry:?}")))?;
            let count: u32 = count
                .trim()
                .parse()
                .map_err(|_| Error::UnsupportedPattern(format!("bad count in {entry:?}")))?;
            match tok.trim() {
                "1" => pat.ones += count,
                t => match TOKEN_NAMES.iter().position(|n| *n == t) {
                    Some(i) => pat.counts[i] += count,
                    None => {
                        if !others.contains(&t.to_string()) {
                            others.push(t.to_string());
                        }
                    }
                },
            }
        }
        if !others.is_empty() {
            return Err(Error::UnsupportedPattern(format!(
                "only the tokens x, y, z and 1 are supported, found {}",
                others.join(", ")
            )));
        }
        Ok(pat)
    }
}

impl fmt::Display for BlockPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, &c) in TOKEN_NAMES.iter().zip(&self.counts) {
            if c > 0 {
                parts.push(format!("{name}:{c}"));
            }
        }
        if self.ones > 0 {
            parts.push(format!("1:{}", self.ones));
        }
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = BlockPattern::parse("{x:1, y:1, 1:2}").unwrap();
        assert_eq!(p, BlockPattern::pair(4));
        assert_eq!(p.to_string(), "{x:1,y:1,1:2}");
        assert_eq!(p.total(), 4);
        assert!(matches!(BlockPattern::parse("{x:1,w:1,1:2}"), Err(Error::UnsupportedPattern(_))));
        assert!(BlockPattern::parse("x:1").is_err());
    }
}
