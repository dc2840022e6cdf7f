//! Twist words over named curves.

use super::McgError;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Sequence of signed Dehn-twist letters about named curves. Adjacent letters
/// with equal curve name are merged and zero exponents dropped on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistWord {
    letters: Vec<(String, i64)>,
}

impl TwistWord {
    pub fn empty() -> Self {
        TwistWord::default()
    }

    pub fn letter(curve: impl Into<String>, exponent: i64) -> Self {
        let mut w = TwistWord::empty();
        w.push(curve.into(), exponent);
        w
    }

    pub fn from_letters<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut w = TwistWord::empty();
        for (c, e) in letters {
            w.push(c.into(), e);
        }
        w
    }

    pub(crate) fn push(&mut self, curve: String, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == curve {
                // a silent wrap would corrupt certificates; fail loudly instead
                last.1 = last
                    .1
                    .checked_add(exponent)
                    .expect("twist exponent overflow");
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((curve, exponent));
    }

    pub fn letters(&self) -> &[(String, i64)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut w = TwistWord::empty();
        for (c, e) in self.letters.iter().rev() {
            w.push(c.clone(), -e);
        }
        w
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for (c, e) in &other.letters {
            w.push(c.clone(), *e);
        }
        w
    }

    /// Splits into single twists with exponent ±1, leftmost first.
    pub fn split_single(&self) -> Result<Vec<(String, i64)>, McgError> {
        const MAX_TWISTS: i64 = 4096;
        let mut out = Vec::new();
        for (c, e) in &self.letters {
            if e.abs() > MAX_TWISTS || out.len() as i64 + e.abs() > MAX_TWISTS {
                return Err(McgError::ExponentTooLarge {
                    curve: c.clone(),
                    exponent: *e,
                });
            }
            let step = e.signum();
            for _ in 0..e.abs() {
                out.push((c.clone(), step));
            }
        }
        Ok(out)
    }

    /// Parses the text form `f_alpha.f_2^-1.f_beta`; curve names are whatever
    /// follows the `f_` prefix, up to an optional `^exponent`.
    pub fn parse_text(text: &str) -> Result<Self, McgError> {
        let trimmed = text.trim();
        let mut w = TwistWord::empty();
        if trimmed.is_empty() {
            return Ok(w);
        }
        for token in trimmed.split('.') {
            let token = token.trim();
            let rest = token.strip_prefix("f_").ok_or_else(|| McgError::Parse {
                text: text.to_string(),
                reason: format!("letter {token:?} does not start with \"f_\""),
            })?;
            let (name, exp) = match rest.split_once('^') {
                Some((n, e)) => {
                    let exp = e.parse::<i64>().map_err(|err| McgError::Parse {
                        text: text.to_string(),
                        reason: format!("bad exponent in {token:?}: {err}"),
                    })?;
                    if exp.checked_abs().is_none_or(|a| a > (1 << 40)) {
                        return Err(McgError::Parse {
                            text: text.to_string(),
                            reason: format!("exponent in {token:?} exceeds ±2^40"),
                        });
                    }
                    (n, exp)
                }
                None => (rest, 1),
            };
            if name.is_empty() {
                return Err(McgError::Parse {
                    text: text.to_string(),
                    reason: format!("empty curve name in {token:?}"),
                });
            }
            w.push(name.to_string(), exp);
        }
        Ok(w)
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, e) in &self.letters {
            if !first {
                write!(f, ".")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "f_{c}")?;
            } else {
                write!(f, "f_{c}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for TwistWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TwistWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        TwistWord::parse_text(&s).map_err(DeError::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_merges_and_drops_zeros() {
        let w = TwistWord::from_letters([("alpha", 2), ("alpha", -2), ("beta", 1)]);
        assert_eq!(w, TwistWord::letter("beta", 1));
        let w = TwistWord::from_letters([("alpha", 1), ("beta", 0), ("beta", 3)]);
        assert_eq!(w.letters(), &[("alpha".into(), 1), ("beta".into(), 3)]);
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let w = TwistWord::from_letters([("a", 2), ("b", -1)]);
        let inv = w.inverse();
        assert_eq!(inv.letters(), &[("b".into(), 1), ("a".into(), -2)]);
        assert!(w.concat(&inv).is_empty());
        assert!(inv.concat(&w).is_empty());
    }

    #[test]
    fn parse_and_display() {
        let w = TwistWord::parse_text("f_alpha.f_2^-1.f_beta").unwrap();
        assert_eq!(
            w.letters(),
            &[("alpha".into(), 1), ("2".into(), -1), ("beta".into(), 1)]
        );
        assert_eq!(w.to_string(), "f_alpha.f_2^-1.f_beta");
        assert_eq!(TwistWord::parse_text("").unwrap(), TwistWord::empty());
        assert!(TwistWord::parse_text("alpha").is_err());
        assert!(TwistWord::parse_text("f_a^x").is_err());
        assert!(TwistWord::parse_text("f_^2").is_err());
        assert!(TwistWord::parse_text("f_a^9007199254740993").is_err());
    }

    #[test]
    fn split_single() {
        let w = TwistWord::from_letters([("a", -2), ("b", 1)]);
        assert_eq!(
            w.split_single().unwrap(),
            vec![("a".into(), -1), ("a".into(), -1), ("b".into(), 1)]
        );
    }
}
