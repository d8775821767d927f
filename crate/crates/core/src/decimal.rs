//! Exact decimal values as scaled integers.
//!
//! Quantity extractors must compare and serialize money exactly, so values
//! are an `i128` mantissa plus a base-10 scale instead of binary floats.
//! Display keeps the scale the value was built with: `1250000.00` written
//! with two fraction digits serializes back with two fraction digits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{LexError, Result};

const MAX_SCALE: u32 = 18;
const MAX_DIGITS: usize = 30;

/// Exact decimal: `mantissa / 10^scale`.
#[derive(Debug, Clone, Copy)]
pub struct Dec {
    mantissa: i128,
    scale: u32,
}

impl Dec {
    pub const ZERO: Dec = Dec { mantissa: 0, scale: 0 };

    pub fn new(mantissa: i128, scale: u32) -> Self {
        assert!(scale <= MAX_SCALE, "scale {scale} exceeds maximum {MAX_SCALE}");
        Dec { mantissa, scale }
    }

    pub fn from_int(n: i128) -> Self {
        Dec { mantissa: n, scale: 0 }
    }

    pub fn mantissa(&self) -> i128 {
        self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0
    }

    /// Parse a numeral with optional sign, thousands separators, and
    /// decimal point: `1,250,000.00`, `-3.5`, `42`.
    pub fn parse(text: &str) -> Result<Self> {
        let cleaned: String = text.chars().filter(|&c| c != ',').collect();
        let cleaned = cleaned.trim();
        if cleaned.is_empty() {
            return Err(LexError::Argument("empty numeral".into()));
        }
        let (neg, digits) = match cleaned.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, cleaned.strip_prefix('+').unwrap_or(cleaned)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(LexError::Argument(format!("not a numeral: {text:?}")));
        }
        if int_part.len() + frac_part.len() > MAX_DIGITS || frac_part.len() as u32 > MAX_SCALE {
            return Err(LexError::Argument(format!("numeral too long: {text:?}")));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(LexError::Argument(format!("not a numeral: {text:?}")));
        }
        let mut mantissa: i128 = 0;
        for c in int_part.chars().chain(frac_part.chars()) {
            mantissa = mantissa * 10 + (c as u8 - b'0') as i128;
        }
        if neg {
            mantissa = -mantissa;
        }
        Ok(Dec { mantissa, scale: frac_part.len() as u32 })
    }

    fn pow10(exp: u32) -> i128 {
        10i128.pow(exp)
    }

    /// Align two values to a common scale.
    fn aligned(&self, other: &Dec) -> (i128, i128, u32) {
        let scale = self.scale.max(other.scale);
        let a = self.mantissa * Self::pow10(scale - self.scale);
        let b = other.mantissa * Self::pow10(scale - other.scale);
        (a, b, scale)
    }

    /// Sum; result scale is the larger operand scale.
    pub fn add(&self, other: &Dec) -> Dec {
        let (a, b, scale) = self.aligned(other);
        Dec { mantissa: a + b, scale }
    }

    /// Product; result scale is the sum of operand scales.
    pub fn mul(&self, other: &Dec) -> Option<Dec> {
        let mantissa = self.mantissa.checked_mul(other.mantissa)?;
        let scale = self.scale + other.scale;
        if scale > MAX_SCALE {
            return None;
        }
        Some(Dec { mantissa, scale })
    }

    pub fn mul_int(&self, n: i128) -> Option<Dec> {
        Some(Dec { mantissa: self.mantissa.checked_mul(n)?, scale: self.scale })
    }

    /// Quotient rounded half-up to `dp` fraction digits.
    pub fn div_dp(&self, other: &Dec, dp: u32) -> Option<Dec> {
        if other.mantissa == 0 {
            return None;
        }
        // value = a*10^sb / (b*10^sa); scale numerator so the integer
        // quotient carries dp fraction digits.
        let num = self.mantissa.checked_mul(Self::pow10(other.scale + dp))?;
        let den = other.mantissa.checked_mul(Self::pow10(self.scale))?;
        let q = num / den;
        let r = num % den;
        let half = if (r < 0) == (den < 0) { 1 } else { -1 };
        let rounded = if r.checked_mul(2)?.abs() >= den.abs() { q + half } else { q };
        Some(Dec { mantissa: rounded, scale: dp })
    }

    /// Drop trailing fraction zeros: `3.000` -> `3`, `36266.020` -> `36266.02`.
    pub fn normalize(&self) -> Dec {
        let mut m = self.mantissa;
        let mut s = self.scale;
        while s > 0 && m % 10 == 0 {
            m /= 10;
            s -= 1;
        }
        Dec { mantissa: m, scale: s }
    }

    /// Force a display scale; only widens (never drops digits).
    pub fn with_scale_at_least(&self, scale: u32) -> Dec {
        if scale <= self.scale {
            *self
        } else {
            Dec { mantissa: self.mantissa * Self::pow10(scale - self.scale), scale }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mantissa as f64 / Self::pow10(self.scale) as f64
    }
}

impl PartialEq for Dec {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.aligned(other);
        a == b
    }
}

impl Eq for Dec {}

impl PartialOrd for Dec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dec {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl std::hash::Hash for Dec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let n = self.normalize();
        n.mantissa.hash(state);
        n.scale.hash(state);
    }
}

impl fmt::Display for Dec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.mantissa);
        }
        let sign = if self.mantissa < 0 { "-" } else { "" };
        let abs = self.mantissa.unsigned_abs();
        let div = Self::pow10(self.scale) as u128;
        let int = abs / div;
        let frac = abs % div;
        write!(f, "{sign}{int}.{frac:0width$}", width = self.scale as usize)
    }
}

impl FromStr for Dec {
    type Err = LexError;

    fn from_str(s: &str) -> Result<Self> {
        Dec::parse(s)
    }
}

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_keeps_written_scale() {
        let d = Dec::parse("1,250,000.00").unwrap();
        assert_eq!(d.to_string(), "1250000.00");
        assert_eq!(d.scale(), 2);
        assert_eq!(Dec::parse("5").unwrap().to_string(), "5");
        assert_eq!(Dec::parse("2.035").unwrap().to_string(), "2.035");
    }

    #[test]
    fn equality_ignores_scale() {
        assert_eq!(Dec::parse("1250000").unwrap(), Dec::parse("1250000.00").unwrap());
        assert_ne!(Dec::parse("1250000.01").unwrap(), Dec::parse("1250000").unwrap());
    }

    #[test]
    fn add_aligns_scales() {
        let a = Dec::from_int(36266);
        let b = Dec::new(2, 2); // 0.02
        assert_eq!(a.add(&b).to_string(), "36266.02");
    }

    #[test]
    fn mul_scale_word() {
        // 2.035 * 10^9 = 2035000000
        let d = Dec::parse("2.035").unwrap().mul_int(1_000_000_000).unwrap().normalize();
        assert_eq!(d.to_string(), "2035000000");
    }

    #[test]
    fn div_rounds_half_up() {
        let four = Dec::from_int(4);
        let three = Dec::from_int(3);
        assert_eq!(four.div_dp(&three, 12).unwrap().to_string(), "1.333333333333");
        let two = Dec::from_int(2);
        assert_eq!(two.div_dp(&three, 3).unwrap().to_string(), "0.667");
        assert_eq!(Dec::from_int(3).div_dp(&Dec::from_int(1), 12).unwrap().normalize().to_string(), "3");
        assert!(four.div_dp(&Dec::ZERO, 2).is_none());
    }

    #[test]
    fn rejects_junk() {
        assert!(Dec::parse("").is_err());
        assert!(Dec::parse("abc").is_err());
        assert!(Dec::parse("1.2.3").is_err());
        assert!(Dec::parse("999999999999999999999999999999999").is_err());
    }

    #[test]
    fn negative_display() {
        assert_eq!(Dec::parse("-3.50").unwrap().to_string(), "-3.50");
        assert_eq!(Dec::new(-5, 2).to_string(), "-0.05");
    }
}
