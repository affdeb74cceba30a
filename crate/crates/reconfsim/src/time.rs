//! Exact time arithmetic: instants, non-negative spans, the unit-suffixed
//! duration syntax, and hyperperiods.
//!
//! All times are rational seconds. Floats appear only at reporting
//! boundaries, never inside scheduling arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// An instant on the simulation timeline, in seconds from release time zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeStamp(Rational);

/// A non-negative length of time, in seconds.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeSpan(Rational);

impl TimeStamp {
    pub const ZERO: TimeStamp = TimeStamp(Rational::ZERO);

    pub fn as_rational(&self) -> Rational {
        self.0
    }

    pub fn checked_add(&self, span: TimeSpan) -> Result<TimeStamp> {
        Ok(TimeStamp(self.0.checked_add(&span.0)?))
    }

    /// `self - earlier`; erroring when `earlier` is actually later.
    pub fn checked_since(&self, earlier: TimeStamp) -> Result<TimeSpan> {
        if *self < earlier {
            return Err(Error::NegativeInstant);
        }
        Ok(TimeSpan(self.0.checked_sub(&earlier.0)?))
    }
}

impl TimeSpan {
    pub const ZERO: TimeSpan = TimeSpan(Rational::ZERO);

    /// Wraps a rational second count; negative values are rejected.
    pub fn new(seconds: Rational) -> Result<TimeSpan> {
        if seconds.is_negative() {
            return Err(Error::NegativeDuration(seconds.to_string()));
        }
        Ok(TimeSpan(seconds))
    }

    pub fn from_ms(ms: u64) -> TimeSpan {
        TimeSpan(Rational::new(ms as i128, 1000).expect("nonzero denominator"))
    }

    pub fn as_rational(&self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_secs_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn checked_add(&self, other: TimeSpan) -> Result<TimeSpan> {
        Ok(TimeSpan(self.0.checked_add(&other.0)?))
    }

    pub fn checked_mul_int(&self, k: u64) -> Result<TimeSpan> {
        Ok(TimeSpan(self.0.checked_mul(&Rational::integer(k as i128))?))
    }

    /// Divides by a positive rational factor (e.g. an overlay throughput
    /// scale).
    pub fn checked_div_factor(&self, factor: &Rational) -> Result<TimeSpan> {
        if !factor.is_positive() {
            return Err(Error::DivisionByZero);
        }
        Ok(TimeSpan(self.0.checked_div(factor)?))
    }

    /// Exact ratio of two spans.
    pub fn checked_ratio(&self, other: TimeSpan) -> Result<Rational> {
        self.0.checked_div(&other.0)
    }

    pub fn at(&self) -> TimeStamp {
        TimeStamp(self.0)
    }
}

// ── Duration syntax ─────────────────────────────────────────────────────────

/// Parses a unit-suffixed duration: `"20ms"`, `"0.2ms"`, `"250us"`,
/// `"1/15s"`. Bare numbers are rejected so a missing unit can never silently
/// change magnitude.
pub fn parse_duration(text: &str) -> Result<TimeSpan> {
    let trimmed = text.trim();
    let (number, unit_den) = if let Some(n) = trimmed.strip_suffix("ms") {
        (n, 1_000)
    } else if let Some(n) = trimmed.strip_suffix("us") {
        (n, 1_000_000)
    } else if let Some(n) = trimmed.strip_suffix('s') {
        (n, 1)
    } else {
        return Err(Error::MissingUnit(trimmed.to_string()));
    };
    if number.is_empty() {
        return Err(Error::InvalidNumber(trimmed.to_string()));
    }
    let value = Rational::from_str(number)?;
    let seconds = value.checked_div(&Rational::integer(unit_den))?;
    if seconds.is_negative() {
        return Err(Error::NegativeDuration(trimmed.to_string()));
    }
    TimeSpan::new(seconds)
}

/// Canonical rendering for the duration syntax. Sub-second values that
/// terminate in milliseconds print as milliseconds (`"20ms"`, `"0.2ms"`),
/// terminating second values print as seconds (`"2s"`), everything else
/// falls back to the exact fraction (`"1/15s"`).
pub fn format_duration(span: TimeSpan) -> String {
    let secs = span.as_rational();
    if secs.is_zero() {
        return "0ms".to_string();
    }
    if secs < Rational::ONE {
        let ms = secs
            .checked_mul(&Rational::integer(1000))
            .expect("duration formatting overflow");
        if let Some(s) = ms.to_decimal_string(6) {
            return format!("{s}ms");
        }
    }
    if let Some(s) = secs.to_decimal_string(9) {
        return format!("{s}s");
    }
    format!("{}/{}s", secs.numerator(), secs.denominator())
}

impl fmt::Display for TimeSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_duration(*self))
    }
}

impl fmt::Debug for TimeSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_duration(*self))
    }
}

impl fmt::Display for TimeStamp {
    /// Seconds, as a terminating decimal or an exact fraction.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.to_decimal_string(9) {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.0.numerator(), self.0.denominator()),
        }
    }
}

impl fmt::Debug for TimeStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}s", self)
    }
}

impl Serialize for TimeSpan {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_duration(*self))
    }
}

impl<'de> Deserialize<'de> for TimeSpan {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_duration(&text).map_err(serde::de::Error::custom)
    }
}

// ── Hyperperiod ─────────────────────────────────────────────────────────────

/// Least common multiple of a set of rational periods: the shortest positive
/// span divisible by every period. Errors on an empty list or a non-positive
/// period.
pub fn hyperperiod(periods: &[TimeSpan]) -> Result<TimeSpan> {
    if periods.is_empty() {
        return Err(Error::EmptyPeriodList);
    }
    let mut acc = periods[0].as_rational();
    if !acc.is_positive() {
        return Err(Error::NonPositivePeriod {
            context: "hyperperiod".to_string(),
        });
    }
    for p in &periods[1..] {
        let r = p.as_rational();
        if !r.is_positive() {
            return Err(Error::NonPositivePeriod {
                context: "hyperperiod".to_string(),
            });
        }
        acc = acc.checked_lcm(&r)?;
    }
    TimeSpan::new(acc)
}
