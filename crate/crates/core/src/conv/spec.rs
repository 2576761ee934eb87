use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported encoder memory. Forward/backward state sets are `u64` bitmasks.
pub const MAX_MEMORY: usize = 6;

/// A rate-1/2 recursive systematic convolutional code `(1, ff/fb)`.
///
/// Tap vectors are indexed by delay: `feedforward[i]` is the coefficient of `D^i`.
/// The octal label reads the taps most-significant-bit first, so `(1,15/13)`
/// has feedforward `1 + D + D^3` and feedback `1 + D^2 + D^3`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConvCodeSpec {
    feedforward: Vec<bool>,
    feedback: Vec<bool>,
}

impl ConvCodeSpec {
    pub fn new(feedforward: Vec<bool>, feedback: Vec<bool>) -> Result<Self> {
        if feedforward.len() != feedback.len() {
            return Err(Error::InvalidSpec(format!(
                "tap vectors differ in length ({} vs {})",
                feedforward.len(),
                feedback.len()
            )));
        }
        let memory = feedback.len().saturating_sub(1);
        if memory == 0 || memory > MAX_MEMORY {
            return Err(Error::InvalidSpec(format!(
                "memory must be in 1..={MAX_MEMORY}, got {memory}"
            )));
        }
        if !feedback[0] {
            return Err(Error::InvalidSpec("feedback tap 0 must be set (recursive code)".into()));
        }
        Ok(Self { feedforward, feedback })
    }

    /// Builds a code from octal generator values, e.g. `from_octal(0o5, 0o7)`.
    pub fn from_octal(feedforward: u32, feedback: u32) -> Result<Self> {
        let bits = |v: u32| (u32::BITS - v.leading_zeros()) as usize;
        let width = bits(feedforward).max(bits(feedback));
        if width < 2 {
            return Err(Error::InvalidSpec("generators need memory >= 1".into()));
        }
        if bits(feedback) != width {
            return Err(Error::InvalidSpec(format!(
                "feedback {feedback:o} has no D^0 tap at width {width}"
            )));
        }
        let taps = |v: u32| (0..width).map(|i| (v >> (width - 1 - i)) & 1 == 1).collect();
        Self::new(taps(feedforward), taps(feedback))
    }

    /// 2-state `(1,1/3)`.
    pub fn two_state() -> Self {
        Self::from_octal(0o1, 0o3).expect("valid")
    }

    /// 4-state `(1,5/7)`.
    pub fn four_state() -> Self {
        Self::from_octal(0o5, 0o7).expect("valid")
    }

    /// 8-state `(1,15/13)`.
    pub fn eight_state() -> Self {
        Self::from_octal(0o15, 0o13).expect("valid")
    }

    pub fn memory(&self) -> usize {
        self.feedback.len() - 1
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory()
    }

    pub fn feedforward_taps(&self) -> &[bool] {
        &self.feedforward
    }

    pub fn feedback_taps(&self) -> &[bool] {
        &self.feedback
    }

    fn octal_value(taps: &[bool]) -> u32 {
        taps.iter().fold(0, |acc, &t| (acc << 1) | t as u32)
    }

    pub fn feedforward_octal(&self) -> u32 {
        Self::octal_value(&self.feedforward)
    }

    pub fn feedback_octal(&self) -> u32 {
        Self::octal_value(&self.feedback)
    }

    /// Display label, e.g. `(1,5/7)`.
    pub fn octal_label(&self) -> String {
        format!("(1,{:o}/{:o})", self.feedforward_octal(), self.feedback_octal())
    }
}

impl fmt::Display for ConvCodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.octal_label())
    }
}

impl fmt::Debug for ConvCodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvCodeSpec{}", self.octal_label())
    }
}

impl FromStr for ConvCodeSpec {
    type Err = Error;

    /// Accepts `(1,5/7)`, `1,5/7` or `5/7`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse code label {s:?}"));
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let gens = match body.split_once(',') {
            Some((sys, rest)) => {
                if sys.trim() != "1" {
                    return Err(Error::InvalidSpec(format!("systematic generator must be 1 in {s:?}")));
                }
                rest
            }
            None => body,
        };
        let (ff, fb) = gens.split_once('/').ok_or_else(bad)?;
        let ff = u32::from_str_radix(ff.trim(), 8).map_err(|_| bad())?;
        let fb = u32::from_str_radix(fb.trim(), 8).map_err(|_| bad())?;
        Self::from_octal(ff, fb)
    }
}

impl Serialize for ConvCodeSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.octal_label())
    }
}

impl<'de> Deserialize<'de> for ConvCodeSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
