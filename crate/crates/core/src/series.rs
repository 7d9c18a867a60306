use std::fmt::Write as _;
use std::ops::Index;

use crate::error::{Error, Result};

/// An ordered sequence of finite observations starting at a block/time index.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    start_index: u64,
    label: String,
}

impl TimeSeries {
    /// Builds a series, rejecting NaN and infinite values.
    pub fn new(label: impl Into<String>, start_index: u64, values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            values,
            start_index,
            label: label.into(),
        })
    }

    pub fn from_values(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        Self::new(label, 0, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn start_index(&self) -> u64 {
        self.start_index
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn require_len(&self, needed: usize) -> Result<()> {
        if self.values.len() < needed {
            return Err(Error::InsufficientData {
                needed,
                got: self.values.len(),
            });
        }
        Ok(())
    }

    /// Serializes as `index,value` CSV with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.values.len() + 1));
        out.push_str("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.start_index + i as u64, format_real(*v));
        }
        out
    }

    /// Parses the `index,value` CSV form. Indices must be consecutive.
    pub fn from_csv(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "index,value" => {}
            _ => return Err(Error::Config("expected CSV header `index,value`".into())),
        }
        let mut start = None;
        let mut values = Vec::new();
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::Config(format!("malformed CSV row at line {}", lineno + 1));
            let (idx, val) = line.split_once(',').ok_or_else(bad)?;
            let idx: u64 = idx.trim().parse().map_err(|_| bad())?;
            let val: f64 = val.trim().parse().map_err(|_| bad())?;
            let first = *start.get_or_insert(idx);
            if idx != first + values.len() as u64 {
                return Err(Error::Config(format!(
                    "non-consecutive index at line {}",
                    lineno + 1
                )));
            }
            values.push(val);
        }
        Self::new(label, start.unwrap_or(0), values)
    }
}

impl Index<usize> for TimeSeries {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Formats a real with 17 significant digits, enough to round-trip any f64.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}
