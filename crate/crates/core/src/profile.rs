//! Device parameter profiles in a flat `key = value` text format.
//!
//! ```text
//! # comment
//! name = tsmc025-like
//! device = opamp
//! v_high = 1.0
//! stage_vdds = 0.25, 0.5, 1.0
//! ```
//!
//! Unknown or repeated keys are rejected. Missing keys keep their defaults.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::threshold::{InverterParams, MosfetBiasParams};

/// Threshold device family used when building cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeviceChoice {
    #[default]
    Inverter,
    Opamp,
}

impl DeviceChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            DeviceChoice::Inverter => "inverter",
            DeviceChoice::Opamp => "opamp",
        }
    }
}

impl FromStr for DeviceChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "inverter" => Ok(DeviceChoice::Inverter),
            "opamp" => Ok(DeviceChoice::Opamp),
            _ => Err(format!("unknown device `{s}` (expected inverter or opamp)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub name: String,
    pub v_high: f64,
    pub v_low: f64,
    /// Input resistance of every divider branch (Ω).
    pub r_input: f64,
    pub device: DeviceChoice,
    /// Opamp reference offset; `None` picks a quarter of the window width,
    /// at least 1 mV.
    pub delta: Option<f64>,
    /// Rails of the multi-supply inverter chain, first stage first. A chain
    /// of length L uses the last L rails.
    pub stage_vdds: Vec<f64>,
    /// Reachable first-stage inverter thresholds.
    pub inverter_vth_min: f64,
    pub inverter_vth_max: f64,
    pub inverter: InverterParams,
    pub bias: MosfetBiasParams,
}

impl Default for Profile {
    /// The `tsmc025-like` profile.
    fn default() -> Self {
        Self {
            name: "tsmc025-like".to_string(),
            v_high: 1.0,
            v_low: 0.0,
            r_input: 100_000.0,
            device: DeviceChoice::Inverter,
            delta: None,
            stage_vdds: vec![0.25, 0.5, 1.0],
            inverter_vth_min: 0.001,
            inverter_vth_max: 0.999,
            inverter: InverterParams::default(),
            bias: MosfetBiasParams::default(),
        }
    }
}

/// One `key = value` statement with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Splits `key = value` text into entries, rejecting duplicate keys.
pub fn parse_key_values(text: &str) -> Result<Vec<Entry>, ParseError> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(ParseError::new(line, col, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        let value = content[eq + 1..].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ParseError::new(line, 1, format!("invalid key `{key}`")));
        }
        if let Some(prev) = seen.insert(key.to_string(), line) {
            return Err(ParseError::new(
                line,
                1,
                format!("duplicate key `{key}` (first set on line {prev})"),
            ));
        }
        out.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    Ok(out)
}

pub(crate) fn parse_value<T: FromStr>(e: &Entry) -> Result<T, ParseError>
where
    T::Err: std::fmt::Display,
{
    e.value
        .parse::<T>()
        .map_err(|err| ParseError::new(e.line, 1, format!("bad value for `{}`: {err}", e.key)))
}

pub(crate) fn parse_f64(e: &Entry) -> Result<f64, ParseError> {
    let v: f64 = parse_value(e)?;
    if !v.is_finite() {
        return Err(ParseError::new(e.line, 1, format!("`{}` must be finite", e.key)));
    }
    Ok(v)
}

pub(crate) fn parse_f64_list(e: &Entry) -> Result<Vec<f64>, ParseError> {
    e.value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError::new(e.line, 1, format!("bad number `{}` in `{}`", s.trim(), e.key)))
        })
        .collect()
}

pub(crate) fn join_f64(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

impl Profile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Profile::default();
        for e in parse_key_values(text)? {
            p.apply(&e)?;
        }
        p.validate()?;
        Ok(p)
    }

    fn apply(&mut self, e: &Entry) -> Result<(), ParseError> {
        let f = || parse_f64(e);
        match e.key.as_str() {
            "name" => self.name = e.value.clone(),
            "v_high" => self.v_high = f()?,
            "v_low" => self.v_low = f()?,
            "r_input" => self.r_input = f()?,
            "device" => self.device = parse_value(e)?,
            "delta" => {
                self.delta = if e.value == "auto" { None } else { Some(f()?) };
            }
            "stage_vdds" => self.stage_vdds = parse_f64_list(e)?,
            "inverter_vth_min" => self.inverter_vth_min = f()?,
            "inverter_vth_max" => self.inverter_vth_max = f()?,
            "v_tn" => self.inverter.v_tn = f()?,
            "v_tp" => self.inverter.v_tp = f()?,
            "mu_p_w_p" => self.inverter.mu_p_w_p = f()?,
            "mu_n_w_n" => self.inverter.mu_n_w_n = f()?,
            "v_dd" => self.inverter.v_dd = f()?,
            "v_tn0" => self.bias.v_tn0 = f()?,
            "v_bs" => self.bias.v_bs = f()?,
            "v_bm" => self.bias.v_bm = f()?,
            "v_bx" => self.bias.v_bx = f()?,
            "n_a" => self.bias.n_a = f()?,
            "n_i" => self.bias.n_i = f()?,
            "temp" => self.bias.temp = f()?,
            "gamma1" => self.bias.gamma1 = f()?,
            "gamma2" => self.bias.gamma2 = f()?,
            "c_narrow" => self.bias.c_narrow = f()?,
            other => return Err(ParseError::new(e.line, 1, format!("unknown profile key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(msg));
        if !(self.v_low < self.v_high) {
            return bad(format!("v_low {} must be below v_high {}", self.v_low, self.v_high));
        }
        if !(self.r_input > 0.0) {
            return bad(format!("r_input must be positive, got {}", self.r_input));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0) {
                return bad(format!("delta must be positive, got {d}"));
            }
        }
        if self.stage_vdds.len() < 3 || self.stage_vdds.iter().any(|v| !(*v > 0.0)) {
            return bad("stage_vdds needs three positive rails".to_string());
        }
        if !(self.inverter_vth_min < self.inverter_vth_max) {
            return bad("inverter_vth_min must be below inverter_vth_max".to_string());
        }
        if !(self.bias.n_a > 0.0 && self.bias.n_i > 0.0 && self.bias.temp > 0.0) {
            return bad("n_a, n_i and temp must be positive".to_string());
        }
        Ok(())
    }

    pub fn emit(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("name", self.name.clone());
        kv("v_high", self.v_high.to_string());
        kv("v_low", self.v_low.to_string());
        kv("r_input", self.r_input.to_string());
        kv("device", self.device.as_str().to_string());
        kv(
            "delta",
            self.delta.map_or_else(|| "auto".to_string(), |d| d.to_string()),
        );
        kv("stage_vdds", join_f64(&self.stage_vdds));
        kv("inverter_vth_min", self.inverter_vth_min.to_string());
        kv("inverter_vth_max", self.inverter_vth_max.to_string());
        let i = &self.inverter;
        for (k, v) in [
            ("v_tn", i.v_tn),
            ("v_tp", i.v_tp),
            ("mu_p_w_p", i.mu_p_w_p),
            ("mu_n_w_n", i.mu_n_w_n),
            ("v_dd", i.v_dd),
        ] {
            kv(k, v.to_string());
        }
        let b = &self.bias;
        for (k, v) in [
            ("v_tn0", b.v_tn0),
            ("v_bs", b.v_bs),
            ("v_bm", b.v_bm),
            ("v_bx", b.v_bx),
            ("n_a", b.n_a),
            ("n_i", b.n_i),
            ("temp", b.temp),
            ("gamma1", b.gamma1),
            ("gamma2", b.gamma2),
            ("c_narrow", b.c_narrow),
        ] {
            kv(k, v.to_string());
        }
        s
    }

    pub fn with_device(mut self, device: DeviceChoice) -> Self {
        self.device = device;
        self
    }
}
