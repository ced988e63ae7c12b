//! Universal resistive threshold logic cell.
//!
//! A cell is a divider, a threshold device and a number of logical
//! inversions after the comparator decision. The comparator asserts when the
//! divider voltage is strictly above the effective threshold; a tie resolves
//! to the low side.

use std::fmt::Write as _;

use crate::analog::{divider_output, DividerConfig};
use crate::error::{arg_err, domain_err, Error, ParseError, Result};
use crate::profile::{self, parse_key_values, DeviceChoice, Entry, Profile};
use crate::sim::DelayModel;
use crate::threshold::{gate_window, select_m, ThresholdWindow};
use crate::GateKind;

/// Smallest opamp reference offset (V).
pub const MIN_DELTA: f64 = 1e-3;
/// Default opamp reference offset as a fraction of the window width.
pub const DELTA_WINDOW_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdDevice {
    /// Cascade of inverters on separate rails. Stage 1 resolves the divider
    /// node; later stages restore the swing.
    InverterChain {
        stage_thresholds: Vec<f64>,
        stage_vdds: Vec<f64>,
    },
    /// Non-inverting comparator against `v_ref`, followed by
    /// `inverting_stages` inverters.
    Opamp {
        v_ref: f64,
        delta: f64,
        inverting_stages: usize,
    },
}

impl ThresholdDevice {
    pub fn inversions(&self) -> usize {
        match self {
            ThresholdDevice::InverterChain { stage_vdds, .. } => stage_vdds.len(),
            ThresholdDevice::Opamp { inverting_stages, .. } => *inverting_stages,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(count: usize) -> Self {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// A complete, immutable gate cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GateCellConfig {
    pub function: GateKind,
    pub n: usize,
    pub divider: DividerConfig,
    pub device: ThresholdDevice,
    pub effective_threshold: f64,
    pub output_parity: Parity,
    /// Propagation delay (seconds).
    pub delay: f64,
}

/// Inverters in the multi-supply chain for each function.
pub fn chain_length(function: GateKind) -> usize {
    match function {
        GateKind::Nand => 3,
        GateKind::And | GateKind::Or => 2,
        GateKind::Nor | GateKind::Not => 1,
    }
}

fn reference_ratio(n: usize) -> Result<f64> {
    if n == 1 {
        Ok(1.0)
    } else {
        select_m(n)
    }
}

/// Builds a cell for `function` at fan-in `n` under `profile`, with the
/// divider ratio from [`select_m`] (1 for a single input).
pub fn build_cell(function: GateKind, n: usize, profile: &Profile) -> Result<GateCellConfig> {
    if n == 0 {
        return arg_err("cell fan-in must be at least 1");
    }
    build_cell_with_m(function, n, reference_ratio(n)?, profile)
}

/// Like [`build_cell`] with an explicit `m = R_0 / R_i`.
pub fn build_cell_with_m(function: GateKind, n: usize, m: f64, profile: &Profile) -> Result<GateCellConfig> {
    profile.validate()?;
    if n == 0 {
        return arg_err("cell fan-in must be at least 1");
    }
    if function == GateKind::Not && n != 1 {
        return arg_err(format!("NOT cells take exactly one input, got {n}"));
    }
    if !(m > 0.0 && m.is_finite()) {
        return domain_err(format!("m must be positive, got {m}"));
    }
    let divider = DividerConfig {
        n,
        r_input: profile.r_input,
        m,
        v_high: profile.v_high,
        v_low: profile.v_low,
    };
    let window = gate_window(function, n, m, profile.v_high, profile.v_low)?;
    if !window.is_feasible() {
        return Err(Error::Infeasible(format!(
            "{function} window {window} at fan-in {n} is empty"
        )));
    }

    let (device, threshold) = match profile.device {
        DeviceChoice::Inverter => {
            let th = window.midpoint();
            if th < profile.inverter_vth_min || th > profile.inverter_vth_max {
                return Err(Error::Infeasible(format!(
                    "{function} needs an inverter threshold in {window} at fan-in {n}, \
                     outside the reachable [{}, {}] V",
                    profile.inverter_vth_min, profile.inverter_vth_max
                )));
            }
            let len = chain_length(function);
            let scale = profile.v_high / profile.stage_vdds[profile.stage_vdds.len() - 1];
            let rails: Vec<f64> = profile.stage_vdds[profile.stage_vdds.len() - len..]
                .iter()
                .map(|v| v * scale)
                .collect();
            let mut thresholds = vec![th];
            thresholds.extend(rails[..len - 1].iter().map(|r| 0.5 * (profile.v_low + r)));
            (
                ThresholdDevice::InverterChain {
                    stage_thresholds: thresholds,
                    stage_vdds: rails,
                },
                th,
            )
        }
        DeviceChoice::Opamp => {
            let delta = profile
                .delta
                .unwrap_or_else(|| (DELTA_WINDOW_FRACTION * window.width()).max(MIN_DELTA));
            let v_ref = if function.detects_all_high() {
                window.high - delta
            } else {
                window.low + delta
            };
            if !window.contains(v_ref) {
                return Err(Error::Infeasible(format!(
                    "{function} reference {v_ref:.6} V (delta {delta}) falls outside {window} \
                     at fan-in {n}"
                )));
            }
            (
                ThresholdDevice::Opamp {
                    v_ref,
                    delta,
                    inverting_stages: usize::from(function.is_inverting()),
                },
                v_ref,
            )
        }
    };

    Ok(GateCellConfig {
        function,
        n,
        divider,
        output_parity: Parity::of(device.inversions()),
        device,
        effective_threshold: threshold,
        delay: DelayModel::default().rtl_delay(function),
    })
}

/// Divider-node voltages and each threshold stage's output.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalogTrace {
    pub v0: f64,
    pub stage_outputs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMargin {
    pub nm_low: f64,
    pub nm_high: f64,
}

impl GateCellConfig {
    pub fn window(&self) -> Result<ThresholdWindow> {
        gate_window(
            self.function,
            self.n,
            self.divider.m,
            self.divider.v_high,
            self.divider.v_low,
        )
    }

    fn comparator(&self, v0: f64) -> bool {
        v0 > self.effective_threshold
    }

    fn output_from(&self, asserted: bool) -> bool {
        asserted ^ (self.output_parity == Parity::Odd)
    }

    /// Logical output for a binary input vector.
    pub fn evaluate(&self, inputs: &[bool]) -> Result<bool> {
        let v0 = divider_output(&self.divider, inputs)?;
        Ok(self.output_from(self.comparator(v0)))
    }

    /// Logical output for an already computed divider voltage.
    pub fn decide(&self, v0: f64) -> bool {
        self.output_from(self.comparator(v0))
    }

    pub fn analog_trace(&self, inputs: &[bool]) -> Result<AnalogTrace> {
        let v0 = divider_output(&self.divider, inputs)?;
        let v_low = self.divider.v_low;
        let v_high = self.divider.v_high;
        let stage_outputs = match &self.device {
            ThresholdDevice::InverterChain {
                stage_thresholds,
                stage_vdds,
            } => {
                let mut v = v0;
                stage_thresholds
                    .iter()
                    .zip(stage_vdds)
                    .map(|(th, rail)| {
                        v = if v > *th { v_low } else { *rail };
                        v
                    })
                    .collect()
            }
            ThresholdDevice::Opamp { inverting_stages, .. } => {
                let mut level = self.comparator(v0);
                let mut out = vec![if level { v_high } else { v_low }];
                for _ in 0..*inverting_stages {
                    level = !level;
                    out.push(if level { v_high } else { v_low });
                }
                out
            }
        };
        Ok(AnalogTrace { v0, stage_outputs })
    }

    /// Distance from the threshold to the nearest divider voltage on each
    /// side of the decision.
    pub fn noise_margin(&self) -> Result<NoiseMargin> {
        let w = self.window()?;
        Ok(NoiseMargin {
            nm_low: self.effective_threshold - w.low,
            nm_high: w.high - self.effective_threshold,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.divider.validate()?;
        if self.divider.n != self.n {
            return arg_err("divider fan-in differs from cell fan-in");
        }
        if self.function == GateKind::Not && self.n != 1 {
            return arg_err("NOT cells take exactly one input");
        }
        let w = self.window()?;
        if !w.contains(self.effective_threshold) {
            return Err(Error::Infeasible(format!(
                "threshold {} outside {w}",
                self.effective_threshold
            )));
        }
        if self.output_parity != Parity::of(self.device.inversions()) {
            return arg_err("output parity disagrees with the device inversion count");
        }
        if (self.output_parity == Parity::Odd) != self.function.is_inverting() {
            return arg_err(format!(
                "{} parity is inconsistent with {}",
                self.output_parity.as_str(),
                self.function
            ));
        }
        match &self.device {
            ThresholdDevice::InverterChain {
                stage_thresholds,
                stage_vdds,
            } => {
                if !(1..=3).contains(&stage_vdds.len()) || stage_thresholds.len() != stage_vdds.len() {
                    return arg_err("inverter chain needs 1 to 3 stages with one threshold each");
                }
                if stage_thresholds[0] != self.effective_threshold {
                    return arg_err("first stage threshold must equal the effective threshold");
                }
            }
            ThresholdDevice::Opamp { v_ref, delta, .. } => {
                if !(*delta > 0.0) || *v_ref != self.effective_threshold {
                    return arg_err("opamp needs delta > 0 and v_ref equal to the threshold");
                }
                if !(self.divider.v_low < *v_ref && *v_ref < self.divider.v_high) {
                    return arg_err("opamp reference must lie between the logic levels");
                }
            }
        }
        Ok(())
    }

    /// Serializes to the `key = value` profile format.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("function", self.function.name().to_ascii_lowercase());
        kv("n", self.n.to_string());
        kv("m", self.divider.m.to_string());
        kv("r_input", self.divider.r_input.to_string());
        kv("v_high", self.divider.v_high.to_string());
        kv("v_low", self.divider.v_low.to_string());
        match &self.device {
            ThresholdDevice::InverterChain {
                stage_thresholds,
                stage_vdds,
            } => {
                kv("device", "inverter".into());
                kv("stage_thresholds", profile::join_f64(stage_thresholds));
                kv("stage_vdds", profile::join_f64(stage_vdds));
            }
            ThresholdDevice::Opamp {
                v_ref,
                delta,
                inverting_stages,
            } => {
                kv("device", "opamp".into());
                kv("v_ref", v_ref.to_string());
                kv("delta", delta.to_string());
                kv("inverting_stages", inverting_stages.to_string());
            }
        }
        kv("effective_threshold", self.effective_threshold.to_string());
        kv("output_parity", self.output_parity.as_str().into());
        kv("delay", self.delay.to_string());
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let entries = parse_key_values(text)?;
        let get = |key: &str| -> Result<&Entry> {
            entries.iter().find(|e| e.key == key).ok_or_else(|| {
                Error::Parse(ParseError::new(
                    entries.last().map_or(1, |e| e.line),
                    1,
                    format!("missing key `{key}`"),
                ))
            })
        };
        let known = [
            "function",
            "n",
            "m",
            "r_input",
            "v_high",
            "v_low",
            "device",
            "stage_thresholds",
            "stage_vdds",
            "v_ref",
            "delta",
            "inverting_stages",
            "effective_threshold",
            "output_parity",
            "delay",
        ];
        if let Some(e) = entries.iter().find(|e| !known.contains(&e.key.as_str())) {
            return Err(ParseError::new(e.line, 1, format!("unknown cell key `{}`", e.key)).into());
        }
        let f = |key: &str| -> Result<f64> { Ok(profile::parse_f64(get(key)?)?) };
        let function: GateKind = profile::parse_value(get("function")?)?;
        let n: usize = profile::parse_value(get("n")?)?;
        let device: DeviceChoice = profile::parse_value(get("device")?)?;
        let device = match device {
            DeviceChoice::Inverter => ThresholdDevice::InverterChain {
                stage_thresholds: profile::parse_f64_list(get("stage_thresholds")?)?,
                stage_vdds: profile::parse_f64_list(get("stage_vdds")?)?,
            },
            DeviceChoice::Opamp => ThresholdDevice::Opamp {
                v_ref: f("v_ref")?,
                delta: f("delta")?,
                inverting_stages: profile::parse_value(get("inverting_stages")?)?,
            },
        };
        let parity_entry = get("output_parity")?;
        let output_parity = match parity_entry.value.as_str() {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            other => return Err(ParseError::new(parity_entry.line, 1, format!("bad parity `{other}`")).into()),
        };
        let cell = GateCellConfig {
            function,
            n,
            divider: DividerConfig {
                n,
                r_input: f("r_input")?,
                m: f("m")?,
                v_high: f("v_high")?,
                v_low: f("v_low")?,
            },
            device,
            effective_threshold: f("effective_threshold")?,
            output_parity,
            delay: f("delay")?,
        };
        cell.validate()?;
        Ok(cell)
    }
}
