//! Static model of the N-input memristive resistive divider.
//!
//! N input resistors `R_i` feed a summing node that is tied to ground through
//! a reference resistor `R_0`. With equal input resistors and `R_0 = m * R_i`
//! the node voltage depends only on how many inputs are high.

use crate::error::{arg_err, domain_err, Result};

/// Static memristor state. Only the fixed resistance is modeled; the device
/// keeps its programmed doped-width fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorParams {
    /// Fully doped resistance (Ω).
    pub r_on: f64,
    /// Undoped resistance (Ω).
    pub r_off: f64,
    /// Doped width over total width, `W/D`.
    pub w_frac: f64,
}

impl Default for MemristorParams {
    fn default() -> Self {
        Self {
            r_on: 1_000.0,
            r_off: 100_000.0,
            w_frac: 0.0,
        }
    }
}

impl MemristorParams {
    pub fn with_w_frac(w_frac: f64) -> Self {
        Self {
            w_frac,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_on > 0.0 && self.r_on <= self.r_off && self.r_off.is_finite()) {
            return domain_err(format!(
                "memristor needs 0 < r_on <= r_off, got r_on={} r_off={}",
                self.r_on, self.r_off
            ));
        }
        if !(0.0..=1.0).contains(&self.w_frac) {
            return domain_err(format!("w_frac must lie in [0, 1], got {}", self.w_frac));
        }
        Ok(())
    }
}

/// Effective memristance `(W/D) R_on + (1 - W/D) R_off`.
pub fn memristance(p: &MemristorParams) -> Result<f64> {
    p.validate()?;
    Ok(p.w_frac * p.r_on + (1.0 - p.w_frac) * p.r_off)
}

/// Sheet resistor value `rho * L / (x_j * W)`.
pub fn semiconductor_resistance(resistivity: f64, length: f64, junction_depth: f64, width: f64) -> Result<f64> {
    if [resistivity, length, junction_depth, width]
        .iter()
        .any(|v| !(*v > 0.0 && v.is_finite()))
    {
        return domain_err("semiconductor resistor geometry must be positive and finite");
    }
    Ok(resistivity * length / (junction_depth * width))
}

/// Equal-resistor divider used by every RTL gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividerConfig {
    pub n: usize,
    /// Per-input resistance `R_i` (Ω).
    pub r_input: f64,
    /// `R_0 / R_i`.
    pub m: f64,
    pub v_high: f64,
    pub v_low: f64,
}

impl DividerConfig {
    /// Divider with `R_i = R_off = 100 kΩ` and 1 V / 0 V logic levels.
    pub fn new(n: usize, m: f64) -> Self {
        Self {
            n,
            r_input: MemristorParams::default().r_off,
            m,
            v_high: 1.0,
            v_low: 0.0,
        }
    }

    /// Divider whose input resistors are semiconductor resistors of the
    /// given geometry.
    pub fn with_semiconductor_resistor(
        n: usize,
        m: f64,
        resistivity: f64,
        length: f64,
        junction_depth: f64,
        width: f64,
    ) -> Result<Self> {
        let r_input = semiconductor_resistance(resistivity, length, junction_depth, width)?;
        Ok(Self {
            r_input,
            ..Self::new(n, m)
        })
    }

    pub fn r0(&self) -> f64 {
        self.m * self.r_input
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return arg_err("divider fan-in must be at least 1");
        }
        if !(self.r_input > 0.0 && self.r_input.is_finite()) {
            return domain_err(format!("r_input must be positive, got {}", self.r_input));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return domain_err(format!("m must be positive, got {}", self.m));
        }
        if !(self.v_low < self.v_high) {
            return arg_err(format!("v_low ({}) must be below v_high ({})", self.v_low, self.v_high));
        }
        Ok(())
    }

    /// Node voltage with `high` of the `n` inputs at `v_high`.
    ///
    /// Evaluated as `m * sum(V_i) / (n*m + 1)`, algebraically identical to
    /// `sum(V_i) / (1/m + n)`.
    pub fn output_for_count(&self, high: usize) -> f64 {
        let n = self.n as f64;
        let sum = high as f64 * self.v_high + (self.n - high) as f64 * self.v_low;
        self.m * sum / (n * self.m + 1.0)
    }

    fn check_levels(&self, levels: &[bool]) -> Result<()> {
        self.validate()?;
        if levels.len() != self.n {
            return arg_err(format!("expected {} input levels, got {}", self.n, levels.len()));
        }
        Ok(())
    }

    fn level_voltage(&self, bit: bool) -> f64 {
        if bit {
            self.v_high
        } else {
            self.v_low
        }
    }
}

/// General divider output `sum(V_i/R_i) / (1/R_0 + sum(1/R_i))`.
pub fn divider_output_general(resistances: &[f64], r0: f64, voltages: &[f64]) -> Result<f64> {
    if resistances.is_empty() {
        return arg_err("divider needs at least one input");
    }
    if resistances.len() != voltages.len() {
        return arg_err(format!(
            "{} resistances but {} voltages",
            resistances.len(),
            voltages.len()
        ));
    }
    if let Some(r) = resistances.iter().chain(std::iter::once(&r0)).find(|r| !(**r > 0.0)) {
        return domain_err(format!("resistances must be positive, got {r}"));
    }
    let (num, den) = resistances
        .iter()
        .zip(voltages)
        .fold((0.0, 1.0 / r0), |(num, den), (r, v)| (num + v / r, den + 1.0 / r));
    Ok(num / den)
}

/// Equal-resistor divider output for a binary input pattern.
pub fn divider_output(c: &DividerConfig, levels: &[bool]) -> Result<f64> {
    c.check_levels(levels)?;
    let high = levels.iter().filter(|&&b| b).count();
    Ok(c.output_for_count(high))
}

/// How reverse-biased memristor branches conduct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeakageMode {
    /// Linear resistors in both directions.
    #[default]
    Ohmic,
    /// Reverse-biased branches are open circuits.
    IdealBlocking,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DividerSolution {
    pub v_out: f64,
    /// Current into each input resistor, positive from input to node.
    pub branch_currents: Vec<f64>,
    /// Branches whose input sits below the node voltage. Under
    /// [`LeakageMode::IdealBlocking`] these carry zero current.
    pub reverse_biased: Vec<bool>,
    pub total_current: f64,
    /// Current through `R_0` to ground.
    pub reference_current: f64,
}

/// Solves the divider node and every branch current.
pub fn branch_currents(c: &DividerConfig, levels: &[bool], mode: LeakageMode) -> Result<DividerSolution> {
    c.check_levels(levels)?;
    let r = c.r_input;
    let r0 = c.r0();
    let volts: Vec<f64> = levels.iter().map(|&b| c.level_voltage(b)).collect();

    let mut conducting = vec![true; c.n];
    let v_out = loop {
        let (num, den) = volts
            .iter()
            .zip(&conducting)
            .filter(|(_, on)| **on)
            .fold((0.0, 1.0 / r0), |(num, den), (v, _)| (num + v / r, den + 1.0 / r));
        let v0 = num / den;
        if mode == LeakageMode::Ohmic {
            break v0;
        }
        let mut changed = false;
        for (on, v) in conducting.iter_mut().zip(&volts) {
            if *on && *v < v0 {
                *on = false;
                changed = true;
            }
        }
        if !changed {
            break v0;
        }
    };

    let reverse_biased: Vec<bool> = volts.iter().map(|v| *v < v_out).collect();
    let branch_currents: Vec<f64> = volts
        .iter()
        .zip(&conducting)
        .map(|(v, on)| if *on { (v - v_out) / r } else { 0.0 })
        .collect();
    let total_current = branch_currents.iter().sum();
    Ok(DividerSolution {
        v_out,
        branch_currents,
        reverse_biased,
        total_current,
        reference_current: v_out / r0,
    })
}
