//! Static power estimates for RTL and CMOS netlists.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{arg_err, Result};
use crate::netlist::{cmos_transistors, Netlist, Technology};
use crate::sim::evaluate_all_nets;

/// Calibrated power model.
///
/// RTL gates dissipate their divider conduction power plus a static opamp
/// term; CMOS gates dissipate a leakage term per inverter equivalent (two
/// transistors). The opamp term is fitted so a 10-input NOR with all inputs
/// high draws 10.6 µW; the leakage term so its CMOS counterpart built from
/// 5-input gates draws 0.009 nW. Only that fit and comparison directions
/// are meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    pub v_high: f64,
    pub v_low: f64,
    pub r_input: f64,
    /// `R_0 / R_i` of every divider.
    pub m: f64,
    /// Watts per opamp.
    pub opamp_static: f64,
    /// Watts per CMOS inverter equivalent.
    pub inverter_leakage: f64,
}

impl Default for PowerModel {
    fn default() -> Self {
        // NOR10 with all inputs high at m = 1, R = 100 kΩ conducts
        // 10 * (1/11 V) / 100 kΩ = 100/11 µW through its divider.
        let divider_nor10 = 100.0 / 11.0 * 1e-6;
        Self {
            v_high: 1.0,
            v_low: 0.0,
            r_input: 100e3,
            m: 1.0,
            opamp_static: 10.6e-6 - divider_nor10,
            // OR5 + OR5 + NOR2: 28 transistors, 14 inverter equivalents.
            inverter_leakage: 0.009e-9 / 14.0,
        }
    }
}

impl PowerModel {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x >= 0.0 && x.is_finite();
        if !(ok(self.opamp_static) && ok(self.inverter_leakage)) {
            return arg_err("power terms must be nonnegative");
        }
        if !(self.r_input > 0.0 && self.m > 0.0 && self.r_input.is_finite() && self.m.is_finite()) {
            return arg_err("r_input and m must be positive");
        }
        if !(self.v_low <= self.v_high) {
            return arg_err("v_low must not exceed v_high");
        }
        Ok(())
    }

    /// Power drawn from the inputs of an `n`-input divider with `high`
    /// inputs at `v_high`: `sum (V_i - V_0)^2 / R + V_0^2 / (m R)`.
    pub fn divider_power(&self, n: usize, high: usize) -> f64 {
        let (vh, vl, r, m) = (self.v_high, self.v_low, self.r_input, self.m);
        let low = (n - high) as f64;
        let high = high as f64;
        let v0 = m * (high * vh + low * vl) / (n as f64 * m + 1.0);
        (high * (vh - v0).powi(2) + low * (vl - v0).powi(2)) / r + v0 * v0 / (m * r)
    }
}

/// Input statistics for [`power_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activity {
    /// Every gate input high.
    AllHigh,
    /// Every gate input low.
    AllLow,
    /// Average over random primary-input vectors, each input high with
    /// probability `p`, propagated through the netlist.
    Random { p: f64, samples: usize, seed: u64 },
}

/// Average static power of a netlist in watts.
pub fn power_estimate(n: &Netlist, model: &PowerModel, activity: &Activity) -> Result<f64> {
    model.validate()?;
    match n.technology() {
        Technology::Cmos => Ok(n
            .gates()
            .iter()
            .map(|g| cmos_transistors(g.kind, g.fan_in()) as f64 / 2.0 * model.inverter_leakage)
            .sum()),
        Technology::Rtl => {
            let opamps = n.gates().len() as f64 * model.opamp_static;
            let dividers = match *activity {
                Activity::AllHigh => n
                    .gates()
                    .iter()
                    .map(|g| model.divider_power(g.fan_in(), g.fan_in()))
                    .sum(),
                Activity::AllLow => n.gates().iter().map(|g| model.divider_power(g.fan_in(), 0)).sum(),
                Activity::Random { p, samples, seed } => {
                    if !(0.0..=1.0).contains(&p) || samples == 0 {
                        return arg_err("random activity needs p in [0, 1] and at least one sample");
                    }
                    let g = n.graph();
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut total = 0.0;
                    for _ in 0..samples {
                        let inputs: Vec<bool> = (0..n.inputs().len()).map(|_| rng.random_bool(p)).collect();
                        let levels = evaluate_all_nets(n, &inputs);
                        total += g
                            .gate_inputs
                            .iter()
                            .map(|ins| {
                                let high = ins.iter().filter(|&&x| levels[x]).count();
                                model.divider_power(ins.len(), high)
                            })
                            .sum::<f64>();
                    }
                    total / samples as f64
                }
            };
            Ok(opamps + dividers)
        }
    }
}
