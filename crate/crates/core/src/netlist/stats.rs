use std::collections::BTreeMap;
use std::ops::Add;

use super::{Netlist, Technology};
use crate::GateKind;

/// Per-component area table (µm²).
///
/// The defaults are calibrated so that the 16-bit ripple adder measures
/// 4.557 µm² in CMOS and 8.081 µm² in RTL; only comparison directions are
/// meaningful beyond that fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaModel {
    pub transistor_um2: f64,
    pub memristor_um2: f64,
    /// Transistors in one comparator opamp.
    pub opamp_transistors: usize,
}

impl AreaModel {
    /// Transistors of one RTL threshold device: opamp plus output inverter.
    pub fn rtl_device_transistors(&self) -> usize {
        self.opamp_transistors + 2
    }
}

impl Default for AreaModel {
    fn default() -> Self {
        // CMOS adder16: 1184 transistors. RTL adder16: 192 cells of 10
        // transistors each and 640 memristors.
        let transistor_um2 = 4.557 / 1184.0;
        Self {
            transistor_um2,
            memristor_um2: (8.081 - 1920.0 * transistor_um2) / 640.0,
            opamp_transistors: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComponentStats {
    /// Gate count per `(kind, fan_in)`.
    pub gates: BTreeMap<(GateKind, usize), usize>,
    pub memristor_count: usize,
    pub transistor_count: usize,
    pub opamp_count: usize,
    pub area_um2: f64,
}

impl ComponentStats {
    pub fn gate_count(&self) -> usize {
        self.gates.values().sum()
    }
}

impl Add for ComponentStats {
    type Output = ComponentStats;

    fn add(mut self, rhs: ComponentStats) -> ComponentStats {
        for (k, v) in rhs.gates {
            *self.gates.entry(k).or_insert(0) += v;
        }
        self.memristor_count += rhs.memristor_count;
        self.transistor_count += rhs.transistor_count;
        self.opamp_count += rhs.opamp_count;
        self.area_um2 += rhs.area_um2;
        self
    }
}

/// Static CMOS transistor count of one gate.
pub fn cmos_transistors(kind: GateKind, fan_in: usize) -> usize {
    match kind {
        GateKind::Nand | GateKind::Nor => 2 * fan_in,
        GateKind::And | GateKind::Or => 2 * fan_in + 2,
        GateKind::Not => 2,
    }
}

/// Component counts and area. RTL gates use `fan_in + 1` memristors and an
/// opamp with one output inverter; CMOS gates use static CMOS counts.
pub fn component_stats(n: &Netlist, area: &AreaModel) -> ComponentStats {
    let mut s = ComponentStats {
        gates: n.inventory(),
        ..ComponentStats::default()
    };
    for g in n.gates() {
        match n.technology() {
            Technology::Rtl => {
                s.memristor_count += g.fan_in() + 1;
                s.opamp_count += 1;
                s.transistor_count += area.rtl_device_transistors();
            }
            Technology::Cmos => s.transistor_count += cmos_transistors(g.kind, g.fan_in()),
        }
    }
    s.area_um2 = s.transistor_count as f64 * area.transistor_um2 + s.memristor_count as f64 * area.memristor_um2;
    s
}
